#include "itqde/trajectory_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "itqde/errors.hpp"

namespace itqde {

namespace {

using nlohmann::json;

json complex_to_json(const std::complex<double>& z) {
    return json::array({z.real(), z.imag()});
}

std::complex<double> complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw validation_error("expected [re, im] pair in trajectory file");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string trajectory_to_json(const Trajectory& traj) {
    validate(traj);
    json root;
    root["dtau"] = traj.dtau;
    root["m"] = traj.m;
    if (traj.initial_condition == InitialCondition::maximally_mixed) {
        root["initial_condition"] = "maximally_mixed";
    } else {
        json amps = json::array();
        for (Eigen::Index i = 0; i < traj.initial_amplitudes.size(); ++i)
            amps.push_back(complex_to_json(traj.initial_amplitudes[i]));
        root["initial_condition"] = json{{"pure", std::move(amps)}};
    }
    root["labels"] = traj.observable_labels;
    json records = json::array();
    for (const auto& rec : traj.records) {
        json r;
        r["j"] = rec.j;
        r["overlap"] = complex_to_json(rec.state_overlap);
        json obs;
        for (size_t a = 0; a < traj.observable_labels.size(); ++a)
            obs[traj.observable_labels[a]] = complex_to_json(rec.observable_overlaps[a]);
        r["obs"] = std::move(obs);
        records.push_back(std::move(r));
    }
    root["records"] = std::move(records);
    return root.dump(2) + "\n";
}

Trajectory trajectory_from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw validation_error(std::string("trajectory file is not valid JSON: ") + e.what());
    }
    Trajectory traj;
    try {
        traj.dtau = root.at("dtau").get<double>();
        traj.m = root.at("m").get<std::int64_t>();
        const auto& init = root.at("initial_condition");
        if (init.is_string() && init.get<std::string>() == "maximally_mixed") {
            traj.initial_condition = InitialCondition::maximally_mixed;
        } else if (init.is_object() && init.contains("pure")) {
            traj.initial_condition = InitialCondition::pure;
            const auto& amps = init.at("pure");
            traj.initial_amplitudes.resize(static_cast<Eigen::Index>(amps.size()));
            for (size_t i = 0; i < amps.size(); ++i)
                traj.initial_amplitudes[static_cast<Eigen::Index>(i)] =
                    complex_from_json(amps[i]);
        } else {
            throw validation_error("unknown initial_condition in trajectory file");
        }
        traj.observable_labels = root.at("labels").get<std::vector<std::string>>();
        for (const auto& r : root.at("records")) {
            OverlapRecord rec;
            rec.j = r.at("j").get<std::int64_t>();
            rec.state_overlap = complex_from_json(r.at("overlap"));
            const auto& obs = r.at("obs");
            for (const auto& label : traj.observable_labels)
                rec.observable_overlaps.push_back(complex_from_json(obs.at(label)));
            traj.records.push_back(std::move(rec));
        }
    } catch (const json::exception& e) {
        throw validation_error(std::string("malformed trajectory file: ") + e.what());
    }
    validate(traj);
    return traj;
}

std::string errors_to_json(const Trajectory& traj, const TrajectoryErrors& errors) {
    if (errors.state_se.size() != traj.records.size() ||
        errors.observable_se.size() != traj.records.size())
        throw validation_error("error table does not match trajectory shape");
    json root;
    for (size_t r = 0; r < traj.records.size(); ++r) {
        json entry;
        entry["overlap_se"] = complex_to_json(errors.state_se[r]);
        json obs;
        for (size_t a = 0; a < traj.observable_labels.size(); ++a)
            obs[traj.observable_labels[a]] = complex_to_json(errors.observable_se[r][a]);
        entry["obs_se"] = std::move(obs);
        root[std::to_string(traj.records[r].j)] = std::move(entry);
    }
    return root.dump(2) + "\n";
}

TrajectoryErrors errors_from_json(const Trajectory& traj, const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw validation_error(std::string("errors file is not valid JSON: ") + e.what());
    }
    TrajectoryErrors errors;
    try {
        for (const auto& rec : traj.records) {
            const auto& entry = root.at(std::to_string(rec.j));
            errors.state_se.push_back(complex_from_json(entry.at("overlap_se")));
            std::vector<std::complex<double>> obs;
            for (const auto& label : traj.observable_labels)
                obs.push_back(complex_from_json(entry.at("obs_se").at(label)));
            errors.observable_se.push_back(std::move(obs));
        }
    } catch (const json::exception& e) {
        throw validation_error(std::string("malformed errors file: ") + e.what());
    }
    return errors;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace itqde
