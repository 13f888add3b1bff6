// assembly_internal.hpp — prefix weight table shared between the curve
// assembler and the lambda sweep. Library-internal.

#pragma once

#include "itqde/assembly.hpp"

namespace itqde::detail {

struct WeightTable {
    std::vector<std::vector<double>> rows;
};

WeightTable build_weight_table(std::int64_t m, WeightScheme scheme,
                               std::size_t byte_cap);

ImaginaryTimeCurve assemble_with_table(const Trajectory& traj, std::int64_t obs_index,
                                       double lambda, WeightScheme scheme,
                                       double partition_floor,
                                       const WeightTable* table);

}  // namespace itqde::detail
