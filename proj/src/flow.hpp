#pragma once

#include <cstdint>
#include <vector>

namespace spinelab::detail {

/// Maximum-weight closure: pick items (profit each) that pull in the
/// resources they need (cost each). Solved as a min s-t cut.
struct ClosureProblem {
    std::vector<std::int64_t> item_profit;
    std::vector<std::vector<int>> item_needs;
    std::vector<std::int64_t> resource_cost;
    /// Items that must be selected.
    std::vector<int> forced;
};

struct ClosureSolution {
    /// Value of the selection: profits minus costs of needed resources.
    std::int64_t value = 0;
    std::vector<int> items;
    std::vector<int> resources;
};

/// Returns the inclusion-minimal optimal closure (source side of the min cut).
ClosureSolution max_closure(const ClosureProblem& p);

} // namespace spinelab::detail
