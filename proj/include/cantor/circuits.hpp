#pragma once

#include <vector>

namespace cantor {

// Cycle as the vertex sequence rotated so the smallest vertex comes first.
using Cycle = std::vector<int>;

// Minimal length of a cycle (directed girth); 0 when the graph is acyclic.
int min_cycle_length(const std::vector<std::vector<int>>& out);

// Inclusion-minimal elementary cycles, deterministically ordered.
// max_len bounds the cycle length (-1: unbounded). Throws invariant_error
// when the enumeration exceeds the safety cap.
std::vector<Cycle> circuits(const std::vector<std::vector<int>>& out, int max_len = -1,
                            std::size_t cap = 2000000);

bool is_rotation(const std::vector<int>& a, const std::vector<int>& b);

// Topological order; empty optional-like flag via ok=false when cyclic.
struct TopoResult {
    bool ok = false;
    std::vector<int> order;
};
TopoResult topo_sort(const std::vector<std::vector<int>>& out);

}  // namespace cantor
