#pragma once

#include "cantor/rational.hpp"
#include "cantor/rectify.hpp"

#include <map>
#include <vector>

namespace cantor {

struct Rates {
    std::vector<Rational> lambda;  // lambda[l], needs |V_{l+1}|
    std::vector<Rational> eps;     // eps[0] = 1
};

// sizes[l] = (block count, edge count) of level l; one more level than rates.
Rates compute_rates(const std::vector<std::pair<int, int>>& sizes);

// Per-level acyclic graph: edges into markers removed, attracted-circuit
// blocks removed together with their incident edges.
struct ContractionGraph {
    std::vector<std::vector<int>> out;      // over all blocks; removed blocks keep empty rows
    std::vector<std::vector<int>> in;
    std::vector<char> removed;              // attracted-circuit blocks
    std::vector<int> circuit_orbit;         // orbit index for removed blocks, -1 otherwise
};

ContractionGraph acyclic_A(Covering& c, const MarkedLevel& level);

struct IntervalAssignment {
    int nlevels = 0;
    Rates rates;
    std::vector<std::vector<Interval>> iv;  // iv[l][block]
    // containers[l] exists for l >= 1: parent block at l-1 -> intervals k=0..omega
    std::vector<std::map<int, std::vector<Interval>>> containers;
};

// Full exact assignment for levels 0..nlevels-1 of mc; mc must have at least
// nlevels+1 levels (the shrink rate of level l reads the size of level l+1).
IntervalAssignment assign_intervals(Covering& c, const MarkedCovering& mc, int nlevels);

// Enclosure of psi along a bonding chain of blocks (chain[l] = block at level l).
Interval psi_enclosure(Covering& c, const MarkedCovering& mc, const IntervalAssignment& a,
                       const std::vector<int>& chain);

}  // namespace cantor
