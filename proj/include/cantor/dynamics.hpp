#pragma once

#include "cantor/covering.hpp"
#include "cantor/partition.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cantor {

// --- Periodicity analysis ------------------------------------------------

struct PeriodicCandidate {
    int period = 0;
    int first_lvl = 0;                       // chain covers levels first_lvl..last
    std::vector<std::vector<int>> chain;     // per level, cell sequence (standard order)
};

std::vector<PeriodicCandidate> periodic_candidates(Covering& c, int max_period, int depth_lvl);

struct AperiodicityReport {
    std::vector<int> nu;     // nu[l] = min circuit length at level l
    std::string verdict;     // "aperiodic-up-to-depth-N" | "has-periodic-witness" | "inconclusive"
    std::vector<PeriodicCandidate> witnesses;
    std::string to_string() const;
};

AperiodicityReport aperiodicity_certificate(Covering& c, int depth_lvl, int bound);

// --- Attraction ----------------------------------------------------------

struct AttractionReport {
    bool pass = false;
    bool inconclusive = false;  // budget ran out before depth D
    int checked_depths = 0;
    std::string detail;
};

AttractionReport attraction_certificate(Covering& c, const OrbitInfo& o, int depth_budget);

// Tracks the orbit circuit down to the given level (unique lift).
std::vector<int> track_circuit(Covering& c, const OrbitInfo& o, int lvl);

// --- Supercyclical structure ----------------------------------------------

struct SupercyclicalLevel {
    Partition part;
    int tau = 1;  // attained order: every declared orbit with period <= tau has an attracted set
    // Per covering orbit index: blocks of the maximal attracted set (empty when period > tau).
    std::vector<std::vector<int>> attracted;

    std::vector<char> attracted_mask(int nblocks) const;
};

// Computes maximal attracted block sets for every declared orbit with
// period <= tau. Throws refusal_error("not purely attracting...") when an
// orbit in scope admits none.
SupercyclicalLevel supercyclical_structure(Covering& c, const Partition& p, int tau);

// Refines the supercyclical part with the basins of declared orbits with
// period in (s.tau, target_tau] and recomputes the structure.
SupercyclicalLevel raise_order(Covering& c, const SupercyclicalLevel& s, int target_tau);

// Max circuit length within the supercyclical part (0 when circuit-free).
int eta(Covering& c, const SupercyclicalLevel& s);

// Backward-preimage repartition of each attracted set: one circuit plus
// in-trees, no divergent attracted vertex. Supercyclical blocks unchanged.
SupercyclicalLevel kappa(Covering& c, const SupercyclicalLevel& s, int n);

struct DepthData {
    std::vector<int> delta;              // per block; -1 on supercyclical blocks
    std::vector<int> omega;              // per orbit index; -1 when not in scope
};

// Path lengths to the attracted circuits; requires the unique-path property.
DepthData delta_omega(Covering& c, const SupercyclicalLevel& s);

}  // namespace cantor
