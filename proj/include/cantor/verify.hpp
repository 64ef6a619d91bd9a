#pragma once

#include "cantor/embed.hpp"
#include "cantor/rectify.hpp"

#include <string>
#include <vector>

namespace cantor {

struct SuiteReport {
    std::vector<std::string> failures;
    long long checks = 0;
    bool ok() const { return failures.empty(); }
    std::string to_string() const;
};

// Per level: attracted sets stable/unique-circuit/non-divergent, marking laws,
// divergent blocks are markers; per pair: refinement, relative words, taus;
// global: at most one star along every bonding chain.
SuiteReport structural_suite(Covering& c, const MarkedCovering& mc);

// Exact nesting, sibling disjointness, length calibration, spacing bound,
// container containment/disjointness. Zero tolerance.
SuiteReport geometry_suite(Covering& c, const MarkedCovering& mc, const IntervalAssignment& a);

struct ContractionReport {
    int exponent = 1;
    int depth = 0;  // number of levels used
    long long pairs_total = 0;
    long long pairs_eligible = 0;
    long long pairs_certified = 0;
    long long pairs_ineligible = 0;
    Rational max_ratio;  // largest certified upper/lower bound ratio
    bool ratio_valid = false;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
    std::string to_string() const;
};

// For every ordered pair of deepest-level blocks: rigorous image-distance
// upper bound vs point-distance lower bound, certified against 2^-exponent.
ContractionReport contraction_certificate(Covering& c, const MarkedCovering& mc, const IntervalAssignment& a,
                                          int exponent);

struct NonAttractingReport {
    struct Entry {
        int period = 0;
        std::string circuit;
        std::string detail;
    };
    std::vector<Entry> entries;
    std::string to_string() const;
};

// Periodic candidates for which no stable block neighborhood with a single
// matching circuit exists at any depth up to depth_lvl.
NonAttractingReport negative_detector(Covering& c, int depth_lvl, int max_period);

}  // namespace cantor
