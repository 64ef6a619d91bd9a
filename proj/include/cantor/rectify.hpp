#pragma once

#include "cantor/marking.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cantor {

// The marked-level graph with zero-zone removed and marker copies added;
// acyclic by construction for well-marked input.
struct AcyclicView {
    std::vector<std::vector<int>> out;
    std::vector<int> source_block;  // block index; for copies the copied block
    std::vector<char> is_copy;      // copy vertices carry mark * and no out-edges
    std::vector<Mark> mark;
    std::vector<int> removed_blocks;  // the zero-zone (R set vertices)
};

AcyclicView build_acyclic_view(Covering& c, const MarkedLevel& level);

struct DescentMeasure {
    int delta = 0;
    int mu = 0;
};

DescentMeasure delta_mu(const AcyclicView& v);

// Divergent block realizing delta, least in canonical order; -1 when delta=0.
int descent_target(const AcyclicView& v);

// Splits the target block into one piece per quotient out-neighbor.
MarkedLevel displace(Covering& c, const MarkedLevel& level, int target_block);

struct DescentTrace {
    struct Step {
        int level = 0;
        int delta = 0;
        int mu = 0;
        std::string split_block;
    };
    std::vector<Step> steps;
    std::string to_string() const;
};

// kappa_1 + lexicographic descent + splitting of initial divergent blocks;
// output: every divergent block is a marker, marks inherited blockwise.
MarkedLevel rectify_level(Covering& c, const MarkedLevel& level, DescentTrace* trace = nullptr,
                          int trace_level = 0);

struct MarkedCovering {
    std::vector<MarkedLevel> levels;
};

// Refusal-checked pipeline: bootstrap + (relative well-marking; rectify) per level.
MarkedCovering build_marked_sequence(Covering& c, int nlevels, DescentTrace* trace = nullptr);

}  // namespace cantor
