#pragma once

#include "cantor/dynamics.hpp"

#include <string>
#include <vector>

namespace cantor {

enum class Mark { Up, Star, Zero, Down };

char mark_char(Mark m);
Mark mark_of_char(char c);

struct MarkedLevel {
    SupercyclicalLevel s;
    std::vector<Mark> chi;  // per block of s.part
};

// F together with the (n, t, N) parameters it was built for.
struct MarkerSet {
    Clopen F;
    int n = 1;
    int t = 0;
    int N = 0;
    int pieces = 0;  // m in t = (n+1)m + n
};

// F, f^{-1}F, ..., f^{-n}F pairwise disjoint (exact clopen computation).
bool is_separated(Covering& c, const Clopen& F, int n);

// The greedy marker construction; asserts both marker invariants before
// returning and deepens the separated cover on a failed covering check.
MarkerSet krieger_marker(Covering& c, const SupercyclicalLevel& level, int n);

struct MarkerCheck {
    bool separated = false;
    bool covers = false;
    std::string detail;
    bool ok() const { return separated && covers; }
};

MarkerCheck marker_invariants(Covering& c, const SupercyclicalLevel& level, const MarkerSet& ms);

// Level-1 well-marked partition: every supercyclical block is treated as the
// preimage of a potential of a virtual predecessor.
MarkedLevel bootstrap_well_mark(Covering& c);

// Well-marked refinement of prev that also refines base level base_lvl and is
// well-marked relatively to prev.
MarkedLevel well_mark_relative(Covering& c, const MarkedLevel& prev, int base_lvl);

struct MarkReport {
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

// Zero exactly on attracted blocks; every supercyclical circuit carries a
// marker and a potential.
MarkReport check_well_marked(Covering& c, const MarkedLevel& level);

// Child/parent mark words lie in {*^, ^^, v^, v*, vv} on the supercyclical part.
MarkReport check_relative_marks(Covering& c, const MarkedLevel& child, const MarkedLevel& parent);

}  // namespace cantor
