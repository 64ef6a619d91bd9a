#pragma once

#include <utility>
#include <vector>

namespace cantor {

class Covering;

// A clopen subset of the inverse limit space, stored as a normalized
// antichain of cells (level, cell index). Normalized means: no node is an
// ancestor of another, and no complete sibling family is left uncollapsed.
// The normalized form is canonical, so equality is node-list equality.
struct Clopen {
    std::vector<std::pair<int, int>> nodes;  // sorted (level, cell), levels 0-based

    bool empty() const { return nodes.empty(); }
    bool operator==(const Clopen& o) const { return nodes == o.nodes; }
    int max_level() const;
};

Clopen clopen_of_cells(const Covering& c, int lvl, std::vector<int> cells);
Clopen clopen_full_level(const Covering& c, int lvl);

void normalize(const Covering& c, Clopen& s);

// True when the whole cell (lvl, cell) is contained in s.
bool covers_cell(const Covering& c, const Clopen& s, int lvl, int cell);

bool subset(const Covering& c, const Clopen& a, const Clopen& b);
bool disjoint(const Covering& c, const Clopen& a, const Clopen& b);
Clopen intersect(const Covering& c, const Clopen& a, const Clopen& b);
Clopen unite(const Covering& c, const Clopen& a, const Clopen& b);
Clopen subtract(const Covering& c, const Clopen& a, const Clopen& b);

// All cells of the set at the given level (every node must be at depth <= lvl).
std::vector<int> expand_at(Covering& c, const Clopen& s, int lvl);

// Exact preimage f^{-1}: one level deeper per node, then normalized.
Clopen preimage(Covering& c, const Clopen& s);
Clopen preimage_iter(Covering& c, const Clopen& s, int k);

// Minimal clopen superset of f^steps(s) expressible with cells at level lvl.
Clopen forward_enclosure_at(Covering& c, const Clopen& s, int steps, int lvl);

// f(E(s)) subset of E(s), decided exactly via s subset f^{-1}(s).
bool forward_stable(Covering& c, const Clopen& s);

// Least stable superset of s anchored at the same level (out-edge closure).
Clopen forward_closure(Covering& c, const Clopen& s);

}  // namespace cantor
