#pragma once

#include "cantor/clopen.hpp"
#include "cantor/covering.hpp"

#include <string>
#include <vector>

namespace cantor {

// Finite clopen partition anchored at one level. Blocks are numbered in
// canonical order (by their least cell, i.e. lexicographically least id).
struct Partition {
    int lvl = 0;
    std::vector<int> block_of;
    int nblocks = 0;
};

Partition singleton_partition(Covering& c, int lvl);
Partition partition_from_blocks(Covering& c, const std::vector<Clopen>& blocks);
void renumber_canonical(Partition& p);

Partition reanchor(Covering& c, const Partition& p, int lvl);

// Common refinement of two partitions, anchored at the deeper level.
Partition meet(Covering& c, const Partition& a, const Partition& b);

// Splits every block along the given clopen set.
Partition refine_by_set(Covering& c, const Partition& p, const Clopen& s);

Clopen block_clopen(const Covering& c, const Partition& p, int b);
std::vector<int> block_cells(const Partition& p, int b);
std::string block_label(const Covering& c, const Partition& p, int b);

// Graph over blocks: edge (A,B) iff some base edge at p.lvl goes from A to B.
LevelGraph quotient(Covering& c, const Partition& p);

// For each block of child, the block of parent containing it.
// Throws invariant_error when child does not refine parent.
std::vector<int> block_parents(Covering& c, const Partition& child, const Partition& parent);

bool refines_base(Covering& c, const Partition& p, int base_lvl);

}  // namespace cantor
