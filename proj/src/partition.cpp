#include "cantor/partition.hpp"

#include "cantor/errors.hpp"

#include <algorithm>
#include <map>

namespace cantor {

Partition singleton_partition(Covering& c, int lvl) {
    c.ensure_level(lvl);
    Partition p;
    p.lvl = lvl;
    p.nblocks = c.levels[lvl].size();
    p.block_of.resize(p.nblocks);
    for (int i = 0; i < p.nblocks; ++i) p.block_of[i] = i;
    return p;
}

void renumber_canonical(Partition& p) {
    std::vector<int> remap(p.nblocks, -1);
    int next = 0;
    for (int cell = 0; cell < static_cast<int>(p.block_of.size()); ++cell) {
        int b = p.block_of[cell];
        if (remap[b] < 0) remap[b] = next++;
    }
    if (next != p.nblocks) throw invariant_error("partition has an empty block");
    for (auto& b : p.block_of) b = remap[b];
}

Partition partition_from_blocks(Covering& c, const std::vector<Clopen>& blocks) {
    int lvl = 0;
    for (const auto& b : blocks) lvl = std::max(lvl, b.max_level());
    c.ensure_level(lvl);
    Partition p;
    p.lvl = lvl;
    p.nblocks = static_cast<int>(blocks.size());
    p.block_of.assign(c.levels[lvl].size(), -1);
    for (int b = 0; b < p.nblocks; ++b) {
        for (int cell : expand_at(c, blocks[b], lvl)) {
            if (p.block_of[cell] != -1) throw invariant_error("blocks overlap at cell " + c.levels[lvl].ids[cell]);
            p.block_of[cell] = b;
        }
    }
    for (int cell = 0; cell < static_cast<int>(p.block_of.size()); ++cell)
        if (p.block_of[cell] < 0) throw invariant_error("blocks do not cover cell " + c.levels[lvl].ids[cell]);
    renumber_canonical(p);
    return p;
}

Partition reanchor(Covering& c, const Partition& p, int lvl) {
    if (lvl < p.lvl) throw invariant_error("cannot reanchor a partition to a shallower level");
    if (lvl == p.lvl) return p;
    c.ensure_level(lvl);
    Partition r;
    r.lvl = lvl;
    r.nblocks = p.nblocks;
    r.block_of.resize(c.levels[lvl].size());
    for (int cell = 0; cell < static_cast<int>(r.block_of.size()); ++cell)
        r.block_of[cell] = p.block_of[c.ancestor(lvl, cell, p.lvl)];
    renumber_canonical(r);
    return r;
}

Partition meet(Covering& c, const Partition& a, const Partition& b) {
    const int lvl = std::max(a.lvl, b.lvl);
    c.ensure_level(lvl);
    Partition r;
    r.lvl = lvl;
    r.block_of.resize(c.levels[lvl].size());
    std::map<std::pair<int, int>, int> ids;
    for (int cell = 0; cell < static_cast<int>(r.block_of.size()); ++cell) {
        std::pair<int, int> key{a.block_of[c.ancestor(lvl, cell, a.lvl)], b.block_of[c.ancestor(lvl, cell, b.lvl)]};
        auto [it, inserted] = ids.try_emplace(key, static_cast<int>(ids.size()));
        r.block_of[cell] = it->second;
    }
    r.nblocks = static_cast<int>(ids.size());
    renumber_canonical(r);
    return r;
}

Partition refine_by_set(Covering& c, const Partition& p, const Clopen& s) {
    const int lvl = std::max(p.lvl, s.max_level());
    c.ensure_level(lvl);
    std::vector<char> in_s(c.levels[lvl].size(), 0);
    for (int cell : expand_at(c, s, lvl)) in_s[cell] = 1;
    Partition r;
    r.lvl = lvl;
    r.block_of.resize(c.levels[lvl].size());
    std::map<std::pair<int, int>, int> ids;
    for (int cell = 0; cell < static_cast<int>(r.block_of.size()); ++cell) {
        std::pair<int, int> key{p.block_of[c.ancestor(lvl, cell, p.lvl)], in_s[cell]};
        auto [it, inserted] = ids.try_emplace(key, static_cast<int>(ids.size()));
        r.block_of[cell] = it->second;
    }
    r.nblocks = static_cast<int>(ids.size());
    renumber_canonical(r);
    return r;
}

Clopen block_clopen(const Covering& c, const Partition& p, int b) {
    std::vector<int> cells;
    for (int cell = 0; cell < static_cast<int>(p.block_of.size()); ++cell)
        if (p.block_of[cell] == b) cells.push_back(cell);
    return clopen_of_cells(c, p.lvl, std::move(cells));
}

std::vector<int> block_cells(const Partition& p, int b) {
    std::vector<int> cells;
    for (int cell = 0; cell < static_cast<int>(p.block_of.size()); ++cell)
        if (p.block_of[cell] == b) cells.push_back(cell);
    return cells;
}

std::string block_label(const Covering& c, const Partition& p, int b) {
    for (int cell = 0; cell < static_cast<int>(p.block_of.size()); ++cell)
        if (p.block_of[cell] == b) return c.levels[p.lvl].ids[cell];
    throw invariant_error("empty block");
}

LevelGraph quotient(Covering& c, const Partition& p) {
    LevelGraph g;
    g.ids.resize(p.nblocks);
    std::vector<char> named(p.nblocks, 0);
    for (int cell = 0; cell < static_cast<int>(p.block_of.size()); ++cell) {
        int b = p.block_of[cell];
        if (!named[b]) {
            named[b] = 1;
            g.ids[b] = c.levels[p.lvl].ids[cell];
        }
    }
    if (!std::is_sorted(g.ids.begin(), g.ids.end()))
        throw invariant_error("partition blocks are not in canonical order");
    g.out.assign(p.nblocks, {});
    g.in.assign(p.nblocks, {});
    const LevelGraph& base = c.levels[p.lvl];
    for (int u = 0; u < base.size(); ++u)
        for (int v : base.out[u]) g.out[p.block_of[u]].push_back(p.block_of[v]);
    for (int b = 0; b < p.nblocks; ++b) {
        auto& o = g.out[b];
        std::sort(o.begin(), o.end());
        o.erase(std::unique(o.begin(), o.end()), o.end());
        for (int v : o) g.in[v].push_back(b);
    }
    for (auto& iv : g.in) std::sort(iv.begin(), iv.end());
    return g;
}

std::vector<int> block_parents(Covering& c, const Partition& child, const Partition& parent) {
    if (child.lvl < parent.lvl) throw invariant_error("child partition is anchored above the parent");
    std::vector<int> par(child.nblocks, -1);
    for (int cell = 0; cell < static_cast<int>(child.block_of.size()); ++cell) {
        int b = child.block_of[cell];
        int pb = parent.block_of[c.ancestor(child.lvl, cell, parent.lvl)];
        if (par[b] == -1) par[b] = pb;
        else if (par[b] != pb)
            throw invariant_error("block '" + block_label(c, child, b) + "' is not contained in one parent block");
    }
    return par;
}

bool refines_base(Covering& c, const Partition& p, int base_lvl) {
    if (p.lvl < base_lvl) return false;
    std::vector<int> anc(p.nblocks, -1);
    for (int cell = 0; cell < static_cast<int>(p.block_of.size()); ++cell) {
        int b = p.block_of[cell];
        int a = c.ancestor(p.lvl, cell, base_lvl);
        if (anc[b] == -1) anc[b] = a;
        else if (anc[b] != a) return false;
    }
    return true;
}

}  // namespace cantor
