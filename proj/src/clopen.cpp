#include "cantor/clopen.hpp"

#include "cantor/covering.hpp"
#include "cantor/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cantor {

namespace {

using Node = std::pair<int, int>;

void sort_unique(std::vector<Node>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

int Clopen::max_level() const {
    int m = 0;
    for (const auto& [l, c] : nodes) m = std::max(m, l);
    return m;
}

void normalize(const Covering& cov, Clopen& s) {
    auto& nodes = s.nodes;
    if (nodes.empty()) return;
    sort_unique(nodes);

    // Drop nodes that already have an ancestor in the set.
    {
        std::set<Node> present(nodes.begin(), nodes.end());
        std::vector<Node> kept;
        int min_lvl = nodes.front().first;
        for (const auto& n : nodes) min_lvl = std::min(min_lvl, n.first);
        for (const auto& n : nodes) {
            bool covered = false;
            int c = n.second;
            for (int l = n.first; l > min_lvl && !covered; --l) {
                c = cov.bond[l - 1][c];
                covered = present.count({l - 1, c}) > 0;
            }
            if (!covered) kept.push_back(n);
        }
        nodes = std::move(kept);
    }

    // Collapse complete sibling families bottom-up.
    bool changed = true;
    while (changed) {
        changed = false;
        int max_lvl = 0;
        for (const auto& n : nodes) max_lvl = std::max(max_lvl, n.first);
        for (int l = max_lvl; l >= 1; --l) {
            std::map<int, int> family;  // parent -> count of present children
            for (const auto& n : nodes)
                if (n.first == l) family[cov.bond[l - 1][n.second]]++;
            std::vector<int> complete;
            for (const auto& [p, cnt] : family)
                if (cnt == static_cast<int>(cov.kids[l - 1][p].size())) complete.push_back(p);
            if (complete.empty()) continue;
            std::set<int> comp(complete.begin(), complete.end());
            std::vector<Node> next;
            for (const auto& n : nodes)
                if (!(n.first == l && comp.count(cov.bond[l - 1][n.second]))) next.push_back(n);
            for (int p : complete) next.emplace_back(l - 1, p);
            nodes = std::move(next);
            sort_unique(nodes);
            changed = true;
        }
    }
    sort_unique(nodes);
}

Clopen clopen_of_cells(const Covering& c, int lvl, std::vector<int> cells) {
    Clopen s;
    for (int x : cells) s.nodes.emplace_back(lvl, x);
    normalize(c, s);
    return s;
}

Clopen clopen_full_level(const Covering& c, int lvl) {
    std::vector<int> cells(c.levels[lvl].size());
    for (int i = 0; i < static_cast<int>(cells.size()); ++i) cells[i] = i;
    return clopen_of_cells(c, lvl, cells);
}

bool covers_cell(const Covering& cov, const Clopen& s, int lvl, int cell) {
    if (s.nodes.empty()) return false;
    int min_lvl = s.nodes.front().first;
    for (const auto& n : s.nodes) min_lvl = std::min(min_lvl, n.first);
    std::set<Node> present(s.nodes.begin(), s.nodes.end());
    int c = cell;
    for (int l = lvl; l >= min_lvl; --l) {
        if (present.count({l, c})) return true;
        if (l == 0) break;
        c = cov.bond[l - 1][c];
    }
    return false;
}

bool subset(const Covering& cov, const Clopen& a, const Clopen& b) {
    for (const auto& [l, c] : a.nodes)
        if (!covers_cell(cov, b, l, c)) return false;
    return true;
}

namespace {

// Nodes of a that are covered by b, plus nodes of b covered by a.
// Because both are normalized antichains this is exactly the intersection.
Clopen intersect_impl(const Covering& cov, const Clopen& a, const Clopen& b) {
    Clopen r;
    for (const auto& [l, c] : a.nodes)
        if (covers_cell(cov, b, l, c)) r.nodes.emplace_back(l, c);
    for (const auto& [l, c] : b.nodes)
        if (covers_cell(cov, a, l, c)) r.nodes.emplace_back(l, c);
    sort_unique(r.nodes);
    normalize(cov, r);
    return r;
}

}  // namespace

bool disjoint(const Covering& cov, const Clopen& a, const Clopen& b) {
    for (const auto& [l, c] : a.nodes)
        if (covers_cell(cov, b, l, c)) return false;
    for (const auto& [l, c] : b.nodes)
        if (covers_cell(cov, a, l, c)) return false;
    return true;
}

Clopen intersect(const Covering& cov, const Clopen& a, const Clopen& b) { return intersect_impl(cov, a, b); }

Clopen unite(const Covering& cov, const Clopen& a, const Clopen& b) {
    Clopen r;
    r.nodes = a.nodes;
    r.nodes.insert(r.nodes.end(), b.nodes.begin(), b.nodes.end());
    sort_unique(r.nodes);
    normalize(cov, r);
    return r;
}

Clopen subtract(const Covering& cov, const Clopen& a, const Clopen& b) {
    // Ancestors of b's nodes mark cells that partially meet b.
    std::set<Node> banc;
    for (const auto& [l, c] : b.nodes) {
        int x = c;
        for (int k = l; k >= 1; --k) {
            x = cov.bond[k - 1][x];
            banc.insert({k - 1, x});
        }
    }
    Clopen r;
    std::vector<Node> work(a.nodes.begin(), a.nodes.end());
    while (!work.empty()) {
        auto [l, c] = work.back();
        work.pop_back();
        if (covers_cell(cov, b, l, c)) continue;
        if (!banc.count({l, c})) {
            r.nodes.emplace_back(l, c);
            continue;
        }
        for (int ch : cov.kids[l][c]) work.emplace_back(l + 1, ch);
    }
    sort_unique(r.nodes);
    normalize(cov, r);
    return r;
}

std::vector<int> expand_at(Covering& cov, const Clopen& s, int lvl) {
    cov.ensure_level(lvl);
    std::vector<int> out;
    std::vector<Node> work(s.nodes.begin(), s.nodes.end());
    while (!work.empty()) {
        auto [l, c] = work.back();
        work.pop_back();
        if (l > lvl) throw invariant_error("clopen set has nodes deeper than the expansion level");
        if (l == lvl) {
            out.push_back(c);
            continue;
        }
        for (int ch : cov.kids[l][c]) work.emplace_back(l + 1, ch);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Clopen preimage(Covering& cov, const Clopen& s) {
    Clopen r;
    for (const auto& [l, c] : s.nodes) {
        const auto& pre = cov.preimage_cells(l, c);
        for (int v : pre) r.nodes.emplace_back(l + 1, v);
    }
    sort_unique(r.nodes);
    normalize(cov, r);
    return r;
}

Clopen preimage_iter(Covering& cov, const Clopen& s, int k) {
    Clopen r = s;
    for (int i = 0; i < k; ++i) r = preimage(cov, r);
    return r;
}

Clopen forward_enclosure_at(Covering& cov, const Clopen& s, int steps, int lvl) {
    std::vector<int> cells = expand_at(cov, s, lvl + steps);
    std::set<int> cur(cells.begin(), cells.end());
    for (int i = 0; i < steps; ++i) {
        const int l = lvl + steps - i;
        std::set<int> next;
        for (int c : cur) {
            int img = cov.ci[l][c];
            if (img < 0) throw invariant_error("edge-incompatible vertex prevents forward enclosure");
            next.insert(img);
        }
        cur = std::move(next);
    }
    return clopen_of_cells(cov, lvl, std::vector<int>(cur.begin(), cur.end()));
}

bool forward_stable(Covering& cov, const Clopen& s) {
    Clopen pre = preimage(cov, s);
    return subset(cov, s, pre);
}

Clopen forward_closure(Covering& cov, const Clopen& s) {
    if (s.empty()) return s;
    const int lvl = s.max_level();
    std::vector<int> start = expand_at(cov, s, lvl);
    const LevelGraph& g = cov.levels[lvl];
    std::vector<char> seen(g.size(), 0);
    std::vector<int> stack = start;
    for (int c : start) seen[c] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : g.out[u])
            if (!seen[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
    }
    std::vector<int> cells;
    for (int i = 0; i < g.size(); ++i)
        if (seen[i]) cells.push_back(i);
    return clopen_of_cells(cov, lvl, cells);
}

}  // namespace cantor
