#include "cantor/covering.hpp"

#include "cantor/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace cantor {

int LevelGraph::index_of(const std::string& id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) return -1;
    return static_cast<int>(it - ids.begin());
}

void Covering::append_raw(const RawLevel& raw) {
    LevelGraph g;
    g.ids = raw.ids;
    std::sort(g.ids.begin(), g.ids.end());
    g.ids.erase(std::unique(g.ids.begin(), g.ids.end()), g.ids.end());
    const int n = g.size();
    if (static_cast<long long>(n) > cell_budget)
        throw budget_error("level exceeds cell budget (" + std::to_string(n) + " cells)");

    g.out.assign(n, {});
    g.in.assign(n, {});
    for (const auto& [a, b] : raw.edges) {
        int u = g.index_of(a), v = g.index_of(b);
        if (u < 0 || v < 0) throw parse_error("edge references unknown vertex '" + (u < 0 ? a : b) + "'");
        g.out[u].push_back(v);
    }
    for (int u = 0; u < n; ++u) {
        auto& o = g.out[u];
        std::sort(o.begin(), o.end());
        o.erase(std::unique(o.begin(), o.end()), o.end());
        for (int v : o) g.in[v].push_back(u);
    }
    for (auto& iv : g.in) std::sort(iv.begin(), iv.end());

    if (levels.empty()) {
        if (!raw.bond.empty()) throw parse_error("first level must not carry a bond");
        levels.push_back(std::move(g));
        ci.push_back({});
        return;
    }

    const LevelGraph& parent = levels.back();
    std::vector<int> b(n, -1);
    for (const auto& [child, par] : raw.bond) {
        int u = g.index_of(child);
        int p = parent.index_of(par);
        if (u < 0) throw parse_error("bond references unknown child '" + child + "'");
        if (p < 0) throw parse_error("bond references unknown parent '" + par + "'");
        b[u] = p;
    }
    for (int u = 0; u < n; ++u)
        if (b[u] < 0) throw parse_error("vertex '" + g.ids[u] + "' has no bond image");

    std::vector<std::vector<int>> k(parent.size());
    for (int u = 0; u < n; ++u) k[b[u]].push_back(u);

    std::vector<int> c(n, -1);
    for (int u = 0; u < n; ++u) {
        int common = -2;
        for (int v : g.out[u]) {
            int img = b[v];
            if (common == -2) common = img;
            else if (common != img) common = -1;
        }
        c[u] = (common == -2) ? -1 : common;
    }

    levels.push_back(std::move(g));
    bond.push_back(std::move(b));
    kids.push_back(std::move(k));
    ci.push_back(std::move(c));
}

void Covering::ensure_level(int lvl) {
    if (lvl < depth()) return;
    if (!gen) throw budget_error("level " + std::to_string(lvl + 1) + " requested but covering has only " +
                                 std::to_string(depth()) + " levels and no generator");
    if (lvl >= level_budget)
        throw budget_error("level " + std::to_string(lvl + 1) + " exceeds the depth budget of " +
                           std::to_string(level_budget));
    while (depth() <= lvl) append_raw(gen->level(depth()));
}

int Covering::ancestor(int lvl_from, int cell, int lvl_to) const {
    int c = cell;
    for (int l = lvl_from; l > lvl_to; --l) c = bond[l - 1][c];
    return c;
}

const std::vector<int>& Covering::preimage_cells(int lvl, int cell) {
    ensure_level(lvl + 1);
    if (static_cast<int>(inv_ci_.size()) < depth()) inv_ci_.resize(depth());
    auto& tab = inv_ci_[lvl + 1];
    if (tab.empty()) {
        tab.assign(levels[lvl].size(), {});
        const auto& cimg = ci[lvl + 1];
        for (int v = 0; v < levels[lvl + 1].size(); ++v)
            if (cimg[v] >= 0) tab[cimg[v]].push_back(v);
    }
    return tab[cell];
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    if (issues.empty()) {
        os << "valid: all covering invariants hold\n";
        return os.str();
    }
    for (const auto& i : issues)
        os << i.kind << " at level " << (i.lvl + 1) << ": " << i.witness << "\n";
    return os.str();
}

ValidationReport validate(const Covering& c) {
    ValidationReport rep;
    for (int l = 0; l < c.depth(); ++l) {
        const LevelGraph& g = c.levels[l];
        for (int v = 0; v < g.size(); ++v)
            if (g.out[v].empty())
                rep.issues.push_back({"forward-incomplete", l, "vertex '" + g.ids[v] + "' has no outgoing edge"});
    }
    for (int l = 0; l + 1 < c.depth(); ++l) {
        const LevelGraph& par = c.levels[l];
        const LevelGraph& ch = c.levels[l + 1];
        const auto& b = c.bond[l];
        std::vector<char> hit(par.size(), 0);
        for (int u = 0; u < ch.size(); ++u) hit[b[u]] = 1;
        for (int p = 0; p < par.size(); ++p)
            if (!hit[p])
                rep.issues.push_back({"non-surjective-bond", l + 1, "parent '" + par.ids[p] + "' has no child"});
        for (int u = 0; u < ch.size(); ++u) {
            for (int v : ch.out[u]) {
                const auto& po = par.out[b[u]];
                if (!std::binary_search(po.begin(), po.end(), b[v]))
                    rep.issues.push_back({"non-morphism-edge", l + 1,
                                          "edge ('" + ch.ids[u] + "','" + ch.ids[v] + "') projects to non-edge ('" +
                                              par.ids[b[u]] + "','" + par.ids[b[v]] + "')"});
            }
            if (!ch.out[u].empty() && c.ci[l + 1][u] < 0)
                rep.issues.push_back({"edge-incompatible", l + 1,
                                      "vertex '" + ch.ids[u] + "' has out-neighbors with distinct bond images"});
        }
    }
    return rep;
}

std::vector<int> lift_circuit(Covering& c, int lvl_from, const std::vector<int>& circuit, int lvl_to) {
    c.ensure_level(lvl_to);
    std::vector<int> cur = circuit;
    const int k = static_cast<int>(circuit.size());
    for (int l = lvl_from; l < lvl_to; ++l) {
        const LevelGraph& g = c.levels[l + 1];
        // candidate children per circuit position
        std::vector<std::vector<int>> cand(k);
        for (int pos = 0; pos < k; ++pos) cand[pos] = c.kids[l][cur[pos]];
        // enumerate cyclic selections closed under the edge relation
        std::vector<std::vector<int>> lifts;
        std::vector<int> pick(k, -1);
        auto dfs = [&](auto&& self, int pos) -> void {
            if (pos == k) {
                const auto& out = g.out[pick[k - 1]];
                if (std::binary_search(out.begin(), out.end(), pick[0])) lifts.push_back(pick);
                return;
            }
            for (int x : cand[pos]) {
                if (pos > 0) {
                    const auto& out = g.out[pick[pos - 1]];
                    if (!std::binary_search(out.begin(), out.end(), x)) continue;
                }
                pick[pos] = x;
                self(self, pos + 1);
            }
        };
        dfs(dfs, 0);
        if (lifts.empty())
            throw invariant_error("orbit circuit does not lift to level " + std::to_string(l + 2));
        for (size_t i = 1; i < lifts.size(); ++i)
            if (lifts[i] != lifts[0])
                throw invariant_error("orbit circuit lift is ambiguous at level " + std::to_string(l + 2));
        cur = lifts[0];
    }
    return cur;
}

Covering telescope(Covering& c, const std::vector<int>& indices) {
    if (indices.empty()) throw parse_error("telescope needs at least one index");
    for (size_t i = 0; i + 1 < indices.size(); ++i)
        if (indices[i] >= indices[i + 1]) throw parse_error("telescope indices must be strictly increasing");
    c.ensure_level(indices.back());

    Covering t;
    t.level_budget = c.level_budget;
    t.cell_budget = c.cell_budget;
    for (size_t k = 0; k < indices.size(); ++k) {
        const int l = indices[k];
        RawLevel raw;
        raw.ids = c.levels[l].ids;
        for (int u = 0; u < c.levels[l].size(); ++u)
            for (int v : c.levels[l].out[u]) raw.edges.emplace_back(c.levels[l].ids[u], c.levels[l].ids[v]);
        if (k > 0) {
            const int pl = indices[k - 1];
            for (int u = 0; u < c.levels[l].size(); ++u)
                raw.bond.emplace_back(c.levels[l].ids[u], c.levels[pl].ids[c.ancestor(l, u, pl)]);
        }
        t.append_raw(raw);
    }
    for (const auto& o : c.orbits) {
        auto it = std::lower_bound(indices.begin(), indices.end(), o.lvl);
        if (it == indices.end()) continue;
        OrbitInfo re;
        re.period = o.period;
        re.lvl = static_cast<int>(it - indices.begin());
        re.circuit = lift_circuit(c, o.lvl, o.circuit, *it);
        // Re-anchor the basin: expand at the picked level, reuse cell indices
        // (telescoped level has the same cells as the source level).
        Clopen basin = o.basin;
        std::vector<int> cells = expand_at(c, basin, *it);
        re.basin = clopen_of_cells(t, re.lvl, cells);
        t.orbits.push_back(std::move(re));
    }
    return t;
}

}  // namespace cantor
