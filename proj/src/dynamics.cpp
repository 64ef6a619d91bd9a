#include "cantor/dynamics.hpp"

#include "cantor/circuits.hpp"
#include "cantor/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cantor {

namespace {

// Projects a cell sequence one level down; empty when the projection is not
// an elementary cycle of the same length.
std::vector<int> project_cycle(const Covering& c, int lvl, const std::vector<int>& cells) {
    std::vector<int> down(cells.size());
    for (size_t i = 0; i < cells.size(); ++i) down[i] = c.bond[lvl - 1][cells[i]];
    std::set<int> uniq(down.begin(), down.end());
    if (uniq.size() != down.size()) return {};
    return down;
}

std::vector<int> rotate_to_least(std::vector<int> v) {
    auto it = std::min_element(v.begin(), v.end());
    std::rotate(v.begin(), it, v.end());
    return v;
}

bool induced_minimal(const LevelGraph& g, const std::vector<int>& cells) {
    std::map<int, int> idx;
    for (size_t i = 0; i < cells.size(); ++i) idx[cells[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> sub(cells.size());
    for (size_t i = 0; i < cells.size(); ++i)
        for (int v : g.out[cells[i]]) {
            auto it = idx.find(v);
            if (it != idx.end()) sub[i].push_back(it->second);
        }
    return min_cycle_length(sub) == static_cast<int>(cells.size());
}

}  // namespace

std::vector<PeriodicCandidate> periodic_candidates(Covering& c, int max_period, int depth_lvl) {
    c.ensure_level(depth_lvl);
    const LevelGraph& g = c.levels[depth_lvl];
    std::vector<Cycle> top = circuits(g.out, max_period);
    std::vector<PeriodicCandidate> out;
    for (const auto& cyc : top) {
        PeriodicCandidate cand;
        cand.period = static_cast<int>(cyc.size());
        std::vector<std::vector<int>> chain{cyc};
        int lvl = depth_lvl;
        while (lvl > 0) {
            std::vector<int> down = project_cycle(c, lvl, chain.back());
            if (down.empty() || !induced_minimal(c.levels[lvl - 1], down)) break;
            chain.push_back(down);
            --lvl;
        }
        cand.first_lvl = lvl;
        std::reverse(chain.begin(), chain.end());
        for (auto& seq : chain) seq = rotate_to_least(seq);
        cand.chain = std::move(chain);
        out.push_back(std::move(cand));
    }
    std::sort(out.begin(), out.end(), [](const PeriodicCandidate& a, const PeriodicCandidate& b) {
        if (a.period != b.period) return a.period < b.period;
        return a.chain.back() < b.chain.back();
    });
    return out;
}

std::string AperiodicityReport::to_string() const {
    std::ostringstream os;
    os << "nu:";
    for (size_t l = 0; l < nu.size(); ++l) os << " " << nu[l];
    os << "\nverdict: " << verdict << "\n";
    for (const auto& w : witnesses)
        os << "  periodic witness: period " << w.period << " from level " << (w.first_lvl + 1) << "\n";
    return os.str();
}

AperiodicityReport aperiodicity_certificate(Covering& c, int depth_lvl, int bound) {
    c.ensure_level(depth_lvl);
    AperiodicityReport rep;
    for (int l = 0; l <= depth_lvl; ++l) rep.nu.push_back(min_cycle_length(c.levels[l].out));
    for (auto& cand : periodic_candidates(c, bound, depth_lvl))
        if (cand.first_lvl == 0) rep.witnesses.push_back(std::move(cand));
    if (!rep.witnesses.empty()) rep.verdict = "has-periodic-witness";
    else if (rep.nu.back() > bound) rep.verdict = "aperiodic-up-to-depth-" + std::to_string(depth_lvl + 1);
    else rep.verdict = "inconclusive";
    return rep;
}

std::vector<int> track_circuit(Covering& c, const OrbitInfo& o, int lvl) {
    return lift_circuit(c, o.lvl, o.circuit, lvl);
}

AttractionReport attraction_certificate(Covering& c, const OrbitInfo& o, int depth_budget) {
    AttractionReport rep;
    std::ostringstream detail;
    for (int d = 0; d <= depth_budget; ++d) {
        const int lvl = o.lvl + d;
        std::vector<int> cells;
        std::vector<int> circ;
        try {
            c.ensure_level(lvl);
            cells = expand_at(c, o.basin, lvl);
            circ = track_circuit(c, o, lvl);
        } catch (const budget_error&) {
            rep.inconclusive = true;
            detail << "depth budget exhausted after " << d << " of " << depth_budget << " depths\n";
            rep.detail = detail.str();
            rep.pass = false;
            return rep;
        }
        rep.checked_depths = d + 1;
        const LevelGraph& g = c.levels[lvl];
        std::set<int> basin(cells.begin(), cells.end());
        for (int cl : circ)
            if (!basin.count(cl)) {
                detail << "circuit cell '" << g.ids[cl] << "' escapes the basin at depth +" << d << "\n";
                rep.detail = detail.str();
                return rep;
            }
        for (int u : cells)
            for (int v : g.out[u])
                if (!basin.count(v)) {
                    detail << "basin is not stable at depth +" << d << ": edge ('" << g.ids[u] << "','" << g.ids[v]
                           << "') escapes\n";
                    rep.detail = detail.str();
                    return rep;
                }
        // induced subgraph must carry exactly one circuit, of length |p|,
        // projecting onto the declared circuit
        std::map<int, int> idx;
        int m = 0;
        for (int u : cells) idx[u] = m++;
        std::vector<std::vector<int>> sub(m);
        for (int u : cells)
            for (int v : g.out[u])
                if (idx.count(v)) sub[idx[u]].push_back(idx[v]);
        std::vector<Cycle> circs = circuits(sub);
        if (circs.size() != 1) {
            detail << "induced basin subgraph has " << circs.size() << " circuits at depth +" << d << "\n";
            rep.detail = detail.str();
            return rep;
        }
        std::vector<int> got;
        for (int i : circs[0]) got.push_back(cells[i]);
        std::vector<int> proj(got.size());
        for (size_t i = 0; i < got.size(); ++i) proj[i] = c.ancestor(lvl, got[i], o.lvl);
        if (static_cast<int>(got.size()) != o.period || !is_rotation(proj, o.circuit)) {
            detail << "unique circuit at depth +" << d << " does not project onto the declared orbit\n";
            rep.detail = detail.str();
            return rep;
        }
    }
    rep.pass = true;
    detail << "certified to depth " << depth_budget << "\n";
    rep.detail = detail.str();
    return rep;
}

std::vector<char> SupercyclicalLevel::attracted_mask(int nblocks) const {
    std::vector<char> m(nblocks, 0);
    for (const auto& blocks : attracted)
        for (int b : blocks) m[b] = 1;
    return m;
}

SupercyclicalLevel supercyclical_structure(Covering& c, const Partition& p, int tau) {
    SupercyclicalLevel s;
    s.part = p;
    s.tau = tau;
    s.attracted.assign(c.orbits.size(), {});
    LevelGraph q = quotient(c, p);

    for (size_t oi = 0; oi < c.orbits.size(); ++oi) {
        const OrbitInfo& o = c.orbits[oi];
        if (o.period > tau) continue;
        if (p.lvl < o.lvl)
            throw invariant_error("partition is anchored above the declaration level of a period-" +
                                  std::to_string(o.period) + " orbit");
        std::vector<int> cells = track_circuit(c, o, p.lvl);
        std::vector<int> cblocks;
        for (int cell : cells) cblocks.push_back(p.block_of[cell]);
        {
            std::set<int> uniq(cblocks.begin(), cblocks.end());
            if (uniq.size() != cblocks.size())
                throw refusal_error("not purely attracting at this depth: orbit of period " +
                                    std::to_string(o.period) + " is not separated by the partition");
        }
        // validity of a stable block set: all circuits of its induced
        // subgraph project onto the orbit circuit
        auto closure_of = [&](std::vector<int> seed) {
            std::vector<char> in(q.size(), 0);
            std::vector<int> st = seed;
            for (int b : seed) in[b] = 1;
            while (!st.empty()) {
                int u = st.back();
                st.pop_back();
                for (int v : q.out[u])
                    if (!in[v]) {
                        in[v] = 1;
                        st.push_back(v);
                    }
            }
            std::vector<int> res;
            for (int b = 0; b < q.size(); ++b)
                if (in[b]) res.push_back(b);
            return res;
        };
        auto valid_set = [&](const std::vector<int>& blocks) {
            std::map<int, int> idx;
            for (size_t i = 0; i < blocks.size(); ++i) idx[blocks[i]] = static_cast<int>(i);
            for (int cb : cblocks)
                if (!idx.count(cb)) return false;
            std::vector<std::vector<int>> sub(blocks.size());
            for (size_t i = 0; i < blocks.size(); ++i)
                for (int v : q.out[blocks[i]])
                    if (idx.count(v)) sub[i].push_back(idx[v]);
            std::vector<Cycle> cs;
            try {
                cs = circuits(sub);
            } catch (const invariant_error&) {
                return false;
            }
            for (const auto& cyc : cs) {
                if (static_cast<int>(cyc.size()) != o.period) return false;
                std::vector<int> blk(cyc.size());
                for (size_t i = 0; i < cyc.size(); ++i) blk[i] = blocks[cyc[i]];
                if (!is_rotation(blk, cblocks)) return false;
            }
            return true;
        };
        std::vector<int> base = closure_of(cblocks);
        if (!valid_set(base))
            throw refusal_error("not purely attracting at this depth: orbit of period " + std::to_string(o.period) +
                                " has no stable attracted block set");
        std::set<int> result(base.begin(), base.end());
        for (int b = 0; b < q.size(); ++b) {
            if (result.count(b)) continue;
            std::vector<int> seed = cblocks;
            seed.push_back(b);
            std::vector<int> cl = closure_of(seed);
            if (valid_set(cl)) result.insert(cl.begin(), cl.end());
        }
        s.attracted[oi].assign(result.begin(), result.end());
    }

    // attracted sets of distinct orbits are disjoint
    std::vector<int> owner(q.size(), -1);
    for (size_t oi = 0; oi < c.orbits.size(); ++oi)
        for (int b : s.attracted[oi]) {
            if (owner[b] != -1)
                throw invariant_error("attracted sets of distinct orbits overlap at block " + block_label(c, p, b));
            owner[b] = static_cast<int>(oi);
        }
    return s;
}

SupercyclicalLevel raise_order(Covering& c, const SupercyclicalLevel& s, int target_tau) {
    if (target_tau <= s.tau) return s;
    Clopen attracted_set;
    {
        auto mask = s.attracted_mask(s.part.nblocks);
        for (int b = 0; b < s.part.nblocks; ++b)
            if (mask[b]) attracted_set = unite(c, attracted_set, block_clopen(c, s.part, b));
    }
    Partition p = s.part;
    for (size_t oi = 0; oi < c.orbits.size(); ++oi) {
        const OrbitInfo& o = c.orbits[oi];
        if (o.period <= s.tau || o.period > target_tau) continue;
        if (!disjoint(c, o.basin, attracted_set))
            throw invariant_error("basin of the period-" + std::to_string(o.period) +
                                  " orbit intersects the attracted part");
        p = refine_by_set(c, p, o.basin);
    }
    return supercyclical_structure(c, p, target_tau);
}

int eta(Covering& c, const SupercyclicalLevel& s) {
    LevelGraph q = quotient(c, s.part);
    auto mask = s.attracted_mask(q.size());
    std::map<int, int> idx;
    std::vector<int> verts;
    for (int b = 0; b < q.size(); ++b)
        if (!mask[b]) {
            idx[b] = static_cast<int>(verts.size());
            verts.push_back(b);
        }
    std::vector<std::vector<int>> sub(verts.size());
    for (size_t i = 0; i < verts.size(); ++i)
        for (int v : q.out[verts[i]])
            if (idx.count(v)) sub[i].push_back(idx[v]);
    int best = 0;
    for (const auto& cyc : circuits(sub)) best = std::max(best, static_cast<int>(cyc.size()));
    return best;
}

SupercyclicalLevel kappa(Covering& c, const SupercyclicalLevel& s, int n) {
    const Partition& p = s.part;
    auto mask = s.attracted_mask(p.nblocks);

    std::vector<Clopen> new_blocks;
    std::vector<int> owner_orbit;   // orbit index or -1 (supercyclical)
    std::vector<int> layer;         // delta value for attracted blocks
    for (int b = 0; b < p.nblocks; ++b)
        if (!mask[b]) {
            new_blocks.push_back(block_clopen(c, p, b));
            owner_orbit.push_back(-1);
            layer.push_back(-1);
        }

    for (size_t oi = 0; oi < c.orbits.size(); ++oi) {
        if (s.attracted[oi].empty()) continue;
        const OrbitInfo& o = c.orbits[oi];
        Clopen target;
        for (int b : s.attracted[oi]) target = unite(c, target, block_clopen(c, p, b));

        // anchor: n levels below the partition, deepened until the tracked
        // circuit is edge-deterministic (single successor along the cycle)
        int anchor = p.lvl + n;
        std::vector<int> circ;
        for (;; ++anchor) {
            c.ensure_level(anchor);
            circ = track_circuit(c, o, anchor);
            bool det = true;
            for (int pos = 0; pos < o.period && det; ++pos) {
                const auto& out = c.levels[anchor].out[circ[pos]];
                det = out.size() == 1 && out[0] == circ[(pos + 1) % o.period];
            }
            if (det) break;
        }

        // S_0: one block per circuit cell
        std::vector<Clopen> prev_layer;
        Clopen core;
        for (int pos = 0; pos < o.period; ++pos) {
            Clopen w = clopen_of_cells(c, anchor, {circ[pos]});
            prev_layer.push_back(w);
            core = unite(c, core, w);
            new_blocks.push_back(w);
            owner_orbit.push_back(static_cast<int>(oi));
            layer.push_back(0);
        }
        if (!subset(c, core, target))
            throw invariant_error("orbit core escapes the attracted set during repartition");

        std::vector<int> base_cells;  // anchor-level cells inside the attracted set
        for (int cell : expand_at(c, target, anchor)) base_cells.push_back(cell);

        Clopen covered = core;
        int m = 1;
        while (!subset(c, target, covered)) {
            if (m > c.level_budget)
                throw budget_error("attracted-part repartition exceeded the layer budget for the period-" +
                                   std::to_string(o.period) + " orbit");
            std::vector<Clopen> cur_layer;
            for (int v : base_cells) {
                Clopen vset = clopen_of_cells(c, anchor, {v});
                for (const Clopen& w : prev_layer) {
                    Clopen piece = intersect(c, preimage(c, w), vset);
                    if (m == 1) piece = subtract(c, piece, core);
                    if (piece.empty()) continue;
                    cur_layer.push_back(piece);
                    covered = unite(c, covered, piece);
                    new_blocks.push_back(piece);
                    owner_orbit.push_back(static_cast<int>(oi));
                    layer.push_back(m);
                }
            }
            if (cur_layer.empty())
                throw invariant_error("attracted-part repartition stalled before covering the attracted set");
            prev_layer = std::move(cur_layer);
            ++m;
        }
    }

    Partition np = partition_from_blocks(c, new_blocks);
    // map construction order to canonical block numbers
    SupercyclicalLevel r;
    r.part = np;
    r.tau = s.tau;
    r.attracted.assign(c.orbits.size(), {});
    for (size_t i = 0; i < new_blocks.size(); ++i) {
        if (owner_orbit[i] < 0) continue;
        int cell0 = expand_at(c, new_blocks[i], np.lvl).front();
        r.attracted[owner_orbit[i]].push_back(np.block_of[cell0]);
    }
    for (auto& v : r.attracted) std::sort(v.begin(), v.end());

    // supercyclical part must be bit-identical
    {
        auto old_mask = s.attracted_mask(p.nblocks);
        std::vector<Clopen> olds, news;
        for (int b = 0; b < p.nblocks; ++b)
            if (!old_mask[b]) olds.push_back(block_clopen(c, p, b));
        auto nm = r.attracted_mask(np.nblocks);
        for (int b = 0; b < np.nblocks; ++b)
            if (!nm[b]) news.push_back(block_clopen(c, np, b));
        if (olds.size() != news.size()) throw invariant_error("repartition modified the supercyclical part");
        std::sort(olds.begin(), olds.end(), [](const Clopen& a, const Clopen& b) { return a.nodes < b.nodes; });
        std::sort(news.begin(), news.end(), [](const Clopen& a, const Clopen& b) { return a.nodes < b.nodes; });
        for (size_t i = 0; i < olds.size(); ++i)
            if (!(olds[i] == news[i])) throw invariant_error("repartition modified a supercyclical block");
    }
    return r;
}

DepthData delta_omega(Covering& c, const SupercyclicalLevel& s) {
    LevelGraph q = quotient(c, s.part);
    DepthData d;
    d.delta.assign(q.size(), -1);
    d.omega.assign(c.orbits.size(), -1);
    auto mask = s.attracted_mask(q.size());

    for (size_t oi = 0; oi < c.orbits.size(); ++oi) {
        if (s.attracted[oi].empty()) continue;
        std::set<int> inset(s.attracted[oi].begin(), s.attracted[oi].end());
        // circuit blocks: the unique cycle of the induced subgraph
        std::map<int, int> idx;
        std::vector<int> verts(s.attracted[oi].begin(), s.attracted[oi].end());
        for (size_t i = 0; i < verts.size(); ++i) idx[verts[i]] = static_cast<int>(i);
        std::vector<std::vector<int>> sub(verts.size());
        for (size_t i = 0; i < verts.size(); ++i)
            for (int v : q.out[verts[i]])
                if (idx.count(v)) sub[i].push_back(idx[v]);
        std::vector<Cycle> cs = circuits(sub);
        if (cs.size() != 1)
            throw invariant_error("attracted subgraph does not have a unique circuit");
        std::set<int> on_circ;
        for (int i : cs[0]) on_circ.insert(verts[i]);
        int omega = 0;
        for (int b : verts) {
            int steps = 0;
            int cur = b;
            while (!on_circ.count(cur)) {
                std::vector<int> nexts;
                for (int v : q.out[cur])
                    if (inset.count(v)) nexts.push_back(v);
                if (nexts.size() != 1)
                    throw invariant_error("attracted block '" + block_label(c, s.part, cur) +
                                          "' violates the unique-path property");
                cur = nexts[0];
                if (++steps > q.size()) throw invariant_error("attracted path does not reach the circuit");
            }
            d.delta[b] = steps;
            omega = std::max(omega, steps);
        }
        d.omega[oi] = omega;
    }
    return d;
}

}  // namespace cantor
