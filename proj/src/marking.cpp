#include "cantor/marking.hpp"

#include "cantor/circuits.hpp"
#include "cantor/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cantor {

char mark_char(Mark m) {
    switch (m) {
        case Mark::Up: return '^';
        case Mark::Star: return '*';
        case Mark::Zero: return '0';
        case Mark::Down: return 'v';
    }
    return '?';
}

Mark mark_of_char(char c) {
    switch (c) {
        case '^': return Mark::Up;
        case '*': return Mark::Star;
        case '0': return Mark::Zero;
        case 'v': return Mark::Down;
    }
    throw parse_error(std::string("unknown mark character '") + c + "'");
}

bool is_separated(Covering& c, const Clopen& F, int n) {
    if (F.empty()) return true;
    std::vector<Clopen> ladder{F};
    for (int j = 1; j <= n; ++j) ladder.push_back(preimage(c, ladder.back()));
    for (size_t i = 0; i < ladder.size(); ++i)
        for (size_t j = i + 1; j < ladder.size(); ++j)
            if (!disjoint(c, ladder[i], ladder[j])) return false;
    return true;
}

namespace {

Clopen supercyclical_clopen(Covering& c, const SupercyclicalLevel& level) {
    auto mask = level.attracted_mask(level.part.nblocks);
    Clopen s;
    for (int b = 0; b < level.part.nblocks; ++b)
        if (!mask[b]) s = unite(c, s, block_clopen(c, level.part, b));
    return s;
}

}  // namespace

MarkerSet krieger_marker(Covering& c, const SupercyclicalLevel& level, int n) {
    for (size_t oi = 0; oi < c.orbits.size(); ++oi)
        if (c.orbits[oi].period <= n && level.attracted[oi].empty())
            throw invariant_error("marker construction needs order >= " + std::to_string(n) +
                                  ": period-" + std::to_string(c.orbits[oi].period) + " orbit is not attracted");

    Clopen S = supercyclical_clopen(c, level);
    if (S.empty()) return MarkerSet{Clopen{}, n, n, 2 * n + 1, 0};

    // separated atoms covering S, deepened cell by cell
    std::vector<std::pair<int, int>> atoms;
    {
        std::vector<std::pair<int, int>> work(S.nodes.begin(), S.nodes.end());
        while (!work.empty()) {
            auto [l, cell] = work.back();
            work.pop_back();
            Clopen one = clopen_of_cells(c, l, {cell});
            if (is_separated(c, one, n)) {
                atoms.emplace_back(l, cell);
                continue;
            }
            c.ensure_level(l + 1);
            for (int ch : c.kids[l][cell]) work.emplace_back(l + 1, ch);
        }
        std::sort(atoms.begin(), atoms.end());
    }

    for (int attempt = 0;; ++attempt) {
        // greedy merge of atoms into separated pieces
        std::vector<Clopen> pieces;
        for (const auto& [l, cell] : atoms) {
            Clopen one = clopen_of_cells(c, l, {cell});
            bool placed = false;
            for (auto& piece : pieces) {
                Clopen cand = unite(c, piece, one);
                if (is_separated(c, cand, n)) {
                    piece = std::move(cand);
                    placed = true;
                    break;
                }
            }
            if (!placed) pieces.push_back(one);
        }
        const int m = static_cast<int>(pieces.size());
        const int shift = (n + 1) * m;

        Clopen F;
        for (int j = 0; j < m; ++j) {
            Clopen uj = preimage_iter(c, pieces[j], shift);
            if (j == 0) {
                F = uj;
            } else {
                Clopen window;
                for (int i = 1; i <= n; ++i) {
                    window = unite(c, window, preimage_iter(c, F, i));
                    window = unite(c, window, forward_enclosure_at(c, F, i, F.max_level()));
                }
                F = unite(c, F, subtract(c, subtract(c, uj, F), window));
            }
            if (!is_separated(c, F, n))
                throw invariant_error("greedy marker union lost (n+1)-separation at piece " + std::to_string(j + 1));
        }

        MarkerSet ms{F, n, shift + n, 2 * n + 1, m};
        MarkerCheck chk = marker_invariants(c, level, ms);
        if (chk.ok()) return ms;
        if (!chk.separated) throw invariant_error("marker separation check failed: " + chk.detail);

        // coverage failed: tighten by deepening every atom one level
        std::vector<std::pair<int, int>> finer;
        for (const auto& [l, cell] : atoms) {
            c.ensure_level(l + 1);
            for (int ch : c.kids[l][cell]) finer.emplace_back(l + 1, ch);
        }
        std::sort(finer.begin(), finer.end());
        atoms = std::move(finer);
        if (attempt + 1 >= 8)
            throw budget_error("marker covering property not reached within the deepening budget");
    }
}

MarkerCheck marker_invariants(Covering& c, const SupercyclicalLevel& level, const MarkerSet& ms) {
    MarkerCheck chk;
    std::ostringstream os;
    chk.separated = is_separated(c, ms.F, ms.n);
    if (!chk.separated) os << "F is not " << (ms.n + 1) << "-separated\n";
    Clopen S = supercyclical_clopen(c, level);
    Clopen target = preimage_iter(c, S, ms.t);
    Clopen ladder;
    Clopen cur = ms.F;
    for (int j = 0; j <= ms.N; ++j) {
        ladder = unite(c, ladder, cur);
        if (j < ms.N) cur = preimage(c, cur);
    }
    chk.covers = subset(c, target, ladder);
    if (!chk.covers) os << "F..f^-" << ms.N << "F do not cover f^-" << ms.t << " of the supercyclical part\n";
    chk.detail = os.str();
    return chk;
}

namespace {

struct LevelCircuit {
    std::vector<int> blocks;  // rotated-to-least block index sequence
};

std::vector<LevelCircuit> supercyclical_circuits(Covering& c, const SupercyclicalLevel& st, const LevelGraph& q) {
    auto mask = st.attracted_mask(q.size());
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
    std::vector<LevelCircuit> res;
    for (const auto& cyc : circuits(sub)) {
        LevelCircuit lc;
        for (int i : cyc) lc.blocks.push_back(verts[i]);
        res.push_back(std::move(lc));
    }
    return res;
}

// Shared construction behind the bootstrap and the relative marking.
// parent_marks is indexed by the block of parent_part containing each block;
// for the bootstrap both are null and every parent is treated as a potential.
MarkedLevel well_mark_core(Covering& c, const Partition& start, const Partition* parent_part,
                           const std::vector<Mark>* parent_marks, int eta_prev, int target_tau, int base_lvl) {
    const int s_run = 2 * eta_prev;
    const int required_order = std::max(s_run, target_tau);

    Partition p0 = meet(c, start, singleton_partition(c, base_lvl));
    for (const auto& o : c.orbits)
        if (o.period <= required_order) p0 = refine_by_set(c, p0, o.basin);
    SupercyclicalLevel st = supercyclical_structure(c, p0, required_order);

    if (eta_prev == 0) {
        LevelGraph q = quotient(c, st.part);
        if (!supercyclical_circuits(c, st, q).empty())
            throw invariant_error("supercyclical circuits appeared without a circuit upstream");
        MarkedLevel ml;
        ml.s = st;
        ml.chi.assign(st.part.nblocks, Mark::Down);
        auto mask = st.attracted_mask(st.part.nblocks);
        for (int b = 0; b < st.part.nblocks; ++b)
            if (mask[b]) ml.chi[b] = Mark::Zero;
        return ml;
    }

    const int N = 2 * s_run + 1;
    for (int anchor = st.part.lvl;; ++anchor) {
        c.ensure_level(anchor);
        // greedy (s_run+1)-separated union of supercyclical cells at the anchor
        Clopen S = supercyclical_clopen(c, st);
        std::vector<int> cells = expand_at(c, S, anchor);
        Clopen F;
        std::vector<Clopen> ladders;  // of the accepted F, 0..s_run
        auto rebuild_ladders = [&]() {
            ladders.assign(1, F);
            for (int j = 1; j <= s_run; ++j) ladders.push_back(preimage(c, ladders.back()));
        };
        rebuild_ladders();
        for (int cell : cells) {
            Clopen one = clopen_of_cells(c, anchor, {cell});
            std::vector<Clopen> cand{one};
            for (int j = 1; j <= s_run; ++j) cand.push_back(preimage(c, cand.back()));
            bool ok = true;
            for (int i = 0; i <= s_run && ok; ++i)
                for (int j = 0; j <= s_run && ok; ++j) {
                    if (i == j) continue;
                    ok = disjoint(c, cand[i], ladders[j]);
                }
            for (int i = 0; i <= s_run && ok; ++i)
                for (int j = i + 1; j <= s_run && ok; ++j) ok = disjoint(c, cand[i], cand[j]);
            if (!ok) continue;
            F = unite(c, F, one);
            for (int j = 0; j <= s_run; ++j) ladders[j] = unite(c, ladders[j], cand[j]);
        }
        if (F.empty()) continue;

        // full ladder to depth N and the refinement deciding membership
        std::vector<Clopen> full{F};
        for (int j = 1; j <= N; ++j) full.push_back(preimage(c, full.back()));
        Partition vp = st.part;
        for (const Clopen& lj : full) vp = refine_by_set(c, vp, lj);
        SupercyclicalLevel stv = supercyclical_structure(c, vp, required_order);
        LevelGraph q = quotient(c, stv.part);

        // every supercyclical circuit must meet the ladder
        std::vector<LevelCircuit> circs = supercyclical_circuits(c, stv, q);
        std::vector<int> ladder_level(q.size(), -1);  // least j with block inside f^-j F
        for (int b = 0; b < q.size(); ++b) {
            Clopen bc = block_clopen(c, stv.part, b);
            for (int j = 0; j <= N; ++j)
                if (subset(c, bc, full[j])) {
                    ladder_level[b] = j;
                    break;
                }
        }
        bool all_hit = true;
        for (const auto& lc : circs) {
            bool hit = false;
            for (int b : lc.blocks) hit = hit || ladder_level[b] >= 0;
            all_hit = all_hit && hit;
        }
        if (!all_hit) continue;

        // mark assignment
        std::vector<int> par_blocks;
        if (parent_part) par_blocks = block_parents(c, stv.part, *parent_part);
        auto parent_is_potential = [&](int b) {
            if (!parent_marks) return true;
            return (*parent_marks)[par_blocks[b]] == Mark::Up;
        };

        std::vector<Mark> chi(stv.part.nblocks, Mark::Down);
        auto mask = stv.attracted_mask(stv.part.nblocks);
        for (int b = 0; b < stv.part.nblocks; ++b)
            if (mask[b]) chi[b] = Mark::Zero;
        std::vector<char> assigned(stv.part.nblocks, 0);

        for (const auto& lc : circs) {
            const int len = static_cast<int>(lc.blocks.size());
            int fpos = -1;
            for (int i = 0; i < len && fpos < 0; ++i)
                if (ladder_level[lc.blocks[i]] == 0) fpos = i;
            if (fpos < 0) {
                // walk forward from any ladder block; membership descends at
                // least one ladder rung per edge once the partition refines
                // the ladder sets
                int pos = -1;
                for (int i = 0; i < len && pos < 0; ++i)
                    if (ladder_level[lc.blocks[i]] >= 0) pos = i;
                int guard = 0;
                while (ladder_level[lc.blocks[pos]] != 0) {
                    pos = (pos + 1) % len;
                    if (ladder_level[lc.blocks[pos]] < 0 || ++guard > N + len)
                        throw invariant_error("ladder membership did not descend to the marker set along a circuit");
                }
                fpos = pos;
            }
            // run = s_run consecutive vertices ending at fpos
            auto run_block = [&](int i) { return lc.blocks[((fpos - (s_run - 1) + i) % len + len) % len]; };
            for (int i = 0; i < s_run; ++i) {
                int b = run_block(i);
                if (ladder_level[b] != s_run - 1 - i)
                    throw invariant_error("circuit run does not follow the marker ladder");
            }
            // first window: positions 0..eta_prev-1, second: eta_prev..2*eta_prev-1
            auto place = [&](int w0, Mark m) {
                for (int i = w0; i < w0 + eta_prev; ++i)
                    if (assigned[run_block(i)] && chi[run_block(i)] == m) return;
                for (int i = w0; i < w0 + eta_prev; ++i) {
                    int b = run_block(i);
                    if (!assigned[b] && parent_is_potential(b)) {
                        chi[b] = m;
                        assigned[b] = 1;
                        return;
                    }
                }
                throw invariant_error("no preimage of a potential available in a marking window");
            };
            place(0, Mark::Star);
            place(eta_prev, Mark::Up);
        }

        MarkedLevel ml;
        ml.s = stv;
        ml.s.tau = std::max(required_order, target_tau);
        ml.chi = std::move(chi);
        MarkReport rep = check_well_marked(c, ml);
        if (!rep.ok()) throw invariant_error("marking construction is not well marked: " + rep.failures.front());
        return ml;
    }
}

}  // namespace

MarkedLevel bootstrap_well_mark(Covering& c) {
    Partition start = singleton_partition(c, 0);
    return well_mark_core(c, start, nullptr, nullptr, /*eta_prev=*/1, /*target_tau=*/1, /*base_lvl=*/0);
}

MarkedLevel well_mark_relative(Covering& c, const MarkedLevel& prev, int base_lvl) {
    int eta_prev = eta(c, prev.s);
    MarkedLevel ml = well_mark_core(c, prev.s.part, &prev.s.part, &prev.chi, std::max(eta_prev, 0),
                                    prev.s.tau + 1, base_lvl);
    if (ml.s.tau < prev.s.tau + 1) ml.s.tau = prev.s.tau + 1;
    MarkReport rel = check_relative_marks(c, ml, prev);
    if (!rel.ok()) throw invariant_error("relative marking violated: " + rel.failures.front());
    return ml;
}

MarkReport check_well_marked(Covering& c, const MarkedLevel& level) {
    MarkReport rep;
    auto mask = level.s.attracted_mask(level.s.part.nblocks);
    for (int b = 0; b < level.s.part.nblocks; ++b) {
        if (mask[b] && level.chi[b] != Mark::Zero)
            rep.failures.push_back("attracted block '" + block_label(c, level.s.part, b) + "' is not marked 0");
        if (!mask[b] && level.chi[b] == Mark::Zero)
            rep.failures.push_back("supercyclical block '" + block_label(c, level.s.part, b) + "' is marked 0");
    }
    LevelGraph q = quotient(c, level.s.part);
    for (const auto& lc : supercyclical_circuits(c, level.s, q)) {
        bool star = false, up = false;
        for (int b : lc.blocks) {
            star = star || level.chi[b] == Mark::Star;
            up = up || level.chi[b] == Mark::Up;
        }
        if (!star || !up) {
            std::ostringstream os;
            os << "supercyclical circuit {";
            for (size_t i = 0; i < lc.blocks.size(); ++i)
                os << (i ? "," : "") << block_label(c, level.s.part, lc.blocks[i]);
            os << "} lacks a " << (star ? "potential" : "marker");
            rep.failures.push_back(os.str());
        }
    }
    return rep;
}

MarkReport check_relative_marks(Covering& c, const MarkedLevel& child, const MarkedLevel& parent) {
    MarkReport rep;
    std::vector<int> par = block_parents(c, child.s.part, parent.s.part);
    auto mask = child.s.attracted_mask(child.s.part.nblocks);
    for (int b = 0; b < child.s.part.nblocks; ++b) {
        if (mask[b]) continue;
        Mark cm = child.chi[b];
        Mark pm = parent.chi[par[b]];
        bool ok = (cm == Mark::Star && pm == Mark::Up) || (cm == Mark::Up && pm == Mark::Up) ||
                  (cm == Mark::Down && (pm == Mark::Up || pm == Mark::Star || pm == Mark::Down));
        if (!ok)
            rep.failures.push_back(std::string("block '") + block_label(c, child.s.part, b) + "' carries word " +
                                   mark_char(cm) + mark_char(pm));
    }
    return rep;
}

}  // namespace cantor
