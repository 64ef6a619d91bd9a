#include "cantor/verify.hpp"

#include "cantor/circuits.hpp"
#include "cantor/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cantor {

std::string SuiteReport::to_string() const {
    std::ostringstream os;
    os << checks << " checks, " << failures.size() << " failures\n";
    for (const auto& f : failures) os << "  FAIL " << f << "\n";
    return os.str();
}

namespace {

void fail(SuiteReport& rep, const std::string& msg) { rep.failures.push_back(msg); }

}  // namespace

SuiteReport structural_suite(Covering& c, const MarkedCovering& mc) {
    SuiteReport rep;
    for (size_t li = 0; li < mc.levels.size(); ++li) {
        const MarkedLevel& ml = mc.levels[li];
        const Partition& p = ml.s.part;
        LevelGraph q = quotient(c, p);
        auto mask = ml.s.attracted_mask(p.nblocks);
        std::string at = " at level " + std::to_string(li + 1);

        // attracted sets: stable, contain the circuit, one circuit projecting
        // onto the orbit, no divergent attracted vertex
        for (size_t oi = 0; oi < c.orbits.size(); ++oi) {
            const auto& blocks = ml.s.attracted[oi];
            if (blocks.empty()) continue;
            const OrbitInfo& o = c.orbits[oi];
            std::set<int> inset(blocks.begin(), blocks.end());
            ++rep.checks;
            for (int b : blocks)
                for (int v : q.out[b])
                    if (!inset.count(v))
                        fail(rep, "attracted set of the period-" + std::to_string(o.period) +
                                      " orbit is not stable" + at);
            std::vector<int> cblocks;
            for (int cell : track_circuit(c, o, p.lvl)) cblocks.push_back(p.block_of[cell]);
            ++rep.checks;
            for (int b : cblocks)
                if (!inset.count(b))
                    fail(rep, "attracted set does not contain its orbit circuit" + at);
            std::map<int, int> idx;
            std::vector<int> verts(blocks.begin(), blocks.end());
            for (size_t i = 0; i < verts.size(); ++i) idx[verts[i]] = static_cast<int>(i);
            std::vector<std::vector<int>> sub(verts.size());
            for (size_t i = 0; i < verts.size(); ++i)
                for (int v : q.out[verts[i]])
                    if (idx.count(v)) sub[i].push_back(idx[v]);
            std::vector<Cycle> cs = circuits(sub);
            ++rep.checks;
            if (cs.size() != 1) {
                fail(rep, "attracted set has " + std::to_string(cs.size()) + " circuits" + at);
            } else {
                std::vector<int> got;
                for (int i : cs[0]) got.push_back(verts[i]);
                if (!is_rotation(got, cblocks))
                    fail(rep, "attracted circuit does not match the declared orbit" + at);
            }
            ++rep.checks;
            for (int b : blocks)
                if (q.out[b].size() >= 2)
                    fail(rep, "divergent vertex '" + block_label(c, p, b) + "' in the attracted part" + at);
        }
        // attracted sets pairwise disjoint
        {
            std::vector<int> owner(p.nblocks, -1);
            ++rep.checks;
            for (size_t oi = 0; oi < c.orbits.size(); ++oi)
                for (int b : ml.s.attracted[oi]) {
                    if (owner[b] != -1) fail(rep, "attracted sets of two orbits overlap" + at);
                    owner[b] = static_cast<int>(oi);
                }
        }
        // marking laws
        ++rep.checks;
        for (const auto& f : check_well_marked(c, ml).failures) fail(rep, f + at);
        // divergent blocks are markers
        ++rep.checks;
        for (int b = 0; b < p.nblocks; ++b)
            if (q.out[b].size() >= 2 && ml.chi[b] != Mark::Star)
                fail(rep, "divergent block '" + block_label(c, p, b) + "' is not a marker" + at);
        // base refinement and tau growth
        ++rep.checks;
        if (!refines_base(c, p, static_cast<int>(li)))
            fail(rep, "level does not refine base level " + std::to_string(li + 1));
        ++rep.checks;
        if (ml.s.tau < static_cast<int>(li) + 1) fail(rep, "tau below the level index" + at);
    }
    for (size_t li = 0; li + 1 < mc.levels.size(); ++li) {
        const MarkedLevel& par = mc.levels[li];
        const MarkedLevel& ch = mc.levels[li + 1];
        std::string at = " between levels " + std::to_string(li + 1) + " and " + std::to_string(li + 2);
        ++rep.checks;
        try {
            block_parents(c, ch.s.part, par.s.part);
        } catch (const invariant_error& e) {
            fail(rep, std::string("refinement broken") + at + ": " + e.what());
            continue;
        }
        ++rep.checks;
        for (const auto& f : check_relative_marks(c, ch, par).failures) fail(rep, f + at);
        ++rep.checks;
        if (ch.s.tau < par.s.tau) fail(rep, "tau decreases" + at);
    }
    // at most one star along every bonding chain
    if (!mc.levels.empty()) {
        const int top = static_cast<int>(mc.levels.size()) - 1;
        std::vector<std::vector<int>> parents;
        for (int l = 1; l <= top; ++l)
            parents.push_back(block_parents(c, mc.levels[l].s.part, mc.levels[l - 1].s.part));
        for (int b = 0; b < mc.levels[top].s.part.nblocks; ++b) {
            int stars = 0;
            int cur = b;
            for (int l = top; l >= 0; --l) {
                if (mc.levels[l].chi[cur] == Mark::Star) ++stars;
                if (l > 0) cur = parents[l - 1][cur];
            }
            ++rep.checks;
            if (stars > 1)
                fail(rep, "chain of block '" + block_label(c, mc.levels[top].s.part, b) + "' carries " +
                              std::to_string(stars) + " stars");
        }
    }
    return rep;
}

SuiteReport geometry_suite(Covering& c, const MarkedCovering& mc, const IntervalAssignment& a) {
    SuiteReport rep;
    for (int l = 0; l < a.nlevels; ++l) {
        const MarkedLevel& ml = mc.levels[l];
        std::string at = " at level " + std::to_string(l + 1);
        ContractionGraph g = acyclic_A(c, ml);
        const auto& iv = a.iv[l];
        for (size_t b = 0; b < iv.size(); ++b) {
            ++rep.checks;
            if (iv[b].len <= 0) fail(rep, "nonpositive interval length" + at);
            if (iv[b].len > a.rates.eps[l])
                fail(rep, "length of '" + block_label(c, ml.s.part, static_cast<int>(b)) + "' exceeds eps" + at);
        }
        for (int u = 0; u < static_cast<int>(g.out.size()); ++u)
            for (int v : g.out[u]) {
                ++rep.checks;
                if (iv[v].len > a.rates.lambda[l] * iv[u].len)
                    fail(rep, "length calibration fails on edge ('" + block_label(c, ml.s.part, u) + "','" +
                                  block_label(c, ml.s.part, v) + "')" + at);
            }
        if (l == 0) continue;

        std::vector<int> par = block_parents(c, ml.s.part, mc.levels[l - 1].s.part);
        std::vector<std::vector<int>> children(a.iv[l - 1].size());
        for (size_t b = 0; b < iv.size(); ++b) children[par[b]].push_back(static_cast<int>(b));
        const Rational half(1, 2);
        Rational bound_den = Rational(static_cast<int>(iv.size()) + 1);
        for (size_t w = 0; w < children.size(); ++w) {
            const Interval& pw = a.iv[l - 1][w];
            for (size_t i = 0; i < children[w].size(); ++i) {
                const Interval& ci = iv[children[w][i]];
                ++rep.checks;
                if (!contains(pw, ci))
                    fail(rep, "child '" + block_label(c, ml.s.part, children[w][i]) + "' escapes its parent" + at);
                ++rep.checks;
                if (ci.len > half * pw.len / bound_den)
                    fail(rep, "spacing bound fails for '" + block_label(c, ml.s.part, children[w][i]) + "'" + at);
                for (size_t j = i + 1; j < children[w].size(); ++j) {
                    ++rep.checks;
                    if (!disjoint_strict(ci, iv[children[w][j]]))
                        fail(rep, "sibling intervals overlap under '" +
                                      block_label(c, mc.levels[l - 1].s.part, static_cast<int>(w)) + "'" + at);
                }
            }
        }
        auto it = a.containers[l];
        for (const auto& [w, conts] : it) {
            const Interval& pw = a.iv[l - 1][w];
            for (size_t k = 0; k < conts.size(); ++k) {
                ++rep.checks;
                if (!contains(pw, conts[k])) fail(rep, "container escapes its parent" + at);
                for (size_t k2 = k + 1; k2 < conts.size(); ++k2) {
                    ++rep.checks;
                    if (!disjoint_strict(conts[k], conts[k2])) fail(rep, "containers overlap" + at);
                }
            }
            DepthData dd = delta_omega(c, ml.s);
            for (int b : children[w]) {
                int om = static_cast<int>(conts.size()) - 1;
                int k = om - dd.delta[b];
                ++rep.checks;
                if (k < 0 || k > om || !contains(conts[k], iv[b]))
                    fail(rep, "child interval escapes its container" + at);
            }
        }
    }
    return rep;
}

std::string ContractionReport::to_string() const {
    std::ostringstream os;
    os << "exponent " << exponent << " depth " << depth << ": " << pairs_total << " ordered pairs, "
       << pairs_eligible << " eligible, " << pairs_certified << " certified, " << pairs_ineligible
       << " out of hypothesis";
    if (ratio_valid) os << ", max ratio " << approx_decimal(max_ratio);
    os << "\n";
    for (const auto& f : failures) os << "  FAIL " << f << "\n";
    return os.str();
}

ContractionReport contraction_certificate(Covering& c, const MarkedCovering& mc, const IntervalAssignment& a,
                                          int exponent) {
    ContractionReport rep;
    rep.exponent = exponent;
    rep.depth = a.nlevels;
    const int N = a.nlevels;
    if (N < 2) throw invariant_error("contraction certificate needs at least two levels");

    std::vector<LevelGraph> q;
    std::vector<std::vector<int>> par(N);  // par[l]: level l -> l-1, for l >= 1
    for (int l = 0; l < N; ++l) {
        q.push_back(quotient(c, mc.levels[l].s.part));
        if (l >= 1) par[l] = block_parents(c, mc.levels[l].s.part, mc.levels[l - 1].s.part);
    }
    std::vector<std::vector<char>> divergent(N), starred(N), on_circuit(N);
    for (int l = 0; l < N; ++l) {
        divergent[l].assign(q[l].size(), 0);
        starred[l].assign(q[l].size(), 0);
        on_circuit[l].assign(q[l].size(), 0);
        DepthData dd = delta_omega(c, mc.levels[l].s);
        for (int b = 0; b < q[l].size(); ++b) {
            divergent[l][b] = q[l].out[b].size() >= 2;
            starred[l][b] = mc.levels[l].chi[b] == Mark::Star;
            on_circuit[l][b] = dd.delta[b] == 0 && mc.levels[l].chi[b] == Mark::Zero;
        }
    }

    const int M = q[N - 1].size();
    // chains of every deepest block
    std::vector<std::vector<int>> chain(M, std::vector<int>(N));
    for (int v = 0; v < M; ++v) {
        chain[v][N - 1] = v;
        for (int l = N - 1; l >= 1; --l) chain[v][l - 1] = par[l][chain[v][l]];
    }
    // E(v): deepest 0-based level carrying a star or divergence on the chain,
    // or a star on the image chain (one level shallower); -1 when clean.
    std::vector<int> ev(M, -1);
    for (int v = 0; v < M; ++v) {
        for (int l = 0; l < N; ++l)
            if (divergent[l][chain[v][l]] || starred[l][chain[v][l]]) ev[v] = l;
        // image chain: successors of the deepest block, projected upward
        std::set<int> heads;
        for (int w : q[N - 1].out[v]) heads.insert(par[N - 1][w]);
        for (int h : heads) {
            int cur = h;
            for (int l = N - 2; l >= 0; --l) {
                if (starred[l][cur]) ev[v] = std::max(ev[v], l);
                if (l > 0) cur = par[l][cur];
            }
        }
    }
    // descendant counts with E(v) <= e, per (level, block)
    // cnt[l][b][e+1], e in -1..N-1
    std::vector<std::vector<std::vector<long long>>> cnt(N);
    for (int l = 0; l < N; ++l) cnt[l].assign(q[l].size(), std::vector<long long>(N + 1, 0));
    for (int v = 0; v < M; ++v)
        for (int l = 0; l < N; ++l) cnt[l][chain[v][l]][ev[v] + 1] += 1;
    for (int l = 0; l < N; ++l)
        for (auto& row : cnt[l])
            for (int e = 1; e <= N; ++e) row[e] += row[e - 1];

    const Rational bound = pow2(-exponent);

    // hull of successor intervals per block, used as the image enclosure
    auto succ_hull = [&](int l, int b) {
        bool first = true;
        Interval h{Rational(0), Rational(1)};
        for (int w : q[l].out[b]) {
            if (first) {
                h = a.iv[l][w];
                first = false;
            } else {
                h = hull(h, a.iv[l][w]);
            }
        }
        if (first) throw invariant_error("block without successors");
        return h;
    };

    // level-0 disagreements are always out of hypothesis
    for (int x = 0; x < q[0].size(); ++x)
        for (int y = 0; y < q[0].size(); ++y) {
            if (x == y) continue;
            long long nx = cnt[0][x][N], ny = cnt[0][y][N];
            rep.pairs_total += nx * ny;
            rep.pairs_ineligible += nx * ny;
        }

    for (int d = 1; d < N; ++d) {
        std::vector<std::vector<int>> children(q[d - 1].size());
        for (int b = 0; b < q[d].size(); ++b) children[par[d][b]].push_back(b);
        for (int w = 0; w < q[d - 1].size(); ++w) {
            const auto& ch = children[w];
            if (ch.size() < 2) continue;
            const bool parent_div = divergent[d - 1][w];
            const bool case2 = on_circuit[d - 1][w];
            // eligibility threshold on the 0-based disagreement level
            const int dmin_case = case2 ? exponent + 3 : exponent + 1;
            for (int ai = 0; ai < static_cast<int>(ch.size()); ++ai)
                for (int bi = 0; bi < static_cast<int>(ch.size()); ++bi) {
                    if (ai == bi) continue;
                    const int A = ch[ai], B = ch[bi];
                    long long all_a = cnt[d][A][N];
                    long long all_b = cnt[d][B][N];
                    rep.pairs_total += all_a * all_b;
                    long long elig_a = 0;
                    if (!parent_div && d >= dmin_case) {
                        int slot = std::min(N, d);  // E(v) <= d-2 lives at index (d-2)+2
                        elig_a = cnt[d][A][slot];
                    }
                    long long elig = elig_a * all_b;
                    rep.pairs_eligible += elig;
                    rep.pairs_ineligible += all_a * all_b - elig;
                    if (elig == 0) continue;
                    Interval ha = succ_hull(d, A);
                    Interval hb = succ_hull(d, B);
                    Rational upper = sup_distance(ha, hb);
                    Rational lower = inf_distance(a.iv[d][A], a.iv[d][B]);
                    if (lower <= 0) throw invariant_error("sibling intervals are not separated");
                    if (upper <= bound * lower) {
                        rep.pairs_certified += elig;
                        Rational ratio = upper / lower;
                        if (!rep.ratio_valid || ratio > rep.max_ratio) {
                            rep.max_ratio = ratio;
                            rep.ratio_valid = true;
                        }
                    } else {
                        std::ostringstream os;
                        os << "pair group at level " << (d + 1) << " blocks '"
                           << block_label(c, mc.levels[d].s.part, A) << "','"
                           << block_label(c, mc.levels[d].s.part, B) << "': ratio bound "
                           << approx_decimal(upper / lower) << " exceeds 2^-" << exponent << " ("
                           << elig << " eligible pairs)";
                        rep.failures.push_back(os.str());
                    }
                }
        }
    }
    return rep;
}

std::string NonAttractingReport::to_string() const {
    std::ostringstream os;
    if (entries.empty()) return "no non-attracting periodic candidates found\n";
    for (const auto& e : entries)
        os << "period-" << e.period << " candidate {" << e.circuit << "}: " << e.detail << "\n";
    return os.str();
}

NonAttractingReport negative_detector(Covering& c, int depth_lvl, int max_period) {
    NonAttractingReport rep;
    c.ensure_level(depth_lvl);
    for (const auto& cand : periodic_candidates(c, max_period, depth_lvl)) {
        bool evidence = false;
        std::string detail;
        for (int l = cand.first_lvl; l <= depth_lvl && !evidence; ++l) {
            const std::vector<int>& cells = cand.chain[l - cand.first_lvl];
            Clopen circ = clopen_of_cells(c, l, cells);
            Clopen closed = forward_closure(c, circ);
            std::vector<int> cc = expand_at(c, closed, l);
            std::map<int, int> idx;
            for (size_t i = 0; i < cc.size(); ++i) idx[cc[i]] = static_cast<int>(i);
            std::vector<std::vector<int>> sub(cc.size());
            for (size_t i = 0; i < cc.size(); ++i)
                for (int v : c.levels[l].out[cc[i]])
                    if (idx.count(v)) sub[i].push_back(idx[v]);
            std::vector<Cycle> cs;
            try {
                cs = circuits(sub);
            } catch (const invariant_error&) {
                continue;
            }
            if (cs.size() == 1 && static_cast<int>(cs[0].size()) == cand.period) {
                std::vector<int> got;
                for (int i : cs[0]) got.push_back(cc[i]);
                evidence = is_rotation(got, cells);
            }
        }
        if (!evidence) {
            NonAttractingReport::Entry e;
            e.period = cand.period;
            std::ostringstream os;
            const auto& cells = cand.chain.back();
            for (size_t i = 0; i < cells.size(); ++i)
                os << (i ? "," : "") << c.levels[cand.first_lvl + cand.chain.size() - 1].ids[cells[i]];
            e.circuit = os.str();
            e.detail = "no stable neighborhood with a single matching circuit up to depth " +
                       std::to_string(depth_lvl + 1);
            rep.entries.push_back(std::move(e));
        }
    }
    return rep;
}

}  // namespace cantor
