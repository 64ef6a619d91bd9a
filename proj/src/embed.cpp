#include "cantor/embed.hpp"

#include "cantor/circuits.hpp"
#include "cantor/errors.hpp"

#include <algorithm>
#include <set>

namespace cantor {

Rates compute_rates(const std::vector<std::pair<int, int>>& sizes) {
    Rates r;
    const int n = static_cast<int>(sizes.size());
    for (int l = 0; l + 1 < n; ++l) {
        r.lambda.push_back(pow2(-(l + 1)) / Rational(sizes[l + 1].first + 1));
        if (l == 0) r.eps.push_back(Rational(1));
        const long e = sizes[l].second;
        Rational next = r.eps[l] * rpow(r.lambda[l], e) /
                        (Rational(4) * rpow(Rational(2), static_cast<long>(l + 1) * e) *
                         Rational(sizes[l + 1].first + 1));
        r.eps.push_back(next);
    }
    return r;
}

ContractionGraph acyclic_A(Covering& c, const MarkedLevel& level) {
    LevelGraph q = quotient(c, level.s.part);
    const int n = q.size();
    ContractionGraph g;
    g.removed.assign(n, 0);
    g.circuit_orbit.assign(n, -1);
    DepthData dd = delta_omega(c, level.s);
    for (size_t oi = 0; oi < c.orbits.size(); ++oi)
        for (int b : level.s.attracted[oi])
            if (dd.delta[b] == 0) {
                g.removed[b] = 1;
                g.circuit_orbit[b] = static_cast<int>(oi);
            }
    g.out.assign(n, {});
    g.in.assign(n, {});
    for (int u = 0; u < n; ++u) {
        if (g.removed[u]) continue;
        for (int v : q.out[u]) {
            if (g.removed[v]) continue;
            if (level.chi[v] == Mark::Star) continue;  // edges pointing at a marker
            g.out[u].push_back(v);
            g.in[v].push_back(u);
        }
    }
    std::vector<std::vector<int>> probe = g.out;
    if (!topo_sort(probe).ok) throw invariant_error("contraction graph has a residual cycle");
    return g;
}

namespace {

std::vector<Rational> level_lengths(Covering& c, const MarkedLevel& level, const ContractionGraph& g,
                                    const Rational& lambda, const Rational& eps) {
    LevelGraph q = quotient(c, level.s.part);
    const int n = q.size();
    std::vector<Rational> len(n, Rational(0));
    TopoResult topo = topo_sort(g.out);
    for (int u : topo.order) {
        if (g.removed[u]) continue;
        bool initial = g.in[u].empty();
        if (initial) {
            len[u] = eps;
        } else {
            Rational best;
            bool first = true;
            for (int w : g.in[u]) {
                Rational cand = lambda * len[w];
                if (first || cand < best) best = cand;
                first = false;
            }
            len[u] = best;
        }
    }
    // attracted-circuit blocks: lambda * (min feeder length), feeders taken
    // over non-circuit in-neighbors in the full quotient
    for (size_t oi = 0; oi < c.orbits.size(); ++oi) {
        Rational m;
        bool found = false;
        for (int b = 0; b < n; ++b) {
            if (g.circuit_orbit[b] != static_cast<int>(oi)) continue;
            for (int u : q.in[b]) {
                if (g.removed[u]) continue;
                if (!found || len[u] < m) m = len[u];
                found = true;
            }
        }
        Rational base = found ? m : eps;
        for (int b = 0; b < n; ++b)
            if (g.circuit_orbit[b] == static_cast<int>(oi)) len[b] = lambda * base;
    }
    return len;
}

}  // namespace

IntervalAssignment assign_intervals(Covering& c, const MarkedCovering& mc, int nlevels) {
    if (static_cast<int>(mc.levels.size()) < nlevels + 1)
        throw invariant_error("interval assignment at depth " + std::to_string(nlevels) +
                              " needs one extra marked level for the shrink rate");
    IntervalAssignment a;
    a.nlevels = nlevels;
    std::vector<std::pair<int, int>> sizes;
    std::vector<LevelGraph> quotients;
    for (int l = 0; l <= nlevels; ++l) {
        LevelGraph q = quotient(c, mc.levels[l].s.part);
        int edges = 0;
        for (const auto& o : q.out) edges += static_cast<int>(o.size());
        sizes.emplace_back(q.size(), edges);
        quotients.push_back(std::move(q));
    }
    a.rates = compute_rates(sizes);
    a.containers.resize(nlevels);

    std::vector<std::vector<Rational>> len(nlevels);
    std::vector<ContractionGraph> graphs;
    std::vector<DepthData> depths;
    for (int l = 0; l < nlevels; ++l) {
        graphs.push_back(acyclic_A(c, mc.levels[l]));
        depths.push_back(delta_omega(c, mc.levels[l].s));
        len[l] = level_lengths(c, mc.levels[l], graphs[l], a.rates.lambda[l], a.rates.eps[l]);
    }

    a.iv.resize(nlevels);
    // level 0: free layout, midpoints 2i in canonical order
    a.iv[0].resize(sizes[0].first);
    for (int b = 0; b < sizes[0].first; ++b) a.iv[0][b] = Interval{Rational(2 * b), len[0][b]};

    for (int l = 1; l < nlevels; ++l) {
        const int n = sizes[l].first;
        a.iv[l].resize(n);
        std::vector<int> par = block_parents(c, mc.levels[l].s.part, mc.levels[l - 1].s.part);
        std::vector<std::vector<int>> children(sizes[l - 1].first);
        for (int b = 0; b < n; ++b) children[par[b]].push_back(b);  // ascending = canonical
        for (int w = 0; w < sizes[l - 1].first; ++w) {
            if (children[w].empty())
                throw invariant_error("parent block without children in the marked sequence");
            const Interval& pw = a.iv[l - 1][w];
            Rational left = pw.lo();
            if (!graphs[l - 1].removed[w]) {
                // generic parent: children equidistributed
                const int qn = static_cast<int>(children[w].size());
                for (int k = 1; k <= qn; ++k) {
                    int b = children[w][k - 1];
                    a.iv[l][b] = Interval{left + Rational(k) * pw.len / Rational(qn + 1), len[l][b]};
                }
            } else {
                // parent on an attracted circuit: container placement
                const int oi = graphs[l - 1].circuit_orbit[w];
                const int omega = depths[l].omega[oi];
                if (omega < 0) throw invariant_error("missing depth data for an attracted orbit");
                const long n_paper = l + 1;
                std::vector<Interval> conts(omega + 1);
                Rational clen = pw.len / (Rational(4) * rpow(Rational(2), n_paper * omega));
                for (int k = 0; k <= omega; ++k) {
                    Rational mid;
                    if (k < omega)
                        mid = left + pw.len / (Rational(2) * rpow(Rational(2), n_paper * k));
                    else
                        mid = left + pw.len / (Rational(8) * rpow(Rational(2), n_paper * omega));
                    conts[k] = Interval{mid, clen};
                }
                std::vector<std::vector<int>> group(omega + 1);
                for (int b : children[w]) {
                    int d = depths[l].delta[b];
                    if (d < 0 || d > omega)
                        throw invariant_error("child of an attracted-circuit block outside the attracted part");
                    group[omega - d].push_back(b);
                }
                for (int k = 0; k <= omega; ++k) {
                    const int gn = static_cast<int>(group[k].size());
                    for (int j = 1; j <= gn; ++j) {
                        int b = group[k][j - 1];
                        a.iv[l][b] = Interval{conts[k].lo() + Rational(j) * conts[k].len / Rational(gn + 1),
                                              len[l][b]};
                    }
                }
                a.containers[l][w] = std::move(conts);
            }
        }
    }

    // affine normalization of the hull into [0,1]
    Rational lo = a.iv[0][0].lo(), hi = a.iv[0][0].hi();
    for (const Interval& i : a.iv[0]) {
        lo = std::min(lo, i.lo());
        hi = std::max(hi, i.hi());
    }
    Rational width = hi - lo;
    if (width <= 0) width = 1;
    for (auto& lvl : a.iv)
        for (auto& i : lvl) i = Interval{(i.mid - lo) / width, i.len / width};
    for (auto& m : a.containers)
        for (auto& [w, conts] : m)
            for (auto& i : conts) i = Interval{(i.mid - lo) / width, i.len / width};
    for (auto& e : a.rates.eps) e = e / width;
    return a;
}

Interval psi_enclosure(Covering& c, const MarkedCovering& mc, const IntervalAssignment& a,
                       const std::vector<int>& chain) {
    if (chain.empty() || static_cast<int>(chain.size()) > a.nlevels)
        throw invariant_error("chain does not fit the assignment depth");
    for (size_t l = 0; l + 1 < chain.size(); ++l) {
        std::vector<int> par = block_parents(c, mc.levels[l + 1].s.part, mc.levels[l].s.part);
        if (par[chain[l + 1]] != chain[l]) throw invariant_error("inconsistent bonding chain");
    }
    return a.iv[chain.size() - 1][chain.back()];
}

}  // namespace cantor
