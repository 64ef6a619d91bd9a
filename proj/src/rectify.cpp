#include "cantor/rectify.hpp"

#include "cantor/circuits.hpp"
#include "cantor/errors.hpp"
#include "cantor/verify.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace cantor {

AcyclicView build_acyclic_view(Covering& c, const MarkedLevel& level) {
    LevelGraph q = quotient(c, level.s.part);
    const int n = q.size();
    const auto& chi = level.chi;

    // R: zero blocks without a divergent nonzero in-neighbor
    std::vector<char> divergent(n, 0);
    for (int b = 0; b < n; ++b) divergent[b] = q.out[b].size() >= 2;
    std::vector<char> removed(n, 0);
    for (int b = 0; b < n; ++b) {
        if (chi[b] != Mark::Zero) continue;
        bool keep = false;
        for (int u : q.in[b]) keep = keep || (divergent[u] && chi[u] != Mark::Zero);
        removed[b] = !keep;
    }

    AcyclicView v;
    std::vector<int> vid(n, -1);
    for (int b = 0; b < n; ++b) {
        if (removed[b]) {
            v.removed_blocks.push_back(b);
            continue;
        }
        vid[b] = static_cast<int>(v.source_block.size());
        v.source_block.push_back(b);
        v.is_copy.push_back(0);
        v.mark.push_back(chi[b]);
    }
    std::vector<int> copy_of(n, -1);
    for (int b = 0; b < n; ++b) {
        if (removed[b] || chi[b] != Mark::Star) continue;
        copy_of[b] = static_cast<int>(v.source_block.size());
        v.source_block.push_back(b);
        v.is_copy.push_back(1);
        v.mark.push_back(Mark::Star);
    }
    v.out.assign(v.source_block.size(), {});
    for (int b = 0; b < n; ++b) {
        if (removed[b]) continue;
        for (int w : q.out[b]) {
            if (removed[w]) continue;                                  // edge into R
            if (chi[b] == Mark::Zero && chi[w] == Mark::Zero) continue;  // zero-zero edge
            int dst = (chi[w] == Mark::Star) ? copy_of[w] : vid[w];
            v.out[vid[b]].push_back(dst);
        }
    }
    for (auto& o : v.out) {
        std::sort(o.begin(), o.end());
        o.erase(std::unique(o.begin(), o.end()), o.end());
    }
    if (!topo_sort(v.out).ok)
        throw invariant_error("marker cut is not acyclic: the level is not well marked");
    return v;
}

namespace {

// Longest shortest-path distance from any initial vertex, per vertex.
std::vector<int> initial_distances(const AcyclicView& v) {
    const int n = static_cast<int>(v.out.size());
    std::vector<int> indeg(n, 0);
    for (int u = 0; u < n; ++u)
        for (int w : v.out[u]) indeg[w]++;
    std::vector<int> best(n, -1);
    for (int r = 0; r < n; ++r) {
        if (indeg[r] != 0) continue;
        std::vector<int> dist(n, -1);
        std::deque<int> q{r};
        dist[r] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int w : v.out[u])
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
        }
        for (int u = 0; u < n; ++u) best[u] = std::max(best[u], dist[u]);
    }
    return best;
}

}  // namespace

DescentMeasure delta_mu(const AcyclicView& v) {
    const int n = static_cast<int>(v.out.size());
    std::vector<int> dist = initial_distances(v);
    DescentMeasure m;
    for (int u = 0; u < n; ++u) {
        if (v.out[u].size() < 2 || dist[u] < 0) continue;
        if (dist[u] > m.delta) {
            m.delta = dist[u];
            m.mu = 1;
        } else if (dist[u] == m.delta && m.delta > 0) {
            ++m.mu;
        }
    }
    return m;
}

int descent_target(const AcyclicView& v) {
    DescentMeasure m = delta_mu(v);
    if (m.delta == 0) return -1;
    std::vector<int> dist = initial_distances(v);
    int best = -1;
    for (int u = 0; u < static_cast<int>(v.out.size()); ++u) {
        if (v.out[u].size() < 2 || dist[u] != m.delta) continue;
        int b = v.source_block[u];
        if (best < 0 || b < best) best = b;
    }
    return best;
}

MarkedLevel displace(Covering& c, const MarkedLevel& level, int target_block) {
    LevelGraph q = quotient(c, level.s.part);
    if (q.out[target_block].size() < 2)
        throw invariant_error("displacement target '" + block_label(c, level.s.part, target_block) +
                              "' is not divergent");
    const Partition& p = level.s.part;
    Clopen tgt = block_clopen(c, p, target_block);

    std::vector<Clopen> blocks;
    std::vector<Mark> marks;
    std::vector<int> owner;  // orbit index or -1
    std::vector<int> old_owner(p.nblocks, -1);
    for (size_t oi = 0; oi < c.orbits.size(); ++oi)
        for (int b : level.s.attracted[oi]) old_owner[b] = static_cast<int>(oi);

    for (int b = 0; b < p.nblocks; ++b) {
        if (b == target_block) continue;
        blocks.push_back(block_clopen(c, p, b));
        marks.push_back(level.chi[b]);
        owner.push_back(old_owner[b]);
    }
    Clopen rest = tgt;
    for (int w : q.out[target_block]) {
        Clopen piece = intersect(c, preimage(c, block_clopen(c, p, w)), tgt);
        if (piece.empty())
            throw invariant_error("displacement produced an empty piece");
        blocks.push_back(piece);
        marks.push_back(level.chi[target_block]);
        owner.push_back(old_owner[target_block]);
        rest = subtract(c, rest, piece);
    }
    if (!rest.empty()) throw invariant_error("displacement pieces do not partition the target block");

    Partition np = partition_from_blocks(c, blocks);
    MarkedLevel out;
    out.s.part = np;
    out.s.tau = level.s.tau;
    out.s.attracted.assign(c.orbits.size(), {});
    out.chi.assign(np.nblocks, Mark::Down);
    for (size_t i = 0; i < blocks.size(); ++i) {
        int nb = np.block_of[expand_at(c, blocks[i], np.lvl).front()];
        out.chi[nb] = marks[i];
        if (owner[i] >= 0) out.s.attracted[owner[i]].push_back(nb);
    }
    for (auto& v : out.s.attracted) std::sort(v.begin(), v.end());
    return out;
}

std::string DescentTrace::to_string() const {
    std::ostringstream os;
    for (const auto& s : steps)
        os << "level " << (s.level + 1) << " delta " << s.delta << " mu " << s.mu << " split " << s.split_block
           << "\n";
    return os.str();
}

namespace {

// Splits a (divergent) block by out-neighbors; shared by the descent loop and
// the final initial-vertex pass.
MarkedLevel split_block(Covering& c, const MarkedLevel& level, int b) { return displace(c, level, b); }

}  // namespace

MarkedLevel rectify_level(Covering& c, const MarkedLevel& level, DescentTrace* trace, int trace_level) {
    // kappa_1 re-partitions the attracted part; supercyclical blocks keep
    // their marks, attracted blocks are zero.
    SupercyclicalLevel k = kappa(c, level.s, 1);
    MarkedLevel cur;
    cur.s = k;
    cur.chi.assign(k.part.nblocks, Mark::Zero);
    {
        auto old_mask = level.s.attracted_mask(level.s.part.nblocks);
        auto new_mask = k.attracted_mask(k.part.nblocks);
        std::vector<int> pb = block_parents(c, k.part, level.s.part);
        for (int b = 0; b < k.part.nblocks; ++b)
            if (!new_mask[b]) cur.chi[b] = level.chi[pb[b]];
    }

    DescentMeasure prev{-1, -1};
    bool have_prev = false;
    for (;;) {
        AcyclicView v = build_acyclic_view(c, cur);
        DescentMeasure m = delta_mu(v);
        if (have_prev) {
            bool decreased = m.delta < prev.delta || (m.delta == prev.delta && m.mu < prev.mu);
            if (!decreased)
                throw invariant_error("descent measure did not strictly decrease");
        }
        if (m.delta == 0) break;
        int target = descent_target(v);
        if (trace)
            trace->steps.push_back({trace_level, m.delta, m.mu, block_label(c, cur.s.part, target)});
        cur = split_block(c, cur, target);
        prev = m;
        have_prev = true;
        MarkReport rep = check_well_marked(c, cur);
        if (!rep.ok())
            throw invariant_error("displacement broke well-markedness: " + rep.failures.front());
    }

    // initial divergent non-star blocks are split by the same mechanism
    for (;;) {
        LevelGraph q = quotient(c, cur.s.part);
        int target = -1;
        for (int b = 0; b < q.size() && target < 0; ++b)
            if (q.out[b].size() >= 2 && cur.chi[b] != Mark::Star) target = b;
        if (target < 0) break;
        if (trace) trace->steps.push_back({trace_level, 0, 0, block_label(c, cur.s.part, target)});
        cur = split_block(c, cur, target);
    }

    // blockwise mark inheritance relative to the input level
    {
        std::vector<int> pb = block_parents(c, cur.s.part, level.s.part);
        for (int b = 0; b < cur.s.part.nblocks; ++b)
            if (cur.chi[b] != level.chi[pb[b]])
                throw invariant_error("rectified marks do not project onto the input marks");
    }
    MarkReport rep = check_well_marked(c, cur);
    if (!rep.ok()) throw invariant_error("rectified level is not well marked: " + rep.failures.front());
    return cur;
}

MarkedCovering build_marked_sequence(Covering& c, int nlevels, DescentTrace* trace) {
    // refusal gate: declared orbits must certify, the detector must not find
    // non-attracting candidates
    for (const auto& o : c.orbits) {
        AttractionReport ar = attraction_certificate(c, o, 4);
        if (!ar.pass && !ar.inconclusive)
            throw refusal_error("not purely attracting: declared period-" + std::to_string(o.period) +
                                " orbit fails its attraction certificate: " + ar.detail);
    }
    {
        NonAttractingReport nr = negative_detector(c, std::min(5, c.level_budget - 1), 4);
        if (!nr.entries.empty())
            throw refusal_error("not purely attracting: " + nr.to_string());
    }

    MarkedCovering mc;
    MarkedLevel l1 = rectify_level(c, bootstrap_well_mark(c), trace, 0);
    mc.levels.push_back(l1);
    for (int n = 1; n < nlevels; ++n) {
        MarkedLevel relative = well_mark_relative(c, mc.levels.back(), n);
        MarkedLevel rect = rectify_level(c, relative, trace, n);
        MarkReport rel = check_relative_marks(c, rect, mc.levels.back());
        if (!rel.ok())
            throw invariant_error("rectified level lost relative well-marking: " + rel.failures.front());
        mc.levels.push_back(rect);
    }
    return mc;
}

}  // namespace cantor
