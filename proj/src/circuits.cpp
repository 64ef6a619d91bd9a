#include "cantor/circuits.hpp"

#include "cantor/errors.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace cantor {

int min_cycle_length(const std::vector<std::vector<int>>& out) {
    const int n = static_cast<int>(out.size());
    int best = 0;
    std::vector<int> dist(n);
    for (int r = 0; r < n; ++r) {
        // shortest closed walk through r = 1 + shortest path from any out-neighbor back to r
        std::fill(dist.begin(), dist.end(), -1);
        std::deque<int> q;
        for (int v : out[r]) {
            if (v == r) {
                best = 1;
                break;
            }
            if (dist[v] < 0) {
                dist[v] = 1;
                q.push_back(v);
            }
        }
        if (best == 1) return 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            if (best && dist[u] + 1 >= best) continue;
            for (int v : out[u]) {
                if (v == r) {
                    int len = dist[u] + 1;
                    if (!best || len < best) best = len;
                } else if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    q.push_back(v);
                }
            }
        }
    }
    return best;
}

bool is_rotation(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    const int n = static_cast<int>(a.size());
    for (int s = 0; s < n; ++s) {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) ok = a[i] == b[(i + s) % n];
        if (ok) return true;
    }
    return false;
}

TopoResult topo_sort(const std::vector<std::vector<int>>& out) {
    const int n = static_cast<int>(out.size());
    std::vector<int> indeg(n, 0);
    for (int u = 0; u < n; ++u)
        for (int v : out[u]) indeg[v]++;
    TopoResult r;
    std::vector<int> q;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) q.push_back(v);
    while (!q.empty()) {
        int u = q.back();
        q.pop_back();
        r.order.push_back(u);
        for (int v : out[u])
            if (--indeg[v] == 0) q.push_back(v);
    }
    r.ok = static_cast<int>(r.order.size()) == n;
    return r;
}

namespace {

// All elementary cycles whose smallest vertex is r, using only vertices >= r
// that can reach r. Iterative DFS.
void cycles_rooted(const std::vector<std::vector<int>>& out, int r, int max_len, std::size_t cap,
                   std::vector<Cycle>& acc) {
    const int n = static_cast<int>(out.size());
    // vertices >= r that reach r within the subgraph of vertices >= r
    std::vector<std::vector<int>> rin(n);
    for (int u = r; u < n; ++u)
        for (int v : out[u])
            if (v >= r) rin[v].push_back(u);
    std::vector<char> reach(n, 0);
    {
        std::vector<int> st{r};
        reach[r] = 1;
        while (!st.empty()) {
            int u = st.back();
            st.pop_back();
            for (int w : rin[u])
                if (!reach[w]) {
                    reach[w] = 1;
                    st.push_back(w);
                }
        }
    }
    std::vector<char> onpath(n, 0);
    std::vector<int> path{r};
    std::vector<size_t> edge_idx{0};
    onpath[r] = 1;
    while (!path.empty()) {
        int u = path.back();
        if (edge_idx.back() < out[u].size()) {
            int v = out[u][edge_idx.back()++];
            if (v == r) {
                acc.push_back(path);
                if (acc.size() > cap) throw invariant_error("cycle enumeration exceeded cap");
                continue;
            }
            if (v < r || !reach[v] || onpath[v]) continue;
            if (max_len > 0 && static_cast<int>(path.size()) >= max_len) continue;
            path.push_back(v);
            edge_idx.push_back(0);
            onpath[v] = 1;
        } else {
            onpath[u] = 0;
            path.pop_back();
            edge_idx.pop_back();
        }
    }
}

}  // namespace

std::vector<Cycle> circuits(const std::vector<std::vector<int>>& out, int max_len, std::size_t cap) {
    const int n = static_cast<int>(out.size());
    std::vector<Cycle> all;
    for (int r = 0; r < n; ++r) cycles_rooted(out, r, max_len, cap, all);

    std::stable_sort(all.begin(), all.end(),
                     [](const Cycle& a, const Cycle& b) { return a.size() < b.size(); });
    std::vector<Cycle> kept;
    std::vector<std::vector<int>> kept_sets;
    for (const auto& cyc : all) {
        std::vector<int> s = cyc;
        std::sort(s.begin(), s.end());
        bool minimal = true;
        for (size_t i = 0; i < kept.size() && minimal; ++i) {
            if (kept[i].size() >= cyc.size()) continue;
            minimal = !std::includes(s.begin(), s.end(), kept_sets[i].begin(), kept_sets[i].end());
        }
        if (minimal) {
            kept.push_back(cyc);
            kept_sets.push_back(std::move(s));
        }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

}  // namespace cantor
