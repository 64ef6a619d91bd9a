#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cantor/circuits.hpp"
#include "cantor/dynamics.hpp"
#include "cantor/errors.hpp"
#include "cantor/io.hpp"

#include <map>
#include <set>

using namespace cantor;

namespace {

Covering odo() { return make_covering(make_generator("odometer", {{"p", 2}})); }
Covering shift() { return make_covering(make_generator("full-shift", {})); }
Covering att() { return make_covering(make_generator("attracting-fix", {})); }
Covering att2() { return make_covering(make_generator("attracting-two-orbit", {})); }

// Finite part next to a doubling odometer. Divergent cells split once at
// level 1 into one piece per out-neighbor (edge compatibility forces this);
// from level 1 on the finite part repeats with identity bonds.
struct ConstGen : Generator {
    std::vector<std::string> cells;
    std::vector<std::pair<std::string, std::string>> fixed_edges;
    std::string name() const override { return "custom"; }
    std::map<std::string, long> params() const override { return {}; }

    std::vector<std::string> outs(const std::string& v) const {
        std::vector<std::string> o;
        for (const auto& [a, b] : fixed_edges)
            if (a == v) o.push_back(b);
        std::sort(o.begin(), o.end());
        return o;
    }
    std::string deep_cell(const std::string& v) const {  // canonical level-1 cell inside v
        auto o = outs(v);
        return o.size() >= 2 ? v + "@" + o.front() : v;
    }

    RawLevel level(int lvl) const override {
        RawLevel r;
        const long m = 1L << (lvl + 1);
        auto cid = [&](long i) {
            std::string s = std::to_string(i);
            return "z" + std::string(7 - s.size(), '0') + s;
        };
        if (lvl == 0) {
            r.ids = cells;
            r.edges = fixed_edges;
        } else {
            for (const auto& v : cells) {
                auto o = outs(v);
                if (o.size() < 2) {
                    r.ids.push_back(v);
                    r.edges.emplace_back(v, deep_cell(o.front()));
                    if (lvl == 1) r.bond.emplace_back(v, v);
                    else r.bond.emplace_back(v, v);
                } else {
                    for (const auto& w : o) {
                        r.ids.push_back(v + "@" + w);
                        r.edges.emplace_back(v + "@" + w, deep_cell(w));
                        r.bond.emplace_back(v + "@" + w, lvl == 1 ? v : v + "@" + w);
                    }
                }
            }
        }
        for (long i = 0; i < m; ++i) r.ids.push_back(cid(i));
        for (long i = 0; i < m; ++i) r.edges.emplace_back(cid(i), cid((i + 1) % m));
        if (lvl > 0) {
            long half = m / 2;
            auto pid = [&](long i) {
                std::string s = std::to_string(i);
                return "z" + std::string(7 - s.size(), '0') + s;
            };
            for (long i = 0; i < m; ++i) r.bond.emplace_back(cid(i), pid(i % half));
        }
        return r;
    }
};

Covering custom_fix(std::vector<std::string> cells, std::vector<std::pair<std::string, std::string>> edges,
                    std::vector<std::string> circuit, std::vector<std::string> basin) {
    auto gen = std::make_shared<ConstGen>();
    gen->cells = std::move(cells);
    gen->fixed_edges = std::move(edges);
    Covering c;
    c.gen = gen;
    c.ensure_level(0);
    OrbitInfo o;
    o.period = static_cast<int>(circuit.size());
    o.lvl = 0;
    for (const auto& id : circuit) o.circuit.push_back(c.levels[0].index_of(id));
    std::vector<int> bc;
    for (const auto& id : basin) bc.push_back(c.levels[0].index_of(id));
    o.basin = clopen_of_cells(c, 0, bc);
    c.orbits.push_back(o);
    return c;
}

}  // namespace

TEST_CASE("periodic candidates per fixture") {
    {
        Covering c = odo();
        CHECK(periodic_candidates(c, 4, 4).empty());
    }
    {
        Covering c = shift();
        auto cands = periodic_candidates(c, 2, 5);
        REQUIRE(cands.size() == 3);
        CHECK(cands[0].period == 1);
        CHECK(cands[1].period == 1);
        CHECK(cands[2].period == 2);
        CHECK(cands[0].first_lvl == 0);
        CHECK(cands[1].first_lvl == 0);
        // the period-2 cells merge with the fixed points at level 1
        CHECK(cands[2].first_lvl == 1);
    }
    {
        Covering c = att();
        auto cands = periodic_candidates(c, 1, 4);
        REQUIRE(cands.size() == 1);
        CHECK(cands[0].period == 1);
    }
    {
        Covering c = make_covering(make_generator("merged-orbits", {}));
        auto cands = periodic_candidates(c, 4, 1);
        REQUIRE(cands.size() == 2);
        CHECK(cands[0].period == 4);
        CHECK(cands[1].period == 4);
    }
}

TEST_CASE("candidate chains project cell-wise") {
    Covering c = shift();
    for (const auto& cand : periodic_candidates(c, 3, 4)) {
        for (size_t i = 0; i + 1 < cand.chain.size(); ++i) {
            const int lvl = cand.first_lvl + static_cast<int>(i) + 1;
            std::vector<int> down;
            for (int cell : cand.chain[i + 1]) down.push_back(c.bond[lvl - 1][cell]);
            CHECK(is_rotation(down, cand.chain[i]));
        }
    }
}

TEST_CASE("aperiodicity certificates") {
    {
        Covering c = odo();
        AperiodicityReport rep = aperiodicity_certificate(c, 5, 4);
        CHECK(rep.nu == std::vector<int>{2, 4, 8, 16, 32, 64});
        CHECK(rep.verdict == "aperiodic-up-to-depth-6");
    }
    {
        Covering c = shift();
        AperiodicityReport rep = aperiodicity_certificate(c, 5, 4);
        CHECK(rep.nu == std::vector<int>{1, 1, 1, 1, 1, 1});
        CHECK(rep.verdict == "has-periodic-witness");
    }
    {
        Covering c = att();
        AperiodicityReport rep = aperiodicity_certificate(c, 3, 4);
        CHECK(rep.verdict == "has-periodic-witness");
    }
}

TEST_CASE("attraction certificates") {
    {
        Covering c = att();
        AttractionReport rep = attraction_certificate(c, c.orbits[0], 4);
        CHECK(rep.pass);
    }
    {
        Covering c = shift();
        for (const auto& o : c.orbits) {
            AttractionReport rep = attraction_certificate(c, o, 4);
            CHECK(!rep.pass);  // whole-space basin has three circuits at depth 2
        }
    }
    {
        // a proper basin candidate around the shift fixed point is not stable
        Covering c = shift();
        OrbitInfo o = c.orbits[0];
        o.basin = clopen_of_cells(c, 0, {c.levels[0].index_of("0")});
        AttractionReport rep = attraction_certificate(c, o, 4);
        CHECK(!rep.pass);
    }
}

TEST_CASE("supercyclical structure on the attracting fixture") {
    Covering c = att();
    Partition p = singleton_partition(c, 2);
    SupercyclicalLevel s = supercyclical_structure(c, p, 1);
    REQUIRE(c.orbits.size() == 1);
    std::set<std::string> attracted;
    for (int b : s.attracted[0]) attracted.insert(block_label(c, s.part, b));
    CHECK(attracted == std::set<std::string>{"p", "b01", "b02", "b03"});
    // maximality: pulling in any supercyclical block drags the odometer
    // circuit along, so the enlarged stable set has a second circuit
    LevelGraph q = quotient(c, p);
    auto mask = s.attracted_mask(p.nblocks);
    for (int b = 0; b < p.nblocks; ++b) {
        if (mask[b]) continue;
        std::set<int> set(s.attracted[0].begin(), s.attracted[0].end());
        std::vector<int> stack{b};
        set.insert(b);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : q.out[u])
                if (!set.count(v)) {
                    set.insert(v);
                    stack.push_back(v);
                }
        }
        std::map<int, int> idx;
        std::vector<int> verts(set.begin(), set.end());
        for (size_t i = 0; i < verts.size(); ++i) idx[verts[i]] = static_cast<int>(i);
        std::vector<std::vector<int>> sub(verts.size());
        for (size_t i = 0; i < verts.size(); ++i)
            for (int v : q.out[verts[i]])
                if (idx.count(v)) sub[i].push_back(idx[v]);
        CHECK(circuits(sub).size() >= 2);
    }
}

TEST_CASE("supercyclical structure refuses the full shift") {
    Covering c = shift();
    Partition p = singleton_partition(c, 1);
    CHECK_THROWS_AS(supercyclical_structure(c, p, 1), refusal_error);
}

TEST_CASE("aperiodic covering has an empty attracted part") {
    Covering c = odo();
    Partition p = singleton_partition(c, 2);
    SupercyclicalLevel s = supercyclical_structure(c, p, 3);
    auto mask = s.attracted_mask(p.nblocks);
    for (char m : mask) CHECK(!m);
}

TEST_CASE("raise_order attracts the period-2 orbit") {
    Covering c = att2();
    Partition p = singleton_partition(c, 1);
    SupercyclicalLevel s1 = supercyclical_structure(c, p, 1);
    REQUIRE(s1.attracted.size() == 2);
    CHECK(!s1.attracted[0].empty());
    CHECK(s1.attracted[1].empty());  // period 2 beyond tau=1
    SupercyclicalLevel s2 = raise_order(c, s1, 2);
    CHECK(!s2.attracted[1].empty());
    std::set<std::string> qset;
    for (int b : s2.attracted[1]) qset.insert(block_label(c, s2.part, b));
    CHECK(qset == std::set<std::string>{"q0", "q1", "r0_02", "r1_02"});
    CHECK(s2.tau == 2);
}

TEST_CASE("raise_order rejects a basin inside the attracted part") {
    Covering c = att2();
    Partition p = singleton_partition(c, 1);
    SupercyclicalLevel s1 = supercyclical_structure(c, p, 1);
    c.orbits[1].basin = unite(c, c.orbits[1].basin, c.orbits[0].basin);
    CHECK_THROWS_AS(raise_order(c, s1, 2), invariant_error);
}

TEST_CASE("eta measures the supercyclical circuit length") {
    Covering c = att();
    Partition p = singleton_partition(c, 2);
    SupercyclicalLevel s = supercyclical_structure(c, p, 1);
    CHECK(eta(c, s) == 8);

    Covering c2 = att2();
    Partition p2 = singleton_partition(c2, 2);
    SupercyclicalLevel s2 = supercyclical_structure(c2, p2, 2);
    CHECK(eta(c2, s2) == 8);  // q attracted, the 2^3 odometer circuit remains

    Covering m = make_covering(make_generator("merged-orbits", {}));
    Partition pm = singleton_partition(m, 1);
    SupercyclicalLevel sm = supercyclical_structure(m, pm, 4);
    CHECK(eta(m, sm) == 0);  // everything attracted: no supercyclical circuit
}

TEST_CASE("kappa on the attracting fixture yields a chain into the fixed point") {
    Covering c = att();
    Partition p = singleton_partition(c, 1);
    SupercyclicalLevel s = supercyclical_structure(c, p, 1);
    SupercyclicalLevel k = kappa(c, s, 1);
    DepthData dd = delta_omega(c, k);
    LevelGraph q = quotient(c, k.part);
    auto mask = k.attracted_mask(k.part.nblocks);
    for (int b = 0; b < k.part.nblocks; ++b)
        if (mask[b]) CHECK(q.out[b].size() == 1);
    REQUIRE(!k.attracted[0].empty());
    CHECK(dd.omega[0] >= 1);
}

TEST_CASE("kappa is trivial on a bare circuit") {
    Covering m = make_covering(make_generator("merged-orbits", {}));
    Partition pm = singleton_partition(m, 1);
    SupercyclicalLevel sm = supercyclical_structure(m, pm, 4);
    SupercyclicalLevel k = kappa(m, sm, 1);
    DepthData dd = delta_omega(m, k);
    CHECK(dd.omega[0] == 0);
    CHECK(dd.omega[1] == 0);
    CHECK(k.part.nblocks == sm.part.nblocks);
}

TEST_CASE("kappa splits a divergent attracted vertex") {
    Covering c = custom_fix({"p", "u", "a", "b"},
                            {{"p", "p"}, {"a", "p"}, {"b", "p"}, {"u", "a"}, {"u", "b"}},
                            {"p"}, {"p", "u", "a", "b"});
    REQUIRE(validate(c).ok());
    Partition p0 = singleton_partition(c, 0);
    SupercyclicalLevel s = supercyclical_structure(c, p0, 1);
    REQUIRE(s.attracted[0].size() == 4);
    {
        LevelGraph q = quotient(c, s.part);
        int u = -1;
        for (int b = 0; b < s.part.nblocks; ++b)
            if (block_label(c, s.part, b) == "u") u = b;
        REQUIRE(u >= 0);
        CHECK(q.out[u].size() == 2);  // the input has a divergent attracted vertex
    }
    SupercyclicalLevel k = kappa(c, s, 1);
    LevelGraph q = quotient(c, k.part);
    auto mask = k.attracted_mask(k.part.nblocks);
    std::vector<int> verts;
    for (int b = 0; b < k.part.nblocks; ++b)
        if (mask[b]) {
            CHECK(q.out[b].size() == 1);
            verts.push_back(b);
        }
    DepthData dd = delta_omega(c, k);
    CHECK(dd.omega[0] == 2);
    int zeros = 0, ones = 0, twos = 0;
    for (int b : verts) {
        zeros += dd.delta[b] == 0;
        ones += dd.delta[b] == 1;
        twos += dd.delta[b] == 2;
    }
    CHECK(zeros == 1);
    CHECK(ones == 2);
    CHECK(twos == 2);  // the divergent block split into one piece per branch
}

TEST_CASE("delta and omega on the basin chain") {
    Covering c = att();
    Partition p = singleton_partition(c, 2);
    SupercyclicalLevel s = supercyclical_structure(c, p, 1);
    DepthData dd = delta_omega(c, s);
    REQUIRE(dd.omega.size() == 1);
    CHECK(dd.omega[0] == 3);
    std::map<std::string, int> expect{{"p", 0}, {"b01", 1}, {"b02", 2}, {"b03", 3}};
    for (int b = 0; b < s.part.nblocks; ++b) {
        std::string label = block_label(c, s.part, b);
        if (expect.count(label)) CHECK(dd.delta[b] == expect[label]);
    }
}

TEST_CASE("merged two-branch in-tree depths") {
    Covering c = custom_fix(
        {"p", "x1", "x2", "x3", "x4", "y1", "y2"},
        {{"p", "p"}, {"x1", "p"}, {"x2", "x1"}, {"x3", "x2"}, {"x4", "x3"}, {"y1", "x2"}, {"y2", "y1"}},
        {"p"}, {"p", "x1", "x2", "x3", "x4", "y1", "y2"});
    REQUIRE(validate(c).ok());
    Partition p0 = singleton_partition(c, 0);
    SupercyclicalLevel s = supercyclical_structure(c, p0, 1);
    DepthData dd = delta_omega(c, s);
    CHECK(dd.omega[0] == 4);
}

TEST_CASE("delta_omega rejects a divergent attracted subgraph") {
    Covering c = custom_fix({"p", "u", "a", "b"},
                            {{"p", "p"}, {"a", "p"}, {"b", "p"}, {"u", "a"}, {"u", "b"}},
                            {"p"}, {"p", "u", "a", "b"});
    Partition p0 = singleton_partition(c, 0);
    SupercyclicalLevel s = supercyclical_structure(c, p0, 1);
    CHECK_THROWS_AS(delta_omega(c, s), invariant_error);
}
