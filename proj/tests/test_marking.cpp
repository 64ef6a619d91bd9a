#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cantor/circuits.hpp"
#include "cantor/errors.hpp"
#include "cantor/io.hpp"
#include "cantor/marking.hpp"

#include <map>
#include <set>

using namespace cantor;

namespace {

Covering odo() { return make_covering(make_generator("odometer", {{"p", 2}})); }
Covering att() { return make_covering(make_generator("attracting-fix", {})); }
Covering att2() { return make_covering(make_generator("attracting-two-orbit", {})); }

}  // namespace

TEST_CASE("separation of iterated preimages") {
    Covering c = odo();
    c.ensure_level(4);
    Clopen f1 = clopen_of_cells(c, 2, {0});
    CHECK(is_separated(c, f1, 2));
    // two adjacent cells of the 4-cycle fail 2-separation
    Clopen f2 = clopen_of_cells(c, 1, {0, 1});
    CHECK(!is_separated(c, f2, 1));
    CHECK(is_separated(c, Clopen{}, 3));
}

TEST_CASE("krieger marker on the odometer") {
    Covering c = odo();
    Partition p = singleton_partition(c, 2);
    SupercyclicalLevel s = supercyclical_structure(c, p, 2);
    MarkerSet ms = krieger_marker(c, s, 2);
    CHECK(ms.n == 2);
    CHECK(ms.N == 5);
    CHECK(ms.t == 3 * ms.pieces + 2);
    MarkerCheck chk = marker_invariants(c, s, ms);
    CHECK(chk.separated);
    CHECK(chk.covers);
}

TEST_CASE("krieger marker avoids the attracted part") {
    Covering c = att();
    Partition p = singleton_partition(c, 1);
    SupercyclicalLevel s = supercyclical_structure(c, p, 1);
    for (int n = 1; n <= 2; ++n) {
        MarkerSet ms = krieger_marker(c, s, n);
        MarkerCheck chk = marker_invariants(c, s, ms);
        CHECK(chk.ok());
        Clopen basin = c.orbits[0].basin;
        CHECK(disjoint(c, ms.F, basin));
    }
}

TEST_CASE("krieger marker on an empty supercyclical part") {
    Covering m = make_covering(make_generator("merged-orbits", {}));
    Partition p = singleton_partition(m, 1);
    SupercyclicalLevel s = supercyclical_structure(m, p, 4);
    MarkerSet ms = krieger_marker(m, s, 1);
    CHECK(ms.F.empty());
    CHECK(marker_invariants(m, s, ms).ok());
}

TEST_CASE("krieger marker on the 3-adic odometer") {
    Covering c = make_covering(make_generator("odometer", {{"p", 3}}));
    Partition p = singleton_partition(c, 1);
    SupercyclicalLevel s = supercyclical_structure(c, p, 1);
    MarkerSet ms = krieger_marker(c, s, 1);
    CHECK(marker_invariants(c, s, ms).ok());
}

TEST_CASE("bootstrap marking of the odometer") {
    Covering c = odo();
    MarkedLevel ml = bootstrap_well_mark(c);
    CHECK(check_well_marked(c, ml).ok());
    int stars = 0, ups = 0, zeros = 0;
    for (Mark m : ml.chi) {
        stars += m == Mark::Star;
        ups += m == Mark::Up;
        zeros += m == Mark::Zero;
    }
    CHECK(stars >= 1);
    CHECK(ups >= 1);
    CHECK(zeros == 0);
}

TEST_CASE("bootstrap marking of the attracting fixture") {
    Covering c = att();
    MarkedLevel ml = bootstrap_well_mark(c);
    CHECK(check_well_marked(c, ml).ok());
    auto mask = ml.s.attracted_mask(ml.s.part.nblocks);
    bool any_attracted = false;
    for (int b = 0; b < ml.s.part.nblocks; ++b) {
        if (mask[b]) {
            any_attracted = true;
            CHECK(ml.chi[b] == Mark::Zero);
        }
    }
    CHECK(any_attracted);
    CHECK(refines_base(c, ml.s.part, 0));
}

TEST_CASE("bootstrap marking of the two-orbit fixture attracts the period-2 orbit") {
    Covering c = att2();
    MarkedLevel ml = bootstrap_well_mark(c);
    CHECK(check_well_marked(c, ml).ok());
    CHECK(ml.s.tau >= 2);
    CHECK(!ml.s.attracted[1].empty());
}

TEST_CASE("bootstrap refuses the full shift") {
    Covering c = make_covering(make_generator("full-shift", {}));
    CHECK_THROWS_AS(bootstrap_well_mark(c), refusal_error);
}

TEST_CASE("relative well-marking over the bootstrap") {
    Covering c = odo();
    MarkedLevel l1 = bootstrap_well_mark(c);
    MarkedLevel l2 = well_mark_relative(c, l1, 1);
    CHECK(check_well_marked(c, l2).ok());
    CHECK(check_relative_marks(c, l2, l1).ok());
    CHECK(l2.s.tau >= l1.s.tau + 1);
    CHECK(refines_base(c, l2.s.part, 1));

    // every new supercyclical circuit maps over at least two old circuits
    LevelGraph q1 = quotient(c, l1.s.part);
    LevelGraph q2 = quotient(c, l2.s.part);
    int old_len = min_cycle_length(q1.out);
    int new_len = min_cycle_length(q2.out);
    CHECK(new_len >= 2 * old_len);
}

TEST_CASE("relative well-marking on the attracting fixture") {
    Covering c = att();
    MarkedLevel l1 = bootstrap_well_mark(c);
    MarkedLevel l2 = well_mark_relative(c, l1, 1);
    CHECK(check_well_marked(c, l2).ok());
    CHECK(check_relative_marks(c, l2, l1).ok());
    // the attracted part grows or stays
    auto mask1 = l1.s.attracted_mask(l1.s.part.nblocks);
    auto mask2 = l2.s.attracted_mask(l2.s.part.nblocks);
    Clopen a1, a2;
    for (int b = 0; b < l1.s.part.nblocks; ++b)
        if (mask1[b]) a1 = unite(c, a1, block_clopen(c, l1.s.part, b));
    for (int b = 0; b < l2.s.part.nblocks; ++b)
        if (mask2[b]) a2 = unite(c, a2, block_clopen(c, l2.s.part, b));
    CHECK(subset(c, a1, a2));
}

TEST_CASE("a star over a star is rejected by the relative word check") {
    Covering c = odo();
    MarkedLevel l1 = bootstrap_well_mark(c);
    MarkedLevel l2 = well_mark_relative(c, l1, 1);
    std::vector<int> par = block_parents(c, l2.s.part, l1.s.part);
    bool mutated = false;
    for (int b = 0; b < l2.s.part.nblocks && !mutated; ++b) {
        if (l1.chi[par[b]] == Mark::Star) {
            l2.chi[b] = Mark::Star;
            mutated = true;
        }
    }
    REQUIRE(mutated);
    MarkReport rep = check_relative_marks(c, l2, l1);
    CHECK(!rep.ok());
}

TEST_CASE("stars and potentials land on preimages of potentials") {
    Covering c = odo();
    MarkedLevel l1 = bootstrap_well_mark(c);
    MarkedLevel l2 = well_mark_relative(c, l1, 1);
    std::vector<int> par = block_parents(c, l2.s.part, l1.s.part);
    for (int b = 0; b < l2.s.part.nblocks; ++b)
        if (l2.chi[b] == Mark::Star || l2.chi[b] == Mark::Up) CHECK(l1.chi[par[b]] == Mark::Up);
}
