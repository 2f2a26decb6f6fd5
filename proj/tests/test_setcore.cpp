#include <doctest.h>

#include <algorithm>
#include <set>

#include "fex/errors.hpp"
#include "fex/setcore.hpp"

using namespace fex;
using namespace fex::setcore;

TEST_CASE("base set membership and enumeration") {
    auto dom = BaseDomain::omega(4);

    auto ev = BaseSet::evens();
    CHECK(ev.contains(0));
    CHECK(!ev.contains(7));
    CHECK(ev.next_geq(3, dom) == 4);
    CHECK(ev.next_geq(4, dom) == 4);

    auto m3 = BaseSet::mult(3);
    CHECK(m3.contains(0));
    CHECK(m3.contains(9));
    CHECK(!m3.contains(10));
    CHECK(m3.next_geq(10, dom) == 12);

    auto iv = BaseSet::interval(2, 5);  // {2, 3, 4}
    CHECK(!iv.contains(1));
    CHECK(iv.contains(2));
    CHECK(iv.contains(4));
    CHECK(!iv.contains(5));
    CHECK(iv.next_geq(0, dom) == 2);
    CHECK(!iv.next_geq(5, dom).has_value());

    auto fin = BaseSet::finite({1, 4, 9});
    CHECK(fin.next_geq(2, dom) == 4);
    CHECK(fin.next_geq(9, dom) == 9);
    CHECK(!fin.next_geq(10, dom).has_value());

    auto cof = BaseSet::cofinite({0, 1, 2});
    CHECK(!cof.contains(1));
    CHECK(cof.contains(3));
    CHECK(cof.next_geq(0, dom) == 3);

    auto fin_dom = BaseDomain::finite(5, 4);
    CHECK(!cof.next_geq(5, fin_dom).has_value());
}

TEST_CASE("next_geq respects a finite domain upper end") {
    auto fin_dom = BaseDomain::finite(5, 4);
    CHECK(BaseSet::odds().next_geq(4, fin_dom) == std::nullopt);
    CHECK(BaseSet::evens().next_geq(4, fin_dom) == 4);
    CHECK(BaseSet::evens().next_geq(5, fin_dom) == std::nullopt);
}

TEST_CASE("point validation") {
    auto dom = BaseDomain::omega(4);

    GroundPoint ok{{0, 2}, {{}, {0}, {0, 2}}};
    CHECK_NOTHROW(check_point(ok, dom));

    GroundPoint unsorted{{2, 0}, {}};
    CHECK_THROWS_AS(check_point(unsorted, dom), InvalidInput);

    GroundPoint escapes{{0}, {{1}}};  // trace member outside the support
    CHECK_THROWS_AS(check_point(escapes, dom), InvalidInput);

    GroundPoint wide{{0, 1, 2, 3}, {}};  // support size 4 not below width 4
    CHECK_THROWS_AS(check_point(wide, dom), InvalidInput);

    GroundPoint outside{{7}, {}};
    CHECK_THROWS_AS(check_point(outside, BaseDomain::finite(3, 4)), InvalidInput);
}

TEST_CASE("indep_member is trace lookup of the intersection") {
    GroundPoint p{{0, 2}, {{0}, {0, 2}}};
    CHECK(indep_member(p, BaseSet::evens()));             // {0,2} in trace
    CHECK(indep_member(p, BaseSet::finite({0, 5})));      // {0} in trace
    CHECK(!indep_member(p, BaseSet::finite({2})));        // {2} not in trace
    CHECK(!indep_member(p, BaseSet::odds()));             // {} not in trace
    GroundPoint q{{}, {{}}};
    CHECK(indep_member(q, BaseSet::odds()));              // empty trace member
}

TEST_CASE("differences and distinctness witnesses") {
    auto dom = BaseDomain::omega(4);
    CHECK(least_difference(BaseSet::evens(), BaseSet::odds(), dom, 64) == 0);
    CHECK(least_difference(BaseSet::evens(), BaseSet::mult(4), dom, 64) == 2);
    CHECK(differences_below(BaseSet::evens(), BaseSet::mult(4), dom, 11) ==
          std::vector<uint64_t>{2, 6, 10});
    CHECK_THROWS_AS(least_difference(BaseSet::evens(), BaseSet::evens(), dom, 64),
                    NoDifferenceFound);

    auto w = distinctness_witness(BaseSet::evens(), BaseSet::mult(4), dom, 64);
    CHECK(w.to_text() == "(pt {2} ({2}))");
    CHECK(indep_member(w, BaseSet::evens()) != indep_member(w, BaseSet::mult(4)));
}

TEST_CASE("separating supports split positive from negative traces") {
    auto dom = BaseDomain::omega(4);
    auto a = BaseSet::finite({0, 2});
    auto b = BaseSet::finite({0, 1});
    auto X = separating_support({&a}, {&b}, dom, 64);
    CHECK(X == std::vector<uint64_t>{1});

    // {} and {0,1} against {0} and {1} force both elements into the support,
    // which a width of 2 cannot hold
    auto narrow_dom = BaseDomain::omega(2);
    auto empty = BaseSet::finite({});
    auto both = BaseSet::finite({0, 1});
    auto just0 = BaseSet::finite({0});
    auto just1 = BaseSet::finite({1});
    CHECK_THROWS_AS(separating_support({&empty, &both}, {&just0, &just1}, narrow_dom, 64),
                    WidthExceeded);
}

TEST_CASE("cell witnesses hit their cells and are pairwise distinct") {
    FamilySpec family;
    family.domain = BaseDomain::omega(4);
    family.generators = {BaseSet::evens(), BaseSet::mult(3)};
    family.validate(64);

    CellSpec s;
    s.signs[0] = true;
    // a positives-only cell needs no separation: the empty support already
    // has evens∩{} = {} in its trace
    auto pts = cell_witness(family, s, 1, 64);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].to_text() == "(pt {} ({}))");

    FamilySpec singles;
    singles.domain = BaseDomain::omega(4);
    singles.generators = {BaseSet::finite({0}), BaseSet::finite({1})};
    CellSpec pn;
    pn.signs[0] = true;
    pn.signs[1] = false;
    auto sep = cell_witness(singles, pn, 1, 64);
    REQUIRE(sep.size() == 1);
    CHECK(sep[0].to_text() == "(pt {0} ({0}))");

    s.signs[1] = false;
    auto multi = cell_witness(family, s, 5, 64);
    REQUIRE(multi.size() == 5);
    std::set<std::string> texts;
    for (const auto& p : multi) {
        texts.insert(p.to_text());
        CHECK(indep_member(p, family.at(0)));
        CHECK(!indep_member(p, family.at(1)));
        CHECK_NOTHROW(check_point(p, family.domain));
    }
    CHECK(texts.size() == 5);

    CellSpec empty;
    auto whole = cell_witness(family, empty, 2, 64);
    CHECK(whole.size() == 2);
    CHECK(whole[0] == GroundPoint{{}, {}});
}

TEST_CASE("cell witness budgets") {
    FamilySpec tiny;
    tiny.domain = BaseDomain::finite(1, 4);
    tiny.generators = {BaseSet::finite({0})};
    CellSpec s;
    s.signs[0] = true;
    // supports live inside {0}: only ⟨{0},…⟩ qualifies, so ten witnesses
    // cannot exist
    CHECK_THROWS_AS(cell_witness(tiny, s, 10, 64), ExhaustedSupports);
}

TEST_CASE("family validation") {
    FamilySpec family;
    family.domain = BaseDomain::omega(4);
    family.generators = {BaseSet::evens(), BaseSet::mult(2)};  // same set twice
    CHECK_THROWS_AS(family.validate(64), NoDifferenceFound);
    CHECK_THROWS_AS(family.at(7), UnknownGenerator);
}

TEST_CASE("ground enumeration counts and order") {
    auto fin2 = enumerate_ground(BaseDomain::finite(2, 5), 3);
    CHECK(fin2.size() == 26);  // 2 + 2·4 + 16

    auto omega2 = enumerate_ground(BaseDomain::omega(5), 2);
    CHECK(omega2.size() == 26);  // same supports, {} {0} {1} {0 1}

    auto fin1 = enumerate_ground(BaseDomain::finite(1, 4), 3);
    REQUIRE(fin1.size() == 6);
    CHECK(fin1[0].to_text() == "(pt {} ())");
    CHECK(fin1[1].to_text() == "(pt {} ({}))");

    auto none = enumerate_ground(BaseDomain::omega(4), 0);
    REQUIRE(none.size() == 2);
    CHECK(none[0] == GroundPoint{{}, {}});
    CHECK(none[1] == GroundPoint{{}, {{}}});

    for (size_t i = 1; i < fin2.size(); ++i) CHECK(point_less(fin2[i - 1], fin2[i]));
    for (const auto& p : fin2) CHECK_NOTHROW(check_point(p, BaseDomain::finite(2, 5)));

    CHECK_THROWS_AS(enumerate_ground(BaseDomain::omega(8), 3, 100), SizeOverflow);
}

TEST_CASE("enumeration truncation is capped by a finite domain") {
    auto a = enumerate_ground(BaseDomain::finite(2, 5), 10);
    auto b = enumerate_ground(BaseDomain::finite(2, 5), 2);
    CHECK(a == b);
}
