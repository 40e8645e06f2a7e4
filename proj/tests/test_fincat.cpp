#include "derlab/fincat.hpp"
#include "derlab/verify.hpp"

#include <doctest.h>

#include <set>

using namespace derlab;

TEST_CASE("build_poset closure and errors") {
    FinPoset one = build_poset({"0", "1"}, {{"0", "1"}});
    CHECK(one.le(0, 1));
    CHECK_FALSE(one.le(1, 0));
    FinPoset e = build_poset({"a"}, {});
    CHECK(e.size() == 1);
    CHECK_THROWS_AS(build_poset({"x", "y"}, {{"x", "y"}, {"y", "x"}}), CycleDetected);
    CHECK_THROWS_AS(build_poset({"x", "x"}, {}), DuplicateLabel);
    // transitivity is applied on load
    FinPoset two = build_poset({"0", "1", "2"}, {{"0", "1"}, {"1", "2"}});
    CHECK(two.le(0, 2));
}

TEST_CASE("named shapes") {
    NamedShape pull2 = named_shape("pull_n", 2);
    CHECK(pull2.poset.size() == 4);
    int t = pull2.poset.index_of("t");
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) CHECK(pull2.poset.le(i, j) == (j == t));

    CHECK(named_shape("box").poset.size() == 4);
    CHECK(named_shape("corner_push").poset.size() == 3);
    CHECK(named_shape("octa_K").poset.size() == 13);  // 5*3 minus two corners
    CHECK(named_shape("octa_J").poset.size() == 7);
    CHECK(named_shape("rotation_K").poset.size() == 8);
    CHECK(named_shape("T_shape").parts.at("K_T").size() == 4);
    CHECK(named_shape("biproduct_L").poset.size() == 9);
    CHECK_THROWS_AS(named_shape("moebius"), UnknownShape);
    CHECK_THROWS_AS(named_shape("chain"), BadParams);
}

TEST_CASE("combine product, coproduct, opposite") {
    FinPoset c1 = chain_poset(1);
    FinPoset box = combine(CombineKind::product, c1, &c1);
    CHECK(box.size() == 4);
    CHECK(box.le(box.index_of("0,0"), box.index_of("1,1")));
    CHECK_FALSE(box.le(box.index_of("1,0"), box.index_of("0,1")));

    FinPoset e = terminal_poset();
    FinPoset ee = combine(CombineKind::coproduct, e, &e);
    CHECK(ee.size() == 2);
    CHECK_FALSE(ee.le(0, 1));
    CHECK_FALSE(ee.le(1, 0));

    FinPoset two = chain_poset(2);
    FinPoset op = combine(CombineKind::opposite, two);
    CHECK(op.le(2, 0));
    CHECK_FALSE(op.le(0, 2));
    FinPoset opop = combine(CombineKind::opposite, op);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(opop.le(i, j) == two.le(i, j));
}

TEST_CASE("slices") {
    FinPoset two = chain_poset(2);
    auto [s1, e1] = slice_poset(PosetMap::identity(two), 1, SliceSide::over);
    CHECK(s1.size() == 2);  // {0, 1}, the principal down-set

    FinPoset one = chain_poset(1);
    auto [s2, e2] = slice_poset(element_map(one, 1), 0, SliceSide::over);
    CHECK(s2.size() == 0);  // no morphism 1 -> 0

    // d^1 : [1] -> [2] with image {0, 2}; over-slice at 1 has one object
    PosetMap d1(one, two, {0, 2});
    auto [s3, e3] = slice_poset(d1, 1, SliceSide::over);
    CHECK(s3.size() == 1);
    CHECK(s3.label(0) == "0");

    CHECK_THROWS_AS(slice_poset(d1, 7, SliceSide::over), ObjectNotInTarget);

    // the general construction agrees with the subposet description
    for (int trial = 0; trial < 10; ++trial) {
        Rng rng(Rng::mix(5, trial));
        GenBounds b;
        PosetMap u = gen_monotone_map(rng, b);
        int k = rng.below(u.tgt.size());
        SliceResult sr = slice(FunctorData::from_poset_map(u), k, SliceSide::over);
        auto [sp, elems] = slice_poset(u, k, SliceSide::over);
        CHECK(sr.cat.num_objects() == sp.size());
        std::set<int> a(sr.js.begin(), sr.js.end()), b2(elems.begin(), elems.end());
        CHECK(a == b2);
    }
}

TEST_CASE("comma categories") {
    FinCategory e = category_from_poset(terminal_poset());
    CommaResult c1 = comma(FunctorData::identity(e), FunctorData::identity(e));
    CHECK(c1.cat.num_objects() == 1);

    FinPoset one = chain_poset(1);
    FunctorData at0 = FunctorData::from_poset_map(element_map(one, 0));
    FunctorData at1 = FunctorData::from_poset_map(element_map(one, 1));
    CHECK(comma(at0, at1).cat.num_objects() == 1);  // the morphism 0 -> 1
    CHECK(comma(at1, at0).cat.num_objects() == 0);

    // comma(k, u) is isomorphic to the under-slice, as categories
    for (int trial = 0; trial < 10; ++trial) {
        Rng rng(Rng::mix(6, trial));
        GenBounds b;
        PosetMap u = gen_monotone_map(rng, b);
        int k = rng.below(u.tgt.size());
        FunctorData uf = FunctorData::from_poset_map(u);
        FunctorData kf = FunctorData::from_poset_map(element_map(u.tgt, k));
        CommaResult c = comma(kf, uf);
        SliceResult s = slice(uf, k, SliceSide::under);
        REQUIRE(c.cat.num_objects() == s.cat.num_objects());
        // both are poset-shaped here; exhibit the isomorphism on underlying posets
        auto cp = category_as_poset(c.cat);
        auto sp = category_as_poset(s.cat);
        REQUIRE(cp.has_value());
        REQUIRE(sp.has_value());
        CHECK(poset_iso(*cp, *sp).has_value());
    }
}

TEST_CASE("mapping cylinders") {
    FinPoset one = chain_poset(1);
    PosetMap at0 = element_map(one, 0);
    PosetCylinderResult cyl = mapping_cylinder(at0, CylinderKind::cyl);
    CHECK(cyl.poset.size() == 3);
    int base = cyl.poset.index_of("0,0");
    for (int i = 0; i < 3; ++i)
        if (i != base) {
            CHECK(cyl.poset.le(base, i));
            CHECK_FALSE(cyl.poset.le(i, base));
        }
    // q.i = u and q.s = id, structurally
    for (int j = 0; j < at0.src.size(); ++j) CHECK(cyl.q(cyl.i(j)) == at0(j));
    for (int k = 0; k < at0.tgt.size(); ++k) CHECK(cyl.q(cyl.s(k)) == k);

    PosetMap ide = PosetMap::identity(terminal_poset());
    PosetCylinderResult cyl2 = mapping_cylinder(ide, CylinderKind::cyl);
    CHECK(cyl2.poset.size() == 2);
    CHECK(cyl2.poset.le(cyl2.s(0), cyl2.i(0)));  // i hits level 1, s level 0

    // general-category version keeps the same relations
    CylinderResult c3 = mapping_cylinder(FunctorData::from_poset_map(at0), CylinderKind::cyl);
    CHECK(c3.cat.num_objects() == 3);
    for (int j = 0; j < 1; ++j)
        CHECK(c3.q.obj_map[c3.i.obj_map[j]] == 0);
}

TEST_CASE("sieve status") {
    FinPoset one = chain_poset(1);
    CHECK(sieve_status(element_map(one, 0)) == SieveStatus::sieve);
    CHECK(sieve_status(element_map(one, 1)) == SieveStatus::cosieve);
    CHECK(sieve_status(PosetMap::identity(one)) == SieveStatus::both);
    FinPoset push = named_shape("corner_push").poset;
    PosetMap horiz(one, push, {push.index_of("0,0"), push.index_of("1,0")});
    CHECK(sieve_status(horiz) == SieveStatus::sieve);
    // non-embedding
    CHECK(sieve_status(constant_map(one, one, 0)) == SieveStatus::neither);
}

TEST_CASE("fibration status") {
    FinPoset one = chain_poset(1);
    FinPoset prod = combine(CombineKind::product, one, &one);
    // projection to the second factor
    std::vector<int> pr(prod.size());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) pr[i * 2 + j] = j;
    FibrationStatus st =
        fibration_status(FunctorData::from_poset_map(PosetMap(prod, one, pr)));
    CHECK(st.fibration);
    CHECK(st.opfibration);

    FibrationStatus st2 = fibration_status(FunctorData::from_poset_map(to_terminal(one)));
    CHECK(st2.fibration);
    CHECK(st2.opfibration);

    FibrationStatus st3 = fibration_status(FunctorData::from_poset_map(element_map(one, 0)));
    CHECK_FALSE(st3.opfibration);  // no cocartesian lift of 0 -> 1
    CHECK(st3.discrete_fibers);
}

TEST_CASE("adjoint search") {
    FinPoset one = chain_poset(1), two = chain_poset(2);
    PosetMap s0(two, one, {0, 0, 1});
    auto r = find_adjoint(s0, AdjointSide::right);
    REQUIRE(r.has_value());
    CHECK(r->map == std::vector<int>{1, 2});  // d^0

    PosetMap p = to_terminal(one);
    auto l = find_adjoint(p, AdjointSide::left);
    auto rr = find_adjoint(p, AdjointSide::right);
    REQUIRE(l.has_value());
    REQUIRE(rr.has_value());
    CHECK(l->map == std::vector<int>{0});
    CHECK(rr->map == std::vector<int>{1});

    PosetMap from_empty(empty_poset(), terminal_poset(), {});
    CHECK_FALSE(find_adjoint(from_empty, AdjointSide::right).has_value());

    // triangular inequalities for every found adjoint
    for (int trial = 0; trial < 20; ++trial) {
        Rng rng(Rng::mix(9, trial));
        GenBounds b;
        PosetMap u = gen_monotone_map(rng, b);
        if (auto radj = find_adjoint(u, AdjointSide::right)) {
            for (int x = 0; x < u.src.size(); ++x) CHECK(u.src.le(x, (*radj)(u(x))));
            for (int y = 0; y < u.tgt.size(); ++y) CHECK(u.tgt.le(u((*radj)(y)), y));
        }
    }
}

TEST_CASE("category and functor props") {
    FinPoset two = chain_poset(2), one = chain_poset(1);
    FinPoset p21 = combine(CombineKind::product, two, &one);
    CategoryProps cp = category_props(category_from_poset(p21));
    CHECK(cp.has_terminal);
    CHECK(category_from_poset(p21).object(cp.terminal) == "2,1");
    CHECK(cp.has_initial);
    CHECK(category_from_poset(p21).object(cp.initial) == "0,0");

    FinPoset push = named_shape("corner_push").poset;
    CHECK_FALSE(category_props(category_from_poset(push)).has_terminal);

    FinPoset box = named_shape("box").poset;
    PosetMap incl = inclusion_by_labels(push, box);
    FunctorProps fp = functor_props(FunctorData::from_poset_map(incl));
    CHECK(fp.fully_faithful);
    CHECK(fp.injective_on_objects);
}

TEST_CASE("nerve chains") {
    CHECK(nerve_chains(chain_poset(1), 1).size() == 1);
    CHECK(nerve_chains(named_shape("corner_push").poset, 2).empty());
    CHECK(nerve_chains(named_shape("box").poset, 2).size() == 2);
}

TEST_CASE("extension-by-zero slices vanish outside the image") {
    // sieves have empty under-slices outside the image, cosieves empty
    // over-slices; these feed the extension-by-zero arguments
    for (int trial = 0; trial < 10; ++trial) {
        Rng rng(Rng::mix(11, trial));
        GenBounds b;
        FinPoset k = gen_poset(rng, b);
        int g = rng.below(k.size());
        std::vector<int> down = k.down_set(g);
        FinPoset j = k.subposet(down);
        PosetMap u = inclusion_map(j, k, down);
        REQUIRE((sieve_status(u) == SieveStatus::sieve || sieve_status(u) == SieveStatus::both));
        for (int e = 0; e < k.size(); ++e) {
            bool in = std::find(down.begin(), down.end(), e) != down.end();
            if (!in) CHECK(slice_poset(u, e, SliceSide::under).first.size() == 0);
        }
        std::vector<int> upv = k.up_set(g);
        FinPoset j2 = k.subposet(upv);
        PosetMap u2 = inclusion_map(j2, k, upv);
        REQUIRE((sieve_status(u2) == SieveStatus::cosieve ||
                 sieve_status(u2) == SieveStatus::both));
        for (int e = 0; e < k.size(); ++e) {
            bool in = std::find(upv.begin(), upv.end(), e) != upv.end();
            if (!in) CHECK(slice_poset(u2, e, SliceSide::over).first.size() == 0);
        }
    }
}

TEST_CASE("product associativity up to relabeling") {
    FinPoset a = chain_poset(1), b = chain_poset(2), c = terminal_poset();
    FinPoset ab = combine(CombineKind::product, a, &b);
    FinPoset bc = combine(CombineKind::product, b, &c);
    FinPoset left = combine(CombineKind::product, ab, &c);
    FinPoset right = combine(CombineKind::product, a, &bc);
    CHECK(poset_iso(left, right).has_value());
}

TEST_CASE("functor validation") {
    FinPoset one = chain_poset(1);
    FinCategory c = category_from_poset(one);
    CHECK_THROWS(FunctorData::from_object_map(c, c, {1, 0}));  // not monotone
    NamedShape box = named_shape("box");
    CHECK_THROWS_AS(PosetMap(box.poset, one,
                             {0, 1, 1, 0}),  // (0,1) -> 1 but (1,1) -> 0
                    NotMonotone);
}

TEST_CASE("combine on general categories") {
    FinCategory one = category_from_poset(chain_poset(1));
    FinCategory e = category_from_poset(terminal_poset());
    FinCategory prod = combine(CombineKind::product, one, &one);
    CHECK(prod.num_objects() == 4);
    CHECK(prod.num_morphisms() == 9);  // 3 x 3 relation pairs
    FinCategory cop = combine(CombineKind::coproduct, one, &e);
    CHECK(cop.num_objects() == 3);
    CHECK(cop.num_morphisms() == 4);
    FinCategory op = combine(CombineKind::opposite, one);
    CHECK(op.num_objects() == 2);
    // the arrow now runs 1 -> 0
    CHECK(op.hom(1, 0).size() == 1);
    CHECK(op.hom(0, 1).empty());
    FinCategory opop = combine(CombineKind::opposite, op);
    CHECK(opop.hom(0, 1).size() == 1);
}
