#include "derlab/repmodel.hpp"
#include "derlab/verify.hpp"

#include <doctest.h>

using namespace derlab;

namespace {

VecDiagram arrow_diagram(int dim_a, int dim_b, const QMatrix& f) {
    FinPoset one = chain_poset(1);
    FinCategory c = category_from_poset(one);
    std::map<int, QMatrix> gens;
    gens.emplace(poset_morphism(c, one, 0, 1), f);
    return VecDiagram::from_generators(c, {dim_a, dim_b}, gens, f.field());
}

VecDiagram on_terminal(int dim, const Field& f = Field{}) {
    FinCategory e = category_from_poset(terminal_poset());
    return VecDiagram(e, {dim}, {QMatrix::identity(dim, f)});
}

}  // namespace

TEST_CASE("functoriality is checked on construction") {
    FinPoset box = named_shape("box").poset;
    FinCategory c = category_from_poset(box);
    std::map<int, QMatrix> gens;
    auto m = [&](const char* a, const char* b) {
        return poset_morphism(c, box, box.index_of(a), box.index_of(b));
    };
    gens.emplace(m("0,0", "1,0"), QMatrix::from_rows({{1}}));
    gens.emplace(m("1,0", "1,1"), QMatrix::from_rows({{1}}));
    gens.emplace(m("0,0", "0,1"), QMatrix::from_rows({{1}}));
    gens.emplace(m("0,1", "1,1"), QMatrix::from_rows({{2}}));  // paths disagree
    CHECK_THROWS_AS(VecDiagram::from_generators(c, {1, 1, 1, 1}, gens, Field{}),
                    ShapeMismatch);
    gens[m("0,1", "1,1")] = QMatrix::from_rows({{1}});
    CHECK_NOTHROW(VecDiagram::from_generators(c, {1, 1, 1, 1}, gens, Field{}));
}

TEST_CASE("restriction") {
    QMatrix f = QMatrix::from_rows({{1}, {2}});  // Q -> Q^2
    VecDiagram x = arrow_diagram(1, 2, f);
    FinPoset one = chain_poset(1);
    VecDiagram same = restrict_diagram(FunctorData::identity(x.shape), x);
    CHECK(same.dims == x.dims);
    VecDiagram at1 = restrict_diagram(FunctorData::from_poset_map(element_map(one, 1)), x);
    CHECK(at1.dims == std::vector<int>{2});
    // codiagonal: two disjoint copies
    FinPoset two_copies = combine(CombineKind::coproduct, one, &one);
    std::vector<int> nabla(4);
    for (int i = 0; i < 4; ++i) nabla[i] = two_copies.label(i).back() - '0';
    VecDiagram r =
        restrict_diagram(FunctorData::from_poset_map(PosetMap(two_copies, one, nabla)), x);
    CHECK(r.total_dim() == 2 * x.total_dim());
}

TEST_CASE("limits and colimits") {
    VecDiagram v = on_terminal(3);
    CHECK(lim_colim(v, LimColimSide::colim).dim == 3);
    CHECK(lim_colim(v, LimColimSide::lim).dim == 3);

    FinCategory empty_cat = category_from_poset(empty_poset());
    VecDiagram nothing(empty_cat, {}, {});
    CHECK(lim_colim(nothing, LimColimSide::lim).dim == 0);
    CHECK(lim_colim(nothing, LimColimSide::colim).dim == 0);

    // pushout of isomorphisms has dimension 1
    FinPoset push = named_shape("corner_push").poset;
    FinCategory pc = category_from_poset(push);
    std::map<int, QMatrix> gens;
    gens.emplace(poset_morphism(pc, push, push.index_of("0,0"), push.index_of("1,0")),
                 QMatrix::identity(1, Field{}));
    gens.emplace(poset_morphism(pc, push, push.index_of("0,0"), push.index_of("0,1")),
                 QMatrix::identity(1, Field{}));
    VecDiagram corner = VecDiagram::from_generators(pc, {1, 1, 1}, gens, Field{});
    CHECK(lim_colim(corner, LimColimSide::colim).dim == 1);
}

TEST_CASE("kan extensions along endpoint inclusions") {
    FinPoset one = chain_poset(1);
    VecDiagram v = on_terminal(2);
    FunctorData at1 = FunctorData::from_poset_map(element_map(one, 1));
    FunctorData at0 = FunctorData::from_poset_map(element_map(one, 0));

    VecDiagram left1 = kan(at1, v, KanSide::left);  // extension by zero: 0 -> V
    CHECK(left1.dims == std::vector<int>{0, 2});

    VecDiagram right0 = kan(at0, v, KanSide::right);  // V -> 0
    CHECK(right0.dims == std::vector<int>{2, 0});

    VecDiagram left0 = kan(at0, v, KanSide::left);  // V = V
    CHECK(left0.dims == std::vector<int>{2, 2});
    int arrow = poset_morphism(left0.shape, one, 0, 1);
    CHECK(left0.maps[arrow].is_iso());
}

TEST_CASE("units and counits") {
    FinPoset one = chain_poset(1);
    FunctorData at1 = FunctorData::from_poset_map(element_map(one, 1));
    VecDiagram v = on_terminal(2);
    // fully faithful: the unit of (u_!, u^*) is an isomorphism
    DiagramMorphism eta = unit_counit(at1, v, UnitCounit::unit_left);
    CHECK(eta.is_iso());

    VecDiagram y = arrow_diagram(1, 2, QMatrix::from_rows({{1}, {0}}));
    DiagramMorphism eps = unit_counit(at1, y, UnitCounit::counit_left);
    CHECK(eps.components[0].cols() == 0);  // 0 -> A
    CHECK(eps.components[1].is_iso());     // identity on B

    FunctorData idf = FunctorData::identity(y.shape);
    CHECK(unit_counit(idf, y, UnitCounit::unit_left).is_iso());
    CHECK(unit_counit(idf, y, UnitCounit::counit_left).is_iso());
}

TEST_CASE("mates on identity and Kan-formula squares") {
    FinPoset one = chain_poset(1);
    FunctorData idf = FunctorData::identity(category_from_poset(one));
    std::vector<int> ids;
    for (int o = 0; o < idf.src.num_objects(); ++o)
        ids.push_back(idf.src.identity(o));
    NatTransData cell(idf.then(idf), idf.then(idf), ids);
    SquareData sq(idf, idf, idf, idf, cell, CellDirection::to_left);
    VecDiagram y = arrow_diagram(2, 1, QMatrix::from_rows({{1, 1}}));
    DiagramMorphism m = mate(sq, KanSide::left, y);
    CHECK(m.is_iso());
}

TEST_CASE("nat_dim examples") {
    QMatrix id1 = QMatrix::identity(1, Field{});
    VecDiagram const_q = arrow_diagram(1, 1, id1);
    CHECK(nat_dim(const_q, const_q) == 1);

    VecDiagram to_zero = arrow_diagram(1, 0, QMatrix(0, 1, Field{}));
    VecDiagram from_zero = arrow_diagram(0, 1, QMatrix(1, 0, Field{}));
    CHECK(nat_dim(to_zero, from_zero) == 0);
    CHECK(nat_dim(on_terminal(1), on_terminal(1)) == 1);
}

TEST_CASE("adjunction dimension identity") {
    for (int trial = 0; trial < 10; ++trial) {
        Rng rng(Rng::mix(21, trial));
        GenBounds b;
        b.max_elements = 4;
        PosetMap u = gen_monotone_map(rng, b);
        FunctorData uf = FunctorData::from_poset_map(u);
        VecDiagram x = gen_vec_diagram(rng, uf.src, b);
        VecDiagram y = gen_vec_diagram(rng, uf.tgt, b);
        CHECK(nat_dim(kan(uf, x, KanSide::left), y) == nat_dim(x, restrict_diagram(uf, y)));
        CHECK(nat_dim(y, kan(uf, x, KanSide::right)) == nat_dim(restrict_diagram(uf, y), x));
    }
}

TEST_CASE("pasting compatibility of mates") {
    // two pullback squares pasted horizontally equal the mate of the pasting
    Rng rng(31);
    GenBounds b;
    b.max_elements = 3;
    FinPoset m1 = chain_poset(1), m2 = terminal_poset();
    PosetMap u = gen_monotone_map(rng, b);
    FinPoset m2j = combine(CombineKind::product, m2, &u.src);
    FinPoset m2k = combine(CombineKind::product, m2, &u.tgt);

    auto prod_with = [](const FinPoset& m, const PosetMap& f, const FinPoset& mj,
                        const FinPoset& mk) {
        std::vector<int> map(mj.size());
        for (int im = 0; im < m.size(); ++im)
            for (int ij = 0; ij < f.src.size(); ++ij)
                map[im * f.src.size() + ij] = im * f.tgt.size() + f(ij);
        return PosetMap(mj, mk, map);
    };
    auto proj = [](const FinPoset& m, const FinPoset& j, const FinPoset& mj) {
        std::vector<int> map(mj.size());
        for (int im = 0; im < m.size(); ++im)
            for (int ij = 0; ij < j.size(); ++ij) map[im * j.size() + ij] = ij;
        return PosetMap(mj, j, map);
    };
    auto pullback_sq = [&](const FinPoset& m, const PosetMap& f) {
        FinPoset mj = combine(CombineKind::product, m, &f.src);
        FinPoset mk = combine(CombineKind::product, m, &f.tgt);
        FunctorData u1 = FunctorData::from_poset_map(prod_with(m, f, mj, mk));
        FunctorData u2 = FunctorData::from_poset_map(f);
        FunctorData v = FunctorData::from_poset_map(proj(m, f.src, mj));
        FunctorData w = FunctorData::from_poset_map(proj(m, f.tgt, mk));
        FunctorData upper = v.then(u2);
        std::vector<int> comps;
        for (int o = 0; o < upper.src.num_objects(); ++o)
            comps.push_back(upper.tgt.identity(upper.obj_map[o]));
        return SquareData(u1, u2, v, w, NatTransData(upper, u1.then(w), comps),
                          CellDirection::to_left);
    };

    PosetMap mid = prod_with(m2, u, m2j, m2k);
    SquareData right_sq = pullback_sq(m2, u);
    SquareData left_sq = pullback_sq(m1, mid);
    // outer square: (m1 x m2) x J -> J over (m1 x m2) x K -> K
    FunctorData outer_v = left_sq.v.then(right_sq.v);
    FunctorData outer_w = left_sq.w.then(right_sq.w);
    FunctorData outer_u1 = left_sq.u1;
    FunctorData outer_u2 = right_sq.u2;
    FunctorData upper = outer_v.then(outer_u2);
    std::vector<int> comps;
    for (int o = 0; o < upper.src.num_objects(); ++o)
        comps.push_back(upper.tgt.identity(upper.obj_map[o]));
    SquareData outer(outer_u1, outer_u2, outer_v, outer_w,
                     NatTransData(upper, outer_u1.then(outer_w), comps),
                     CellDirection::to_left);

    VecDiagram x = gen_vec_diagram(rng, right_sq.v.tgt, b);
    DiagramMorphism m_outer = mate(outer, KanSide::left, x);
    DiagramMorphism m_right = mate(right_sq, KanSide::left, x);
    DiagramMorphism m_left = mate(left_sq, KanSide::left, restrict_diagram(right_sq.v, x));
    DiagramMorphism composite = m_left.then(restrict_morphism(left_sq.w, m_right));
    REQUIRE(m_outer.components.size() == composite.components.size());
    for (size_t o = 0; o < m_outer.components.size(); ++o)
        CHECK(m_outer.components[o] == composite.components[o]);
}

TEST_CASE("mate transforms are mutually inverse on evaluated components") {
    // alpha = (alpha_!)_* evaluated at samples
    Rng rng(37);
    GenBounds b;
    b.max_elements = 4;
    FinPoset k = gen_poset(rng, b);
    PosetMap u1 = gen_monotone_into(rng, k, b);
    PosetMap u2 = gen_monotone_into(rng, k, b);
    FunctorData u1f = FunctorData::from_poset_map(u1);
    FunctorData u2f = FunctorData::from_poset_map(u2);
    CommaResult c = comma(u1f, u2f);
    SquareData sq(c.pr2, u1f, c.pr1, u2f, c.cell, CellDirection::to_left);
    VecDiagram y = gen_vec_diagram(rng, u1f.tgt, b);

    // left-hand side: the cell action (u1 pr1)^* Y -> (u2 pr2)^* Y
    VecDiagram src = restrict_diagram(c.pr1.then(u1f), y);
    VecDiagram tgt = restrict_diagram(c.pr2.then(u2f), y);
    std::vector<QMatrix> lhs;
    for (int o = 0; o < c.cat.num_objects(); ++o) lhs.push_back(y.maps[c.cell.components[o]]);

    // right-hand side: eta, then the evaluated left mate, then epsilon
    DiagramMorphism eta = unit_counit(sq.u1, src, UnitCounit::unit_left);
    DiagramMorphism mm = mate(sq, KanSide::left, restrict_diagram(sq.u2, y));
    // mm : u1_! pr1^* u2^* Y -> w^* u2_! u2^* Y; compose with u2's counit
    DiagramMorphism eps2 = unit_counit(sq.u2, y, UnitCounit::counit_left);
    DiagramMorphism rhs =
        eta.then(restrict_morphism(sq.u1, mm)).then(restrict_morphism(sq.u1.then(sq.w), eps2));
    for (int o = 0; o < c.cat.num_objects(); ++o) CHECK(rhs.components[o] == lhs[o]);
}

TEST_CASE("Kan extensions along sieves and cosieves vanish outside the image") {
    for (int trial = 0; trial < 6; ++trial) {
        Rng rng(Rng::mix(41, trial));
        GenBounds b;
        FinPoset k = gen_poset(rng, b);
        int g = rng.below(k.size());
        std::vector<int> down = k.down_set(g);
        FinPoset j = k.subposet(down);
        FunctorData u = FunctorData::from_poset_map(inclusion_map(j, k, down));
        VecDiagram x = gen_vec_diagram(rng, u.src, b);
        VecDiagram right = kan(u, x, KanSide::right);
        for (int e = 0; e < k.size(); ++e) {
            bool in = std::find(down.begin(), down.end(), e) != down.end();
            if (!in) CHECK(right.dims[e] == 0);
        }
        std::vector<int> upv = k.up_set(g);
        FinPoset j2 = k.subposet(upv);
        FunctorData u2 = FunctorData::from_poset_map(inclusion_map(j2, k, upv));
        VecDiagram x2 = gen_vec_diagram(rng, u2.src, b);
        VecDiagram left = kan(u2, x2, KanSide::left);
        for (int e = 0; e < k.size(); ++e) {
            bool in = std::find(upv.begin(), upv.end(), e) != upv.end();
            if (!in) CHECK(left.dims[e] == 0);
        }
    }
}

TEST_CASE("shape mismatches are rejected") {
    FinPoset one = chain_poset(1);
    FunctorData at1 = FunctorData::from_poset_map(element_map(one, 1));
    VecDiagram v = on_terminal(2);
    CHECK_THROWS_AS(restrict_diagram(at1, v), ShapeMismatch);  // v lives on e, not [1]
    VecDiagram w = arrow_diagram(1, 1, QMatrix::identity(1, Field{}));
    CHECK_THROWS_AS(kan(at1, w, KanSide::left), ShapeMismatch);
    FinCategory ecat = category_from_poset(terminal_poset());
    CHECK_THROWS_AS(comma(FunctorData::identity(ecat),
                          FunctorData::from_poset_map(element_map(one, 0))),
                    TargetMismatch);
}

TEST_CASE("right extension from a terminal element has invertible structure maps") {
    // the essential image of extension from a terminal object consists of
    // diagrams whose structure maps are all isomorphisms
    for (int trial = 0; trial < 6; ++trial) {
        Rng rng(Rng::mix(61, trial));
        GenBounds b;
        FinPoset k = gen_poset(rng, b);
        auto t = k.terminal();
        if (!t) continue;
        FunctorData tf = FunctorData::from_poset_map(element_map(k, *t));
        VecDiagram v = gen_vec_diagram(rng, tf.src, b);
        VecDiagram e = kan(tf, v, KanSide::right);
        for (int m = 0; m < e.shape.num_morphisms(); ++m) CHECK(e.maps[m].is_iso());
        // and the constant diagram along p is one such extension
        VecDiagram c = restrict_diagram(FunctorData::from_poset_map(to_terminal(k)), v);
        CHECK(nat_dim(c, e) >= 1);
    }
}
