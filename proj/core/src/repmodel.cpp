#include "derlab/repmodel.hpp"

#include <algorithm>

namespace derlab {

VecDiagram::VecDiagram(FinCategory sh, std::vector<int> d, std::vector<QMatrix> m,
                       const Field& f)
    : shape(std::move(sh)), dims(std::move(d)), maps(std::move(m)) {
    if ((int)dims.size() != shape.num_objects() || (int)maps.size() != shape.num_morphisms())
        throw ShapeMismatch("diagram table sizes wrong");
    field = maps.empty() ? f : maps[0].field();
    for (int m0 = 0; m0 < shape.num_morphisms(); ++m0) {
        if (maps[m0].rows() != dims[shape.tgt(m0)] || maps[m0].cols() != dims[shape.src(m0)])
            throw ShapeMismatch("matrix shape does not match object dims at morphism " +
                                std::to_string(m0));
        if (!(maps[m0].field() == field)) throw ShapeMismatch("mixed fields in diagram");
    }
    for (int o = 0; o < shape.num_objects(); ++o)
        if (!(maps[shape.identity(o)] == QMatrix::identity(dims[o], field)))
            throw ShapeMismatch("identity morphism does not map to the identity matrix");
    for (int g = 0; g < shape.num_morphisms(); ++g)
        for (int f = 0; f < shape.num_morphisms(); ++f) {
            if (shape.tgt(f) != shape.src(g)) continue;
            if (!(maps[shape.compose(g, f)] == maps[g] * maps[f]))
                throw ShapeMismatch("functoriality fails at composite of morphisms " +
                                    std::to_string(g) + " . " + std::to_string(f));
        }
}

VecDiagram VecDiagram::from_generators(const FinCategory& sh, const std::vector<int>& dims,
                                       const std::map<int, QMatrix>& generator_maps,
                                       const Field& f) {
    int nm = sh.num_morphisms();
    std::vector<QMatrix> maps(nm);
    std::vector<bool> have(nm, false);
    for (int o = 0; o < sh.num_objects(); ++o) {
        maps[sh.identity(o)] = QMatrix::identity(dims[o], f);
        have[sh.identity(o)] = true;
    }
    for (const auto& [m, mat] : generator_maps) {
        if (have[m] && !(maps[m] == mat))
            throw ShapeMismatch("generator map conflicts with identity");
        maps[m] = mat;
        have[m] = true;
    }
    // close under composition until stable; check path independence
    bool changed = true;
    while (changed) {
        changed = false;
        for (int g = 0; g < nm; ++g)
            for (int f2 = 0; f2 < nm; ++f2) {
                if (sh.tgt(f2) != sh.src(g) || !have[g] || !have[f2]) continue;
                int c = sh.compose(g, f2);
                QMatrix comp = maps[g] * maps[f2];
                if (!have[c]) {
                    maps[c] = comp;
                    have[c] = true;
                    changed = true;
                } else if (!(maps[c] == comp)) {
                    throw ShapeMismatch("non-commuting square: composite " + std::to_string(g) +
                                        " . " + std::to_string(f2) + " disagrees at morphism " +
                                        std::to_string(c));
                }
            }
    }
    for (int m = 0; m < nm; ++m)
        if (!have[m]) throw ShapeMismatch("generators do not span morphism " + std::to_string(m));
    return VecDiagram(sh, dims, maps);
}

int VecDiagram::total_dim() const {
    int t = 0;
    for (int d : dims) t += d;
    return t;
}

DiagramMorphism::DiagramMorphism(VecDiagram s, VecDiagram t, std::vector<QMatrix> comps)
    : source(std::move(s)), target(std::move(t)), components(std::move(comps)) {
    if (source.shape.num_objects() != target.shape.num_objects())
        throw ShapeMismatch("morphism between diagrams on different shapes");
    if ((int)components.size() != source.shape.num_objects())
        throw ShapeMismatch("component count wrong");
    for (int m = 0; m < source.shape.num_morphisms(); ++m) {
        int a = source.shape.src(m), b = source.shape.tgt(m);
        if (!(components[b] * source.maps[m] == target.maps[m] * components[a]))
            throw ShapeMismatch("naturality fails at morphism " + std::to_string(m));
    }
}

bool DiagramMorphism::is_iso() const {
    for (const auto& c : components)
        if (!c.is_iso()) return false;
    return true;
}

DiagramMorphism DiagramMorphism::then(const DiagramMorphism& g) const {
    std::vector<QMatrix> comps;
    for (int o = 0; o < source.shape.num_objects(); ++o)
        comps.push_back(g.components[o] * components[o]);
    return DiagramMorphism(source, g.target, std::move(comps));
}

VecDiagram restrict_diagram(const FunctorData& u, const VecDiagram& x) {
    if (x.shape.num_objects() != u.tgt.num_objects() ||
        x.shape.num_morphisms() != u.tgt.num_morphisms())
        throw ShapeMismatch("diagram does not live on the functor target");
    std::vector<int> dims(u.src.num_objects());
    std::vector<QMatrix> maps(u.src.num_morphisms());
    for (int o = 0; o < u.src.num_objects(); ++o) dims[o] = x.dims[u.obj_map[o]];
    for (int m = 0; m < u.src.num_morphisms(); ++m) maps[m] = x.maps[u.mor_map[m]];
    return VecDiagram(u.src, dims, maps, x.field);
}

DiagramMorphism restrict_morphism(const FunctorData& u, const DiagramMorphism& f) {
    std::vector<QMatrix> comps;
    for (int o = 0; o < u.src.num_objects(); ++o) comps.push_back(f.components[u.obj_map[o]]);
    return DiagramMorphism(restrict_diagram(u, f.source), restrict_diagram(u, f.target),
                           std::move(comps));
}

LimColimResult lim_colim(const VecDiagram& x, LimColimSide side) {
    const FinCategory& J = x.shape;
    const Field f = x.field;
    LimColimResult r;
    r.offsets.resize(J.num_objects());
    int total = 0;
    for (int o = 0; o < J.num_objects(); ++o) {
        r.offsets[o] = total;
        total += x.dims[o];
    }
    std::vector<int> arrows;  // non-identity morphisms
    for (int m = 0; m < J.num_morphisms(); ++m)
        if (!J.is_identity(m)) arrows.push_back(m);
    if (side == LimColimSide::lim) {
        // kernel of (+)X_j -> (+)_{f:j->j'} X_{j'},  v |-> X_f v_j - v_{j'}
        int crows = 0;
        for (int m : arrows) crows += x.dims[J.tgt(m)];
        QMatrix phi(crows, total, f);
        int row = 0;
        for (int m : arrows) {
            int a = J.src(m), b = J.tgt(m);
            const QMatrix& M = x.maps[m];
            for (int i = 0; i < x.dims[b]; ++i) {
                for (int j = 0; j < x.dims[a]; ++j) phi.at(row + i, r.offsets[a] + j) = M.at(i, j);
                phi.at(row + i, r.offsets[b] + i) =
                    phi.at(row + i, r.offsets[b] + i) - Scalar::one(f);
            }
            row += x.dims[b];
        }
        r.structure = phi.kernel();  // total x dim
        r.dim = r.structure.cols();
        for (int o = 0; o < J.num_objects(); ++o)
            r.legs.push_back(r.structure.block(r.offsets[o], 0, x.dims[o], r.dim));
        return r;
    }
    // colim: cokernel of (+)_{f} X_{src f} -> (+)X_j, v |-> ins_tgt(X_f v) - ins_src(v)
    int ccols = 0;
    for (int m : arrows) ccols += x.dims[J.src(m)];
    QMatrix psi(total, ccols, f);
    int col = 0;
    for (int m : arrows) {
        int a = J.src(m), b = J.tgt(m);
        const QMatrix& M = x.maps[m];
        for (int j = 0; j < x.dims[a]; ++j) {
            for (int i = 0; i < x.dims[b]; ++i) psi.at(r.offsets[b] + i, col + j) = M.at(i, j);
            psi.at(r.offsets[a] + j, col + j) = psi.at(r.offsets[a] + j, col + j) - Scalar::one(f);
        }
        col += x.dims[a];
    }
    // quotient projection: rows span the annihilator of im(psi)
    QMatrix pi = psi.transpose().kernel().transpose();
    r.structure = pi;  // dim x total
    r.dim = pi.rows();
    for (int o = 0; o < J.num_objects(); ++o)
        r.legs.push_back(pi.block(0, r.offsets[o], r.dim, x.dims[o]));
    return r;
}

QMatrix universal_from_colim(const VecDiagram& x, const LimColimResult& c,
                             const std::vector<QMatrix>& cocone, int target_dim) {
    const Field f = x.field;
    int total = c.structure.cols();
    QMatrix g(target_dim, total, f);
    for (int o = 0; o < x.shape.num_objects(); ++o)
        for (int i = 0; i < target_dim; ++i)
            for (int j = 0; j < x.dims[o]; ++j) g.at(i, c.offsets[o] + j) = cocone[o].at(i, j);
    // unique h with h . pi = g; pi has full row rank so pi^T is injective
    auto ht = c.structure.transpose().solve(g.transpose());
    if (!ht) throw DomainError("cocone does not factor through the colimit");
    return ht->transpose();
}

QMatrix universal_into_lim(const VecDiagram& x, const LimColimResult& l,
                           const std::vector<QMatrix>& cone, int source_dim) {
    const Field f = x.field;
    int total = l.structure.rows();
    QMatrix g(total, source_dim, f);
    for (int o = 0; o < x.shape.num_objects(); ++o)
        for (int i = 0; i < x.dims[o]; ++i)
            for (int j = 0; j < source_dim; ++j) g.at(l.offsets[o] + i, j) = cone[o].at(i, j);
    auto h = l.structure.solve(g);  // kernel inclusion has full column rank
    if (!h) throw DomainError("cone does not factor through the limit");
    return *h;
}

namespace {

struct SliceDiagram {
    SliceResult sl;
    VecDiagram restricted;
    LimColimResult lc;
};

SliceDiagram slice_value(const FunctorData& u, const VecDiagram& x, int k, KanSide side) {
    SliceDiagram s;
    s.sl = slice(u, k, side == KanSide::left ? SliceSide::over : SliceSide::under);
    s.restricted = restrict_diagram(s.sl.projection, x);
    s.lc = lim_colim(s.restricted, side == KanSide::left ? LimColimSide::colim : LimColimSide::lim);
    return s;
}

}  // namespace

VecDiagram kan(const FunctorData& u, const VecDiagram& x, KanSide side) {
    if (x.shape.num_objects() != u.src.num_objects() ||
        x.shape.num_morphisms() != u.src.num_morphisms())
        throw ShapeMismatch("diagram does not live on the functor source");
    const FinCategory& K = u.tgt;
    std::vector<SliceDiagram> vals;
    vals.reserve(K.num_objects());
    for (int k = 0; k < K.num_objects(); ++k) vals.push_back(slice_value(u, x, k, side));
    std::vector<int> dims(K.num_objects());
    for (int k = 0; k < K.num_objects(); ++k) dims[k] = vals[k].lc.dim;
    std::vector<QMatrix> maps(K.num_morphisms());
    for (int m = 0; m < K.num_morphisms(); ++m) {
        int a = K.src(m), b = K.tgt(m);
        if (side == KanSide::left) {
            // slice functor J_{/a} -> J_{/b}: (j, g) -> (j, m.g); universal map
            std::vector<QMatrix> cocone;
            for (int o = 0; o < vals[a].sl.cat.num_objects(); ++o) {
                int j = vals[a].sl.js[o], g = vals[a].sl.fs[o];
                int g2 = K.compose(m, g);
                int o2 = -1;
                for (int p = 0; p < vals[b].sl.cat.num_objects(); ++p)
                    if (vals[b].sl.js[p] == j && vals[b].sl.fs[p] == g2) o2 = p;
                cocone.push_back(vals[b].lc.legs[o2]);
            }
            maps[m] = universal_from_colim(vals[a].restricted, vals[a].lc, cocone, dims[b]);
        } else {
            // slice functor J_{b/} -> J_{a/}: (j, g) -> (j, g.m); map into lim
            std::vector<QMatrix> cone;
            for (int o = 0; o < vals[b].sl.cat.num_objects(); ++o) {
                int j = vals[b].sl.js[o], g = vals[b].sl.fs[o];
                int g2 = K.compose(g, m);
                int o2 = -1;
                for (int p = 0; p < vals[a].sl.cat.num_objects(); ++p)
                    if (vals[a].sl.js[p] == j && vals[a].sl.fs[p] == g2) o2 = p;
                cone.push_back(vals[a].lc.legs[o2]);
            }
            maps[m] = universal_into_lim(vals[b].restricted, vals[b].lc, cone, dims[a]);
        }
    }
    // functoriality of the assembly is re-verified by the constructor
    return VecDiagram(K, dims, maps, x.field);
}

DiagramMorphism kan_morphism(const FunctorData& u, const DiagramMorphism& f, KanSide side) {
    VecDiagram kx = kan(u, f.source, side), ky = kan(u, f.target, side);
    const FinCategory& K = u.tgt;
    std::vector<QMatrix> comps;
    for (int k = 0; k < K.num_objects(); ++k) {
        SliceDiagram sx = slice_value(u, f.source, k, side);
        SliceDiagram sy = slice_value(u, f.target, k, side);
        std::vector<QMatrix> legs;
        if (side == KanSide::left) {
            for (int o = 0; o < sx.sl.cat.num_objects(); ++o)
                legs.push_back(sy.lc.legs[o] * f.components[sx.sl.js[o]]);
            comps.push_back(universal_from_colim(sx.restricted, sx.lc, legs, ky.dims[k]));
        } else {
            for (int o = 0; o < sx.sl.cat.num_objects(); ++o)
                legs.push_back(f.components[sx.sl.js[o]] * sx.lc.legs[o]);
            comps.push_back(universal_into_lim(sy.restricted, sy.lc, legs, kx.dims[k]));
        }
    }
    return DiagramMorphism(kx, ky, std::move(comps));
}

DiagramMorphism unit_counit(const FunctorData& u, const VecDiagram& arg, UnitCounit which) {
    switch (which) {
        case UnitCounit::unit_left: {
            // arg = X on J; X -> u^* u_! X, insert at slice object (j, id)
            VecDiagram kx = kan(u, arg, KanSide::left);
            VecDiagram rkx = restrict_diagram(u, kx);
            std::vector<QMatrix> comps;
            for (int j = 0; j < u.src.num_objects(); ++j) {
                int k = u.obj_map[j];
                SliceDiagram s = slice_value(u, arg, k, KanSide::left);
                int o = -1;
                for (int p = 0; p < s.sl.cat.num_objects(); ++p)
                    if (s.sl.js[p] == j && s.sl.fs[p] == u.tgt.identity(k)) o = p;
                comps.push_back(s.lc.legs[o]);
            }
            return DiagramMorphism(arg, rkx, std::move(comps));
        }
        case UnitCounit::counit_left: {
            // arg = Y on K; u_! u^* Y -> Y via the cocone Y_{u(j)} -> Y_k
            VecDiagram ry = restrict_diagram(u, arg);
            VecDiagram kry = kan(u, ry, KanSide::left);
            std::vector<QMatrix> comps;
            for (int k = 0; k < u.tgt.num_objects(); ++k) {
                SliceDiagram s = slice_value(u, ry, k, KanSide::left);
                std::vector<QMatrix> cocone;
                for (int o = 0; o < s.sl.cat.num_objects(); ++o)
                    cocone.push_back(arg.maps[s.sl.fs[o]]);
                comps.push_back(universal_from_colim(s.restricted, s.lc, cocone, arg.dims[k]));
            }
            return DiagramMorphism(kry, arg, std::move(comps));
        }
        case UnitCounit::unit_right: {
            // arg = Y on K; Y -> u_* u^* Y via the cone Y_k -> Y_{u(j)}
            VecDiagram ry = restrict_diagram(u, arg);
            VecDiagram kry = kan(u, ry, KanSide::right);
            std::vector<QMatrix> comps;
            for (int k = 0; k < u.tgt.num_objects(); ++k) {
                SliceDiagram s = slice_value(u, ry, k, KanSide::right);
                std::vector<QMatrix> cone;
                for (int o = 0; o < s.sl.cat.num_objects(); ++o)
                    cone.push_back(arg.maps[s.sl.fs[o]]);
                comps.push_back(universal_into_lim(s.restricted, s.lc, cone, arg.dims[k]));
            }
            return DiagramMorphism(arg, kry, std::move(comps));
        }
        case UnitCounit::counit_right: {
            // arg = X on J; u^* u_* X -> X, project at slice object (j, id)
            VecDiagram kx = kan(u, arg, KanSide::right);
            VecDiagram rkx = restrict_diagram(u, kx);
            std::vector<QMatrix> comps;
            for (int j = 0; j < u.src.num_objects(); ++j) {
                int k = u.obj_map[j];
                SliceDiagram s = slice_value(u, arg, k, KanSide::right);
                int o = -1;
                for (int p = 0; p < s.sl.cat.num_objects(); ++p)
                    if (s.sl.js[p] == j && s.sl.fs[p] == u.tgt.identity(k)) o = p;
                comps.push_back(s.lc.legs[o]);
            }
            return DiagramMorphism(rkx, arg, std::move(comps));
        }
    }
    throw DomainError("unreachable");
}

namespace {

// (u2 v)^* Y -> (w u1)^* Y with components Y at the cell, for the to_left
// orientation; the to_right orientation transposes the roles.
DiagramMorphism cell_action(const SquareData& sq, const VecDiagram& y, bool left_orientation) {
    const FunctorData upper = sq.v.then(sq.u2);
    const FunctorData lower = sq.u1.then(sq.w);
    const FunctorData& from = left_orientation ? upper : lower;
    const FunctorData& to = left_orientation ? lower : upper;
    VecDiagram a = restrict_diagram(from, y), b = restrict_diagram(to, y);
    std::vector<QMatrix> comps;
    for (int j = 0; j < from.src.num_objects(); ++j)
        comps.push_back(y.maps[sq.cell.components[j]]);
    return DiagramMorphism(a, b, std::move(comps));
}

}  // namespace

DiagramMorphism mate(const SquareData& sq, KanSide side, const VecDiagram& sample) {
    if (side == KanSide::left) {
        if (sq.direction != CellDirection::to_left)
            throw ShapeMismatch("left mate needs a cell oriented toward the lower composite");
        // u1_! v^* X --(u1_! v^* eta)--> u1_! (u2 v)^* u2_! X
        //          --(u1_! cell)-->      u1_! u1^* w^* u2_! X --(eps)--> w^* u2_! X
        VecDiagram k2x = kan(sq.u2, sample, KanSide::left);
        DiagramMorphism eta = unit_counit(sq.u2, sample, UnitCounit::unit_left);
        DiagramMorphism s1 = kan_morphism(sq.u1, restrict_morphism(sq.v, eta), KanSide::left);
        DiagramMorphism s2 = kan_morphism(sq.u1, cell_action(sq, k2x, true), KanSide::left);
        VecDiagram wk2x = restrict_diagram(sq.w, k2x);
        DiagramMorphism eps = unit_counit(sq.u1, wk2x, UnitCounit::counit_left);
        return s1.then(s2).then(eps);
    }
    if (sq.direction != CellDirection::to_right)
        throw ShapeMismatch("right mate needs a cell oriented toward the upper composite");
    // w^* u2_* X --(eta)--> u1_* u1^* w^* u2_* X = u1_* (w u1)^* u2_* X
    //   --(u1_* cell)--> u1_* (u2 v)^* u2_* X --(u1_* v^* eps)--> u1_* v^* X
    VecDiagram k2x = kan(sq.u2, sample, KanSide::right);
    VecDiagram wk2x = restrict_diagram(sq.w, k2x);
    DiagramMorphism eta = unit_counit(sq.u1, wk2x, UnitCounit::unit_right);
    DiagramMorphism s2 = kan_morphism(sq.u1, cell_action(sq, k2x, false), KanSide::right);
    DiagramMorphism eps = unit_counit(sq.u2, sample, UnitCounit::counit_right);
    DiagramMorphism s3 = kan_morphism(sq.u1, restrict_morphism(sq.v, eps), KanSide::right);
    return eta.then(s2).then(s3);
}

SquareVerdict exact_square_verdict(const SquareData& sq, KanSide side,
                                   const std::vector<VecDiagram>& samples) {
    SquareVerdict v;
    for (int i = 0; i < (int)samples.size(); ++i) {
        DiagramMorphism m = mate(sq, side, samples[i]);
        for (int o = 0; o < m.source.shape.num_objects(); ++o) {
            if (!m.components[o].is_iso()) {
                v.pass = false;
                v.failing_sample = i;
                v.failing_object = m.source.shape.object(o);
                v.witness_matrix = m.components[o].str();
                return v;
            }
        }
    }
    return v;
}

std::vector<DiagramMorphism> nat_basis(const VecDiagram& x, const VecDiagram& y) {
    const FinCategory& J = x.shape;
    const Field f = x.field;
    // unknowns: entries of t_o (dims_y[o] x dims_x[o]); constraints per
    // morphism m: t_tgt . x_m - y_m . t_src = 0
    std::vector<int> off(J.num_objects());
    int total = 0;
    for (int o = 0; o < J.num_objects(); ++o) {
        off[o] = total;
        total += y.dims[o] * x.dims[o];
    }
    auto var = [&](int o, int r, int c) { return off[o] + r * x.dims[o] + c; };
    std::vector<int> arrows;
    for (int m = 0; m < J.num_morphisms(); ++m)
        if (!J.is_identity(m)) arrows.push_back(m);
    int rows = 0;
    for (int m : arrows) rows += y.dims[J.tgt(m)] * x.dims[J.src(m)];
    QMatrix sys(rows, total, f);
    int row = 0;
    for (int m : arrows) {
        int a = J.src(m), b = J.tgt(m);
        for (int i = 0; i < y.dims[b]; ++i)
            for (int j = 0; j < x.dims[a]; ++j) {
                for (int k = 0; k < x.dims[b]; ++k)
                    sys.at(row, var(b, i, k)) = sys.at(row, var(b, i, k)) + x.maps[m].at(k, j);
                for (int k = 0; k < y.dims[a]; ++k)
                    sys.at(row, var(a, k, j)) = sys.at(row, var(a, k, j)) - y.maps[m].at(i, k);
                ++row;
            }
    }
    QMatrix ker = sys.kernel();
    std::vector<DiagramMorphism> basis;
    for (int b = 0; b < ker.cols(); ++b) {
        std::vector<QMatrix> comps;
        for (int o = 0; o < J.num_objects(); ++o) {
            QMatrix t(y.dims[o], x.dims[o], f);
            for (int i = 0; i < y.dims[o]; ++i)
                for (int j = 0; j < x.dims[o]; ++j) t.at(i, j) = ker.at(var(o, i, j), b);
            comps.push_back(t);
        }
        basis.emplace_back(x, y, std::move(comps));
    }
    return basis;
}

long nat_dim(const VecDiagram& x, const VecDiagram& y) {
    if (x.shape.num_objects() != y.shape.num_objects() ||
        x.shape.num_morphisms() != y.shape.num_morphisms())
        throw ShapeMismatch("nat_dim requires a shared shape");
    return (long)nat_basis(x, y).size();
}

}  // namespace derlab
