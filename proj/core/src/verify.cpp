#include "derlab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <set>
#include <sstream>

namespace derlab {

std::uint64_t Rng::next() {
    s_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

int Rng::below(int n) { return n <= 1 ? 0 : (int)(next() % (std::uint64_t)n); }
int Rng::range(int lo, int hi) { return lo + below(hi - lo + 1); }
bool Rng::chance(int num, int den) { return below(den) < num; }

std::uint64_t Rng::mix(std::uint64_t a, std::uint64_t b) {
    Rng r(a ^ (b * 0x9e3779b97f4a7c15ULL + 1));
    return r.next();
}

// ---------------------------------------------------------------------------
// Generators

FinPoset gen_poset(Rng& rng, const GenBounds& b) {
    int n = rng.range(1, std::max(1, b.max_elements));
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.chance(2, 5)) pairs.emplace_back(labels[i], labels[j]);
    return build_poset(labels, pairs);
}

PosetMap gen_monotone_into(Rng& rng, const FinPoset& tgt, const GenBounds& b) {
    for (int attempt = 0; attempt < 32; ++attempt) {
        FinPoset src = gen_poset(rng, b);
        std::vector<int> m(src.size(), -1);
        bool ok = true;
        // indices of generated posets are a linear extension
        for (int j = 0; j < src.size() && ok; ++j) {
            std::vector<int> cand;
            for (int y = 0; y < tgt.size(); ++y) {
                bool fits = true;
                for (int j2 = 0; j2 < j; ++j2)
                    if (src.le(j2, j) && !tgt.le(m[j2], y)) fits = false;
                if (fits) cand.push_back(y);
            }
            if (cand.empty())
                ok = false;
            else
                m[j] = cand[rng.below((int)cand.size())];
        }
        if (ok) return PosetMap(src, tgt, m);
    }
    // a constant map to a maximal element is always monotone
    FinPoset src = gen_poset(rng, b);
    int top = 0;
    for (int y = 0; y < tgt.size(); ++y) {
        bool maximal = true;
        for (int z = 0; z < tgt.size(); ++z) maximal = maximal && (!tgt.lt(y, z));
        if (maximal) top = y;
    }
    return constant_map(src, tgt, top);
}

PosetMap gen_monotone_map(Rng& rng, const GenBounds& b) {
    FinPoset tgt = gen_poset(rng, b);
    return gen_monotone_into(rng, tgt, b);
}

namespace {

QMatrix gen_invertible(Rng& rng, int n, const Field& f) {
    if (n == 0) return QMatrix(0, 0, f);
    for (;;) {
        QMatrix m(n, n, f);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m.at(i, j) = Scalar::parse(std::to_string(rng.range(-2, 2)), f);
        if (m.is_iso()) return m;
    }
}

}  // namespace

Complex gen_complex(Rng& rng, const GenBounds& b, const Field& f) {
    int lo = b.window_lo, hi = b.window_hi;
    int span = hi - lo + 1;
    // elementary pieces on disjoint coordinates: a one-dimensional class, or
    // a two-term acyclic pair d -> d-1
    std::vector<int> dims(span, 0);
    std::vector<std::tuple<int, int, int>> acyclics;  // (degree, src index, tgt index)
    int pieces = rng.range(0, 3);
    for (int p = 0; p < pieces; ++p) {
        int d = rng.range(lo, hi);
        if (rng.chance(1, 2) && d > lo && dims[d - lo] < b.max_dim &&
            dims[d - 1 - lo] < b.max_dim) {
            acyclics.emplace_back(d, dims[d - lo], dims[d - 1 - lo]);
            dims[d - lo]++;
            dims[d - 1 - lo]++;
        } else if (dims[d - lo] < b.max_dim) {
            dims[d - lo]++;
        }
    }
    std::vector<QMatrix> diffs;
    for (int i = 0; i < span; ++i)
        diffs.push_back(QMatrix(i == 0 ? 0 : dims[i - 1], dims[i], f));
    for (auto& [d, src_idx, tgt_idx] : acyclics)
        diffs[d - lo].at(tgt_idx, src_idx) = Scalar::one(f);
    Complex raw(f, lo, dims, diffs);
    // conjugate by degreewise isomorphisms for generic-looking matrices
    std::map<int, QMatrix> h;
    for (int n = raw.lo(); n <= raw.hi(); ++n) h.emplace(n, gen_invertible(rng, raw.dim(n), f));
    std::vector<int> dims2;
    std::vector<QMatrix> diffs2;
    for (int n = raw.lo(); n <= raw.hi(); ++n) {
        dims2.push_back(raw.dim(n));
        if (n == raw.lo())
            diffs2.push_back(QMatrix(0, raw.dim(n), f));
        else
            diffs2.push_back(h.at(n - 1) * raw.diff(n) * h.at(n).inverse());
    }
    return Complex(f, raw.lo(), dims2, diffs2);
}

ChainMap gen_chain_map_between(Rng& rng, const Complex& a, const Complex& b) {
    const Field f = a.field();
    int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
    std::vector<int> off;
    int total = 0;
    for (int n = lo; n <= hi; ++n) {
        off.push_back(total);
        total += b.dim(n) * a.dim(n);
    }
    auto var = [&](int n, int r, int c) { return off[n - lo] + r * a.dim(n) + c; };
    // constraints: d_b t_n - t_{n-1} d_a = 0
    int rows = 0;
    for (int n = lo; n <= hi; ++n) rows += b.dim(n - 1) * a.dim(n);
    QMatrix sys(rows, total, f);
    int row = 0;
    for (int n = lo; n <= hi; ++n) {
        QMatrix db = b.diff(n), da = a.diff(n);
        for (int i = 0; i < b.dim(n - 1); ++i)
            for (int j = 0; j < a.dim(n); ++j) {
                for (int k = 0; k < b.dim(n); ++k)
                    sys.at(row, var(n, k, j)) = sys.at(row, var(n, k, j)) + db.at(i, k);
                if (n - 1 >= lo)
                    for (int k = 0; k < a.dim(n - 1); ++k)
                        sys.at(row, var(n - 1, i, k)) =
                            sys.at(row, var(n - 1, i, k)) - da.at(k, j);
                ++row;
            }
    }
    QMatrix ker = sys.kernel();
    std::map<int, QMatrix> comps;
    if (ker.cols() > 0) {
        QMatrix coeff(ker.cols(), 1, f);
        for (int i = 0; i < ker.cols(); ++i)
            coeff.at(i, 0) = Scalar::parse(std::to_string(rng.range(-2, 2)), f);
        QMatrix sol = ker * coeff;
        for (int n = lo; n <= hi; ++n) {
            QMatrix t(b.dim(n), a.dim(n), f);
            for (int i = 0; i < b.dim(n); ++i)
                for (int j = 0; j < a.dim(n); ++j) t.at(i, j) = sol.at(var(n, i, j), 0);
            if (!t.is_zero()) comps.emplace(n, std::move(t));
        }
    }
    return ChainMap(a, b, std::move(comps));
}

ChainMap gen_chain_map(Rng& rng, const GenBounds& b, const Field& f) {
    Complex a = gen_complex(rng, b, f), c = gen_complex(rng, b, f);
    return gen_chain_map_between(rng, a, c);
}

ChainMap gen_quasi_iso(Rng& rng, const GenBounds& b, const Field& f) {
    Complex c = gen_complex(rng, b, f);
    // conjugated copy with an explicit chain isomorphism onto it
    std::map<int, QMatrix> h;
    for (int n = c.lo(); n <= c.hi(); ++n) h.emplace(n, gen_invertible(rng, c.dim(n), f));
    std::vector<int> dims;
    std::vector<QMatrix> diffs;
    for (int n = c.lo(); n <= c.hi(); ++n) {
        dims.push_back(c.dim(n));
        diffs.push_back(n == c.lo() ? QMatrix(0, c.dim(n), f)
                                    : h.at(n - 1) * c.diff(n) * h.at(n).inverse());
    }
    Complex d = c.is_zero_complex() ? c : Complex(f, c.lo(), dims, diffs);
    std::map<int, QMatrix> comps;
    for (int n = c.lo(); n <= c.hi(); ++n)
        if (c.dim(n) > 0) comps.emplace(n, h.at(n));
    ChainMap iso(c, d, std::move(comps));
    // pad the source with an acyclic summand killed by the map
    GenBounds small = b;
    small.max_dim = 1;
    Complex stub = gen_complex(rng, small, f);
    MappingCone mc = mapping_cone(ChainMap::identity(stub));
    DirectSum ds = direct_sum(c, mc.cone);
    return ds.pr_a.then(iso);
}

ChainDiagram up_cell(const FinPoset& shape, int base, const Complex& c) {
    std::vector<Complex> at;
    for (int j = 0; j < shape.size(); ++j)
        at.push_back(shape.le(base, j) ? c : Complex::zero(c.field()));
    std::map<std::pair<int, int>, ChainMap> maps;
    for (int a = 0; a < shape.size(); ++a)
        for (int b2 = 0; b2 < shape.size(); ++b2) {
            if (!shape.lt(a, b2)) continue;
            if (shape.le(base, a))
                maps.emplace(std::make_pair(a, b2), ChainMap::identity(c));
            else
                maps.emplace(std::make_pair(a, b2), ChainMap::zero(at[a], at[b2]));
        }
    return ChainDiagram(shape, std::move(at), maps);
}

namespace {

ChainDiagram down_cell(const FinPoset& shape, int base, const Complex& c) {
    std::vector<Complex> at;
    for (int j = 0; j < shape.size(); ++j)
        at.push_back(shape.le(j, base) ? c : Complex::zero(c.field()));
    std::map<std::pair<int, int>, ChainMap> maps;
    for (int a = 0; a < shape.size(); ++a)
        for (int b2 = 0; b2 < shape.size(); ++b2) {
            if (!shape.lt(a, b2)) continue;
            if (shape.le(b2, base))
                maps.emplace(std::make_pair(a, b2), ChainMap::identity(c));
            else
                maps.emplace(std::make_pair(a, b2), ChainMap::zero(at[a], at[b2]));
        }
    return ChainDiagram(shape, std::move(at), maps);
}

}  // namespace

ChainDiagram diagram_direct_sum(const ChainDiagram& a, const ChainDiagram& b) {
    std::vector<Complex> at;
    std::vector<DirectSum> sums;
    for (int j = 0; j < a.shape().size(); ++j) {
        sums.push_back(direct_sum(a.at(j), b.at(j)));
        at.push_back(sums.back().sum);
    }
    std::map<std::pair<int, int>, ChainMap> maps;
    for (int x = 0; x < a.shape().size(); ++x)
        for (int y = 0; y < a.shape().size(); ++y) {
            if (!a.shape().lt(x, y)) continue;
            ChainMap m = sums[x].pr_a.then(a.map(x, y)).then(sums[y].in_a) +
                         sums[x].pr_b.then(b.map(x, y)).then(sums[y].in_b);
            maps.emplace(std::make_pair(x, y), m);
        }
    return ChainDiagram(a.shape(), std::move(at), maps);
}

ChainDiagram gen_chain_diagram(Rng& rng, const FinPoset& shape, const GenBounds& b,
                               const Field& f) {
    GenBounds piece = b;
    piece.max_dim = std::max(1, b.max_dim / 2);
    int pieces = rng.range(1, 3);
    ChainDiagram acc = up_cell(shape, rng.below(shape.size()), gen_complex(rng, piece, f));
    for (int p = 1; p < pieces; ++p) {
        ChainDiagram cell =
            rng.chance(1, 3) ? down_cell(shape, rng.below(shape.size()), gen_complex(rng, piece, f))
                             : up_cell(shape, rng.below(shape.size()), gen_complex(rng, piece, f));
        acc = diagram_direct_sum(acc, cell);
    }
    // conjugate every element by a degreewise isomorphism
    std::vector<Complex> at;
    std::vector<std::map<int, QMatrix>> hs(shape.size());
    for (int j = 0; j < shape.size(); ++j) {
        const Complex& c = acc.at(j);
        std::vector<int> dims;
        std::vector<QMatrix> diffs;
        for (int n = c.lo(); n <= c.hi(); ++n) hs[j].emplace(n, gen_invertible(rng, c.dim(n), f));
        hs[j].emplace(c.lo() - 1, QMatrix(0, 0, f));
        hs[j].emplace(c.hi() + 1, QMatrix(0, 0, f));
        for (int n = c.lo(); n <= c.hi(); ++n) {
            dims.push_back(c.dim(n));
            diffs.push_back(n == c.lo() ? QMatrix(0, c.dim(n), f)
                                        : hs[j].at(n - 1) * c.diff(n) * hs[j].at(n).inverse());
        }
        at.push_back(c.is_zero_complex() ? c : Complex(f, c.lo(), dims, diffs));
    }
    std::map<std::pair<int, int>, ChainMap> maps;
    for (int x = 0; x < shape.size(); ++x)
        for (int y = 0; y < shape.size(); ++y) {
            if (!shape.lt(x, y)) continue;
            ChainMap m = acc.map(x, y);
            std::map<int, QMatrix> comps;
            int lo = std::min(at[x].lo(), at[y].lo()), hi = std::max(at[x].hi(), at[y].hi());
            for (int n = lo; n <= hi; ++n) {
                QMatrix hy = at[y].dim(n) > 0 ? hs[y].at(n) : QMatrix(0, 0, f);
                QMatrix hx = at[x].dim(n) > 0 ? hs[x].at(n) : QMatrix(0, 0, f);
                QMatrix t = at[y].dim(n) > 0 && at[x].dim(n) > 0
                                ? hy * m.at(n) * hx.inverse()
                                : QMatrix(at[y].dim(n), at[x].dim(n), f);
                if (!t.is_zero()) comps.emplace(n, std::move(t));
            }
            maps.emplace(std::make_pair(x, y), ChainMap(at[x], at[y], std::move(comps)));
        }
    return ChainDiagram(shape, std::move(at), maps);
}

VecDiagram gen_vec_diagram(Rng& rng, const FinCategory& shape, const GenBounds& b,
                           const Field& f) {
    int no = shape.num_objects();
    // sum of up-cells and down-cells (reachability via hom sets), then a
    // random base change at every object
    std::vector<int> dims(no, 0);
    int cells = rng.range(1, std::max(1, b.max_dim));
    std::vector<std::vector<int>> cell_support;
    for (int c = 0; c < cells; ++c) {
        int base = rng.below(no);
        bool up = rng.chance(2, 3);
        std::vector<int> sup(no, 0);
        for (int j = 0; j < no; ++j) {
            bool in = up ? !shape.hom(base, j).empty() : !shape.hom(j, base).empty();
            if (in) sup[j] = 1;
        }
        cell_support.push_back(sup);
        for (int j = 0; j < no; ++j) dims[j] += sup[j];
    }
    std::vector<QMatrix> maps(shape.num_morphisms());
    for (int m = 0; m < shape.num_morphisms(); ++m) {
        int a = shape.src(m), t = shape.tgt(m);
        QMatrix mat(dims[t], dims[a], f);
        int ra = 0;
        for (int c = 0; c < cells; ++c) {
            int rt = 0;
            for (int c2 = 0; c2 < c; ++c2) rt += cell_support[c2][t];
            if (cell_support[c][a] && cell_support[c][t])
                mat.at(rt, ra) = Scalar::one(f);
            ra += cell_support[c][a];
        }
        maps[m] = mat;
    }
    VecDiagram raw(shape, dims, maps);
    std::vector<QMatrix> hs;
    for (int j = 0; j < no; ++j) hs.push_back(gen_invertible(rng, dims[j], f));
    std::vector<QMatrix> maps2(shape.num_morphisms());
    for (int m = 0; m < shape.num_morphisms(); ++m)
        maps2[m] = hs[shape.tgt(m)] * raw.maps[m] * hs[shape.src(m)].inverse();
    return VecDiagram(shape, dims, maps2);
}

// ---------------------------------------------------------------------------
// Long exact sequence bookkeeping

namespace {

QMatrix hm_at(const std::map<int, QMatrix>& hm, int n, int rows, int cols, const Field& f) {
    auto it = hm.find(n);
    if (it != hm.end()) return it->second;
    return QMatrix(rows, cols, f);
}

bool zero_on_homology(const ChainMap& m) {
    for (const auto& [n, mat] : homology_map(m))
        if (!mat.is_zero()) return false;
    return true;
}

}  // namespace

Verdict long_exact_check(const Triangle& t) {
    Verdict v{"long_exact(" + t.provenance + ")", false, 0, ""};
    const Field f = t.x.field();
    try {
        if (!t.shift_id.valid()) {
            v.witness = "shift identification is not a quasi-isomorphism";
            return v;
        }
        if (!zero_on_homology(t.f.then(t.g))) {
            v.witness = "g.f nonzero on homology";
            return v;
        }
        if (!zero_on_homology(t.g.then(t.h))) {
            v.witness = "h.g nonzero on homology";
            return v;
        }
        Homology hx(t.x), hy(t.y), hc(t.c), hsx(t.sx);
        Complex shx = shift(t.x);
        Homology hshift(shx);
        auto phi = t.shift_id.homology_transfer();
        auto a = homology_map(t.f), b = homology_map(t.g), hh = homology_map(t.h);
        int lo = std::min({t.x.lo(), t.y.lo(), t.c.lo(), t.sx.lo()}) - 1;
        int hi = std::max({t.x.hi(), t.y.hi(), t.c.hi(), t.sx.hi()}) + 1;
        std::map<int, QMatrix> delta;
        for (int n = lo; n <= hi; ++n) {
            // H_{n-1}(x) -> H_n(shift x) in coordinates, then the witness
            QMatrix tmat = hshift.coords(n, hx.representatives(n - 1));
            QMatrix pmat = hm_at(phi, n, hsx.dim(n), hshift.dim(n), f);
            QMatrix full = pmat * tmat;  // H_{n-1}(x) -> H_n(sx), iso
            QMatrix hmat = hm_at(hh, n, hsx.dim(n), hc.dim(n), f);
            if (full.rows() != full.cols() || (full.rows() > 0 && !full.is_iso())) {
                v.witness = "connecting identification fails in degree " + std::to_string(n);
                return v;
            }
            delta.emplace(n, full.rows() > 0 ? full.inverse() * hmat
                                             : QMatrix(hx.dim(n - 1), hc.dim(n), f));
        }
        for (int n = lo; n <= hi; ++n) {
            QMatrix an = hm_at(a, n, hy.dim(n), hx.dim(n), f);
            QMatrix bn = hm_at(b, n, hc.dim(n), hy.dim(n), f);
            QMatrix dn = delta.at(n);
            QMatrix an1 = hm_at(a, n - 1, hy.dim(n - 1), hx.dim(n - 1), f);
            if (an.rank() + bn.rank() != hy.dim(n)) {
                v.witness = "not exact at Y in degree " + std::to_string(n);
                return v;
            }
            if (bn.rank() + dn.rank() != hc.dim(n)) {
                v.witness = "not exact at C in degree " + std::to_string(n);
                return v;
            }
            if (!(dn * bn).is_zero()) {
                v.witness = "delta.g nonzero in degree " + std::to_string(n);
                return v;
            }
            if (dn.rank() + an1.rank() != hx.dim(n - 1)) {
                v.witness = "not exact at X in degree " + std::to_string(n - 1);
                return v;
            }
            if (!(an1 * dn).is_zero()) {
                v.witness = "f.delta nonzero in degree " + std::to_string(n);
                return v;
            }
        }
        v.pass = true;
    } catch (const std::exception& e) {
        v.witness = std::string("error: ") + e.what();
    }
    return v;
}

// ---------------------------------------------------------------------------
// Square builders (Model A)

namespace {

FunctorData functor_to_point(const FinPoset& p) {
    return FunctorData::from_poset_map(to_terminal(p));
}

SquareData slice_square(const PosetMap& u, int k, KanSide side) {
    auto [sl, elems] = slice_poset(u, k, side == KanSide::left ? SliceSide::over
                                                               : SliceSide::under);
    FunctorData pr = FunctorData::from_poset_map(inclusion_map(sl, u.src, elems));
    FunctorData uf = FunctorData::from_poset_map(u);
    FunctorData p = functor_to_point(sl);
    FunctorData kf = FunctorData::from_poset_map(element_map(u.tgt, k));
    const FinCategory& K = uf.tgt;
    std::vector<int> comps;
    for (int o = 0; o < pr.src.num_objects(); ++o) {
        int j = pr.obj_map[o];
        int uj = uf.obj_map[j];
        auto h = side == KanSide::left ? K.hom(uj, k) : K.hom(k, uj);
        comps.push_back(h[0]);
    }
    if (side == KanSide::left) {
        NatTransData cell(pr.then(uf), p.then(kf), comps);
        return SquareData(p, uf, pr, kf, cell, CellDirection::to_left);
    }
    NatTransData cell(p.then(kf), pr.then(uf), comps);
    return SquareData(p, uf, pr, kf, cell, CellDirection::to_right);
}

SquareData comma_square(const FunctorData& u1, const FunctorData& u2) {
    CommaResult c = comma(u1, u2);
    return SquareData(c.pr2, u1, c.pr1, u2, c.cell, CellDirection::to_left);
}

PosetMap product_with(const FinPoset& m, const PosetMap& u, const FinPoset& mj,
                      const FinPoset& mk) {
    // id_M x u : M x J -> M x K with the A-major product indexing
    std::vector<int> map(mj.size());
    int nj = u.src.size(), nk = u.tgt.size();
    for (int im = 0; im < m.size(); ++im)
        for (int ij = 0; ij < nj; ++ij) map[im * nj + ij] = im * nk + u(ij);
    return PosetMap(mj, mk, map);
}

PosetMap projection_map(const FinPoset& m, const FinPoset& j, const FinPoset& mj) {
    std::vector<int> map(mj.size());
    for (int im = 0; im < m.size(); ++im)
        for (int ij = 0; ij < j.size(); ++ij) map[im * j.size() + ij] = ij;
    return PosetMap(mj, j, map);
}

SquareData pullback_square(const FinPoset& m, const PosetMap& u) {
    FinPoset mj = combine(CombineKind::product, m, &u.src);
    FinPoset mk = combine(CombineKind::product, m, &u.tgt);
    FunctorData u1 = FunctorData::from_poset_map(product_with(m, u, mj, mk));
    FunctorData u2 = FunctorData::from_poset_map(u);
    FunctorData v = FunctorData::from_poset_map(projection_map(m, u.src, mj));
    FunctorData w = FunctorData::from_poset_map(projection_map(m, u.tgt, mk));
    FunctorData upper = v.then(u2);
    std::vector<int> comps;
    for (int o = 0; o < upper.src.num_objects(); ++o)
        comps.push_back(upper.tgt.identity(upper.obj_map[o]));
    NatTransData cell(upper, u1.then(w), comps);
    return SquareData(u1, u2, v, w, cell, CellDirection::to_left);
}

SquareData cofinality_square(const PosetMap& r) {
    // r : K -> J a right adjoint; the square (K -r-> J; p v v p; e = e)
    FunctorData rf = FunctorData::from_poset_map(r);
    FunctorData pk = functor_to_point(r.src);
    FunctorData pj = functor_to_point(r.tgt);
    FinCategory e = pk.tgt;
    FunctorData id_e = FunctorData::identity(e);
    std::vector<int> comps(r.src.size(), e.identity(0));
    NatTransData cell(rf.then(pj), pk.then(id_e), comps);
    return SquareData(pk, pj, rf, id_e, cell, CellDirection::to_left);
}

SquareData reversed_cell_square() {
    // endpoints 0, 1 : e -> [1] with the canonical cell, oriented so that the
    // right mate pairs the wrong adjunctions; the mate fails on any nonzero
    // sample
    FinPoset one = chain_poset(1), e = terminal_poset();
    FunctorData u1 = FunctorData::from_poset_map(element_map(one, 0));
    FunctorData u2 = FunctorData::from_poset_map(element_map(one, 1));
    FinCategory ec = u1.src;
    FunctorData v = FunctorData::identity(ec);
    FunctorData w = FunctorData::identity(u1.tgt);
    int arrow = -1;
    for (int m = 0; m < u1.tgt.num_morphisms(); ++m)
        if (u1.tgt.src(m) == u1.obj_map[0] && u1.tgt.tgt(m) == u2.obj_map[0]) arrow = m;
    NatTransData cell(u1.then(w), v.then(u2), {arrow});
    return SquareData(u1, u2, v, w, cell, CellDirection::to_right);
}

VecDiagram point_sample(const Field& f) {
    FinCategory e = category_from_poset(terminal_poset());
    return VecDiagram(e, {1}, {QMatrix::identity(1, f)});
}

Verdict check(const std::string& name, std::uint64_t seed, bool ok, const std::string& witness) {
    return Verdict{name, ok, seed, ok ? "" : witness};
}

std::string dims_str(const GradedDims& d) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [n, k] : d) {
        os << (first ? "" : ", ") << n << ":" << k;
        first = false;
    }
    os << "}";
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Suites

namespace {

using SuiteFn = void (*)(std::uint64_t, int, const GenBounds&, const Field&,
                         std::vector<Verdict>&);

void suite_der_axioms_a(std::uint64_t seed, int trials, const GenBounds& b, const Field& field,
                        std::vector<Verdict>& out) {
    for (int t = 0; t < trials; ++t) {
        std::uint64_t s = Rng::mix(seed, t);
        Rng rng(s);
        PosetMap u = gen_monotone_map(rng, b);
        FunctorData uf = FunctorData::from_poset_map(u);
        VecDiagram x = gen_vec_diagram(rng, uf.src, b, field);
        VecDiagram y = gen_vec_diagram(rng, uf.tgt, b, field);
        int k = rng.below(u.tgt.size());
        {
            SquareVerdict sv = exact_square_verdict(slice_square(u, k, KanSide::left),
                                                    KanSide::left, {x});
            out.push_back(check("der4_left_kan_formula", s, sv.pass,
                                "object " + sv.failing_object + " matrix " + sv.witness_matrix));
        }
        {
            SquareVerdict sv = exact_square_verdict(slice_square(u, k, KanSide::right),
                                                    KanSide::right, {x});
            out.push_back(check("der4_right_kan_formula", s, sv.pass,
                                "object " + sv.failing_object + " matrix " + sv.witness_matrix));
        }
        {
            long lhs = nat_dim(kan(uf, x, KanSide::left), y);
            long rhs = nat_dim(x, restrict_diagram(uf, y));
            out.push_back(check("adjunction_nat_dim_left", s, lhs == rhs,
                                std::to_string(lhs) + " != " + std::to_string(rhs)));
            long lhs2 = nat_dim(y, kan(uf, x, KanSide::right));
            long rhs2 = nat_dim(restrict_diagram(uf, y), x);
            out.push_back(check("adjunction_nat_dim_right", s, lhs2 == rhs2,
                                std::to_string(lhs2) + " != " + std::to_string(rhs2)));
        }
        {
            // triangular identity (eps u_!) . (u_! eta) = id
            DiagramMorphism eta = unit_counit(uf, x, UnitCounit::unit_left);
            DiagramMorphism m1 = kan_morphism(uf, eta, KanSide::left);
            DiagramMorphism eps = unit_counit(uf, kan(uf, x, KanSide::left),
                                              UnitCounit::counit_left);
            DiagramMorphism comp = m1.then(eps);
            bool ok = true;
            for (int o = 0; o < comp.source.shape.num_objects(); ++o)
                ok = ok && comp.components[o] ==
                               QMatrix::identity(comp.source.dims[o], comp.source.field);
            out.push_back(check("triangular_identity_left", s, ok, "composite not identity"));
        }
        {
            DiagramMorphism eta = unit_counit(uf, y, UnitCounit::unit_right);
            DiagramMorphism m1 = restrict_morphism(uf, eta);
            DiagramMorphism eps = unit_counit(uf, restrict_diagram(uf, y),
                                              UnitCounit::counit_right);
            DiagramMorphism comp = m1.then(eps);
            bool ok = true;
            for (int o = 0; o < comp.source.shape.num_objects(); ++o)
                ok = ok && comp.components[o] ==
                               QMatrix::identity(comp.source.dims[o], comp.source.field);
            out.push_back(check("triangular_identity_right", s, ok, "composite not identity"));
        }
        {
            // Der2 at the level of the definition
            bool ok = DiagramMorphism(x, x, [&] {
                          std::vector<QMatrix> cs;
                          for (int o = 0; o < x.shape.num_objects(); ++o)
                              cs.push_back(QMatrix::identity(x.dims[o], x.field));
                          return cs;
                      }()).is_iso();
            if (x.total_dim() > 0) {
                std::vector<QMatrix> zs;
                for (int o = 0; o < x.shape.num_objects(); ++o)
                    zs.push_back(QMatrix(x.dims[o], x.dims[o], x.field));
                ok = ok && !DiagramMorphism(x, x, zs).is_iso();
            }
            out.push_back(check("der2_componentwise", s, ok, "iso detection broken"));
        }
    }
    {
        // negative control: corrupting a structure map of a Kan extension
        // must be rejected by the exact functoriality re-verification
        std::uint64_t s = Rng::mix(seed, 991);
        Rng rng(s);
        FinPoset two = chain_poset(2);
        FunctorData u = FunctorData::from_poset_map(element_map(two, 0));
        FinCategory ec = u.src;
        VecDiagram x(ec, {1}, {QMatrix::identity(1, field)}, field);
        VecDiagram k = kan(u, x, KanSide::left);
        std::vector<QMatrix> corrupted = k.maps;
        int arrow = poset_morphism(k.shape, two, 0, 1);
        corrupted[arrow] = corrupted[arrow] + corrupted[arrow];
        bool rejected = false;
        std::string why;
        try {
            VecDiagram bad(k.shape, k.dims, corrupted, field);
        } catch (const ShapeMismatch& e) {
            rejected = true;
            why = e.what();
        }
        out.push_back(check("negative_control_corrupted_kan", s, rejected,
                            "corrupted structure map slipped through"));
        if (rejected) out.back().witness = "control failed as expected: " + why;
    }
    // Der1: a diagram on a disjoint union is exactly its two restrictions
    std::uint64_t s = Rng::mix(seed, 997);
    Rng rng(s);
    FinPoset j1 = gen_poset(rng, b), j2 = gen_poset(rng, b);
    FinPoset j12 = combine(CombineKind::coproduct, j1, &j2);
    FinCategory c12 = category_from_poset(j12);
    VecDiagram x12 = gen_vec_diagram(rng, c12, b, field);
    std::vector<int> part1, part2;
    for (int o = 0; o < j12.size(); ++o)
        (j12.label(o)[0] == '0' ? part1 : part2).push_back(o);
    FunctorData i1 = FunctorData::from_poset_map(inclusion_map(j1, j12, part1));
    FunctorData i2 = FunctorData::from_poset_map(inclusion_map(j2, j12, part2));
    VecDiagram r1 = restrict_diagram(i1, x12), r2 = restrict_diagram(i2, x12);
    // reconstruction bijection: every object and morphism of the sum is hit
    // exactly once by the two inclusions, with matching data
    bool ok = true;
    std::vector<int> obj_hits(j12.size(), 0), mor_hits(c12.num_morphisms(), 0);
    for (int o = 0; o < j1.size(); ++o) {
        obj_hits[i1.obj_map[o]]++;
        ok = ok && r1.dims[o] == x12.dims[i1.obj_map[o]];
    }
    for (int o = 0; o < j2.size(); ++o) {
        obj_hits[i2.obj_map[o]]++;
        ok = ok && r2.dims[o] == x12.dims[i2.obj_map[o]];
    }
    for (int m = 0; m < i1.src.num_morphisms(); ++m) {
        mor_hits[i1.mor_map[m]]++;
        ok = ok && r1.maps[m] == x12.maps[i1.mor_map[m]];
    }
    for (int m = 0; m < i2.src.num_morphisms(); ++m) {
        mor_hits[i2.mor_map[m]]++;
        ok = ok && r2.maps[m] == x12.maps[i2.mor_map[m]];
    }
    for (int h : obj_hits) ok = ok && h == 1;
    for (int h : mor_hits) ok = ok && h == 1;
    out.push_back(check("der1_sum_decomposition", s, ok,
                        "restrictions do not reconstruct the sum"));
}

void suite_exact_squares(std::uint64_t seed, int trials, const GenBounds& b, const Field& field,
                         std::vector<Verdict>& out) {
    for (int t = 0; t < trials; ++t) {
        std::uint64_t s = Rng::mix(seed, t);
        Rng rng(s);
        FinPoset k = gen_poset(rng, b);
        PosetMap u1 = gen_monotone_into(rng, k, b);
        PosetMap u2 = gen_monotone_into(rng, k, b);
        FunctorData u1f = FunctorData::from_poset_map(u1);
        FunctorData u2f = FunctorData::from_poset_map(u2);
        VecDiagram x1 = gen_vec_diagram(rng, u1f.src, b, field);
        {
            SquareVerdict sv =
                exact_square_verdict(comma_square(u1f, u2f), KanSide::left, {x1});
            out.push_back(check("comma_square", s, sv.pass,
                                "object " + sv.failing_object + " matrix " + sv.witness_matrix));
        }
        {
            int kk = rng.below(k.size());
            SquareVerdict sv = exact_square_verdict(slice_square(u1, kk, KanSide::left),
                                                    KanSide::left, {x1});
            out.push_back(check("kan_formula_square", s, sv.pass,
                                "object " + sv.failing_object + " matrix " + sv.witness_matrix));
        }
        {
            GenBounds small = b;
            small.max_elements = std::min(3, b.max_elements);
            FinPoset m = gen_poset(rng, small);
            SquareVerdict sv = exact_square_verdict(pullback_square(m, u1), KanSide::left, {x1});
            out.push_back(check("opfibration_pullback_square", s, sv.pass,
                                "object " + sv.failing_object + " matrix " + sv.witness_matrix));
        }
        {
            PosetMap u = gen_monotone_map(rng, b);
            auto r = find_adjoint(u, AdjointSide::right);
            SquareData sq = [&] {
                if (r) return cofinality_square(*r);
                // fallback: a terminal element always classifies a right adjoint
                FinPoset kk = chain_poset(rng.range(1, 3));
                return cofinality_square(element_map(kk, kk.size() - 1));
            }();
            // the sample lives on the target of the adjoint leg
            VecDiagram s2 = gen_vec_diagram(rng, sq.v.tgt, b, field);
            SquareVerdict sv = exact_square_verdict(sq, KanSide::left, {s2});
            out.push_back(check("cofinality_square", s, sv.pass,
                                "object " + sv.failing_object + " matrix " + sv.witness_matrix));
        }
    }
    {
        std::uint64_t s = Rng::mix(seed, 1009);
        SquareVerdict sv =
            exact_square_verdict(reversed_cell_square(), KanSide::right, {point_sample(field)});
        out.push_back(check("negative_control_reversed_cell", s, !sv.pass,
                            "reversed-cell mate unexpectedly an isomorphism"));
        if (!sv.pass) {
            out.back().witness = "control failed as expected with witness at object " +
                                 sv.failing_object + ": " + sv.witness_matrix;
        }
    }
}

void suite_pointed(std::uint64_t seed, int trials, const GenBounds& b, const Field& field,
                   std::vector<Verdict>& out) {
    for (int t = 0; t < trials; ++t) {
        std::uint64_t s = Rng::mix(seed, t);
        Rng rng(s);
        FinPoset k = b.max_elements < 2 ? chain_poset(1) : gen_poset(rng, b);
        while (k.size() < 2 && b.max_elements >= 2) k = gen_poset(rng, b);
        // random proper up-set (cosieve image)
        std::vector<int> up;
        {
            int g = rng.below(k.size());
            std::vector<int> us = k.up_set(g);
            std::set<int> su(us.begin(), us.end());
            for (int e = 0; e < k.size(); ++e)
                if (su.count(e)) up.push_back(e);
        }
        FinPoset j = k.subposet(up);
        PosetMap u = inclusion_map(j, k, up);
        ChainDiagram x = gen_chain_diagram(rng, j, b, field);
        ChainDiagram e = hkan(u, x, KanSide::left);
        bool zero_outside = true;
        for (int kk = 0; kk < k.size(); ++kk) {
            bool in = std::find(up.begin(), up.end(), kk) != up.end();
            if (!in && !e.at(kk).is_zero_complex()) zero_outside = false;
        }
        out.push_back(check("cosieve_extension_by_zero", s, zero_outside,
                            "nonzero value outside the image"));
        std::vector<int> down;
        {
            int g = rng.below(k.size());
            std::vector<int> ds = k.down_set(g);
            std::set<int> sd(ds.begin(), ds.end());
            for (int e2 = 0; e2 < k.size(); ++e2)
                if (sd.count(e2)) down.push_back(e2);
        }
        FinPoset j2 = k.subposet(down);
        PosetMap u2 = inclusion_map(j2, k, down);
        ChainDiagram x2 = gen_chain_diagram(rng, j2, b, field);
        ChainDiagram e2 = hkan(u2, x2, KanSide::right);
        bool zero_outside2 = true;
        for (int kk = 0; kk < k.size(); ++kk) {
            bool in = std::find(down.begin(), down.end(), kk) != down.end();
            if (!in && !e2.at(kk).is_zero_complex()) zero_outside2 = false;
        }
        out.push_back(check("sieve_extension_by_zero", s, zero_outside2,
                            "nonzero value outside the image"));
        {
            ChainMap f = gen_chain_map(rng, b, field);
            ArrowExceptional ae = arrow_left_exceptional(f);
            ConeResult cn = cone(f);
            bool ok = homology(ae.value) == homology(cn.cone) && ae.vs_cone_fiber.valid();
            out.push_back(check("exceptional_is_cone", s, ok,
                                "dims " + dims_str(homology(ae.value)) + " vs " +
                                    dims_str(homology(cn.cone))));
            ArrowExceptional af = arrow_right_coexceptional(f);
            FiberResult fb = fiber(f);
            bool ok2 = homology(af.value) == homology(fb.fiber) && af.vs_cone_fiber.valid();
            out.push_back(check("coexceptional_is_fiber", s, ok2,
                                "dims " + dims_str(homology(af.value)) + " vs " +
                                    dims_str(homology(fb.fiber))));
        }
        if (t == 0) {
            // negative control: the cone comparison must notice a genuinely
            // different map (identity vs zero on a one-dimensional class)
            ChainMap idq = ChainMap::identity(Complex::concentrated(0, 1, field));
            ChainMap zq = ChainMap::zero(Complex::concentrated(0, 1, field),
                                         Complex::zero(field));
            ArrowExceptional ae = arrow_left_exceptional(idq);
            bool differs = !(homology(ae.value) == homology(cone(zq).cone));
            out.push_back(check("negative_control_exceptional_mismatch", s, differs,
                                "mismatched cones reported as equal"));
            if (differs)
                out.back().witness = "control failed as expected: " +
                                     dims_str(homology(ae.value)) + " vs " +
                                     dims_str(homology(cone(zq).cone));
        }
        {
            // suspension through the exceptional composite: 1^? 0_* X has the
            // homology of Sigma X
            Complex c = gen_complex(rng, b, field);
            ChainMap to_zero = ChainMap::zero(c, Complex::zero(field));
            ArrowExceptional ae = arrow_left_exceptional(to_zero);
            GradedDims got = homology(ae.value), want;
            for (const auto& [n, d] : homology(c)) want[n + 1] = d;
            out.push_back(check("exceptional_suspension", s, got == want,
                                "dims " + dims_str(got) + " vs " + dims_str(want)));
        }
    }
}

void suite_stable_squares(std::uint64_t seed, int trials, const GenBounds& b, const Field& field,
                          std::vector<Verdict>& out) {
    NamedShape push = named_shape("corner_push");
    NamedShape pull = named_shape("corner_pull");
    NamedShape box = named_shape("box");
    PosetMap ipush = inclusion_by_labels(push.poset, box.poset);
    PosetMap ipull = inclusion_by_labels(pull.poset, box.poset);
    NamedShape tsh = named_shape("T_shape");
    for (int t = 0; t < trials; ++t) {
        std::uint64_t s = Rng::mix(seed, t);
        Rng rng(s);
        {
            ChainDiagram z = gen_chain_diagram(rng, push.poset, b, field);
            SquareStatus st = cocartesian_status(hkan(ipush, z, KanSide::left));
            out.push_back(check("pushout_bicartesian", s, st.cocartesian && st.cartesian,
                                st.cocartesian ? "not cartesian" : "not cocartesian"));
        }
        {
            ChainDiagram z = gen_chain_diagram(rng, pull.poset, b, field);
            SquareStatus st = cocartesian_status(hkan(ipull, z, KanSide::right));
            out.push_back(check("pullback_bicartesian", s, st.cocartesian && st.cartesian,
                                st.cocartesian ? "not cartesian" : "not cocartesian"));
        }
        {
            // cancellation on [2]x[1]: build a diagram whose d2 square is
            // biCartesian, then check d0 <=> d1 on it and on a corrupted copy
            ChainDiagram z = gen_chain_diagram(rng, tsh.parts.at("K_T"), b, field);
            ChainDiagram x = hkan(tsh.arrows.at("i1"), z, KanSide::left);
            SquareStatus d2 = cocartesian_status(square_at(x, "0", "1", "0", "1"));
            SquareStatus d0 = cocartesian_status(square_at(x, "1", "2", "0", "1"));
            SquareStatus d1 = cocartesian_status(square_at(x, "0", "2", "0", "1"));
            bool ok = d2.cocartesian && (d0.cocartesian == d1.cocartesian);
            out.push_back(check("cancellation_two_of_three", s, ok,
                                "d2 bicartesian but d0/d1 verdicts disagree"));
            ChainDiagram spoiled = diagram_direct_sum(
                x, up_cell(x.shape(), x.shape().index_of("2,1"),
                           Complex::concentrated(0, 1, field)));
            SquareStatus e2 = cocartesian_status(square_at(spoiled, "0", "1", "0", "1"));
            SquareStatus e0 = cocartesian_status(square_at(spoiled, "1", "2", "0", "1"));
            SquareStatus e1 = cocartesian_status(square_at(spoiled, "0", "2", "0", "1"));
            bool ok2 = e2.cocartesian && !e0.cocartesian && !e1.cocartesian;
            out.push_back(check("cancellation_negative_branch", s, ok2,
                                "corrupted corner not detected on both squares"));
        }
        {
            ChainMap f = gen_chain_map(rng, b, field);
            bool lhs = is_quasi_iso(f);
            bool rhs = is_acyclic(cone(f).cone);
            out.push_back(check("isocone_equivalence", s, lhs == rhs,
                                std::string("quasi-iso=") + (lhs ? "1" : "0") + " acyclic-cone=" +
                                    (rhs ? "1" : "0")));
            ChainMap q = gen_quasi_iso(rng, b, field);
            bool both = is_quasi_iso(q) && is_acyclic(cone(q).cone);
            out.push_back(check("isocone_on_quasi_iso", s, both, "forced quasi-iso branch"));
        }
        {
            // detection: squares of a left extension along a sieve whose top
            // corner lies outside the image are coCartesian whenever the
            // corner inclusion into the punctured down-set has a left adjoint
            FinPoset grid = combine(CombineKind::product, chain_poset(2), [] {
                static FinPoset one = chain_poset(1);
                return &one;
            }());
            int g = rng.below(grid.size());
            std::vector<int> down = grid.down_set(g);
            FinPoset j = grid.subposet(down);
            PosetMap f = inclusion_map(j, grid, down);
            ChainDiagram y = gen_chain_diagram(rng, j, b, field);
            ChainDiagram x = hkan(f, y, KanSide::left);
            FinPoset push = named_shape("corner_push").poset;
            bool all_ok = true;
            for (int c0 = 0; c0 < 2 && all_ok; ++c0)
                for (int c1 = c0 + 1; c1 < 3 && all_ok; ++c1) {
                    std::string a0 = std::to_string(c0), a1 = std::to_string(c1);
                    int corner = grid.index_of(a1 + ",1");
                    if (std::find(down.begin(), down.end(), corner) != down.end()) continue;
                    // the punctured down-set of the corner
                    std::vector<int> below;
                    for (int e = 0; e < grid.size(); ++e)
                        if (e != corner && grid.le(e, corner)) below.push_back(e);
                    FinPoset sub = grid.subposet(below);
                    std::vector<int> im = {
                        (int)(std::find(below.begin(), below.end(), grid.index_of(a0 + ",0")) -
                              below.begin()),
                        (int)(std::find(below.begin(), below.end(), grid.index_of(a1 + ",0")) -
                              below.begin()),
                        (int)(std::find(below.begin(), below.end(), grid.index_of(a0 + ",1")) -
                              below.begin())};
                    PosetMap tilde(push, sub, im);
                    if (!find_adjoint(tilde, AdjointSide::left)) continue;
                    SquareStatus st = cocartesian_status(square_at(x, a0, a1, "0", "1"));
                    if (!st.cocartesian) all_ok = false;
                }
            out.push_back(check("detection_from_sieve_extension", s, all_ok,
                                "a detected square is not coCartesian"));
        }
    }
    {
        // negative control: the direct-sum square with a suspended corner and
        // zero maps must not be reported coCartesian
        std::uint64_t s = Rng::mix(seed, 4001);
        FinPoset box = named_shape("box").poset;
        std::vector<Complex> at(4, Complex::zero(field));
        at[box.index_of("0,0")] = Complex::concentrated(0, 1, field);
        at[box.index_of("1,1")] = Complex::concentrated(1, 1, field);
        std::map<std::pair<int, int>, ChainMap> zm;
        for (int a = 0; a < 4; ++a)
            for (int b2 = 0; b2 < 4; ++b2)
                if (box.lt(a, b2))
                    zm.emplace(std::make_pair(a, b2), ChainMap::zero(at[a], at[b2]));
        SquareStatus st = cocartesian_status(ChainDiagram(box, at, zm, field));
        out.push_back(check("negative_control_split_square", s, !st.cocartesian,
                            "split square reported coCartesian"));
        if (!st.cocartesian)
            out.back().witness = "control failed as expected: augmentation is zero on H_1";
    }
}

void suite_triangulation(std::uint64_t seed, int trials, const GenBounds& b, const Field& field,
                         std::vector<Verdict>& out) {
    for (int t = 0; t < trials; ++t) {
        std::uint64_t s = Rng::mix(seed, t);
        Rng rng(s);
        ChainMap f = gen_chain_map(rng, b, field);
        TriangleResult tr = triangle(f);
        out.push_back(check("triangle_squares_bicartesian", s, tr.squares_bicartesian,
                            "a square of the triangle diagram is not biCartesian"));
        out.push_back(check("triangle_cone_identification", s, tr.cone_id.valid(),
                            "cone comparison not a quasi-isomorphism"));
        out.push_back(check("triangle_suspension_identification", s, tr.suspension_id.valid(),
                            "suspension comparison not a quasi-isomorphism"));
        Verdict les = long_exact_check(tr.tri);
        les.seed = s;
        out.push_back(les);
        RotateResult rot = rotate(f);
        out.push_back(check("rotation_sign", s, rot.sign_is_minus_one,
                            "comparison is not minus Sigma f"));
        Verdict rles = long_exact_check(rot.rotated);
        rles.seed = s;
        out.push_back(rles);
    }
    for (int t = 0; t < trials; ++t) {
        std::uint64_t s = Rng::mix(seed, 5000 + t);
        Rng rng(s);
        Complex a = gen_complex(rng, b, field), c = gen_complex(rng, b, field),
                z = gen_complex(rng, b, field);
        ChainMap f1 = gen_chain_map_between(rng, a, c);
        ChainMap f2 = gen_chain_map_between(rng, c, z);
        OctahedronResult oct = octahedron(f1, f2);
        out.push_back(check("octahedron_squares_bicartesian", s, oct.squares_bicartesian,
                            "a square of the octahedron diagram is not biCartesian"));
        out.push_back(check("octahedron_identifications", s, oct.identifications_ok,
                            "a corner identification fails"));
        for (const Triangle* tri : {&oct.t_f1, &oct.t_f3, &oct.t_f2, &oct.t_cones}) {
            Verdict les = long_exact_check(*tri);
            les.seed = s;
            out.push_back(les);
        }
    }
    {
        // negative control: corrupting the connecting map must break the LES
        std::uint64_t s = Rng::mix(seed, 7777);
        Rng rng(s);
        Complex c = Complex::concentrated(0, 1, field);
        TriangleResult tr = triangle(ChainMap::zero(c, c));
        Triangle bad = tr.tri;
        bad.h = ChainMap::zero(bad.c, bad.sx);
        bad.provenance = "corrupted";
        Verdict les = long_exact_check(bad);
        out.push_back(check("negative_control_corrupted_triangle", s, !les.pass,
                            "corrupted triangle passed the LES check"));
        if (!les.pass) out.back().witness = "control failed as expected: " + les.witness;
    }
}

void suite_additivity(std::uint64_t seed, int trials, const GenBounds& b, const Field& field,
                      std::vector<Verdict>& out) {
    for (int t = 0; t < trials; ++t) {
        std::uint64_t s = Rng::mix(seed, t);
        Rng rng(s);
        Complex x = gen_complex(rng, b, field), y = gen_complex(rng, b, field);
        BiproductResult bp = biproduct(x, y);
        out.push_back(check("biproduct_dimensions", s, bp.dims_additive,
                            dims_str(homology(bp.b))));
        out.push_back(check("biproduct_corners", s,
                            bp.z_acyclic && bp.x_id.valid() && bp.y_id.valid() &&
                                bp.squares_bicartesian,
                            "corner identification or square check failed"));
        {
            auto hx = homology_map(bp.in_x);
            auto hy = homology_map(bp.in_y);
            Homology hb(bp.b);
            bool ok = true;
            for (const auto& [n, d] : hb.dims()) {
                QMatrix jx = hx.count(n) ? hx.at(n) : QMatrix(d, 0, field);
                QMatrix jy = hy.count(n) ? hy.at(n) : QMatrix(d, 0, field);
                QMatrix joint = jx.hcat(jy);
                ok = ok && joint.rows() == joint.cols() && joint.is_iso();
            }
            out.push_back(check("biproduct_insertions_iso", s, ok,
                                "insertions not jointly an isomorphism on homology"));
        }
        for (int n = 2; n <= 3; ++n) {
            ChainMap sg = segal_map(x, n);
            out.push_back(check("segal_" + std::to_string(n), s, is_quasi_iso(sg),
                                "Segal map not a homology isomorphism"));
        }
        {
            ChainMap inv = loop_inversion(x);
            bool ok = true;
            for (const auto& [n, m] : homology_map(inv))
                ok = ok && m == -QMatrix::identity(m.rows(), field);
            out.push_back(check("loop_inversion_is_minus_id", s, ok,
                                "sigma* differs from -id on homology"));
            out.push_back(check("p1_matches_loop", s, p1_vs_loop(x).valid(),
                                "P_1 and the loop construction disagree"));
        }
        {
            auto pairing = concat_pairing(x);
            Homology h1(loops_p(x, 1));
            bool ok = true;
            for (const auto& [n, m] : pairing) {
                int d = h1.dim(n);
                QMatrix want = QMatrix::identity(d, field).hcat(QMatrix::identity(d, field));
                ok = ok && m == want;
            }
            out.push_back(check("concat_equals_addition", s, ok,
                                "concatenation differs from addition on homology"));
        }
    }
    {
        // negative control: loop inversion is not the identity on homology
        std::uint64_t s = Rng::mix(seed, 6007);
        auto hm = homology_map(loop_inversion(Complex::concentrated(0, 1, field)));
        bool differs = hm.count(-1) && !(hm.at(-1) == QMatrix::identity(1, field));
        out.push_back(check("negative_control_inversion_not_identity", s, differs,
                            "sigma* reported as the identity"));
        if (differs)
            out.back().witness =
                "control failed as expected: H_{-1} matrix " + hm.at(-1).str();
    }
}

// Per-level gluing checks for the recollement suite.
Verdict gluing_cone_check(const std::string& name, std::uint64_t s, const ChainMap& u,
                          const ChainMap& v) try {
    // v.u = 0 on the nose: the induced map Cone(u) -> B must be a quasi-iso,
    // and the homology-level LES must be exact
    MappingCone mc = mapping_cone(u);
    const Field f = u.source().field();
    std::map<int, QMatrix> comps;
    for (int n = mc.cone.lo(); n <= mc.cone.hi(); ++n) {
        // component (y, a) -> v(y)
        QMatrix m(v.target().dim(n), mc.cone.dim(n), f);
        QMatrix vy = v.at(n);
        for (int i = 0; i < vy.rows(); ++i)
            for (int j = 0; j < vy.cols(); ++j) m.at(i, j) = vy.at(i, j);
        if (!m.is_zero()) comps.emplace(n, std::move(m));
    }
    ChainMap w(mc.cone, v.target(), std::move(comps));
    if (!is_quasi_iso(w))
        return Verdict{name, false, s, "cone comparison not a quasi-isomorphism"};
    Triangle tri;
    tri.x = u.source();
    tri.y = u.target();
    tri.c = v.target();
    tri.sx = shift(u.source());
    tri.f = u;
    tri.g = v;
    // h on homology is project . w^{-1}; realize it through the witness
    IsoWitness wid;
    wid.from = mc.cone;
    wid.to = v.target();
    wid.steps.push_back({w, true});
    // delta = H(project) . H(w)^{-1}: check exactness directly
    auto hw = wid.homology_transfer();
    auto hp = homology_map(mc.project_shift);
    auto a = homology_map(u), bb = homology_map(v);
    Homology hx(tri.x), hy(tri.y), hc(tri.c);
    Homology hsx(tri.sx);
    int lo = std::min({tri.x.lo(), tri.y.lo(), tri.c.lo()}) - 1;
    int hi = std::max({tri.x.hi(), tri.y.hi(), tri.c.hi()}) + 1;
    Homology hshift(tri.sx);
    for (int n = lo; n <= hi; ++n) {
        QMatrix an = a.count(n) ? a.at(n) : QMatrix(hy.dim(n), hx.dim(n), f);
        QMatrix bn = bb.count(n) ? bb.at(n) : QMatrix(hc.dim(n), hy.dim(n), f);
        QMatrix wn = hw.count(n) ? hw.at(n) : QMatrix(hc.dim(n), hc.dim(n), f);
        QMatrix pn = hp.count(n) ? hp.at(n) : QMatrix(hsx.dim(n), hc.dim(n), f);
        // H_n(shift x) -> H_{n-1}(x) in coordinates
        QMatrix tmat = hshift.coords(n, hx.representatives(n - 1));
        QMatrix dn = wn.rows() > 0 && tmat.rows() > 0
                         ? tmat.inverse() * pn * wn.inverse()
                         : QMatrix(hx.dim(n - 1), hc.dim(n), f);
        QMatrix an1 = a.count(n - 1) ? a.at(n - 1) : QMatrix(hy.dim(n - 1), hx.dim(n - 1), f);
        if (an.rank() + bn.rank() != hy.dim(n))
            return Verdict{name, false, s, "not exact at the middle in degree " + std::to_string(n)};
        if (bn.rank() + dn.rank() != hc.dim(n))
            return Verdict{name, false, s, "not exact at the cofiber in degree " + std::to_string(n)};
        if (dn.rank() + an1.rank() != hx.dim(n - 1))
            return Verdict{name, false, s,
                           "not exact at the fiber in degree " + std::to_string(n - 1)};
    }
    return Verdict{name, true, s, ""};
} catch (const std::exception& e) {
    return Verdict{name, false, s, std::string("comparison does not exist: ") + e.what()};
}

Verdict gluing_les_check(const std::string& name, std::uint64_t s, const ChainMap& u,
                         const ChainMap& v) {
    // rank bookkeeping only: H(v.u) = 0, exactness at the middle, and the
    // cofiber dimension formula dim H_n B = coker H_n(u) + ker H_{n-1}(u)
    const Field f = u.source().field();
    if (!zero_on_homology(u.then(v)))
        return Verdict{name, false, s, "composite nonzero on homology"};
    Homology hx(u.source()), hy(u.target()), hb(v.target());
    auto a = homology_map(u), bb = homology_map(v);
    int lo = std::min({u.source().lo(), u.target().lo(), v.target().lo()}) - 1;
    int hi = std::max({u.source().hi(), u.target().hi(), v.target().hi()}) + 1;
    for (int n = lo; n <= hi; ++n) {
        QMatrix an = a.count(n) ? a.at(n) : QMatrix(hy.dim(n), hx.dim(n), f);
        QMatrix an1 = a.count(n - 1) ? a.at(n - 1) : QMatrix(hy.dim(n - 1), hx.dim(n - 1), f);
        QMatrix bn = bb.count(n) ? bb.at(n) : QMatrix(hb.dim(n), hy.dim(n), f);
        if (an.rank() + bn.rank() != hy.dim(n))
            return Verdict{name, false, s, "not exact at the middle in degree " + std::to_string(n)};
        int coker = hy.dim(n) - an.rank();
        int kernel = hx.dim(n - 1) - an1.rank();
        if (hb.dim(n) != coker + kernel)
            return Verdict{name, false, s, "cofiber dimensions wrong in degree " + std::to_string(n)};
        if (bn.rank() != coker)
            return Verdict{name, false, s, "cofiber map rank wrong in degree " + std::to_string(n)};
    }
    return Verdict{name, true, s, ""};
}

void suite_recollement(std::uint64_t seed, int trials, const GenBounds& b, const Field& field,
                       std::vector<Verdict>& out) {
    std::vector<std::pair<FinPoset, std::vector<int>>> cases;
    cases.emplace_back(chain_poset(1), std::vector<int>{0});
    {
        FinPoset box = named_shape("box").poset;
        cases.emplace_back(box, std::vector<int>{box.index_of("0,0"), box.index_of("1,0")});
    }
    for (int t = 0; t < trials; ++t) {
        std::uint64_t s = Rng::mix(seed, t);
        Rng rng(s);
        for (size_t ci = 0; ci < cases.size(); ++ci) {
            const FinPoset& k = cases[ci].first;
            const std::vector<int>& sieve_part = cases[ci].second;
            std::vector<int> cosieve_part;
            for (int e = 0; e < k.size(); ++e)
                if (std::find(sieve_part.begin(), sieve_part.end(), e) == sieve_part.end())
                    cosieve_part.push_back(e);
            FinPoset uposet = k.subposet(sieve_part);
            FinPoset zposet = k.subposet(cosieve_part);
            PosetMap j = inclusion_map(uposet, k, sieve_part);
            PosetMap i = inclusion_map(zposet, k, cosieve_part);
            ChainDiagram x = gen_chain_diagram(rng, k, b, field);
            // triangle (a): i_! i^* X -> X -> j_* j^* X, literal at each level
            ChainDiagram a = extend_by_zero(i, restrict_diagram(i, x), KanSide::left);
            ChainDiagram bb = extend_by_zero(j, restrict_diagram(j, x), KanSide::right);
            bool ok = true;
            std::string why;
            for (int e = 0; e < k.size(); ++e) {
                bool in_z =
                    std::find(cosieve_part.begin(), cosieve_part.end(), e) != cosieve_part.end();
                ChainMap ue = in_z ? ChainMap::identity(x.at(e))
                                   : ChainMap::zero(a.at(e), x.at(e));
                ChainMap ve = in_z ? ChainMap::zero(x.at(e), bb.at(e))
                                   : ChainMap::identity(x.at(e));
                Verdict g = gluing_cone_check("level", s, ue, ve);
                if (!g.pass) {
                    ok = false;
                    why = "element " + k.label(e) + ": " + g.witness;
                }
            }
            out.push_back(check("recollement_first_triangle_case" + std::to_string(ci), s, ok,
                                why));
            // triangle (b): j_! j^* X -> X -> i_! i^? X, via the honest left
            // Kan extension and the exceptional image
            ChainDiagram xu = restrict_diagram(j, x);
            ChainDiagram a2 = hkan(j, xu, KanSide::left);
            ChainDiagram exc = exceptional(i, x, ExceptionalKind::left_exceptional);
            ChainDiagram b2 = extend_by_zero(i, exc, KanSide::left);
            // per-level counit of the left Kan extension
            PosetCylinderResult cyl = mapping_cylinder(j, CylinderKind::cyl);
            ChainDiagram ext_cyl = extend_by_zero(cyl.s, x, KanSide::right);
            bool ok2 = true;
            std::string why2;
            for (int e = 0; e < k.size(); ++e) {
                // counit: augment the hocolim over {u' in U : u' <= e}
                std::vector<int> elems;
                for (int j2 = 0; j2 < uposet.size(); ++j2)
                    if (k.le(j(j2), e)) elems.push_back(j2);
                FinPoset sub = uposet.subposet(elems);
                Replacement rep(restrict_diagram(inclusion_map(sub, uposet, elems), xu),
                                HoSide::hocolim);
                std::vector<ChainMap> legs;
                for (int j2 : elems) legs.push_back(x.map(j(j2), e));
                ChainMap ue = rep.augment(x.at(e), legs);
                bool in_z =
                    std::find(cosieve_part.begin(), cosieve_part.end(), e) != cosieve_part.end();
                ChainMap ve = ChainMap::zero(x.at(e), b2.at(e));
                if (in_z) {
                    // X_e -> (q_! s_* X)_e: insert at the zero-length chain s(e)
                    std::vector<int> celems;
                    for (int c = 0; c < cyl.poset.size(); ++c)
                        if (k.le(cyl.q(c), e)) celems.push_back(c);
                    FinPoset csub = cyl.poset.subposet(celems);
                    Replacement crep(
                        restrict_diagram(inclusion_map(csub, cyl.poset, celems), ext_cyl),
                        HoSide::hocolim);
                    int pos = (int)(std::find(celems.begin(), celems.end(), cyl.s(e)) -
                                    celems.begin());
                    ve = crep.insertion(pos);
                }
                Verdict g = gluing_les_check("level", s, ue, ve);
                if (!g.pass) {
                    ok2 = false;
                    why2 = "element " + k.label(e) + ": " + g.witness;
                }
            }
            out.push_back(check("recollement_second_triangle_case" + std::to_string(ci), s, ok2,
                                why2));
        }
    }
    {
        // negative control: a non-vanishing composite is not a gluing triangle
        std::uint64_t s = Rng::mix(seed, 8009);
        Complex q = Complex::concentrated(0, 1, field);
        Verdict g = gluing_cone_check("control", s, ChainMap::identity(q),
                                      ChainMap::identity(q));
        out.push_back(check("negative_control_not_a_gluing", s, !g.pass,
                            "identity pair accepted as a gluing triangle"));
        if (!g.pass) out.back().witness = "control failed as expected: " + g.witness;
    }
}

void suite_dprime_shift(std::uint64_t seed, int trials, const GenBounds& b, const Field& field,
                        std::vector<Verdict>& out) {
    for (int t = 0; t < trials; ++t) {
        std::uint64_t s = Rng::mix(seed, t);
        Rng rng(s);
        GenBounds small = b;
        small.max_elements = std::min(3, b.max_elements);
        FinPoset m = gen_poset(rng, small);
        PosetMap u = gen_monotone_map(rng, small);
        FinPoset mj = combine(CombineKind::product, m, &u.src);
        FinPoset mk = combine(CombineKind::product, m, &u.tgt);
        PosetMap idxu = product_with(m, u, mj, mk);
        {
            // evaluation at a fixed index preserves homotopy Kan extensions
            int em = rng.below(m.size());
            std::vector<int> jm(u.src.size()), km(u.tgt.size());
            for (int jj = 0; jj < u.src.size(); ++jj) jm[jj] = em * u.src.size() + jj;
            for (int kk = 0; kk < u.tgt.size(); ++kk) km[kk] = em * u.tgt.size() + kk;
            FunctorData u1 = FunctorData::from_poset_map(u);
            FunctorData u2 = FunctorData::from_poset_map(idxu);
            FunctorData v = FunctorData::from_poset_map(PosetMap(u.src, mj, jm));
            FunctorData w = FunctorData::from_poset_map(PosetMap(u.tgt, mk, km));
            FunctorData upper = v.then(u2);
            std::vector<int> comps;
            for (int o = 0; o < upper.src.num_objects(); ++o)
                comps.push_back(upper.tgt.identity(upper.obj_map[o]));
            NatTransData cell(upper, u1.then(w), comps);
            SquareData sq(u1, u2, v, w, cell, CellDirection::to_left);
            VecDiagram sample =
                gen_vec_diagram(rng, category_from_poset(mj), b, field);
            SquareVerdict sv = exact_square_verdict(sq, KanSide::left, {sample});
            out.push_back(check("evaluation_preserves_kan_model_a", s, sv.pass,
                                "object " + sv.failing_object));
        }
        {
            // (Der4) for the index-product model: the slice square crossed
            // with M stays exact
            int k = rng.below(u.tgt.size());
            int em = rng.below(m.size());
            int mk_elem = em * u.tgt.size() + k;
            VecDiagram sample = gen_vec_diagram(rng, category_from_poset(mj), b, field);
            SquareVerdict sv = exact_square_verdict(slice_square(idxu, mk_elem, KanSide::left),
                                                    KanSide::left, {sample});
            out.push_back(check("der4_in_index_product_model", s, sv.pass,
                                "object " + sv.failing_object));
        }
        {
            // Model B: evaluation of the pointwise extension agrees with the
            // extension of the evaluation, through a canonical comparison
            ChainDiagram x = gen_chain_diagram(rng, mj, b, field);
            ChainDiagram big = hkan(idxu, x, KanSide::left);
            int em = rng.below(m.size());
            std::vector<int> sel(u.src.size());
            for (int jj = 0; jj < u.src.size(); ++jj) sel[jj] = em * u.src.size() + jj;
            ChainDiagram xm = restrict_diagram(PosetMap(u.src, mj, sel), x);
            ChainDiagram small_kan = hkan(u, xm, KanSide::left);
            bool ok = true;
            for (int k = 0; k < u.tgt.size(); ++k) {
                // include the {m} x J chains into the (id x u)-down-set
                std::vector<int> elems_small;
                for (int jj = 0; jj < u.src.size(); ++jj)
                    if (u.tgt.le(u(jj), k)) elems_small.push_back(jj);
                FinPoset sub_small = u.src.subposet(elems_small);
                Replacement rep_small(
                    restrict_diagram(inclusion_map(sub_small, u.src, elems_small), xm),
                    HoSide::hocolim);
                int bk = em * u.tgt.size() + k;
                std::vector<int> elems_big;
                for (int jj = 0; jj < mj.size(); ++jj)
                    if (mk.le(idxu(jj), bk)) elems_big.push_back(jj);
                FinPoset sub_big = mj.subposet(elems_big);
                Replacement rep_big(
                    restrict_diagram(inclusion_map(sub_big, mj, elems_big), x),
                    HoSide::hocolim);
                std::vector<int> phi_map;
                for (int e : elems_small)
                    phi_map.push_back(
                        (int)(std::find(elems_big.begin(), elems_big.end(),
                                        em * u.src.size() + e) -
                              elems_big.begin()));
                PosetMap phi(sub_small, sub_big, phi_map);
                std::vector<ChainMap> legs;
                for (int e = 0; e < sub_small.size(); ++e)
                    legs.push_back(ChainMap::identity(rep_small.diagram().at(e)));
                ChainMap cmpmap = Replacement::hocolim_map(rep_small, rep_big, phi, legs);
                if (!is_quasi_iso(cmpmap)) ok = false;
            }
            out.push_back(check("pointwise_kan_model_b", s, ok,
                                "evaluation comparison not a quasi-isomorphism"));
        }
    }
    {
        // negative control: comparing against the wrong slot must be noticed
        std::uint64_t s = Rng::mix(seed, 9001);
        FinPoset m = chain_poset(1), one = chain_poset(1), e = terminal_poset();
        PosetMap u = element_map(one, 1);  // cosieve
        FinPoset me = combine(CombineKind::product, m, &e);
        FinPoset mk = combine(CombineKind::product, m, &one);
        PosetMap idxu = product_with(m, u, me, mk);
        ChainDiagram x(me, {Complex::concentrated(0, 1, Field(field)),
                            Complex::concentrated(0, 1, Field(field))},
                       {{{0, 1}, ChainMap::identity(Complex::concentrated(0, 1, field))}},
                       field);
        ChainDiagram big = hkan(idxu, x, KanSide::left);
        GradedDims inside = homology(big.at(mk.index_of("1,1")));
        GradedDims outside = homology(big.at(mk.index_of("1,0")));
        bool differs = !(inside == outside);
        out.push_back(check("negative_control_wrong_slot", s, differs,
                            "values inside and outside the image coincide"));
        if (differs)
            out.back().witness = "control failed as expected: " + dims_str(inside) + " vs " +
                                 dims_str(outside);
    }
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "der_axioms_A", "exact_squares", "pointed",     "stable_squares",
        "triangulation", "additivity",   "recollement", "dprime_shift"};
    return names;
}

Report run_suite(const std::string& name, std::uint64_t seed, int trials,
                 const GenBounds& bounds, const Field& field) {
    if (trials < 1) throw UnknownSuite("trials must be at least 1");
    Report rep;
    rep.suite = name;
    rep.seed = seed;
    rep.trials = trials;
    auto start = std::chrono::steady_clock::now();
    if (name == "der_axioms_A")
        suite_der_axioms_a(seed, trials, bounds, field, rep.verdicts);
    else if (name == "exact_squares")
        suite_exact_squares(seed, trials, bounds, field, rep.verdicts);
    else if (name == "pointed")
        suite_pointed(seed, trials, bounds, field, rep.verdicts);
    else if (name == "stable_squares")
        suite_stable_squares(seed, trials, bounds, field, rep.verdicts);
    else if (name == "triangulation")
        suite_triangulation(seed, trials, bounds, field, rep.verdicts);
    else if (name == "additivity")
        suite_additivity(seed, trials, bounds, field, rep.verdicts);
    else if (name == "recollement")
        suite_recollement(seed, trials, bounds, field, rep.verdicts);
    else if (name == "dprime_shift")
        suite_dprime_shift(seed, trials, bounds, field, rep.verdicts);
    else
        throw UnknownSuite("unknown suite: " + name);
    auto end = std::chrono::steady_clock::now();
    rep.duration_ms =
        (long)std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();
    for (const auto& v : rep.verdicts) (v.pass ? rep.passed : rep.failed)++;
    rep.pass = rep.failed == 0;
    return rep;
}

}  // namespace derlab
