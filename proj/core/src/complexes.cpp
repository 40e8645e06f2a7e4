#include "derlab/complexes.hpp"

#include <algorithm>
#include <set>

namespace derlab {

Complex::Complex(const Field& f, int lo, std::vector<int> dims, std::vector<QMatrix> diffs)
    : field_(f), lo_(lo), dims_(std::move(dims)), diffs_(std::move(diffs)) {
    if (diffs_.size() != dims_.size()) throw DomainError("complex table sizes wrong");
    trim();
    validate();
}

Complex Complex::concentrated(int degree, int dim, const Field& f) {
    if (dim == 0) return zero(f);
    return Complex(f, degree, {dim}, {QMatrix(0, dim, f)});
}

int Complex::dim(int n) const {
    if (n < lo_ || n > hi()) return 0;
    return dims_[n - lo_];
}

QMatrix Complex::diff(int n) const {
    if (n <= lo_ || n > hi()) return QMatrix(dim(n - 1), dim(n), field_);
    return diffs_[n - lo_];
}

int Complex::total_dim() const {
    int t = 0;
    for (int d : dims_) t += d;
    return t;
}

bool Complex::operator==(const Complex& o) const {
    if (!(field_ == o.field_) || lo_ != o.lo_ || dims_ != o.dims_) return false;
    for (int n = lo(); n <= hi(); ++n)
        if (!(diff(n) == o.diff(n))) return false;
    return true;
}

void Complex::trim() {
    while (!dims_.empty() && dims_.back() == 0) {
        dims_.pop_back();
        diffs_.pop_back();
    }
    while (!dims_.empty() && dims_.front() == 0) {
        dims_.erase(dims_.begin());
        diffs_.erase(diffs_.begin());
        ++lo_;
        if (!diffs_.empty()) diffs_[0] = QMatrix(0, dims_[0], field_);
    }
    if (!diffs_.empty()) diffs_[0] = QMatrix(0, dims_[0], field_);
    if (dims_.empty()) lo_ = 0;  // canonical zero complex
}

void Complex::validate() const {
    for (size_t i = 0; i < dims_.size(); ++i) {
        int n = lo_ + (int)i;
        if (diff(n).rows() != dim(n - 1) || diff(n).cols() != dim(n))
            throw DomainError("differential shape wrong in degree " + std::to_string(n));
        if (!(diff(n - 1) * diff(n)).is_zero())
            throw DomainError("d.d != 0 in degree " + std::to_string(n));
    }
}

ChainMap::ChainMap(Complex src, Complex tgt, std::map<int, QMatrix> comps)
    : src_(std::move(src)), tgt_(std::move(tgt)), comps_(std::move(comps)) {
    if (!(src_.field() == tgt_.field())) throw DomainError("chain map field mismatch");
    for (auto& [n, m] : comps_)
        if (m.rows() != tgt_.dim(n) || m.cols() != src_.dim(n))
            throw DomainError("chain map component shape wrong in degree " + std::to_string(n));
    int lo = std::min(src_.lo(), tgt_.lo()), hi = std::max(src_.hi(), tgt_.hi());
    for (int n = lo; n <= hi + 1; ++n)
        if (!(tgt_.diff(n) * at(n) == at(n - 1) * src_.diff(n)))
            throw DomainError("chain map does not commute with d in degree " + std::to_string(n));
}

ChainMap ChainMap::zero(const Complex& src, const Complex& tgt) {
    return ChainMap(src, tgt, {});
}

ChainMap ChainMap::identity(const Complex& c) {
    std::map<int, QMatrix> comps;
    for (int n = c.lo(); n <= c.hi(); ++n)
        if (c.dim(n) > 0) comps.emplace(n, QMatrix::identity(c.dim(n), c.field()));
    return ChainMap(c, c, std::move(comps));
}

QMatrix ChainMap::at(int n) const {
    auto it = comps_.find(n);
    if (it != comps_.end()) return it->second;
    return QMatrix(tgt_.dim(n), src_.dim(n), src_.field());
}

ChainMap ChainMap::then(const ChainMap& g) const {
    if (!(tgt_ == g.src_)) throw DomainError("chain map composition mismatch");
    std::map<int, QMatrix> comps;
    int lo = std::min(src_.lo(), g.tgt_.lo()), hi = std::max(src_.hi(), g.tgt_.hi());
    for (int n = lo; n <= hi; ++n) {
        QMatrix m = g.at(n) * at(n);
        if (!m.is_zero()) comps.emplace(n, m);
    }
    return ChainMap(src_, g.tgt_, std::move(comps));
}

ChainMap ChainMap::operator+(const ChainMap& o) const {
    if (!(src_ == o.src_) || !(tgt_ == o.tgt_)) throw DomainError("chain map sum mismatch");
    std::map<int, QMatrix> comps;
    int lo = std::min(src_.lo(), tgt_.lo()), hi = std::max(src_.hi(), tgt_.hi());
    for (int n = lo; n <= hi; ++n) {
        QMatrix m = at(n) + o.at(n);
        if (!m.is_zero()) comps.emplace(n, m);
    }
    return ChainMap(src_, tgt_, std::move(comps));
}

ChainMap ChainMap::operator-() const {
    std::map<int, QMatrix> comps;
    for (const auto& [n, m] : comps_) comps.emplace(n, -m);
    return ChainMap(src_, tgt_, std::move(comps));
}

bool ChainMap::is_zero() const {
    for (const auto& [n, m] : comps_)
        if (!m.is_zero()) return false;
    return true;
}

Complex shift(const Complex& x, int by) {
    if (x.is_zero_complex()) return x;
    std::vector<int> dims;
    std::vector<QMatrix> diffs;
    int lo = x.lo() + by;
    for (int n = x.lo(); n <= x.hi(); ++n) {
        dims.push_back(x.dim(n));
        QMatrix d = x.diff(n);
        diffs.push_back(by % 2 == 0 ? d : -d);
    }
    return Complex(x.field(), lo, std::move(dims), std::move(diffs));
}

ChainMap shift_map(const ChainMap& f, int by) {
    std::map<int, QMatrix> comps;
    Complex s = shift(f.source(), by), t = shift(f.target(), by);
    for (int n = s.lo(); n <= s.hi(); ++n) {
        QMatrix m = f.at(n - by);
        if (!m.is_zero()) comps.emplace(n, m);
    }
    return ChainMap(s, t, std::move(comps));
}

MappingCone mapping_cone(const ChainMap& f) {
    const Complex& x = f.source();
    const Complex& y = f.target();
    const Field fl = x.field();
    int lo = std::min(y.lo(), x.lo() + 1), hi = std::max(y.hi(), x.hi() + 1);
    std::vector<int> dims;
    std::vector<QMatrix> diffs;
    for (int n = lo; n <= hi; ++n) {
        int dn = y.dim(n) + x.dim(n - 1);
        dims.push_back(dn);
        QMatrix d(y.dim(n - 1) + x.dim(n - 2), dn, fl);
        QMatrix dy = y.diff(n), fx = f.at(n - 1), dx = x.diff(n - 1);
        for (int i = 0; i < dy.rows(); ++i)
            for (int j = 0; j < dy.cols(); ++j) d.at(i, j) = dy.at(i, j);
        for (int i = 0; i < fx.rows(); ++i)
            for (int j = 0; j < fx.cols(); ++j) d.at(i, y.dim(n) + j) = fx.at(i, j);
        for (int i = 0; i < dx.rows(); ++i)
            for (int j = 0; j < dx.cols(); ++j)
                d.at(y.dim(n - 1) + i, y.dim(n) + j) = -dx.at(i, j);
        diffs.push_back(std::move(d));
    }
    MappingCone r{Complex(fl, lo, std::move(dims), std::move(diffs)), {}, {}};
    std::map<int, QMatrix> inc, prj;
    for (int n = lo; n <= hi; ++n) {
        int cn = r.cone.dim(n);
        if (y.dim(n) > 0) {
            QMatrix m(cn, y.dim(n), fl);
            for (int i = 0; i < y.dim(n); ++i) m.at(i, i) = Scalar::one(fl);
            inc.emplace(n, std::move(m));
        }
        if (x.dim(n - 1) > 0) {
            QMatrix m(x.dim(n - 1), cn, fl);
            for (int i = 0; i < x.dim(n - 1); ++i) m.at(i, y.dim(n) + i) = Scalar::one(fl);
            prj.emplace(n, std::move(m));
        }
    }
    r.include_target = ChainMap(y, r.cone, std::move(inc));
    r.project_shift = ChainMap(r.cone, shift(x), std::move(prj));
    return r;
}

DirectSum direct_sum(const Complex& a, const Complex& b) {
    const Field f = a.field();
    int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
    std::vector<int> dims;
    std::vector<QMatrix> diffs;
    for (int n = lo; n <= hi; ++n) {
        dims.push_back(a.dim(n) + b.dim(n));
        QMatrix d(a.dim(n - 1) + b.dim(n - 1), a.dim(n) + b.dim(n), f);
        QMatrix da = a.diff(n), db = b.diff(n);
        for (int i = 0; i < da.rows(); ++i)
            for (int j = 0; j < da.cols(); ++j) d.at(i, j) = da.at(i, j);
        for (int i = 0; i < db.rows(); ++i)
            for (int j = 0; j < db.cols(); ++j) d.at(a.dim(n - 1) + i, a.dim(n) + j) = db.at(i, j);
        diffs.push_back(std::move(d));
    }
    DirectSum r{Complex(f, lo, std::move(dims), std::move(diffs)), {}, {}, {}, {}};
    std::map<int, QMatrix> ia, ib, pa, pb;
    for (int n = lo; n <= hi; ++n) {
        int an = a.dim(n), bn = b.dim(n), sn = r.sum.dim(n);
        if (an > 0) {
            QMatrix m(sn, an, f), p(an, sn, f);
            for (int i = 0; i < an; ++i) m.at(i, i) = p.at(i, i) = Scalar::one(f);
            ia.emplace(n, std::move(m));
            pa.emplace(n, std::move(p));
        }
        if (bn > 0) {
            QMatrix m(sn, bn, f), p(bn, sn, f);
            for (int i = 0; i < bn; ++i) m.at(an + i, i) = p.at(i, an + i) = Scalar::one(f);
            ib.emplace(n, std::move(m));
            pb.emplace(n, std::move(p));
        }
    }
    r.in_a = ChainMap(a, r.sum, std::move(ia));
    r.in_b = ChainMap(b, r.sum, std::move(ib));
    r.pr_a = ChainMap(r.sum, a, std::move(pa));
    r.pr_b = ChainMap(r.sum, b, std::move(pb));
    return r;
}

Homology::Homology(const Complex& c) : c_(c), empty_(0, 0, c.field()) {
    for (int n = c.lo(); n <= c.hi(); ++n) {
        Layer l{QMatrix(c.dim(n), 0, c.field()), QMatrix(c.dim(n), 0, c.field()),
                QMatrix(c.dim(n), 0, c.field())};
        QMatrix cycles = c.diff(n).kernel();
        l.boundaries = c.diff(n + 1).image();
        // complete the boundary basis to a cycle basis; the new columns are
        // the homology representatives
        QMatrix cand = l.boundaries.hcat(cycles);
        std::vector<int> keep = cand.independent_columns();
        QMatrix reps(c.dim(n), std::max(0, (int)keep.size() - l.boundaries.cols()), c.field());
        int col = 0;
        for (int j : keep)
            if (j >= l.boundaries.cols()) {
                for (int i = 0; i < cand.rows(); ++i) reps.at(i, col) = cand.at(i, j);
                ++col;
            }
        l.reps = std::move(reps);
        l.dec = l.boundaries.hcat(l.reps);
        layers_.emplace(n, std::move(l));
    }
}

GradedDims Homology::dims() const {
    GradedDims d;
    for (const auto& [n, l] : layers_)
        if (l.reps.cols() > 0) d[n] = l.reps.cols();
    return d;
}

int Homology::dim(int n) const {
    auto it = layers_.find(n);
    return it == layers_.end() ? 0 : it->second.reps.cols();
}

const QMatrix& Homology::representatives(int n) const {
    auto it = layers_.find(n);
    if (it == layers_.end()) return empty_;
    return it->second.reps;
}

QMatrix Homology::coords(int n, const QMatrix& cycles) const {
    auto it = layers_.find(n);
    if (it == layers_.end()) {
        if (!cycles.is_zero()) throw DomainError("nonzero cycle in empty degree");
        return QMatrix(0, cycles.cols(), c_.field());
    }
    const Layer& l = it->second;
    auto sol = l.dec.solve(cycles);
    if (!sol) throw DomainError("vector is not a cycle");
    return sol->block(l.boundaries.cols(), 0, l.reps.cols(), cycles.cols());
}

GradedDims homology(const Complex& c) { return Homology(c).dims(); }

std::map<int, QMatrix> homology_map(const ChainMap& f) {
    Homology hs(f.source()), ht(f.target());
    std::map<int, QMatrix> out;
    int lo = std::min(f.source().lo(), f.target().lo());
    int hi = std::max(f.source().hi(), f.target().hi());
    for (int n = lo; n <= hi; ++n) {
        if (hs.dim(n) == 0 && ht.dim(n) == 0) continue;
        QMatrix img = f.at(n) * hs.representatives(n);
        out.emplace(n, ht.coords(n, img));
    }
    return out;
}

bool is_quasi_iso(const ChainMap& f) {
    for (const auto& [n, m] : homology_map(f))
        if (!m.is_iso()) return false;
    return true;
}

bool is_acyclic(const Complex& c) { return homology(c).empty(); }

IsoWitness IsoWitness::direct(ChainMap m, std::string name) {
    IsoWitness w;
    w.from = m.source();
    w.to = m.target();
    w.steps.push_back({std::move(m), true});
    w.name = std::move(name);
    return w;
}

IsoWitness IsoWitness::then(const IsoWitness& next) const {
    if (!(to == next.from)) throw DomainError("iso witness composition mismatch");
    IsoWitness w;
    w.from = from;
    w.to = next.to;
    w.steps = steps;
    w.steps.insert(w.steps.end(), next.steps.begin(), next.steps.end());
    w.name = name.empty() ? next.name : name + "+" + next.name;
    return w;
}

bool IsoWitness::valid() const {
    Complex cur = from;
    for (const auto& s : steps) {
        const Complex& a = s.forward ? s.map.source() : s.map.target();
        const Complex& b = s.forward ? s.map.target() : s.map.source();
        if (!(cur == a)) return false;
        if (!is_quasi_iso(s.map)) return false;
        cur = b;
    }
    return cur == to;
}

std::map<int, QMatrix> IsoWitness::homology_transfer() const {
    std::set<int> degrees;
    for (const auto& [n, d] : homology(from)) degrees.insert(n);
    for (const auto& [n, d] : homology(to)) degrees.insert(n);
    std::vector<std::map<int, QMatrix>> hms;
    for (const auto& s : steps) {
        hms.push_back(homology_map(s.map));
        for (const auto& [n, m] : hms.back()) degrees.insert(n);
    }
    Homology hf(from);
    std::map<int, QMatrix> acc;
    for (int n : degrees) {
        QMatrix m = QMatrix::identity(hf.dim(n), from.field());
        for (size_t i = 0; i < steps.size(); ++i) {
            auto it = hms[i].find(n);
            QMatrix step =
                it != hms[i].end() ? it->second : QMatrix(0, 0, from.field());
            m = steps[i].forward ? step * m : step.inverse() * m;
        }
        acc.emplace(n, std::move(m));
    }
    return acc;
}

}  // namespace derlab
