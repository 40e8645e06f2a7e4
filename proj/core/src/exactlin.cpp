#include "derlab/exactlin.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace derlab {

namespace {

bool is_prime(unsigned long n) {
    if (n < 2) return false;
    for (unsigned long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

unsigned long mod_inverse(unsigned long a, unsigned long p) {
    // extended Euclid; p prime, a != 0 mod p
    long long t = 0, newt = 1, r = (long long)p, newr = (long long)(a % p);
    while (newr != 0) {
        long long q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    if (r != 1) throw DomainError("residue not invertible mod " + std::to_string(p));
    if (t < 0) t += (long long)p;
    return (unsigned long)t;
}

}  // namespace

Field parse_field(const std::string& spec) {
    if (spec == "q") return Field{};
    if (spec.rfind("fp:", 0) == 0) {
        unsigned long p = std::stoul(spec.substr(3));
        if (!is_prime(p)) throw DomainError("field modulus must be prime: " + spec);
        return Field{p};
    }
    throw DomainError("unknown field spec: " + spec);
}

Scalar::Scalar(long num, long den) {
    if (den == 0) throw DomainError("zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Scalar Scalar::zero(const Field& f) { return f.rational() ? Scalar() : residue(0, f.p); }

Scalar Scalar::one(const Field& f) { return f.rational() ? Scalar(1) : residue(1, f.p); }

Scalar Scalar::from_rational(const mpq_class& q) {
    Scalar s;
    s.q_ = q;
    s.q_.canonicalize();
    return s;
}

Scalar Scalar::residue(unsigned long r, unsigned long p) {
    Scalar s;
    s.p_ = p;
    s.r_ = r % p;
    return s;
}

Scalar Scalar::parse(const std::string& text, const Field& f) {
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw DomainError("bad rational literal: " + text);
    q.canonicalize();
    if (f.rational()) return from_rational(q);
    mpz_class num = q.get_num(), den = q.get_den(), p(static_cast<unsigned long>(f.p));
    mpz_class nr = num % p, dr = den % p;
    if (nr < 0) nr += p;
    unsigned long n = nr.get_ui(), d = dr.get_ui();
    if (d == 0) throw DomainError("denominator vanishes mod " + std::to_string(f.p));
    return residue(n * mod_inverse(d, f.p) % f.p, f.p);
}

bool Scalar::is_zero() const { return p_ == 0 ? q_ == 0 : r_ == 0; }
bool Scalar::is_one() const { return p_ == 0 ? q_ == 1 : r_ == 1; }

const mpq_class& Scalar::rational_value() const {
    if (p_ != 0) throw DomainError("residue scalar has no rational value");
    return q_;
}

void Scalar::check_field(const Scalar& o) const {
    if (p_ != o.p_) throw DomainError("mixed-field scalar arithmetic");
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_field(o);
    if (p_ == 0) return from_rational(mpq_class(q_ + o.q_));
    return residue(r_ + o.r_, p_);
}

Scalar Scalar::operator-(const Scalar& o) const {
    check_field(o);
    if (p_ == 0) return from_rational(mpq_class(q_ - o.q_));
    return residue(r_ + p_ - o.r_, p_);
}

Scalar Scalar::operator*(const Scalar& o) const {
    check_field(o);
    if (p_ == 0) return from_rational(mpq_class(q_ * o.q_));
    return residue(r_ * o.r_, p_);
}

Scalar Scalar::operator/(const Scalar& o) const {
    check_field(o);
    if (o.is_zero()) throw DomainError("division by zero");
    if (p_ == 0) return from_rational(mpq_class(q_ / o.q_));
    return residue(r_ * mod_inverse(o.r_, p_), p_);
}

Scalar Scalar::operator-() const {
    if (p_ == 0) return from_rational(mpq_class(-q_));
    return residue(p_ - r_, p_);
}

Scalar Scalar::inverse() const { return one(field()) / *this; }

bool Scalar::operator==(const Scalar& o) const {
    check_field(o);
    return p_ == 0 ? q_ == o.q_ : r_ == o.r_;
}

std::string Scalar::str() const {
    return p_ == 0 ? q_.get_str() : std::to_string(r_);
}

QMatrix::QMatrix(int rows, int cols, const Field& f)
    : rows_(rows), cols_(cols), field_(f), e_((size_t)rows * cols, Scalar::zero(f)) {
    if (rows < 0 || cols < 0) throw DomainError("negative matrix dimension");
}

QMatrix QMatrix::identity(int n, const Field& f) {
    QMatrix m(n, n, f);
    for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
    return m;
}

QMatrix QMatrix::from_rows(const std::vector<std::vector<long>>& rows, const Field& f) {
    int r = (int)rows.size();
    int c = r == 0 ? 0 : (int)rows[0].size();
    QMatrix m(r, c, f);
    for (int i = 0; i < r; ++i) {
        if ((int)rows[i].size() != c) throw DomainError("ragged matrix literal");
        for (int j = 0; j < c; ++j)
            m.at(i, j) = f.rational() ? Scalar(rows[i][j])
                                      : Scalar::parse(std::to_string(rows[i][j]), f);
    }
    return m;
}

Scalar& QMatrix::at(int i, int j) {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw DomainError("matrix index out of range");
    return e_[(size_t)i * cols_ + j];
}

const Scalar& QMatrix::at(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw DomainError("matrix index out of range");
    return e_[(size_t)i * cols_ + j];
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || !(field_ == o.field_))
        throw DomainError("matrix shape/field mismatch in +");
    QMatrix r(rows_, cols_, field_);
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] + o.e_[k];
    return r;
}

QMatrix QMatrix::operator-(const QMatrix& o) const { return *this + (-o); }

QMatrix QMatrix::operator-() const {
    QMatrix r(rows_, cols_, field_);
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = -e_[k];
    return r;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
    if (cols_ != o.rows_ || !(field_ == o.field_))
        throw DomainError("matrix shape/field mismatch in *");
    QMatrix r(rows_, o.cols_, field_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Scalar& a = at(i, k);
            if (a.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) {
                const Scalar& b = o.at(k, j);
                if (!b.is_zero()) r.at(i, j) = r.at(i, j) + a * b;
            }
        }
    return r;
}

QMatrix QMatrix::operator*(const Scalar& s) const {
    QMatrix r(rows_, cols_, field_);
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] * s;
    return r;
}

bool QMatrix::operator==(const QMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || !(field_ == o.field_)) return false;
    for (size_t k = 0; k < e_.size(); ++k)
        if (e_[k] != o.e_[k]) return false;
    return true;
}

QMatrix QMatrix::transpose() const {
    QMatrix r(cols_, rows_, field_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

bool QMatrix::is_zero() const {
    for (const auto& s : e_)
        if (!s.is_zero()) return false;
    return true;
}

QMatrix QMatrix::hcat(const QMatrix& o) const {
    if (rows_ != o.rows_ || !(field_ == o.field_)) throw DomainError("hcat mismatch");
    QMatrix r(rows_, cols_ + o.cols_, field_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
        for (int j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
    }
    return r;
}

QMatrix QMatrix::vcat(const QMatrix& o) const {
    if (cols_ != o.cols_ || !(field_ == o.field_)) throw DomainError("vcat mismatch");
    QMatrix r(rows_ + o.rows_, cols_, field_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (int i = 0; i < o.rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(rows_ + i, j) = o.at(i, j);
    return r;
}

QMatrix QMatrix::block(int i0, int j0, int nrows, int ncols) const {
    QMatrix r(nrows, ncols, field_);
    for (int i = 0; i < nrows; ++i)
        for (int j = 0; j < ncols; ++j) r.at(i, j) = at(i0 + i, j0 + j);
    return r;
}

namespace {

using SVec = std::vector<std::pair<int, Scalar>>;  // sorted by index, nonzero entries

SVec to_sparse(const QMatrix& m, int col) {
    SVec v;
    for (int i = 0; i < m.rows(); ++i)
        if (!m.at(i, col).is_zero()) v.emplace_back(i, m.at(i, col));
    return v;
}

// v += c * w
void axpy(SVec& v, const Scalar& c, const SVec& w) {
    if (c.is_zero()) return;
    SVec out;
    out.reserve(v.size() + w.size());
    size_t a = 0, b = 0;
    while (a < v.size() || b < w.size()) {
        if (b == w.size() || (a < v.size() && v[a].first < w[b].first)) {
            out.push_back(v[a++]);
        } else if (a == v.size() || w[b].first < v[a].first) {
            out.emplace_back(w[b].first, c * w[b].second);
            ++b;
        } else {
            Scalar s = v[a].second + c * w[b].second;
            if (!s.is_zero()) out.emplace_back(v[a].first, s);
            ++a, ++b;
        }
    }
    v = std::move(out);
}

void scale(SVec& v, const Scalar& c) {
    for (auto& [i, s] : v) s = s * c;
}

// Column-wise Gaussian elimination with deterministic pivoting: a column is
// reduced against recorded pivots at its leading (smallest) row until it
// either vanishes or contributes a new pivot.  Pivot columns are normalized
// to leading entry 1.  Combinations are tracked over the original columns so
// kernels and solutions come out exact.
struct ColumnReducer {
    explicit ColumnReducer(const Field& f) : field(f) {}

    Field field;
    std::map<int, int> pivot_of_row;   // leading row -> index into pivots
    std::vector<SVec> pivots;          // reduced, normalized columns
    std::vector<SVec> pivot_combos;    // same, as combinations of fed columns
    std::vector<int> pivot_sources;    // fed-column index that created the pivot
    int fed = 0;

    // Returns the combination over previously fed columns if the column
    // vanished, nullopt if it became a pivot.
    std::optional<SVec> feed(SVec col) {
        SVec combo{{fed, Scalar::one(field)}};
        reduce(col, combo);
        int idx = fed++;
        if (col.empty()) return combo;
        Scalar lead = col.front().second;
        scale(col, lead.inverse());
        scale(combo, lead.inverse());
        pivot_of_row[col.front().first] = (int)pivots.size();
        pivots.push_back(std::move(col));
        pivot_combos.push_back(std::move(combo));
        pivot_sources.push_back(idx);
        return std::nullopt;
    }

    // Reduces an external vector (not recorded); combo may be null.
    void reduce(SVec& col, SVec& combo) const {
        while (!col.empty()) {
            auto it = pivot_of_row.find(col.front().first);
            if (it == pivot_of_row.end()) return;
            Scalar c = -col.front().second;
            axpy(col, c, pivots[it->second]);
            axpy(combo, c, pivot_combos[it->second]);
        }
    }
};

}  // namespace

int QMatrix::rank() const {
    ColumnReducer red(field_);
    for (int j = 0; j < cols_; ++j) red.feed(to_sparse(*this, j));
    return (int)red.pivots.size();
}

QMatrix QMatrix::kernel() const {
    ColumnReducer red(field_);
    std::vector<SVec> basis;
    for (int j = 0; j < cols_; ++j)
        if (auto combo = red.feed(to_sparse(*this, j))) basis.push_back(*combo);
    QMatrix k(cols_, (int)basis.size(), field_);
    for (int j = 0; j < (int)basis.size(); ++j)
        for (const auto& [i, s] : basis[j]) k.at(i, j) = s;
    return k;
}

std::vector<int> QMatrix::independent_columns() const {
    ColumnReducer red(field_);
    std::vector<int> cols;
    for (int j = 0; j < cols_; ++j)
        if (!red.feed(to_sparse(*this, j))) cols.push_back(j);
    return cols;
}

QMatrix QMatrix::image() const {
    std::vector<int> cols = independent_columns();
    QMatrix im(rows_, (int)cols.size(), field_);
    for (int j = 0; j < (int)cols.size(); ++j)
        for (int i = 0; i < rows_; ++i) im.at(i, j) = at(i, cols[j]);
    return im;
}

std::optional<QMatrix> QMatrix::solve(const QMatrix& b) const {
    if (b.rows() != rows_ || !(field_ == b.field())) throw DomainError("solve shape mismatch");
    ColumnReducer red(field_);
    for (int j = 0; j < cols_; ++j) red.feed(to_sparse(*this, j));
    QMatrix x(cols_, b.cols(), field_);
    for (int j = 0; j < b.cols(); ++j) {
        SVec col = to_sparse(b, j), combo;
        red.reduce(col, combo);
        if (!col.empty()) return std::nullopt;
        // 0 = b_j + sum combo_i * col_i(A)  =>  x = -combo
        for (const auto& [i, s] : combo) x.at(i, j) = -s;
    }
    return x;
}

bool QMatrix::is_iso() const { return rows_ == cols_ && rank() == rows_; }

QMatrix QMatrix::inverse() const {
    if (rows_ != cols_) throw DomainError("inverse of non-square matrix");
    auto x = solve(identity(rows_, field_));
    if (!x) throw DomainError("matrix not invertible");
    return *x;
}

std::string QMatrix::str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j).str();
    }
    os << "] (" << rows_ << "x" << cols_ << ")";
    return os.str();
}

}  // namespace derlab
