#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace derlab {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coefficient field: the rationals (p == 0) or the prime field F_p.
struct Field {
    unsigned long p = 0;

    bool rational() const { return p == 0; }
    bool operator==(const Field&) const = default;
    std::string name() const { return p == 0 ? "q" : "fp:" + std::to_string(p); }
};

Field parse_field(const std::string& spec);  // "q" or "fp:P", P prime

// Exact field element.  Rationals are kept canonical (gcd(num,den)=1, den>0)
// by GMP; residues live in [0, p).
class Scalar {
public:
    Scalar() = default;  // rational zero
    explicit Scalar(long n) : q_(n) {}
    Scalar(long num, long den);
    static Scalar zero(const Field& f);
    static Scalar one(const Field& f);
    static Scalar from_rational(const mpq_class& q);
    static Scalar residue(unsigned long r, unsigned long p);
    // Parses "n" or "n/d"; for F_p the value is reduced mod p.
    static Scalar parse(const std::string& s, const Field& f);

    Field field() const { return Field{p_}; }
    bool is_zero() const;
    bool is_one() const;
    const mpq_class& rational_value() const;
    unsigned long residue_value() const { return r_; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar operator-() const;
    Scalar inverse() const;
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    std::string str() const;

private:
    mpq_class q_ = 0;       // used when p_ == 0
    unsigned long r_ = 0;   // used when p_ > 0
    unsigned long p_ = 0;

    void check_field(const Scalar& o) const;
};

// Dense exact matrix.  0xN and Nx0 matrices are first-class.
class QMatrix {
public:
    QMatrix() : QMatrix(0, 0, Field{}) {}
    QMatrix(int rows, int cols, const Field& f);

    static QMatrix identity(int n, const Field& f);
    static QMatrix zero(int rows, int cols, const Field& f) { return QMatrix(rows, cols, f); }
    static QMatrix from_rows(const std::vector<std::vector<long>>& rows, const Field& f = Field{});

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Field& field() const { return field_; }

    Scalar& at(int i, int j);
    const Scalar& at(int i, int j) const;

    QMatrix operator+(const QMatrix& o) const;
    QMatrix operator-(const QMatrix& o) const;
    QMatrix operator*(const QMatrix& o) const;
    QMatrix operator*(const Scalar& s) const;
    QMatrix operator-() const;
    bool operator==(const QMatrix& o) const;
    bool operator!=(const QMatrix& o) const { return !(*this == o); }

    QMatrix transpose() const;
    bool is_zero() const;

    // Stacks blocks: [*this | o] resp. [*this ; o].
    QMatrix hcat(const QMatrix& o) const;
    QMatrix vcat(const QMatrix& o) const;
    QMatrix block(int i0, int j0, int nrows, int ncols) const;

    int rank() const;
    // Columns form a basis of ker(*this); deterministic echelon selection.
    QMatrix kernel() const;
    // Columns form a basis of the column space: the pivot columns, in order.
    QMatrix image() const;
    // Any exact solution of (*this) x = b, or nullopt. Also in matrix form
    // (one solution column per column of b).
    std::optional<QMatrix> solve(const QMatrix& b) const;
    bool is_iso() const;
    QMatrix inverse() const;
    // Indices of the pivot columns (a maximal independent set, left to right).
    std::vector<int> independent_columns() const;

    std::string str() const;

private:
    int rows_, cols_;
    Field field_;
    std::vector<Scalar> e_;  // row-major
};

inline int kernel_dim(const QMatrix& m) { return m.cols() - m.rank(); }

}  // namespace derlab
