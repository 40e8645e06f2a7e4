#pragma once

#include "derlab/exactlin.hpp"

#include <map>

namespace derlab {

// Graded homology dimensions, finitely supported (zero entries dropped).
using GradedDims = std::map<int, int>;

// Bounded chain complex; d_n : C_n -> C_{n-1}, d.d = 0 checked exactly on
// construction.  The degree window is computed and trimmed, never declared.
class Complex {
public:
    explicit Complex(const Field& f = Field{}) : field_(f), lo_(0) {}
    // dims[i] is the dimension in degree lo+i; diffs[i] the differential
    // leaving degree lo+i (an empty matrix of the right shape for i = 0 if
    // nothing lies below).
    Complex(const Field& f, int lo, std::vector<int> dims, std::vector<QMatrix> diffs);

    static Complex zero(const Field& f) { return Complex(f); }
    static Complex concentrated(int degree, int dim, const Field& f);

    const Field& field() const { return field_; }
    int lo() const { return lo_; }
    int hi() const { return lo_ + (int)dims_.size() - 1; }  // lo-1 when zero
    bool is_zero_complex() const { return dims_.empty(); }
    int dim(int n) const;
    QMatrix diff(int n) const;  // dim(n-1) x dim(n)
    int total_dim() const;

    bool operator==(const Complex& o) const;

private:
    Field field_;
    int lo_;
    std::vector<int> dims_;
    std::vector<QMatrix> diffs_;  // diffs_[i] leaves degree lo_+i

    void trim();
    void validate() const;
};

// Chain map; commutation with the differentials is an exact equality, checked
// on construction.
class ChainMap {
public:
    ChainMap() = default;
    ChainMap(Complex src, Complex tgt, std::map<int, QMatrix> comps);

    static ChainMap zero(const Complex& src, const Complex& tgt);
    static ChainMap identity(const Complex& c);

    const Complex& source() const { return src_; }
    const Complex& target() const { return tgt_; }
    QMatrix at(int n) const;  // tgt.dim(n) x src.dim(n)

    ChainMap then(const ChainMap& g) const;  // g after this
    ChainMap operator+(const ChainMap& o) const;
    ChainMap operator-() const;
    bool is_zero() const;

private:
    Complex src_, tgt_;
    std::map<int, QMatrix> comps_;  // only potentially nonzero degrees
};

// Degree shift: (shift X)_n = X_{n-1} with negated differential.
Complex shift(const Complex& x, int by = 1);
ChainMap shift_map(const ChainMap& f, int by = 1);

// Classical mapping cone: C_n = Y_n (+) X_{n-1}, d = [dY f; 0 -dX].
struct MappingCone {
    Complex cone;
    ChainMap include_target;   // Y -> C
    ChainMap project_shift;    // C -> shift X
};
MappingCone mapping_cone(const ChainMap& f);

struct DirectSum {
    Complex sum;
    ChainMap in_a, in_b;
    ChainMap pr_a, pr_b;
};
DirectSum direct_sum(const Complex& a, const Complex& b);

// Homology with deterministic bases: boundaries first, then cycle
// representatives completed by echelon selection, so induced maps and golden
// files are reproducible.
class Homology {
public:
    explicit Homology(const Complex& c);

    GradedDims dims() const;
    int dim(int n) const;
    // dim(c,n) x h_n matrix of representative cycles.
    const QMatrix& representatives(int n) const;
    // Class coordinates of a cycle column vector in degree n.
    QMatrix coords(int n, const QMatrix& cycles) const;

private:
    struct Layer {
        QMatrix boundaries;  // basis of im d_{n+1}
        QMatrix reps;        // homology representatives
        QMatrix dec;         // [boundaries | reps], cached for coords
    };
    Complex c_;
    std::map<int, Layer> layers_;
    QMatrix empty_;
};

GradedDims homology(const Complex& c);
// Per-degree matrices of the induced map on homology (zero-dim degrees skipped).
std::map<int, QMatrix> homology_map(const ChainMap& f);
bool is_quasi_iso(const ChainMap& f);
bool is_acyclic(const Complex& c);

// An explicit comparison between two complexes: a zig-zag of canonical chain
// maps, each a quasi-isomorphism when the witness is valid.  No searching:
// every construction that needs an identification supplies its own steps.
struct IsoWitness {
    struct Step {
        ChainMap map;
        bool forward;  // false: the map runs against the zig-zag direction
    };
    Complex from, to;
    std::vector<Step> steps;
    std::string name;

    static IsoWitness direct(ChainMap m, std::string name = {});
    IsoWitness then(const IsoWitness& next) const;

    bool valid() const;  // endpoints chain together and every step is a quasi-iso
    // H_n(from) -> H_n(to), composing H(step) or its inverse per direction.
    std::map<int, QMatrix> homology_transfer() const;
};

}  // namespace derlab
