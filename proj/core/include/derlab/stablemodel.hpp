#pragma once

#include "derlab/complexes.hpp"
#include "derlab/fincat.hpp"
#include "derlab/repmodel.hpp"  // KanSide

namespace derlab {

struct WrongShape : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CompositionMismatch : WrongShape {
    using WrongShape::WrongShape;
};

// Diagram of bounded complexes on a finite poset.  Maps are stored for every
// strict relation; construction closes cover data and checks that all
// compositions agree exactly.
class ChainDiagram {
public:
    ChainDiagram() = default;
    // maps given on at least the cover relations; composites are derived and
    // path independence is re-verified.  The field tag matters only for the
    // empty shape.
    ChainDiagram(FinPoset shape, std::vector<Complex> at,
                 const std::map<std::pair<int, int>, ChainMap>& maps,
                 const Field& f = Field{});

    const FinPoset& shape() const { return shape_; }
    const Complex& at(int elem) const { return at_[elem]; }
    const Field& field() const { return field_; }
    ChainMap map(int a, int b) const;  // a <= b; identity when a == b

private:
    FinPoset shape_;
    std::vector<Complex> at_;
    std::map<std::pair<int, int>, ChainMap> maps_;
    Field field_;
};

ChainDiagram restrict_diagram(const PosetMap& u, const ChainDiagram& x);
// One complex as a diagram on the terminal poset.
ChainDiagram on_point(const Complex& c);
// Morphism f as the evident diagram on [1].
ChainDiagram lift_morphism(const ChainMap& f);
// Composable pair as a diagram on [2] (the composite is filled in).
ChainDiagram lift_pair(const ChainMap& f1, const ChainMap& f2);

enum class HoSide { hocolim, holim };

// Normalized (co)simplicial replacement of a diagram, as a total complex.
// hocolim: sum over strict chains of X at the first element, simplicial
// differential sum_i (-1)^i d_i (d_0 pushes along the first arrow, d_i drops
// the i-th element), internal differential twisted by (-1)^n, total degree
// n + q.  holim: product over chains of X at the last element, coface sum on
// the left, total degree q - n.
class Replacement {
public:
    Replacement(ChainDiagram x, HoSide side);

    const ChainDiagram& diagram() const { return x_; }
    const Complex& total() const { return total_; }
    HoSide side() const { return side_; }

    ChainMap insertion(int elem) const;   // X_elem -> total   (hocolim)
    ChainMap projection(int elem) const;  // total -> X_elem   (holim)

    // Cocone (natural legs X_j -> w): the map total -> w sending degree-zero
    // chain summands along the legs and higher simplicial degrees to zero.
    ChainMap augment(const Complex& w, const std::vector<ChainMap>& legs) const;
    // Cone (natural legs w -> X_j): w -> total, dual.
    ChainMap coaugment(const Complex& w, const std::vector<ChainMap>& legs) const;

    // Functorial map of hocolims along phi : src.shape -> dst.shape with a
    // natural family g_j : src X_j -> dst X_{phi(j)}.  Chains collapsed by
    // phi go to zero.
    static ChainMap hocolim_map(const Replacement& src, const Replacement& dst,
                                const PosetMap& phi, const std::vector<ChainMap>& g);
    // Dual: src is a holim over P', dst over P, phi : P -> P', natural
    // g_j : src X_{phi(j)} -> dst X_j.
    static ChainMap holim_map(const Replacement& src, const Replacement& dst,
                              const PosetMap& phi, const std::vector<ChainMap>& g);

private:
    ChainDiagram x_;
    HoSide side_;
    std::vector<std::vector<int>> chains_;
    std::map<std::vector<int>, int> chain_index_;
    Complex total_;
    // block offset of (chain, internal degree q) within its total degree
    std::map<std::pair<int, int>, int> offset_;

    int coef_elem(int chain) const;
    int total_degree(int chain_len_minus1, int q) const;
    friend struct ReplacementAccess;
};

Complex hocolim_point(const ChainDiagram& x);
Complex holim_point(const ChainDiagram& x);

// Pointwise homotopy Kan extension along a monotone map: left values are
// hocolims over {j : u(j) <= k}, right values holims over {j : u(j) >= k},
// with structure maps induced by subposet inclusions.
ChainDiagram hkan(const PosetMap& u, const ChainDiagram& x, KanSide side);

// Literal extension by zero: left along a cosieve, right along a sieve.
ChainDiagram extend_by_zero(const PosetMap& u, const ChainDiagram& x, KanSide side);

struct SquareStatus {
    bool cocartesian = false;
    bool cartesian = false;
};

// Shape must be the standard box [1]x[1].
SquareStatus cocartesian_status(const ChainDiagram& q);

// The box-shaped restriction of a larger diagram to columns {c0 < c1} x rows
// {r0 < r1} of a grid-labelled poset ("i,j" labels).
ChainDiagram square_at(const ChainDiagram& d, const std::string& c0, const std::string& c1,
                       const std::string& r0, const std::string& r1);

// ---------------------------------------------------------------------------
// Pointed structure

Complex suspension(const Complex& x);
ChainMap suspension_map(const ChainMap& f);  // Sigma f
Complex loop_complex(const Complex& x);

struct ConeResult {
    Complex cone;
    ChainMap target_to_cone;  // Y -> C(f)
};
ConeResult cone(const ChainMap& f);

struct FiberResult {
    Complex fiber;
    ChainMap fiber_to_source;  // F(f) -> X
};
FiberResult fiber(const ChainMap& f);

// Canonical comparison shift(X) -> suspension(X), a quasi-isomorphism.
ChainMap shift_to_suspension(const Complex& x);

enum class ExceptionalKind { left_exceptional, right_coexceptional };

// left_exceptional u^? needs a cosieve (left adjoint of u_!), computed as
// u^* q_! s_* through the mapping cylinder of the complementary sieve;
// right_coexceptional u^! needs a sieve, dual through the primed cylinder.
ChainDiagram exceptional(const PosetMap& u, const ChainDiagram& x, ExceptionalKind kind);

// The two exceptional images over [1], with explicit comparisons: 1^? f has
// the homology of the cone, 0^! f that of the fiber.
struct ArrowExceptional {
    Complex value;
    IsoWitness vs_cone_fiber;  // from cone(f) resp. fiber(f) to the value
};
ArrowExceptional arrow_left_exceptional(const ChainMap& f);
ArrowExceptional arrow_right_coexceptional(const ChainMap& f);

// ---------------------------------------------------------------------------
// Triangles

struct Triangle {
    Complex x, y, c, sx;
    ChainMap f, g, h;
    // Comparison shift(x) ~ sx used by the long exact sequence bookkeeping.
    IsoWitness shift_id;
    std::string provenance;
};

struct TriangleResult {
    Triangle tri;
    ChainDiagram t;            // the diagram on [2]x[1]
    IsoWitness cone_id;        // cone(f) ~ T(f)_{1,1}
    IsoWitness suspension_id;  // suspension(X) ~ T(f)_{2,1}
    bool squares_bicartesian = false;
};

TriangleResult triangle(const ChainMap& f);

struct RotateResult {
    Triangle rotated;                    // Y -> Cf -> Sigma X -> Sigma Y
    ChainDiagram d;                      // on [2]x[2] minus (0,2)
    IsoWitness sx_id, sy_id;             // Sigma X ~ D_{2,1}, Sigma Y ~ D_{2,2}
    std::map<int, QMatrix> comparison;   // H(Sigma X) -> H(Sigma Y) of the last map
    std::map<int, QMatrix> sigma_f;      // H(Sigma f)
    bool sign_is_minus_one = false;      // comparison == -H(Sigma f)
};

RotateResult rotate(const ChainMap& f);

struct OctahedronResult {
    ChainDiagram d;  // on [4]x[2] minus two corners
    Triangle t_f1, t_f3, t_f2, t_cones;
    std::vector<IsoWitness> identifications;  // cones and suspensions
    bool squares_bicartesian = false;
    bool identifications_ok = false;
};

OctahedronResult octahedron(const ChainMap& f1, const ChainMap& f2);

struct BiproductResult {
    ChainDiagram q;  // on [2]x[2]
    Complex b;
    IsoWitness x_id, y_id;   // X ~ X', Y ~ Y'
    ChainMap in_x, in_y;     // X -> B, Y -> B
    bool z_acyclic = false;
    bool squares_bicartesian = false;
    bool dims_additive = false;
};

BiproductResult biproduct(const Complex& x, const Complex& y);

// ---------------------------------------------------------------------------
// Loop calculus

Complex loops_p(const Complex& x, int n);  // P_n X, holim over pull_n
// Restriction P_n X -> P_k X along f : <k> -> <n> (f maps e_i to e_{f(i)}).
ChainMap loops_restriction(const Complex& x, int n, const std::vector<int>& f);
// Segal map P_n X -> (+)^n P_1 X, components (k-1,k)^*.
ChainMap segal_map(const Complex& x, int n);
// Loop inversion sigma^* on P_1 X.
ChainMap loop_inversion(const Complex& x);
// P_1 X ~ loop_complex(X), the fixed relabelling e_0 -> (1,0), e_1 -> (0,1).
IsoWitness p1_vs_loop(const Complex& x);
// Concatenation pairing on homology: H(P_1 X)^2 -> H(P_1 X) through the
// inverse Segal map and (02)^*.
std::map<int, QMatrix> concat_pairing(const Complex& x);

}  // namespace derlab
