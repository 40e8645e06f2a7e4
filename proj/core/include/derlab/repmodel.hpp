#pragma once

#include "derlab/exactlin.hpp"
#include "derlab/fincat.hpp"

namespace derlab {

struct ShapeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Diagram of finite-dimensional vector spaces on a finite category.  A matrix
// is stored for every morphism (identities included); functoriality is an
// exact equality checked on construction.
struct VecDiagram {
    FinCategory shape;
    std::vector<int> dims;       // per object
    std::vector<QMatrix> maps;   // per morphism
    Field field;

    VecDiagram() = default;
    // The field tag matters when the shape is empty; otherwise it is derived
    // from the stored matrices.
    VecDiagram(FinCategory sh, std::vector<int> d, std::vector<QMatrix> m,
               const Field& f = Field{});
    // Fills identity/composite matrices from generator data; errors name the
    // offending square when two paths disagree.
    static VecDiagram from_generators(const FinCategory& sh, const std::vector<int>& dims,
                                      const std::map<int, QMatrix>& generator_maps,
                                      const Field& f);
    const QMatrix& map(int morphism) const { return maps[morphism]; }
    int total_dim() const;
};

struct DiagramMorphism {
    VecDiagram source, target;
    std::vector<QMatrix> components;  // per object

    DiagramMorphism() = default;
    DiagramMorphism(VecDiagram s, VecDiagram t, std::vector<QMatrix> comps);
    bool is_iso() const;
    DiagramMorphism then(const DiagramMorphism& g) const;
};

enum class KanSide { left, right };
enum class LimColimSide { lim, colim };

VecDiagram restrict_diagram(const FunctorData& u, const VecDiagram& x);
DiagramMorphism restrict_morphism(const FunctorData& u, const DiagramMorphism& f);

// (Co)limit with its legs.  For colim the legs are the insertions
// X_j -> colim, for lim the projections lim -> X_j.
struct LimColimResult {
    int dim = 0;
    std::vector<QMatrix> legs;
    // colim: matrix of the quotient  (+)X_j -> colim;  lim: inclusion of the
    // kernel  lim -> (+)X_j.  Retained for universal-map solving.
    QMatrix structure;
    std::vector<int> offsets;  // block offset per object in (+)X_j
};

LimColimResult lim_colim(const VecDiagram& x, LimColimSide side);

// Universal map out of the colimit of x determined by a cocone, resp. into
// the limit determined by a cone.  Cocone/cone components are indexed by the
// objects of x's shape.
QMatrix universal_from_colim(const VecDiagram& x, const LimColimResult& c,
                             const std::vector<QMatrix>& cocone, int target_dim);
QMatrix universal_into_lim(const VecDiagram& x, const LimColimResult& l,
                           const std::vector<QMatrix>& cone, int source_dim);

VecDiagram kan(const FunctorData& u, const VecDiagram& x, KanSide side);
// Functorial action of the Kan extension on a morphism of diagrams.
DiagramMorphism kan_morphism(const FunctorData& u, const DiagramMorphism& f, KanSide side);

enum class UnitCounit { unit_left, counit_left, unit_right, counit_right };

// unit_left:   X -> u^* u_! X          (X on J)
// counit_left: u_! u^* Y -> Y          (Y on K)
// unit_right:  Y -> u_* u^* Y          (Y on K)
// counit_right: u^* u_* X -> X         (X on J)
DiagramMorphism unit_counit(const FunctorData& u, const VecDiagram& arg, UnitCounit which);

// Beck-Chevalley transform of the square's 2-cell, evaluated at a sample.
// side == left:  cell u2.v => w.u1 gives  u1_! v^* X -> w^* u2_! X,  X on J2.
// side == right: cell w.u1 => u2.v gives  w^* u2_* X -> u1_* v^* X,  X on J2.
DiagramMorphism mate(const SquareData& sq, KanSide side, const VecDiagram& sample);

struct Verdict;  // verify.hpp

// Passes iff the mate is a componentwise isomorphism on every sample; a
// failure reports the sample index, object, and offending matrix.
struct SquareVerdict {
    bool pass = true;
    int failing_sample = -1;
    std::string failing_object;
    std::string witness_matrix;
};

SquareVerdict exact_square_verdict(const SquareData& sq, KanSide side,
                                   const std::vector<VecDiagram>& samples);

// Dimension of the space of diagram morphisms x -> y.
long nat_dim(const VecDiagram& x, const VecDiagram& y);
// Basis of that space, one DiagramMorphism per basis vector.
std::vector<DiagramMorphism> nat_basis(const VecDiagram& x, const VecDiagram& y);

}  // namespace derlab
