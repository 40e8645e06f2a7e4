#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace derlab {

struct FincatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DuplicateLabel : FincatError { using FincatError::FincatError; };
struct CycleDetected : FincatError { using FincatError::FincatError; };
struct UnknownShape : FincatError { using FincatError::FincatError; };
struct BadParams : FincatError { using FincatError::FincatError; };
struct ObjectNotInTarget : FincatError { using FincatError::FincatError; };
struct TargetMismatch : FincatError { using FincatError::FincatError; };
struct NotAPoset : FincatError { using FincatError::FincatError; };
struct NotMonotone : FincatError { using FincatError::FincatError; };
struct NotASieve : FincatError { using FincatError::FincatError; };
struct NotACosieve : FincatError { using FincatError::FincatError; };

// Finite poset: opaque labels plus the full order relation.  Construction
// closes the generating pairs reflexively and transitively and rejects
// cycles, so a value of this type is always a partial order.
class FinPoset {
public:
    FinPoset() = default;

    const std::vector<std::string>& labels() const { return labels_; }
    int size() const { return (int)labels_.size(); }
    bool le(int a, int b) const { return leq_[a][b]; }
    bool lt(int a, int b) const { return a != b && leq_[a][b]; }
    int index_of(const std::string& label) const;
    const std::string& label(int i) const { return labels_[i]; }

    std::vector<std::pair<int, int>> covers() const;
    std::vector<int> down_set(int a) const;  // {x : x <= a}
    std::vector<int> up_set(int a) const;    // {x : a <= x}
    std::optional<int> terminal() const;
    std::optional<int> initial() const;

    // Full subposet on the given elements (kept in the given order).
    FinPoset subposet(const std::vector<int>& elements) const;

    // All strictly increasing (n+1)-chains, by lexicographic element order.
    std::vector<std::vector<int>> chains(int n) const;
    // All nonempty chains: by length, then lexicographically.
    std::vector<std::vector<int>> all_chains() const;

    friend FinPoset build_poset(const std::vector<std::string>& labels,
                                const std::vector<std::pair<std::string, std::string>>& pairs);
    friend FinPoset raw_poset(std::vector<std::string> labels,
                              std::vector<std::vector<bool>> leq);

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<bool>> leq_;
};

FinPoset build_poset(const std::vector<std::string>& labels,
                     const std::vector<std::pair<std::string, std::string>>& pairs);
// Trusts the relation to be a partial order (validated).
FinPoset raw_poset(std::vector<std::string> labels, std::vector<std::vector<bool>> leq);

// Monotone map between posets.
struct PosetMap {
    FinPoset src, tgt;
    std::vector<int> map;  // element index -> element index

    PosetMap() = default;
    PosetMap(FinPoset s, FinPoset t, std::vector<int> m);
    int operator()(int i) const { return map[i]; }
    static PosetMap identity(const FinPoset& p);
    PosetMap then(const PosetMap& g) const;  // g after this
};

enum class SieveStatus { sieve, cosieve, both, neither };

// Finite category with a full composition table.  Morphisms are indexed;
// identities are included.  compose(g, f) is "g after f".
class FinCategory {
public:
    struct Morph {
        int src, tgt;
    };

    FinCategory() = default;
    FinCategory(std::vector<std::string> objects, std::vector<Morph> morphs,
                std::vector<int> identities, std::vector<std::vector<int>> comp);

    int num_objects() const { return (int)objects_.size(); }
    int num_morphisms() const { return (int)morphs_.size(); }
    const std::string& object(int i) const { return objects_[i]; }
    int object_index(const std::string& label) const;
    int src(int m) const { return morphs_[m].src; }
    int tgt(int m) const { return morphs_[m].tgt; }
    int identity(int obj) const { return ids_[obj]; }
    bool is_identity(int m) const { return ids_[morphs_[m].src] == m && morphs_[m].src == morphs_[m].tgt; }
    int compose(int g, int f) const;  // g after f
    std::vector<int> hom(int a, int b) const;

private:
    std::vector<std::string> objects_;
    std::vector<Morph> morphs_;
    std::vector<int> ids_;
    std::vector<std::vector<int>> comp_;  // comp_[g][f], -1 when not composable

    void validate() const;
};

FinCategory category_from_poset(const FinPoset& p);
// For a poset-shaped category, the unique morphism a <= b.
int poset_morphism(const FinCategory& c, const FinPoset& p, int a, int b);
// The underlying poset of a poset-shaped category, when every hom set is
// at most a singleton and the relation is antisymmetric.
std::optional<FinPoset> category_as_poset(const FinCategory& c);

// Functor given by explicit object and morphism tables.
struct FunctorData {
    FinCategory src, tgt;
    std::vector<int> obj_map;
    std::vector<int> mor_map;

    FunctorData() = default;
    FunctorData(FinCategory s, FinCategory t, std::vector<int> om, std::vector<int> mm);
    static FunctorData identity(const FinCategory& c);
    static FunctorData from_poset_map(const PosetMap& u);
    static FunctorData from_object_map(const FinCategory& s, const FinCategory& t,
                                       const std::vector<int>& om);
    FunctorData then(const FunctorData& g) const;  // g after this

private:
    void validate() const;
};

// Natural transformation source_functor => target_functor.
struct NatTransData {
    FunctorData source_functor, target_functor;
    std::vector<int> components;  // per source object, a morphism of tgt

    NatTransData() = default;
    NatTransData(FunctorData f, FunctorData g, std::vector<int> comps);

private:
    void validate() const;
};

// Which composite the 2-cell points toward.  to_left: cell u2.v => w.u1
// (the orientation consumed by left mates); to_right: cell w.u1 => u2.v.
enum class CellDirection { to_left, to_right };

struct SquareData {
    FunctorData u1, u2;  // vertical: J1 -> K1, J2 -> K2
    FunctorData v, w;    // horizontal: J1 -> J2, K1 -> K2
    NatTransData cell;
    CellDirection direction;

    SquareData() = default;
    SquareData(FunctorData u1_, FunctorData u2_, FunctorData v_, FunctorData w_,
               NatTransData cell_, CellDirection dir);
};

// ---------------------------------------------------------------------------
// Shape constructions

enum class CombineKind { product, coproduct, opposite };

FinPoset combine(CombineKind kind, const FinPoset& a, const FinPoset* b = nullptr);
FinCategory combine(CombineKind kind, const FinCategory& a, const FinCategory* b = nullptr);

FinPoset chain_poset(int n);      // [n]
FinPoset terminal_poset();        // e, label "*"
FinPoset empty_poset();

// A named shape plus the inclusions the constructions use.
struct NamedShape {
    FinPoset poset;
    std::map<std::string, FinPoset> parts;
    std::map<std::string, PosetMap> arrows;
};

// Names: chain (with --n), box, corner_push, corner_pull, pull_n (with
// --n), T_shape (part K_T, arrows i0/i1), rotation_J (arrow i), rotation_K
// (part J, arrow j), octa_J (arrow i), octa_K (part J, arrow j),
// biproduct_L2 (arrow j1), biproduct_L3 (arrow j2), biproduct_L (arrow j3).
NamedShape named_shape(const std::string& name, int param = -1);

enum class SliceSide { under, over };

struct SliceResult {
    FinCategory cat;
    FunctorData projection;
    // Object i of cat is the pair (object js[i] of the functor source, morphism fs[i]).
    std::vector<int> js, fs;
    bool is_poset = false;
    FinPoset poset;        // valid when is_poset
    std::vector<int> poset_elements;  // indices into u.src poset when is_poset
};

SliceResult slice(const FunctorData& u, int k, SliceSide side);
// Poset refinement of slice: the full subposet {j : u(j) <= k} (over) resp.
// {j : k <= u(j)} (under), together with the inclusion.
std::pair<FinPoset, std::vector<int>> slice_poset(const PosetMap& u, int k, SliceSide side);

struct CommaResult {
    FinCategory cat;
    FunctorData pr1, pr2;
    NatTransData cell;  // u1 . pr1 => u2 . pr2
    std::vector<int> j1s, j2s, alphas;
};

CommaResult comma(const FunctorData& u1, const FunctorData& u2);

enum class CylinderKind { cyl, cyl_prime };

struct CylinderResult {
    FinCategory cat;
    FunctorData i, s, q;  // i: J -> cyl, s: K -> cyl, q: cyl -> K
};

CylinderResult mapping_cylinder(const FunctorData& u, CylinderKind kind);

struct PosetCylinderResult {
    FinPoset poset;
    PosetMap i, s, q;
};

PosetCylinderResult mapping_cylinder(const PosetMap& u, CylinderKind kind);

// ---------------------------------------------------------------------------
// Predicates

SieveStatus sieve_status(const FunctorData& u);
SieveStatus sieve_status(const PosetMap& u);

struct FibrationStatus {
    bool fibration = false;
    bool opfibration = false;
    bool discrete_fibers = false;
};

FibrationStatus fibration_status(const FunctorData& u);

enum class AdjointSide { left, right };

std::optional<PosetMap> find_adjoint(const PosetMap& u, AdjointSide side);
std::optional<FunctorData> find_adjoint(const FunctorData& u, AdjointSide side);

struct CategoryProps {
    bool has_initial = false, has_terminal = false;
    int initial = -1, terminal = -1;
};

CategoryProps category_props(const FinCategory& c);

struct FunctorProps {
    bool fully_faithful = false;
    bool injective_on_objects = false;
};

FunctorProps functor_props(const FunctorData& u);

std::vector<std::vector<int>> nerve_chains(const FinPoset& p, int n);

// Convenience: the map classifying an element, e -> P.
PosetMap element_map(const FinPoset& p, int k);
PosetMap constant_map(const FinPoset& src, const FinPoset& tgt, int k);
PosetMap to_terminal(const FinPoset& p);
PosetMap inclusion_map(const FinPoset& sub, const FinPoset& whole,
                       const std::vector<int>& elements);
// Monotone map by matching labels (e.g. subposet of a product into the product).
PosetMap inclusion_by_labels(const FinPoset& sub, const FinPoset& whole);
std::optional<std::vector<int>> poset_iso(const FinPoset& a, const FinPoset& b);

}  // namespace derlab
