#include "derlab/fincat.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

namespace derlab {

int FinPoset::index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
        if (labels_[i] == label) return i;
    throw FincatError("no such element: " + label);
}

std::vector<std::pair<int, int>> FinPoset::covers() const {
    std::vector<std::pair<int, int>> cov;
    for (int a = 0; a < size(); ++a)
        for (int b = 0; b < size(); ++b) {
            if (!lt(a, b)) continue;
            bool direct = true;
            for (int c = 0; c < size() && direct; ++c)
                if (c != a && c != b && lt(a, c) && lt(c, b)) direct = false;
            if (direct) cov.emplace_back(a, b);
        }
    return cov;
}

std::vector<int> FinPoset::down_set(int a) const {
    std::vector<int> r;
    for (int x = 0; x < size(); ++x)
        if (le(x, a)) r.push_back(x);
    return r;
}

std::vector<int> FinPoset::up_set(int a) const {
    std::vector<int> r;
    for (int x = 0; x < size(); ++x)
        if (le(a, x)) r.push_back(x);
    return r;
}

std::optional<int> FinPoset::terminal() const {
    for (int t = 0; t < size(); ++t) {
        bool all = true;
        for (int x = 0; x < size(); ++x) all = all && le(x, t);
        if (all) return t;
    }
    return std::nullopt;
}

std::optional<int> FinPoset::initial() const {
    for (int b = 0; b < size(); ++b) {
        bool all = true;
        for (int x = 0; x < size(); ++x) all = all && le(b, x);
        if (all) return b;
    }
    return std::nullopt;
}

FinPoset FinPoset::subposet(const std::vector<int>& elements) const {
    FinPoset s;
    for (int e : elements) s.labels_.push_back(labels_[e]);
    int n = (int)elements.size();
    s.leq_.assign(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s.leq_[i][j] = le(elements[i], elements[j]);
    return s;
}

std::vector<std::vector<int>> FinPoset::chains(int n) const {
    if (n < 0) throw BadParams("chain length must be nonnegative");
    std::vector<std::vector<int>> cur;
    for (int x = 0; x < size(); ++x) cur.push_back({x});
    for (int len = 0; len < n; ++len) {
        std::vector<std::vector<int>> next;
        for (const auto& c : cur)
            for (int x = 0; x < size(); ++x)
                if (lt(c.back(), x)) {
                    auto d = c;
                    d.push_back(x);
                    next.push_back(std::move(d));
                }
        cur = std::move(next);
    }
    return cur;
}

std::vector<std::vector<int>> FinPoset::all_chains() const {
    std::vector<std::vector<int>> out;
    for (int n = 0;; ++n) {
        auto cs = chains(n);
        if (cs.empty()) break;
        for (auto& c : cs) out.push_back(std::move(c));
    }
    return out;
}

FinPoset build_poset(const std::vector<std::string>& labels,
                     const std::vector<std::pair<std::string, std::string>>& pairs) {
    FinPoset p;
    p.labels_ = labels;
    std::set<std::string> seen;
    for (const auto& l : labels)
        if (!seen.insert(l).second) throw DuplicateLabel("duplicate label: " + l);
    int n = (int)labels.size();
    p.leq_.assign(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) p.leq_[i][i] = true;
    for (const auto& [a, b] : pairs) p.leq_[p.index_of(a)][p.index_of(b)] = true;
    for (int k = 0; k < n; ++k)  // transitive closure
        for (int i = 0; i < n; ++i)
            if (p.leq_[i][k])
                for (int j = 0; j < n; ++j)
                    if (p.leq_[k][j]) p.leq_[i][j] = true;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && p.leq_[i][j] && p.leq_[j][i])
                throw CycleDetected("antisymmetry fails: " + labels[i] + " ~ " + labels[j]);
    return p;
}

FinPoset raw_poset(std::vector<std::string> labels, std::vector<std::vector<bool>> leq) {
    int n = (int)labels.size();
    FinPoset p;
    p.labels_ = std::move(labels);
    p.leq_ = std::move(leq);
    for (int i = 0; i < n; ++i) {
        if (!p.leq_[i][i]) throw FincatError("relation not reflexive");
        for (int j = 0; j < n; ++j) {
            if (i != j && p.leq_[i][j] && p.leq_[j][i]) throw CycleDetected("antisymmetry fails");
            for (int k = 0; k < n; ++k)
                if (p.leq_[i][j] && p.leq_[j][k] && !p.leq_[i][k])
                    throw FincatError("relation not transitive");
        }
    }
    return p;
}

PosetMap::PosetMap(FinPoset s, FinPoset t, std::vector<int> m)
    : src(std::move(s)), tgt(std::move(t)), map(std::move(m)) {
    if ((int)map.size() != src.size()) throw FincatError("poset map size mismatch");
    for (int x : map)
        if (x < 0 || x >= tgt.size()) throw FincatError("poset map out of range");
    for (int a = 0; a < src.size(); ++a)
        for (int b = 0; b < src.size(); ++b)
            if (src.le(a, b) && !tgt.le(map[a], map[b]))
                throw NotMonotone("map does not preserve order at " + src.label(a) + " <= " +
                                  src.label(b));
}

PosetMap PosetMap::identity(const FinPoset& p) {
    std::vector<int> m(p.size());
    for (int i = 0; i < p.size(); ++i) m[i] = i;
    return PosetMap(p, p, std::move(m));
}

PosetMap PosetMap::then(const PosetMap& g) const {
    if (tgt.labels() != g.src.labels()) throw TargetMismatch("poset map composition mismatch");
    std::vector<int> m(src.size());
    for (int i = 0; i < src.size(); ++i) m[i] = g.map[map[i]];
    return PosetMap(src, g.tgt, std::move(m));
}

// ---------------------------------------------------------------------------
// FinCategory

FinCategory::FinCategory(std::vector<std::string> objects, std::vector<Morph> morphs,
                         std::vector<int> identities, std::vector<std::vector<int>> comp)
    : objects_(std::move(objects)), morphs_(std::move(morphs)), ids_(std::move(identities)),
      comp_(std::move(comp)) {
    validate();
}

int FinCategory::object_index(const std::string& label) const {
    for (int i = 0; i < num_objects(); ++i)
        if (objects_[i] == label) return i;
    throw FincatError("no such object: " + label);
}

int FinCategory::compose(int g, int f) const {
    int r = comp_[g][f];
    if (r < 0) throw FincatError("morphisms not composable");
    return r;
}

std::vector<int> FinCategory::hom(int a, int b) const {
    std::vector<int> r;
    for (int m = 0; m < num_morphisms(); ++m)
        if (morphs_[m].src == a && morphs_[m].tgt == b) r.push_back(m);
    return r;
}

void FinCategory::validate() const {
    int no = num_objects(), nm = num_morphisms();
    if ((int)ids_.size() != no || (int)comp_.size() != nm)
        throw FincatError("category table sizes inconsistent");
    for (int o = 0; o < no; ++o)
        if (morphs_[ids_[o]].src != o || morphs_[ids_[o]].tgt != o)
            throw FincatError("identity endpoints wrong");
    for (int g = 0; g < nm; ++g)
        for (int f = 0; f < nm; ++f) {
            bool composable = morphs_[f].tgt == morphs_[g].src;
            int r = comp_[g][f];
            if (composable != (r >= 0)) throw FincatError("composition table domain wrong");
            if (r >= 0 && (morphs_[r].src != morphs_[f].src || morphs_[r].tgt != morphs_[g].tgt))
                throw FincatError("composite endpoints wrong");
        }
    for (int f = 0; f < nm; ++f) {
        if (comp_[ids_[morphs_[f].tgt]][f] != f || comp_[f][ids_[morphs_[f].src]] != f)
            throw FincatError("identities not neutral");
    }
    for (int h = 0; h < nm; ++h)
        for (int g = 0; g < nm; ++g) {
            if (morphs_[g].tgt != morphs_[h].src) continue;
            for (int f = 0; f < nm; ++f) {
                if (morphs_[f].tgt != morphs_[g].src) continue;
                if (comp_[h][comp_[g][f]] != comp_[comp_[h][g]][f])
                    throw FincatError("composition not associative");
            }
        }
}

namespace {

// Incrementally built category whose morphisms carry an opaque key so that
// composites can be located after the fact.
struct CatBuilder {
    std::vector<std::string> objects;
    struct M {
        int src, tgt;
        long long key;
    };
    std::vector<M> morphs;
    std::map<std::tuple<int, int, long long>, int> index;

    int add(int s, int t, long long key) {
        auto it = index.find({s, t, key});
        if (it != index.end()) return it->second;
        morphs.push_back({s, t, key});
        index[{s, t, key}] = (int)morphs.size() - 1;
        return (int)morphs.size() - 1;
    }

    FinCategory finalize(const std::function<long long(int)>& id_key,
                         const std::function<long long(const M&, const M&)>& comp_key) {
        std::vector<int> ids(objects.size());
        for (int o = 0; o < (int)objects.size(); ++o) {
            auto it = index.find({o, o, id_key(o)});
            if (it == index.end()) throw FincatError("builder: identity missing");
            ids[o] = it->second;
        }
        int nm = (int)morphs.size();
        std::vector<std::vector<int>> comp(nm, std::vector<int>(nm, -1));
        for (int g = 0; g < nm; ++g)
            for (int f = 0; f < nm; ++f) {
                if (morphs[f].tgt != morphs[g].src) continue;
                long long key = comp_key(morphs[g], morphs[f]);
                auto it = index.find({morphs[f].src, morphs[g].tgt, key});
                if (it == index.end()) throw FincatError("builder: composite missing");
                comp[g][f] = it->second;
            }
        std::vector<FinCategory::Morph> ms;
        for (const auto& m : morphs) ms.push_back({m.src, m.tgt});
        return FinCategory(objects, ms, ids, comp);
    }
};

}  // namespace

FinCategory category_from_poset(const FinPoset& p) {
    CatBuilder b;
    b.objects = p.labels();
    for (int a = 0; a < p.size(); ++a)
        for (int c = 0; c < p.size(); ++c)
            if (p.le(a, c)) b.add(a, c, 0);
    return b.finalize([](int) { return 0LL; },
                      [](const CatBuilder::M&, const CatBuilder::M&) { return 0LL; });
}

int poset_morphism(const FinCategory& c, const FinPoset& p, int a, int b) {
    if (!p.le(a, b)) throw FincatError("no morphism " + p.label(a) + " -> " + p.label(b));
    auto h = c.hom(a, b);
    if (h.size() != 1) throw FincatError("category is not poset-shaped");
    return h[0];
}

// ---------------------------------------------------------------------------
// Functors and transformations

FunctorData::FunctorData(FinCategory s, FinCategory t, std::vector<int> om, std::vector<int> mm)
    : src(std::move(s)), tgt(std::move(t)), obj_map(std::move(om)), mor_map(std::move(mm)) {
    validate();
}

void FunctorData::validate() const {
    if ((int)obj_map.size() != src.num_objects() || (int)mor_map.size() != src.num_morphisms())
        throw FincatError("functor table sizes wrong");
    for (int m = 0; m < src.num_morphisms(); ++m) {
        if (tgt.src(mor_map[m]) != obj_map[src.src(m)] || tgt.tgt(mor_map[m]) != obj_map[src.tgt(m)])
            throw FincatError("functor does not preserve endpoints");
    }
    for (int o = 0; o < src.num_objects(); ++o)
        if (mor_map[src.identity(o)] != tgt.identity(obj_map[o]))
            throw FincatError("functor does not preserve identities");
    for (int g = 0; g < src.num_morphisms(); ++g)
        for (int f = 0; f < src.num_morphisms(); ++f) {
            if (src.tgt(f) != src.src(g)) continue;
            if (mor_map[src.compose(g, f)] != tgt.compose(mor_map[g], mor_map[f]))
                throw FincatError("functor does not preserve composition");
        }
}

FunctorData FunctorData::identity(const FinCategory& c) {
    std::vector<int> om(c.num_objects()), mm(c.num_morphisms());
    for (int i = 0; i < c.num_objects(); ++i) om[i] = i;
    for (int i = 0; i < c.num_morphisms(); ++i) mm[i] = i;
    return FunctorData(c, c, std::move(om), std::move(mm));
}

FunctorData FunctorData::from_poset_map(const PosetMap& u) {
    FinCategory s = category_from_poset(u.src), t = category_from_poset(u.tgt);
    return from_object_map(s, t, u.map);
}

FunctorData FunctorData::from_object_map(const FinCategory& s, const FinCategory& t,
                                         const std::vector<int>& om) {
    std::vector<int> mm(s.num_morphisms());
    for (int m = 0; m < s.num_morphisms(); ++m) {
        auto h = t.hom(om[s.src(m)], om[s.tgt(m)]);
        if (h.size() != 1)
            throw FincatError("object map does not determine a functor (hom not a singleton)");
        mm[m] = h[0];
    }
    return FunctorData(s, t, om, mm);
}

FunctorData FunctorData::then(const FunctorData& g) const {
    std::vector<int> om(src.num_objects()), mm(src.num_morphisms());
    for (int o = 0; o < src.num_objects(); ++o) om[o] = g.obj_map[obj_map[o]];
    for (int m = 0; m < src.num_morphisms(); ++m) mm[m] = g.mor_map[mor_map[m]];
    return FunctorData(src, g.tgt, std::move(om), std::move(mm));
}

NatTransData::NatTransData(FunctorData f, FunctorData g, std::vector<int> comps)
    : source_functor(std::move(f)), target_functor(std::move(g)), components(std::move(comps)) {
    validate();
}

void NatTransData::validate() const {
    const auto& F = source_functor;
    const auto& G = target_functor;
    if (F.src.num_objects() != G.src.num_objects() || F.tgt.num_objects() != G.tgt.num_objects())
        throw FincatError("natural transformation between non-parallel functors");
    if ((int)components.size() != F.src.num_objects())
        throw FincatError("component count wrong");
    for (int o = 0; o < F.src.num_objects(); ++o) {
        int c = components[o];
        if (F.tgt.src(c) != F.obj_map[o] || F.tgt.tgt(c) != G.obj_map[o])
            throw FincatError("component endpoints wrong at object " + F.src.object(o));
    }
    for (int m = 0; m < F.src.num_morphisms(); ++m) {
        int a = F.src.src(m), b = F.src.tgt(m);
        if (F.tgt.compose(components[b], F.mor_map[m]) !=
            F.tgt.compose(G.mor_map[m], components[a]))
            throw FincatError("naturality square fails at morphism " + std::to_string(m));
    }
}

SquareData::SquareData(FunctorData u1_, FunctorData u2_, FunctorData v_, FunctorData w_,
                       NatTransData cell_, CellDirection dir)
    : u1(std::move(u1_)), u2(std::move(u2_)), v(std::move(v_)), w(std::move(w_)),
      cell(std::move(cell_)), direction(dir) {
    FunctorData lower = u1.then(w);   // J1 -> K2 through K1
    FunctorData upper = v.then(u2);   // J1 -> K2 through J2
    const FunctorData& from = direction == CellDirection::to_left ? upper : lower;
    const FunctorData& to = direction == CellDirection::to_left ? lower : upper;
    if (cell.source_functor.obj_map != from.obj_map || cell.target_functor.obj_map != to.obj_map)
        throw FincatError("square cell endpoints do not match the two composites");
}

// ---------------------------------------------------------------------------
// Shape constructions

FinPoset chain_poset(int n) {
    if (n < 0) throw BadParams("chain index negative");
    std::vector<std::string> labels;
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int i = 0; i <= n; ++i) labels.push_back(std::to_string(i));
    for (int i = 0; i < n; ++i) pairs.emplace_back(labels[i], labels[i + 1]);
    return build_poset(labels, pairs);
}

FinPoset terminal_poset() { return build_poset({"*"}, {}); }

FinPoset empty_poset() { return build_poset({}, {}); }

FinPoset combine(CombineKind kind, const FinPoset& a, const FinPoset* b) {
    if (kind == CombineKind::opposite) {
        std::vector<std::vector<bool>> leq(a.size(), std::vector<bool>(a.size()));
        for (int i = 0; i < a.size(); ++i)
            for (int j = 0; j < a.size(); ++j) leq[i][j] = a.le(j, i);
        return raw_poset(a.labels(), std::move(leq));
    }
    if (!b) throw BadParams("second operand required");
    std::vector<std::string> labels;
    if (kind == CombineKind::product) {
        int n = a.size() * b->size();
        std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
        for (int i = 0; i < a.size(); ++i)
            for (int j = 0; j < b->size(); ++j) labels.push_back(a.label(i) + "," + b->label(j));
        auto idx = [&](int i, int j) { return i * b->size() + j; };
        for (int i = 0; i < a.size(); ++i)
            for (int j = 0; j < b->size(); ++j)
                for (int k = 0; k < a.size(); ++k)
                    for (int l = 0; l < b->size(); ++l)
                        leq[idx(i, j)][idx(k, l)] = a.le(i, k) && b->le(j, l);
        return raw_poset(std::move(labels), std::move(leq));
    }
    // coproduct
    int n = a.size() + b->size();
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int i = 0; i < a.size(); ++i) labels.push_back("0." + a.label(i));
    for (int j = 0; j < b->size(); ++j) labels.push_back("1." + b->label(j));
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) leq[i][j] = a.le(i, j);
    for (int i = 0; i < b->size(); ++i)
        for (int j = 0; j < b->size(); ++j) leq[a.size() + i][a.size() + j] = b->le(i, j);
    return raw_poset(std::move(labels), std::move(leq));
}

FinCategory combine(CombineKind kind, const FinCategory& a, const FinCategory* b) {
    if (kind == CombineKind::opposite) {
        std::vector<FinCategory::Morph> ms;
        for (int m = 0; m < a.num_morphisms(); ++m) ms.push_back({a.tgt(m), a.src(m)});
        std::vector<int> ids;
        for (int o = 0; o < a.num_objects(); ++o) ids.push_back(a.identity(o));
        std::vector<std::vector<int>> comp(a.num_morphisms(),
                                           std::vector<int>(a.num_morphisms(), -1));
        // op composition: g . f in op = f . g in a
        for (int g = 0; g < a.num_morphisms(); ++g)
            for (int f = 0; f < a.num_morphisms(); ++f)
                if (a.tgt(g) == a.src(f)) comp[g][f] = a.compose(f, g);
        std::vector<std::string> obj;
        for (int o = 0; o < a.num_objects(); ++o) obj.push_back(a.object(o));
        return FinCategory(obj, ms, ids, comp);
    }
    if (!b) throw BadParams("second operand required");
    CatBuilder bl;
    if (kind == CombineKind::product) {
        for (int i = 0; i < a.num_objects(); ++i)
            for (int j = 0; j < b->num_objects(); ++j)
                bl.objects.push_back(a.object(i) + "," + b->object(j));
        auto oidx = [&](int i, int j) { return i * b->num_objects() + j; };
        auto key = [&](int m1, int m2) { return (long long)m1 * b->num_morphisms() + m2; };
        for (int m1 = 0; m1 < a.num_morphisms(); ++m1)
            for (int m2 = 0; m2 < b->num_morphisms(); ++m2)
                bl.add(oidx(a.src(m1), b->src(m2)), oidx(a.tgt(m1), b->tgt(m2)), key(m1, m2));
        int nb = b->num_morphisms();
        return bl.finalize(
            [&](int o) { return key(a.identity(o / b->num_objects()), b->identity(o % b->num_objects())); },
            [&](const CatBuilder::M& g, const CatBuilder::M& f) {
                return key(a.compose((int)(g.key / nb), (int)(f.key / nb)),
                           b->compose((int)(g.key % nb), (int)(f.key % nb)));
            });
    }
    for (int i = 0; i < a.num_objects(); ++i) bl.objects.push_back("0." + a.object(i));
    for (int j = 0; j < b->num_objects(); ++j) bl.objects.push_back("1." + b->object(j));
    for (int m = 0; m < a.num_morphisms(); ++m) bl.add(a.src(m), a.tgt(m), m);
    for (int m = 0; m < b->num_morphisms(); ++m)
        bl.add(a.num_objects() + b->src(m), a.num_objects() + b->tgt(m),
               a.num_morphisms() + m);
    int na = a.num_objects(), ma = a.num_morphisms();
    return bl.finalize(
        [&](int o) { return o < na ? (long long)a.identity(o) : ma + b->identity(o - na); },
        [&](const CatBuilder::M& g, const CatBuilder::M& f) {
            if (f.key < ma) return (long long)a.compose((int)g.key, (int)f.key);
            return (long long)ma + b->compose((int)(g.key - ma), (int)(f.key - ma));
        });
}

namespace {

std::vector<int> find_elements(const FinPoset& p, const std::vector<std::string>& labels) {
    std::vector<int> idx;
    for (const auto& l : labels) idx.push_back(p.index_of(l));
    return idx;
}

PosetMap map_by_labels(const FinPoset& src, const FinPoset& tgt,
                       const std::vector<std::pair<std::string, std::string>>& assign) {
    std::vector<int> m(src.size(), -1);
    for (const auto& [a, b] : assign) m[src.index_of(a)] = tgt.index_of(b);
    for (int x : m)
        if (x < 0) throw BadParams("incomplete map assignment");
    return PosetMap(src, tgt, std::move(m));
}

}  // namespace

PosetMap inclusion_map(const FinPoset& sub, const FinPoset& whole,
                       const std::vector<int>& elements) {
    return PosetMap(sub, whole, elements);
}

PosetMap inclusion_by_labels(const FinPoset& sub, const FinPoset& whole) {
    std::vector<int> m;
    for (const auto& l : sub.labels()) m.push_back(whole.index_of(l));
    return PosetMap(sub, whole, std::move(m));
}

PosetMap element_map(const FinPoset& p, int k) {
    return PosetMap(terminal_poset(), p, {k});
}

PosetMap constant_map(const FinPoset& src, const FinPoset& tgt, int k) {
    return PosetMap(src, tgt, std::vector<int>(src.size(), k));
}

PosetMap to_terminal(const FinPoset& p) { return constant_map(p, terminal_poset(), 0); }

NamedShape named_shape(const std::string& name, int param) {
    NamedShape r;
    auto box = [] { FinPoset c = chain_poset(1); return combine(CombineKind::product, c, &c); };
    if (name == "chain") {
        if (param < 0) throw BadParams("chain needs n");
        r.poset = chain_poset(param);
        return r;
    }
    if (name == "box") {
        r.poset = box();
        return r;
    }
    if (name == "corner_push") {
        FinPoset b = box();
        r.poset = b.subposet(find_elements(b, {"0,0", "1,0", "0,1"}));
        return r;
    }
    if (name == "corner_pull") {
        FinPoset b = box();
        r.poset = b.subposet(find_elements(b, {"1,0", "0,1", "1,1"}));
        return r;
    }
    if (name == "pull_n") {
        if (param < 1) throw BadParams("pull_n needs n >= 1");
        std::vector<std::string> labels;
        std::vector<std::pair<std::string, std::string>> pairs;
        for (int i = 0; i <= param; ++i) labels.push_back("e" + std::to_string(i));
        labels.push_back("t");
        for (int i = 0; i <= param; ++i) pairs.emplace_back(labels[i], "t");
        r.poset = build_poset(labels, pairs);
        r.arrows["t"] = element_map(r.poset, r.poset.index_of("t"));
        return r;
    }
    if (name == "T_shape") {
        FinPoset two = chain_poset(2), one = chain_poset(1);
        r.poset = combine(CombineKind::product, two, &one);
        FinPoset kt = r.poset.subposet(find_elements(r.poset, {"0,0", "1,0", "2,0", "0,1"}));
        r.parts["K_T"] = kt;
        r.arrows["i0"] = map_by_labels(one, kt, {{"0", "0,0"}, {"1", "1,0"}});
        r.arrows["i1"] = inclusion_by_labels(kt, r.poset);
        return r;
    }
    if (name == "rotation_J" || name == "rotation_K") {
        FinPoset two = chain_poset(2);
        FinPoset sq = combine(CombineKind::product, two, &two);
        std::vector<int> keep;
        for (int i = 0; i < sq.size(); ++i)
            if (sq.label(i) != "0,2") keep.push_back(i);
        FinPoset K = sq.subposet(keep);
        FinPoset J = K.subposet(find_elements(K, {"0,0", "1,0", "2,0", "0,1", "1,2"}));
        if (name == "rotation_J") {
            r.poset = J;
            r.arrows["i"] = map_by_labels(chain_poset(1), J, {{"0", "0,0"}, {"1", "1,0"}});
        } else {
            r.poset = K;
            r.parts["J"] = J;
            r.arrows["j"] = inclusion_by_labels(J, K);
        }
        return r;
    }
    if (name == "octa_J" || name == "octa_K") {
        FinPoset four = chain_poset(4), two = chain_poset(2);
        FinPoset grid = combine(CombineKind::product, four, &two);
        std::vector<int> keep;
        for (int i = 0; i < grid.size(); ++i)
            if (grid.label(i) != "4,0" && grid.label(i) != "0,2") keep.push_back(i);
        FinPoset K = grid.subposet(keep);
        FinPoset J = K.subposet(
            find_elements(K, {"0,0", "1,0", "2,0", "3,0", "0,1", "4,1", "1,2"}));
        if (name == "octa_J") {
            r.poset = J;
            r.arrows["i"] =
                map_by_labels(chain_poset(2), J, {{"0", "0,0"}, {"1", "1,0"}, {"2", "2,0"}});
        } else {
            r.poset = K;
            r.parts["J"] = J;
            r.arrows["j"] = inclusion_by_labels(J, K);
        }
        return r;
    }
    if (name == "biproduct_L2" || name == "biproduct_L3" || name == "biproduct_L") {
        FinPoset two = chain_poset(2);
        FinPoset L = combine(CombineKind::product, two, &two);
        FinPoset L3 = L.subposet(find_elements(L, {"0,0", "1,0", "2,0", "0,1", "0,2"}));
        FinPoset L2 = L3.subposet(find_elements(L3, {"1,0", "2,0", "0,1", "0,2"}));
        if (name == "biproduct_L2") {
            r.poset = L2;
            FinPoset e = terminal_poset();
            FinPoset ee = combine(CombineKind::coproduct, e, &e);
            r.arrows["j1"] = map_by_labels(ee, L2, {{"0.*", "1,0"}, {"1.*", "0,1"}});
        } else if (name == "biproduct_L3") {
            r.poset = L3;
            r.parts["L2"] = L2;
            r.arrows["j2"] = inclusion_by_labels(L2, L3);
        } else {
            r.poset = L;
            r.parts["L3"] = L3;
            r.parts["L2"] = L2;
            r.arrows["j3"] = inclusion_by_labels(L3, L);
        }
        return r;
    }
    throw UnknownShape("unknown shape: " + name);
}

// ---------------------------------------------------------------------------
// Slices, commas, cylinders

SliceResult slice(const FunctorData& u, int k, SliceSide side) {
    const FinCategory& J = u.src;
    const FinCategory& K = u.tgt;
    if (k < 0 || k >= K.num_objects()) throw ObjectNotInTarget("slice object out of range");
    SliceResult r;
    CatBuilder b;
    for (int j = 0; j < J.num_objects(); ++j) {
        for (int f = 0; f < K.num_morphisms(); ++f) {
            bool ok = side == SliceSide::under ? (K.src(f) == k && K.tgt(f) == u.obj_map[j])
                                               : (K.src(f) == u.obj_map[j] && K.tgt(f) == k);
            if (!ok) continue;
            b.objects.push_back("(" + J.object(j) + "|" + std::to_string(f) + ")");
            r.js.push_back(j);
            r.fs.push_back(f);
        }
    }
    int n = (int)b.objects.size();
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
            for (int g : J.hom(r.js[a], r.js[c])) {
                bool ok = side == SliceSide::under
                              ? K.compose(u.mor_map[g], r.fs[a]) == r.fs[c]
                              : K.compose(r.fs[c], u.mor_map[g]) == r.fs[a];
                if (ok) b.add(a, c, g);
            }
    r.cat = b.finalize([&](int o) { return (long long)J.identity(r.js[o]); },
                       [&](const CatBuilder::M& g, const CatBuilder::M& f) {
                           return (long long)J.compose((int)g.key, (int)f.key);
                       });
    std::vector<int> om(n), mm(r.cat.num_morphisms());
    for (int o = 0; o < n; ++o) om[o] = r.js[o];
    r.projection = FunctorData(r.cat, J, om, [&] {
        std::vector<int> m(r.cat.num_morphisms());
        for (int i = 0; i < r.cat.num_morphisms(); ++i) m[i] = (int)b.morphs[i].key;
        return m;
    }());
    return r;
}

std::pair<FinPoset, std::vector<int>> slice_poset(const PosetMap& u, int k, SliceSide side) {
    if (k < 0 || k >= u.tgt.size()) throw ObjectNotInTarget("slice object out of range");
    std::vector<int> elems;
    for (int j = 0; j < u.src.size(); ++j) {
        bool in = side == SliceSide::over ? u.tgt.le(u(j), k) : u.tgt.le(k, u(j));
        if (in) elems.push_back(j);
    }
    return {u.src.subposet(elems), elems};
}

CommaResult comma(const FunctorData& u1, const FunctorData& u2) {
    if (u1.tgt.num_objects() != u2.tgt.num_objects() ||
        u1.tgt.num_morphisms() != u2.tgt.num_morphisms())
        throw TargetMismatch("comma requires a shared target");
    const FinCategory& K = u1.tgt;
    CommaResult r;
    CatBuilder b;
    for (int j1 = 0; j1 < u1.src.num_objects(); ++j1)
        for (int j2 = 0; j2 < u2.src.num_objects(); ++j2)
            for (int a : K.hom(u1.obj_map[j1], u2.obj_map[j2])) {
                b.objects.push_back("(" + u1.src.object(j1) + "|" + u2.src.object(j2) + "|" +
                                    std::to_string(a) + ")");
                r.j1s.push_back(j1);
                r.j2s.push_back(j2);
                r.alphas.push_back(a);
            }
    int n = (int)b.objects.size();
    int M2 = u2.src.num_morphisms();
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
            for (int g1 : u1.src.hom(r.j1s[a], r.j1s[c]))
                for (int g2 : u2.src.hom(r.j2s[a], r.j2s[c]))
                    if (K.compose(u2.mor_map[g2], r.alphas[a]) ==
                        K.compose(r.alphas[c], u1.mor_map[g1]))
                        b.add(a, c, (long long)g1 * M2 + g2);
    r.cat = b.finalize(
        [&](int o) {
            return (long long)u1.src.identity(r.j1s[o]) * M2 + u2.src.identity(r.j2s[o]);
        },
        [&](const CatBuilder::M& g, const CatBuilder::M& f) {
            return (long long)u1.src.compose((int)(g.key / M2), (int)(f.key / M2)) * M2 +
                   u2.src.compose((int)(g.key % M2), (int)(f.key % M2));
        });
    auto project = [&](const FinCategory& src_of_u, const std::vector<int>& obj_of,
                       bool first) {
        std::vector<int> om(n), mm(r.cat.num_morphisms());
        for (int o = 0; o < n; ++o) om[o] = obj_of[o];
        for (int m = 0; m < r.cat.num_morphisms(); ++m) {
            long long key = b.morphs[m].key;
            mm[m] = first ? (int)(key / M2) : (int)(key % M2);
        }
        return FunctorData(r.cat, src_of_u, om, mm);
    };
    r.pr1 = project(u1.src, r.j1s, true);
    r.pr2 = project(u2.src, r.j2s, false);
    r.cell = NatTransData(r.pr1.then(u1), r.pr2.then(u2), r.alphas);
    return r;
}

CylinderResult mapping_cylinder(const FunctorData& u, CylinderKind kind) {
    const FinCategory& J = u.src;
    const FinCategory& K = u.tgt;
    FinCategory one = category_from_poset(chain_poset(1));
    FinCategory prod = combine(CombineKind::product, K, &one);
    // cyl: keep (u(j),1) and (k,0); cyl_prime: (u(j),0) and (k,1)
    int j_level = kind == CylinderKind::cyl ? 1 : 0;
    int k_level = 1 - j_level;
    std::set<int> keep_obj;
    auto oidx = [&](int k, int lvl) { return k * 2 + lvl; };
    for (int j = 0; j < J.num_objects(); ++j) keep_obj.insert(oidx(u.obj_map[j], j_level));
    for (int k = 0; k < K.num_objects(); ++k) keep_obj.insert(oidx(k, k_level));
    std::vector<int> objs(keep_obj.begin(), keep_obj.end());
    // full subcategory of prod on objs
    CatBuilder b;
    std::vector<int> back(prod.num_objects(), -1);
    for (int i = 0; i < (int)objs.size(); ++i) {
        back[objs[i]] = i;
        b.objects.push_back(prod.object(objs[i]));
    }
    for (int m = 0; m < prod.num_morphisms(); ++m)
        if (back[prod.src(m)] >= 0 && back[prod.tgt(m)] >= 0)
            b.add(back[prod.src(m)], back[prod.tgt(m)], m);
    FinCategory cyl = b.finalize(
        [&](int o) { return (long long)prod.identity(objs[o]); },
        [&](const CatBuilder::M& g, const CatBuilder::M& f) {
            return (long long)prod.compose((int)g.key, (int)f.key);
        });
    CylinderResult r;
    r.cat = cyl;
    std::vector<int> i_om(J.num_objects()), s_om(K.num_objects()), q_om(cyl.num_objects());
    for (int j = 0; j < J.num_objects(); ++j) i_om[j] = back[oidx(u.obj_map[j], j_level)];
    for (int k = 0; k < K.num_objects(); ++k) s_om[k] = back[oidx(k, k_level)];
    for (int o = 0; o < cyl.num_objects(); ++o) q_om[o] = objs[o] / 2;
    r.i = FunctorData::from_object_map(J, cyl, i_om);
    r.s = FunctorData::from_object_map(K, cyl, s_om);
    r.q = FunctorData::from_object_map(cyl, K, q_om);
    return r;
}

PosetCylinderResult mapping_cylinder(const PosetMap& u, CylinderKind kind) {
    FinPoset one = chain_poset(1);
    FinPoset prod = combine(CombineKind::product, u.tgt, &one);
    int j_level = kind == CylinderKind::cyl ? 1 : 0;
    int k_level = 1 - j_level;
    std::set<int> keep;
    auto idx = [&](int k, int lvl) { return k * 2 + lvl; };
    for (int j = 0; j < u.src.size(); ++j) keep.insert(idx(u(j), j_level));
    for (int k = 0; k < u.tgt.size(); ++k) keep.insert(idx(k, k_level));
    std::vector<int> elems(keep.begin(), keep.end());
    PosetCylinderResult r;
    r.poset = prod.subposet(elems);
    std::vector<int> back(prod.size(), -1);
    for (int i = 0; i < (int)elems.size(); ++i) back[elems[i]] = i;
    std::vector<int> im(u.src.size()), sm(u.tgt.size()), qm(elems.size());
    for (int j = 0; j < u.src.size(); ++j) im[j] = back[idx(u(j), j_level)];
    for (int k = 0; k < u.tgt.size(); ++k) sm[k] = back[idx(k, k_level)];
    for (int o = 0; o < (int)elems.size(); ++o) qm[o] = elems[o] / 2;
    r.i = PosetMap(u.src, r.poset, std::move(im));
    r.s = PosetMap(u.tgt, r.poset, std::move(sm));
    r.q = PosetMap(r.poset, u.tgt, std::move(qm));
    return r;
}

// ---------------------------------------------------------------------------
// Predicates

SieveStatus sieve_status(const FunctorData& u) {
    auto props = functor_props(u);
    if (!props.fully_faithful || !props.injective_on_objects) return SieveStatus::neither;
    std::vector<bool> in_image(u.tgt.num_objects(), false);
    for (int o : u.obj_map) in_image[o] = true;
    bool sieve = true, cosieve = true;
    for (int m = 0; m < u.tgt.num_morphisms(); ++m) {
        if (in_image[u.tgt.tgt(m)] && !in_image[u.tgt.src(m)]) sieve = false;
        if (in_image[u.tgt.src(m)] && !in_image[u.tgt.tgt(m)]) cosieve = false;
    }
    if (sieve && cosieve) return SieveStatus::both;
    if (sieve) return SieveStatus::sieve;
    if (cosieve) return SieveStatus::cosieve;
    return SieveStatus::neither;
}

SieveStatus sieve_status(const PosetMap& u) {
    // full + injective means an order embedding
    for (int a = 0; a < u.src.size(); ++a)
        for (int b = 0; b < u.src.size(); ++b) {
            if (a != b && u(a) == u(b)) return SieveStatus::neither;
            if (u.tgt.le(u(a), u(b)) != u.src.le(a, b)) return SieveStatus::neither;
        }
    std::vector<bool> in_image(u.tgt.size(), false);
    for (int j = 0; j < u.src.size(); ++j) in_image[u(j)] = true;
    bool sieve = true, cosieve = true;
    for (int k = 0; k < u.tgt.size(); ++k)
        for (int l = 0; l < u.tgt.size(); ++l) {
            if (!u.tgt.le(k, l)) continue;
            if (in_image[l] && !in_image[k]) sieve = false;
            if (in_image[k] && !in_image[l]) cosieve = false;
        }
    if (sieve && cosieve) return SieveStatus::both;
    if (sieve) return SieveStatus::sieve;
    if (cosieve) return SieveStatus::cosieve;
    return SieveStatus::neither;
}

namespace {

// Cartesian case (op = false): g : k -> u(j); a lift phi : j' -> j with
// u(phi) = g is cartesian when every psi : j'' -> j whose image factors as
// g . h has a unique chi : j'' -> j' over h with phi . chi = psi.
// The op = true case is the dual (cocartesian lifts of g : u(j) -> k).
bool has_cartesian_lift(const FunctorData& u, int j, int g, bool op) {
    const FinCategory& J = u.src;
    const FinCategory& K = u.tgt;
    for (int phi = 0; phi < J.num_morphisms(); ++phi) {
        bool endpoint = op ? J.src(phi) == j : J.tgt(phi) == j;
        if (!endpoint || u.mor_map[phi] != g) continue;
        bool cartesian = true;
        for (int psi = 0; psi < J.num_morphisms() && cartesian; ++psi) {
            bool pend = op ? J.src(psi) == j : J.tgt(psi) == j;
            if (!pend) continue;
            for (int h = 0; h < K.num_morphisms() && cartesian; ++h) {
                bool factor;
                if (op)
                    factor = K.src(h) == K.tgt(g) && K.tgt(h) == u.obj_map[J.tgt(psi)] &&
                             K.compose(h, g) == u.mor_map[psi];
                else
                    factor = K.tgt(h) == K.src(g) && K.src(h) == u.obj_map[J.src(psi)] &&
                             K.compose(g, h) == u.mor_map[psi];
                if (!factor) continue;
                int count = 0;
                for (int chi = 0; chi < J.num_morphisms(); ++chi) {
                    if (u.mor_map[chi] != h) continue;
                    bool fits = op ? (J.src(chi) == J.tgt(phi) && J.tgt(chi) == J.tgt(psi) &&
                                      J.compose(chi, phi) == psi)
                                   : (J.tgt(chi) == J.src(phi) && J.src(chi) == J.src(psi) &&
                                      J.compose(phi, chi) == psi);
                    if (fits) ++count;
                }
                if (count != 1) cartesian = false;
            }
        }
        if (cartesian) return true;
    }
    return false;
}

}  // namespace

FibrationStatus fibration_status(const FunctorData& u) {
    const FinCategory& J = u.src;
    const FinCategory& K = u.tgt;
    FibrationStatus st;
    st.fibration = true;
    st.opfibration = true;
    for (int j = 0; j < J.num_objects(); ++j)
        for (int g = 0; g < K.num_morphisms(); ++g) {
            if (K.tgt(g) == u.obj_map[j] && !has_cartesian_lift(u, j, g, false))
                st.fibration = false;
            if (K.src(g) == u.obj_map[j] && !has_cartesian_lift(u, j, g, true))
                st.opfibration = false;
        }
    st.discrete_fibers = true;
    for (int m = 0; m < J.num_morphisms(); ++m)
        if (u.mor_map[m] == K.identity(u.obj_map[J.src(m)]) && !J.is_identity(m))
            st.discrete_fibers = false;
    return st;
}

std::optional<PosetMap> find_adjoint(const PosetMap& u, AdjointSide side) {
    std::vector<int> adj(u.tgt.size(), -1);
    for (int y = 0; y < u.tgt.size(); ++y) {
        std::vector<int> cand;
        for (int x = 0; x < u.src.size(); ++x) {
            bool in = side == AdjointSide::right ? u.tgt.le(u(x), y) : u.tgt.le(y, u(x));
            if (in) cand.push_back(x);
        }
        int best = -1;
        for (int c : cand) {
            bool extreme = true;
            for (int d : cand)
                extreme = extreme &&
                          (side == AdjointSide::right ? u.src.le(d, c) : u.src.le(c, d));
            if (extreme) best = c;
        }
        if (best < 0) return std::nullopt;
        adj[y] = best;
    }
    PosetMap r(u.tgt, u.src, adj);
    for (int x = 0; x < u.src.size(); ++x)  // Galois condition both ways
        for (int y = 0; y < u.tgt.size(); ++y) {
            bool lhs = side == AdjointSide::right ? u.tgt.le(u(x), y) : u.tgt.le(y, u(x));
            bool rhs = side == AdjointSide::right ? u.src.le(x, r(y)) : u.src.le(r(y), x);
            if (lhs != rhs) return std::nullopt;
        }
    return r;
}

std::optional<FinPoset> category_as_poset(const FinCategory& c) {
    int n = c.num_objects();
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            auto h = c.hom(a, b);
            if (h.size() > 1) return std::nullopt;
            leq[a][b] = !h.empty();
        }
    std::vector<std::string> labels;
    for (int o = 0; o < n; ++o) labels.push_back(c.object(o));
    try {
        return raw_poset(labels, leq);
    } catch (const FincatError&) {
        return std::nullopt;
    }
}

std::optional<FunctorData> find_adjoint(const FunctorData& u, AdjointSide side) {
    auto ps = category_as_poset(u.src), pt = category_as_poset(u.tgt);
    if (!ps || !pt) throw NotAPoset("adjoint search requires poset shapes");
    auto a = find_adjoint(PosetMap(*ps, *pt, u.obj_map), side);
    if (!a) return std::nullopt;
    return FunctorData::from_object_map(u.tgt, u.src, a->map);
}

CategoryProps category_props(const FinCategory& c) {
    CategoryProps p;
    for (int o = 0; o < c.num_objects(); ++o) {
        bool initial = true, terminal = true;
        for (int x = 0; x < c.num_objects(); ++x) {
            initial = initial && c.hom(o, x).size() == 1;
            terminal = terminal && c.hom(x, o).size() == 1;
        }
        if (initial && !p.has_initial) p.has_initial = true, p.initial = o;
        if (terminal && !p.has_terminal) p.has_terminal = true, p.terminal = o;
    }
    return p;
}

FunctorProps functor_props(const FunctorData& u) {
    FunctorProps p;
    p.injective_on_objects = true;
    for (int a = 0; a < u.src.num_objects(); ++a)
        for (int b = a + 1; b < u.src.num_objects(); ++b)
            if (u.obj_map[a] == u.obj_map[b]) p.injective_on_objects = false;
    p.fully_faithful = true;
    for (int a = 0; a < u.src.num_objects(); ++a)
        for (int b = 0; b < u.src.num_objects(); ++b) {
            auto dom = u.src.hom(a, b);
            auto cod = u.tgt.hom(u.obj_map[a], u.obj_map[b]);
            std::set<int> image;
            for (int m : dom) image.insert(u.mor_map[m]);
            if (image.size() != dom.size() || image.size() != cod.size())
                p.fully_faithful = false;
        }
    return p;
}

std::vector<std::vector<int>> nerve_chains(const FinPoset& p, int n) { return p.chains(n); }

std::optional<std::vector<int>> poset_iso(const FinPoset& a, const FinPoset& b) {
    if (a.size() != b.size()) return std::nullopt;
    std::vector<int> perm(a.size(), -1);
    std::vector<bool> used(b.size(), false);
    std::function<bool(int)> go = [&](int i) -> bool {
        if (i == a.size()) return true;
        for (int j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            bool ok = true;
            for (int k = 0; k < i && ok; ++k) {
                ok = (a.le(i, k) == b.le(j, perm[k])) && (a.le(k, i) == b.le(perm[k], j));
            }
            if (!ok) continue;
            perm[i] = j;
            used[j] = true;
            if (go(i + 1)) return true;
            used[j] = false;
            perm[i] = -1;
        }
        return false;
    };
    if (!go(0)) return std::nullopt;
    return perm;
}

}  // namespace derlab
