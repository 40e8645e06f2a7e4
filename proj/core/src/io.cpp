#include "derlab/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace derlab {

namespace {

const Json& need(const Json& j, const char* key, const std::string& at) {
    if (!j.is_object() || !j.contains(key))
        throw SchemaError("missing key '" + std::string(key) + "' at " + at);
    return j.at(key);
}

int need_int(const Json& j, const std::string& at) {
    if (!j.is_number_integer()) throw SchemaError("expected integer at " + at);
    return j.get<int>();
}

std::string need_string(const Json& j, const std::string& at) {
    if (!j.is_string()) throw SchemaError("expected string at " + at);
    return j.get<std::string>();
}

}  // namespace

Json document_wrap(const std::string& kind, Json body) {
    Json j;
    j["version"] = kDocumentVersion;
    j["kind"] = kind;
    j["body"] = std::move(body);
    return j;
}

Document parse_document(const Json& j) {
    Document d;
    d.version = need_int(need(j, "version", "/"), "/version");
    if (d.version != kDocumentVersion)
        throw SchemaError("unrecognized document version " + std::to_string(d.version) +
                          " at /version");
    d.kind = need_string(need(j, "kind", "/"), "/kind");
    static const std::vector<std::string> kinds = {"poset", "functor", "vec_diagram",
                                                   "chain_diagram", "chain_map"};
    if (std::find(kinds.begin(), kinds.end(), d.kind) == kinds.end())
        throw SchemaError("unknown document kind '" + d.kind + "' at /kind");
    d.body = need(j, "body", "/");
    return d;
}

Document parse_document_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("invalid JSON in " + path + ": " + e.what());
    }
    return parse_document(j);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << text;
}

Json poset_to_json(const FinPoset& p) {
    Json j;
    j["objects"] = Json::array();
    for (const auto& l : p.labels()) j["objects"].push_back(l);
    Json leq = Json::array();
    for (const auto& [a, b] : p.covers()) leq.push_back(Json::array({p.label(a), p.label(b)}));
    j["leq"] = std::move(leq);
    return j;
}

FinPoset poset_from_json(const Json& j, const std::string& at) {
    const Json& objs = need(j, "objects", at);
    if (!objs.is_array()) throw SchemaError("expected array at " + at + "/objects");
    std::vector<std::string> labels;
    for (size_t i = 0; i < objs.size(); ++i)
        labels.push_back(need_string(objs[i], at + "/objects/" + std::to_string(i)));
    const Json& leq = need(j, "leq", at);
    if (!leq.is_array()) throw SchemaError("expected array at " + at + "/leq");
    std::vector<std::pair<std::string, std::string>> pairs;
    for (size_t i = 0; i < leq.size(); ++i) {
        const Json& pr = leq[i];
        std::string here = at + "/leq/" + std::to_string(i);
        if (!pr.is_array() || pr.size() != 2) throw SchemaError("expected pair at " + here);
        pairs.emplace_back(need_string(pr[0], here + "/0"), need_string(pr[1], here + "/1"));
    }
    try {
        return build_poset(labels, pairs);
    } catch (const FincatError& e) {
        throw InvariantError(std::string(e.what()) + " at " + at);
    }
}

Json functor_to_json(const PosetMap& u) {
    Json j;
    j["source"] = poset_to_json(u.src);
    j["target"] = poset_to_json(u.tgt);
    Json m = Json::object();
    for (int i = 0; i < u.src.size(); ++i) m[u.src.label(i)] = u.tgt.label(u(i));
    j["map"] = std::move(m);
    return j;
}

PosetMap functor_from_json(const Json& j, const std::string& at) {
    FinPoset src = poset_from_json(need(j, "source", at), at + "/source");
    FinPoset tgt = poset_from_json(need(j, "target", at), at + "/target");
    const Json& m = need(j, "map", at);
    if (!m.is_object()) throw SchemaError("expected object at " + at + "/map");
    std::vector<int> map(src.size(), -1);
    for (const auto& [k, v] : m.items()) {
        int a, b;
        try {
            a = src.index_of(k);
            b = tgt.index_of(need_string(v, at + "/map/" + k));
        } catch (const FincatError& e) {
            throw SchemaError(std::string(e.what()) + " at " + at + "/map/" + k);
        }
        map[a] = b;
    }
    for (int i = 0; i < src.size(); ++i)
        if (map[i] < 0)
            throw SchemaError("object " + src.label(i) + " unmapped at " + at + "/map");
    try {
        return PosetMap(src, tgt, map);
    } catch (const FincatError& e) {
        throw InvariantError(std::string(e.what()) + " at " + at);
    }
}

Json matrix_to_json(const QMatrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

QMatrix matrix_from_json(const Json& j, int rows, int cols, const Field& f,
                         const std::string& at) {
    if (!j.is_array()) throw SchemaError("expected matrix (array of rows) at " + at);
    if ((int)j.size() != rows)
        throw SchemaError("expected " + std::to_string(rows) + " rows at " + at);
    QMatrix m(rows, cols, f);
    for (int i = 0; i < rows; ++i) {
        const Json& row = j[i];
        if (!row.is_array() || (int)row.size() != cols)
            throw SchemaError("expected " + std::to_string(cols) + " entries at " + at + "/" +
                              std::to_string(i));
        for (int c = 0; c < cols; ++c) {
            std::string lit = need_string(row[c], at + "/" + std::to_string(i) + "/" +
                                                      std::to_string(c));
            try {
                m.at(i, c) = Scalar::parse(lit, f);
            } catch (const DomainError& e) {
                throw SchemaError(std::string(e.what()) + " at " + at);
            }
        }
    }
    return m;
}

Json complex_to_json(const Complex& c) {
    Json j;
    j["window"] = Json::array({c.lo(), c.hi()});
    Json dims = Json::object(), diff = Json::object();
    for (int n = c.lo(); n <= c.hi(); ++n) {
        if (c.dim(n) > 0) dims[std::to_string(n)] = c.dim(n);
        if (!c.diff(n).is_zero()) diff[std::to_string(n)] = matrix_to_json(c.diff(n));
    }
    j["dims"] = std::move(dims);
    j["diff"] = std::move(diff);
    return j;
}

Complex complex_from_json(const Json& j, const Field& f, const std::string& at) {
    const Json& w = need(j, "window", at);
    if (!w.is_array() || w.size() != 2) throw SchemaError("expected window pair at " + at);
    int lo = need_int(w[0], at + "/window/0"), hi = need_int(w[1], at + "/window/1");
    if (hi < lo) return Complex::zero(f);
    std::vector<int> dims(hi - lo + 1, 0);
    for (const auto& [k, v] : need(j, "dims", at).items()) {
        int n = std::stoi(k);
        if (n < lo || n > hi) throw SchemaError("dimension outside window at " + at + "/dims/" + k);
        dims[n - lo] = need_int(v, at + "/dims/" + k);
    }
    std::vector<QMatrix> diffs;
    for (int n = lo; n <= hi; ++n)
        diffs.push_back(QMatrix(n == lo ? 0 : dims[n - 1 - lo], dims[n - lo], f));
    if (j.contains("diff"))
        for (const auto& [k, v] : j.at("diff").items()) {
            int n = std::stoi(k);
            if (n <= lo || n > hi)
                throw SchemaError("differential outside window at " + at + "/diff/" + k);
            diffs[n - lo] = matrix_from_json(v, dims[n - 1 - lo], dims[n - lo], f,
                                             at + "/diff/" + k);
        }
    try {
        return Complex(f, lo, dims, diffs);
    } catch (const DomainError& e) {
        throw InvariantError(std::string(e.what()) + " at " + at);
    }
}

Json chain_map_to_json(const ChainMap& m) {
    Json j;
    j["source"] = complex_to_json(m.source());
    j["target"] = complex_to_json(m.target());
    Json comps = Json::object();
    int lo = std::min(m.source().lo(), m.target().lo());
    int hi = std::max(m.source().hi(), m.target().hi());
    for (int n = lo; n <= hi; ++n)
        if (!m.at(n).is_zero()) comps[std::to_string(n)] = matrix_to_json(m.at(n));
    j["maps"] = std::move(comps);
    return j;
}

ChainMap chain_map_from_json(const Json& j, const Field& f, const std::string& at) {
    Complex src = complex_from_json(need(j, "source", at), f, at + "/source");
    Complex tgt = complex_from_json(need(j, "target", at), f, at + "/target");
    std::map<int, QMatrix> comps;
    if (j.contains("maps"))
        for (const auto& [k, v] : j.at("maps").items()) {
            int n = std::stoi(k);
            comps.emplace(n,
                          matrix_from_json(v, tgt.dim(n), src.dim(n), f, at + "/maps/" + k));
        }
    try {
        return ChainMap(src, tgt, std::move(comps));
    } catch (const DomainError& e) {
        throw InvariantError(std::string(e.what()) + " at " + at);
    }
}

Json chain_diagram_to_json(const ChainDiagram& d) {
    Json j;
    j["shape"] = poset_to_json(d.shape());
    Json cs = Json::object();
    for (int e = 0; e < d.shape().size(); ++e)
        cs[d.shape().label(e)] = complex_to_json(d.at(e));
    j["complexes"] = std::move(cs);
    Json maps = Json::object();
    for (const auto& [a, b] : d.shape().covers()) {
        ChainMap m = d.map(a, b);
        Json comps = Json::object();
        int lo = std::min(m.source().lo(), m.target().lo());
        int hi = std::max(m.source().hi(), m.target().hi());
        for (int n = lo; n <= hi; ++n)
            if (!m.at(n).is_zero()) comps[std::to_string(n)] = matrix_to_json(m.at(n));
        maps[d.shape().label(a) + "->" + d.shape().label(b)] = std::move(comps);
    }
    j["maps"] = std::move(maps);
    return j;
}

ChainDiagram chain_diagram_from_json(const Json& j, const Field& f, const std::string& at) {
    FinPoset shape = poset_from_json(need(j, "shape", at), at + "/shape");
    std::vector<Complex> cs(shape.size(), Complex::zero(f));
    for (const auto& [k, v] : need(j, "complexes", at).items()) {
        int e;
        try {
            e = shape.index_of(k);
        } catch (const FincatError& ex) {
            throw SchemaError(std::string(ex.what()) + " at " + at + "/complexes");
        }
        cs[e] = complex_from_json(v, f, at + "/complexes/" + k);
    }
    std::map<std::pair<int, int>, ChainMap> maps;
    if (j.contains("maps"))
        for (const auto& [k, v] : j.at("maps").items()) {
            auto arrow = k.find("->");
            if (arrow == std::string::npos)
                throw SchemaError("bad map key '" + k + "' at " + at + "/maps");
            int a, b;
            try {
                a = shape.index_of(k.substr(0, arrow));
                b = shape.index_of(k.substr(arrow + 2));
            } catch (const FincatError& ex) {
                throw SchemaError(std::string(ex.what()) + " at " + at + "/maps/" + k);
            }
            std::map<int, QMatrix> comps;
            for (const auto& [dk, dv] : v.items()) {
                int n = std::stoi(dk);
                comps.emplace(n, matrix_from_json(dv, cs[b].dim(n), cs[a].dim(n), f,
                                                  at + "/maps/" + k + "/" + dk));
            }
            try {
                maps.emplace(std::make_pair(a, b), ChainMap(cs[a], cs[b], std::move(comps)));
            } catch (const DomainError& e) {
                throw InvariantError(std::string(e.what()) + " at " + at + "/maps/" + k);
            }
        }
    try {
        return ChainDiagram(shape, cs, maps);
    } catch (const WrongShape& e) {
        throw InvariantError(std::string(e.what()) + " at " + at);
    }
}

Json vec_diagram_to_json(const VecDiagram& x) {
    auto p = category_as_poset(x.shape);
    if (!p) throw IoError("only poset-shaped diagrams serialize");
    Json j;
    j["shape"] = poset_to_json(*p);
    Json dims = Json::object();
    for (int o = 0; o < x.shape.num_objects(); ++o) dims[x.shape.object(o)] = x.dims[o];
    j["dims"] = std::move(dims);
    Json maps = Json::object();
    for (const auto& [a, b] : p->covers()) {
        int m = poset_morphism(x.shape, *p, a, b);
        maps[p->label(a) + "->" + p->label(b)] = matrix_to_json(x.maps[m]);
    }
    j["maps"] = std::move(maps);
    return j;
}

VecDiagram vec_diagram_from_json(const Json& j, const Field& f, const std::string& at) {
    FinPoset shape = poset_from_json(need(j, "shape", at), at + "/shape");
    FinCategory cat = category_from_poset(shape);
    std::vector<int> dims(shape.size(), 0);
    for (const auto& [k, v] : need(j, "dims", at).items()) {
        try {
            dims[shape.index_of(k)] = need_int(v, at + "/dims/" + k);
        } catch (const FincatError& e) {
            throw SchemaError(std::string(e.what()) + " at " + at + "/dims");
        }
    }
    std::map<int, QMatrix> gens;
    if (j.contains("maps"))
        for (const auto& [k, v] : j.at("maps").items()) {
            auto arrow = k.find("->");
            if (arrow == std::string::npos)
                throw SchemaError("bad map key '" + k + "' at " + at + "/maps");
            int a, b;
            try {
                a = shape.index_of(k.substr(0, arrow));
                b = shape.index_of(k.substr(arrow + 2));
            } catch (const FincatError& e) {
                throw SchemaError(std::string(e.what()) + " at " + at + "/maps/" + k);
            }
            if (!shape.lt(a, b))
                throw SchemaError("map key '" + k + "' is not a relation at " + at + "/maps");
            gens.emplace(poset_morphism(cat, shape, a, b),
                         matrix_from_json(v, dims[b], dims[a], f, at + "/maps/" + k));
        }
    try {
        return VecDiagram::from_generators(cat, dims, gens, f);
    } catch (const ShapeMismatch& e) {
        throw InvariantError(std::string(e.what()) + " at " + at);
    }
}

Json report_to_json(const Report& r) {
    Json j;
    j["suite"] = r.suite;
    j["seed"] = r.seed;
    j["trials"] = r.trials;
    Json vs = Json::array();
    for (const auto& v : r.verdicts) {
        Json jv;
        jv["name"] = v.name;
        jv["pass"] = v.pass;
        jv["seed"] = v.seed;
        jv["witness"] = v.witness;
        vs.push_back(std::move(jv));
    }
    j["verdicts"] = std::move(vs);
    j["passed"] = r.passed;
    j["failed"] = r.failed;
    j["pass"] = r.pass;
    return j;
}

std::string report_table(const Report& r) {
    std::ostringstream os;
    os << "suite " << r.suite << " (seed " << r.seed << ", trials " << r.trials << ")\n";
    os << "theorem failures indict the implementation, never the theorems.\n";
    for (const auto& v : r.verdicts) {
        os << "  " << (v.pass ? "pass" : "FAIL") << "  " << std::left << std::setw(40) << v.name
           << " seed=" << v.seed;
        if (!v.witness.empty()) os << "  " << v.witness;
        os << "\n";
    }
    os << (r.pass ? "PASS" : "FAIL") << "  " << r.passed << " passed, " << r.failed
       << " failed, " << r.duration_ms << " ms\n";
    return os.str();
}

}  // namespace derlab
