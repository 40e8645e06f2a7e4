#pragma once

#include "derlab/stablemodel.hpp"
#include "derlab/verify.hpp"

#include <json.hpp>

namespace derlab {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

inline constexpr int kDocumentVersion = 1;

// Typed document envelope: {"version": 1, "kind": ..., "body": ...}.
struct Document {
    int version = kDocumentVersion;
    std::string kind;  // poset | functor | vec_diagram | chain_diagram | chain_map
    Json body;
};

Json document_wrap(const std::string& kind, Json body);
Document parse_document(const Json& j);
Document parse_document_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json poset_to_json(const FinPoset& p);
FinPoset poset_from_json(const Json& j, const std::string& at);

Json functor_to_json(const PosetMap& u);
PosetMap functor_from_json(const Json& j, const std::string& at);

Json matrix_to_json(const QMatrix& m);
QMatrix matrix_from_json(const Json& j, int rows, int cols, const Field& f,
                         const std::string& at);

Json complex_to_json(const Complex& c);
Complex complex_from_json(const Json& j, const Field& f, const std::string& at);

Json chain_map_to_json(const ChainMap& m);
ChainMap chain_map_from_json(const Json& j, const Field& f, const std::string& at);

Json chain_diagram_to_json(const ChainDiagram& d);
ChainDiagram chain_diagram_from_json(const Json& j, const Field& f, const std::string& at);

// Poset-shaped diagrams only; generators are the cover relations.
Json vec_diagram_to_json(const VecDiagram& x);
VecDiagram vec_diagram_from_json(const Json& j, const Field& f, const std::string& at);

// Canonical report serialization: byte-stable under (seed, trials); the wall
// clock lives in the human-readable table only.
Json report_to_json(const Report& r);
std::string report_table(const Report& r);

}  // namespace derlab
