#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "harmtree/harmonic.hpp"
#include "harmtree/step_function.hpp"
#include "harmtree/tree.hpp"
#include "harmtree/value_space.hpp"

namespace harmtree {

using Json = nlohmann::ordered_json;

/// A document that does not match its schema. `where` is a JSON pointer or a
/// file:line:column location.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& where, const std::string& what);
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& doc);

/// Exact fraction string plus a clearly approximate double.
Json fraction_json(const Rational& q);

Json value_to_json(const Value& v);
Value value_from_json(const Json& j, const ValueSpace& space, const std::string& where = "");

/// Vertex ids in documents are breadth-first ordinals.
///
/// Small trees are written vertex by vertex:
///   { "root": 0, "depth": D, "vertices": [ { "id", "level", "parent", "children": [ { "id", "weight" } ] } ] }
/// Trees too large to list but uniform level by level are written as
///   { "homogeneous": { "branching": b, "depth": D, "weights": [...] } }.
Json tree_to_json(const Tree& tree);
/// Parses either form. Throws SchemaError for malformed documents and
/// TreeError listing every violated invariant.
Tree tree_from_json(const Json& doc);

/// { "space", "level", "values": { "<sector id>": [...] } }; sector ids are
/// level-local indices.
Json step_function_to_json(const Tree& tree, const StepFunction& h);
StepFunction step_function_from_json(const Tree& tree, const Json& doc);

/// { "space", "depth", "interior_depth", "tree", "values": { "<vertex id>": [...] } }
/// or, when the vertex listing would be too large, "nodes"/"root" holding the
/// shared-subtree form: nodes[i] = [value, [child node ids]].
Json harmonic_to_json(const Tree& tree, const HarmonicFunction& f, bool embed_tree = true);
HarmonicFunction harmonic_from_json(const Tree& tree, const Json& doc);
/// Reads the embedded tree.
Tree tree_of_function_document(const Json& doc);

}  // namespace harmtree
