#include "harmtree/io.hpp"

#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <string_view>
#include <unordered_map>

namespace harmtree {

namespace {

constexpr std::uint64_t kMaxExplicitTree = std::uint64_t{1} << 20;
constexpr std::uint64_t kMaxExplicitFunction = std::uint64_t{1} << 17;

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where, std::string("missing field \"") + key + "\"");
  return *it;
}

// Parsed text yields unsigned numbers; documents built in memory may hold signed ones.
bool is_index(const Json& j) {
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

// ordered_json objects search keys linearly; callers guarantee the keys are new.
void append_member(Json& obj, std::string key, Json value) {
  obj.get_ref<Json::object_t&>().emplace_back(std::move(key), std::move(value));
}

std::unordered_map<std::string_view, const Json*> index_members(const Json& obj) {
  std::unordered_map<std::string_view, const Json*> out;
  out.reserve(obj.size());
  for (auto it = obj.begin(); it != obj.end(); ++it) out.emplace(it.key(), &it.value());
  return out;
}

Json from_unordered(const nlohmann::json& j) {
  if (j.is_object()) {
    Json out = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it) append_member(out, it.key(), from_unordered(it.value()));
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    out.get_ref<Json::array_t&>().reserve(j.size());
    for (const auto& x : j) out.push_back(from_unordered(x));
    return out;
  }
  return Json(j);
}

std::uint64_t unsigned_field(const Json& obj, const char* key, const std::string& where) {
  const Json& j = field(obj, key, where);
  if (!is_index(j)) throw SchemaError(where + "/" + key, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

Rational rational_from_json(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(std::to_string(j.get<std::int64_t>()));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where, e.what());
  }
  throw SchemaError(where, "expected an exact fraction string such as \"-3/4\"");
}

std::uint64_t stored_vertices(const Tree& tree, std::uint32_t depth) {
  std::uint64_t count = 0;
  for (std::uint32_t n = 0; n <= depth; ++n) {
    count += tree.level_size(n);
    if (count > kMaxExplicitTree) return count;
  }
  return count;
}

bool homogeneous_form(const Tree& tree, std::vector<Rational>& weights) {
  ShapeId cur = tree.root_shape();
  weights = tree.shape(cur).weights;
  for (std::uint32_t level = 0; level < tree.depth(); ++level) {
    const auto& sh = tree.shape(cur);
    if (sh.weights != weights) return false;
    for (ShapeId c : sh.children) {
      if (c != sh.children.front()) return false;
    }
    cur = sh.children.front();
  }
  return true;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

SchemaError::SchemaError(const std::string& where, const std::string& what)
    : std::runtime_error((where.empty() ? std::string("document") : where) + ": " + what), where_(where) {}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path.string() + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    // Parse into the map-backed type, then copy; parsing straight into an
    // ordered object is quadratic in its member count.
    return from_unordered(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw SchemaError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col), "malformed JSON");
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot write file");
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

Json fraction_json(const Rational& q) {
  Json j;
  j["exact"] = to_string(q);
  j["approx"] = approx(q);
  return j;
}

Json value_to_json(const Value& v) {
  Json j = Json::array();
  for (std::size_t i = 0; i < v.dim(); ++i) j.push_back(to_string(v[i]));
  return j;
}

Value value_from_json(const Json& j, const ValueSpace& space, const std::string& where) {
  if (space.dim() == 1 && (j.is_string() || j.is_number_integer())) return Value::scalar(rational_from_json(j, where));
  if (!j.is_array()) throw SchemaError(where, "expected an array of fraction strings");
  if (j.size() != space.dim()) {
    throw SchemaError(where, "expected " + std::to_string(space.dim()) + " coordinates, got " +
                                 std::to_string(j.size()));
  }
  std::vector<Rational> coords;
  for (std::size_t i = 0; i < j.size(); ++i) coords.push_back(rational_from_json(j[i], where + "/" + std::to_string(i)));
  return Value(std::move(coords));
}

Json tree_to_json(const Tree& tree) {
  if (tree.vertex_count() > kMaxExplicitTree) {
    std::vector<Rational> weights;
    if (!homogeneous_form(tree, weights)) throw std::length_error("tree too large to list vertex by vertex");
    Json gen;
    gen["branching"] = weights.size();
    gen["depth"] = tree.depth();
    gen["weights"] = Json::array();
    for (const auto& q : weights) gen["weights"].push_back(to_string(q));
    Json doc;
    doc["homogeneous"] = std::move(gen);
    return doc;
  }
  const auto listing = tree.to_breadth_first();
  std::vector<std::uint64_t> parent(listing.size(), 0);
  std::vector<std::uint32_t> level(listing.size(), 0);
  Json vertices = Json::array();
  std::uint64_t next = 1;
  for (std::uint64_t i = 0; i < listing.size(); ++i) {
    Json v;
    v["id"] = i;
    v["level"] = level[i];
    v["parent"] = i == 0 ? Json(nullptr) : Json(parent[i]);
    Json kids = Json::array();
    for (const auto& q : listing[i]) {
      parent[next] = i;
      level[next] = level[i] + 1;
      Json c;
      c["id"] = next++;
      c["weight"] = to_string(q);
      kids.push_back(std::move(c));
    }
    v["children"] = std::move(kids);
    vertices.push_back(std::move(v));
  }
  Json doc;
  doc["root"] = 0;
  doc["depth"] = tree.depth();
  doc["vertices"] = std::move(vertices);
  return doc;
}

Tree tree_from_json(const Json& doc) {
  if (!doc.is_object()) throw SchemaError("", "tree document must be an object");
  if (auto it = doc.find("homogeneous"); it != doc.end()) {
    const std::string where = "/homogeneous";
    const auto b = unsigned_field(*it, "branching", where);
    const auto d = unsigned_field(*it, "depth", where);
    const Json& ws = field(*it, "weights", where);
    if (!ws.is_array()) throw SchemaError(where + "/weights", "expected an array");
    std::vector<Rational> weights;
    for (std::size_t i = 0; i < ws.size(); ++i) weights.push_back(rational_from_json(ws[i], where + "/weights/" + std::to_string(i)));
    return build_homogeneous(static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(d), weights);
  }

  const Json& vertices = field(doc, "vertices", "");
  if (!vertices.is_array() || vertices.empty()) throw SchemaError("/vertices", "expected a nonempty array");
  const Json& root_id = field(doc, "root", "");
  if (!is_index(root_id)) throw SchemaError("/root", "expected a vertex id");

  std::unordered_map<std::uint64_t, std::size_t> position;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string where = "/vertices/" + std::to_string(i);
    const auto id = unsigned_field(vertices[i], "id", where);
    if (!position.emplace(id, i).second) throw SchemaError(where, "duplicate vertex id " + std::to_string(id));
  }
  auto root_it = position.find(root_id.get<std::uint64_t>());
  if (root_it == position.end()) throw SchemaError("/root", "root id is not a listed vertex");

  std::vector<std::vector<Rational>> listing;
  std::vector<std::uint64_t> doc_id;
  std::vector<bool> seen(vertices.size(), false);
  std::queue<std::pair<std::size_t, std::uint64_t>> queue;  // (position, level)
  queue.emplace(root_it->second, 0);
  seen[root_it->second] = true;
  while (!queue.empty()) {
    const auto [pos, level] = queue.front();
    queue.pop();
    const std::string where = "/vertices/" + std::to_string(pos);
    const Json& v = vertices[pos];
    const auto id = v["id"].get<std::uint64_t>();
    if (auto it = v.find("level"); it != v.end() && (!is_index(*it) || it->get<std::uint64_t>() != level)) {
      throw SchemaError(where + "/level", "vertex " + std::to_string(id) + " is at level " + std::to_string(level));
    }
    const Json& kids = field(v, "children", where);
    if (!kids.is_array()) throw SchemaError(where + "/children", "expected an array");
    std::vector<Rational> weights;
    for (std::size_t c = 0; c < kids.size(); ++c) {
      const std::string cw = where + "/children/" + std::to_string(c);
      const auto child = unsigned_field(kids[c], "id", cw);
      weights.push_back(rational_from_json(field(kids[c], "weight", cw), cw + "/weight"));
      auto it = position.find(child);
      if (it == position.end()) throw SchemaError(cw, "child " + std::to_string(child) + " is not a listed vertex");
      if (seen[it->second]) throw SchemaError(cw, "vertex " + std::to_string(child) + " has more than one parent");
      const Json& cv = vertices[it->second];
      if (auto p = cv.find("parent"); p != cv.end() && !(is_index(*p) && p->get<std::uint64_t>() == id)) {
        throw SchemaError("/vertices/" + std::to_string(it->second) + "/parent",
                          "parent does not match the listing of vertex " + std::to_string(id));
      }
      seen[it->second] = true;
      queue.emplace(it->second, level + 1);
    }
    listing.push_back(std::move(weights));
    doc_id.push_back(id);
  }
  if (listing.size() != vertices.size()) {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (!seen[i]) {
        throw SchemaError("/vertices/" + std::to_string(i), "vertex " + vertices[i]["id"].dump() +
                                                                " is not reachable from the root");
      }
    }
  }

  Tree tree = Tree::from_breadth_first(listing);
  const auto diags = validate(tree);
  if (!diags.empty()) {
    std::string msg;
    for (const auto& d : diags) {
      if (!msg.empty()) msg += "; ";
      msg += d.message;
      if (doc_id[d.vertex] != d.vertex) msg += " (document id " + std::to_string(doc_id[d.vertex]) + ")";
    }
    throw TreeError(msg);
  }
  return tree;
}

Json step_function_to_json(const Tree& tree, const StepFunction& h) {
  Json doc;
  doc["space"] = h.space().name();
  doc["level"] = h.level();
  Json values = Json::object();
  const auto vals = h.sector_values(tree, h.level());
  for (std::size_t i = 0; i < vals.size(); ++i) append_member(values, std::to_string(i), value_to_json(vals[i]));
  doc["values"] = std::move(values);
  return doc;
}

StepFunction step_function_from_json(const Tree& tree, const Json& doc) {
  const Json& space_j = field(doc, "space", "");
  if (!space_j.is_string()) throw SchemaError("/space", "expected a space name");
  ValueSpace space = ValueSpace::scalar();
  try {
    space = ValueSpace::parse(space_j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError("/space", e.what());
  }
  const auto level = unsigned_field(doc, "level", "");
  if (level > tree.depth()) throw SchemaError("/level", "level exceeds tree depth " + std::to_string(tree.depth()));
  const Json& values = field(doc, "values", "");
  if (!values.is_object()) throw SchemaError("/values", "expected an object keyed by sector id");
  const auto size = tree.level_size(static_cast<std::uint32_t>(level));
  if (values.size() != size) {
    throw SchemaError("/values", "expected " + std::to_string(size) + " sectors, got " + std::to_string(values.size()));
  }
  const auto by_key = index_members(values);
  std::vector<Value> vals;
  vals.reserve(size);
  for (std::uint64_t i = 0; i < size; ++i) {
    const std::string key = std::to_string(i);
    auto it = by_key.find(key);
    if (it == by_key.end()) throw SchemaError("/values", "missing sector " + key);
    vals.push_back(value_from_json(*it->second, space, "/values/" + key));
  }
  return StepFunction::from_sector_values(tree, space, static_cast<std::uint32_t>(level), vals);
}

Json harmonic_to_json(const Tree& tree, const HarmonicFunction& f, bool embed_tree) {
  Json doc;
  doc["space"] = f.space().name();
  doc["depth"] = f.depth();
  doc["interior_depth"] = f.interior_depth();
  if (embed_tree) doc["tree"] = tree_to_json(tree);
  if (stored_vertices(tree, f.depth()) <= kMaxExplicitFunction) {
    Json values = Json::object();
    for (const auto& [v, value] : f.values(tree)) append_member(values, std::to_string(tree.ordinal(v)), value_to_json(value));
    doc["values"] = std::move(values);
    return doc;
  }
  // Shared-subtree form, renumbered in the order nodes are first reached.
  const auto& store = f.store();
  std::unordered_map<NodeId, std::uint64_t> number;
  Json nodes = Json::array();
  auto emit = [&](auto&& self, NodeId id) -> std::uint64_t {
    if (auto it = number.find(id); it != number.end()) return it->second;
    Json kids = Json::array();
    for (NodeId c : store[id].children) kids.push_back(self(self, c));
    const std::uint64_t k = nodes.size();
    nodes.push_back(Json::array({value_to_json(store[id].value), std::move(kids)}));
    number.emplace(id, k);
    return k;
  };
  doc["root"] = emit(emit, f.root());
  doc["nodes"] = std::move(nodes);
  return doc;
}

HarmonicFunction harmonic_from_json(const Tree& tree, const Json& doc) {
  const Json& space_j = field(doc, "space", "");
  if (!space_j.is_string()) throw SchemaError("/space", "expected a space name");
  ValueSpace space = ValueSpace::scalar();
  try {
    space = ValueSpace::parse(space_j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError("/space", e.what());
  }
  const auto depth = unsigned_field(doc, "depth", "");
  if (depth > tree.depth()) throw SchemaError("/depth", "depth exceeds tree depth " + std::to_string(tree.depth()));
  const Json& interior_j = field(doc, "interior_depth", "");
  if (!interior_j.is_number_integer()) throw SchemaError("/interior_depth", "expected an integer");
  const auto interior = interior_j.get<std::int64_t>();
  if (interior < -1 || interior >= static_cast<std::int64_t>(depth)) {
    throw SchemaError("/interior_depth", "must lie in [-1, depth - 1]");
  }
  const auto d = static_cast<std::uint32_t>(depth);

  if (auto it = doc.find("values"); it != doc.end()) {
    const Json& values = *it;
    if (!values.is_object()) throw SchemaError("/values", "expected an object keyed by vertex id");
    const auto expected = stored_vertices(tree, d);
    if (values.size() != expected) {
      throw SchemaError("/values", "expected " + std::to_string(expected) + " vertices, got " +
                                       std::to_string(values.size()));
    }
    const auto by_key = index_members(values);
    return HarmonicFunction::from_values(tree, space, d, static_cast<int>(interior), [&](Vertex v) {
      const std::string key = std::to_string(tree.ordinal(v));
      auto vit = by_key.find(key);
      if (vit == by_key.end()) throw SchemaError("/values", "missing value for vertex " + key);
      return value_from_json(*vit->second, space, "/values/" + key);
    });
  }

  const Json& nodes = field(doc, "nodes", "");
  if (!nodes.is_array() || nodes.empty()) throw SchemaError("/nodes", "expected a nonempty array");
  NodeBuilder nb;
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "/nodes/" + std::to_string(i);
    const Json& n = nodes[i];
    if (!n.is_array() || n.size() != 2 || !n[1].is_array()) throw SchemaError(where, "expected [value, [children]]");
    std::vector<NodeId> kids;
    for (const auto& c : n[1]) {
      if (!is_index(c) || c.get<std::uint64_t>() >= i) {
        throw SchemaError(where, "children must refer to earlier nodes");
      }
      kids.push_back(ids[c.get<std::uint64_t>()]);
    }
    ids.push_back(nb.make(value_from_json(n[0], space, where + "/0"), std::move(kids)));
  }
  const auto root = unsigned_field(doc, "root", "");
  if (root >= ids.size()) throw SchemaError("/root", "no such node");

  // Every root-to-leaf chain must follow the tree down to exactly `depth`.
  std::unordered_map<std::tuple<ShapeId, NodeId, std::uint32_t>, bool, IdTupleHash> memo;
  auto fits = [&](auto&& self, ShapeId s, NodeId id, std::uint32_t at) -> bool {
    const auto key = std::make_tuple(s, id, at);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const Node& n = nb[id];
    bool ok;
    if (at == d) {
      ok = n.children.empty();
    } else {
      const auto& sh = tree.shape(s);
      ok = n.children.size() == sh.children.size() && !sh.children.empty();
      for (std::size_t c = 0; ok && c < sh.children.size(); ++c) ok = self(self, sh.children[c], n.children[c], at + 1);
    }
    memo.emplace(key, ok);
    return ok;
  };
  const NodeId root_id = ids[root];
  if (!fits(fits, tree.root_shape(), root_id, 0)) throw SchemaError("/nodes", "node structure does not match the tree");
  return HarmonicFunction(space, d, static_cast<int>(interior), nb.finish(), root_id);
}

Tree tree_of_function_document(const Json& doc) {
  auto it = doc.find("tree");
  if (it == doc.end()) throw SchemaError("", "function document has no embedded tree");
  return tree_from_json(*it);
}

}  // namespace harmtree
