#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "harmtree/builder.hpp"
#include "harmtree/io.hpp"
#include "support/generators.hpp"

using namespace harmtree;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "harmtree_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(TreeJson, ExplicitRoundTrip) {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 10; ++trial) {
    const Tree t = random_tree(2, 4, 4, rng());
    const Json doc = tree_to_json(t);
    EXPECT_TRUE(doc.contains("vertices"));
    const Tree back = tree_from_json(doc);
    EXPECT_TRUE(back == t);
    EXPECT_EQ(back.to_breadth_first(), t.to_breadth_first());
  }
}

TEST(TreeJson, LargeHomogeneousUsesGeneratorForm) {
  const Tree t = build_homogeneous(2, 31);
  const Json doc = tree_to_json(t);
  ASSERT_TRUE(doc.contains("homogeneous"));
  EXPECT_EQ(doc["homogeneous"]["depth"], 31);
  EXPECT_TRUE(tree_from_json(doc) == t);
}

TEST(TreeJson, WeightSumErrorNamesTheVertex) {
  Json doc = tree_to_json(build_homogeneous(2, 2));
  doc["vertices"][2]["children"][0]["weight"] = "1/3";
  const auto msg = error_of([&] { tree_from_json(doc); });
  EXPECT_NE(msg.find("5/6"), std::string::npos) << msg;
  EXPECT_NE(msg.find("vertex 2"), std::string::npos) << msg;
  EXPECT_THROW(tree_from_json(doc), TreeError);
}

TEST(TreeJson, SingleChildIsRejected) {
  // 0 -> {1, 2}; 1 -> {3}; 2 -> {4, 5}.
  Json doc = {{"root", 0}, {"depth", 2}, {"vertices", Json::array()}};
  auto vertex = [](int id, int level, Json parent, Json children) {
    return Json{{"id", id}, {"level", level}, {"parent", parent}, {"children", children}};
  };
  doc["vertices"].push_back(vertex(0, 0, nullptr, Json::array({{{"id", 1}, {"weight", "1/2"}}, {{"id", 2}, {"weight", "1/2"}}})));
  doc["vertices"].push_back(vertex(1, 1, 0, Json::array({{{"id", 3}, {"weight", "1"}}})));
  doc["vertices"].push_back(vertex(2, 1, 0, Json::array({{{"id", 4}, {"weight", "1/2"}}, {{"id", 5}, {"weight", "1/2"}}})));
  for (int id = 3; id <= 5; ++id) doc["vertices"].push_back(vertex(id, 2, id == 3 ? 1 : 2, Json::array()));
  const auto msg = error_of([&] { tree_from_json(doc); });
  EXPECT_NE(msg.find("single child"), std::string::npos) << msg;
  EXPECT_NE(msg.find("vertex 1"), std::string::npos) << msg;
}

TEST(TreeJson, SchemaErrorsCarryLocation) {
  Json doc = tree_to_json(build_homogeneous(2, 2));
  doc["vertices"][1]["children"][0]["weight"] = "one half";
  try {
    tree_from_json(doc);
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(e.where().find("/vertices/1"), std::string::npos) << e.where();
  }
  Json missing = tree_to_json(build_homogeneous(2, 2));
  missing.erase("vertices");
  EXPECT_THROW(tree_from_json(missing), SchemaError);
}

TEST(Files, MalformedJsonReportsLineAndColumn) {
  const auto p = scratch("broken.json");
  std::ofstream(p) << "{\n  \"a\": 1,\n  \"b\": ]\n}\n";
  try {
    read_json_file(p);
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(e.where().find("broken.json:3:"), std::string::npos) << e.where();
  }
  EXPECT_THROW(read_json_file(scratch("does_not_exist.json")), std::runtime_error);
}

TEST(StepFunctionJson, RoundTrip) {
  std::mt19937_64 rng(92);
  const Tree t = random_tree(2, 3, 4, 6);
  for (auto space : {ValueSpace::scalar(), ValueSpace::product(3), ValueSpace::weighted_product(2)}) {
    const auto h = gen::step(rng, t, space, 3);
    const auto back = step_function_from_json(t, step_function_to_json(t, h));
    EXPECT_EQ(back.space(), space);
    EXPECT_EQ(back.level(), 3u);
    EXPECT_TRUE(same_function(t, back, h));
  }
}

TEST(StepFunctionJson, WrongCoordinateCount) {
  const Tree t = build_homogeneous(2, 2);
  Json doc = step_function_to_json(t, StepFunction::constant(ValueSpace::product(2), Value{Rational(1), Rational(2)}));
  doc["values"]["0"] = Json::array({"1"});
  EXPECT_THROW(step_function_from_json(t, doc), SchemaError);
}

TEST(HarmonicJson, ExplicitRoundTripThroughFile) {
  std::mt19937_64 rng(93);
  const Tree t = random_tree(2, 3, 5, 2);
  const auto f = gen::harmonic(rng, t, ValueSpace::product(2), 5);
  const auto p = scratch("f.json");
  write_json_file(p, harmonic_to_json(t, f));
  const Json doc = read_json_file(p);
  EXPECT_TRUE(doc.contains("values"));
  const Tree t2 = tree_of_function_document(doc);
  EXPECT_TRUE(t2 == t);
  const auto back = harmonic_from_json(t2, doc);
  EXPECT_EQ(back.interior_depth(), f.interior_depth());
  for (const auto& [v, val] : f.values(t)) EXPECT_EQ(back.value_at(t2, v), val);
}

TEST(HarmonicJson, DeepFunctionUsesNodeForm) {
  const Tree t = build_homogeneous(2, 31);
  const auto res = build_frequently_universal(t, TargetEnumeration(t, ValueSpace::scalar(), 0), 31);
  const Json doc = harmonic_to_json(t, res.f);
  ASSERT_TRUE(doc.contains("nodes"));
  const auto back = harmonic_from_json(tree_of_function_document(doc), doc);
  EXPECT_EQ(back.depth(), 31u);
  EXPECT_EQ(back.interior_depth(), 30);
  EXPECT_TRUE(check_harmonic(t, back).empty());
  for (std::uint32_t n : {0u, 7u, 19u, 31u})
    EXPECT_TRUE(same_function(t, boundary_trace(t, back, n), boundary_trace(t, res.f, n)));
}

TEST(HarmonicJson, RejectsDagThatDoesNotFitTheTree) {
  std::mt19937_64 rng(94);
  const Tree binary = build_homogeneous(2, 3);
  const Tree ternary = build_homogeneous(3, 3);
  const auto f = gen::harmonic(rng, binary, ValueSpace::scalar(), 3);
  const Json doc = harmonic_to_json(binary, f, false);
  EXPECT_ANY_THROW(harmonic_from_json(ternary, doc));
}

TEST(ValueJson, Fractions) {
  EXPECT_EQ(value_to_json(Value{Rational(-3, 4), Rational(2)}), Json::array({"-3/4", "2"}));
  EXPECT_EQ(value_from_json(Json("5/10"), ValueSpace::scalar()), Value::scalar(Rational(1, 2)));
  EXPECT_THROW(value_from_json(Json(0.5), ValueSpace::scalar()), SchemaError);
  const Json q = fraction_json(Rational(1, 3));
  EXPECT_EQ(q["exact"], "1/3");
}
