#include <doctest.h>

#include "pddlforge/dpgc/config.hpp"
#include "pddlforge/pddl/parser.hpp"
#include "support/helpers.hpp"

using namespace pddlforge::dpgc;
namespace pddl = pddlforge::pddl;
using testing::artic3_domain;

namespace {

std::string artic3_config_text() { return testing::read_file(testing::data_path("artic3/artic3.dpgc.json")); }

std::string path_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

const char* kMinimal = R"J({
  "domain": "artic3",
  "object_pools": [{"id": "grippers", "type": "gripper", "quantity": 2, "naming": {"prefix": "g"}}],
  "constant_init": ["(free g1)"],
  "variable_init": [],
  "variable_goal": []
})J";

std::string with_goal_spec(const std::string& spec) {
  return R"({"domain": "artic3",
    "object_pools": [{"id": "grippers", "type": "gripper", "quantity": 2, "naming": {"prefix": "g"}},
                     {"id": "links", "type": "link", "quantity": 3, "naming": {"prefix": "link"}}],
    "variable_goal": [{"id": "p", "predicates": [)" +
         spec + "]}]}";
}

}  // namespace

TEST_CASE("parse_config: minimal document") {
  Config c = parse_config(kMinimal);
  CHECK(c.domain.str() == "artic3");
  REQUIRE(c.object_pools.size() == 1);
  const auto& pool = c.object_pools[0];
  CHECK(pool.quantity == 2);
  CHECK(pool.usage == UsageMode::random);
  CHECK(pool.naming.start == 1);
  CHECK(pool.naming.step == 1);
  CHECK(pool.object_names() == std::vector<Symbol>{Symbol("g1"), Symbol("g2")});
  CHECK(c.constant_init.size() == 1);
  CHECK(c.variable_init.empty());
  CHECK(c.variable_goal.empty());
  CHECK(c.mutex_groups.empty());
  CHECK(validate_against_domain(c, artic3_domain()).empty());
}

TEST_CASE("parse_config: defaults and selectors") {
  Config c = parse_config(with_goal_spec(R"({"predicate": "in-hand", "args": ["links$a", "grippers"]},
                                            {"predicate": "in-hand", "probability": 0.25, "count": 3,
                                             "args": ["links$a+2", "grippers"]})"));
  const auto& specs = c.variable_goal.at(0).predicates;
  CHECK(specs[0].probability == 1.0);
  CHECK(specs[0].count == 1);
  CHECK(specs[1].probability == 0.25);
  CHECK(specs[1].count == 3);
  REQUIRE(specs[1].args[0].tag);
  CHECK(specs[1].args[0].tag->label == "a");
  CHECK(specs[1].args[0].tag->offset == 2);
  CHECK(specs[1].args[0].str() == "links$a+2");
  CHECK_FALSE(specs[0].args[1].tag);
}

TEST_CASE("parse_config: errors carry document paths") {
  SUBCASE("dangling tag") {
    std::string t = with_goal_spec(R"({"predicate": "in-hand", "args": ["links$0+1", "grippers"]})");
    CHECK(path_of(t) == "variable_goal[0].predicates[0].args[0]");
    CHECK_THROWS_WITH_AS(parse_config(t), doctest::Contains("dangling tag"), ConfigError);
  }
  SUBCASE("binding in another predicate pool does not count") {
    std::string t = R"({"domain": "artic3",
      "object_pools": [{"id": "links", "type": "link", "quantity": 3, "naming": {"prefix": "link"}}],
      "variable_init": [{"id": "a", "predicates": [{"predicate": "free", "args": ["links$0"]}]},
                        {"id": "b", "predicates": [{"predicate": "free", "args": ["links$0+1"]}]}]})";
    CHECK(path_of(t) == "variable_init[1].predicates[0].args[0]");
  }
  SUBCASE("probability as string is not coerced") {
    CHECK(path_of(with_goal_spec(R"({"predicate": "free", "probability": "0.5", "args": ["grippers"]})")) ==
          "variable_goal[0].predicates[0].probability");
  }
  SUBCASE("probability out of range") {
    CHECK(path_of(with_goal_spec(R"({"predicate": "free", "probability": 1.5, "args": ["grippers"]})")) ==
          "variable_goal[0].predicates[0].probability");
    CHECK(path_of(with_goal_spec(R"({"predicate": "free", "probability": -0.1, "args": ["grippers"]})")) ==
          "variable_goal[0].predicates[0].probability");
  }
  SUBCASE("unknown key") {
    CHECK(path_of(with_goal_spec(R"({"predicate": "free", "weight": 2, "args": ["grippers"]})")) ==
          "variable_goal[0].predicates[0].weight");
    CHECK(path_of(R"({"domain": "x", "object_pools": [], "extra": 1})") == "extra");
  }
  SUBCASE("duplicate pool id") {
    std::string t = R"({"domain": "artic3", "object_pools": [
      {"id": "p", "type": "link", "quantity": 1, "naming": {"prefix": "l"}},
      {"id": "p", "type": "gripper", "quantity": 1, "naming": {"prefix": "g"}}]})";
    CHECK(path_of(t) == "object_pools[1].id");
  }
  SUBCASE("zero count, zero quantity, bad usage") {
    CHECK(path_of(with_goal_spec(R"({"predicate": "free", "count": 0, "args": ["grippers"]})")) ==
          "variable_goal[0].predicates[0].count");
    CHECK(path_of(R"({"domain": "d", "object_pools": [{"id": "p", "type": "t", "quantity": 0, "naming": {"prefix": "x"}}]})") ==
          "object_pools[0].quantity");
    CHECK(path_of(R"({"domain": "d", "object_pools": [{"id": "p", "type": "t", "quantity": 1, "naming": {"prefix": "x"}, "usage": "once"}]})") ==
          "object_pools[0].usage");
  }
  SUBCASE("unknown pool in selector") {
    CHECK(path_of(with_goal_spec(R"({"predicate": "free", "args": ["hands"]})")) ==
          "variable_goal[0].predicates[0].args[0]");
  }
  SUBCASE("malformed selector offsets") {
    CHECK(path_of(with_goal_spec(R"({"predicate": "free", "args": ["links$a", "links$a+0"]})")) ==
          "variable_goal[0].predicates[0].args[1]");
    CHECK(path_of(with_goal_spec(R"({"predicate": "free", "args": ["links$a", "links$a+x"]})")) ==
          "variable_goal[0].predicates[0].args[1]");
  }
  SUBCASE("empty predicate pool and missing keys") {
    CHECK(path_of(R"({"domain": "d", "object_pools": [], "variable_init": [{"id": "p", "predicates": []}]})") ==
          "variable_init[0].predicates");
    CHECK(path_of(R"({"object_pools": []})") == "domain");
  }
  SUBCASE("mutex groups") {
    std::string base = R"({"domain": "artic3",
      "object_pools": [{"id": "g", "type": "gripper", "quantity": 2, "naming": {"prefix": "g"}}],
      "variable_init": [{"id": "a", "predicates": [{"predicate": "free", "args": ["g"]}]},
                        {"id": "b", "predicates": [{"predicate": "free", "args": ["g"]}]}],
      "mutex_groups": [)";
    CHECK(path_of(base + R"({"section": "variable_init", "members": ["a", "a"], "weights": [1, 1]}]})") ==
          "mutex_groups[0].members[1]");
    CHECK(path_of(base + R"({"section": "variable_init", "members": ["a", "b"], "weights": [1, 0]}]})") ==
          "mutex_groups[0].weights[1]");
    CHECK(path_of(base + R"({"section": "variable_goal", "members": ["a", "b"], "weights": [1, 1]}]})") ==
          "mutex_groups[0].members[0]");
    CHECK(path_of(base + R"({"section": "variable_init", "members": ["a", "b"], "weights": [1]}]})") ==
          "mutex_groups[0].weights");
    CHECK_NOTHROW(parse_config(base + R"({"section": "variable_init", "members": ["a", "b"], "weights": [2, 1]}]})"));
  }
  SUBCASE("invalid JSON") { CHECK(path_of("{\"domain\": ") == "$"); }
}

TEST_CASE("bundled artic3 config: counts match the asset") {
  Config c = parse_config(artic3_config_text());
  // hand counts from data/artic3/artic3.dpgc.json
  CHECK(c.object_pools.size() == 4);
  CHECK(c.constant_init.size() == 28);
  CHECK(c.variable_init.size() == 3);
  CHECK(c.variable_goal.size() == 2);
  CHECK(c.mutex_groups.size() == 1);
  size_t init_specs = 0, goal_specs = 0;
  for (const auto& p : c.variable_init) init_specs += p.predicates.size();
  for (const auto& p : c.variable_goal) goal_specs += p.predicates.size();
  CHECK(init_specs == 4);
  CHECK(goal_specs == 2);

  const ObjectPool* angles = c.find_pool(Symbol("angle-pool"));
  REQUIRE(angles);
  auto names = angles->object_names();
  CHECK(names.front().str() == "a0");
  CHECK(names[1].str() == "a15");
  CHECK(names.back().str() == "a345");
}

TEST_CASE("parse . serialize . parse is identity on bundled configs") {
  for (const char* rel : {"artic3/artic3.dpgc.json", "artic3-macro/artic3-macro.dpgc.json"}) {
    Config once = parse_config(testing::read_file(testing::data_path(rel)));
    std::string text = serialize_config(once);
    Config twice = parse_config(text);
    CHECK(once == twice);
    CHECK(serialize_config(twice) == text);
  }
  Config minimal = parse_config(kMinimal);
  CHECK(parse_config(serialize_config(minimal)) == minimal);
}

TEST_CASE("validate_against_domain") {
  const auto& d = artic3_domain();
  SUBCASE("bundled configs have no errors") {
    CHECK(validate_against_domain(parse_config(artic3_config_text()), d).empty());
    auto macro = pddl::parse_domain(testing::read_file(testing::data_path("artic3-macro/domain.pddl")));
    auto c = parse_config(testing::read_file(testing::data_path("artic3-macro/artic3-macro.dpgc.json")));
    CHECK(validate_against_domain(c, macro).empty());
  }
  SUBCASE("undeclared predicate") {
    auto diags = validate_against_domain(
        parse_config(with_goal_spec(R"({"predicate": "in-hand2", "args": ["links", "grippers"]})")), d);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == Severity::error);
    CHECK(diags[0].path == "variable_goal[0].predicates[0].predicate");
    CHECK(diags[0].str().rfind("variable_goal[0].predicates[0].predicate: error: ", 0) == 0);
  }
  SUBCASE("arity mismatch and wrong pool type") {
    auto diags = validate_against_domain(
        parse_config(with_goal_spec(R"({"predicate": "in-hand", "args": ["links"]},
                                       {"predicate": "in-hand", "args": ["grippers", "links"]})")),
        d);
    REQUIRE(diags.size() == 3);
    CHECK(diags[0].path == "variable_goal[0].predicates[0].args");
    CHECK(diags[1].path == "variable_goal[0].predicates[1].args[0]");
    CHECK(diags[2].path == "variable_goal[0].predicates[1].args[1]");
  }
  SUBCASE("pool typed with a subtype is accepted") {
    auto sub = pddl::parse_domain(R"((define (domain hier) (:requirements :strips :typing)
      (:types hand - tool tool)
      (:predicates (holding ?t - tool))))");
    auto c = parse_config(R"({"domain": "hier",
      "object_pools": [{"id": "hands", "type": "hand", "quantity": 2, "naming": {"prefix": "h"}}],
      "variable_init": [{"id": "p", "predicates": [{"predicate": "holding", "args": ["hands"]}]}]})");
    CHECK(validate_against_domain(c, sub).empty());
    auto c2 = parse_config(R"({"domain": "hier",
      "object_pools": [{"id": "tools", "type": "tool", "quantity": 2, "naming": {"prefix": "t"}}],
      "variable_init": [{"id": "p", "predicates": [{"predicate": "holding", "args": ["tools"]}]}]})");
    CHECK(validate_against_domain(c2, sub).empty());
  }
  SUBCASE("undeclared type, constant atom problems, name collisions") {
    auto c = parse_config(R"J({"domain": "artic3",
      "object_pools": [{"id": "x", "type": "wheel", "quantity": 1, "naming": {"prefix": "w"}},
                       {"id": "g", "type": "gripper", "quantity": 2, "naming": {"prefix": "g"}},
                       {"id": "h", "type": "gripper", "quantity": 1, "naming": {"prefix": "g", "start": 2}}],
      "constant_init": ["(free g9)", "(free a0)", "(tip j1 j2)"]})J");
    auto diags = validate_against_domain(c, d);
    std::vector<std::string> paths;
    for (const auto& dg : diags) paths.push_back(dg.path);
    CHECK(paths == std::vector<std::string>{"object_pools[0].type", "object_pools[2].naming", "constant_init[0]",
                                            "constant_init[1]", "constant_init[2]"});
  }
  SUBCASE("tag offsets") {
    std::string t = R"({"domain": "artic3",
      "object_pools": [{"id": "links", "type": "link", "quantity": 3, "naming": {"prefix": "link"}},
                       {"id": "seq", "type": "link", "quantity": 3, "naming": {"prefix": "s"}, "usage": "sequential"},
                       {"id": "g", "type": "gripper", "quantity": 2, "naming": {"prefix": "g"}}],
      "variable_init": [{"id": "p", "predicates": [
        {"predicate": "in-hand", "args": ["links$0", "g"]},
        {"predicate": "in-hand", "args": ["links$0+3", "g"]},
        {"predicate": "in-hand", "args": ["seq$0", "g"]},
        {"predicate": "in-hand", "args": ["seq$0+1", "g"]}]}]})";
    auto diags = validate_against_domain(parse_config(t), d);
    REQUIRE(diags.size() == 2);
    CHECK(diags[0].severity == Severity::error);
    CHECK(diags[0].path == "variable_init[0].predicates[1].args[0]");
    CHECK(diags[1].severity == Severity::warning);
    CHECK(diags[1].path == "variable_init[0].predicates[3].args[0]");
    CHECK_FALSE(has_errors({diags[1]}));
  }
  SUBCASE("domain name mismatch") {
    auto c = parse_config(R"({"domain": "other", "object_pools": []})");
    auto diags = validate_against_domain(c, d);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].path == "domain");
  }
}
