#include <doctest.h>

#include <algorithm>
#include <vector>

#include "tabrl/rng.hpp"
#include "tabrl/statespace.hpp"

using namespace tabrl;

namespace {

// Enumeration oracle: all level tuples in mixed-radix order (first
// variable most significant).
std::vector<std::vector<int>> enumerate_tuples(
    const std::vector<InputVariable>& vars) {
  std::vector<std::vector<int>> tuples{{}};
  for (const auto& v : vars) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : tuples) {
      for (int level = 0; level < v.cardinality; ++level) {
        auto t = prefix;
        t.push_back(level);
        next.push_back(std::move(t));
      }
    }
    tuples = std::move(next);
  }
  return tuples;
}

std::vector<InputVariable> pose_example_vars() {
  return {InputVariable("X", 2), InputVariable("Y", 2), InputVariable("th", 3),
          InputVariable("d", 2)};
}

}  // namespace

TEST_CASE("codec sizes from variable cardinalities") {
  CHECK(StateCodec(pose_example_vars()).n_states() == 24);
  CHECK(StateCodec({InputVariable("only", 1)}).n_states() == 1);
  CHECK(StateCodec({InputVariable("a", 2), InputVariable("b", 2)}).n_states() ==
        4);
}

TEST_CASE("degenerate single-variable space") {
  StateCodec codec({InputVariable("only", 1)});
  CHECK(codec.encode({0}) == 0);
  CHECK(codec.sibling_set(0, 0) == std::vector<int>{0});
}

TEST_CASE("encode matches the enumeration oracle") {
  const auto vars = pose_example_vars();
  StateCodec codec(vars);
  const auto tuples = enumerate_tuples(vars);
  REQUIRE(static_cast<int>(tuples.size()) == codec.n_states());
  for (int s = 0; s < codec.n_states(); ++s) {
    CHECK(codec.encode(tuples[s]) == s);
    CHECK(codec.decode(s) == tuples[s]);
  }
  // Spot values implied by the ordering.
  CHECK(codec.encode({0, 0, 0, 0}) == 0);
  CHECK(codec.encode({1, 1, 1, 1}) == 21);
  CHECK(codec.encode({1, 1, 2, 1}) == 23);
}

TEST_CASE("two-variable encode spot checks") {
  StateCodec codec({InputVariable("x1", 2), InputVariable("x2", 2)});
  CHECK(codec.encode({0, 0}) == 0);
  CHECK(codec.encode({1, 0}) == 2);  // first variable is most significant
  CHECK(codec.encode({1, 1}) == 3);
}

TEST_CASE("sibling sets vary exactly one variable") {
  StateCodec codec({InputVariable("x1", 2), InputVariable("x2", 2)});
  // s = 3 is the tuple (1, 1).
  CHECK(codec.sibling_set(3, 0) == std::vector<int>{1, 3});
  CHECK(codec.sibling_set(3, 1) == std::vector<int>{2, 3});
  CHECK(codec.decode(1) == std::vector<int>{0, 1});
  CHECK(codec.decode(3) == std::vector<int>{1, 1});
}

TEST_CASE("sibling set of the orientation variable in the 24-state space") {
  StateCodec codec(pose_example_vars());
  const int s = codec.encode({1, 1, 1, 1});  // (X=1, Y=1, th=90deg, d=T)
  const auto ss = codec.sibling_set(s, 2);
  REQUIRE(ss.size() == 3);
  CHECK(ss == std::vector<int>{codec.encode({1, 1, 0, 1}),
                               codec.encode({1, 1, 1, 1}),
                               codec.encode({1, 1, 2, 1})});
  const bool contains_s = std::find(ss.begin(), ss.end(), s) != ss.end();
  CHECK(contains_s);
}

TEST_CASE("codec validation errors") {
  CHECK_THROWS_AS(StateCodec({}), std::invalid_argument);
  CHECK_THROWS_AS(StateCodec({InputVariable("bad", 0)}), std::invalid_argument);
  CHECK_THROWS_AS(StateCodec({InputVariable("a", 1 << 16),
                              InputVariable("b", 1 << 16)}),
                  std::overflow_error);

  StateCodec codec({InputVariable("a", 2), InputVariable("b", 3)});
  CHECK_THROWS_AS(codec.encode({1}), std::invalid_argument);
  CHECK_THROWS_AS(codec.encode({1, 3}), std::out_of_range);
  CHECK_THROWS_AS(codec.decode(6), std::out_of_range);
  CHECK_THROWS_AS(codec.sibling_set(0, 2), std::out_of_range);

  CHECK_THROWS_AS(
      StateCodec({InputVariable("a", 2, {"x", "x"})}), std::invalid_argument);
  CHECK_THROWS_AS(
      StateCodec({InputVariable("a", 2, {"x"})}), std::invalid_argument);
}

TEST_CASE("label round trip") {
  StateCodec codec({InputVariable("d", 2, {"F", "T"})});
  CHECK(codec.variable(0).level_labels[1] == "T");
}

TEST_CASE("round-trip and sibling properties on random codecs") {
  Rng rng(20240901);
  for (int trial = 0; trial < 25; ++trial) {
    const int n_vars = 1 + rng.uniform_int(4);
    std::vector<InputVariable> vars;
    for (int i = 0; i < n_vars; ++i) {
      vars.emplace_back("v" + std::to_string(i), 1 + rng.uniform_int(5));
    }
    // Exercise both the tabulated and the on-demand paths.
    const std::int64_t budget = trial % 2 == 0 ? StateCodec::kDefaultSiblingBudget : 0;
    StateCodec codec(vars, budget);
    CHECK(codec.siblings_precomputed() == (trial % 2 == 0));

    std::int64_t card_sum = 0;
    for (const auto& v : vars) card_sum += v.cardinality;

    for (int s = 0; s < codec.n_states(); ++s) {
      CHECK(codec.encode(codec.decode(s)) == s);
      std::int64_t sizes = 0;
      for (int i = 0; i < codec.n_variables(); ++i) {
        const auto ss = codec.sibling_set(s, i);
        sizes += static_cast<std::int64_t>(ss.size());
        CHECK(static_cast<int>(ss.size()) == vars[i].cardinality);
        CHECK(std::is_sorted(ss.begin(), ss.end()));
        CHECK(std::find(ss.begin(), ss.end(), s) != ss.end());
        const auto ds = codec.decode(s);
        for (const int t : ss) {
          const auto dt = codec.decode(t);
          for (int j = 0; j < codec.n_variables(); ++j) {
            if (j != i) CHECK(dt[j] == ds[j]);
          }
          // Symmetry: s is in the sibling set of t for the same variable.
          const auto back = codec.sibling_set(t, i);
          CHECK(std::find(back.begin(), back.end(), s) != back.end());
        }
      }
      CHECK(sizes == card_sum);
    }
  }
}

TEST_CASE("lazy and tabulated sibling sets agree") {
  const auto vars = pose_example_vars();
  StateCodec fast(vars);
  StateCodec lazy(vars, 0);
  for (int s = 0; s < fast.n_states(); ++s) {
    for (int i = 0; i < fast.n_variables(); ++i) {
      CHECK(fast.sibling_set(s, i) == lazy.sibling_set(s, i));
    }
  }
}

TEST_CASE("action space is a mixed-radix bijection") {
  ActionSpace actions({InputVariable("wheel_left", 3),
                       InputVariable("wheel_right", 3)});
  CHECK(actions.n_actions() == 9);
  for (int a = 0; a < 9; ++a) {
    CHECK(actions.encode(actions.decode(a)) == a);
  }
  CHECK(actions.encode({2, 2}) == 8);
  CHECK(actions.decode(5) == std::vector<int>{1, 2});
}
