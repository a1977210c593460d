#include <doctest.h>

#include <cmath>
#include <vector>

#include "tabrl/learning.hpp"
#include "tabrl/rng.hpp"
#include "tabrl/sample_model.hpp"
#include "tabrl/value_iteration.hpp"

using namespace tabrl;

namespace {

LearningParams params_with(double alpha, double gamma, double lambda,
                           double threshold = 0.01) {
  LearningParams p;
  p.alpha = alpha;
  p.gamma = gamma;
  p.lambda = lambda;
  p.trace_threshold = threshold;
  return p;
}

}  // namespace

TEST_CASE("retr capacity from the trace-decay bound") {
  CHECK(retr_capacity(params_with(0.1, 0.9, 0.9, 0.01)) == 21);
  // gamma*lambda ~= 0.5 with a 0.99 threshold: the trace dies immediately.
  CHECK(retr_capacity(params_with(0.1, 0.5, 0.999999999, 0.99)) == 0);
  CHECK(retr_capacity(params_with(0.1, 0.9, 0.5, 0.01)) == 5);
}

TEST_CASE("q-learning update arithmetic") {
  LearningParams p = params_with(0.1, 0.9, 0.9);

  SUBCASE("zero table") {
    QTable q(3, 2);
    const double delta = q_learning_update(q, 0, 0, 1.0, 1, p);
    CHECK(delta == 1.0);
    CHECK(q.at(0, 0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(q.at(1, 0) == 0.0);
  }

  SUBCASE("bootstraps from the max of the next row") {
    QTable q(3, 2);
    q.at(1, 0) = 2.0;
    q.at(1, 1) = 0.0;
    const double delta = q_learning_update(q, 0, 0, 0.0, 1, p);
    CHECK(delta == doctest::Approx(1.8).epsilon(1e-15));
    CHECK(q.at(0, 0) == doctest::Approx(0.18).epsilon(1e-15));
  }

  SUBCASE("fixed point is untouched") {
    QTable q(2, 1);
    q.at(1, 0) = 5.0;
    q.at(0, 0) = 0.9 * 5.0;  // r = 0 transition 0 -> 1
    const double delta = q_learning_update(q, 0, 0, 0.0, 1, p);
    CHECK(delta == 0.0);
    CHECK(q.at(0, 0) == 4.5);
  }

  SUBCASE("rejects bad input") {
    QTable q(2, 2);
    CHECK_THROWS_AS(q_learning_update(q, 5, 0, 0.0, 0, p), std::out_of_range);
    CHECK_THROWS_AS(q_learning_update(q, 0, 0, std::nan(""), 0, p),
                    std::invalid_argument);
  }
}

TEST_CASE("sarsa update uses the on-policy next value") {
  LearningParams p = params_with(0.1, 0.9, 0.9);
  QTable q(3, 2);
  q.at(1, 0) = 5.0;   // greedy value at s'
  q.at(1, 1) = -1.0;  // the action actually chosen

  const double sarsa_delta = sarsa_update(q, 0, 0, 0.0, 1, 1, p);
  CHECK(sarsa_delta == doctest::Approx(-0.9).epsilon(1e-15));

  QTable q2(3, 2);
  q2.at(1, 0) = 5.0;
  q2.at(1, 1) = -1.0;
  CHECK(q_learning_update(q2, 0, 0, 0.0, 1, p) ==
        doctest::Approx(4.5).epsilon(1e-15));

  SUBCASE("delta is 1 whenever Q(s', a') is 0 and r is 1") {
    QTable q3(3, 2);
    q3.at(1, 0) = 100.0;
    CHECK(sarsa_update(q3, 0, 1, 1.0, 1, 1, p) == 1.0);
  }

  SUBCASE("greedy next action gives the q-learning delta") {
    QTable qa(3, 2), qb(3, 2);
    qa.at(1, 0) = qb.at(1, 0) = 3.0;
    const double ds = sarsa_update(qa, 0, 0, 0.5, 1, 0, p);
    const double dq = q_learning_update(qb, 0, 0, 0.5, 1, p);
    CHECK(ds == dq);
  }
}

TEST_CASE("trace register semantics") {
  LearningParams p = params_with(0.1, 0.9, 0.9);

  SUBCASE("replacing trace decays as (gamma*lambda)^n") {
    TraceRegister traces = TraceRegister::full(TraceRule::replacing);
    traces.touch(3, 1, p.alpha);
    for (int n = 1; n <= 8; ++n) {
      traces.decay_all(p.gamma * p.lambda);
      CHECK(traces.value(3, 1) ==
            doctest::Approx(std::pow(0.81, n)).epsilon(1e-12));
    }
  }

  SUBCASE("no duplicate pairs; re-touch moves to most recent") {
    TraceRegister traces(TraceRule::replacing, 3);
    traces.touch(0, 0, p.alpha);
    traces.touch(1, 0, p.alpha);
    traces.touch(0, 0, p.alpha);
    CHECK(traces.size() == 2);
    traces.touch(2, 0, p.alpha);
    traces.touch(3, 0, p.alpha);  // evicts (1,0), the least recent
    CHECK(traces.size() == 3);
    CHECK(traces.value(1, 0) == 0.0);
    CHECK(traces.value(0, 0) == 1.0);
    const auto entries = traces.snapshot();
    CHECK(entries.front().state == 0);
    CHECK(entries.back().state == 3);
  }

  SUBCASE("dutch touch folds alpha in") {
    TraceRegister traces = TraceRegister::full(TraceRule::dutch);
    traces.touch(0, 0, 0.1);
    CHECK(traces.value(0, 0) == doctest::Approx(0.1));
    traces.decay_all(0.81);
    traces.touch(0, 0, 0.1);
    CHECK(traces.value(0, 0) ==
          doctest::Approx(0.9 * 0.081 + 0.1).epsilon(1e-12));
  }
}

TEST_CASE("sarsa(lambda) with replacing traces") {
  LearningParams p = params_with(0.1, 0.9, 0.9);

  SUBCASE("first step updates only the current pair by alpha*delta") {
    QTable q(4, 2);
    TraceRegister traces = TraceRegister::reduced(TraceRule::replacing, p);
    const double delta = sarsa_lambda_update(q, traces, 0, 1, 1.0, 1, 0, p);
    CHECK(delta == 1.0);
    CHECK(q.at(0, 1) == doctest::Approx(0.1).epsilon(1e-15));
    int nonzero = 0;
    for (const double v : q.data()) {
      if (v != 0.0) ++nonzero;
    }
    CHECK(nonzero == 1);
  }

  SUBCASE("a pair visited one step earlier carries trace 0.81") {
    QTable q(4, 2);
    TraceRegister traces = TraceRegister::reduced(TraceRule::replacing, p);
    sarsa_lambda_update(q, traces, 0, 0, 0.0, 1, 1, p);
    sarsa_lambda_update(q, traces, 1, 1, 0.0, 2, 0, p);
    CHECK(traces.value(0, 0) == doctest::Approx(0.81).epsilon(1e-15));
  }

  SUBCASE("eviction keeps the 21 most recent pairs plus the current one") {
    const int n = 40;
    QTable q(n, 1);
    TraceRegister traces = TraceRegister::reduced(TraceRule::replacing, p);
    CHECK(*traces.capacity() == 22);
    // Visit pairs (0,0), (1,0), ... along a chain with zero rewards, then
    // trigger one informative update and watch who receives it.
    for (int k = 0; k < 22; ++k) {
      sarsa_lambda_update(q, traces, k, 0, 0.0, k + 1, 0, p);
    }
    // All Q still zero (all deltas were zero).
    for (const double v : q.data()) CHECK(v == 0.0);
    const double q0_before = q.at(0, 0);
    const double q1_before = q.at(1, 0);
    sarsa_lambda_update(q, traces, 22, 0, 1.0, 23, 0, p);
    CHECK(q.at(0, 0) == q0_before);  // visited 22 steps ago: evicted
    CHECK(q.at(1, 0) != q1_before);  // visited 21 steps ago: still traced
    CHECK(traces.value(1, 0) ==
          doctest::Approx(std::pow(0.81, 21)).epsilon(1e-12));
    CHECK(traces.size() == 22);
  }

  SUBCASE("requires a replacing-rule register") {
    QTable q(2, 1);
    TraceRegister traces = TraceRegister::full(TraceRule::dutch);
    CHECK_THROWS_AS(sarsa_lambda_update(q, traces, 0, 0, 0.0, 1, 0, p),
                    std::invalid_argument);
  }
}

namespace {

// Straight-line restatement of the true online recurrence over a dense
// table, written independently of TraceRegister.
struct ToslOracle {
  static constexpr int kStates = 2;
  static constexpr int kActions = 2;
  double q[kStates][kActions] = {};
  double e[kStates][kActions] = {};
  double q_old = 0.0;

  void step(int s, int a, double r, int s2, int a2, const LearningParams& p) {
    const double q_sa = q[s][a];
    const double q_next = q[s2][a2];
    const double delta = r + p.gamma * q_next - q_sa;
    const double corr = q_sa - q_old;
    for (auto& row : e) {
      for (auto& v : row) v *= p.gamma * p.lambda;
    }
    e[s][a] = (1.0 - p.alpha) * e[s][a] + p.alpha;
    for (int x = 0; x < kStates; ++x) {
      for (int b = 0; b < kActions; ++b) {
        q[x][b] += (delta + corr) * e[x][b];
      }
    }
    q[s][a] -= p.alpha * corr;
    q_old = q_next;
  }
};

}  // namespace

TEST_CASE("true online update against a scripted oracle") {
  LearningParams p = params_with(0.1, 0.9, 0.9);

  SUBCASE("first step of an episode") {
    QTable q(2, 2);
    TraceRegister traces = TraceRegister::full(TraceRule::dutch);
    ToslCarry carry;
    const double delta = tosl_update(q, traces, carry, 0, 0, 1.0, 1, 1, p);
    CHECK(delta == 1.0);
    CHECK(q.at(0, 0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(carry.q_old == 0.0);
  }

  SUBCASE("hand-worked two-step values") {
    QTable q(2, 2);
    TraceRegister traces = TraceRegister::full(TraceRule::dutch);
    ToslCarry carry;
    tosl_update(q, traces, carry, 0, 0, 1.0, 1, 1, p);
    tosl_update(q, traces, carry, 1, 1, -0.5, 0, 1, p);
    // After step 1: Q(0,0) = 0.1. Step 2: delta = -0.5, traces decay to
    // e(0,0) = 0.081, e(1,1) = 0.1, so Q(0,0) = 0.1 - 0.5*0.081 = 0.0595
    // and Q(1,1) = -0.05.
    CHECK(q.at(0, 0) == doctest::Approx(0.0595).epsilon(1e-12));
    CHECK(q.at(1, 1) == doctest::Approx(-0.05).epsilon(1e-12));
  }

  SUBCASE("bitwise agreement with the oracle over a mixed stream") {
    QTable q(2, 2);
    TraceRegister traces = TraceRegister::full(TraceRule::dutch);
    ToslCarry carry;
    ToslOracle oracle;
    Rng rng(99);
    int s = 0;
    int a = 0;
    for (int k = 0; k < 400; ++k) {
      const int s2 = rng.uniform_int(2);
      const int a2 = rng.uniform_int(2);
      const double r = rng.uniform() * 2.0 - 1.0;
      tosl_update(q, traces, carry, s, a, r, s2, a2, p);
      oracle.step(s, a, r, s2, a2, p);
      for (int x = 0; x < 2; ++x) {
        for (int b = 0; b < 2; ++b) {
          CHECK(q.at(x, b) == oracle.q[x][b]);
        }
      }
      CHECK(carry.q_old == oracle.q_old);
      s = s2;
      a = a2;
    }
  }

  SUBCASE("requires a dutch-rule register") {
    QTable q(2, 2);
    TraceRegister traces = TraceRegister::full(TraceRule::replacing);
    ToslCarry carry;
    CHECK_THROWS_AS(tosl_update(q, traces, carry, 0, 0, 0.0, 1, 1, p),
                    std::invalid_argument);
  }
}

TEST_CASE("true online with vanishing lambda reduces to sarsa") {
  LearningParams tosl_p = params_with(0.1, 0.9, 1e-300);
  LearningParams sarsa_p = params_with(0.1, 0.9, 0.9);

  QTable q_tosl(6, 3), q_sarsa(6, 3);
  TraceRegister traces = TraceRegister::reduced(TraceRule::dutch, tosl_p);
  ToslCarry carry;
  Rng rng(5);
  int s = 0;
  int a = 0;
  for (int k = 0; k < 600; ++k) {
    const int s2 = rng.uniform_int(6);
    const int a2 = rng.uniform_int(3);
    const double r = rng.uniform() - 0.5;
    tosl_update(q_tosl, traces, carry, s, a, r, s2, a2, tosl_p);
    sarsa_update(q_sarsa, s, a, r, s2, a2, sarsa_p);
    s = s2;
    a = a2;
  }
  for (int x = 0; x < 6; ++x) {
    for (int b = 0; b < 3; ++b) {
      CHECK(q_tosl.at(x, b) == doctest::Approx(q_sarsa.at(x, b)).epsilon(1e-12));
    }
  }
}

TEST_CASE("full and reduced traces agree when nothing is evicted") {
  LearningParams p = params_with(0.1, 0.9, 0.9);
  const int steps = 700;
  QTable q_full(64, 4), q_reduced(64, 4);
  TraceRegister full = TraceRegister::full(TraceRule::replacing);
  TraceRegister reduced(TraceRule::replacing, steps + 1);

  Rng rng(1234);
  int s = rng.uniform_int(64);
  int a = rng.uniform_int(4);
  for (int k = 0; k < steps; ++k) {
    const int s2 = rng.uniform_int(64);
    const int a2 = rng.uniform_int(4);
    const double r = rng.uniform() * 2.0 - 1.0;
    sarsa_lambda_update(q_full, full, s, a, r, s2, a2, p);
    sarsa_lambda_update(q_reduced, reduced, s, a, r, s2, a2, p);
    s = s2;
    a = a2;
  }
  for (int i = 0; i < 64 * 4; ++i) {
    CHECK(q_full.data()[i] == q_reduced.data()[i]);
  }
}

TEST_CASE("per-step divergence of the reduced register is threshold-bounded") {
  LearningParams p = params_with(0.1, 0.9, 0.9);
  QTable q(64, 4);
  TraceRegister full = TraceRegister::full(TraceRule::replacing);
  TraceRegister reduced = TraceRegister::reduced(TraceRule::replacing, p);

  Rng rng(77);
  int s = rng.uniform_int(64);
  int a = rng.uniform_int(4);
  for (int k = 0; k < 400; ++k) {
    const int s2 = rng.uniform_int(64);
    const int a2 = rng.uniform_int(4);
    const double r = rng.uniform() * 2.0 - 1.0;

    // Apply both updates to copies of the same table and compare the
    // one-step increments.
    QTable q_a = q;
    QTable q_b = q;
    TraceRegister full_copy = full;
    TraceRegister reduced_copy = reduced;
    const double delta = sarsa_lambda_update(q_a, full_copy, s, a, r, s2, a2, p);
    sarsa_lambda_update(q_b, reduced_copy, s, a, r, s2, a2, p);

    const std::size_t evicted = full_copy.size() - reduced_copy.size();
    const double bound =
        p.alpha * std::fabs(delta) * p.trace_threshold *
            static_cast<double>(evicted) +
        1e-15;
    for (int i = 0; i < 64 * 4; ++i) {
      CHECK(std::fabs(q_a.data()[i] - q_b.data()[i]) <= bound);
    }

    // Advance the real pair of registers on the shared table.
    sarsa_lambda_update(q, full, s, a, r, s2, a2, p);
    reduced = std::move(reduced_copy);
    s = s2;
    a = a2;
  }
}

TEST_CASE("q-learning contracts to the value-iteration fixed point") {
  // Fixed 6-state 2-action deterministic MDP explored by an exact sweep.
  Rng rng(2718);
  const int n_states = 6;
  const int n_actions = 2;
  SampleModel model("chain6", n_states, n_actions);
  int succ[6][2];
  double rew[6][2];
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) {
      succ[s][a] = rng.uniform_int(n_states);
      rew[s][a] = rng.uniform();
      model.record(s, a, succ[s][a], rew[s][a]);
    }
  }
  LearningParams p = params_with(0.05, 0.9, 0.9);
  const QTable q_star = value_iteration(model, p.gamma, 1e-12).q;

  QTable q(n_states, n_actions);
  for (int k = 0; k < 40000; ++k) {
    const int pair = k % (n_states * n_actions);
    const int s = pair / n_actions;
    const int a = pair % n_actions;
    q_learning_update(q, s, a, rew[s][a], succ[s][a], p);
  }
  double max_err = 0.0;
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) {
      max_err = std::max(max_err, std::fabs(q.at(s, a) - q_star.at(s, a)));
    }
  }
  CHECK(max_err < 1e-3);
}

TEST_CASE("terminal transitions drop the bootstrap term") {
  LearningParams p = params_with(0.1, 0.9, 0.9);
  QTable q(3, 2);
  q.at(1, 0) = 50.0;  // would dominate the target if bootstrapped

  SUBCASE("q-learning") {
    const double delta = q_learning_update(q, 0, 0, 2.0, 1, p, true);
    CHECK(delta == 2.0);
  }
  SUBCASE("sarsa") {
    CHECK(sarsa_update(q, 0, 0, 2.0, 1, 0, p, true) == 2.0);
  }
  SUBCASE("true online") {
    TraceRegister traces = TraceRegister::full(TraceRule::dutch);
    ToslCarry carry;
    CHECK(tosl_update(q, traces, carry, 0, 0, 2.0, 1, 0, p, true) == 2.0);
    CHECK(carry.q_old == 0.0);
  }
}

TEST_CASE("value_of and greedy tie-breaking") {
  QTable q(3, 3);
  q.at(0, 0) = 1.0;
  q.at(0, 1) = 3.0;
  q.at(0, 2) = 2.0;
  CHECK(q.value_of(0) == 3.0);
  CHECK(q.greedy_action(0) == 1);

  q.at(1, 0) = 2.0;
  q.at(1, 1) = 2.0;
  CHECK(q.value_of(1) == 2.0);
  CHECK(q.greedy_action(1) == 0);  // lowest index wins ties

  CHECK(q.value_of(2) == 0.0);
}
