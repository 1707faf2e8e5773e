#include <doctest.h>

#include <random>

#include "ora/core_model.hpp"
#include "ora/generators.hpp"
#include "test_util.hpp"

using namespace ora;
using testutil::menu;

namespace {

InstanceParams small_params() {
  InstanceParams p;
  p.budget = 10.0;
  p.horizon = 20;
  p.f_bar = 2.0;
  p.b_bar = 1.0;
  p.b_low = 0.1;
  p.lambda_max = 20.0;
  p.l = 0.5;
  p.u = 2.0;
  return p;
}

bool has_kind(const std::vector<Violation>& v, ViolationKind k) {
  for (const Violation& x : v)
    if (x.kind == k) return true;
  return false;
}

}  // namespace

TEST_CASE("best_response picks the larger opportunity-cost score") {
  const Request r = menu({{1.0, 0.5}, {0.4, 0.1}});
  const Action a = best_response(r, 1.0, 10.0);
  CHECK(a.reward == 1.0);
  CHECK(a.consumption == 0.5);

  const Action b = best_response(r, 3.0, 10.0);
  CHECK(b.reward == 0.4);
  CHECK(b.consumption == 0.1);
}

TEST_CASE("best_response on a linear request uses the threshold a > lambda") {
  const Request r = LinearThreshold{0.9, 0.01, 1.0};
  const Action a = best_response(r, 0.5, 10.0);
  CHECK(a.amount == 1.0);
  CHECK(a.reward == doctest::Approx(0.9));
  CHECK(a.consumption == doctest::Approx(1.01));

  const Action lazy = best_response(r, 0.95, 10.0);
  CHECK(lazy.amount == 0.0);
  CHECK(lazy.consumption == doctest::Approx(0.01));

  // a == lambda is a tie; the cheaper level wins
  const Action tie = best_response(r, 0.9, 10.0);
  CHECK(tie.amount == 0.0);
}

TEST_CASE("linear request is clipped to the remaining budget") {
  const Request r = LinearThreshold{0.9, 0.01, 1.0};
  const Budget budget(1.0, 0.6);
  const Action a = best_response(r, 0.0, budget);
  CHECK(a.id == 2);
  CHECK(budget.admits(a.consumption));
  CHECK(a.amount > 0.38);
}

TEST_CASE("null action only when nothing is affordable") {
  const Request r = menu({{1.0, 0.5}, {0.4, 0.1}});
  CHECK(best_response(r, 1.0, 0.05).is_null());
  CHECK(best_response(LinearThreshold{0.5, 0.1, 1.0}, 0.0, 0.05).is_null());
  // exactly b_low left still buys the cheapest action
  CHECK_FALSE(best_response(r, 0.0, Budget(1.0, 0.9)).is_null());
}

TEST_CASE("ties break toward lower consumption, then lower id") {
  const Request r = menu({{1.0, 0.5}, {0.6, 0.1}, {0.6, 0.1}});
  // at lambda = 1 scores are 0.5, 0.5, 0.5
  const Action a = best_response(r, 1.0, 10.0);
  CHECK(a.id == 1);
}

TEST_CASE("best_response maximizes the score among affordable actions") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    FiniteMenu m;
    const int n = 1 + static_cast<int>(uniform_int(rng, 0, 5));
    for (int j = 0; j < n; ++j)
      m.actions.push_back({j, uniform01(rng), 0.1 + 0.9 * uniform01(rng), 0.0});
    const double lambda = 3.0 * uniform01(rng);
    const double remaining = 1.2 * uniform01(rng);
    const Action a = best_response(m, lambda, remaining);
    double best = -1e300;
    bool any = false;
    for (const Action& c : m.actions)
      if (c.consumption <= remaining) {
        any = true;
        best = std::max(best, c.reward - lambda * c.consumption);
      }
    if (!any) {
      CHECK(a.is_null());
    } else {
      REQUIRE_FALSE(a.is_null());
      CHECK(a.consumption <= remaining);
      CHECK(action_score(a, lambda) == best);
    }
  }
}

TEST_CASE("validate_request accepts a well-formed menu") {
  const InstanceParams p = small_params();
  CHECK(validate_request(menu({{0.05, 0.1}, {1.0, 0.5}, {1.5, 1.0}}), p).empty());
}

TEST_CASE("validate_request flags the calendar aging floor") {
  const InstanceParams p = small_params();
  const auto v = validate_request(menu({{0.05, 0.1}, {0.0, 0.0}}), p);
  REQUIRE(has_kind(v, ViolationKind::calendar_aging_floor));
  for (const Violation& x : v)
    if (x.kind == ViolationKind::calendar_aging_floor)
      CHECK(x.message.rfind("calendar aging floor", 0) == 0);
}

TEST_CASE("validate_request flags the density upper bound") {
  InstanceParams p = small_params();
  p.density_bounds = true;
  const auto v = validate_request(menu({{0.05, 0.1}, {2.0, 0.5}}), p);
  REQUIRE(has_kind(v, ViolationKind::density_upper));
  for (const Violation& x : v)
    if (x.kind == ViolationKind::density_upper)
      CHECK(x.message.rfind("density upper bound", 0) == 0);

  p.density_bounds = false;
  CHECK_FALSE(has_kind(validate_request(menu({{0.05, 0.1}, {2.0, 0.5}}), p),
                       ViolationKind::density_upper));
}

TEST_CASE("validate_request requires a do-nothing action") {
  const InstanceParams p = small_params();
  CHECK(has_kind(validate_request(menu({{1.0, 0.5}}), p),
                 ViolationKind::missing_do_nothing));
  CHECK(has_kind(validate_request(FiniteMenu{}, p), ViolationKind::empty_menu));
}

TEST_CASE("validate_params checks the budget relations") {
  InstanceParams p = small_params();
  CHECK(validate_params(p).empty());
  p.b_low = 0.0;
  CHECK_FALSE(validate_params(p).empty());
  p = small_params();
  p.horizon = 200;  // T * b_low = 20 > B
  CHECK_FALSE(validate_params(p).empty());
  p = small_params();
  p.l = 3.0;
  CHECK_FALSE(validate_params(p).empty());
}

TEST_CASE("make_params sets B = rho T and lambda_max = f_bar / rho") {
  const InstanceParams p = make_params(2000, 0.1, 1.0, 1.01, 0.01);
  CHECK(p.budget == doctest::Approx(200.0));
  CHECK(p.lambda_max == doctest::Approx(10.0));
  CHECK(p.rho() == doctest::Approx(0.1));
}

TEST_CASE("budget feasibility uses the running sum") {
  Budget b(1.0);
  double spent = 0.0;
  for (int i = 0; i < 10; ++i) {
    REQUIRE(b.admits(0.1));
    b = b.after(0.1);
    spent += 0.1;
  }
  CHECK(b.spent() == spent);
  CHECK(b.spent() <= b.total() + 1e-15);
  CHECK(Budget::unlimited().admits(1e300));
}

TEST_CASE("ledger accumulates rewards and consumption") {
  Ledger l{5.0};
  l.record({0, 1.0, 0.5, 0.0});
  l.record(null_action());
  CHECK(l.reward == 1.0);
  CHECK(l.consumption == 0.5);
  CHECK(l.rounds == 2);
  CHECK(l.remaining() == 4.5);
}
