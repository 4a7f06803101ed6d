#include <cmath>
#include <cstring>
#include <string>

#include <doctest.h>

#include "bubblebs/black_scholes.hpp"
#include "bubblebs/bubblebs.h"
#include "bubblebs/series_pricer.hpp"

namespace {

struct ModelGuard {
  bbs_model* ptr = nullptr;
  ~ModelGuard() { bbs_model_destroy(ptr); }
};

bbs_model* make_default(ModelGuard& guard) {
  REQUIRE(bbs_model_create(0.2, 0.8, 0.4, 100.0, 1.0, 0.16, 0.25, 0.75,
                           &guard.ptr) == BBS_OK);
  return guard.ptr;
}

}  // namespace

TEST_CASE("c api: model creation and validation codes") {
  ModelGuard guard;
  make_default(guard);

  bbs_model* bad = nullptr;
  CHECK(bbs_model_create(0.2, 0.8, -0.4, 100.0, 1.0, 0.1, 0.25, 0.75, &bad) ==
        BBS_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(std::string(bbs_last_error()).find("sigma") != std::string::npos);

  CHECK(bbs_model_create(0.2, 0.8, 0.4, 100.0, 1.0, 0.1, 0.5, 0.25, &bad) ==
        BBS_ERR_INVALID_ARGUMENT);
  CHECK(bbs_model_create(0.2, 0.8, 0.4, 100.0, 1.0, 0.1, 0.25, 0.75,
                         nullptr) == BBS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("c api: price matches the core library and terms add up") {
  ModelGuard guard;
  bbs_model* model = make_default(guard);

  bbs_quote* quote = nullptr;
  REQUIRE(bbs_price(model, 100.0, 0.5, BBS_METHOD_EXACT, 12, &quote) == BBS_OK);

  bubblebs::MarketParams mp{0.2, 0.8, 0.4, 100.0, 1.0};
  bubblebs::SquareBubble bubble{0.16, 0.25, 0.75};
  bubblebs::SeriesQuote reference =
      bubblebs::exact_series(100.0, 0.5, mp, bubble, 12);

  CHECK(bbs_quote_value(quote) == reference.price);
  CHECK(bbs_quote_regime(quote) == BBS_REGIME_IN_BUBBLE);
  CHECK(bbs_quote_method(quote) == BBS_METHOD_EXACT);
  CHECK(bbs_quote_rate_basis(quote) == BBS_RATE_INTEREST);
  REQUIRE(bbs_quote_num_terms(quote) ==
          static_cast<int>(reference.terms.size()));

  double sum = 0.0;
  for (int i = 0; i < bbs_quote_num_terms(quote); ++i) {
    int order = 0;
    double weight = 0.0, contribution = 0.0;
    REQUIRE(bbs_quote_term(quote, i, &order, &weight, &contribution) == BBS_OK);
    CHECK(order == reference.terms[i].order);
    CHECK(weight == reference.terms[i].weight);
    sum += contribution;
  }
  CHECK(sum == doctest::Approx(bbs_quote_value(quote)).epsilon(1e-12));
  CHECK(bbs_quote_term(quote, 99, nullptr, nullptr, nullptr) ==
        BBS_ERR_INVALID_ARGUMENT);
  bbs_quote_destroy(quote);
}

TEST_CASE("c api: guard errors surface as codes") {
  ModelGuard pole_guard;
  REQUIRE(bbs_model_create(0.2, 0.8, 0.4, 100.0, 1.0, 0.4 * (1.0 - 1e-13),
                           0.25, 0.75, &pole_guard.ptr) == BBS_OK);
  bbs_quote* quote = nullptr;
  CHECK(bbs_price(pole_guard.ptr, 100.0, 0.5, BBS_METHOD_EXACT, 12, &quote) ==
        BBS_ERR_SINGULAR_BUBBLE);

  ModelGuard free_guard;
  REQUIRE(bbs_model_create(0.2, 0.8, 0.4, 100.0, 1.0, 0.0, 0.25, 0.75,
                           &free_guard.ptr) == BBS_OK);
  CHECK(bbs_price(free_guard.ptr, 100.0, 0.5, BBS_METHOD_DUAL_EXACT, 12,
                  &quote) == BBS_ERR_ZERO_BUBBLE);

  ModelGuard guard;
  bbs_model* model = make_default(guard);
  CHECK(bbs_price(model, 100.0, 2.0, BBS_METHOD_EXACT, 12, &quote) ==
        BBS_ERR_OUT_OF_HORIZON);
  CHECK(bbs_price(model, 100.0, 0.5, BBS_METHOD_EXACT, 30, &quote) ==
        BBS_ERR_ORDER_TOO_HIGH);
  CHECK(bbs_model_set_max_order(model, 30) == BBS_OK);
  CHECK(bbs_price(model, 100.0, 0.5, BBS_METHOD_EXACT, 30, &quote) == BBS_OK);
  bbs_quote_destroy(quote);
  CHECK(bbs_model_set_max_order(model, 64) == BBS_ERR_ORDER_TOO_HIGH);
}

TEST_CASE("c api: potential, regime, clock, dual") {
  ModelGuard guard;
  bbs_model* model = make_default(guard);

  double v0 = 0.0, v0_star = 0.0, h = 0.0, h_star = 0.0;
  REQUIRE(bbs_model_potential(model, &v0, &v0_star, &h, &h_star) == BBS_OK);
  CHECK(v0 == doctest::Approx(-0.4).epsilon(1e-14));
  CHECK(v0_star == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(h == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(h_star == doctest::Approx(2.5).epsilon(1e-15));

  bbs_regime regime;
  REQUIRE(bbs_model_regime(model, 0.5, &regime) == BBS_OK);
  CHECK(regime == BBS_REGIME_IN_BUBBLE);
  CHECK(bbs_model_regime(model, 9.0, &regime) == BBS_ERR_OUT_OF_HORIZON);

  double clock = 0.0;
  REQUIRE(bbs_model_interaction_clock(model, 0.9, &clock) == BBS_OK);
  CHECK(clock == doctest::Approx(0.5).epsilon(1e-15));

  bbs_model* dual = nullptr;
  REQUIRE(bbs_model_dual(model, &dual) == BBS_OK);
  double dual_v0 = 0.0;
  REQUIRE(bbs_model_potential(dual, &dual_v0, nullptr, nullptr, nullptr) ==
          BBS_OK);
  CHECK(dual_v0 == doctest::Approx(-1.0).epsilon(1e-12));  // v0* of the base
  bbs_model_destroy(dual);
}

TEST_CASE("c api: closed form and derivatives") {
  ModelGuard guard;
  bbs_model* model = make_default(guard);
  bubblebs::MarketParams mp{0.2, 0.8, 0.4, 100.0, 1.0};

  double price = 0.0;
  REQUIRE(bbs_call_price(model, 100.0, 0.5, BBS_RATE_INTEREST, &price) ==
          BBS_OK);
  CHECK(price == bubblebs::call_price(100.0, 0.5, mp));

  double gamma = 0.0;
  REQUIRE(bbs_call_derivative(model, 2, 100.0, 0.5, BBS_RATE_DRIFT, &gamma) ==
          BBS_OK);
  CHECK(gamma == bubblebs::call_s_derivative(2, 100.0, 0.5, mp,
                                             bubblebs::RateBasis::Drift));
  CHECK(bbs_call_price(model, -1.0, 0.5, BBS_RATE_INTEREST, &price) ==
        BBS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("c api: pde solve, sample, node access") {
  ModelGuard guard;
  bbs_model* model = make_default(guard);

  bbs_grid* grid = nullptr;
  REQUIRE(bbs_pde_solve(model, 0.0, 400.0, 201, 200, BBS_PDE_LOW_ENERGY, 0,
                        &grid) == BBS_OK);
  CHECK(bbs_grid_num_s(grid) == 201);
  CHECK(bbs_grid_num_tau(grid) >= 201);

  double value = 0.0;
  REQUIRE(bbs_pde_sample(grid, 100.0, 0.5, &value) == BBS_OK);
  CHECK(value > 0.0);
  CHECK(bbs_pde_sample(grid, 500.0, 0.5, &value) == BBS_ERR_OUT_OF_GRID);

  double s = 0.0, tau = 0.0, node = 0.0;
  REQUIRE(bbs_grid_node(grid, 0, 75, &s, &tau, &node) == BBS_OK);
  CHECK(s == doctest::Approx(150.0));
  CHECK(tau == 0.0);
  CHECK(node == 50.0);  // payoff of the 150 node
  bbs_grid_destroy(grid);

  CHECK(bbs_pde_solve(model, 0.0, 400.0, 10, 200, BBS_PDE_LOW_ENERGY, 0,
                      &grid) == BBS_ERR_GRID_TOO_COARSE);
}

TEST_CASE("c api: triangle rows as text") {
  char buffer[256];
  REQUIRE(bbs_triangle_row(6, buffer, sizeof(buffer)) == BBS_OK);
  CHECK(std::string(buffer) == "1 31 90 65 15 1");
  REQUIRE(bbs_triangle_row(1, buffer, sizeof(buffer)) == BBS_OK);
  CHECK(std::string(buffer) == "1");
  REQUIRE(bbs_triangle_entry(7, 3, buffer, sizeof(buffer)) == BBS_OK);
  CHECK(std::string(buffer) == "301");

  CHECK(bbs_triangle_row(6, buffer, 4) == BBS_ERR_BUFFER_TOO_SMALL);
  CHECK(bbs_triangle_entry(3, 9, buffer, sizeof(buffer)) ==
        BBS_ERR_INVALID_ARGUMENT);
  CHECK(bbs_triangle_row(200, buffer, sizeof(buffer)) == BBS_ERR_OVERFLOW);
}

TEST_CASE("c api: status messages are stable strings") {
  CHECK(std::strcmp(bbs_status_message(BBS_OK), "ok") == 0);
  CHECK(std::string(bbs_status_message(BBS_ERR_SINGULAR_BUBBLE))
            .find("SingularBubble") != std::string::npos);
  CHECK(std::string(bbs_status_message(BBS_ERR_STIFF_REGIME))
            .find("StiffRegime") != std::string::npos);
}
