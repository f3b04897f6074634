#include <doctest.h>

#include <cmath>

#include "ssd/sd_engine.hpp"

using namespace ssd::sd;

namespace {

// dS/dt = -k S with k = 0.25
std::vector<VariableDef> decay_model() {
  return {VariableDef::constant("k", 0.25), VariableDef::stock("S", 8.0, {}, {"out"}),
          VariableDef::flow("out", {"S", "k"}, [](auto a, double) { return a[0] * a[1]; })};
}

}  // namespace

TEST_CASE("explicit Euler matches the closed form of the discrete recurrence") {
  const auto m = StockFlowModel::build(decay_model(), 1.0);
  auto s = init_state(m);
  for (int i = 1; i <= 10; ++i) {
    s = step(m, s);
    CHECK(get_value(m, s, "S") == doctest::Approx(8.0 * std::pow(0.75, i)).epsilon(1e-14));
    CHECK(get_value(m, s, "time") == i);
  }
  CHECK(applied_flow(m, s, "out") == doctest::Approx(8.0 * std::pow(0.75, 9) * 0.25));
}

TEST_CASE("dt scales the update") {
  const auto m = StockFlowModel::build(decay_model(), 0.5);
  auto s = step(m, init_state(m));
  CHECK(get_value(m, s, "S") == 8.0 - 0.5 * 2.0);
  CHECK(s.time == 0.5);
}

TEST_CASE("definition errors") {
  SUBCASE("duplicate id") {
    auto d = decay_model();
    d.push_back(VariableDef::constant("k", 1.0));
    CHECK_THROWS_AS(StockFlowModel::build(d, 1.0), ModelError);
  }
  SUBCASE("dangling reference") {
    auto d = decay_model();
    d.push_back(VariableDef::auxiliary("a", {"nope"}, [](auto, double) { return 0.0; }));
    CHECK_THROWS_AS(StockFlowModel::build(d, 1.0), ModelError);
  }
  SUBCASE("stock fed by a non-flow") {
    std::vector<VariableDef> d{VariableDef::constant("c", 1.0), VariableDef::stock("S", 0.0, {"c"}, {})};
    CHECK_THROWS_AS(StockFlowModel::build(d, 1.0), ModelError);
  }
  SUBCASE("algebraic cycle is named") {
    std::vector<VariableDef> d{VariableDef::auxiliary("a", {"b"}, [](auto x, double) { return x[0]; }),
                               VariableDef::auxiliary("b", {"a"}, [](auto x, double) { return x[0]; })};
    try {
      StockFlowModel::build(d, 1.0);
      FAIL("expected ModelError");
    } catch (const ModelError& e) {
      const std::string what = e.what();
      CHECK(what.find("a") != std::string::npos);
      CHECK(what.find("b") != std::string::npos);
    }
  }
  SUBCASE("reserved id") {
    std::vector<VariableDef> d{VariableDef::constant("time", 1.0)};
    CHECK_THROWS_AS(StockFlowModel::build(d, 1.0), ModelError);
  }
  SUBCASE("non-positive dt") { CHECK_THROWS_AS(StockFlowModel::build(decay_model(), 0.0), ModelError); }
}

TEST_CASE("a stock feedback loop is not a cycle") {
  std::vector<VariableDef> d{VariableDef::stock("S", 1.0, {"in"}, {}),
                             VariableDef::flow("in", {"S"}, [](auto a, double) { return a[0]; })};
  const auto m = StockFlowModel::build(d, 1.0);
  CHECK(get_value(m, step(m, init_state(m)), "S") == 2.0);
}

TEST_CASE("evaluation order respects dependencies") {
  std::vector<VariableDef> d{VariableDef::auxiliary("c", {"b"}, [](auto a, double) { return a[0] + 1; }),
                             VariableDef::auxiliary("b", {"a"}, [](auto a, double) { return a[0] * 2; }),
                             VariableDef::constant("a", 3.0)};
  const auto m = StockFlowModel::build(d, 1.0);
  CHECK(get_value(m, init_state(m), "c") == 7.0);
  const auto order = m.evaluation_order();
  CHECK(order.size() == 2);
  CHECK(m.def(order[0]).id == "b");
}

TEST_CASE("exogenous values") {
  std::vector<VariableDef> d{VariableDef::exogenous("x"), VariableDef::stock("S", 0.0, {"in"}, {}),
                             VariableDef::flow("in", {"x"}, [](auto a, double) { return a[0]; })};
  const auto m = StockFlowModel::build(d, 1.0);
  CHECK_THROWS_AS(init_state(m), StateError);

  const std::pair<std::string, double> inj[] = {{"x", 2.0}};
  auto s = init_state(m, inj);
  s = step(m, s);
  CHECK(get_value(m, s, "S") == 2.0);
  // Injection before the step is what the step uses.
  s = step(m, inject(m, s, "x", 5.0));
  CHECK(get_value(m, s, "S") == 7.0);
  // Values persist until overwritten.
  s = step(m, s);
  CHECK(get_value(m, s, "S") == 12.0);

  CHECK_THROWS_AS(inject(m, s, "S", 1.0), StateError);
  CHECK_THROWS_AS(inject(m, s, "missing", 1.0), StateError);
}

TEST_CASE("non-finite values raise and leave the input untouched") {
  std::vector<VariableDef> d{VariableDef::stock("S", 1.0, {"in"}, {}),
                             VariableDef::flow("in", {"S"}, [](auto a, double t) { return t >= 1 ? NAN : a[0]; })};
  const auto m = StockFlowModel::build(d, 1.0);
  const auto s0 = init_state(m);
  CHECK_THROWS_AS(step(m, s0), NumericError);
  CHECK(get_value(m, s0, "S") == 1.0);
  CHECK(s0.time == 0.0);
  try {
    step(m, s0);
  } catch (const NumericError& e) {
    CHECK(e.variable() == "in");
  }
}

TEST_CASE("set_stock re-evaluates dependents") {
  const auto m = StockFlowModel::build(decay_model(), 1.0);
  auto s = set_stock(m, init_state(m), "S", 4.0);
  CHECK(get_value(m, s, "out") == 1.0);
  CHECK_THROWS_AS(set_stock(m, s, "k", 1.0), StateError);
}

TEST_CASE("time-dependent expressions see the step time") {
  std::vector<VariableDef> d{VariableDef::auxiliary("t2", {}, [](auto, double t) { return 2 * t; })};
  const auto m = StockFlowModel::build(d, 1.0);
  auto s = init_state(m);
  s = step(m, step(m, s));
  CHECK(get_value(m, s, "t2") == 4.0);
}
