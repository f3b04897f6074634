#pragma once

// Minimal stock-and-flow core: named stocks, flows, auxiliaries, constants
// and exogenous inputs, integrated with fixed-step explicit Euler.
//
// Stepping is "game mode": the caller advances one step at a time and may
// inject exogenous values between steps.

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ssd::sd {

/// Rejected model definition (duplicate id, dangling reference, cycle, ...).
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Contract violation while running a valid model: reading an uninjected
/// exogenous value, injecting into a non-exogenous variable, unknown id.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A NaN or infinity was produced. `variable()` names the first offender.
class NumericError : public std::runtime_error {
 public:
  NumericError(std::string variable, double time);
  const std::string& variable() const noexcept { return variable_; }
  double time() const noexcept { return time_; }

 private:
  std::string variable_;
  double time_;
};

enum class VariableKind { stock, flow, auxiliary, constant, exogenous };

std::string_view to_string(VariableKind kind);

/// Input values arrive in the order of `Expression::inputs`.
using ExpressionFn = std::function<double(std::span<const double> inputs, double time)>;

struct Expression {
  std::vector<std::string> inputs;
  ExpressionFn fn;
};

struct VariableDef {
  std::string id;
  VariableKind kind = VariableKind::constant;
  double init = 0.0;
  Expression expression;
  std::vector<std::string> inflows;
  std::vector<std::string> outflows;

  static VariableDef stock(std::string id, double init, std::vector<std::string> inflows,
                           std::vector<std::string> outflows);
  static VariableDef flow(std::string id, std::vector<std::string> inputs, ExpressionFn fn);
  static VariableDef auxiliary(std::string id, std::vector<std::string> inputs, ExpressionFn fn);
  static VariableDef constant(std::string id, double value);
  static VariableDef exogenous(std::string id);
};

/// Reserved id: `get_value(model, state, "time")` returns the simulation time.
inline constexpr std::string_view kTimeId = "time";

class StockFlowModel {
 public:
  /// Validates the definitions and fixes a topological evaluation order for
  /// flows and auxiliaries. Throws ModelError.
  static StockFlowModel build(std::vector<VariableDef> defs, double dt);

  double dt() const noexcept { return dt_; }
  std::size_t size() const noexcept { return defs_.size(); }
  const VariableDef& def(std::size_t index) const { return defs_.at(index); }
  const std::vector<VariableDef>& defs() const noexcept { return defs_; }

  /// Index of `id`, or size() when absent.
  std::size_t find(std::string_view id) const noexcept;
  /// Index of `id`; throws StateError when absent.
  std::size_t index_of(std::string_view id) const;

  /// Flows and auxiliaries in dependency order.
  std::span<const std::size_t> evaluation_order() const noexcept { return order_; }
  std::span<const std::size_t> stocks() const noexcept { return stocks_; }
  std::span<const std::size_t> flows() const noexcept { return flows_; }

 private:
  friend class Evaluator;

  struct Compiled {
    std::vector<std::size_t> inputs;
    std::vector<std::size_t> inflows;
    std::vector<std::size_t> outflows;
  };

  StockFlowModel() = default;

  double dt_ = 1.0;
  std::vector<VariableDef> defs_;
  std::vector<Compiled> compiled_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> stocks_;
  std::vector<std::size_t> flows_;
};

struct SimState {
  double time = 0.0;
  std::vector<double> values;
  /// Per variable; only meaningful for exogenous variables.
  std::vector<char> injected;
  /// Flow values used by the most recent Euler update (empty before the
  /// first step). Indexed like `values`; non-flow entries are 0.
  std::vector<double> applied_flows;
};

/// Stocks and constants at their initial values, then flows and auxiliaries
/// evaluated at t = 0. Exogenous values may be supplied up front; reading one
/// that was not supplied throws StateError.
SimState init_state(const StockFlowModel& model,
                    std::span<const std::pair<std::string, double>> injections = {});

/// Sets an exogenous value. It is visible from the next evaluation on and
/// persists until overwritten.
SimState inject(const StockFlowModel& model, SimState state, std::string_view id, double value);

/// One explicit Euler step: flows are evaluated from the pre-step state
/// (including any injections made since the last step), stocks are updated,
/// time advances by dt and flows/auxiliaries are re-evaluated.
/// Throws NumericError on NaN/inf; the argument state is left untouched.
SimState step(const StockFlowModel& model, SimState state);

/// Overwrites a stock value and re-evaluates flows/auxiliaries at the current
/// time. Used to reconcile stocks with an external representation.
SimState set_stock(const StockFlowModel& model, SimState state, std::string_view id, double value);

double get_value(const StockFlowModel& model, const SimState& state, std::string_view id);

/// Value a flow had in the last Euler update.
double applied_flow(const StockFlowModel& model, const SimState& state, std::string_view id);

}  // namespace ssd::sd
