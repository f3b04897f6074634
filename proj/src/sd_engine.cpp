#include "ssd/sd_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ssd::sd {

NumericError::NumericError(std::string variable, double time)
    : std::runtime_error("non-finite value in '" + variable + "' at t=" + std::to_string(time)),
      variable_(std::move(variable)),
      time_(time) {}

std::string_view to_string(VariableKind kind) {
  switch (kind) {
    case VariableKind::stock: return "stock";
    case VariableKind::flow: return "flow";
    case VariableKind::auxiliary: return "auxiliary";
    case VariableKind::constant: return "constant";
    case VariableKind::exogenous: return "exogenous";
  }
  return "?";
}

VariableDef VariableDef::stock(std::string id, double init, std::vector<std::string> inflows,
                               std::vector<std::string> outflows) {
  VariableDef d;
  d.id = std::move(id);
  d.kind = VariableKind::stock;
  d.init = init;
  d.inflows = std::move(inflows);
  d.outflows = std::move(outflows);
  return d;
}

VariableDef VariableDef::flow(std::string id, std::vector<std::string> inputs, ExpressionFn fn) {
  VariableDef d;
  d.id = std::move(id);
  d.kind = VariableKind::flow;
  d.expression = {std::move(inputs), std::move(fn)};
  return d;
}

VariableDef VariableDef::auxiliary(std::string id, std::vector<std::string> inputs, ExpressionFn fn) {
  VariableDef d;
  d.id = std::move(id);
  d.kind = VariableKind::auxiliary;
  d.expression = {std::move(inputs), std::move(fn)};
  return d;
}

VariableDef VariableDef::constant(std::string id, double value) {
  VariableDef d;
  d.id = std::move(id);
  d.kind = VariableKind::constant;
  d.init = value;
  return d;
}

VariableDef VariableDef::exogenous(std::string id) {
  VariableDef d;
  d.id = std::move(id);
  d.kind = VariableKind::exogenous;
  return d;
}

namespace {

bool is_computed(VariableKind k) { return k == VariableKind::flow || k == VariableKind::auxiliary; }

}  // namespace

StockFlowModel StockFlowModel::build(std::vector<VariableDef> defs, double dt) {
  if (defs.empty()) throw ModelError("model has no variables");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ModelError("dt must be a positive finite number");

  StockFlowModel m;
  m.dt_ = dt;
  m.defs_ = std::move(defs);
  const std::size_t n = m.defs_.size();

  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = m.defs_[i];
    if (d.id.empty()) throw ModelError("variable with empty id");
    if (d.id == kTimeId) throw ModelError("'time' is a reserved id");
    if (!m.index_.emplace(d.id, i).second) throw ModelError("duplicate variable id '" + d.id + "'");
  }

  auto resolve = [&](const std::string& owner, const std::string& ref) {
    auto it = m.index_.find(ref);
    if (it == m.index_.end())
      throw ModelError("'" + owner + "' references unknown variable '" + ref + "'");
    return it->second;
  };

  m.compiled_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = m.defs_[i];
    auto& c = m.compiled_[i];
    const bool has_expr = static_cast<bool>(d.expression.fn);
    if (is_computed(d.kind)) {
      if (!has_expr) throw ModelError(std::string(to_string(d.kind)) + " '" + d.id + "' has no expression");
    } else if (has_expr || !d.expression.inputs.empty()) {
      throw ModelError(std::string(to_string(d.kind)) + " '" + d.id + "' must not have an expression");
    }
    if (d.kind != VariableKind::stock && (!d.inflows.empty() || !d.outflows.empty()))
      throw ModelError("only stocks have inflows/outflows ('" + d.id + "')");
    if (!std::isfinite(d.init)) throw ModelError("non-finite initial value for '" + d.id + "'");

    for (const auto& ref : d.expression.inputs) c.inputs.push_back(resolve(d.id, ref));
    for (const auto& ref : d.inflows) c.inflows.push_back(resolve(d.id, ref));
    for (const auto& ref : d.outflows) c.outflows.push_back(resolve(d.id, ref));
    for (auto f : c.inflows)
      if (m.defs_[f].kind != VariableKind::flow)
        throw ModelError("inflow '" + m.defs_[f].id + "' of stock '" + d.id + "' is not a flow");
    for (auto f : c.outflows)
      if (m.defs_[f].kind != VariableKind::flow)
        throw ModelError("outflow '" + m.defs_[f].id + "' of stock '" + d.id + "' is not a flow");

    if (d.kind == VariableKind::stock) m.stocks_.push_back(i);
    if (d.kind == VariableKind::flow) m.flows_.push_back(i);
  }

  // Kahn's algorithm over flows/auxiliaries; stocks, constants and exogenous
  // inputs are sources that break dependency chains.
  std::vector<std::size_t> pending(n, 0);
  std::vector<std::vector<std::size_t>> dependents(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_computed(m.defs_[i].kind)) continue;
    for (auto in : m.compiled_[i].inputs) {
      if (!is_computed(m.defs_[in].kind)) continue;
      ++pending[i];
      dependents[in].push_back(i);
    }
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (is_computed(m.defs_[i].kind) && pending[i] == 0) ready.push_back(i);
  // Lowest definition index first, so the order is a pure function of defs.
  std::make_heap(ready.begin(), ready.end(), std::greater<>{});
  while (!ready.empty()) {
    std::pop_heap(ready.begin(), ready.end(), std::greater<>{});
    const auto i = ready.back();
    ready.pop_back();
    m.order_.push_back(i);
    for (auto dep : dependents[i]) {
      if (--pending[dep] == 0) {
        ready.push_back(dep);
        std::push_heap(ready.begin(), ready.end(), std::greater<>{});
      }
    }
  }

  const auto computed = static_cast<std::size_t>(
      std::count_if(m.defs_.begin(), m.defs_.end(), [](const auto& d) { return is_computed(d.kind); }));
  if (m.order_.size() != computed) {
    // Every remaining node sits on or downstream of a cycle; walking
    // unresolved inputs from any of them must revisit a node.
    std::size_t start = 0;
    while (!(is_computed(m.defs_[start].kind) && pending[start] > 0)) ++start;
    std::vector<std::size_t> path;
    std::vector<std::ptrdiff_t> position(n, -1);
    std::size_t cur = start;
    while (position[cur] < 0) {
      position[cur] = static_cast<std::ptrdiff_t>(path.size());
      path.push_back(cur);
      for (auto in : m.compiled_[cur].inputs) {
        if (is_computed(m.defs_[in].kind) && pending[in] > 0) {
          cur = in;
          break;
        }
      }
    }
    std::ostringstream msg;
    msg << "dependency cycle without a stock: ";
    for (auto k = static_cast<std::size_t>(position[cur]); k < path.size(); ++k) msg << m.defs_[path[k]].id << " <- ";
    msg << m.defs_[cur].id;
    throw ModelError(msg.str());
  }
  return m;
}

std::size_t StockFlowModel::find(std::string_view id) const noexcept {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? defs_.size() : it->second;
}

std::size_t StockFlowModel::index_of(std::string_view id) const {
  auto i = find(id);
  if (i == defs_.size()) throw StateError("unknown variable '" + std::string(id) + "'");
  return i;
}

class Evaluator {
 public:
  static void evaluate(const StockFlowModel& m, SimState& s) {
    std::vector<double> args;
    for (auto i : m.order_) {
      const auto& c = m.compiled_[i];
      args.clear();
      for (auto in : c.inputs) {
        if (m.defs_[in].kind == VariableKind::exogenous && !s.injected[in])
          throw StateError("exogenous variable '" + m.defs_[in].id + "' read by '" + m.defs_[i].id +
                           "' before any value was injected");
        args.push_back(s.values[in]);
      }
      const double v = m.defs_[i].expression.fn(args, s.time);
      if (!std::isfinite(v)) throw NumericError(m.defs_[i].id, s.time);
      s.values[i] = v;
    }
  }

  static void integrate(const StockFlowModel& m, SimState& s) {
    s.applied_flows.assign(m.size(), 0.0);
    for (auto f : m.flows_) s.applied_flows[f] = s.values[f];
    for (auto i : m.stocks_) {
      const auto& c = m.compiled_[i];
      double net = 0.0;
      for (auto f : c.inflows) net += s.values[f];
      for (auto f : c.outflows) net -= s.values[f];
      const double v = s.values[i] + m.dt_ * net;
      if (!std::isfinite(v)) throw NumericError(m.defs_[i].id, s.time + m.dt_);
      s.values[i] = v;
    }
  }
};

SimState init_state(const StockFlowModel& model, std::span<const std::pair<std::string, double>> injections) {
  SimState s;
  s.values.assign(model.size(), 0.0);
  s.injected.assign(model.size(), 0);
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto k = model.def(i).kind;
    if (k == VariableKind::stock || k == VariableKind::constant) s.values[i] = model.def(i).init;
  }
  for (const auto& [id, value] : injections) {
    const auto i = model.index_of(id);
    if (model.def(i).kind != VariableKind::exogenous)
      throw StateError("cannot inject into " + std::string(to_string(model.def(i).kind)) + " '" + id + "'");
    s.values[i] = value;
    s.injected[i] = 1;
  }
  Evaluator::evaluate(model, s);
  return s;
}

SimState inject(const StockFlowModel& model, SimState state, std::string_view id, double value) {
  const auto i = model.index_of(id);
  if (model.def(i).kind != VariableKind::exogenous)
    throw StateError("cannot inject into " + std::string(to_string(model.def(i).kind)) + " '" + std::string(id) +
                     "'");
  if (!std::isfinite(value)) throw NumericError(std::string(id), state.time);
  state.values[i] = value;
  state.injected[i] = 1;
  return state;
}

SimState step(const StockFlowModel& model, SimState state) {
  Evaluator::evaluate(model, state);  // pre-step flows see the latest injections
  Evaluator::integrate(model, state);
  state.time += model.dt();
  Evaluator::evaluate(model, state);
  return state;
}

SimState set_stock(const StockFlowModel& model, SimState state, std::string_view id, double value) {
  const auto i = model.index_of(id);
  if (model.def(i).kind != VariableKind::stock) throw StateError("'" + std::string(id) + "' is not a stock");
  if (!std::isfinite(value)) throw NumericError(std::string(id), state.time);
  state.values[i] = value;
  Evaluator::evaluate(model, state);
  return state;
}

double get_value(const StockFlowModel& model, const SimState& state, std::string_view id) {
  if (id == kTimeId) return state.time;
  const auto i = model.index_of(id);
  if (model.def(i).kind == VariableKind::exogenous && !state.injected[i])
    throw StateError("exogenous variable '" + std::string(id) + "' has not been injected");
  return state.values[i];
}

double applied_flow(const StockFlowModel& model, const SimState& state, std::string_view id) {
  const auto i = model.index_of(id);
  if (model.def(i).kind != VariableKind::flow) throw StateError("'" + std::string(id) + "' is not a flow");
  if (state.applied_flows.empty()) throw StateError("no step has been taken yet");
  return state.applied_flows[i];
}

}  // namespace ssd::sd
