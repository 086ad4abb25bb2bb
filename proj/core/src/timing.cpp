#include "scp/timing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scp/error.hpp"

namespace scp {

namespace {

constexpr double kNoPath = -std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = SIZE_MAX;

// Arrival times are tracked separately for paths launched by primary inputs
// and by register outputs so the sequential overhead is charged once.
struct Arrival {
  double from_pi = kNoPath;
  double from_reg = kNoPath;
  std::size_t prev_pi = kNone;   // input net on the longest PI-launched path
  std::size_t prev_reg = kNone;  // input net on the longest register-launched path
};

}  // namespace

TimingReport sta(const Netlist& netlist, const Technology& tech, double target_period) {
  const NetlistGraph graph(netlist);
  std::vector<Arrival> arr(graph.net_count());
  for (auto net : graph.pi_nets()) arr[net].from_pi = 0.0;
  for (auto net : graph.dff_q_nets()) arr[net].from_reg = 0.0;

  for (auto g : graph.topo_order()) {
    const double delay = tech[netlist.gates[g].type].delay;
    Arrival& out = arr[graph.gate_output(g)];
    for (auto in : graph.gate_inputs(g)) {
      if (arr[in].from_pi + delay > out.from_pi) {
        out.from_pi = arr[in].from_pi + delay;
        out.prev_pi = in;
      }
      if (arr[in].from_reg + delay > out.from_reg) {
        out.from_reg = arr[in].from_reg + delay;
        out.prev_reg = in;
      }
    }
  }

  double worst = kNoPath;
  std::size_t end_net = kNone;
  bool end_from_reg = false;
  auto consider = [&](std::size_t net, double delay, bool from_reg) {
    if (delay > worst) {
      worst = delay;
      end_net = net;
      end_from_reg = from_reg;
    }
  };
  const double ovh = tech.seq_overhead;
  for (auto net : graph.po_nets()) {
    consider(net, arr[net].from_pi, false);
    consider(net, arr[net].from_reg + ovh, true);
  }
  for (auto net : graph.dff_d_nets()) {
    consider(net, arr[net].from_pi + ovh, false);
    consider(net, arr[net].from_reg + ovh, true);
  }

  TimingReport report;
  if (end_net == kNone) {
    report.slack = target_period;
    return report;
  }
  report.critical_delay = worst;
  report.slack = target_period - worst;
  for (std::size_t net = end_net; net != kNone;) {
    const auto& d = graph.driver(net);
    if (d.kind != NetlistGraph::DriverKind::Gate) break;
    report.critical_path.push_back(netlist.gates[d.index].id);
    net = end_from_reg ? arr[net].prev_reg : arr[net].prev_pi;
  }
  std::reverse(report.critical_path.begin(), report.critical_path.end());
  return report;
}

FrequencySearch find_max_frequency(const SlackOracle& oracle) {
  double period = 0.0;
  for (int iter = 1; iter <= kMaxPeriodIterations; ++iter) {
    const double slack = oracle(period);
    if (slack >= -kSlackTolerance) {
      if (!(period > 0.0))
        throw Error("max-frequency search: timing met at zero period (no timing path)");
      return {1.0 / period, period, slack, iter};
    }
    period -= slack;
  }
  throw Error("max-frequency search did not converge within " +
              std::to_string(kMaxPeriodIterations) + " iterations");
}

FrequencySearch find_max_frequency(const Netlist& netlist, const Technology& tech) {
  // The delay model is period-independent; only the slack depends on the
  // target, so the critical delay is computed once.
  const double critical = sta(netlist, tech, 0.0).critical_delay;
  return find_max_frequency([critical](double period) { return period - critical; });
}

double estimate_area(const Netlist& netlist, const Technology& tech) {
  double area = 0.0;
  for (const auto& g : netlist.gates) area += tech[g.type].area;
  area += static_cast<double>(netlist.dffs.size()) * tech[CellType::DFF].area;
  return area;
}

PowerEstimate estimate_power(const Netlist& netlist, const Technology& tech, double frequency) {
  if (!(frequency > 0.0)) throw Error("estimate_power: frequency must be > 0");
  double leakage = 0.0;
  double energy = 0.0;
  for (const auto& g : netlist.gates) {
    leakage += tech[g.type].leakage;
    energy += tech[g.type].switch_energy;
  }
  const auto dffs = static_cast<double>(netlist.dffs.size());
  leakage += dffs * tech[CellType::DFF].leakage;
  energy += dffs * tech[CellType::DFF].switch_energy;
  return {tech.activity_factor * frequency * energy, leakage};
}

}  // namespace scp
