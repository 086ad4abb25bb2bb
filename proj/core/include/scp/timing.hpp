#pragma once

#include <functional>
#include <string>
#include <vector>

#include "scp/netlist.hpp"
#include "scp/technology.hpp"

namespace scp {

struct TimingReport {
  double critical_delay = 0.0;             // s
  std::vector<std::string> critical_path;  // gate ids, source to sink
  double slack = 0.0;                      // target_period - critical_delay
};

/// Longest path from any PI or DFF q to any PO or DFF d. Gate delays add
/// along the path; seq_overhead is added once when the path starts or ends
/// at a register.
TimingReport sta(const Netlist& netlist, const Technology& tech, double target_period);

/// Slack reported by a timing oracle at a target clock period.
using SlackOracle = std::function<double(double period)>;

struct FrequencySearch {
  double fmax = 0.0;    // Hz
  double period = 0.0;  // s
  double slack = 0.0;   // slack at `period`
  int iterations = 0;
};

inline constexpr int kMaxPeriodIterations = 32;
inline constexpr double kSlackTolerance = 1e-15;

/// Period relaxation from zero: p <- p - slack(p) until slack(p) >= -1e-15 s.
/// Throws Error after 32 iterations or when the converged period is not
/// positive.
FrequencySearch find_max_frequency(const SlackOracle& oracle);
FrequencySearch find_max_frequency(const Netlist& netlist, const Technology& tech);

/// Sum of cell areas over gates and DFFs. Independent of frequency.
double estimate_area(const Netlist& netlist, const Technology& tech);

struct PowerEstimate {
  double p_dyn = 0.0;     // W
  double p_static = 0.0;  // W
};

/// p_static = sum of leakage; p_dyn = activity * f * sum of switch energy.
PowerEstimate estimate_power(const Netlist& netlist, const Technology& tech, double frequency);

}  // namespace scp
