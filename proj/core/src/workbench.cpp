#include "scp/workbench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <thread>

#include "json_util.hpp"
#include "scp/system_io.hpp"

namespace scp {

using namespace detail;

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : "; ") + s;
  return out;
}

double bound_value(const json& v, const std::string& path) {
  return v.is_null() ? kUnbounded : as_number(v, path);
}

void apply_axis(SweepPoint& pt, const std::string& path, const json& v) {
  ConstraintSet& cs = pt.constraints;
  auto suffix = [&](std::string_view prefix) -> std::optional<std::string> {
    if (path.size() > prefix.size() && path.compare(0, prefix.size(), prefix) == 0)
      return path.substr(prefix.size());
    return std::nullopt;
  };
  if (path == "p_total_max") cs.p_total_max = bound_value(v, path);
  else if (path == "p_trusted_max") cs.p_trusted_max = bound_value(v, path);
  else if (path == "p_untrusted_max") cs.p_untrusted_max = bound_value(v, path);
  else if (path == "io_bandwidth_max") cs.io_bandwidth_max = bound_value(v, path);
  else if (path == "area_total_max") cs.area_total_max = bound_value(v, path);
  else if (path == "external_io_baseline") cs.external_io_baseline = as_number(v, path);
  else if (path == "inter_chip_delay") cs.inter_chip_delay = as_number(v, path);
  else if (path == "enabled_configs") pt.enabled_configs = config_set_from_json(v, path);
  else if (auto d = suffix("domain_f_min.")) {
    if (v.is_null()) cs.domain_f_min.erase(*d);
    else cs.domain_f_min[*d] = as_number(v, path);
  } else if (auto id = suffix("latency.")) {
    auto it = std::find_if(cs.latency_constraints.begin(), cs.latency_constraints.end(),
                           [&](const LatencyConstraint& lc) { return lc.id == *id; });
    if (it == cs.latency_constraints.end()) throw SchemaError(path, "no latency constraint '" + *id + "' in base");
    it->max_latency = bound_value(v, path);
  } else {
    throw SchemaError(path, "unknown sweep axis");
  }
}

}  // namespace

bool RunRecord::same_outcome(const RunRecord& o) const {
  return constraints == o.constraints && enabled_configs == o.enabled_configs && result == o.result &&
         eval == o.eval;
}

RunRecord run_once(const SystemSpec& spec, const ConstraintSet& constraints, ConfigSet enabled) {
  if (!enabled.contains(Configuration::Trusted) || !enabled.contains(Configuration::Untrusted))
    throw Error("enabled_configs must contain TRUSTED and UNTRUSTED");
  ValidationReport report = validate_system(spec);
  report.merge(validate_constraints(spec, constraints));
  if (!report.ok()) throw Error(join(report.errors));
  for (const auto& m : spec.modules)
    if (m.placement && !enabled.contains(*m.placement))
      throw Error("module '" + m.id + "' is placed in disabled configuration " +
                  std::string(to_string(*m.placement)));

  RunRecord r;
  r.constraints = constraints;
  r.enabled_configs = enabled;
  OptimizerOptions opt;
  opt.enabled = enabled;
  r.result = branch_and_bound(spec, constraints, opt);
  r.eval = r.result.best_eval;
  r.timestamp = utc_now();
  return r;
}

std::vector<SweepPoint> expand_sweep(const SweepSpec& sweep) {
  const SweepPoint base{sweep.base, sweep.enabled_configs};
  if (sweep.axes.empty()) return {base};
  for (const auto& a : sweep.axes)
    if (a.values.empty()) throw SchemaError(a.path, "sweep axis has no values");

  std::vector<SweepPoint> points;
  if (sweep.mode == SweepMode::Zip) {
    const std::size_t n = sweep.axes.front().values.size();
    for (const auto& a : sweep.axes)
      if (a.values.size() != n) throw SchemaError(a.path, "zip axes must have equal length");
    for (std::size_t i = 0; i < n; ++i) {
      SweepPoint pt = base;
      for (const auto& a : sweep.axes) apply_axis(pt, a.path, a.values[i]);
      points.push_back(std::move(pt));
    }
    return points;
  }

  std::vector<std::size_t> idx(sweep.axes.size(), 0);
  while (true) {
    SweepPoint pt = base;
    for (std::size_t k = 0; k < sweep.axes.size(); ++k) apply_axis(pt, sweep.axes[k].path, sweep.axes[k].values[idx[k]]);
    points.push_back(std::move(pt));
    std::size_t k = sweep.axes.size();
    while (k > 0 && ++idx[k - 1] == sweep.axes[k - 1].values.size()) idx[--k] = 0;
    if (k == 0) break;
  }
  return points;
}

std::vector<RunRecord> run_sweep(const SystemSpec& spec, const SweepSpec& sweep, std::size_t workers) {
  if (workers == 0) throw Error("workers must be at least 1");
  const std::vector<SweepPoint> points = expand_sweep(sweep);
  std::vector<RunRecord> records(points.size());
  std::vector<std::string> errors(points.size());
  std::vector<char> failed(points.size(), 0);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < points.size();) {
      try {
        records[i] = run_once(spec, points[i].constraints, points[i].enabled_configs);
        records[i].run_id = i;
      } catch (const std::exception& e) {
        errors[i] = e.what();
        failed[i] = 1;
      }
    }
  };
  const std::size_t n_threads = std::min(workers, points.size());
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < points.size(); ++i)
    if (failed[i]) throw SweepError(i, errors[i]);
  return records;
}

SweepSpec sweep_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("", "sweep must be an object");
  SweepSpec s;
  if (j.contains("base")) s.base = constraints_from_json(j.at("base"), "base");
  if (j.contains("enabled_configs")) s.enabled_configs = config_set_from_json(j.at("enabled_configs"), "enabled_configs");
  if (j.contains("mode")) {
    const std::string mode = as_string(j.at("mode"), "mode");
    if (mode == "product") s.mode = SweepMode::Product;
    else if (mode == "zip") s.mode = SweepMode::Zip;
    else throw SchemaError("mode", "expected \"product\" or \"zip\"");
  }
  if (j.contains("axes")) {
    const json& axes = require_array(j, "axes", "");
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const std::string p = element("axes", i);
      SweepAxis a;
      a.path = get_string(axes[i], "path", p);
      const json& values = require_array(axes[i], "values", p);
      a.values.assign(values.begin(), values.end());
      s.axes.push_back(std::move(a));
    }
  }
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "base" && it.key() != "enabled_configs" && it.key() != "mode" && it.key() != "axes")
      throw SchemaError(it.key(), "unknown field");
  // Surface bad axis paths before any run starts.
  expand_sweep(s);
  return s;
}

json sweep_to_json(const SweepSpec& s) {
  json axes = json::array();
  for (const auto& a : s.axes) axes.push_back({{"path", a.path}, {"values", a.values}});
  return {{"base", constraints_to_json(s.base)},
          {"enabled_configs", config_set_to_json(s.enabled_configs)},
          {"mode", s.mode == SweepMode::Zip ? "zip" : "product"},
          {"axes", axes}};
}

json run_record_to_json(const SystemSpec& spec, const RunRecord& r) {
  return {{"run_id", r.run_id},
          {"timestamp", r.timestamp},
          {"constraints", constraints_to_json(r.constraints)},
          {"enabled_configs", config_set_to_json(r.enabled_configs)},
          {"assignment", r.result.best ? configuration_to_json(spec, *r.result.best) : json(nullptr)},
          {"result", optimizer_result_to_json(spec, r.result)},
          {"eval", r.eval ? evaluation_to_json(*r.eval) : json(nullptr)}};
}

RunRecord run_record_from_json(const SystemSpec& spec, const json& j) {
  RunRecord r;
  r.run_id = static_cast<std::uint64_t>(as_integer(require(j, "run_id", ""), "run_id"));
  r.timestamp = get_string(j, "timestamp", "");
  r.constraints = constraints_from_json(require(j, "constraints", ""), "constraints");
  r.enabled_configs = config_set_from_json(require(j, "enabled_configs", ""), "enabled_configs");
  r.result = optimizer_result_from_json(spec, require(j, "result", ""));
  const json& eval = require(j, "eval", "");
  if (!eval.is_null()) r.eval = evaluation_from_json(eval);
  return r;
}

json report_to_json(const SystemSpec& spec, const std::vector<RunRecord>& records) {
  json out = json::array();
  for (const auto& r : records) out.push_back(run_record_to_json(spec, r));
  return out;
}

RunRecord RunStore::add(RunRecord r) {
  std::lock_guard lock(mu_);
  r.run_id = next_id_++;
  runs_.push_back(r);
  return r;
}

std::optional<RunRecord> RunStore::get(std::uint64_t id) const {
  std::lock_guard lock(mu_);
  for (const auto& r : runs_)
    if (r.run_id == id) return r;
  return std::nullopt;
}

bool RunStore::erase(std::uint64_t id) {
  std::lock_guard lock(mu_);
  auto it = std::find_if(runs_.begin(), runs_.end(), [&](const RunRecord& r) { return r.run_id == id; });
  if (it == runs_.end()) return false;
  runs_.erase(it);
  return true;
}

std::vector<RunRecord> RunStore::list() const {
  std::lock_guard lock(mu_);
  return runs_;
}

std::size_t RunStore::size() const {
  std::lock_guard lock(mu_);
  return runs_.size();
}

json RunStore::to_json(const SystemSpec& spec) const {
  std::lock_guard lock(mu_);
  return {{"next_id", next_id_}, {"runs", report_to_json(spec, runs_)}};
}

void RunStore::load_json(const SystemSpec& spec, const json& j) {
  std::vector<RunRecord> runs;
  for (const auto& r : require_array(j, "runs", "")) runs.push_back(run_record_from_json(spec, r));
  std::uint64_t next = static_cast<std::uint64_t>(as_integer(require(j, "next_id", ""), "next_id"));
  for (const auto& r : runs) next = std::max(next, r.run_id + 1);
  std::lock_guard lock(mu_);
  runs_ = std::move(runs);
  next_id_ = next;
}

}  // namespace scp
