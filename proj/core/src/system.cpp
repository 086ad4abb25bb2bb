#include "scp/system.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace scp {

namespace {

template <typename T>
std::optional<std::size_t> find_by_id(const std::vector<T>& items, std::string_view id) {
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i].id == id) return i;
  return std::nullopt;
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

std::optional<std::size_t> SystemSpec::module_index(std::string_view id) const {
  return find_by_id(modules, id);
}
std::optional<std::size_t> SystemSpec::domain_index(std::string_view id) const {
  return find_by_id(domains, id);
}
std::optional<std::size_t> SystemSpec::channel_index(std::string_view id) const {
  return find_by_id(channels, id);
}

void ValidationReport::merge(const ValidationReport& other) {
  errors.insert(errors.end(), other.errors.begin(), other.errors.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

ValidationReport validate_system(const SystemSpec& spec) {
  ValidationReport report;
  auto error = [&](const std::string& msg) { report.errors.push_back(msg); };
  auto warn = [&](const std::string& msg) { report.warnings.push_back(msg); };

  if (spec.modules.empty()) error("system has no modules");

  std::set<std::string> module_ids;
  for (const auto& m : spec.modules) {
    const std::string where = "module '" + m.id + "'";
    if (m.id.empty()) error("module with empty id");
    if (!module_ids.insert(m.id).second) error(where + ": duplicate id");
    if (!(m.criticality >= 0.0) || !std::isfinite(m.criticality))
      error(where + ": criticality must be a non-negative number");
    if (!spec.domain_index(m.clock_domain))
      error(where + ": unknown clock domain '" + m.clock_domain + "'");

    for (auto c : kAllConfigurations) {
      const auto& cm = m.characterization[c];
      const std::string at = where + " " + std::string(to_string(c));
      if (!(cm.fmax > 0.0) || !std::isfinite(cm.fmax)) error(at + ": fmax must be > 0");
      if (!(cm.area > 0.0) || !std::isfinite(cm.area)) error(at + ": area must be > 0");
      if (!finite_nonneg(cm.p_dyn_at_fmax)) error(at + ": p_dyn_at_fmax must be >= 0");
      if (!finite_nonneg(cm.p_static)) error(at + ": p_static must be >= 0");
    }
    const double f_untrusted = m.characterization[Configuration::Untrusted].fmax;
    for (auto c : {Configuration::UntrustedKeyLocked, Configuration::UntrustedFsmObf}) {
      if (m.characterization[c].fmax > f_untrusted)
        warn(where + ": " + std::string(to_string(c)) + " fmax exceeds UNTRUSTED fmax");
    }
  }

  std::set<std::string> domain_ids;
  std::map<std::string, int> membership;
  for (const auto& d : spec.domains) {
    if (!domain_ids.insert(d.id).second) error("domain '" + d.id + "': duplicate id");
    if (d.members.empty()) warn("domain '" + d.id + "' has no members");
    for (const auto& member : d.members) {
      auto idx = spec.module_index(member);
      if (!idx) {
        error("domain '" + d.id + "': unknown module '" + member + "'");
        continue;
      }
      ++membership[member];
      if (spec.modules[*idx].clock_domain != d.id)
        error("domain '" + d.id + "' lists module '" + member +
              "' whose clock_domain is '" + spec.modules[*idx].clock_domain + "'");
    }
  }
  for (const auto& m : spec.modules) {
    const int count = membership.count(m.id) ? membership[m.id] : 0;
    if (count == 0) error("module '" + m.id + "' belongs to no domain member list");
    if (count > 1) error("module '" + m.id + "' belongs to more than one domain");
  }

  std::set<std::string> channel_ids;
  for (const auto& ch : spec.channels) {
    const std::string where = "channel '" + ch.id + "'";
    if (!channel_ids.insert(ch.id).second) error(where + ": duplicate id");
    if (!spec.module_index(ch.src)) error(where + ": unknown module '" + ch.src + "'");
    if (!spec.module_index(ch.dst)) error(where + ": unknown module '" + ch.dst + "'");
    if (ch.src == ch.dst) error(where + ": src and dst must differ");
    if (!finite_nonneg(ch.bandwidth)) error(where + ": bandwidth must be >= 0");
    if (!finite_nonneg(ch.latency_on_chip)) error(where + ": latency must be >= 0");
  }

  const auto& ex = spec.exposure;
  for (auto c : kAllConfigurations) {
    if (!(ex[c] >= 0.0 && ex[c] <= 1.0))
      error("exposure of " + std::string(to_string(c)) + " must lie in [0, 1]");
    if (ex[Configuration::Trusted] > ex[c])
      error("trusted exposure must not exceed " + std::string(to_string(c)) + " exposure");
  }
  if (ex[Configuration::Untrusted] != 1.0) error("untrusted exposure must equal 1");

  return report;
}

ValidationReport validate_constraints(const SystemSpec& spec, const ConstraintSet& cs) {
  ValidationReport report;
  auto error = [&](const std::string& msg) { report.errors.push_back(msg); };
  auto positive = [&](const char* name, double v) {
    if (!(v > 0.0)) error(std::string(name) + " must be > 0");
  };

  for (const auto& [domain, f] : cs.domain_f_min) {
    if (!spec.domain_index(domain)) error("domain_f_min: unknown domain '" + domain + "'");
    if (!(f > 0.0)) error("domain_f_min['" + domain + "'] must be > 0");
  }
  positive("p_total_max", cs.p_total_max);
  positive("p_trusted_max", cs.p_trusted_max);
  positive("p_untrusted_max", cs.p_untrusted_max);
  positive("io_bandwidth_max", cs.io_bandwidth_max);
  positive("area_total_max", cs.area_total_max);
  if (!finite_nonneg(cs.external_io_baseline)) error("external_io_baseline must be >= 0");
  if (!finite_nonneg(cs.inter_chip_delay)) error("inter_chip_delay must be >= 0");

  std::set<std::string> ids;
  for (const auto& lc : cs.latency_constraints) {
    const std::string where = "latency constraint '" + lc.id + "'";
    if (!ids.insert(lc.id).second) error(where + ": duplicate id");
    if (!(lc.max_latency > 0.0)) error(where + ": max_latency must be > 0");
    if (lc.path.empty()) {
      error(where + ": path is empty");
      continue;
    }
    const Channel* prev = nullptr;
    for (const auto& ch_id : lc.path) {
      auto idx = spec.channel_index(ch_id);
      if (!idx) {
        error(where + ": unknown channel '" + ch_id + "'");
        prev = nullptr;
        continue;
      }
      const Channel& ch = spec.channels[*idx];
      if (prev && prev->dst != ch.src)
        error(where + ": path is disconnected between '" + prev->id + "' and '" + ch.id + "'");
      prev = &ch;
    }
  }
  return report;
}

ValidationReport validate_configuration(const SystemSpec& spec, const SystemConfiguration& cfg) {
  ValidationReport report;
  if (cfg.size() != spec.modules.size()) {
    std::ostringstream os;
    os << "configuration assigns " << cfg.size() << " modules, system has "
       << spec.modules.size();
    report.errors.push_back(os.str());
    return report;
  }
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    const auto& m = spec.modules[i];
    if (m.placement && *m.placement != cfg[i])
      report.errors.push_back("module '" + m.id + "' is fixed to " +
                              std::string(to_string(*m.placement)));
  }
  return report;
}

}  // namespace scp
