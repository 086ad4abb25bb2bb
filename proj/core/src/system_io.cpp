#include "scp/system_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json_util.hpp"

namespace scp {

using namespace detail;

namespace {

Configuration parse_configuration(const json& v, const std::string& path) {
  const std::string name = as_string(v, path);
  auto c = configuration_from_string(name);
  if (!c) throw SchemaError(path, "unknown configuration '" + name + "'");
  return *c;
}

ExposureTable exposure_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  ExposureTable table = ExposureTable::defaults();
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto c = configuration_from_string(it.key());
    if (!c) throw SchemaError(field(path, it.key()), "unknown configuration");
    table[*c] = as_number(it.value(), field(path, it.key()));
  }
  return table;
}

}  // namespace

json characterization_to_json(const ModuleCharacterization& mc) {
  json out = json::object();
  for (auto c : kAllConfigurations) {
    const auto& m = mc[c];
    out[std::string(to_string(c))] = {
        {"fmax", m.fmax}, {"area", m.area}, {"p_dyn_at_fmax", m.p_dyn_at_fmax},
        {"p_static", m.p_static}};
  }
  return out;
}

ModuleCharacterization characterization_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  ModuleCharacterization mc;
  for (auto c : kAllConfigurations) {
    const std::string key(to_string(c));
    const json& entry = require(j, key, path);
    const std::string at = field(path, key);
    mc[c].fmax = get_number(entry, "fmax", at);
    mc[c].area = get_number(entry, "area", at);
    mc[c].p_dyn_at_fmax = get_number(entry, "p_dyn_at_fmax", at);
    mc[c].p_static = get_number(entry, "p_static", at);
  }
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!configuration_from_string(it.key()))
      throw SchemaError(field(path, it.key()), "unknown configuration");
  return mc;
}

json system_to_json(const SystemSpec& spec) {
  json modules = json::array();
  for (const auto& m : spec.modules) {
    json jm = {{"id", m.id}, {"clock_domain", m.clock_domain}, {"criticality", m.criticality}};
    if (m.placement) jm["placement"] = std::string(to_string(*m.placement));
    jm["characterization"] = characterization_to_json(m.characterization);
    modules.push_back(std::move(jm));
  }
  json domains = json::array();
  for (const auto& d : spec.domains) domains.push_back({{"id", d.id}, {"members", d.members}});
  json channels = json::array();
  for (const auto& ch : spec.channels)
    channels.push_back({{"id", ch.id}, {"src", ch.src}, {"dst", ch.dst},
                        {"bandwidth", ch.bandwidth}, {"latency", ch.latency_on_chip}});
  json exposure = json::object();
  for (auto c : kAllConfigurations) exposure[std::string(to_string(c))] = spec.exposure[c];
  return {{"modules", modules}, {"domains", domains}, {"channels", channels},
          {"exposure", exposure}};
}

SystemSpec system_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("", "system document must be a JSON object");
  SystemSpec spec;

  const json& modules = require_array(j, "modules", "");
  if (modules.empty()) throw SchemaError("modules", "module list is empty");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const std::string at = element("modules", i);
    const json& jm = modules[i];
    ModuleSpec m;
    m.id = get_string(jm, "id", at);
    if (!ids.insert(m.id).second) throw SchemaError(field(at, "id"), "duplicate id '" + m.id + "'");
    m.clock_domain = get_string(jm, "clock_domain", at);
    m.criticality = get_number(jm, "criticality", at);
    if (auto it = jm.find("placement"); it != jm.end() && !it->is_null())
      m.placement = parse_configuration(*it, field(at, "placement"));
    m.characterization = characterization_from_json(require(jm, "characterization", at),
                                                    field(at, "characterization"));
    spec.modules.push_back(std::move(m));
  }

  const json& domains = require_array(j, "domains", "");
  std::set<std::string> domain_ids;
  for (std::size_t i = 0; i < domains.size(); ++i) {
    const std::string at = element("domains", i);
    ClockDomain d;
    d.id = get_string(domains[i], "id", at);
    if (!domain_ids.insert(d.id).second)
      throw SchemaError(field(at, "id"), "duplicate id '" + d.id + "'");
    d.members = get_string_list(domains[i], "members", at);
    spec.domains.push_back(std::move(d));
  }

  if (auto it = j.find("channels"); it != j.end()) {
    if (!it->is_array()) throw SchemaError("channels", "expected an array");
    std::set<std::string> channel_ids;
    std::map<std::string, int> auto_ids;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string at = element("channels", i);
      const json& jc = (*it)[i];
      Channel ch;
      ch.src = get_string(jc, "src", at);
      ch.dst = get_string(jc, "dst", at);
      ch.bandwidth = get_number(jc, "bandwidth", at);
      ch.latency_on_chip = get_number_or(jc, "latency", at, 0.0);
      if (auto id = jc.find("id"); id != jc.end()) {
        ch.id = as_string(*id, field(at, "id"));
      } else {
        // Unnamed channels get "src->dst", with "#k" for parallel links.
        const std::string base = ch.src + "->" + ch.dst;
        const int k = auto_ids[base]++;
        ch.id = k == 0 ? base : base + "#" + std::to_string(k + 1);
      }
      if (!channel_ids.insert(ch.id).second)
        throw SchemaError(field(at, "id"), "duplicate id '" + ch.id + "'");
      spec.channels.push_back(std::move(ch));
    }
  }

  if (auto it = j.find("exposure"); it != j.end() && !it->is_null())
    spec.exposure = exposure_from_json(*it, "exposure");
  return spec;
}

SystemDocument load_system_document(std::string_view text) {
  const json j = parse_json(text);
  SystemDocument doc{system_from_json(j), std::nullopt};
  if (auto it = j.find("constraints"); it != j.end() && !it->is_null())
    doc.constraints = constraints_from_json(*it, "constraints");
  return doc;
}

SystemSpec load_system(std::string_view text) { return load_system_document(text).system; }

std::string save_system(const SystemSpec& spec, const ConstraintSet* constraints) {
  json j = system_to_json(spec);
  if (constraints) j["constraints"] = constraints_to_json(*constraints);
  return j.dump(2) + "\n";
}

json constraints_to_json(const ConstraintSet& cs) {
  json out = json::object();
  json fmin = json::object();
  for (const auto& [d, f] : cs.domain_f_min) fmin[d] = f;
  out["domain_f_min"] = fmin;
  put_bound(out, "p_total_max", cs.p_total_max);
  put_bound(out, "p_trusted_max", cs.p_trusted_max);
  put_bound(out, "p_untrusted_max", cs.p_untrusted_max);
  put_bound(out, "io_bandwidth_max", cs.io_bandwidth_max);
  out["external_io_baseline"] = cs.external_io_baseline;
  json lat = json::array();
  for (const auto& lc : cs.latency_constraints) {
    json jl = {{"id", lc.id}, {"path", lc.path}};
    put_bound(jl, "max_latency", lc.max_latency);
    lat.push_back(std::move(jl));
  }
  out["latency_constraints"] = lat;
  put_bound(out, "area_total_max", cs.area_total_max);
  out["inter_chip_delay"] = cs.inter_chip_delay;
  return out;
}

ConstraintSet constraints_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  static const std::set<std::string> known = {
      "domain_f_min", "p_total_max", "p_trusted_max", "p_untrusted_max",
      "io_bandwidth_max", "external_io_baseline", "latency_constraints",
      "area_total_max", "inter_chip_delay"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw SchemaError(field(path, it.key()), "unknown constraint field");

  ConstraintSet cs;
  if (auto it = j.find("domain_f_min"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw SchemaError(field(path, "domain_f_min"), "expected an object");
    for (auto d = it->begin(); d != it->end(); ++d)
      if (!d->is_null())
        cs.domain_f_min[d.key()] = as_number(*d, field(field(path, "domain_f_min"), d.key()));
  }
  cs.p_total_max = get_number_or(j, "p_total_max", path, kUnbounded);
  cs.p_trusted_max = get_number_or(j, "p_trusted_max", path, kUnbounded);
  cs.p_untrusted_max = get_number_or(j, "p_untrusted_max", path, kUnbounded);
  cs.io_bandwidth_max = get_number_or(j, "io_bandwidth_max", path, kUnbounded);
  cs.external_io_baseline = get_number_or(j, "external_io_baseline", path, 0.0);
  cs.area_total_max = get_number_or(j, "area_total_max", path, kUnbounded);
  cs.inter_chip_delay = get_number_or(j, "inter_chip_delay", path, 0.0);
  if (auto it = j.find("latency_constraints"); it != j.end() && !it->is_null()) {
    const std::string lat_path = field(path, "latency_constraints");
    if (!it->is_array()) throw SchemaError(lat_path, "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string at = element(lat_path, i);
      LatencyConstraint lc;
      lc.id = get_string((*it)[i], "id", at);
      lc.path = get_string_list((*it)[i], "path", at);
      lc.max_latency = get_number_or((*it)[i], "max_latency", at, kUnbounded);
      cs.latency_constraints.push_back(std::move(lc));
    }
  }
  return cs;
}

ConstraintSet load_constraints(std::string_view text) {
  const json j = parse_json(text);
  // Accept either a bare constraint object or a document with a
  // "constraints" member (for example a full system file).
  if (j.is_object() && j.contains("constraints") && j.contains("modules"))
    return constraints_from_json(j.at("constraints"), "constraints");
  return constraints_from_json(j, "");
}

json configuration_to_json(const SystemSpec& spec, const SystemConfiguration& cfg) {
  json out = json::object();
  for (std::size_t i = 0; i < spec.modules.size() && i < cfg.size(); ++i)
    out[spec.modules[i].id] = std::string(to_string(cfg[i]));
  return out;
}

SystemConfiguration configuration_from_json(const SystemSpec& spec, const json& j) {
  if (!j.is_object()) throw SchemaError("", "assignment must map module id to configuration");
  SystemConfiguration cfg;
  cfg.assignment.reserve(spec.modules.size());
  for (const auto& m : spec.modules) {
    auto it = j.find(m.id);
    if (it == j.end()) throw SchemaError(m.id, "module missing from assignment");
    cfg.assignment.push_back(parse_configuration(*it, m.id));
  }
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!spec.module_index(it.key())) throw SchemaError(it.key(), "unknown module");
  return cfg;
}

json config_set_to_json(ConfigSet set) {
  json out = json::array();
  for (auto c : kAllConfigurations)
    if (set.contains(c)) out.push_back(std::string(to_string(c)));
  return out;
}

ConfigSet config_set_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of configuration names");
  ConfigSet set;
  for (std::size_t i = 0; i < j.size(); ++i) set.insert(parse_configuration(j[i], element(path, i)));
  return set;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace scp
