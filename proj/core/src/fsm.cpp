#include "scp/fsm.hpp"

#include <map>
#include <set>

#include "json_util.hpp"
#include "scp/error.hpp"

namespace scp {

using namespace detail;

namespace {

struct Cube {
  std::uint64_t care = 0;
  std::uint64_t value = 0;
};

Cube compile_cube(std::string_view pattern) {
  Cube c;
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    if (pattern[k] == '-') continue;
    c.care |= std::uint64_t{1} << k;
    if (pattern[k] == '1') c.value |= std::uint64_t{1} << k;
  }
  return c;
}

bool overlaps(const Cube& a, const Cube& b) {
  const std::uint64_t both = a.care & b.care;
  return (a.value & both) == (b.value & both);
}

bool is_bits(std::string_view s, bool allow_dash) {
  for (char ch : s)
    if (ch != '0' && ch != '1' && !(allow_dash && ch == '-')) return false;
  return true;
}

}  // namespace

std::string FsmTable::input_net(int bit) const {
  if (bit < static_cast<int>(input_nets.size())) return input_nets[bit];
  return "in[" + std::to_string(bit) + "]";
}

std::string FsmTable::output_net(int bit) const {
  if (bit < static_cast<int>(output_nets.size())) return output_nets[bit];
  return "out[" + std::to_string(bit) + "]";
}

std::uint64_t pack_bits(std::string_view bits) {
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < bits.size(); ++k)
    if (bits[k] == '1') v |= std::uint64_t{1} << k;
  return v;
}

std::string unpack_bits(std::uint64_t value, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int k = 0; k < width; ++k)
    if ((value >> k) & 1u) s[k] = '1';
  return s;
}

void check_fsm(const FsmTable& fsm) {
  if (fsm.states.empty()) throw NetlistError("FSM has no states");
  if (fsm.input_width < 0 || fsm.input_width > kMaxFsmWidth || fsm.output_width < 0 ||
      fsm.output_width > kMaxFsmWidth)
    throw NetlistError("FSM input/output width must lie in [0, " + std::to_string(kMaxFsmWidth) + "]");
  if (!fsm.input_nets.empty() && static_cast<int>(fsm.input_nets.size()) != fsm.input_width)
    throw NetlistError("FSM input_nets must list exactly input_width names");
  if (!fsm.output_nets.empty() && static_cast<int>(fsm.output_nets.size()) != fsm.output_width)
    throw NetlistError("FSM output_nets must list exactly output_width names");

  std::map<std::string, std::size_t> index;
  for (const auto& s : fsm.states)
    if (!index.emplace(s, index.size()).second) throw NetlistError("FSM: duplicate state '" + s + "'");
  if (!index.count(fsm.reset_state))
    throw NetlistError("FSM: reset state '" + fsm.reset_state + "' is not a state");

  std::vector<std::vector<std::pair<Cube, std::size_t>>> per_state(fsm.states.size());
  for (std::size_t i = 0; i < fsm.transitions.size(); ++i) {
    const auto& t = fsm.transitions[i];
    const std::string where = "FSM transition " + std::to_string(i) + ": ";
    if (!index.count(t.state)) throw NetlistError(where + "unknown state '" + t.state + "'");
    if (!index.count(t.next)) throw NetlistError(where + "unknown next state '" + t.next + "'");
    if (static_cast<int>(t.input.size()) != fsm.input_width || !is_bits(t.input, true))
      throw NetlistError(where + "input pattern must have input_width chars over {0,1,-}");
    if (static_cast<int>(t.output.size()) != fsm.output_width || !is_bits(t.output, false))
      throw NetlistError(where + "output must have output_width chars over {0,1}");
    const Cube cube = compile_cube(t.input);
    auto& rows = per_state[index.at(t.state)];
    for (const auto& [other, j] : rows)
      if (overlaps(cube, other))
        throw NetlistError("FSM is nondeterministic: transitions " + std::to_string(j) + " and " +
                           std::to_string(i) + " of state '" + t.state +
                           "' match a common input");
    rows.emplace_back(cube, i);
  }
}

FsmTable fsm_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("", "FSM must be a JSON object");
  FsmTable fsm;
  fsm.states = get_string_list(j, "states", "");
  fsm.reset_state = get_string(j, "reset", "");
  fsm.input_width = static_cast<int>(as_integer(require(j, "input_width", ""), "input_width"));
  fsm.output_width = static_cast<int>(as_integer(require(j, "output_width", ""), "output_width"));
  const json& rows = require_array(j, "transitions", "");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string at = element("transitions", i);
    fsm.transitions.push_back({get_string(rows[i], "state", at), get_string(rows[i], "input", at),
                               get_string(rows[i], "next", at), get_string(rows[i], "output", at)});
  }
  if (j.contains("input_nets")) fsm.input_nets = get_string_list(j, "input_nets", "");
  if (j.contains("output_nets")) fsm.output_nets = get_string_list(j, "output_nets", "");
  check_fsm(fsm);
  return fsm;
}

FsmTable parse_fsm(std::string_view text) { return fsm_from_json(parse_json(text)); }

json fsm_to_json(const FsmTable& fsm) {
  json rows = json::array();
  for (const auto& t : fsm.transitions)
    rows.push_back({{"state", t.state}, {"input", t.input}, {"next", t.next}, {"output", t.output}});
  json out = {{"states", fsm.states}, {"reset", fsm.reset_state},
              {"input_width", fsm.input_width}, {"output_width", fsm.output_width},
              {"transitions", rows}};
  if (!fsm.input_nets.empty()) out["input_nets"] = fsm.input_nets;
  if (!fsm.output_nets.empty()) out["output_nets"] = fsm.output_nets;
  return out;
}

FsmInterpreter::FsmInterpreter(const FsmTable& fsm) : names_(fsm.states), rows_(fsm.states.size()) {
  check_fsm(fsm);
  reset_ = state_index(fsm.reset_state);
  for (const auto& t : fsm.transitions) {
    const Cube c = compile_cube(t.input);
    rows_[state_index(t.state)].push_back({c.care, c.value, state_index(t.next), pack_bits(t.output)});
  }
}

std::size_t FsmInterpreter::state_index(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  throw Error("FSM: unknown state '" + std::string(name) + "'");
}

FsmInterpreter::Step FsmInterpreter::step(std::size_t state, std::uint64_t input) const {
  for (const auto& r : rows_[state])
    if ((input & r.care) == r.value) return {r.next, r.output};
  return {state, 0};
}

namespace {

class FsmBuilder {
 public:
  FsmBuilder(Netlist& nl, std::string prefix) : nl_(nl), prefix_(std::move(prefix)) {}

  std::string gate(CellType type, std::vector<std::string> inputs, std::string output = {}) {
    const std::string id = prefix_ + "g" + std::to_string(counter_++);
    if (output.empty()) output = prefix_ + "n" + std::to_string(counter_ - 1);
    nl_.gates.push_back({id, type, std::move(inputs), output});
    return output;
  }

  /// Balanced AND2/OR2 reduction. A single term is returned unchanged
  /// unless it must be renamed to `output`.
  std::string tree(CellType type, std::vector<std::string> terms, const std::string& output = {}) {
    while (terms.size() > 1) {
      std::vector<std::string> next;
      for (std::size_t i = 0; i + 1 < terms.size(); i += 2) {
        const bool last = terms.size() == 2 && !output.empty();
        next.push_back(gate(type, {terms[i], terms[i + 1]}, last ? output : std::string{}));
      }
      if (terms.size() % 2) next.push_back(terms.back());
      terms = std::move(next);
    }
    if (!output.empty() && terms.front() != output) return gate(CellType::BUF, {terms.front()}, output);
    return terms.front();
  }

 private:
  Netlist& nl_;
  std::string prefix_;
  std::size_t counter_ = 0;
};

}  // namespace

Netlist synthesize_fsm(const FsmTable& fsm, const FsmSynthesisOptions& options) {
  check_fsm(fsm);
  const std::string& p = options.prefix;
  const std::string& rst = options.reset_net;
  Netlist nl;
  nl.name = "fsm";
  nl.primary_inputs.push_back(rst);
  for (int k = 0; k < fsm.input_width; ++k) nl.primary_inputs.push_back(fsm.input_net(k));
  for (int k = 0; k < fsm.output_width; ++k) nl.primary_outputs.push_back(fsm.output_net(k));

  FsmBuilder b(nl, p);
  const std::size_t n = fsm.states.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[fsm.states[i]] = i;
  auto state_net = [&](std::size_t i) { return p + "s" + std::to_string(i); };

  const std::string nrst = b.gate(CellType::INV, {rst});
  std::map<int, std::string> inverted;
  auto literal = [&](int k, char v) {
    if (v == '1') return fsm.input_net(k);
    auto it = inverted.find(k);
    if (it == inverted.end()) it = inverted.emplace(k, b.gate(CellType::INV, {fsm.input_net(k)})).first;
    return it->second;
  };
  std::string tie_low;
  auto constant_zero = [&]() {
    if (tie_low.empty()) tie_low = b.gate(CellType::AND2, {rst, nrst});
    return tie_low;
  };

  std::vector<std::string> match(fsm.transitions.size());
  std::vector<std::vector<std::string>> leaving(n), entering(n);
  for (std::size_t t = 0; t < fsm.transitions.size(); ++t) {
    const auto& row = fsm.transitions[t];
    std::vector<std::string> terms = {state_net(index[row.state])};
    for (int k = 0; k < fsm.input_width; ++k)
      if (row.input[k] != '-') terms.push_back(literal(k, row.input[k]));
    match[t] = b.tree(CellType::AND2, terms);
    leaving[index[row.state]].push_back(match[t]);
    entering[index[row.next]].push_back(match[t]);
  }

  const std::size_t reset = index[fsm.reset_state];
  for (std::size_t i = 0; i < n; ++i) {
    // Unmatched inputs hold the current state.
    std::string hold = state_net(i);
    if (!leaving[i].empty()) {
      const std::string any = b.tree(CellType::OR2, leaving[i]);
      hold = b.gate(CellType::AND2, {state_net(i), b.gate(CellType::INV, {any})});
    }
    std::vector<std::string> terms = entering[i];
    terms.push_back(hold);
    const std::string next = b.tree(CellType::OR2, terms);
    const std::string d = i == reset ? b.gate(CellType::OR2, {next, rst})
                                     : b.gate(CellType::AND2, {next, nrst});
    nl.dffs.push_back({d, state_net(i)});
  }

  for (int k = 0; k < fsm.output_width; ++k) {
    std::vector<std::string> terms;
    for (std::size_t t = 0; t < fsm.transitions.size(); ++t)
      if (fsm.transitions[t].output[k] == '1') terms.push_back(match[t]);
    if (terms.empty()) terms.push_back(constant_zero());
    b.tree(CellType::OR2, terms, fsm.output_net(k));
  }
  check_netlist(nl);
  return nl;
}

}  // namespace scp
