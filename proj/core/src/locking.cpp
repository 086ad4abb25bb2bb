#include "scp/locking.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "scp/error.hpp"
#include "scp/rng.hpp"

namespace scp {

namespace {

std::optional<std::size_t> key_net_index(const std::string& name) {
  if (name.size() < 6 || name.compare(0, 4, "key[") != 0 || name.back() != ']') return std::nullopt;
  std::size_t v = 0;
  for (std::size_t i = 4; i + 1 < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
    v = v * 10 + static_cast<std::size_t>(name[i] - '0');
  }
  return v;
}

std::unordered_set<std::string> used_names(const Netlist& nl) {
  std::unordered_set<std::string> names(nl.primary_inputs.begin(), nl.primary_inputs.end());
  for (const auto& g : nl.gates) {
    names.insert(g.id);
    names.insert(g.output);
    names.insert(g.inputs.begin(), g.inputs.end());
  }
  for (const auto& d : nl.dffs) {
    names.insert(d.d);
    names.insert(d.q);
  }
  names.insert(nl.primary_outputs.begin(), nl.primary_outputs.end());
  return names;
}

std::string fresh(std::unordered_set<std::string>& used, std::string base) {
  while (used.count(base)) base += "_";
  used.insert(base);
  return base;
}

}  // namespace

std::vector<std::string> lockable_nets(const Netlist& netlist) {
  std::vector<std::string> nets;
  for (const auto& pi : netlist.primary_inputs)
    if (!key_net_index(pi)) nets.push_back(pi);
  for (const auto& g : netlist.gates) nets.push_back(g.output);
  return nets;
}

LockResult insert_key_xor(const Netlist& netlist, std::size_t k, std::uint64_t seed) {
  check_netlist(netlist);
  std::vector<std::string> eligible = lockable_nets(netlist);
  if (k > eligible.size())
    throw Error("insert_key_xor: " + std::to_string(k) + " key gates requested but only " +
                std::to_string(eligible.size()) + " nets are eligible");

  LockResult result;
  result.locked = netlist;
  if (k == 0) return result;

  Rng rng(seed);
  // Partial Fisher-Yates: the first k entries become the sites.
  for (std::size_t i = 0; i < k; ++i)
    std::swap(eligible[i], eligible[i + rng.below(eligible.size() - i)]);

  std::size_t key_base = 0;
  for (const auto& pi : netlist.primary_inputs)
    if (auto idx = key_net_index(pi)) key_base = std::max(key_base, *idx + 1);

  Netlist& nl = result.locked;
  auto used = used_names(nl);
  std::unordered_map<std::string, std::size_t> driver_gate;
  for (std::size_t g = 0; g < nl.gates.size(); ++g) driver_gate[nl.gates[g].output] = g;
  const std::unordered_set<std::string> pis(nl.primary_inputs.begin(), nl.primary_inputs.end());

  for (std::size_t i = 0; i < k; ++i) {
    const std::string site = eligible[i];
    const bool bit = rng.bit();
    const CellType type = bit ? CellType::XNOR2 : CellType::XOR2;
    const std::string key_net = "key[" + std::to_string(key_base + i) + "]";
    if (used.count(key_net)) throw Error("insert_key_xor: net '" + key_net + "' already exists");
    used.insert(key_net);
    nl.primary_inputs.push_back(key_net);
    const std::string gate_id = fresh(used, "keygate" + std::to_string(key_base + i));

    if (pis.count(site)) {
      // Primary inputs keep their name; every load moves to the new net.
      const std::string locked_net = fresh(used, site + "$lk" + std::to_string(key_base + i));
      for (auto& g : nl.gates)
        for (auto& in : g.inputs)
          if (in == site) in = locked_net;
      for (auto& d : nl.dffs)
        if (d.d == site) d.d = locked_net;
      for (auto& po : nl.primary_outputs)
        if (po == site) po = locked_net;
      nl.gates.push_back({gate_id, type, {site, key_net}, locked_net});
    } else {
      // Gate outputs: the driver moves to a fresh net and the key gate takes
      // over the original name, which rewires all loads at once.
      const std::string pre = fresh(used, site + "$pre" + std::to_string(key_base + i));
      nl.gates[driver_gate.at(site)].output = pre;
      nl.gates.push_back({gate_id, type, {pre, key_net}, site});
    }
    result.key.push_back(bit);
    result.key_inputs.push_back(key_net);
    result.sites.push_back({site, i, type});
  }
  check_netlist(nl);
  return result;
}

std::string key_to_hex(const std::vector<bool>& key) {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t digits = std::max<std::size_t>(1, (key.size() + 3) / 4);
  std::string hex(digits, '0');
  for (std::size_t d = 0; d < digits; ++d) {
    unsigned v = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t bit = d * 4 + b;
      if (bit < key.size() && key[bit]) v |= 1u << b;
    }
    hex[digits - 1 - d] = kDigits[v];
  }
  return hex;
}

std::vector<bool> key_from_hex(const std::string& hex, std::size_t bits) {
  std::vector<bool> key(bits, false);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const char ch = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[hex.size() - 1 - d])));
    unsigned v;
    if (ch >= '0' && ch <= '9') v = static_cast<unsigned>(ch - '0');
    else if (ch >= 'a' && ch <= 'f') v = static_cast<unsigned>(ch - 'a' + 10);
    else throw Error("invalid hex key digit '" + std::string(1, hex[hex.size() - 1 - d]) + "'");
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t bit = d * 4 + b;
      if ((v >> b) & 1u) {
        if (bit >= bits) throw Error("hex key has more than " + std::to_string(bits) + " bits");
        key[bit] = true;
      }
    }
  }
  return key;
}

namespace {

// Maps every locked-netlist primary input to an original input or a key bit.
struct InputMap {
  std::vector<std::optional<std::size_t>> original_input;  // per locked PI
  std::vector<std::optional<std::size_t>> key_bit;
};

InputMap map_inputs(const Netlist& original, const LockResult& lock) {
  std::unordered_map<std::string, std::size_t> orig;
  for (std::size_t i = 0; i < original.primary_inputs.size(); ++i) orig[original.primary_inputs[i]] = i;
  std::unordered_map<std::string, std::size_t> keys;
  for (std::size_t i = 0; i < lock.key_inputs.size(); ++i) keys[lock.key_inputs[i]] = i;

  InputMap map;
  for (const auto& pi : lock.locked.primary_inputs) {
    if (auto k = keys.find(pi); k != keys.end()) {
      map.original_input.push_back(std::nullopt);
      map.key_bit.push_back(k->second);
    } else if (auto o = orig.find(pi); o != orig.end()) {
      map.original_input.push_back(o->second);
      map.key_bit.push_back(std::nullopt);
    } else {
      throw Error("check_lock_equivalence: locked input '" + pi + "' not in original");
    }
  }
  return map;
}

class EquivalenceChecker {
 public:
  EquivalenceChecker(const Netlist& original, const LockResult& lock, std::vector<bool> key)
      : original_(original), locked_(lock.locked), map_(map_inputs(original, lock)),
        key_(std::move(key)) {
    if (original_.output_count() != locked_.output_count() ||
        original_.state_count() != locked_.state_count())
      throw Error("check_lock_equivalence: output or register counts differ");
    n_in_ = original_.input_count();
    n_state_ = original_.state_count();
    lin_.resize(locked_.input_count());
    o1_.resize(original_.output_count());
    o2_.resize(original_.output_count());
    s1_.resize(n_state_);
    s2_.resize(n_state_);
  }

  std::size_t input_count() const { return n_in_; }
  std::size_t state_count() const { return n_state_; }

  /// Evaluates one 64-lane word; returns lanes where outputs (or, when
  /// `compare_state`, next states) differ.
  std::uint64_t step(std::span<const std::uint64_t> in, std::span<const std::uint64_t> s_orig,
                     std::span<const std::uint64_t> s_lock, bool compare_state) {
    for (std::size_t i = 0; i < lin_.size(); ++i) {
      if (map_.key_bit[i]) lin_[i] = key_[*map_.key_bit[i]] ? ~std::uint64_t{0} : 0;
      else lin_[i] = in[*map_.original_input[i]];
    }
    original_.evaluate(in, s_orig, o1_, s1_);
    locked_.evaluate(lin_, s_lock, o2_, s2_);
    std::uint64_t diff = 0;
    for (std::size_t i = 0; i < o1_.size(); ++i) diff |= o1_[i] ^ o2_[i];
    if (compare_state)
      for (std::size_t i = 0; i < s1_.size(); ++i) diff |= s1_[i] ^ s2_[i];
    return diff;
  }

  const std::vector<std::uint64_t>& next_original() const { return s1_; }
  const std::vector<std::uint64_t>& next_locked() const { return s2_; }

 private:
  Simulator original_;
  Simulator locked_;
  InputMap map_;
  std::vector<bool> key_;
  std::size_t n_in_ = 0, n_state_ = 0;
  std::vector<std::uint64_t> lin_, o1_, o2_, s1_, s2_;
};

std::vector<bool> lane_bits(std::span<const std::uint64_t> words, int lane) {
  std::vector<bool> bits(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) bits[i] = (words[i] >> lane) & 1u;
  return bits;
}

}  // namespace

EquivalenceResult check_lock_equivalence(const Netlist& original, const LockResult& lock,
                                         const EquivalenceOptions& options) {
  std::vector<bool> key = options.key.value_or(lock.key);
  if (key.size() != lock.key_inputs.size())
    throw Error("check_lock_equivalence: key has " + std::to_string(key.size()) +
                " bits, lock has " + std::to_string(lock.key_inputs.size()));
  EquivalenceChecker checker(original, lock, std::move(key));
  const std::size_t n_in = checker.input_count();
  const std::size_t n_state = checker.state_count();
  const std::size_t vars = n_in + n_state;

  EquivalenceMode mode = options.mode;
  if (mode == EquivalenceMode::Auto) {
    if (vars <= kExhaustiveInputLimit) mode = EquivalenceMode::Exhaustive;
    else if (n_state > 0) mode = EquivalenceMode::Trace;
    else
      throw Error("check_lock_equivalence: " + std::to_string(n_in) +
                  " primary inputs exceed the exhaustive limit; request trace mode");
  }

  EquivalenceResult result;
  if (mode == EquivalenceMode::Exhaustive) {
    if (vars > kExhaustiveInputLimit)
      throw Error("check_lock_equivalence: " + std::to_string(vars) +
                  " input and state bits exceed the exhaustive limit of " +
                  std::to_string(kExhaustiveInputLimit));
    result.exhaustive = true;
    static constexpr std::uint64_t kLaneMasks[6] = {
        0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
        0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
    const std::uint64_t total = std::uint64_t{1} << vars;
    const std::uint64_t words = (total + 63) / 64;
    const std::uint64_t valid = total >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << total) - 1;
    std::vector<std::uint64_t> v(vars);
    for (std::uint64_t w = 0; w < words; ++w) {
      for (std::size_t b = 0; b < vars; ++b)
        v[b] = b < 6 ? kLaneMasks[b] : (((w >> (b - 6)) & 1u) ? ~std::uint64_t{0} : 0);
      std::span<const std::uint64_t> in(v.data(), n_in);
      std::span<const std::uint64_t> st(v.data() + n_in, n_state);
      const std::uint64_t diff = checker.step(in, st, st, true) & valid;
      if (diff) {
        const int lane = __builtin_ctzll(diff);
        result.counterexample = Counterexample{lane_bits(in, lane), lane_bits(st, lane), 0, 0};
        return result;
      }
    }
    result.equivalent = true;
    return result;
  }

  // Trace mode: 64 traces per word, all registers start at zero.
  Rng rng(options.seed);
  const std::size_t groups = (options.traces + 63) / 64;
  std::vector<std::uint64_t> in(n_in), s_orig(n_state), s_lock(n_state);
  for (std::size_t grp = 0; grp < groups; ++grp) {
    const std::size_t lanes = std::min<std::size_t>(64, options.traces - grp * 64);
    const std::uint64_t valid = lanes >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << lanes) - 1;
    std::fill(s_orig.begin(), s_orig.end(), 0);
    std::fill(s_lock.begin(), s_lock.end(), 0);
    for (std::size_t cycle = 0; cycle < options.cycles; ++cycle) {
      for (auto& x : in) x = rng.next();
      const std::uint64_t diff = checker.step(in, s_orig, s_lock, false) & valid;
      if (diff) {
        const int lane = __builtin_ctzll(diff);
        result.counterexample =
            Counterexample{lane_bits(in, lane), lane_bits(s_orig, lane), grp * 64 + lane, cycle};
        return result;
      }
      s_orig = checker.next_original();
      s_lock = checker.next_locked();
    }
  }
  result.equivalent = true;
  return result;
}

std::vector<std::string> FsmObfResult::decoy_states() const {
  std::vector<std::string> all = chain_states;
  all.insert(all.end(), trap_states.begin(), trap_states.end());
  return all;
}

FsmObfResult obfuscate_fsm(const FsmTable& fsm, std::size_t chain_len, std::size_t traps,
                           std::uint64_t seed) {
  check_fsm(fsm);
  if (chain_len < 1) throw Error("obfuscate_fsm: chain length must be >= 1");
  if (traps < 1) throw Error("obfuscate_fsm: trap count must be >= 1");

  std::set<std::string> taken(fsm.states.begin(), fsm.states.end());
  auto fresh_state = [&](std::string base) {
    while (taken.count(base)) base += "_";
    taken.insert(base);
    return base;
  };

  FsmObfResult out;
  for (std::size_t j = 0; j < chain_len; ++j) out.chain_states.push_back(fresh_state("obf_c" + std::to_string(j)));
  for (std::size_t j = 0; j < traps; ++j) out.trap_states.push_back(fresh_state("obf_t" + std::to_string(j)));

  Rng rng(seed);
  const int w = fsm.input_width;
  for (std::size_t j = 0; j < chain_len; ++j) {
    std::string v(static_cast<std::size_t>(w), '0');
    for (auto& ch : v) ch = rng.bit() ? '1' : '0';
    out.key_sequence.push_back(std::move(v));
  }

  FsmTable& t = out.obfuscated;
  t = fsm;
  t.states.insert(t.states.end(), out.chain_states.begin(), out.chain_states.end());
  t.states.insert(t.states.end(), out.trap_states.begin(), out.trap_states.end());
  t.reset_state = out.chain_states.front();
  const std::string zeros(static_cast<std::size_t>(fsm.output_width), '0');

  for (std::size_t j = 0; j < chain_len; ++j) {
    const std::string& state = out.chain_states[j];
    const std::string& key = out.key_sequence[j];
    const std::string& next = j + 1 < chain_len ? out.chain_states[j + 1] : fsm.reset_state;
    t.transitions.push_back({state, key, next, zeros});
    // The complement of one vector as w disjoint cubes: agree on the first
    // p bits, differ at bit p, free afterwards.
    const std::string& trap = out.trap_states[rng.below(traps)];
    for (int p = 0; p < w; ++p) {
      std::string cube(static_cast<std::size_t>(w), '-');
      for (int q = 0; q < p; ++q) cube[q] = key[q];
      cube[p] = key[p] == '0' ? '1' : '0';
      t.transitions.push_back({state, cube, trap, zeros});
    }
  }
  const std::string any(static_cast<std::size_t>(w), '-');
  for (std::size_t j = 0; j < traps; ++j)
    t.transitions.push_back({out.trap_states[j], any, out.trap_states[(j + 1) % traps], zeros});

  check_fsm(t);
  return out;
}

}  // namespace scp
