#include <gtest/gtest.h>

#include "instances.hpp"
#include "scp/error.hpp"
#include "scp/netlist.hpp"

using namespace scp;

namespace {

Netlist half_adder() {
  return parse_netlist(R"({"name": "ha", "inputs": ["a", "b"], "outputs": ["s", "c"],
    "gates": [{"id": "x", "type": "XOR2", "inputs": ["a", "b"], "output": "s"},
              {"id": "y", "type": "AND2", "inputs": ["a", "b"], "output": "c"}]})");
}

std::string error_of(const std::string& text) {
  try {
    check_netlist(parse_netlist(text));
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Netlist, ParsesAndRoundTrips) {
  const Netlist nl = half_adder();
  EXPECT_EQ(nl.gates.size(), 2u);
  EXPECT_EQ(parse_netlist(save_netlist(nl)), nl);
  const NetlistGraph g(nl);
  EXPECT_EQ(g.pi_nets().size(), 2u);
  EXPECT_EQ(g.topo_order().size(), 2u);
  EXPECT_EQ(g.fanout(*g.net_id("a")), 2u);
}

TEST(Netlist, RejectsStructuralErrors) {
  EXPECT_NE(error_of(R"({"name": "n", "inputs": ["a"], "outputs": ["y"], "gates": [
      {"id": "g1", "type": "INV", "inputs": ["a"], "output": "y"},
      {"id": "g2", "type": "BUF", "inputs": ["a"], "output": "y"}]})").find("multiple drivers"), std::string::npos);
  EXPECT_NE(error_of(R"({"name": "n", "inputs": ["a"], "outputs": ["y"], "gates": [
      {"id": "g1", "type": "AND2", "inputs": ["a", "z"], "output": "y"}]})").find("z"), std::string::npos);
  EXPECT_NE(error_of(R"({"name": "n", "inputs": ["a"], "outputs": ["y"], "gates": [
      {"id": "g1", "type": "AND2", "inputs": ["a"], "output": "y"}]})"), "");
  EXPECT_THROW(parse_netlist(R"({"name": "n", "inputs": ["a"], "outputs": ["y"], "gates": [
      {"id": "g1", "type": "MUX4", "inputs": ["a"], "output": "y"}]})"), NetlistError);
}

TEST(Netlist, ReportsCombinationalCycle) {
  const std::string msg = error_of(R"({"name": "n", "inputs": ["a"], "outputs": ["y"], "gates": [
      {"id": "g1", "type": "AND2", "inputs": ["a", "w"], "output": "y"},
      {"id": "g2", "type": "INV", "inputs": ["y"], "output": "w"}]})");
  EXPECT_NE(msg.find("combinational cycle"), std::string::npos);
  EXPECT_NE(msg.find("g1"), std::string::npos);
  EXPECT_NE(msg.find("g2"), std::string::npos);
}

TEST(Netlist, RegisterBreaksCycle) {
  EXPECT_EQ(error_of(R"({"name": "n", "inputs": ["a"], "outputs": ["y"], "gates": [
      {"id": "g1", "type": "AND2", "inputs": ["a", "q"], "output": "y"},
      {"id": "g2", "type": "INV", "inputs": ["y"], "output": "w"}],
      "dffs": [{"d": "w", "q": "q"}]})"), "");
}

TEST(Simulator, TruthTables) {
  const std::vector<std::pair<CellType, int>> truth = {
      {CellType::AND2, 0b1000}, {CellType::OR2, 0b1110}, {CellType::NAND2, 0b0111},
      {CellType::NOR2, 0b0001}, {CellType::XOR2, 0b0110}, {CellType::XNOR2, 0b1001}};
  for (auto [type, table] : truth) {
    Netlist nl{"t", {"a", "b"}, {"y"}, {{"g", type, {"a", "b"}, "y"}}, {}};
    Simulator sim(nl);
    // Lane v carries a = bit 0 of v, b = bit 1 of v.
    const std::vector<std::uint64_t> in = {0b1010, 0b1100};
    std::vector<std::uint64_t> out(1);
    sim.evaluate(in, {}, out, {});
    EXPECT_EQ(out[0] & 0xF, static_cast<std::uint64_t>(table)) << to_string(type);
  }
  Netlist inv{"t", {"a"}, {"y", "z"}, {{"g", CellType::INV, {"a"}, "y"}, {"h", CellType::BUF, {"a"}, "z"}}, {}};
  Simulator sim(inv);
  std::vector<std::uint64_t> out(2);
  sim.evaluate(std::vector<std::uint64_t>{0b01}, {}, out, {});
  EXPECT_EQ(out[0] & 3, 0b10u);
  EXPECT_EQ(out[1] & 3, 0b01u);
}

TEST(Simulator, SequentialStep) {
  // Toggle flop: q' = q XOR t.
  Netlist nl{"tff", {"t"}, {"q"}, {{"g", CellType::XOR2, {"t", "q"}, "d"}}, {{"d", "q"}}};
  Simulator sim(nl);
  std::vector<std::uint64_t> out(1), next(1);
  sim.evaluate(std::vector<std::uint64_t>{~0ull}, std::vector<std::uint64_t>{0}, out, next);
  EXPECT_EQ(next[0], ~0ull);
  EXPECT_EQ(out[0], 0u);
}

TEST(Netlist, RandomNetlistsAreValid) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Netlist nl = fx::random_netlist(rng, 1 + rng.below(12), 1 + rng.below(60), rng.below(4));
    EXPECT_NO_THROW(check_netlist(nl));
    EXPECT_EQ(parse_netlist(save_netlist(nl)), nl);
  }
}
