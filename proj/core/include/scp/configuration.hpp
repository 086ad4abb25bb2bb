#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string_view>

namespace scp {

/// Placement of a single module. Only `Trusted` lives on the trusted IC.
enum class Configuration : std::uint8_t {
  Trusted = 0,
  Untrusted = 1,
  UntrustedKeyLocked = 2,
  UntrustedFsmObf = 3,
};

inline constexpr std::size_t kConfigurationCount = 4;

inline constexpr std::array<Configuration, kConfigurationCount> kAllConfigurations = {
    Configuration::Trusted, Configuration::Untrusted,
    Configuration::UntrustedKeyLocked, Configuration::UntrustedFsmObf};

constexpr std::size_t index_of(Configuration c) noexcept {
  return static_cast<std::size_t>(c);
}

constexpr bool on_trusted_ic(Configuration c) noexcept {
  return c == Configuration::Trusted;
}

/// Stable serialized name ("TRUSTED", "UNTRUSTED", ...).
std::string_view to_string(Configuration c) noexcept;
std::optional<Configuration> configuration_from_string(std::string_view name) noexcept;

/// Small bit set over the four configurations.
class ConfigSet {
 public:
  constexpr ConfigSet() = default;
  constexpr ConfigSet(std::initializer_list<Configuration> cs) {
    for (auto c : cs) insert(c);
  }
  static constexpr ConfigSet all() {
    return {Configuration::Trusted, Configuration::Untrusted,
            Configuration::UntrustedKeyLocked, Configuration::UntrustedFsmObf};
  }
  static constexpr ConfigSet without_locking() {
    return {Configuration::Trusted, Configuration::Untrusted};
  }

  constexpr void insert(Configuration c) { bits_ |= bit(c); }
  constexpr void erase(Configuration c) { bits_ &= static_cast<std::uint8_t>(~bit(c)); }
  constexpr bool contains(Configuration c) const { return (bits_ & bit(c)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }
  constexpr bool operator==(const ConfigSet&) const = default;

 private:
  static constexpr std::uint8_t bit(Configuration c) {
    return static_cast<std::uint8_t>(1u << index_of(c));
  }
  std::uint8_t bits_ = 0;
};

}  // namespace scp
