#include "scp/configuration.hpp"

namespace scp {

std::string_view to_string(Configuration c) noexcept {
  switch (c) {
    case Configuration::Trusted: return "TRUSTED";
    case Configuration::Untrusted: return "UNTRUSTED";
    case Configuration::UntrustedKeyLocked: return "UNTRUSTED_KEY_LOCKED";
    case Configuration::UntrustedFsmObf: return "UNTRUSTED_FSM_OBF";
  }
  return "?";
}

std::optional<Configuration> configuration_from_string(std::string_view name) noexcept {
  for (auto c : kAllConfigurations)
    if (to_string(c) == name) return c;
  return std::nullopt;
}

}  // namespace scp
