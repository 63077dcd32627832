#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace msalg {

/// One named property with its outcome and, on failure, a witness.
struct CheckResult {
  std::string name;
  bool passed = true;
  std::string witness;
};

/// Outcome of a verification: the individual checks in the order they ran
/// plus named counts describing what was examined.
struct VerificationReport {
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, std::int64_t>> counts;

  bool passed() const {
    for (auto const& c : checks) {
      if (!c.passed) {
        return false;
      }
    }
    return true;
  }
  void check(std::string name, bool ok, std::string witness = {}) {
    checks.push_back(CheckResult{std::move(name), ok, ok ? std::string{} : std::move(witness)});
  }
  void count(std::string name, std::int64_t value) { counts.emplace_back(std::move(name), value); }
  /// Appends another report's checks and counts under a name prefix.
  void merge(std::string const& prefix, VerificationReport const& other) {
    for (auto const& c : other.checks) {
      checks.push_back(CheckResult{prefix + c.name, c.passed, c.witness});
    }
    for (auto const& [k, v] : other.counts) {
      counts.emplace_back(prefix + k, v);
    }
  }
};

}  // namespace msalg
