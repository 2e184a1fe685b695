#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qns {

/// Density is nonpositive somewhere a strictly positive field is required.
class VacuumError : public std::domain_error {
 public:
  VacuumError(const std::string& where, std::size_t bad_nodes)
      : std::domain_error(where + ": density must be strictly positive (" +
                          std::to_string(bad_nodes) + " nonpositive nodes)"),
        bad_nodes_(bad_nodes) {}
  std::size_t bad_nodes() const { return bad_nodes_; }

 private:
  std::size_t bad_nodes_;
};

/// Parameter set violates a required inequality (strict mode).
class AdmissibilityError : public std::invalid_argument {
 public:
  AdmissibilityError(const std::string& inequality, const std::string& detail)
      : std::invalid_argument("admissibility violated: " + inequality + " (" + detail + ")"),
        inequality_(inequality) {}
  const std::string& inequality() const { return inequality_; }

 private:
  std::string inequality_;
};

/// Post-step density dropped to or below the positivity floor.
class PositivityFailure : public std::runtime_error {
 public:
  PositivityFailure(double time, std::size_t bad_nodes, double rho_min)
      : std::runtime_error("positivity failure at t=" + std::to_string(time) + ": " +
                           std::to_string(bad_nodes) + " nodes at or below floor, rho_min=" +
                           std::to_string(rho_min)),
        time_(time),
        bad_nodes_(bad_nodes),
        rho_min_(rho_min) {}
  double time() const { return time_; }
  std::size_t bad_nodes() const { return bad_nodes_; }
  double rho_min() const { return rho_min_; }

 private:
  double time_;
  std::size_t bad_nodes_;
  double rho_min_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qns
