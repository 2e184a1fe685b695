#pragma once

#include <string>
#include <vector>

namespace qns {

/// Constants of the analytic construction. They are analytic devices: at these
/// values the regularization is either negligible or numerically stiff, so
/// simulations default to the desk values below.
namespace paper_constants {
inline constexpr double kP0 = 50.0;
inline constexpr double kEpsMax = 1e-10;
inline constexpr double kSigma0 = 1e-10;
}  // namespace paper_constants

namespace desk_constants {
inline constexpr double kP0 = 4.0;
inline constexpr double kEps = 1e-3;
inline constexpr double kSigma0 = 0.05;
}  // namespace desk_constants

enum class ParamMode { Desk, Paper };

std::string to_string(ParamMode mode);
ParamMode parse_param_mode(const std::string& s);

/// mu = nu - sqrt(nu^2 - kappa^2). Requires 0 <= kappa <= nu.
double mu_of(double nu, double kappa);

/// Physical and regularization constants of the damped quantum
/// Navier-Stokes system and its regularized approximation.
struct QnsParams {
  double nu = 1.0;
  double kappa = 1.0 / 11.0;
  double gamma = 2.0;
  double a = 1.0;
  double r0 = 0.0;
  double r1 = 0.0;
  double eps = desk_constants::kEps;
  double p0 = desk_constants::kP0;
  double sigma0 = desk_constants::kSigma0;
  bool strict_mode = true;
  ParamMode mode = ParamMode::Desk;

  /// Recomputed on every call, never cached.
  double mu() const { return mu_of(nu, kappa); }

  /// Parameter set with the analytic constants p0 = 50, sigma0 = 1e-10 and
  /// eps clipped to <= 1e-10.
  QnsParams with_paper_constants() const;

  /// Basic range checks (positivity, kappa <= nu, gamma > 1). Throws
  /// std::invalid_argument. Strict-mode admissibility is checked separately.
  void validate() const;
};

struct ConstraintCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool passed = false;
  /// Failure does not make the parameter set inadmissible.
  bool informational = false;
};

struct ConstraintReport {
  std::vector<ConstraintCheck> checks;
  bool strict_mode = false;

  /// All non-informational checks passed.
  bool admissible() const;
  const ConstraintCheck* find(const std::string& name) const;
};

inline constexpr const char* kConstraintKappaNu = "11κ ≤ ν";
inline constexpr const char* kConstraintMuNu = "20μ < ν";
inline constexpr const char* kConstraintMuKappa = "400μ² < κ²";
inline constexpr const char* kConstraintGamma = "1 < γ < 3";

/// Evaluates 11k <= nu, 20mu < nu, 400mu^2 < k^2 and gamma in (1,3).
/// With strict_mode, a failure of 11k <= nu throws AdmissibilityError.
/// For kappa = 0 the 400mu^2 < k^2 check is informational.
ConstraintReport check_constraints(const QnsParams& params);

}  // namespace qns
