#include "qns/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qns/errors.hpp"

namespace qns {

std::string to_string(ParamMode mode) { return mode == ParamMode::Paper ? "paper" : "desk"; }

ParamMode parse_param_mode(const std::string& s) {
  if (s == "paper") return ParamMode::Paper;
  if (s == "desk") return ParamMode::Desk;
  throw std::invalid_argument("unknown parameter mode '" + s + "' (expected paper|desk)");
}

double mu_of(double nu, double kappa) {
  if (!(kappa >= 0.0) || !(kappa <= nu)) {
    std::ostringstream os;
    os << "mu_of: requires 0 <= kappa <= nu, got nu=" << nu << " kappa=" << kappa;
    throw std::invalid_argument(os.str());
  }
  return nu - std::sqrt(nu * nu - kappa * kappa);
}

QnsParams QnsParams::with_paper_constants() const {
  QnsParams p = *this;
  p.p0 = paper_constants::kP0;
  p.sigma0 = paper_constants::kSigma0;
  p.eps = std::min(p.eps, paper_constants::kEpsMax);
  p.mode = ParamMode::Paper;
  return p;
}

void QnsParams::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("QnsParams: " + msg); };
  if (!(nu > 0.0)) fail("nu must be > 0");
  if (!(kappa >= 0.0)) fail("kappa must be >= 0");
  if (!(kappa <= nu)) fail("kappa must not exceed nu");
  if (!(gamma > 1.0)) fail("gamma must be > 1");
  if (!(a > 0.0)) fail("a must be > 0");
  if (!(r0 >= 0.0) || !(r1 >= 0.0)) fail("damping constants must be >= 0");
  if (!(eps >= 0.0)) fail("eps must be >= 0");
  if (!(p0 > 0.0)) fail("p0 must be > 0");
  if (!(sigma0 > 0.0)) fail("sigma0 must be > 0");
}

bool ConstraintReport::admissible() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ConstraintCheck& c) { return c.passed || c.informational; });
}

const ConstraintCheck* ConstraintReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

ConstraintReport check_constraints(const QnsParams& params) {
  ConstraintReport report;
  report.strict_mode = params.strict_mode;
  const double nu = params.nu;
  const double kappa = params.kappa;

  const bool kappa_ok = kappa >= 0.0 && kappa <= nu;
  report.checks.push_back({"κ ≤ ν", kappa, nu, kappa_ok, false});
  report.checks.push_back({kConstraintKappaNu, 11.0 * kappa, nu, 11.0 * kappa <= nu, false});
  if (kappa_ok) {
    const double mu = params.mu();
    report.checks.push_back({kConstraintMuNu, 20.0 * mu, nu, 20.0 * mu < nu, false});
    report.checks.push_back({kConstraintMuKappa, 400.0 * mu * mu, kappa * kappa,
                             400.0 * mu * mu < kappa * kappa, kappa == 0.0});
  }
  report.checks.push_back(
      {kConstraintGamma, params.gamma, 3.0, params.gamma > 1.0 && params.gamma < 3.0, false});

  if (params.strict_mode && !(11.0 * kappa <= nu)) {
    std::ostringstream os;
    os << "11*kappa = " << 11.0 * kappa << " > nu = " << nu;
    throw AdmissibilityError(kConstraintKappaNu, os.str());
  }
  return report;
}

}  // namespace qns
