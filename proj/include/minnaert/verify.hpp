#pragma once

#include <string>
#include <vector>

#include "minnaert/scattering.hpp"

namespace minnaert {

// y ≈ C x^p by least squares in log-log coordinates.
struct PowerFit {
  double exponent = 0;
  double prefactor = 0;
  double stderr_exponent = 0;  // 0 when the fit is exact or has no spare points
};
PowerFit fit_power(const std::vector<double>& x, const std::vector<double>& y);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  double k2_sign = 1.0;  // -1 injects a sign error into K_(2) (mutation check)
  bool include_kernel = true;
};

// Constant-block identities, expansion residual ratios and the resonant kernel rate on `mesh`.
std::vector<CheckResult> run_verification_suite(const SurfaceMesh& mesh, const VerifyOptions& opt = {});

}  // namespace minnaert
