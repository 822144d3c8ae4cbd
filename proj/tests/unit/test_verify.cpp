#include <cmath>

#include "doctest.h"
#include "minnaert/verify.hpp"

using namespace minnaert;

TEST_CASE("power fit on exact data") {
  const std::vector<double> x = {0.2, 0.1, 0.05, 0.025};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.5));
  const auto f = fit_power(x, y);
  CHECK(f.exponent == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(f.prefactor == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.stderr_exponent < 1e-12);
  CHECK_THROWS_AS(fit_power({1.0}, {1.0}), InputError);
  CHECK_THROWS_AS(fit_power({1.0, 2.0}, {1.0, -1.0}), InputError);
}

TEST_CASE("verification suite on a coarse sphere, and the mutation check") {
  const auto mesh = make_icosphere(1.0, 2);
  VerifyOptions o;
  const auto ok = run_verification_suite(mesh, o);
  CHECK(ok.size() == 9);
  for (const auto& c : ok) CHECK_MESSAGE(c.pass, c.name << ": " << c.detail);
  o.k2_sign = -1.0;
  o.include_kernel = false;
  const auto bad = run_verification_suite(mesh, o);
  CHECK(bad.size() == 8);
  int failed = 0;
  for (const auto& c : bad)
    if (!c.pass) {
      ++failed;
      CHECK(c.name.rfind("schur_coefficient", 0) == 0);
    }
  CHECK(failed >= 2);
}
