#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "splinekit/cube.hpp"
#include "splinekit/parallel.hpp"
#include "splinekit/polyfun.hpp"

namespace splinekit {

class ComplexFun {
 public:
  ComplexFun(Space space, std::vector<std::complex<double>> values);

  static ComplexFun constant(Space space, std::complex<double> c);
  // e_q composed with a polynomial phase
  static ComplexFun phase(const PolyFun& p, std::uint64_t budget = kDefaultBudget);
  // balanced indicator 1_X - density
  static ComplexFun centered_indicator(const SubsetOracle& x);
  // e_N composed with a total Z/N-valued function
  static ComplexFun from_groupfun(const GroupFun& f);

  const Space& space() const { return space_; }
  std::complex<double> value(Point x) const { return values_[x]; }
  const std::vector<std::complex<double>>& values() const { return values_; }
  double sup_bound() const { return bound_; }

  ComplexFun modulated(const ComplexFun& other) const;  // pointwise product

 private:
  Space space_;
  std::vector<std::complex<double>> values_;
  double bound_;
};

struct GowersReport {
  std::uint32_t m = 0;
  double value = 0.0;     // ||g||_{U_m}
  double pre_root = 0.0;  // the averaged 2^m power, clamped at 0
  double imag_residue = 0.0;
  bool exact = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double std_error = 0.0;  // on the pre-root scale (Monte Carlo only)
};

// Exact norm via E_{h in V^{m-1}} |E_x prod_w C^{|w|} g(x + w.h)|^2, computed
// with deterministic chunked reduction (bit-identical for any worker count).
GowersReport gowers_exact(const ComplexFun& g, std::uint32_t m,
                          std::uint64_t budget = kDefaultBudget,
                          unsigned workers = 0);

GowersReport gowers_mc(const ComplexFun& g, std::uint32_t m, std::uint64_t samples,
                       std::uint64_t seed);

struct UniformityReport {
  double density = 0.0;
  double eta = 0.0;  // ||1_X - density||_{U_m}
  std::uint32_t m = 0;
  bool exact = true;
  GowersReport gowers;
};

UniformityReport uniformity(const SubsetOracle& x, std::uint32_t m,
                            std::uint64_t budget = kDefaultBudget,
                            std::uint64_t samples = 200000, std::uint64_t seed = 0,
                            unsigned workers = 0);

}  // namespace splinekit
