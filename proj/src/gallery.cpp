#include "curvlab/gallery.hpp"

#include <cmath>
#include <sstream>

#include "curvlab/rng.hpp"

namespace curvlab {
namespace gallery {

CurvatureOperator round_sphere(int n) {
  if (n < 3) throw DimensionTooSmall("round_sphere requires n >= 3");
  return CurvatureOperator::identity(n);
}

CurvatureOperator section4_example(int n) {
  if (n < 4) throw DimensionTooSmall("section4_example requires n >= 4");
  const BivectorBasis basis(n);
  Eigen::VectorXd diag(basis.size());
  for (int a = 0; a < basis.size(); ++a) {
    const auto [i, j] = basis.pair(a);
    if (i == 0 && j == 1)
      diag[a] = 4.0;
    else if (i <= 1)
      diag[a] = 2.0;
    else
      diag[a] = 1.0;
  }
  return CurvatureOperator::from_matrix(n, diag.asDiagonal());
}

Eigen::MatrixXd standard_complex_structure(int m) {
  const int n = 2 * m;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < m; ++a) {
    J(2 * a + 1, 2 * a) = 1.0;   // J e_{2a} = e_{2a+1}
    J(2 * a, 2 * a + 1) = -1.0;  // J e_{2a+1} = -e_{2a}
  }
  return J;
}

CurvatureOperator fubini_study(int m) {
  if (m < 2) throw DimensionTooSmall("fubini_study requires m >= 2");
  const int n = 2 * m;
  const Eigen::MatrixXd J = standard_complex_structure(m);
  const BivectorBasis basis(n);
  const int N = basis.size();
  // R(X,Y,Z,W) = <X,Z><Y,W> - <X,W><Y,Z> + <JX,Z><JY,W> - <JX,W><JY,Z>
  //              + 2 <JX,Y><JZ,W>, holomorphic sectional curvature 4
  auto entry = [&](int i, int j, int k, int l) {
    auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    auto Jd = [&](int a, int b) { return J(b, a); };  // <J e_a, e_b>
    return d(i, k) * d(j, l) - d(i, l) * d(j, k) + Jd(i, k) * Jd(j, l) - Jd(i, l) * Jd(j, k) +
           2.0 * Jd(i, j) * Jd(k, l);
  };
  Eigen::MatrixXd M(N, N);
  for (int a = 0; a < N; ++a) {
    const auto [i, j] = basis.pair(a);
    for (int b = a; b < N; ++b) {
      const auto [k, l] = basis.pair(b);
      M(a, b) = M(b, a) = entry(i, j, k, l);
    }
  }
  return CurvatureOperator::from_matrix(n, std::move(M));
}

CurvatureOperator random_bianchi(int n, uint64_t seed) {
  Rng rng(derive_seed(seed, 0xb1a2c41));
  const BivectorBasis basis(n);
  return CurvatureOperator::from_matrix_projected(n, rng.symmetric_gaussian(basis.size()));
}

FlagPinchedSample random_flag_pinched(int n, double lambda_target, uint64_t seed,
                                      const FlagPinchedOptions& opt) {
  if (!(lambda_target > 0.0 && lambda_target <= 1.0))
    throw BadParams("random_flag_pinched: lambda_target must lie in (0, 1]");
  if (lambda_target == 1.0) {
    FlagPinchedSample s;
    s.op = CurvatureOperator::identity(n);
    s.measured_flag_pinching = 1.0;
    s.mix = 1.0;
    return s;
  }

  // clip the raw draw to nonnegative sectional curvature by shifting with I
  const CurvatureOperator raw = random_bianchi(n, seed);
  PinchingOptions scan;
  scan.budget = opt.pinching_budget;
  scan.seed = derive_seed(seed, 0x5ca2);
  scan.grid_mode = PinchingOptions::GridMode::off;
  const SectionalPinchingResult kscan = sectional_pinching(raw, scan);
  // pad the clip so optimizer slack in the k-scan cannot leave poles below
  // the NegativeSectional threshold
  const double shift = std::max(0.0, -kscan.k_min) * 1.05 + 1e-4 * raw.frobenius_norm();
  const CurvatureOperator clipped = raw + shift * CurvatureOperator::identity(n);

  PinchingOptions probe;
  probe.budget = opt.pinching_budget;
  probe.seed = derive_seed(seed, 0xf1a8);
  probe.grid_mode = PinchingOptions::GridMode::off;

  auto measure = [&](double s) {
    const CurvatureOperator blend = (1.0 - s) * clipped + s * CurvatureOperator::identity(n);
    try {
      const FlagPinchingResult f = flag_pinching(blend, probe);
      return std::make_pair(blend, f.value.value_or(1.0));
    } catch (const NegativeSectional& e) {
      throw SamplerFailed(std::string("random_flag_pinched: curvature clip insufficient: ") +
                          e.what());
    }
  };

  const double hi_accept = lambda_target + opt.window;
  double lo = 0.0, hi = 1.0;
  auto [op_lo, lambda_lo] = measure(lo);
  if (lambda_lo >= lambda_target && lambda_lo <= hi_accept) {
    FlagPinchedSample s{op_lo, lambda_lo, lo};
    return s;
  }
  for (int it = 0; it < opt.max_bisections; ++it) {
    const double mid = (lo + hi) / 2.0;
    auto [op_mid, lambda_mid] = measure(mid);
    if (lambda_mid >= lambda_target && lambda_mid <= hi_accept) {
      FlagPinchedSample s{op_mid, lambda_mid, mid};
      return s;
    }
    if (lambda_mid < lambda_target)
      lo = mid;
    else
      hi = mid;
  }
  std::ostringstream os;
  os << "random_flag_pinched: bisection exhausted for target " << lambda_target << " (n = " << n
     << ", seed = " << seed << "), final bracket [" << lo << ", " << hi << "]";
  throw SamplerFailed(os.str());
}

}  // namespace gallery
}  // namespace curvlab
