#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

#include "curvlab/operator.hpp"
#include "curvlab/optimize.hpp"

namespace curvlab {

/// K(span{X,Y}) = R(X,Y,X,Y) / |X^Y|^2.
double sectional(const TwoFormOperator& op, const Eigen::VectorXd& X, const Eigen::VectorXd& Y);

/// k(A,B) = R(A,B,A,B), quadratic in each argument.
double k_unnormalized(const TwoFormOperator& op, const Eigen::VectorXd& A, const Eigen::VectorXd& B);

/// Deterministic orthonormal basis of the complement of a unit vector
/// (Householder reflection through the axis nearest e). n x (n-1) columns.
Eigen::MatrixXd householder_complement(const Eigen::VectorXd& e);

/// The flag form of a unit pole e: R_e(.,.) = R(e, ., e, .) restricted to the
/// orthogonal complement of e, expressed in a deterministic frame.
struct FlagForm {
  Eigen::VectorXd pole;
  Eigen::MatrixXd frame;  // n x (n-1), orthonormal basis of pole-perp
  SymmetricForm form;     // (n-1) x (n-1)

  Eigen::VectorXd eigenvalues() const;
};

FlagForm flag_form(const TwoFormOperator& op, const Eigen::VectorXd& e);

enum class Certification { multistart, grid };

struct PinchingOptions {
  long budget = 200000;
  uint64_t seed = 0;
  int starts = 64;
  enum class GridMode { automatic, on, off } grid_mode = GridMode::automatic;
};

struct FlagPinchingResult {
  std::optional<double> value;  // inf over poles of lambda_min/lambda_max
  Eigen::VectorXd pole;         // argmin witness
  Eigen::VectorXd eigvec_min;   // extreme eigenvectors at the witness, in R^n
  Eigen::VectorXd eigvec_max;
  long evaluations = 0;
  Certification certified_by = Certification::multistart;
};

/// Flag-curvature pinching: inf over unit e of the eigenvalue ratio of R_e
/// restricted to e-perp. Poles with lambda_max <= 1e-12 ||op|| are skipped;
/// undefined when every pole is skipped. Throws NegativeSectional when a
/// sampled flag eigenvalue drops below -1e-6 ||op||.
FlagPinchingResult flag_pinching(const TwoFormOperator& op, const PinchingOptions& options = {});

struct Plane {
  Eigen::VectorXd X, Y;
};

struct SectionalPinchingResult {
  std::optional<double> value;  // min K / max K
  double k_min = 0.0, k_max = 0.0;
  Plane min_plane, max_plane;
  long evaluations = 0;
  Certification certified_by = Certification::multistart;
};

SectionalPinchingResult sectional_pinching(const TwoFormOperator& op,
                                           const PinchingOptions& options = {});

/// Complex 2-plane in normal form: U = X + iY, V = Z + iW with X,Y,Z,W
/// pairwise orthogonal, |X| = |Z| = 1, t = |Y|^2 and xi = |W|^2 in [0,1],
/// ordered so that xi <= t.
class CanonicalPlane {
 public:
  CanonicalPlane(Eigen::VectorXd X, Eigen::VectorXd Y, Eigen::VectorXd Z, Eigen::VectorXd W);

  const Eigen::VectorXd& X() const { return x_; }
  const Eigen::VectorXd& Y() const { return y_; }
  const Eigen::VectorXd& Z() const { return z_; }
  const Eigen::VectorXd& W() const { return w_; }
  double t() const { return y_.squaredNorm(); }
  double xi() const { return w_.squaredNorm(); }
  int n() const { return static_cast<int>(x_.size()); }

  // bilinear inner products of U = X + iY, V = Z + iW
  std::complex<double> uu() const;
  std::complex<double> vv() const;
  std::complex<double> uv() const;

 private:
  Eigen::VectorXd x_, y_, z_, w_;
};

/// R(U,V,Ubar,Vbar) through the Bianchi expansion
/// k(X,Z) + k(Y,W) + k(X,W) + k(Y,Z) - 2 R(X,Y,Z,W).
double complex_sectional(const TwoFormOperator& op, const CanonicalPlane& p);

/// Same quantity evaluated directly on the complexified two-vector.
double complex_sectional_hermitian(const TwoFormOperator& op, const CanonicalPlane& p);

struct CscResult {
  double value = 0.0;
  std::optional<CanonicalPlane> witness;
  long evaluations = 0;
  Certification certified_by = Certification::multistart;
};

/// Infimum of complex sectional curvature over canonical planes, including
/// the degenerate strata (t = 0 and/or xi = 0; n = 3 forces W = 0). The
/// isotropic stratum is searched with the same (budget, seed) as a standalone
/// min_isotropic call, so min_complex_sectional <= min_isotropic holds
/// structurally for matching options.
CscResult min_complex_sectional(const TwoFormOperator& op, const PinchingOptions& options = {});

/// Infimum over isotropic planes only (t = xi = 1). Requires n >= 4.
CscResult min_isotropic(const TwoFormOperator& op, const PinchingOptions& options = {});

/// Ric^id - Rm, the curvature term of the Weitzenboeck formula on 2-forms.
TwoFormOperator bochner_two_form_operator(const TwoFormOperator& op);
double bochner_min_eigenvalue(const TwoFormOperator& op);

}  // namespace curvlab
