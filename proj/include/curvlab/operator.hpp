#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

#include "curvlab/bivector.hpp"
#include "curvlab/errors.hpp"

namespace curvlab {

/// Symmetric bilinear form on an ambient subspace of dimension d. The frame
/// tag names the subspace the matrix refers to ("standard" for R^n itself).
struct SymmetricForm {
  int d = 0;
  Eigen::MatrixXd S;
  std::string frame_tag = "standard";

  SymmetricForm() = default;
  SymmetricForm(int dim, Eigen::MatrixXd mat, std::string tag = "standard");

  static SymmetricForm identity(int d);
  double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    return x.dot(S * y);
  }
};

/// Symmetric endomorphism of two-vectors on R^n: the common shape of
/// curvature operators, wedge products and # products. No Bianchi
/// requirement at this level.
struct TwoFormOperator {
  int n = 0;
  Eigen::MatrixXd M;  // N x N symmetric, N = n(n-1)/2

  TwoFormOperator() = default;
  TwoFormOperator(int dim, Eigen::MatrixXd mat);

  const BivectorBasis& basis() const;
  int N() const { return static_cast<int>(M.rows()); }

  double frobenius_norm() const { return M.norm(); }
  double operator_norm() const;  // spectral norm (symmetric)
  double min_eigenvalue() const;

  /// R(e_i, e_j, e_k, e_l), 0-based indices, sign bookkeeping included.
  double tensor(int i, int j, int k, int l) const;
  /// R(X, Y, Z, W) = <M (X^Y), Z^W>.
  double tensor(const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                const Eigen::VectorXd& Z, const Eigen::VectorXd& W) const;

  /// The (1,3) tensor R(X,Y)Z by metric duality: <R(X,Y)Z, W> = R(X,Y,Z,W).
  Eigen::VectorXd curvature_vector(const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                                   const Eigen::VectorXd& Z) const;

  TwoFormOperator operator+(const TwoFormOperator& o) const;
  TwoFormOperator operator-(const TwoFormOperator& o) const;
  TwoFormOperator operator*(double c) const;
};

TwoFormOperator operator*(double c, const TwoFormOperator& T);

/// Max over index quadruples of |R_ijkl + R_jkil + R_kijl| for the tensor
/// induced by a symmetric two-form endomorphism.
double bianchi_residual(const TwoFormOperator& T);

/// Orthogonal projection onto the subspace of operators satisfying the first
/// Bianchi identity (removes the totally antisymmetric four-form part).
Eigen::MatrixXd bianchi_project(int n, const Eigen::MatrixXd& M);

/// Algebraic curvature operator: symmetric endomorphism of two-vectors
/// satisfying the first Bianchi identity, in the convention
/// R(X,Y,Z,W) = <Rm(X^Y), Z^W> with the declared-orthonormal bivector basis.
class CurvatureOperator : public TwoFormOperator {
 public:
  CurvatureOperator() = default;

  /// Validates symmetry (to 1e-12 relative, then symmetrized exactly) and the
  /// Bianchi residual bound 1e-10 * (1 + ||M||).
  static CurvatureOperator from_matrix(int n, Eigen::MatrixXd M);
  /// Same but projects onto the Bianchi subspace instead of rejecting.
  static CurvatureOperator from_matrix_projected(int n, Eigen::MatrixXd M);
  static CurvatureOperator identity(int n);
  static CurvatureOperator zero(int n);

  CurvatureOperator operator+(const CurvatureOperator& o) const;
  CurvatureOperator operator-(const CurvatureOperator& o) const;
  CurvatureOperator operator*(double c) const;

 private:
  struct unchecked_tag {};
  CurvatureOperator(unchecked_tag, int n, Eigen::MatrixXd M);
  friend CurvatureOperator unchecked_curvature_operator(int, Eigen::MatrixXd);
};

CurvatureOperator operator*(double c, const CurvatureOperator& R);

/// Internal: wrap an already-validated matrix without re-checking.
CurvatureOperator unchecked_curvature_operator(int n, Eigen::MatrixXd M);

/// Tensor entry with 1-based indices, the file-format convention.
struct TensorEntry {
  std::array<int, 4> ijkl;
  double value = 0.0;
};

/// Builds an operator from (i,j,k,l) -> value entries, closing the set under
/// R_ijkl = -R_jikl = R_klij. Duplicates must agree to 1e-12 after sign
/// normalization; the result must satisfy Bianchi to 1e-10 * (1 + max |v|)
/// unless project_bianchi is set.
CurvatureOperator make_operator_from_tensor(int n, const std::vector<TensorEntry>& entries,
                                            bool project_bianchi = false);

/// Ric(X,Y) = sum_i R(X, E_i, Y, E_i) over the standard orthonormal frame.
SymmetricForm ricci(const TwoFormOperator& op);
double scalar_curvature(const TwoFormOperator& op);

/// A^B(X^Y) = 1/2 (A(X)^B(Y) + B(X)^A(Y)), extended bilinearly.
TwoFormOperator wedge(const SymmetricForm& A, const SymmetricForm& B);

/// Bilinear # product through the Lie-algebra structure constants of so(n)
/// under the identification of two-vectors with skew matrices. Normalized so
/// that Rm # I = Ric^id - Rm for every Bianchi operator.
TwoFormOperator sharp(const TwoFormOperator& S, const TwoFormOperator& T);

/// Conjugation by an orthogonal map g of R^n (operator transforms by the
/// induced map on two-vectors).
TwoFormOperator conjugate(const TwoFormOperator& op, const Eigen::MatrixXd& g);
CurvatureOperator conjugate(const CurvatureOperator& op, const Eigen::MatrixXd& g);

}  // namespace curvlab
