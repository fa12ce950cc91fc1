#include "curvlab/operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace curvlab {

namespace {

const BivectorBasis& shared_basis(int n) {
  static std::mutex mutex;
  static std::unordered_map<int, std::unique_ptr<BivectorBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<BivectorBasis>(n)).first;
  return *it->second;
}

std::string quad_str(int i, int j, int k, int l) {
  std::ostringstream os;
  os << "(" << i + 1 << "," << j + 1 << "," << k + 1 << "," << l + 1 << ")";
  return os.str();
}

}  // namespace

SymmetricForm::SymmetricForm(int dim, Eigen::MatrixXd mat, std::string tag)
    : d(dim), S(std::move(mat)), frame_tag(std::move(tag)) {
  if (S.rows() != d || S.cols() != d)
    throw DimensionMismatch("SymmetricForm: matrix must be " + std::to_string(d) + "x" + std::to_string(d));
  const double asym = (S - S.transpose()).norm();
  if (asym > 1e-12 * (1.0 + S.norm()))
    throw InconsistentSymmetry("SymmetricForm: matrix is not symmetric");
  S = ((S + S.transpose()) / 2.0).eval();
}

SymmetricForm SymmetricForm::identity(int d) {
  return SymmetricForm(d, Eigen::MatrixXd::Identity(d, d));
}

TwoFormOperator::TwoFormOperator(int dim, Eigen::MatrixXd mat) : n(dim), M(std::move(mat)) {
  const int N = shared_basis(n).size();
  if (M.rows() != N || M.cols() != N)
    throw DimensionMismatch("TwoFormOperator: matrix must be " + std::to_string(N) + "x" + std::to_string(N) +
                            " for n = " + std::to_string(n));
}

const BivectorBasis& TwoFormOperator::basis() const { return shared_basis(n); }

double TwoFormOperator::operator_norm() const {
  if (M.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double TwoFormOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double TwoFormOperator::tensor(int i, int j, int k, int l) const {
  if (i == j || k == l) return 0.0;
  double sign = 1.0;
  if (i > j) {
    std::swap(i, j);
    sign = -sign;
  }
  if (k > l) {
    std::swap(k, l);
    sign = -sign;
  }
  const auto& B = basis();
  return sign * M(B.index(i, j), B.index(k, l));
}

double TwoFormOperator::tensor(const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                               const Eigen::VectorXd& Z, const Eigen::VectorXd& W) const {
  const auto& B = basis();
  return B.wedge_coords(X, Y).dot(M * B.wedge_coords(Z, W));
}

Eigen::VectorXd TwoFormOperator::curvature_vector(const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                                                  const Eigen::VectorXd& Z) const {
  const auto& B = basis();
  const Eigen::VectorXd r = M * B.wedge_coords(X, Y);
  // out_p = <Z ^ e_p, r>
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int a = 0; a < B.size(); ++a) {
    const auto [i, j] = B.pair(a);
    out[j] += r[a] * Z[i];
    out[i] -= r[a] * Z[j];
  }
  return out;
}

TwoFormOperator TwoFormOperator::operator+(const TwoFormOperator& o) const {
  if (n != o.n) throw DimensionMismatch("operator+: dimension mismatch");
  return TwoFormOperator(n, M + o.M);
}

TwoFormOperator TwoFormOperator::operator-(const TwoFormOperator& o) const {
  if (n != o.n) throw DimensionMismatch("operator-: dimension mismatch");
  return TwoFormOperator(n, M - o.M);
}

TwoFormOperator TwoFormOperator::operator*(double c) const { return TwoFormOperator(n, c * M); }

TwoFormOperator operator*(double c, const TwoFormOperator& T) { return T * c; }

double bianchi_residual(const TwoFormOperator& T) {
  // The cyclic sum vanishes identically unless i,j,k,l are distinct; iterate
  // i<j<k with all l for a small deterministic sweep.
  const int n = T.n;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (l == i || l == j || l == k) continue;
          const double b = T.tensor(i, j, k, l) + T.tensor(j, k, i, l) + T.tensor(k, i, j, l);
          worst = std::max(worst, std::abs(b));
        }
  return worst;
}

Eigen::MatrixXd bianchi_project(int n, const Eigen::MatrixXd& M) {
  const TwoFormOperator T(n, ((M + M.transpose()) / 2.0).eval());
  const BivectorBasis& B = T.basis();
  Eigen::MatrixXd out = T.M;
  // Subtract the four-form part: (1/3) of the cyclic sum, totally
  // antisymmetric, nonzero only on distinct quadruples.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = i + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          if (k == j || l == j) continue;
          const double w = (T.tensor(i, j, k, l) + T.tensor(j, k, i, l) + T.tensor(k, i, j, l)) / 3.0;
          // assign entry (i,j),(k,l) of the four-form with the right signs
          double v = T.tensor(i, j, k, l) - w;
          const int a = B.index(i, j);
          const int b = B.index(std::min(k, l), std::max(k, l));
          double sign = (k < l) ? 1.0 : -1.0;
          out(a, b) = sign * v;
          out(b, a) = sign * v;
        }
  return out;
}

CurvatureOperator::CurvatureOperator(unchecked_tag, int n_, Eigen::MatrixXd M_)
    : TwoFormOperator(n_, std::move(M_)) {}

CurvatureOperator unchecked_curvature_operator(int n, Eigen::MatrixXd M) {
  struct Access : CurvatureOperator {
    Access(int n_, Eigen::MatrixXd M_) : CurvatureOperator(unchecked_tag{}, n_, std::move(M_)) {}
  };
  return Access(n, std::move(M));
}

CurvatureOperator CurvatureOperator::from_matrix(int n, Eigen::MatrixXd M) {
  TwoFormOperator probe(n, std::move(M));
  const double asym = (probe.M - probe.M.transpose()).norm();
  if (asym > 1e-12 * (1.0 + probe.M.norm()))
    throw InconsistentSymmetry("curvature operator matrix is not symmetric (|M - M^T| = " +
                               std::to_string(asym) + ")");
  probe.M = ((probe.M + probe.M.transpose()) / 2.0).eval();
  const double res = bianchi_residual(probe);
  const double bound = 1e-10 * (1.0 + probe.M.norm());
  if (res > bound)
    throw BianchiViolation("first Bianchi identity violated: residual " + std::to_string(res) +
                           " exceeds " + std::to_string(bound));
  return unchecked_curvature_operator(n, std::move(probe.M));
}

CurvatureOperator CurvatureOperator::from_matrix_projected(int n, Eigen::MatrixXd M) {
  return unchecked_curvature_operator(n, bianchi_project(n, M));
}

CurvatureOperator CurvatureOperator::identity(int n) {
  const int N = shared_basis(n).size();
  return unchecked_curvature_operator(n, Eigen::MatrixXd::Identity(N, N));
}

CurvatureOperator CurvatureOperator::zero(int n) {
  const int N = shared_basis(n).size();
  return unchecked_curvature_operator(n, Eigen::MatrixXd::Zero(N, N));
}

CurvatureOperator CurvatureOperator::operator+(const CurvatureOperator& o) const {
  if (n != o.n) throw DimensionMismatch("operator+: dimension mismatch");
  return unchecked_curvature_operator(n, M + o.M);
}

CurvatureOperator CurvatureOperator::operator-(const CurvatureOperator& o) const {
  if (n != o.n) throw DimensionMismatch("operator-: dimension mismatch");
  return unchecked_curvature_operator(n, M - o.M);
}

CurvatureOperator CurvatureOperator::operator*(double c) const {
  return unchecked_curvature_operator(n, c * M);
}

CurvatureOperator operator*(double c, const CurvatureOperator& R) { return R * c; }

CurvatureOperator make_operator_from_tensor(int n, const std::vector<TensorEntry>& entries,
                                            bool project_bianchi) {
  const BivectorBasis& B = shared_basis(n);
  const int N = B.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd seen = Eigen::MatrixXd::Zero(N, N);
  double max_abs = 0.0;

  for (const TensorEntry& e : entries) {
    int i = e.ijkl[0], j = e.ijkl[1], k = e.ijkl[2], l = e.ijkl[3];
    for (int idx : e.ijkl)
      if (idx < 1 || idx > n)
        throw IndexOutOfRange("tensor entry " + quad_str(i - 1, j - 1, k - 1, l - 1) +
                              ": index " + std::to_string(idx) + " outside 1.." + std::to_string(n));
    --i, --j, --k, --l;
    max_abs = std::max(max_abs, std::abs(e.value));
    if (i == j || k == l) {
      if (std::abs(e.value) > 1e-12)
        throw InconsistentSymmetry("entry " + quad_str(i, j, k, l) +
                                   " must vanish by antisymmetry but has value " + std::to_string(e.value));
      continue;
    }
    double v = e.value;
    if (i > j) {
      std::swap(i, j);
      v = -v;
    }
    if (k > l) {
      std::swap(k, l);
      v = -v;
    }
    int a = B.index(i, j), b = B.index(k, l);
    if (a > b) std::swap(a, b);  // pair symmetry R_ijkl = R_klij
    if (seen(a, b) != 0.0 && std::abs(M(a, b) - v) > 1e-12)
      throw InconsistentSymmetry("entry " + quad_str(i, j, k, l) + " contradicts an earlier entry: " +
                                 std::to_string(v) + " vs " + std::to_string(M(a, b)));
    M(a, b) = v;
    seen(a, b) = 1.0;
  }
  M = ((M + M.transpose()).eval() - M.diagonal().asDiagonal().toDenseMatrix()).eval();

  if (project_bianchi) return CurvatureOperator::from_matrix_projected(n, M);

  const TwoFormOperator T(n, M);
  const double bound = 1e-10 * (1.0 + max_abs);
  // locate the worst quadruple for the error message
  double worst = 0.0;
  std::array<int, 4> worst_q{0, 0, 0, 0};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (l == i || l == j || l == k) continue;
          const double b = std::abs(T.tensor(i, j, k, l) + T.tensor(j, k, i, l) + T.tensor(k, i, j, l));
          if (b > worst) {
            worst = b;
            worst_q = {i, j, k, l};
          }
        }
  if (worst > bound)
    throw BianchiViolation("first Bianchi identity violated at quadruple " +
                           quad_str(worst_q[0], worst_q[1], worst_q[2], worst_q[3]) +
                           ": cyclic sum " + std::to_string(worst));
  return unchecked_curvature_operator(n, std::move(M));
}

SymmetricForm ricci(const TwoFormOperator& op) {
  const int n = op.n;
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += op.tensor(a, i, b, i);
      R(a, b) = R(b, a) = s;
    }
  return SymmetricForm(n, std::move(R));
}

double scalar_curvature(const TwoFormOperator& op) { return ricci(op).S.trace(); }

TwoFormOperator wedge(const SymmetricForm& A, const SymmetricForm& B) {
  if (A.d != B.d) throw DimensionMismatch("wedge: forms must share the ambient dimension");
  const int n = A.d;
  const BivectorBasis& basis = shared_basis(n);
  const int N = basis.size();
  Eigen::MatrixXd W(N, N);
  for (int col = 0; col < N; ++col) {
    const auto [i, j] = basis.pair(col);
    const Eigen::VectorXd a_i = A.S.col(i), b_j = B.S.col(j);
    const Eigen::VectorXd b_i = B.S.col(i), a_j = A.S.col(j);
    W.col(col) = 0.5 * (basis.wedge_coords(a_i, b_j) + basis.wedge_coords(b_i, a_j));
  }
  // symmetric up to rounding for symmetric A, B
  return TwoFormOperator(n, ((W + W.transpose()) / 2.0).eval());
}

namespace {

// Structure constants c_{abg} = <[E_a, E_b], E_g> of so(n) in the basis
// E_(i,j) = e_i e_j^T - e_j e_i^T with <A,B> = 1/2 tr(A^T B). Stored per a as
// sparse (b, g, c) triples.
struct SharpTable {
  int N = 0;
  std::vector<std::vector<std::array<int, 2>>> pos;  // c = +1 entries (b, g)
  std::vector<std::vector<std::array<int, 2>>> neg;  // c = -1 entries
};

const SharpTable& sharp_table(int n) {
  static std::mutex mutex;
  static std::map<int, SharpTable> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const BivectorBasis& B = shared_basis(n);
  SharpTable t;
  t.N = B.size();
  t.pos.resize(static_cast<size_t>(t.N));
  t.neg.resize(static_cast<size_t>(t.N));
  // [E_ij, E_kl] = d_jk E_il + d_il E_jk - d_ik E_jl - d_jl E_ik
  auto signed_index = [&](int i, int j, double& sign) -> int {
    if (i == j) return -1;
    if (i > j) {
      std::swap(i, j);
      sign = -sign;
    }
    return B.index(i, j);
  };
  for (int a = 0; a < t.N; ++a) {
    const auto [i, j] = B.pair(a);
    for (int b = 0; b < t.N; ++b) {
      const auto [k, l] = B.pair(b);
      const std::array<std::array<int, 3>, 4> terms = {{
          {j == k, i, l},
          {i == l, j, k},
          {-(i == k), j, l},
          {-(j == l), i, k},
      }};
      for (const auto& term : terms) {
        if (term[0] == 0) continue;
        double sign = static_cast<double>(term[0]);
        const int g = signed_index(term[1], term[2], sign);
        if (g < 0) continue;
        if (sign > 0)
          t.pos[static_cast<size_t>(a)].push_back({b, g});
        else
          t.neg[static_cast<size_t>(a)].push_back({b, g});
      }
    }
  }
  return cache.emplace(n, std::move(t)).first->second;
}

}  // namespace

TwoFormOperator sharp(const TwoFormOperator& S, const TwoFormOperator& T) {
  if (S.n != T.n) throw DimensionMismatch("sharp: operands must share n");
  const SharpTable& tbl = sharp_table(S.n);
  const int N = tbl.N;
  // (S#T)_ab = kappa * c_agd c_beh S_ge T_dh; kappa fixed by Rm # I = Ric^id - Rm.
  constexpr double kappa = 0.5;
  Eigen::MatrixXd out(N, N);
  auto accumulate = [&](int a, int b) {
    double s = 0.0;
    auto add = [&](const std::vector<std::array<int, 2>>& la, const std::vector<std::array<int, 2>>& lb,
                   double sign) {
      for (const auto& [g, d] : la)
        for (const auto& [e, h] : lb) s += sign * S.M(g, e) * T.M(d, h);
    };
    add(tbl.pos[static_cast<size_t>(a)], tbl.pos[static_cast<size_t>(b)], 1.0);
    add(tbl.pos[static_cast<size_t>(a)], tbl.neg[static_cast<size_t>(b)], -1.0);
    add(tbl.neg[static_cast<size_t>(a)], tbl.pos[static_cast<size_t>(b)], -1.0);
    add(tbl.neg[static_cast<size_t>(a)], tbl.neg[static_cast<size_t>(b)], 1.0);
    return kappa * s;
  };
  for (int a = 0; a < N; ++a) {
    out(a, a) = accumulate(a, a);
    for (int b = a + 1; b < N; ++b) out(a, b) = out(b, a) = accumulate(a, b);
  }
  return TwoFormOperator(S.n, std::move(out));
}

TwoFormOperator conjugate(const TwoFormOperator& op, const Eigen::MatrixXd& g) {
  const Eigen::MatrixXd G = op.basis().induced_map(g);
  return TwoFormOperator(op.n, (G * op.M * G.transpose()).eval());
}

CurvatureOperator conjugate(const CurvatureOperator& op, const Eigen::MatrixXd& g) {
  const Eigen::MatrixXd G = op.basis().induced_map(g);
  Eigen::MatrixXd M = G * op.M * G.transpose();
  return unchecked_curvature_operator(op.n, ((M + M.transpose()) / 2.0).eval());
}

}  // namespace curvlab
