#include "ergolab/linop.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ergolab {

namespace {

constexpr double kHermitianTol = 1e-12;

bool is_real(const ComplexMatrix& a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (a(i, j).imag() != 0.0) return false;
  return true;
}

template <typename Matrix>
Eigen::VectorXd singular_values(const Matrix& a) {
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues();
}

Eigen::VectorXd singular_values_of(const ComplexMatrix& a) {
  if (is_real(a)) {
    Eigen::MatrixXd r = a.real();
    return singular_values(r);
  }
  return singular_values(a);
}

// sigma_max^2 as the top eigenvalue of the smaller of A* A and A A*. Squaring
// costs nothing in relative accuracy at the top of the spectrum and is
// several times cheaper than a full SVD.
template <typename Matrix>
double top_singular_value(const Matrix& a) {
  const Matrix h = a.rows() >= a.cols() ? Matrix(a.adjoint() * a) : Matrix(a * a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

}  // namespace

GramGeometry GramGeometry::diagonal(Eigen::VectorXd weights) {
  if (weights.size() < 1) throw Error(Errc::BadDimension, "diagonal Gram needs dim >= 1");
  for (Index i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights(i)) || weights(i) <= 0.0)
      throw Error(Errc::NonPositiveDefiniteGram, "diagonal Gram weight " + std::to_string(i) +
                                                     " is not positive");
  }
  GramGeometry g;
  g.dim_ = weights.size();
  g.diagonal_ = true;
  g.sqrt_weights_ = weights.cwiseSqrt();
  g.weights_ = std::move(weights);
  return g;
}

GramGeometry GramGeometry::dense(const ComplexMatrix& gram) {
  if (gram.rows() < 1 || gram.rows() != gram.cols())
    throw Error(Errc::BadDimension, "Gram matrix must be square with dim >= 1");
  if (!all_finite(gram)) throw Error(Errc::NonFinite, "Gram matrix has non-finite entries");
  const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  if ((gram - gram.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale)
    throw Error(Errc::NonPositiveDefiniteGram, "Gram matrix is not Hermitian");

  Eigen::LLT<ComplexMatrix> llt(gram);
  if (llt.info() != Eigen::Success)
    throw Error(Errc::NonPositiveDefiniteGram, "Cholesky factorisation failed");
  ComplexMatrix upper = llt.matrixU();
  for (Index i = 0; i < upper.rows(); ++i) {
    if (!(upper(i, i).real() > 0.0))
      throw Error(Errc::NonPositiveDefiniteGram, "Gram matrix is not positive definite");
  }
  GramGeometry g;
  g.dim_ = gram.rows();
  g.diagonal_ = false;
  g.factor_ = std::move(upper);
  return g;
}

ComplexMatrix GramGeometry::gram() const {
  if (diagonal_) return weights_.cast<Complex>().asDiagonal();
  return factor_.adjoint() * factor_;
}

ComplexMatrix GramGeometry::apply_factor(const ComplexMatrix& x) const {
  if (x.rows() != dim_) throw Error(Errc::DimensionMismatch, "apply_factor");
  if (diagonal_) return sqrt_weights_.cast<Complex>().asDiagonal() * x;
  return factor_.triangularView<Eigen::Upper>() * x;
}

ComplexMatrix GramGeometry::solve_factor_right(const ComplexMatrix& x) const {
  if (x.cols() != dim_) throw Error(Errc::DimensionMismatch, "solve_factor_right");
  if (diagonal_) return x * sqrt_weights_.cwiseInverse().cast<Complex>().asDiagonal();
  ComplexMatrix y = x;
  factor_.triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(y);
  return y;
}

ComplexMatrix GramGeometry::solve_factor_left(const ComplexMatrix& x) const {
  if (x.rows() != dim_) throw Error(Errc::DimensionMismatch, "solve_factor_left");
  if (diagonal_) return sqrt_weights_.cwiseInverse().cast<Complex>().asDiagonal() * x;
  return factor_.triangularView<Eigen::Upper>().solve(x);
}

double GramGeometry::norm(const ComplexVector& x) const {
  if (x.size() != dim_) throw Error(Errc::DimensionMismatch, "Gram norm");
  if (diagonal_) return std::sqrt((weights_.array() * x.array().abs2()).sum());
  return (factor_.triangularView<Eigen::Upper>() * x).norm();
}

Complex GramGeometry::inner(const ComplexVector& x, const ComplexVector& y) const {
  if (x.size() != dim_ || y.size() != dim_) throw Error(Errc::DimensionMismatch, "Gram inner");
  if (diagonal_) return (y.conjugate().array() * weights_.cast<Complex>().array() * x.array()).sum();
  const ComplexVector ux = factor_.triangularView<Eigen::Upper>() * x;
  const ComplexVector uy = factor_.triangularView<Eigen::Upper>() * y;
  return uy.dot(ux);
}

ComplexMatrix OperatorModel::apply(const ComplexMatrix& x) const {
  if (x.rows() != dim()) throw Error(Errc::DimensionMismatch, "operator apply");
  if (left_action) return left_action(x);
  return matrix * x;
}

bool all_finite(const ComplexMatrix& a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
  return true;
}

OperatorModel make_operator(ComplexMatrix matrix, std::optional<GramGeometry> geometry,
                            std::string label) {
  if (matrix.rows() < 1 || matrix.rows() != matrix.cols())
    throw Error(Errc::BadDimension, "operator matrix must be square with dim >= 1");
  if (!all_finite(matrix)) throw Error(Errc::NonFinite, "operator matrix has non-finite entries");
  if (geometry && geometry->dim() != matrix.rows())
    throw Error(Errc::DimensionMismatch, "geometry dim " + std::to_string(geometry->dim()) +
                                             " != operator dim " + std::to_string(matrix.rows()));
  OperatorModel t;
  t.matrix = std::move(matrix);
  t.geometry = std::move(geometry);
  t.label = std::move(label);
  return t;
}

double largest_singular_value(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.size() == 1) return std::abs(a(0, 0));
  if (is_real(a)) return top_singular_value(Eigen::MatrixXd(a.real()));
  return top_singular_value(a);
}

double smallest_singular_value(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.size() == 1) return std::abs(a(0, 0));
  const Eigen::VectorXd s = singular_values_of(a);
  return s(s.size() - 1);
}

double op_norm(const ComplexMatrix& a, const GramGeometry* dom, const GramGeometry* cod,
               NormKind kind) {
  if (dom && dom->dim() != a.cols())
    throw Error(Errc::DimensionMismatch, "domain geometry dim does not match operator columns");
  if (cod && cod->dim() != a.rows())
    throw Error(Errc::DimensionMismatch, "codomain geometry dim does not match operator rows");

  switch (kind) {
    case NormKind::MaxColumnSum:
    case NormKind::MaxRowSum: {
      if (dom || cod)
        throw Error(Errc::InvalidArgument, "column/row-sum norms take no Gram geometry");
      if (a.size() == 0) return 0.0;
      const Eigen::MatrixXd m = a.cwiseAbs();
      return kind == NormKind::MaxColumnSum ? m.colwise().sum().maxCoeff()
                                            : m.rowwise().sum().maxCoeff();
    }
    case NormKind::Spectral:
      break;
  }

  if (!dom && !cod) return largest_singular_value(a);
  ComplexMatrix b = cod ? cod->apply_factor(a) : a;
  if (dom) b = dom->solve_factor_right(b);
  return largest_singular_value(b);
}

double op_norm(const OperatorModel& t, const ComplexMatrix& a, NormKind kind) {
  const GramGeometry* g = kind == NormKind::Spectral ? t.geometry_ptr() : nullptr;
  return op_norm(a, g, g, kind);
}

double vector_norm(const OperatorModel& t, const ComplexVector& x) {
  if (x.size() != t.dim()) throw Error(Errc::DimensionMismatch, "vector_norm");
  return t.geometry ? t.geometry->norm(x) : x.norm();
}

ComplexVector eigenvalues(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw Error(Errc::BadDimension, "eigenvalues of non-square matrix");
  if (a.rows() == 1) return a.col(0);
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, /*computeEigenvectors=*/false);
  return solver.eigenvalues();
}

double spectral_radius(const ComplexMatrix& a) { return eigenvalues(a).cwiseAbs().maxCoeff(); }

ComplexMatrix identity(Index dim) { return ComplexMatrix::Identity(dim, dim); }

OperatorModel jordan_block(Index d, Complex eig) {
  if (d < 1) throw Error(Errc::BadDimension, "jordan_block needs d >= 1");
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    m(i, i) = eig;
    if (i + 1 < d) m(i, i + 1) = 1.0;
  }
  return make_operator(std::move(m), std::nullopt,
                       "jordan(" + std::to_string(d) + ")");
}

OperatorModel diagonal_operator(const std::vector<Complex>& values) {
  if (values.empty()) throw Error(Errc::BadDimension, "diagonal operator needs dim >= 1");
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(values.size()),
                                        static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = values[i];
  return make_operator(std::move(m), std::nullopt, "diag");
}

OperatorModel dirichlet_shift(double alpha, Index n, ShiftDirection direction) {
  if (!(alpha > -1.0)) throw Error(Errc::InvalidArgument, "dirichlet_shift needs alpha > -1");
  if (n < 2) throw Error(Errc::BadDimension, "dirichlet_shift needs N >= 2");
  const double exponent = (1.0 - alpha) / 2.0;
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Index k = 0; k + 1 < n; ++k) {
    const double w = std::pow(static_cast<double>(k + 2) / static_cast<double>(k + 1), exponent);
    if (direction == ShiftDirection::Forward)
      m(k + 1, k) = w;
    else
      m(k, k + 1) = w;
  }
  return make_operator(std::move(m), std::nullopt,
                       std::string("dirichlet_") +
                           (direction == ShiftDirection::Forward ? "forward" : "backward"));
}

OperatorModel volterra_operator(Index n) {
  if (n < 2) throw Error(Errc::BadDimension, "volterra_operator needs N >= 2");
  const double h = 1.0 / static_cast<double>(n);
  ComplexMatrix m = ComplexMatrix::Zero(n + 1, n + 1);
  for (Index i = 1; i <= n; ++i) {
    for (Index j = 0; j <= i; ++j) m(i, j) = h;
    m(i, 0) = h / 2.0;
    m(i, i) = h / 2.0;
  }
  return make_operator(std::move(m), std::nullopt, "volterra(" + std::to_string(n) + ")");
}

OperatorModel identity_minus_volterra(Index n) {
  OperatorModel v = volterra_operator(n);
  OperatorModel t = make_operator(identity(n + 1) - v.matrix, std::nullopt,
                                  "I-volterra(" + std::to_string(n) + ")");
  const double h = 1.0 / static_cast<double>(n);
  t.left_action = [n, h](const ComplexMatrix& x) {
    // (V x)_i = h (x_0/2 + x_1 + ... + x_{i-1} + x_i/2), (V x)_0 = 0.
    ComplexMatrix out = x;
    Eigen::RowVectorXcd prefix = x.row(0);
    for (Index i = 1; i <= n; ++i) {
      out.row(i) -= h * (prefix - 0.5 * x.row(0) + 0.5 * x.row(i));
      prefix += x.row(i);
    }
    return out;
  };
  return t;
}

ComplexMatrix power(const ComplexMatrix& t, long long n) {
  if (t.rows() != t.cols()) throw Error(Errc::BadDimension, "power of non-square matrix");
  if (n < 0) throw Error(Errc::InvalidArgument, "power needs n >= 0");
  ComplexMatrix result = identity(t.rows());
  ComplexMatrix base = t;
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      result = first ? base : ComplexMatrix(result * base);
      first = false;
    }
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

ComplexMatrix power(const OperatorModel& t, long long n) { return power(t.matrix, n); }

}  // namespace ergolab
