#pragma once

// Dense complex operators, Gram-weighted norms and the standard operator zoo.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ergolab/error.hpp"

namespace ergolab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

enum class NormKind {
  Spectral,      // largest singular value
  MaxColumnSum,  // induced l1 norm
  MaxRowSum,     // induced l-infinity norm
};

// Positive-definite inner product <x, y> = y* G x on C^dim.
//
// A diagonal Gram stores its weights; a dense one stores the upper Cholesky
// factor U with U* U = G. Norms of x are then ||U x||_2.
class GramGeometry {
 public:
  static GramGeometry diagonal(Eigen::VectorXd weights);
  static GramGeometry dense(const ComplexMatrix& gram);

  Index dim() const { return dim_; }
  bool is_diagonal() const { return diagonal_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  ComplexMatrix gram() const;
  // U * x
  ComplexMatrix apply_factor(const ComplexMatrix& x) const;
  // x * U^{-1}
  ComplexMatrix solve_factor_right(const ComplexMatrix& x) const;
  // U^{-1} * x
  ComplexMatrix solve_factor_left(const ComplexMatrix& x) const;

  double norm(const ComplexVector& x) const;
  Complex inner(const ComplexVector& x, const ComplexVector& y) const;

 private:
  GramGeometry() = default;

  Index dim_ = 0;
  bool diagonal_ = true;
  Eigen::VectorXd weights_;
  Eigen::VectorXd sqrt_weights_;
  ComplexMatrix factor_;  // upper triangular, dense case only
};

// A square operator with an optional geometry and an optional matrix-free
// left action X -> T X. When present the action must agree with `matrix`.
struct OperatorModel {
  ComplexMatrix matrix;
  std::optional<GramGeometry> geometry;
  std::string label;
  std::function<ComplexMatrix(const ComplexMatrix&)> left_action;

  Index dim() const { return matrix.rows(); }
  const GramGeometry* geometry_ptr() const { return geometry ? &*geometry : nullptr; }
  ComplexMatrix apply(const ComplexMatrix& x) const;
};

// Validates squareness, finiteness and geometry dimension.
OperatorModel make_operator(ComplexMatrix matrix, std::optional<GramGeometry> geometry = std::nullopt,
                            std::string label = {});

bool all_finite(const ComplexMatrix& a);

// Norm of A : (C^cols, dom) -> (C^rows, cod). Geometry is only meaningful
// for the spectral norm; the column/row-sum modes reject it.
double op_norm(const ComplexMatrix& a, const GramGeometry* dom = nullptr,
               const GramGeometry* cod = nullptr, NormKind kind = NormKind::Spectral);

// Norm of A measured in T's geometry on both sides.
double op_norm(const OperatorModel& t, const ComplexMatrix& a,
               NormKind kind = NormKind::Spectral);

double largest_singular_value(const ComplexMatrix& a);
double smallest_singular_value(const ComplexMatrix& a);

// ||x|| in T's geometry.
double vector_norm(const OperatorModel& t, const ComplexVector& x);

ComplexVector eigenvalues(const ComplexMatrix& a);
double spectral_radius(const ComplexMatrix& a);

ComplexMatrix identity(Index dim);

enum class ShiftDirection { Forward, Backward };

OperatorModel jordan_block(Index d, Complex eig);
OperatorModel diagonal_operator(const std::vector<Complex>& values);
OperatorModel dirichlet_shift(double alpha, Index n, ShiftDirection direction);
// Composite-trapezoid discretisation of (Vf)(t) = int_0^t f on t_i = i/N.
OperatorModel volterra_operator(Index n);
// I - V for the discretisation above, with a prefix-sum left action.
OperatorModel identity_minus_volterra(Index n);

ComplexMatrix power(const ComplexMatrix& t, long long n);
ComplexMatrix power(const OperatorModel& t, long long n);

}  // namespace ergolab
