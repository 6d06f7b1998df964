#pragma once

#include "modortho/banded.hpp"

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <string>

namespace modortho {

/// Descriptor of an orthonormal polynomial family: three-term recurrence
///   x p_n = beta_{n-1} p_{n-1} + alpha_n p_n + beta_n p_{n+1},
/// total mass mu_0, and the weight data sigma, tau with (sigma w)' = tau w
/// used to build differentiation operators.
struct OrthonormalFamily {
  enum class Kind { Jacobi, Laguerre, Hermite, ChebyshevT, ChebyshevU, Legendre, Custom };

  Kind kind = Kind::Legendre;
  double a = 0.0, b = 0.0;  // parameters (Jacobi: a, b; Laguerre: a)
  double mass = 2.0;        // mu_0 = integral of the weight
  Eigen::Vector3d sigma = Eigen::Vector3d::Zero();  // monomial coeffs, degree <= 2
  Eigen::Vector2d tau = Eigen::Vector2d::Zero();    // monomial coeffs, degree <= 1
  double support_lo = -1.0, support_hi = 1.0;
  bool has_weight_data = true;

  // Custom families carry their recurrence as closures.
  std::function<double(Index)> custom_diag, custom_offdiag;

  double diag(Index n) const;
  double offdiag(Index n) const;  // beta_n, nonzero

  static OrthonormalFamily jacobi(double a, double b);
  static OrthonormalFamily laguerre(double a);
  static OrthonormalFamily hermite();
  static OrthonormalFamily chebyshev_t();
  static OrthonormalFamily chebyshev_u();
  static OrthonormalFamily legendre();

  /// Family orthonormal with respect to sigma * w: the target basis of the
  /// classical differentiation operator.
  OrthonormalFamily raised() const;

  /// Family defined by an explicit Jacobi matrix (with generator) and mass.
  static OrthonormalFamily from_jacobi_matrix(const SymBanded& X, double mass);

  std::string name() const;
};

/// Symmetric tridiagonal section of the multiplication-by-x operator,
/// lazily extendable.
SymBanded jacobi_matrix(const OrthonormalFamily& family, Index n);

/// u(X) for u given by expansion coefficients in the family's own basis.
/// All returned entries (i, j) with max(i, j) < n are exact; the internal
/// computation runs at size n + deg(u).  Lazily extendable.
SymBanded op_poly(const OrthonormalFamily& family, const Eigen::VectorXd& coeffs,
                  Index n);

/// Coefficients of a polynomial of known degree in the family's basis,
/// computed with a (degree+1)-point Gaussian rule.
Eigen::VectorXd coeffs_of_polynomial(const OrthonormalFamily& family,
                                     const std::function<double(double)>& f,
                                     Index degree);

/// Evaluates sum_k coeffs_k p_k(x) at each point by the backward Clenshaw
/// recurrence.
Eigen::VectorXd clenshaw_eval(const OrthonormalFamily& family,
                              const Eigen::VectorXd& coeffs,
                              const Eigen::VectorXd& points);

/// p_0(x), ..., p_{n-1}(x) by the forward recurrence.
Eigen::VectorXd eval_basis(const OrthonormalFamily& family, Index n, double x);

}  // namespace modortho
