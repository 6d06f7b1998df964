#include "modortho/modify.hpp"

#include <cmath>

namespace modortho {

namespace {

Index poly_degree(const Eigen::VectorXd& coeffs) {
  if (coeffs.size() == 0) throw std::domain_error("empty polynomial coefficients");
  Index d = coeffs.size() - 1;
  while (d > 0 && coeffs(d) == 0.0) --d;
  return d;
}

Eigen::VectorXd tri_mul(const TriBanded& T, const Eigen::VectorXd& x) {
  if (x.size() != T.size)
    throw std::invalid_argument("tri_mul: dimension mismatch");
  const Index n = T.size;
  const int b = T.bandwidth;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  if (T.shape == TriBanded::Shape::Upper) {
    for (Index i = 0; i < n; ++i)
      for (Index j = i; j <= std::min<Index>(n - 1, i + b); ++j)
        y(i) += T(i, j) * x(j);
  } else {
    for (Index i = 0; i < n; ++i)
      for (Index j = std::max<Index>(0, i - b); j <= i; ++j)
        y(i) += T(i, j) * x(j);
  }
  return y;
}

}  // namespace

ConnectionFactors connect_poly(const OrthonormalFamily& family,
                               const Eigen::VectorXd& u_coeffs, Index n,
                               double eps) {
  ConnectionFactors cf;
  cf.kind = ConnCase::Poly;
  cf.n = n;
  cf.eps = eps;
  cf.family = family;
  cf.R = cholesky_banded(op_poly(family, u_coeffs, n), n);
  return cf;
}

ConnectionFactors connect_sqrt_poly(const OrthonormalFamily& family,
                                    const Eigen::VectorXd& sqrt_u_coeffs, Index n,
                                    double eps) {
  ConnectionFactors cf;
  cf.kind = ConnCase::SqrtPoly;
  cf.n = n;
  cf.eps = eps;
  cf.family = family;
  // Rotations eliminating column j reach rows up to j + deg, so the last deg
  // columns of a section's R factor feel the truncation; factor a guard-padded
  // section and keep the leading n columns, which match the infinite factor.
  const Index d = poly_degree(sqrt_u_coeffs);
  const Index m = n + d;
  auto [Q, R] = qr_banded(op_poly(family, sqrt_u_coeffs, m).to_banded(), m);
  cf.Q = std::move(Q);
  cf.R = R.section(n);
  return cf;
}

ConnectionFactors connect_reciprocal(const OrthonormalFamily& family,
                                     const Eigen::VectorXd& v_coeffs, Index n,
                                     double eps, ReciprocalMethod method,
                                     Index window_max) {
  ConnectionFactors cf;
  cf.n = n;
  cf.eps = eps;
  cf.family = family;
  SymBanded V = op_poly(family, v_coeffs, n);
  if (method == ReciprocalMethod::ReverseCholesky) {
    cf.kind = ConnCase::ReciprocalRC;
    AdaptiveResult res = adaptive_reverse_cholesky(V, n, eps, window_max);
    cf.L = std::move(res.factor);
    cf.window = res.window;
    cf.criterion = res.criterion;
  } else {
    cf.kind = ConnCase::ReciprocalQL;
    AdaptiveResult res = adaptive_ql(V, n, eps, window_max);
    cf.L = std::move(res.factor);
    cf.Q = std::move(res.q_window);
    cf.window = res.window;
    cf.criterion = res.criterion;
  }
  return cf;
}

ConnectionFactors connect_rational_case1(const OrthonormalFamily& family,
                                         const Eigen::VectorXd& u_coeffs,
                                         const Eigen::VectorXd& v_coeffs, Index n,
                                         double eps, Index window_max) {
  const Index du = poly_degree(u_coeffs);
  const Index dv = poly_degree(v_coeffs);
  const int g = static_cast<int>(du + dv);

  SymBanded V = op_poly(family, v_coeffs, n);
  double try_eps = eps;
  for (int attempt = 0;; ++attempt) {
    AdaptiveResult res = adaptive_ql(V, n, try_eps, window_max);
    const Index N = res.window;
    const TriBanded& LN = res.factor_window;
    SymBanded U = op_poly(family, u_coeffs, N);

    // Slab S = U_N L_N^T restricted to the first n columns, then Q^T S.
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(N, n);
    const int lb = LN.bandwidth;  // <= 2 dv
    for (Index j = 0; j < n; ++j)
      for (Index k = std::max<Index>(0, j - lb); k <= j; ++k) {
        const double ljk = LN(j, k);  // (L^T)_{k,j}
        if (ljk == 0.0) continue;
        for (Index i = std::max<Index>(0, k - du);
             i <= std::min<Index>(N - 1, k + du); ++i)
          S(i, j) += U(i, k) * ljk;
      }
    apply_givens_inplace(res.q_window, /*transpose=*/true, S);
    Eigen::MatrixXd M = S.topRows(n);

    const double scale = M.cwiseAbs().maxCoeff();
    const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * scale) {
      if (attempt >= 1)
        throw std::runtime_error(
            "rational case 1: window insufficient (asymmetric slab product)");
      try_eps = std::max(try_eps * 1e-2, 1e-15);
      continue;
    }
    M = 0.5 * (M + M.transpose().eval());

    const double band_tol = std::max(100.0 * eps, 1e-12) * scale;
    SymBanded Msym(g, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = i; j < n; ++j) {
        if (j - i <= g)
          Msym.ref(i, j) = M(i, j);
        else if (std::abs(M(i, j)) > band_tol)
          throw std::runtime_error(
              "rational case 1: slab product exceeds its bandwidth bound");
      }

    ConnectionFactors cf;
    cf.kind = ConnCase::Rational1;
    cf.n = n;
    cf.eps = eps;
    cf.family = family;
    cf.R = cholesky_banded(Msym, n);
    cf.L = std::move(res.factor);
    cf.Q = std::move(res.q_window);
    cf.window = N;
    cf.criterion = res.criterion;
    return cf;
  }
}

ConnectionFactors connect_rational_case2(const OrthonormalFamily& family,
                                         const Eigen::VectorXd& u_coeffs,
                                         const Eigen::VectorXd& v_coeffs, Index n,
                                         double eps, Index window_max) {
  const Index du = poly_degree(u_coeffs);
  const int bu = static_cast<int>(du);
  const Index m = n + 2 * du + 2;  // guard so the returned n-section is exact

  SymBanded V = op_poly(family, v_coeffs, m);
  AdaptiveResult res = adaptive_reverse_cholesky(V, m, eps, window_max);
  const TriBanded& Lm = res.factor;
  SymBanded U = op_poly(family, u_coeffs, m);
  Banded Ub = U.to_banded();

  // Column j of Mb = L U L^{-1}: forward solve, banded multiply, banded
  // multiply by L.
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(bu + 1, n);  // Mb(j+d, j)
  Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(bu + 1, n);  // Mb(j-d, j)
  double scale = 0.0, dust = 0.0;
  const int lb = Lm.bandwidth;
  Eigen::VectorXd ej = Eigen::VectorXd::Zero(m);
  for (Index j = 0; j < n; ++j) {
    ej.setZero();
    ej(j) = 1.0;
    Eigen::VectorXd y = solve_tri(Lm, ej);
    Eigen::VectorXd z = multiply(Ub, Eigen::MatrixXd(y)).col(0);
    Eigen::VectorXd col = Eigen::VectorXd::Zero(m);
    for (Index i = 0; i < m; ++i) {
      double acc = 0.0;
      for (Index k = std::max<Index>(0, i - lb); k <= i; ++k)
        acc += Lm(i, k) * z(k);
      col(i) = acc;
    }
    for (int d = 0; d <= bu; ++d) {
      if (j + d < m) lower(d, j) = col(j + d);
      if (j - d >= 0) upper(d, j) = col(j - d);
    }
    for (Index i = 0; i < std::min<Index>(m, n + du); ++i) {
      const double a = std::abs(col(i));
      scale = std::max(scale, a);
      const Index dij = i > j ? i - j : j - i;
      if (dij > du) dust = std::max(dust, a);
    }
  }
  const double band_tol = std::max(100.0 * eps, 1e-12) * scale;
  if (dust > band_tol)
    throw std::runtime_error(
        "rational case 2: conjugated operator exceeds its bandwidth bound");

  double asym = 0.0;
  SymBanded Msym(bu, n);
  for (int d = 0; d <= bu; ++d)
    for (Index i = 0; i + d < n; ++i) {
      asym = std::max(asym, std::abs(lower(d, i) - upper(d, i + d)));
      Msym.bands(d, i) = 0.5 * (lower(d, i) + upper(d, i + d));
    }
  if (asym > 1e-8 * scale)
    throw std::runtime_error(
        "rational case 2: window insufficient (asymmetric conjugation)");

  ConnectionFactors cf;
  cf.kind = ConnCase::Rational2;
  cf.n = n;
  cf.eps = eps;
  cf.family = family;
  cf.R = cholesky_banded(Msym, n);
  cf.L = res.factor.section(n);
  cf.window = res.window;
  cf.criterion = res.criterion;
  return cf;
}

ConnectionFactors connect_rational_auto(const OrthonormalFamily& family,
                                        const Eigen::VectorXd& u_coeffs,
                                        const Eigen::VectorXd& v_coeffs, Index n,
                                        double eps, Index window_max) {
  const Index du = poly_degree(u_coeffs);
  const Index dv = poly_degree(v_coeffs);
  const double p0 = 1.0 / std::sqrt(family.mass);
  if (dv == 0) {
    const double vconst = v_coeffs(0) * p0;
    if (!(vconst != 0.0)) throw std::domain_error("rational: v is zero");
    return connect_poly(family, u_coeffs.head(du + 1) / vconst, n, eps);
  }
  if (du == 0) {
    const double uconst = u_coeffs(0) * p0;
    if (!(uconst > 0.0)) throw std::domain_error("rational: u must be positive");
    return connect_reciprocal(family, v_coeffs.head(dv + 1) / uconst, n, eps,
                              ReciprocalMethod::ReverseCholesky, window_max);
  }
  return connect_rational_case2(family, u_coeffs, v_coeffs, n, eps, window_max);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> connection_diagonals(
    const ConnectionFactors& cf) {
  const Index n = cf.n;
  Eigen::VectorXd diag(n), super(n - 1);
  switch (cf.kind) {
    case ConnCase::Poly:
    case ConnCase::SqrtPoly:
      for (Index i = 0; i < n; ++i) diag(i) = cf.R(i, i);
      for (Index i = 0; i + 1 < n; ++i) super(i) = cf.R(i, i + 1);
      break;
    case ConnCase::ReciprocalRC:
    case ConnCase::ReciprocalQL:
      for (Index i = 0; i < n; ++i) diag(i) = 1.0 / cf.L(i, i);
      for (Index i = 0; i + 1 < n; ++i)
        super(i) = -cf.L(i + 1, i) / (cf.L(i, i) * cf.L(i + 1, i + 1));
      break;
    case ConnCase::Rational1:
    case ConnCase::Rational2:
      for (Index i = 0; i < n; ++i) diag(i) = cf.R(i, i) / cf.L(i, i);
      for (Index i = 0; i + 1 < n; ++i)
        super(i) = (cf.R(i, i + 1) - diag(i) * cf.L(i + 1, i)) /
                   cf.L(i + 1, i + 1);
      break;
  }
  return {std::move(diag), std::move(super)};
}

SymBanded modified_jacobi(const ConnectionFactors& cf, const SymBanded& XP,
                          Index n) {
  if (n > cf.n || n < 2)
    throw std::invalid_argument("modified_jacobi: need 2 <= n <= certified size");
  if (XP.size < n)
    throw std::invalid_argument("modified_jacobi: Jacobi section too small");
  auto [rd, rs] = connection_diagonals(cf);

  SymBanded XQ(1, n - 1);
  XQ.bands(0, 0) = (rd(0) * XP(0, 0) + rs(0) * XP(1, 0)) / rd(0);
  for (Index i = 0; i + 2 < n; ++i)
    XQ.bands(1, i) = rd(i + 1) * XP(i + 1, i) / rd(i);
  for (Index i = 1; i + 1 < n; ++i)
    XQ.bands(0, i) =
        (rd(i) * XP(i, i) + rs(i) * XP(i + 1, i) - XQ.bands(1, i - 1) * rs(i - 1)) /
        rd(i);
  return XQ;
}

double modified_mass(const ConnectionFactors& cf) {
  auto [rd, rs] = connection_diagonals(cf);
  return cf.family.mass * rd(0) * rd(0);
}

Eigen::VectorXd convert_coeffs(const ConnectionFactors& cf,
                               const Eigen::VectorXd& coeffs,
                               ConvertDirection direction) {
  const Index m = coeffs.size();
  if (m > cf.n)
    throw std::invalid_argument("convert_coeffs: coefficients exceed certified size");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(cf.n);
  c.head(m) = coeffs;

  const bool fwd = direction == ConvertDirection::OriginalToModified;
  Eigen::VectorXd out;
  switch (cf.kind) {
    case ConnCase::Poly:
    case ConnCase::SqrtPoly:
      out = fwd ? tri_mul(cf.R, c) : Eigen::VectorXd(solve_tri(cf.R, c));
      break;
    case ConnCase::ReciprocalRC:
    case ConnCase::ReciprocalQL:
      out = fwd ? Eigen::VectorXd(solve_tri(transposed(cf.L), c))
                : tri_mul(transposed(cf.L), c);
      break;
    case ConnCase::Rational1:
    case ConnCase::Rational2:
      if (fwd) {
        Eigen::VectorXd y = solve_tri(transposed(cf.L), c);
        out = tri_mul(cf.R, y);
      } else {
        Eigen::VectorXd y = solve_tri(cf.R, c);
        out = tri_mul(transposed(cf.L), y);
      }
      break;
  }
  return out.head(m);
}

MMatrixReport is_m_matrix(const Eigen::MatrixXd& A, double tol) {
  MMatrixReport rep;
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j) {
      const bool bad = (i == j) ? !(A(i, j) > 0.0) : (A(i, j) > tol);
      if (bad) return {false, i, j};
    }
  return rep;
}

MMatrixReport is_m_matrix(const TriBanded& T, double tol) {
  return is_m_matrix(T.dense(), tol);
}

MMatrixReport is_m_matrix(const SymBanded& A, double tol) {
  return is_m_matrix(A.dense(), tol);
}

}  // namespace modortho
