#include "modortho/calculus.hpp"

#include "modortho/quadrature.hpp"

#include <cmath>

namespace modortho {

namespace {

double eigenvalue_lambda(const OrthonormalFamily& f, Index k) {
  const double sigma2 = f.sigma(2) * 2.0;  // sigma''
  const double tau1 = f.tau(1);            // tau'
  return -(k / 2.0) * ((k - 1.0) * sigma2 + 2.0 * tau1);
}

Index poly_degree(const Eigen::VectorXd& coeffs) {
  Index d = coeffs.size() - 1;
  while (d > 0 && coeffs(d) == 0.0) --d;
  return d;
}

// Applies the single-superdiagonal classical D to a coefficient vector.
Eigen::VectorXd apply_diff(const DiffMatrix& D, const Eigen::VectorXd& c) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(c.size());
  for (Index i = 0; i < c.size(); ++i) {
    Index hi = std::min<Index>(c.size() - 1, i + D.upper_bandwidth);
    for (Index j = i + 1; j <= hi; ++j) y(i) += D.D(i, j) * c(j);
  }
  return y;
}

// Extracts the strictly upper band of a dense operator after asserting the
// analytically-zero region is numerically dust, then drops it.
DiffMatrix banded_from_dense(const Eigen::MatrixXd& M, Index n, int ubw,
                             const OrthonormalFamily& source,
                             const OrthonormalFamily& target) {
  const double scale = std::max(M.cwiseAbs().maxCoeff(), 1e-300);
  DiffMatrix out;
  out.D = Banded(n, n, 1, ubw);
  out.upper_bandwidth = ubw;
  out.size = n;
  out.source = source;
  out.target = target;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (j > i && j <= i + ubw) {
        out.D.ref(i, j) = M(i, j);
      } else if (std::abs(M(i, j)) > 1e-10 * scale) {
        throw std::runtime_error(
            "differentiation matrix exceeds its bandwidth bound "
            "(boundary assumptions violated or window insufficient)");
      }
    }
  return out;
}

// Modified family whose Jacobi matrix extends lazily by rebuilding the
// connection at larger sizes (deterministic: leading sections never change).
OrthonormalFamily lazy_modified_family(
    const std::function<ConnectionFactors(Index)>& make_cf,
    const OrthonormalFamily& base) {
  auto gen = [make_cf, base](Index q) {
    ConnectionFactors cf = make_cf(q + 1);
    return modified_jacobi(cf, jacobi_matrix(base, q + 1), q + 1);
  };
  SymBanded X0 = gen(16);
  X0.generator = gen;  // SymBanded::extended re-attaches it after each call
  const double mass = modified_mass(make_cf(2));
  return OrthonormalFamily::from_jacobi_matrix(X0, mass);
}

}  // namespace

DiffMatrix classical_diff(const OrthonormalFamily& family, Index n) {
  if (!family.has_weight_data)
    throw std::domain_error("classical_diff: family lacks weight data");
  DiffMatrix out;
  out.D = Banded(n, n, 1, 1);
  out.upper_bandwidth = 1;
  out.size = n;
  out.source = family;
  out.target = family.raised();
  // The spectral value fixes the magnitude; the sign follows from the leading
  // coefficients, which alternate when the recurrence off-diagonals are
  // negative (the Laguerre convention here).
  double sign_src = 1.0, sign_tgt = 1.0;
  for (Index k = 0; k + 1 < n; ++k) {
    sign_src *= family.offdiag(k) < 0.0 ? -1.0 : 1.0;  // beta_0 .. beta_k
    const double lam = eigenvalue_lambda(family, k + 1);
    if (lam < 0.0)
      throw std::domain_error("classical_diff: negative spectral value");
    out.D.ref(k, k + 1) = sign_src * sign_tgt * std::sqrt(lam);
    sign_tgt *= out.target.offdiag(k) < 0.0 ? -1.0 : 1.0;  // raised beta_0 .. beta_{k-1}
  }
  return out;
}

DiffMatrix modified_diff(const OrthonormalFamily& family,
                         const Eigen::VectorXd& u_coeffs,
                         const Eigen::VectorXd& v_coeffs, Index n, double eps) {
  const Index du = poly_degree(u_coeffs);
  const Index dv = poly_degree(v_coeffs);
  const int ubw = static_cast<int>(du + dv) + 1;
  const Index m = n + ubw + 4;

  ConnectionFactors cf_rat = connect_rational_auto(family, u_coeffs, v_coeffs, m, eps);
  OrthonormalFamily raised = family.raised();
  Eigen::VectorXd u2 = coeffs_of_polynomial(
      raised,
      [&](double x) {
        Eigen::VectorXd pt(1);
        pt(0) = x;
        const double ux = clenshaw_eval(family, u_coeffs, pt)(0);
        return ux * ux;
      },
      2 * du);
  ConnectionFactors cf_step = connect_poly(raised, u2, m, eps);
  DiffMatrix Dcl = classical_diff(family, m);

  Eigen::MatrixXd M(m, m);
  Eigen::VectorXd ej = Eigen::VectorXd::Zero(m);
  for (Index j = 0; j < m; ++j) {
    ej.setZero();
    ej(j) = 1.0;
    Eigen::VectorXd a =
        convert_coeffs(cf_rat, ej, ConvertDirection::ModifiedToOriginal);
    Eigen::VectorXd b = apply_diff(Dcl, a);
    M.col(j) = convert_coeffs(cf_step, b, ConvertDirection::OriginalToModified);
  }

  Eigen::VectorXd uc = u_coeffs, vc = v_coeffs;
  OrthonormalFamily source = lazy_modified_family(
      [family, uc, vc, eps](Index q) {
        return connect_rational_auto(family, uc, vc, q, eps);
      },
      family);
  OrthonormalFamily target = lazy_modified_family(
      [raised, u2, eps](Index q) { return connect_poly(raised, u2, q, eps); },
      raised);
  return banded_from_dense(M.topLeftCorner(n, n), n, ubw, source, target);
}

std::vector<DiffMatrix> higher_diff_chain(const OrthonormalFamily& family,
                                          const Eigen::VectorXd& u_coeffs,
                                          Index n, int k, double eps) {
  if (k < 1) throw std::invalid_argument("higher_diff_chain: k >= 1");
  const Index du = poly_degree(u_coeffs);
  const int ubw = static_cast<int>(du) + 1;
  const Index m = n + (k + 2) * (static_cast<Index>(du) + 4) + 8;

  auto u_eval = [&](double x) {
    Eigen::VectorXd pt(1);
    pt(0) = x;
    return clenshaw_eval(family, u_coeffs, pt)(0);
  };
  auto sigma_eval = [&](double x) {
    return family.sigma(0) + family.sigma(1) * x + family.sigma(2) * x * x;
  };
  const Index d_us = du + 2;  // deg(u sigma) upper bound

  // S_j is orthonormal for u^j sigma^{j-1} w; the ladder is built from
  // polynomial connections only.
  ConnectionFactors cf1 = connect_poly(family, u_coeffs, m, eps);
  Eigen::VectorXd uc = u_coeffs;
  OrthonormalFamily S1 = lazy_modified_family(
      [family, uc, eps](Index q) { return connect_poly(family, uc, q, eps); },
      family);

  OrthonormalFamily raised = family.raised();
  Eigen::VectorXd u2 = coeffs_of_polynomial(
      raised, [&](double x) { const double ux = u_eval(x); return ux * ux; },
      2 * du);
  ConnectionFactors cfA = connect_poly(raised, u2, m, eps);
  OrthonormalFamily S2 = lazy_modified_family(
      [raised, u2, eps](Index q) { return connect_poly(raised, u2, q, eps); },
      raised);

  DiffMatrix Dcl = classical_diff(family, m);
  Eigen::MatrixXd Dprev(m, m);
  Eigen::VectorXd ej = Eigen::VectorXd::Zero(m);
  for (Index j = 0; j < m; ++j) {
    ej.setZero();
    ej(j) = 1.0;
    Eigen::VectorXd a = convert_coeffs(cf1, ej, ConvertDirection::ModifiedToOriginal);
    Eigen::VectorXd b = apply_diff(Dcl, a);
    Dprev.col(j) = convert_coeffs(cfA, b, ConvertDirection::OriginalToModified);
  }

  std::vector<DiffMatrix> chain;
  chain.push_back(banded_from_dense(Dprev.topLeftCorner(n, n), n, ubw, S1, S2));

  OrthonormalFamily Sprev = S1, Scur = S2;
  for (int level = 2; level <= k; ++level) {
    Eigen::VectorXd us_prev = coeffs_of_polynomial(
        Sprev, [&](double x) { return u_eval(x) * sigma_eval(x); }, d_us);
    Eigen::VectorXd us_cur = coeffs_of_polynomial(
        Scur, [&](double x) { return u_eval(x) * sigma_eval(x); }, d_us);
    ConnectionFactors cfB = connect_poly(Sprev, us_prev, m, eps);
    ConnectionFactors cfAj = connect_poly(Scur, us_cur, m, eps);
    OrthonormalFamily Scur_copy = Scur;
    OrthonormalFamily Snext = lazy_modified_family(
        [Scur_copy, us_cur, eps](Index q) {
          return connect_poly(Scur_copy, us_cur, q, eps);
        },
        Scur_copy);

    Eigen::MatrixXd Dj(m, m);
    for (Index j = 0; j < m; ++j) {
      ej.setZero();
      ej(j) = 1.0;
      Eigen::VectorXd a = convert_coeffs(cfB, ej, ConvertDirection::ModifiedToOriginal);
      Eigen::VectorXd b = Dprev * a;
      Dj.col(j) = convert_coeffs(cfAj, b, ConvertDirection::OriginalToModified);
    }
    chain.push_back(banded_from_dense(Dj.topLeftCorner(n, n), n, ubw, Scur, Snext));
    Dprev = std::move(Dj);
    Sprev = Scur;
    Scur = Snext;
  }
  return chain;
}

Eigen::MatrixXd integration_pinv(const DiffMatrix& D, Index n) {
  if (D.size < n + 1)
    throw std::invalid_argument("integration_pinv: D section too small");
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < std::min<Index>(n, i + D.upper_bandwidth); ++j)
      B(i, j) = D.D(i, j + 1);
  for (Index i = 0; i < n; ++i)
    if (B(i, i) == 0.0)
      throw std::runtime_error("integration_pinv: singular shifted block");
  Eigen::MatrixXd Dplus = Eigen::MatrixXd::Zero(n + 1, n);
  Dplus.bottomRows(n) =
      B.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
  return Dplus;
}

SymBanded weak_laplacian(const DiffMatrix& D, Index n) {
  if (D.size < n)
    throw std::invalid_argument("weak_laplacian: D section too small");
  const int bw = 2 * D.upper_bandwidth;
  SymBanded A(bw, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j <= std::min<Index>(n - 1, i + bw); ++j) {
      double acc = 0.0;
      for (Index kk = std::max<Index>(0, j - D.upper_bandwidth); kk < i; ++kk)
        acc += D.D(kk, i) * D.D(kk, j);
      A.ref(i, j) = acc;
    }
  return A;
}

}  // namespace modortho
