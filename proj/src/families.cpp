#include "modortho/families.hpp"

#include "modortho/quadrature.hpp"

#include <cmath>
#include <memory>
#include <sstream>

namespace modortho {

namespace {

void check_param(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

// Squared monic-recurrence off-diagonal of the Jacobi family.  The k = 1
// value is the cancelled form of the general expression, which is 0/0 at
// a + b = -1.
double jacobi_beta_sq(double a, double b, Index k) {
  if (k == 1)
    return 4.0 * (1.0 + a) * (1.0 + b) /
           ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
  const double t = 2.0 * k + a + b;
  return 4.0 * k * (k + a) * (k + b) * (k + a + b) / (t * t * (t * t - 1.0));
}

}  // namespace

double OrthonormalFamily::diag(Index n) const {
  switch (kind) {
    case Kind::Jacobi: {
      if (n == 0) return (b - a) / (a + b + 2.0);
      const double t = 2.0 * n + a + b;
      return (b * b - a * a) / (t * (t + 2.0));
    }
    case Kind::Laguerre:
      return 2.0 * n + a + 1.0;
    case Kind::Hermite:
    case Kind::ChebyshevT:
    case Kind::ChebyshevU:
    case Kind::Legendre:
      return 0.0;
    case Kind::Custom:
      return custom_diag(n);
  }
  return 0.0;
}

double OrthonormalFamily::offdiag(Index n) const {
  switch (kind) {
    case Kind::Jacobi:
      return std::sqrt(jacobi_beta_sq(a, b, n + 1));
    case Kind::Laguerre:
      return -std::sqrt((n + 1.0) * (n + a + 1.0));
    case Kind::Hermite:
      return std::sqrt((n + 1.0) / 2.0);
    case Kind::ChebyshevT:
      return n == 0 ? 1.0 / std::sqrt(2.0) : 0.5;
    case Kind::ChebyshevU:
      return 0.5;
    case Kind::Legendre:
      return (n + 1.0) / std::sqrt((2.0 * n + 1.0) * (2.0 * n + 3.0));
    case Kind::Custom:
      return custom_offdiag(n);
  }
  return 0.0;
}

OrthonormalFamily OrthonormalFamily::jacobi(double a, double b) {
  check_param(a > -1.0 && b > -1.0, "jacobi: parameters must exceed -1");
  OrthonormalFamily f;
  f.kind = Kind::Jacobi;
  f.a = a;
  f.b = b;
  f.mass = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                    std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
  f.sigma << 1.0, 0.0, -1.0;
  f.tau << b - a, -(a + b + 2.0);
  f.support_lo = -1.0;
  f.support_hi = 1.0;
  return f;
}

OrthonormalFamily OrthonormalFamily::laguerre(double a) {
  check_param(a > -1.0, "laguerre: parameter must exceed -1");
  OrthonormalFamily f;
  f.kind = Kind::Laguerre;
  f.a = a;
  f.mass = std::exp(std::lgamma(a + 1.0));
  f.sigma << 0.0, 1.0, 0.0;
  f.tau << a + 1.0, -1.0;
  f.support_lo = 0.0;
  f.support_hi = std::numeric_limits<double>::infinity();
  return f;
}

OrthonormalFamily OrthonormalFamily::hermite() {
  OrthonormalFamily f;
  f.kind = Kind::Hermite;
  f.mass = std::sqrt(M_PI);
  f.sigma << 1.0, 0.0, 0.0;
  f.tau << 0.0, -2.0;
  f.support_lo = -std::numeric_limits<double>::infinity();
  f.support_hi = std::numeric_limits<double>::infinity();
  return f;
}

OrthonormalFamily OrthonormalFamily::chebyshev_t() {
  OrthonormalFamily f;
  f.kind = Kind::ChebyshevT;
  f.mass = M_PI;
  f.sigma << 1.0, 0.0, -1.0;
  f.tau << 0.0, -1.0;
  return f;
}

OrthonormalFamily OrthonormalFamily::chebyshev_u() {
  OrthonormalFamily f;
  f.kind = Kind::ChebyshevU;
  f.mass = M_PI / 2.0;
  f.sigma << 1.0, 0.0, -1.0;
  f.tau << 0.0, -3.0;
  return f;
}

OrthonormalFamily OrthonormalFamily::legendre() {
  OrthonormalFamily f;
  f.kind = Kind::Legendre;
  f.mass = 2.0;
  f.sigma << 1.0, 0.0, -1.0;
  f.tau << 0.0, -2.0;
  return f;
}

OrthonormalFamily OrthonormalFamily::raised() const {
  switch (kind) {
    case Kind::Jacobi:
      return jacobi(a + 1.0, b + 1.0);
    case Kind::Laguerre:
      return laguerre(a + 1.0);
    case Kind::Hermite:
      return hermite();
    case Kind::ChebyshevT:
      return jacobi(0.5, 0.5);
    case Kind::ChebyshevU:
      return jacobi(1.5, 1.5);
    case Kind::Legendre:
      return jacobi(1.0, 1.0);
    case Kind::Custom:
      throw std::logic_error("raised: custom family lacks weight data");
  }
  throw std::logic_error("raised: unreachable");
}

OrthonormalFamily OrthonormalFamily::from_jacobi_matrix(const SymBanded& X,
                                                        double mass) {
  if (X.bandwidth != 1)
    throw std::invalid_argument("from_jacobi_matrix: bandwidth must be 1");
  auto state = std::make_shared<SymBanded>(X);
  auto ensure = [state](Index n) {
    if (n >= state->size) *state = state->extended(std::max<Index>(2 * n, 16));
  };
  OrthonormalFamily f;
  f.kind = Kind::Custom;
  f.mass = mass;
  f.has_weight_data = false;
  f.support_lo = -std::numeric_limits<double>::infinity();
  f.support_hi = std::numeric_limits<double>::infinity();
  f.custom_diag = [state, ensure](Index n) {
    ensure(n);
    return (*state)(n, n);
  };
  f.custom_offdiag = [state, ensure](Index n) {
    ensure(n + 1);
    return (*state)(n, n + 1);
  };
  return f;
}

std::string OrthonormalFamily::name() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Jacobi: os << "jacobi(" << a << "," << b << ")"; break;
    case Kind::Laguerre: os << "laguerre(" << a << ")"; break;
    case Kind::Hermite: os << "hermite"; break;
    case Kind::ChebyshevT: os << "chebyshevt"; break;
    case Kind::ChebyshevU: os << "chebyshevu"; break;
    case Kind::Legendre: os << "legendre"; break;
    case Kind::Custom: os << "custom"; break;
  }
  return os.str();
}

SymBanded jacobi_matrix(const OrthonormalFamily& family, Index n) {
  if (n < 1) throw std::invalid_argument("jacobi_matrix: n must be >= 1");
  SymBanded X(1, n);
  for (Index i = 0; i < n; ++i) X.bands(0, i) = family.diag(i);
  for (Index i = 0; i + 1 < n; ++i) X.bands(1, i) = family.offdiag(i);
  X.generator = [family](Index m) { return jacobi_matrix(family, m); };
  return X;
}

namespace {

// fa*A + fb*B on the union of the bands.
Banded lincomb(double fa, const Banded& A, double fb, const Banded& B) {
  Banded C(A.rows(), A.cols(), std::min(A.dmin(), B.dmin()),
           std::max(A.dmax(), B.dmax()));
  for (Index j = 0; j < C.cols(); ++j) {
    Index ilo = std::max<Index>(0, j - C.dmax());
    Index ihi = std::min<Index>(C.rows() - 1, j - C.dmin());
    for (Index i = ilo; i <= ihi; ++i) C.ref(i, j) = fa * A(i, j) + fb * B(i, j);
  }
  return C;
}

Banded shift_diag(const Banded& A, double shift) {
  Banded C = A;
  for (Index i = 0; i < std::min(C.rows(), C.cols()); ++i)
    C.ref(i, i) += shift;
  return C;
}

}  // namespace

SymBanded op_poly(const OrthonormalFamily& family, const Eigen::VectorXd& coeffs,
                  Index n) {
  if (coeffs.size() == 0) throw std::domain_error("op_poly: empty coefficients");
  Index d = coeffs.size() - 1;
  while (d > 0 && coeffs(d) == 0.0) --d;

  const Index m = n + d;
  Banded b1(m, m, 0, 0), b2(m, m, 0, 0);  // b_{k+1}, b_{k+2}, start at zero
  Banded X;
  if (d > 0) X = jacobi_matrix(family, m).to_banded();
  for (Index k = d; k >= 0; --k) {
    // b_k = c_k I + (X - alpha_k I) b_{k+1} / beta_k - (beta_k/beta_{k+1}) b_{k+2}
    Banded bk;
    if (k == d) {
      bk = Banded(m, m, 0, 0);
    } else {
      const double ak = family.diag(k), bkk = family.offdiag(k);
      Banded Xb = multiply(X, b1);
      bk = lincomb(1.0 / bkk, Xb, -ak / bkk, b1);
      if (k + 1 <= d - 1) {
        const double ratio = bkk / family.offdiag(k + 1);
        bk = lincomb(1.0, bk, -ratio, b2);
      }
    }
    bk = shift_diag(bk, coeffs(k));
    b2 = std::move(b1);
    b1 = std::move(bk);
  }
  const double scale = 1.0 / std::sqrt(family.mass);

  SymBanded out(static_cast<int>(d), n);
  for (int dg = 0; dg <= d; ++dg)
    for (Index i = 0; i + dg < n; ++i)
      out.bands(dg, i) = 0.5 * scale * (b1(i, i + dg) + b1(i + dg, i));
  Eigen::VectorXd c = coeffs;
  out.generator = [family, c](Index nn) { return op_poly(family, c, nn); };
  return out;
}

Eigen::VectorXd coeffs_of_polynomial(const OrthonormalFamily& family,
                                     const std::function<double(double)>& f,
                                     Index degree) {
  QuadratureRule rule = gauss_rule(family, degree + 1);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(degree + 1);
  for (Index i = 0; i < rule.nodes.size(); ++i) {
    Eigen::VectorXd p = eval_basis(family, degree + 1, rule.nodes(i));
    c += rule.weights(i) * f(rule.nodes(i)) * p;
  }
  return c;
}

Eigen::VectorXd clenshaw_eval(const OrthonormalFamily& family,
                              const Eigen::VectorXd& coeffs,
                              const Eigen::VectorXd& points) {
  const Index K = coeffs.size() - 1;
  Eigen::VectorXd out(points.size());
  const double p0 = 1.0 / std::sqrt(family.mass);
  for (Index j = 0; j < points.size(); ++j) {
    const double x = points(j);
    double b1 = 0.0, b2 = 0.0;
    for (Index k = K; k >= 0; --k) {
      const double bk = coeffs(k) + (x - family.diag(k)) / family.offdiag(k) * b1 -
                        (k + 1 <= K ? family.offdiag(k) / family.offdiag(k + 1) * b2
                                    : 0.0);
      b2 = b1;
      b1 = bk;
    }
    out(j) = b1 * p0;
  }
  return out;
}

Eigen::VectorXd eval_basis(const OrthonormalFamily& family, Index n, double x) {
  Eigen::VectorXd p(n);
  p(0) = 1.0 / std::sqrt(family.mass);
  if (n > 1) p(1) = (x - family.diag(0)) * p(0) / family.offdiag(0);
  for (Index k = 1; k + 1 < n; ++k)
    p(k + 1) =
        ((x - family.diag(k)) * p(k) - family.offdiag(k - 1) * p(k - 1)) /
        family.offdiag(k);
  return p;
}

}  // namespace modortho
