#include "modortho/calculus.hpp"
#include "modortho/families.hpp"
#include "modortho/infdim.hpp"
#include "modortho/modify.hpp"
#include "modortho/quadrature.hpp"
#include "modortho/toeplitz.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace modortho;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string family = "legendre";
  std::string param;
  std::string u_spec, v_spec, sqrt_u_spec, sqrt_v_spec;
  std::string basis = "monomial";  // or "family"
  bool roots = false;
  Index n = 32;
  double eps = 1e-14;
  Index nmax = 1048576;
  std::string conn_case = "auto";
  std::string out;
  std::string format = "csv";
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    vals.push_back(std::stod(tok));
  }
  return vals;
}

OrthonormalFamily make_family(const CommonOpts& o) {
  std::vector<double> p = o.param.empty() ? std::vector<double>{} : parse_list(o.param);
  if (o.family == "legendre") return OrthonormalFamily::legendre();
  if (o.family == "hermite") return OrthonormalFamily::hermite();
  if (o.family == "chebyshevt") return OrthonormalFamily::chebyshev_t();
  if (o.family == "chebyshevu") return OrthonormalFamily::chebyshev_u();
  if (o.family == "laguerre") {
    if (p.size() != 1) throw CLI::ValidationError("--param", "laguerre needs --param a");
    return OrthonormalFamily::laguerre(p[0]);
  }
  if (o.family == "jacobi") {
    if (p.size() != 2) throw CLI::ValidationError("--param", "jacobi needs --param a,b");
    return OrthonormalFamily::jacobi(p[0], p[1]);
  }
  throw CLI::ValidationError("--family", "unknown family " + o.family);
}

// Polynomial spec -> expansion coefficients in the family's basis.
// Default input is monomial coefficients (degree capped at 30 for
// conditioning); --basis family passes coefficients through unchanged;
// --roots interprets the list as r_1,...,r_k,leading.
Eigen::VectorXd poly_coeffs(const OrthonormalFamily& fam, const std::string& spec,
                            const std::string& basis, bool roots) {
  std::vector<double> vals = parse_list(spec);
  if (vals.empty()) throw CLI::ValidationError("polynomial", "empty list");
  if (roots) {
    const double leading = vals.back();
    std::vector<double> rts(vals.begin(), vals.end() - 1);
    auto f = [rts, leading](double x) {
      double acc = leading;
      for (double r : rts) acc *= (x - r);
      return acc;
    };
    return coeffs_of_polynomial(fam, f, static_cast<Index>(rts.size()));
  }
  if (basis == "family") {
    return Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
  }
  if (vals.size() > 31)
    throw CLI::ValidationError("polynomial",
                               "monomial input capped at degree 30; use --basis family");
  auto f = [vals](double x) {
    double acc = 0.0;
    for (auto it = vals.rbegin(); it != vals.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  return coeffs_of_polynomial(fam, f, static_cast<Index>(vals.size() - 1));
}

Eigen::VectorXd const_one(const OrthonormalFamily& fam) {
  Eigen::VectorXd c(1);
  c(0) = std::sqrt(fam.mass);  // c0 * p0 == 1
  return c;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

class Output {
public:
  Output(const CommonOpts& o) : format_(o.format) {
    if (!o.out.empty()) {
      file_.open(o.out);
      if (!file_) throw std::runtime_error("cannot open output file " + o.out);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }
  bool json_mode() const { return format_ == "json"; }

private:
  std::string format_;
  std::ofstream file_;
};

void write_csv_header(std::ostream& os, const json& meta,
                      const std::string& columns) {
  os << "#";
  for (auto it = meta.begin(); it != meta.end(); ++it)
    os << " " << it.key() << "=" << (it.value().is_string()
                                         ? it.value().get<std::string>()
                                         : it.value().dump());
  os << "\n" << columns << "\n";
}

ConnectionFactors build_connection(const OrthonormalFamily& fam,
                                   const CommonOpts& o, Index n) {
  if (!o.sqrt_u_spec.empty()) {
    Eigen::VectorXd su = poly_coeffs(fam, o.sqrt_u_spec, o.basis, o.roots);
    return connect_sqrt_poly(fam, su, n, o.eps);
  }
  if (!o.sqrt_v_spec.empty()) {
    Eigen::VectorXd sv = poly_coeffs(fam, o.sqrt_v_spec, o.basis, o.roots);
    return connect_reciprocal(fam, sv, n, o.eps, ReciprocalMethod::QL, o.nmax);
  }
  Eigen::VectorXd u = o.u_spec.empty() ? const_one(fam)
                                       : poly_coeffs(fam, o.u_spec, o.basis, o.roots);
  Eigen::VectorXd v = o.v_spec.empty() ? const_one(fam)
                                       : poly_coeffs(fam, o.v_spec, o.basis, o.roots);
  if (o.conn_case == "1") return connect_rational_case1(fam, u, v, n, o.eps, o.nmax);
  if (o.conn_case == "2") return connect_rational_case2(fam, u, v, n, o.eps, o.nmax);
  return connect_rational_auto(fam, u, v, n, o.eps, o.nmax);
}

json meta_for(const CommonOpts& o, const ConnectionFactors& cf) {
  json meta;
  meta["family"] = cf.family.name();
  meta["u"] = o.u_spec.empty() ? (o.sqrt_u_spec.empty() ? "1" : "(" + o.sqrt_u_spec + ")^2")
                               : o.u_spec;
  meta["v"] = o.v_spec.empty() ? (o.sqrt_v_spec.empty() ? "1" : "(" + o.sqrt_v_spec + ")^2")
                               : o.v_spec;
  meta["n"] = cf.n;
  meta["eps"] = cf.eps;
  meta["window"] = cf.window;
  meta["criterion"] = cf.criterion;
  return meta;
}

int cmd_modify(const CommonOpts& o) {
  OrthonormalFamily fam = make_family(o);
  ConnectionFactors cf = build_connection(fam, o, o.n + 1);
  SymBanded XQ = modified_jacobi(cf, jacobi_matrix(fam, o.n + 1), o.n + 1);
  auto [rd, rs] = connection_diagonals(cf);
  Output out(o);
  json meta = meta_for(o, cf);
  if (out.json_mode()) {
    json doc;
    doc["meta"] = meta;
    for (Index i = 0; i < o.n; ++i) {
      doc["xq_diag"].push_back(XQ(i, i));
      if (i + 1 < o.n) doc["xq_offdiag"].push_back(XQ(i, i + 1));
      doc["r_diag"].push_back(rd(i));
      doc["r_super"].push_back(rs(i));
    }
    out.os() << doc.dump(2) << "\n";
  } else {
    write_csv_header(out.os(), meta, "i,xq_diag,xq_offdiag,r_diag,r_super");
    for (Index i = 0; i < o.n; ++i) {
      out.os() << i << "," << fmt(XQ(i, i)) << ","
               << (i + 1 < o.n ? fmt(XQ(i, i + 1)) : "") << "," << fmt(rd(i))
               << "," << fmt(rs(i)) << "\n";
    }
  }
  return 0;
}

int cmd_quad(const CommonOpts& o) {
  OrthonormalFamily fam = make_family(o);
  QuadratureRule rule;
  json meta;
  if (o.u_spec.empty() && o.v_spec.empty()) {
    rule = gauss_rule(fam, o.n);
    meta["family"] = fam.name();
    meta["n"] = o.n;
  } else {
    Eigen::VectorXd u = o.u_spec.empty() ? const_one(fam)
                                         : poly_coeffs(fam, o.u_spec, o.basis, o.roots);
    Eigen::VectorXd v = o.v_spec.empty() ? const_one(fam)
                                         : poly_coeffs(fam, o.v_spec, o.basis, o.roots);
    rule = modified_rule(fam, u, v, o.n, o.eps);
    meta["family"] = fam.name();
    meta["u"] = o.u_spec.empty() ? "1" : o.u_spec;
    meta["v"] = o.v_spec.empty() ? "1" : o.v_spec;
    meta["n"] = o.n;
    meta["eps"] = o.eps;
  }
  const double mass_err = std::abs(rule.weights.sum() - rule.mass);
  if (mass_err > 1e-13 * std::abs(rule.mass))
    throw std::runtime_error("quadrature mass check failed");
  meta["mass"] = rule.mass;

  Output out(o);
  if (out.json_mode()) {
    json doc;
    doc["meta"] = meta;
    for (Index i = 0; i < rule.nodes.size(); ++i) {
      doc["nodes"].push_back(rule.nodes(i));
      doc["weights"].push_back(rule.weights(i));
    }
    out.os() << doc.dump(2) << "\n";
  } else {
    write_csv_header(out.os(), meta, "node,weight");
    for (Index i = 0; i < rule.nodes.size(); ++i)
      out.os() << fmt(rule.nodes(i)) << "," << fmt(rule.weights(i)) << "\n";
  }
  return 0;
}

int cmd_synth(const CommonOpts& o, Index degree, Index grid_n,
              const std::string& grid_kind) {
  OrthonormalFamily fam = make_family(o);
  ConnectionFactors cf = build_connection(fam, o, std::max<Index>(o.n, degree + 2));
  Eigen::VectorXd e = Eigen::VectorXd::Zero(degree + 1);
  e(degree) = 1.0;
  Eigen::VectorXd base_coeffs =
      convert_coeffs(cf, e, ConvertDirection::ModifiedToOriginal);

  double lo = fam.support_lo, hi = fam.support_hi;
  if (!std::isfinite(lo)) lo = -1.0;
  if (!std::isfinite(hi)) hi = std::max(1.0, 4.0 * double(degree));
  Eigen::VectorXd xs(grid_n);
  for (Index i = 0; i < grid_n; ++i) {
    if (grid_kind == "chebyshev") {
      const double t = M_PI * (2.0 * i + 1.0) / (2.0 * grid_n);
      xs(i) = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(t);
    } else {
      xs(i) = lo + (hi - lo) * double(i) / double(std::max<Index>(1, grid_n - 1));
    }
  }
  Eigen::VectorXd vals = clenshaw_eval(fam, base_coeffs, xs);

  Output out(o);
  json meta = meta_for(o, cf);
  meta["degree"] = degree;
  if (out.json_mode()) {
    json doc;
    doc["meta"] = meta;
    for (Index i = 0; i < grid_n; ++i) {
      doc["x"].push_back(xs(i));
      doc["q"].push_back(vals(i));
    }
    out.os() << doc.dump(2) << "\n";
  } else {
    write_csv_header(out.os(), meta, "x,q");
    for (Index i = 0; i < grid_n; ++i)
      out.os() << fmt(xs(i)) << "," << fmt(vals(i)) << "\n";
  }
  return 0;
}

int cmd_diff(const CommonOpts& o) {
  OrthonormalFamily fam = make_family(o);
  Eigen::VectorXd u = o.u_spec.empty() ? const_one(fam)
                                       : poly_coeffs(fam, o.u_spec, o.basis, o.roots);
  Eigen::VectorXd v = o.v_spec.empty() ? const_one(fam)
                                       : poly_coeffs(fam, o.v_spec, o.basis, o.roots);
  DiffMatrix D = modified_diff(fam, u, v, o.n, o.eps);

  Output out(o);
  json meta;
  meta["family"] = fam.name();
  meta["u"] = o.u_spec.empty() ? "1" : o.u_spec;
  meta["v"] = o.v_spec.empty() ? "1" : o.v_spec;
  meta["n"] = o.n;
  meta["upper_bandwidth"] = D.upper_bandwidth;
  if (out.json_mode()) {
    json doc;
    doc["meta"] = meta;
    for (Index i = 0; i < D.size; ++i)
      for (Index j = i + 1; j <= std::min<Index>(D.size - 1, i + D.upper_bandwidth); ++j)
        doc["entries"].push_back({i, j, D.D(i, j)});
    out.os() << doc.dump(2) << "\n";
  } else {
    write_csv_header(out.os(), meta, "i,j,value");
    for (Index i = 0; i < D.size; ++i)
      for (Index j = i + 1; j <= std::min<Index>(D.size - 1, i + D.upper_bandwidth); ++j)
        out.os() << i << "," << j << "," << fmt(D.D(i, j)) << "\n";
  }
  return 0;
}

int cmd_toeplitz(const CommonOpts& o, double alpha, double beta) {
  ToeplitzModel model(alpha, beta);
  InfiniteQL iql = infinite_ql(model);
  InfiniteRC irc = infinite_reverse_cholesky(model);
  FiniteRC frc = finite_reverse_cholesky(model, o.n);
  FiniteQL fql = finite_ql(model, std::max<Index>(2, o.n));

  Output out(o);
  json meta;
  meta["alpha"] = alpha;
  meta["beta"] = beta;
  meta["rho"] = model.rho;
  meta["ql_diag"] = iql.diag;
  meta["ql_sub1"] = iql.sub1;
  meta["ql_sub2"] = iql.sub2;
  meta["rc_l_d"] = irc.l_d;
  meta["rc_l_o"] = irc.l_o;
  meta["ql_window_n50_eps1e-12"] = ql_window_bound(model, 50, 1e-12);
  meta["rc_window_n50_eps1e-12"] = rc_window_bound(model, 50, 1e-12);
  if (out.json_mode()) {
    json doc;
    doc["meta"] = meta;
    for (Index k = 0; k < o.n; ++k) {
      doc["rc_diag"].push_back(frc.diag(k));
      if (k + 1 < o.n) doc["rc_sub"].push_back(frc.sub(k));
      if (k < fql.s.size()) doc["ql_sine"].push_back(fql.s(k));
    }
    out.os() << doc.dump(2) << "\n";
  } else {
    write_csv_header(out.os(), meta, "k,rc_diag,rc_sub,ql_sine");
    for (Index k = 0; k < o.n; ++k) {
      out.os() << k << "," << fmt(frc.diag(k)) << ","
               << (k + 1 < o.n ? fmt(frc.sub(k)) : "") << ","
               << (k < fql.s.size() ? fmt(fql.s(k)) : "") << "\n";
    }
  }
  return 0;
}

double time_poly_build(const OrthonormalFamily& fam, const Eigen::VectorXd& u,
                       Index n, const Eigen::VectorXd& coeffs) {
  using clock = std::chrono::steady_clock;
  double best = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 3; ++rep) {
    int iters = 0;
    auto t0 = clock::now();
    double elapsed = 0.0;
    do {
      ConnectionFactors cf = connect_poly(fam, u, n);
      Eigen::VectorXd f =
          convert_coeffs(cf, coeffs, ConvertDirection::OriginalToModified);
      Eigen::VectorXd g = convert_coeffs(cf, f, ConvertDirection::ModifiedToOriginal);
      if (g(0) == 12345.6789) std::cerr << "";  // defeat dead-code elimination
      ++iters;
      elapsed = std::chrono::duration<double>(clock::now() - t0).count();
    } while (elapsed < 0.05);
    best = std::min(best, elapsed / iters);
  }
  return best;
}

int cmd_bench(const CommonOpts& o, int min_log, int max_log) {
  OrthonormalFamily fam = make_family(o);
  Eigen::VectorXd u = o.u_spec.empty()
                          ? poly_coeffs(fam, "1,0,1", "monomial", false)
                          : poly_coeffs(fam, o.u_spec, o.basis, o.roots);
  Output out(o);
  json meta;
  meta["family"] = fam.name();
  meta["kind"] = "poly-modification build + round-trip conversion";
  write_csv_header(out.os(), meta, "n,seconds,ratio");
  std::mt19937 rng(42);
  std::normal_distribution<double> dist;
  double prev = 0.0;
  bool scaling_ok = true;
  for (int lg = min_log; lg <= max_log; ++lg) {
    const Index n = Index{1} << lg;
    Eigen::VectorXd c(n);
    for (Index i = 0; i < n; ++i) c(i) = dist(rng);
    const double t = time_poly_build(fam, u, n, c);
    const double ratio = prev > 0.0 ? t / prev : 0.0;
    out.os() << n << "," << fmt(t) << "," << fmt(ratio) << "\n";
    if (lg > min_log && lg >= 13 && (ratio < 1.2 || ratio > 3.5)) scaling_ok = false;
    prev = t;
  }
  if (!scaling_ok)
    throw std::runtime_error("bench: scaling ratio outside the near-linear band");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Connection coefficients, modified Jacobi matrices, quadrature, "
               "and banded calculus for rationally modified orthogonal "
               "polynomial measures"};
  app.require_subcommand(1);

  CommonOpts o;
  Index degree = 8, grid_n = 129;
  std::string grid_kind = "uniform";
  double alpha = 3.0, beta = 1.0;
  int min_log = 10, max_log = 17;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--family", o.family, "family name");
    cmd->add_option("--param", o.param, "family parameters, e.g. a,b");
    cmd->add_option("--u", o.u_spec, "numerator polynomial");
    cmd->add_option("--v", o.v_spec, "denominator polynomial");
    cmd->add_option("--sqrt-u", o.sqrt_u_spec, "square root of u (QR route)");
    cmd->add_option("--sqrt-v", o.sqrt_v_spec, "square root of v (QL route)");
    cmd->add_option("--basis", o.basis, "polynomial input basis: monomial|family");
    cmd->add_flag("--roots", o.roots, "interpret polynomials as r1,...,rk,leading");
    cmd->add_option("--n", o.n, "truncation size");
    cmd->add_option("--eps", o.eps, "adaptive tolerance");
    cmd->add_option("--nmax", o.nmax, "adaptive window cap");
    cmd->add_option("--case", o.conn_case, "rational case: 1|2|auto");
    cmd->add_option("--out", o.out, "output file (default stdout)");
    cmd->add_option("--format", o.format, "csv|json");
  };

  CLI::App* modify = app.add_subcommand("modify", "modified Jacobi matrix and connection diagonals");
  add_common(modify);
  CLI::App* quad = app.add_subcommand("quad", "Gaussian quadrature rule (classical or modified)");
  add_common(quad);
  CLI::App* synth = app.add_subcommand("synth", "evaluate a modified polynomial on a grid");
  add_common(synth);
  synth->add_option("--degree", degree, "polynomial degree to synthesize");
  synth->add_option("--grid-n", grid_n, "number of grid points");
  synth->add_option("--grid", grid_kind, "uniform|chebyshev");
  CLI::App* diff = app.add_subcommand("diff", "banded differentiation matrix");
  add_common(diff);
  CLI::App* toep = app.add_subcommand("toeplitz", "tridiagonal Toeplitz model closed forms");
  add_common(toep);
  toep->add_option("--alpha", alpha, "Toeplitz diagonal");
  toep->add_option("--beta", beta, "Toeplitz off-diagonal");
  CLI::App* bench = app.add_subcommand("bench", "near-linear-complexity timing table");
  add_common(bench);
  bench->add_option("--min-log", min_log, "smallest size 2^k");
  bench->add_option("--max-log", max_log, "largest size 2^k");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(modify)) return cmd_modify(o);
    if (app.got_subcommand(quad)) return cmd_quad(o);
    if (app.got_subcommand(synth)) return cmd_synth(o, degree, grid_n, grid_kind);
    if (app.got_subcommand(diff)) return cmd_diff(o);
    if (app.got_subcommand(toep)) return cmd_toeplitz(o, alpha, beta);
    if (app.got_subcommand(bench)) return cmd_bench(o, min_log, max_log);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
