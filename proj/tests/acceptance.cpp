// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ms/bounds.hpp"
#include "ms/geometry.hpp"
#include "ms/hankel.hpp"
#include "ms/io.hpp"
#include "ms/mertens.hpp"
#include "ms/norm_quadrature.hpp"
#include "ms/oracles.hpp"
#include "ms/spectra.hpp"

namespace {

using namespace ms;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Log {
  Outcome o;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      o.pass = false;
      if (!o.detail.empty()) o.detail += "; ";
      o.detail += what;
    }
  }
  void note(const std::string& s) {
    if (o.pass) o.detail = o.detail.empty() ? s : o.detail + "; " + s;
  }
};

std::string fmt(const char* f, double a) {
  char b[128];
  std::snprintf(b, sizeof b, f, a);
  return b;
}
std::string fmt(const char* f, double a, double c) {
  char b[160];
  std::snprintf(b, sizeof b, f, a, c);
  return b;
}

constexpr std::int64_t kBig = 1000000;

// Shared N = 10^6 data for criteria 4-6.
struct BigRun {
  EpsilonGeometry g;
  HankelModel m;
  Spectrum s;
  double seconds = 0.0;
};

const BigRun& big_run() {
  static const BigRun r = [] {
    BigRun b;
    b.g = solve_epsilon(kBig);
    b.m = hankel_coefficients(b.g);
    SpectrumOptions o;
    o.k = 6;
    o.solver = Solver::lanczos;
    o.seed = 42;
    const auto t0 = std::chrono::steady_clock::now();
    b.s = spectrum_of_H(b.m, o);
    b.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return b;
  }();
  return r;
}

Outcome c1() {
  Log L;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::int64_t N : {3, 10, 100, 1000, 10000, 100000, 1000000}) {
    const auto g = solve_epsilon(N);
    const double n = static_cast<double>(N), e = g.epsilon, l = std::log(n);
    const std::string tag = "N=" + std::to_string(N) + " ";
    L.check(g.residual() <= 1e-13, tag + "residual");
    const double eNe = std::exp(n * e);
    L.check(std::sqrt(3.0) < eNe && eNe < 1.0 / (2.0 * e), tag + "(sqrt3, 1/(2eps))");
    L.check(63.0 / 256.0 * l / n < e && e < std::min(0.25, l / n), tag + "eps bracket");
    const double a = g.one_minus_delta() / e, b = std::expm1(e) / e;
    L.check(1.0 / (1.0 + e) < a && a < 1.0 && 1.0 < b && b < 1.0 / (1.0 - e), tag + "difference quotients");
    const double omd = g.one_minus_delta(), Dm1 = std::expm1(e);
    L.check(0.8 * e < omd && omd < e && e < Dm1 && Dm1 < 4.0 / 3.0 * e, tag + "linear bracket");
    L.check(0.75 < g.delta && g.delta < 1.0 && 1.0 < g.Delta && g.Delta < 4.0 / 3.0, tag + "delta range");
  }
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  L.check(sec < 1.0, fmt("runtime %.3fs", sec));
  L.note(fmt("7 sizes in %.3fs", sec));
  return L.o;
}

Outcome c2() {
  Log L;
  const auto g = solve_epsilon(200);
  const auto m = hankel_coefficients(g);
  double worst = 0.0;
  for (std::int64_t n = 1; n <= 200; ++n)
    worst = std::max(worst, std::fabs(m.mu_tilde[n - 1] - mu_quadrature_oracle(g, n)));
  L.check(worst < 1e-9, fmt("max deviation %.3e", worst));
  L.note(fmt("max deviation %.3e", worst));
  return L.o;
}

Outcome c3() {
  Log L;
  for (std::int64_t N : {64, 256, 1000}) {
    const auto m = hankel_coefficients(solve_epsilon(N));
    SpectrumOptions o;
    o.solver = Solver::dense;
    const auto s = spectrum_of_H(m, o);
    std::vector<double> sq;
    for (double v : s.nu_plus) sq.push_back(v * v);
    for (double v : s.nu_minus) sq.push_back(v * v);
    const double lhs = pairwise_sum(sq), rhs = ktriangle_norm_sq(m);
    const double rel = std::fabs(lhs - rhs) / rhs;
    L.check(rel <= 1e-10, "N=" + std::to_string(N) + fmt(" rel %.3e", rel));
    L.note("N=" + std::to_string(N) + fmt(" rel %.2e", rel));
  }
  return L.o;
}

Outcome c4() {
  Log L;
  const auto& b = big_run();
  const double plus[6] = {0.0796889109, 0.0690322925, 0.0552247168, 0.0458979695, 0.0440302591, 0.0377564244};
  const double minus[6] = {-0.0690165028, -0.0566761531, -0.0506170103, -0.0441382847, -0.0417049532, -0.0370487294};
  L.check(b.s.converged, "lanczos did not converge");
  L.check(b.s.nu_plus.size() == 6 && b.s.nu_minus.size() == 6, "fewer than six per sign");
  double worst = 0.0;
  for (std::size_t k = 0; k < 6 && k < b.s.nu_plus.size() && k < b.s.nu_minus.size(); ++k) {
    worst = std::max({worst, std::fabs(b.s.nu_plus[k] - plus[k]), std::fabs(b.s.nu_minus[k] - minus[k])});
  }
  L.check(worst <= 5e-7, fmt("max table deviation %.3e", worst));
  L.check(b.seconds <= 900.0, fmt("runtime %.1fs", b.seconds));
  L.note(fmt("max deviation %.2e in %.1fs", worst, b.seconds));
  return L.o;
}

Outcome c5() {
  Log L;
  const auto& b = big_run();
  const double V0 = V0_bound(b.m), V1 = V1_bound(b.g), kb = kbowtie_norm_bound(b.m);
  auto both = [&](const char* name, double v, double quoted) {
    L.check(v <= quoted, std::string(name) + fmt(" %.15g above %.12g", v, quoted));
    L.check(std::fabs(v / quoted - 1.0) <= 1e-6, std::string(name) + fmt(" rel %.3e", std::fabs(v / quoted - 1.0)));
  };
  both("V0", V0, 0.000135821302);
  both("V1", V1, 0.000021043522);
  both("kbowtie", kb, 0.012524569);
  L.note(fmt("V0=%.15g V1=%.15g", V0, V1) + fmt(" kbowtie=%.12g", kb));
  return L.o;
}

Outcome c6() {
  Log L;
  const auto& b = big_run();
  const double r = kbowtie_norm_bound(b.m);
  const auto enc = enclose(b.s, r);
  for (const auto& e : enc) {
    if (e.k != 1) continue;
    if (e.sign == Sign::minus)
      L.check(e.lo > -0.0815411 && e.hi < -0.0564919, fmt("nu1- in (%.9f, %.9f)", e.lo, e.hi));
    else
      L.check(e.lo > 0.0671643 && e.hi < 0.0922135, fmt("nu1+ in (%.9f, %.9f)", e.lo, e.hi));
  }
  const double gp = gap_lower_bound(b.s, r, 1, 3, Sign::plus);
  const double gm = gap_lower_bound(b.s, r, 1, 3, Sign::minus);
  L.check(gp > 0.0067517, fmt("plus gap %.10f", gp));
  L.check(gm > 0.0006870, fmt("minus gap %.10f", gm));
  L.note(fmt("gaps %.10f, %.10f", gp, gm));
  return L.o;
}

Outcome c7() {
  Log L;
  const double c = K_norm_squared_const(), q = K_norm_sq_quadrature();
  const double root = std::sqrt(c);
  L.check(std::round(root * 1000.0) == 286.0, fmt("sqrt %.6f", root));
  L.check(std::fabs(c - q) <= 1e-4, fmt("const %.12f vs quadrature %.12f", c, q));
  L.note(fmt("sqrt %.9f, |diff| %.2e", root, std::fabs(c - q)));
  return L.o;
}

Outcome c8() {
  Log L;
  const auto t = sieve_mobius(4096LL * 4096LL);
  int zero = 0;
  for (std::int64_t N = 1; N <= 64; ++N) {
    const auto r = verify_identity_exact(t, N);
    if (r.exact == 0) ++zero;
    else L.check(false, "N=" + std::to_string(N) + " residual " + rational_string(r.exact));
  }
  for (std::int64_t N : {256, 1024, 4096}) {
    const auto r = verify_identity_float(t, N);
    const double lim = 1e-6 * static_cast<double>(N) * static_cast<double>(N);
    L.check(std::fabs(r.floating) < lim, "N=" + std::to_string(N) + fmt(" residual %.3e", r.floating));
    L.note("N=" + std::to_string(N) + fmt(" float residual %.2e", r.floating));
  }
  L.note(std::to_string(zero) + "/64 exact zeros");
  return L.o;
}

Outcome c9() {
  Log L;
  for (std::int64_t N : {25, 50, 100, 200}) {
    const double q = kdagger_norm_sq_quadrature(N);
    const double l41 = lemma41_bound(N, enumerate_U(N).count), t1 = theorem1_bound(N);
    L.check(q <= l41 && l41 <= t1, "N=" + std::to_string(N) + fmt(" dagger chain %.6g", q) + fmt(" <= %.6g <= %.6g", l41, t1));
  }
  for (std::int64_t N : {50, 100, 200}) {
    const auto g = solve_epsilon(N);
    const auto m = hankel_coefficients(g);
    const double v0q = V0_quadrature(m), v0b = V0_bound(m), v1q = V1_quadrature(g), v1b = V1_bound(g);
    L.check(v0q <= v0b, "N=" + std::to_string(N) + fmt(" V0 %.12g > %.12g", v0q, v0b));
    L.check(v1q <= v1b, "N=" + std::to_string(N) + fmt(" V1 %.12g > %.12g", v1q, v1b));
  }
  for (std::int64_t N = 2; N <= 2000; ++N) {
    const auto c = enumerate_U(N).count;
    if (!(static_cast<double>(c) < lemma42_bound(N))) {
      L.check(false, "U count N=" + std::to_string(N));
      break;
    }
  }
  for (std::int64_t N : {10, 100, 1000}) {
    const double D = kpercent_D_estimate(N), lim = 49.0 * (1.0 + std::log(static_cast<double>(N))) / static_cast<double>(N);
    L.check(D >= 0.0 && D <= lim, "N=" + std::to_string(N) + fmt(" D %.6g vs %.6g", D, lim));
    L.note("N=" + std::to_string(N) + fmt(" D=%.4g", D));
  }
  return L.o;
}

Spectrum tri(std::int64_t N, Solver sv) {
  SpectrumOptions o;
  o.k = 6;
  o.solver = sv;
  return spectrum_of_H(hankel_coefficients(solve_epsilon(N)), o);
}

Spectrum dag(std::int64_t N) {
  SpectrumOptions o;
  o.k = 6;
  o.solver = Solver::dense;
  return spectrum_of_Z(N, o);
}

// Enclosures of the same (k, sign) from two sources must overlap.
void cross(Log& L, const Spectrum& a, double ra, const Spectrum& b, double rb, const std::string& tag) {
  const auto ea = enclose(a, ra), eb = enclose(b, rb);
  int pairs = 0;
  for (const auto& x : ea)
    for (const auto& y : eb)
      if (x.k == y.k && x.sign == y.sign && x.k <= 6) {
        ++pairs;
        L.check(intersects(x, y), tag + " k=" + std::to_string(x.k) + (x.sign == Sign::plus ? "+" : "-"));
      }
  L.check(pairs == 12, tag + " compared " + std::to_string(pairs) + " pairs");
}

Outcome c10() {
  Log L;
  const auto a = tri(1000, Solver::dense), b = tri(4000, Solver::lanczos);
  cross(L, a, certified_radius("triangle", 1000), b, certified_radius("triangle", 4000), "triangle 1000/4000");
  for (std::int64_t N : {100, 400})
    cross(L, dag(N), certified_radius("dagger", N), tri(N, Solver::dense), certified_radius("triangle", N),
          "dagger/triangle N=" + std::to_string(N));
  return L.o;
}

Outcome c11() {
  Log L;
  const double th = solve_theta1(2.0);
  L.check(std::fabs(th - 0.5) <= 1e-12, fmt("theta1(2) = %.17g", th));
  double worst_res = 0.0, worst_grid = 0.0;
  int both316 = 0, both317 = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> kn;
  for (std::int64_t k : {9, 20, 100, 1000, 10000})
    for (std::int64_t N : {10000LL, 1000000LL, 100000000LL}) kn.emplace_back(k, N);
  for (std::int64_t n : {1000000LL, 10000000LL, 100000000LL}) kn.emplace_back(n, n);
  for (auto kind : {SquareKind::dagger, SquareKind::triangle})
    for (const auto& [k, N] : kn)
      for (double c : {0.1, 1.0}) {
        const auto r = theorem7_eval(k, N, c, kind);
        worst_res = std::max(worst_res, r.theta1_residual);
        // 10^4-point grid, then a parabola through the best point and its neighbours
        const double kk = static_cast<double>(k), h = 1.0 / 10001.0;
        auto f = [&](double t) { return std::exp(c) * theorem7_objective(t, r.S, r.T, kk); };
        int best = 1;
        double grid = INFINITY;
        for (int i = 1; i <= 10000; ++i) {
          const double v = f(i * h);
          if (v < grid) grid = v, best = i;
        }
        L.check(r.bound_311 <= grid * (1.0 + 1e-15), "bound_311 above a grid value");
        double refined = grid;
        if (best > 1 && best < 10000) {
          const double fm = f((best - 1) * h), f0 = grid, fp = f((best + 1) * h);
          const double denom = fm - 2.0 * f0 + fp;
          if (denom > 0.0) refined = f((best + 0.5 * (fm - fp) / denom) * h);
        }
        worst_grid = std::max(worst_grid, std::fabs(refined - r.bound_311) / r.bound_311);
        if (r.bound_316_first && r.bound_316_second) {
          ++both316;
          L.check(*r.bound_316_second >= *r.bound_316_first, "316 ordering");
        }
        if (r.bound_317_first && r.bound_317_second) {
          ++both317;
          L.check(*r.bound_317_second >= *r.bound_317_first, "317 ordering");
        }
      }
  L.check(worst_res <= 1e-12, fmt("theta residual %.3e", worst_res));
  L.check(worst_grid <= 1e-8, fmt("grid mismatch %.3e", worst_grid));
  L.check(both316 > 0 && both317 > 0, "both kappa regimes exercised");
  L.note(fmt("theta residual %.1e, grid rel %.1e", worst_res, worst_grid));
  return L.o;
}

// Serialized outputs of a representative workload.
std::string artifacts() {
  std::ostringstream os;
  os << to_json(solve_epsilon(1000)).dump() << '\n';
  write_csv(os, hankel_csv(hankel_coefficients(solve_epsilon(300))));
  SpectrumOptions o;
  o.k = 6;
  o.solver = Solver::lanczos;
  o.seed = 7;
  os << to_json(spectrum_of_H(hankel_coefficients(solve_epsilon(20000)), o)).dump() << '\n';
  o.solver = Solver::dense;
  os << to_json(spectrum_of_Z(300, o)).dump() << '\n';
  os << to_json(norm_report(400)).dump() << '\n';
  const auto t = sieve_mobius(200 * 200);
  os << verify_identity_float(t, 200).floating << ' ' << rational_string(verify_identity_exact(t, 40).exact) << '\n';
  return os.str();
}

Outcome c12() {
  Log L;
  set_thread_count(1);
  const std::string a = artifacts();
  set_thread_count(4);
  const std::string b = artifacts();
  set_thread_count(0);
  const std::string c = artifacts();
  L.check(a == b && b == c, "artifacts differ between runs");
  L.note(std::to_string(a.size()) + " bytes identical across 3 runs (1, 4, default threads)");
  return L.o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"grid equation and its inequalities", c1},
      {"closed-form rectangle means vs quadrature at N=200", c2},
      {"Frobenius identity for the Hankel matrix", c3},
      {"extreme reciprocal eigenvalues at N=10^6", c4},
      {"norm bounds at N=10^6", c5},
      {"enclosures and gaps at N=10^6", c6},
      {"norm constant of the kernel", c7},
      {"Mertens identity", c8},
      {"bound validity", c9},
      {"cross-scale enclosure consistency", c10},
      {"decay formula evaluator", c11},
      {"determinism of serialized outputs", c12},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2zu %s: %s (%.1fs) %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, sec,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
