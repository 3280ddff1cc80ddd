// Command-line front end.
//
// Exit status: 0 success, 1 computation failure, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "ms/bounds.hpp"
#include "ms/geometry.hpp"
#include "ms/hankel.hpp"
#include "ms/io.hpp"
#include "ms/mertens.hpp"
#include "ms/spectra.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::int64_t n = 0;
  int k = 6;
  std::string model = "triangle";
  std::string solver = "lanczos";
  std::uint64_t seed = 42;
  std::string mode = "exact";
  std::optional<double> delta;
  double c = 1.0;
  std::string kind = "triangle";
  std::string sign = "plus";
  std::size_t i = 1, j = 3;
  std::string out;
  std::string csv;
  bool json = false;
  bool quiet = false;
  unsigned threads = 0;
};

void emit(const ms::Json& j) { std::cout << j.dump(2) << '\n'; }

void emit_csv(const ms::CsvTable& t, const std::string& path) {
  if (path.empty() || path == "-") {
    ms::write_csv(std::cout, t);
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  ms::write_csv(f, t);
}

ms::Solver parse_solver(const std::string& s) {
  if (s == "dense") return ms::Solver::dense;
  if (s == "lanczos") return ms::Solver::lanczos;
  throw UsageError("solver must be dense or lanczos");
}

void need(bool ok, const char* msg) {
  if (!ok) throw UsageError(msg);
}

ms::Spectrum compute_spectrum(const Config& c, bool vectors = false) {
  need(c.model == "dagger" || c.model == "triangle", "model must be dagger or triangle");
  ms::SpectrumOptions o;
  o.k = c.k;
  o.solver = parse_solver(c.solver);
  o.seed = c.seed;
  o.vectors = vectors;
  need(o.solver == ms::Solver::dense || c.k >= 1, "lanczos needs --k >= 1");
  need(c.k <= c.n, "--k exceeds --n");
  if (o.solver == ms::Solver::dense) need(c.n <= ms::kDenseCap, "dense solver limited to n <= 4096");
  if (!c.quiet)
    o.progress = [](int mv, double w) { std::fprintf(stderr, "lanczos: matvecs=%d residual=%.3g\n", mv, w); };
  if (c.model == "dagger") return ms::spectrum_of_Z(c.n, o);
  need(c.n >= 3, "triangle model needs n >= 3");
  const auto m = ms::hankel_coefficients(ms::solve_epsilon(c.n));
  return ms::spectrum_of_H(m, o);
}

int run_epsilon(const Config& c) {
  need(c.n >= 3, "epsilon needs n >= 3");
  const auto g = ms::solve_epsilon(c.n);
  const auto j = ms::to_json(g);
  if (c.json) emit(j);
  else
    for (auto it = j.begin(); it != j.end(); ++it) std::cout << it.key() << ' ' << it.value().dump() << '\n';
  return 0;
}

int run_hankel(const Config& c) {
  need(c.n >= 3, "hankel needs n >= 3");
  emit_csv(ms::hankel_csv(ms::hankel_coefficients(ms::solve_epsilon(c.n))), c.out);
  return 0;
}

int run_gram(const Config& c) {
  need(c.n >= 1 && c.n <= 2048, "gram needs 1 <= n <= 2048");
  emit_csv(ms::gram_csv(c.n), c.out);
  return 0;
}

int run_spectrum(const Config& c) {
  need(c.n >= 1, "spectrum needs n >= 1");
  const auto s = compute_spectrum(c);
  if (!c.csv.empty()) emit_csv(ms::spectrum_csv(s), c.csv);
  if (c.json || c.csv.empty()) emit(ms::to_json(s));
  if (!s.converged) {
    std::fprintf(stderr, "spectrum: solver did not converge\n");
    return 1;
  }
  return 0;
}

int run_norms(const Config& c) {
  need(c.n >= 3, "norms needs n >= 3");
  const auto r = ms::norm_report(c.n, c.n <= 20000);
  const auto j = ms::to_json(r);
  if (c.json) emit(j);
  else
    for (auto it = j.begin(); it != j.end(); ++it) std::cout << it.key() << ' ' << it.value().dump() << '\n';
  return 0;
}

int run_ucount(const Config& c) {
  need(c.n >= 1 && c.n <= ms::kUCountCap, "ucount needs 1 <= n <= 100000");
  const auto u = ms::enumerate_U(c.n);
  ms::Json j{{"N", c.n}, {"U_count", u.count}};
  if (c.n >= 2) j["lemma42_bound"] = ms::lemma42_bound(c.n);
  if (c.json) emit(j);
  else std::cout << u.count << '\n';
  return 0;
}

double radius_for(const Config& c) {
  if (c.model == "dagger") need(c.n >= 25, "dagger enclosures need n >= 25");
  return ms::certified_radius(c.model, c.n);
}

int run_enclose(const Config& c) {
  need(c.n >= 3, "enclose needs n >= 3");
  const auto s = compute_spectrum(c);
  const double r = radius_for(c);
  ms::Json arr = ms::Json::array();
  for (const auto& e : ms::enclose(s, r)) arr.push_back(ms::to_json(e));
  emit(ms::Json{{"model", s.model}, {"n", s.n}, {"radius", r}, {"enclosures", arr}});
  return s.converged ? 0 : 1;
}

int run_gap(const Config& c) {
  need(c.sign == "plus" || c.sign == "minus", "sign must be plus or minus");
  need(c.i >= 1 && c.j >= c.i, "need 1 <= i <= j");
  Config cc = c;
  cc.k = std::max<int>(c.k, static_cast<int>(c.j));
  const auto s = compute_spectrum(cc);
  const double r = radius_for(c);
  const auto sg = c.sign == "plus" ? ms::Sign::plus : ms::Sign::minus;
  const double g = ms::gap_lower_bound(s, r, c.i, c.j, sg);
  emit(ms::Json{{"model", s.model}, {"n", s.n}, {"i", c.i}, {"j", c.j}, {"sign", c.sign}, {"norm_bound", r}, {"gap_lower_bound", g}});
  return s.converged ? 0 : 1;
}

int run_t7(const Config& c) {
  need(c.kind == "dagger" || c.kind == "triangle", "kind must be dagger or triangle");
  need(c.k >= 9 && c.n >= c.k, "t7 needs n >= k >= 9");
  need(c.c > 0.0, "c must be positive");
  const auto r = ms::theorem7_eval(c.k, c.n, c.c, c.kind == "dagger" ? ms::SquareKind::dagger : ms::SquareKind::triangle);
  emit(ms::to_json(r));
  return 0;
}

int run_mertens(const Config& c) {
  need(c.mode == "exact" || c.mode == "float", "mode must be exact or float");
  need(c.n >= 1, "mertens needs n >= 1");
  if (c.mode == "exact") need(c.n <= ms::kIdentityExactCap, "exact mode limited to n <= 512");
  else need(c.n <= ms::kIdentityFloatCap, "float mode limited to n <= 5000");
  if (c.delta) need(*c.delta >= 0.0 && c.n <= ms::kDenseCap, "--delta needs delta >= 0 and n <= 4096");
  const auto t = ms::sieve_mobius(c.n * c.n);
  ms::Json j{{"N", c.n}, {"mode", c.mode}};
  if (c.mode == "exact") {
    const auto r = ms::verify_identity_exact(t, c.n);
    j["M_N"] = r.M_N;
    j["M_N2"] = r.M_N2;
    j["residual"] = ms::rational_string(r.exact);
  } else {
    const auto r = ms::verify_identity_float(t, c.n);
    j["M_N"] = r.M_N;
    j["M_N2"] = r.M_N2;
    j["residual"] = r.floating;
  }
  if (c.delta) {
    ms::SpectrumOptions o;
    o.solver = ms::Solver::dense;
    o.vectors = true;
    const auto s = ms::spectrum_of_Z(c.n, o);
    const auto q = ms::quadratic_form_spectral(t, s, *c.delta);
    j["delta"] = *c.delta;
    j["retained_terms"] = q.retained_terms;
    j["remainder"] = q.remainder;
    j["direct"] = q.direct;
    j["spectral"] = q.spectral;
    j["threshold_condition"] = q.threshold_condition;
  }
  if (c.json) emit(j);
  else
    for (auto it = j.begin(); it != j.end(); ++it) std::cout << it.key() << ' ' << it.value().dump() << '\n';
  return 0;
}

int run_table7(const Config& c) {
  need(c.n >= 3, "table7 needs n >= 3");
  Config cc = c;
  cc.model = "triangle";
  cc.k = 6;
  need(cc.k <= c.n, "table7 needs n >= 6");
  const auto g = ms::solve_epsilon(c.n);
  const auto m = ms::hankel_coefficients(g);
  ms::SpectrumOptions o;
  o.k = 6;
  o.solver = parse_solver(c.solver);
  o.seed = c.seed;
  if (!c.quiet)
    o.progress = [](int mv, double w) { std::fprintf(stderr, "lanczos: matvecs=%d residual=%.3g\n", mv, w); };
  const auto s = ms::spectrum_of_H(m, o);
  const double V0 = ms::V0_bound(m), V1 = ms::V1_bound(g);
  const double kb = std::sqrt(V0 + V1);
  if (c.json) {
    ms::Json j = ms::to_json(s);
    j["V0_bound"] = V0;
    j["V1_bound"] = V1;
    j["kbowtie_bound"] = kb;
    emit(j);
  } else {
    std::printf("%-3s %15s %15s\n", "k", "nu_minus", "nu_plus");
    const std::size_t rows = std::max(s.nu_plus.size(), s.nu_minus.size());
    for (std::size_t r = 0; r < rows; ++r) {
      std::printf("%-3zu ", r + 1);
      if (r < s.nu_minus.size()) std::printf("%15.10f ", s.nu_minus[r]);
      else std::printf("%15s ", "-");
      if (r < s.nu_plus.size()) std::printf("%15.10f\n", s.nu_plus[r]);
      else std::printf("%15s\n", "-");
    }
    std::printf("V0 < %.12f\n", V0);
    std::printf("V1 < %.12f\n", V1);
    std::printf("||K_bowtie|| < %.9f\n", kb);
  }
  return s.converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit for the kernel 1/2 - {1/(xy)} on the unit square"};
  app.require_subcommand(1, 1);
  Config c;
  app.add_option("--threads", c.threads, "worker threads (MS_THREADS overrides)");

  auto add_n = [&](CLI::App* s) { s->add_option("--n", c.n, "size parameter N")->required(); };
  auto add_json = [&](CLI::App* s) { s->add_flag("--json", c.json, "emit JSON"); };
  auto add_solver = [&](CLI::App* s) {
    s->add_option("--k", c.k, "eigenvalues per sign");
    s->add_option("--solver", c.solver, "dense|lanczos");
    s->add_option("--seed", c.seed, "start-vector seed");
    s->add_flag("--quiet", c.quiet, "no progress on stderr");
  };

  auto* eps = app.add_subcommand("epsilon", "solve the grid equation; fields N, epsilon, delta, Delta, residual");
  add_n(eps);
  add_json(eps);
  auto* hank = app.add_subcommand("hankel", "Hankel coefficients; CSV columns n,k_n,sigma_n,mu_tilde_n,mu_dprime_n,eta_n");
  add_n(hank);
  hank->add_option("--out", c.out, "CSV path (default stdout)");
  auto* gram = app.add_subcommand("gram", "uniform-grid matrix; CSV columns m,n,z");
  add_n(gram);
  gram->add_option("--out", c.out, "CSV path (default stdout)");
  auto* spec = app.add_subcommand("spectrum", "reciprocal eigenvalues; CSV columns sign,k,nu");
  add_n(spec);
  add_solver(spec);
  spec->add_option("--model", c.model, "dagger|triangle");
  add_json(spec);
  spec->add_option("--csv", c.csv, "CSV path");
  auto* norms = app.add_subcommand("norms", "norm bounds for both discretizations");
  add_n(norms);
  add_json(norms);
  auto* uc = app.add_subcommand("ucount", "count grid squares met by a hyperbola xy = 1/m");
  add_n(uc);
  add_json(uc);
  auto* enc = app.add_subcommand("enclose", "certified eigenvalue enclosures");
  add_n(enc);
  add_solver(enc);
  enc->add_option("--model", c.model, "dagger|triangle");
  auto* gap = app.add_subcommand("gap", "lower bound for nu_i - nu_j on one side");
  add_n(gap);
  add_solver(gap);
  gap->add_option("--model", c.model, "dagger|triangle");
  gap->add_option("--i", c.i, "first index");
  gap->add_option("--j", c.j, "second index");
  gap->add_option("--sign", c.sign, "plus|minus");
  auto* t7 = app.add_subcommand("t7", "eigenvalue decay formula evaluator");
  add_n(t7);
  t7->add_option("--k", c.k, "eigenvalue index")->required();
  t7->add_option("--c", c.c, "exponent c > 0");
  t7->add_option("--kind", c.kind, "dagger|triangle");
  auto* mer = app.add_subcommand("mertens", "check the Mertens identity; fields M_N, M_N2, residual, retained_terms, remainder");
  add_n(mer);
  mer->add_option("--mode", c.mode, "exact|float");
  mer->add_option("--delta", c.delta, "spectral truncation threshold");
  add_json(mer);
  auto* t7tab = app.add_subcommand("table7", "six extreme reciprocal eigenvalues per sign and the norm bounds");
  add_n(t7tab);
  t7tab->add_option("--solver", c.solver, "dense|lanczos");
  t7tab->add_option("--seed", c.seed, "start-vector seed");
  t7tab->add_flag("--quiet", c.quiet, "no progress on stderr");
  add_json(t7tab);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  }
  if (c.threads > 0) ms::set_thread_count(c.threads);

  try {
    if (*eps) return run_epsilon(c);
    if (*hank) return run_hankel(c);
    if (*gram) return run_gram(c);
    if (*spec) return run_spectrum(c);
    if (*norms) return run_norms(c);
    if (*uc) return run_ucount(c);
    if (*enc) return run_enclose(c);
    if (*gap) return run_gap(c);
    if (*t7) return run_t7(c);
    if (*mer) return run_mertens(c);
    if (*t7tab) return run_table7(c);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
