#pragma once

// JSON and CSV serialization.  Doubles are written in shortest round-trip
// form; exact rationals as "p/q" strings ("p" when integral).

#include <gmpxx.h>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "ms/bounds.hpp"
#include "ms/geometry.hpp"
#include "ms/hankel.hpp"
#include "ms/mertens.hpp"
#include "ms/spectra.hpp"

namespace ms {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  if (r.ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

inline std::string rational_string(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline Json to_json(const EpsilonGeometry& g) {
  return Json{{"N", g.N}, {"epsilon", g.epsilon}, {"delta", g.delta}, {"Delta", g.Delta}, {"residual", g.residual()}};
}

inline Json to_json(const Spectrum& s) {
  return Json{{"model", s.model},     {"n", s.n},
              {"nu_plus", s.nu_plus}, {"nu_minus", s.nu_minus},
              {"solver", solver_name(s.solver)}, {"seed", s.seed},
              {"residuals", s.residuals}};
}

inline Json to_json(const NormReport& r) {
  Json j{{"N", r.N},
         {"V0_bound", r.V0_bound},
         {"V1_bound", r.V1_bound},
         {"kbowtie_bound", r.kbowtie_bound},
         {"ktriangle_norm_sq", r.ktriangle_norm_sq},
         {"K_norm_sq", r.K_norm_sq}};
  j["kdagger_bound_thm1"] = r.kdagger_bound_thm1 ? Json(*r.kdagger_bound_thm1) : Json(nullptr);
  j["kdagger_bound_lemma41"] = r.kdagger_bound_lemma41 ? Json(*r.kdagger_bound_lemma41) : Json(nullptr);
  j["U_count"] = r.U_count ? Json(*r.U_count) : Json(nullptr);
  return j;
}

inline Json to_json(const Enclosure& e) {
  return Json{{"k", e.k},   {"sign", e.sign == Sign::plus ? "plus" : "minus"},
              {"lo", e.lo}, {"hi", e.hi},
              {"center", e.center}, {"radius", e.radius},
              {"source", e.source}};
}

inline Json to_json(const Theorem7Result& r) {
  auto opt = [](const std::optional<Real>& v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"S", r.S},
              {"T", r.T},
              {"kappa", r.kappa},
              {"theta1", r.theta1},
              {"theta1_residual", r.theta1_residual},
              {"bound_311", r.bound_311},
              {"bound_316", Json{{"first", opt(r.bound_316_first)}, {"second", opt(r.bound_316_second)}}},
              {"bound_317", Json{{"first", opt(r.bound_317_first)}, {"second", opt(r.bound_317_second)}}},
              {"asymptotic", r.asymptotic}};
}

// ---------------------------------------------------------------------------
// CSV

using CsvTable = std::vector<std::vector<std::string>>;

inline void write_csv(std::ostream& os, const CsvTable& t) {
  for (const auto& row : t) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i];
    }
    os << '\n';
  }
}

inline CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    t.push_back(std::move(row));
  }
  return t;
}

// Normalize numeric cells to shortest round-trip form.
inline CsvTable canonical_csv(const CsvTable& in) {
  CsvTable out = in;
  for (std::size_t r = 1; r < out.size(); ++r)
    for (auto& c : out[r]) {
      double v = 0.0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec == std::errc() && res.ptr == c.data() + c.size()) c = format_double(v);
    }
  return out;
}

inline CsvTable hankel_csv(const HankelModel& m) {
  CsvTable t{{"n", "k_n", "sigma_n", "mu_tilde_n", "mu_dprime_n", "eta_n"}};
  for (std::int64_t n = 1; n <= m.N(); ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    t.push_back({std::to_string(n), std::to_string(m.k[i]), format_double(m.sigma[i]), format_double(m.mu_tilde[i]),
                 format_double(m.mu_dprime[i]), format_double(m.eta[i])});
  }
  return t;
}

inline CsvTable gram_csv(std::int64_t N) {
  CsvTable t{{"m", "n", "z"}};
  for (std::int64_t m = 1; m <= N; ++m)
    for (std::int64_t n = 1; n <= N; ++n) t.push_back({std::to_string(m), std::to_string(n), format_double(gram_entry(N, m, n))});
  return t;
}

inline CsvTable spectrum_csv(const Spectrum& s) {
  CsvTable t{{"sign", "k", "nu"}};
  for (std::size_t i = 0; i < s.nu_plus.size(); ++i) t.push_back({"plus", std::to_string(i + 1), format_double(s.nu_plus[i])});
  for (std::size_t i = 0; i < s.nu_minus.size(); ++i)
    t.push_back({"minus", std::to_string(i + 1), format_double(s.nu_minus[i])});
  return t;
}

}  // namespace ms
