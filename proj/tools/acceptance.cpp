// Acceptance suite: one PASS/FAIL line per criterion.
//
//   weakcr_acceptance [--cli PATH] [--unit-tests PATH]
//
// --cli runs the built binary twice per documented invocation to compare
// bytes across processes; --unit-tests times the unit suite end to end.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "commands.hpp"
#include "weakcr/error.hpp"
#include "weakcr/ladder.hpp"
#include "weakcr/ncpoly.hpp"
#include "weakcr/uncertainty.hpp"
#include "weakcr/weighted_l2.hpp"

using namespace weakcr;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

const NCPoly S = NCPoly::generator(Gen::S);
const NCPoly T = NCPoly::generator(Gen::T);
const NCPoly Sd = NCPoly::generator(Gen::Sd);
const NCPoly Td = NCPoly::generator(Gen::Td);

Word random_word(std::mt19937_64& rng, int len) {
  std::uniform_int_distribution<int> g(0, 3);
  Word w;
  for (int i = 0; i < len; ++i) w.push_back(static_cast<Gen>(g(rng)));
  return w;
}

NCPoly random_poly(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> coef(-2, 2), deg(0, max_degree), nterms(1, 6);
  NCPoly p;
  const int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    p.add_term(random_word(rng, deg(rng)), GaussRational(Rational(coef(rng)), Rational(coef(rng))));
  }
  return p;
}

// ------------------------------------------------------------------ 1

Outcome rewrite_identities() {
  Outcome o;
  const auto t0 = Clock::now();
  o.require(normal_order(S * T) == T * S + NCPoly::scalar(1), "S T");
  o.require(normal_order(S * S * T) == T * S * S + GaussRational(2) * S, "S^2 T");
  o.require(normal_order(S * S * T * T) ==
                T * T * S * S + GaussRational(4) * T * S + NCPoly::scalar(2),
            "S^2 T^2");
  o.require(normal_order(Sd * Sd * Td) == Td * Sd * Sd - GaussRational(2) * Sd, "S'^2 T'");
  for (int k = 1; k <= 10; ++k) {
    o.require(normal_order(power(S, k) * T) == T * power(S, k) + GaussRational(k) * power(S, k - 1),
              "S^" + std::to_string(k) + " T");
  }
  const double secs = seconds_since(t0);
  o.require(secs < 1.0, "runtime < 1 s");
  o.note("14 identities exact in " + sci(secs) + " s");
  return o;
}

// ------------------------------------------------------------------ 2

Outcome rewrite_soundness() {
  Outcome o;
  const auto t0 = Clock::now();
  const int n = 64;
  const OperatorPair pair = boson_pair(n);
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const NCPoly p = random_poly(rng, 4);
    const int b = fock_safe_block(p, n);
    const Matrix lhs = fock_eval(p, pair).entries().topLeftCorner(b, b);
    const Matrix rhs = fock_eval(normal_order(p), pair).entries().topLeftCorner(b, b);
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  const double secs = seconds_since(t0);
  o.require(worst < 1e-10, "max deviation < 1e-10");
  o.require(secs < 30.0, "runtime < 30 s");
  o.note("200 polynomials, N=64, max deviation " + sci(worst) + ", " + sci(secs) + " s");
  return o;
}

// ------------------------------------------------------------------ 3

Outcome cr_chain() {
  Outcome o;
  const OperatorPair p = boson_pair(256);
  const double weak = weak_defect(p);
  const double quasi = quasi_strong_defect(p, 0.1);
  const double weyl = weyl_defect(p, 0.1, 0.1);
  o.require(weak < 1e-12, "weak < 1e-12");
  o.require(quasi < 1e-8, "quasi-strong < 1e-8");
  o.require(weyl < 1e-6, "weyl < 1e-6");
  o.note("N=256 weak " + sci(weak) + ", quasi-strong " + sci(quasi) + ", weyl " + sci(weyl));
  std::string seq = "weyl over N=32,64,128,256:";
  double prev = 0.0;
  bool decreasing = true;
  for (int n : {32, 64, 128, 256}) {
    const double d = weyl_defect(boson_pair(n), 0.1, 0.1);
    if (n > 32 && !(d < prev)) decreasing = false;
    prev = d;
    seq += " " + sci(d);
  }
  o.note(seq);
  o.require(decreasing, "weyl defect decreasing in N (double-precision floor reached by N=64)");
  return o;
}

// ------------------------------------------------------------------ 4

Outcome ladder_criterion() {
  Outcome o;
  const LadderAnalysis a = analyze_ladders(swanson_pair(0.3, 96), 6);
  o.require(a.xi.length() == 7 && a.eta.length() == 7, "ladders of length 7");
  const double res = std::max(a.xi_check.max_residual(), a.eta_check.max_residual());
  o.require(res < 1e-8, "eigen residuals < 1e-8");
  o.require(a.spectrum.eigenvalues.size() == 7, "7 restricted eigenvalues");
  o.require(a.spectrum.max_deviation < 1e-6, "spectrum = {0..6} within 1e-6");
  o.require(a.spectrum.min_separation > 0.5, "simple spectrum");
  o.require(a.gram.identity_deviation() < 1e-7, "Gram = I within 1e-7");
  o.require(a.intertwiner.inverse_defect < 1e-6, "K_eta K_xi = I within 1e-6");
  o.require(a.intertwiner.intertwining_defect < 1e-6, "intertwining < 1e-6");
  o.note("residual " + sci(res) + ", spectrum dev " + sci(a.spectrum.max_deviation) + ", gram " +
         sci(a.gram.identity_deviation()) + ", inverse " + sci(a.intertwiner.inverse_defect) +
         ", intertwining " + sci(a.intertwiner.intertwining_defect));
  return o;
}

// ------------------------------------------------------------------ 5

PolyFunc random_polyfunc(std::mt19937_64& rng, int degree) {
  std::uniform_int_distribution<int> d(-3, 3);
  std::vector<GaussRational> v;
  for (int k = 0; k <= degree; ++k) v.emplace_back(Rational(d(rng)), Rational(d(rng), 2));
  if (v.back().is_zero()) v.back() = 1;
  return PolyFunc(std::move(v));
}

Outcome weighted_criterion() {
  Outcome o;
  const LadderLength l2 = ladder_length(2.0);
  o.require(l2.n_max == 2 && l2.dim_N0 == 3 && l2.closed_form_dim == 3, "alpha=2: n_max 2, dim 3");
  const LadderLength l74 = ladder_length(1.75);
  o.require(l74.n_max == 1 && l74.discrepancy, "alpha=7/4: constructive 1 with discrepancy flag");

  std::mt19937_64 rng(314159);
  double worst = 0.0;
  int pairs = 0;
  for (double a : {0.8, 1.0, 1.5, 1.75, 2.0, 2.5, 3.0}) {
    const Weight w = Weight::rational_alpha(a);
    for (int df = 0; df <= 4; ++df) {
      for (int dg = 0; dg <= 4; ++dg) {
        if (!(df + dg + 2 < 4 * a - 1)) continue;
        worst = std::max(worst, weak_cr_check(w, random_polyfunc(rng, df), random_polyfunc(rng, dg)));
        ++pairs;
      }
    }
  }
  for (int df = 0; df <= 4; ++df) {
    for (int dg = 0; dg <= 4; ++dg) {
      worst = std::max(worst, weak_cr_check(Weight::gaussian(), random_polyfunc(rng, df),
                                            random_polyfunc(rng, dg)));
      ++pairs;
    }
  }
  o.require(worst < 1e-8, "weak CR < 1e-8");
  bool exact = true;
  for (int k = 0; k <= 10; ++k) exact = exact && gaussian_eigen_check(k).exact;
  o.require(exact, "gaussian eigenfunctions exact k=0..10");
  o.note("alpha=2 n_max=" + std::to_string(l2.n_max) + " dim=" + std::to_string(l2.dim_N0) +
         "; alpha=7/4 n_max=" + std::to_string(l74.n_max) + " vs closed form " +
         std::to_string(l74.closed_form_dim) + "; weak CR max " + sci(worst) + " over " +
         std::to_string(pairs) + " pairs");
  return o;
}

// ------------------------------------------------------------------ 6

Outcome uncertainty_criterion() {
  Outcome o;
  const int n = 64;
  const double r2 = 1.0 / std::sqrt(2.0);
  const std::vector<cplx> zs = {0.0, 0.5, cplx(0, 1), cplx(-0.6, 0.8), cplx(r2, -r2), 1.0};

  double rot_dev = 0.0, boson_dev = 0.0, gap_dev = 0.0;
  bool rot_sat = true, ur2_sat = true;
  const OperatorPair rot = rotated_boson_pair(n), bos = boson_pair(n);
  for (cplx z : zs) {
    const StateVector phi = coherent_state(z, n);
    const URResult a = ur1_check(rot, phi);
    for (double d : {a.deltas.dS, a.deltas.dSd, a.deltas.dT, a.deltas.dTd}) {
      rot_dev = std::max(rot_dev, std::abs(d - r2));
    }
    rot_sat = rot_sat && a.saturated;
    const URResult b1 = ur1_check(bos, phi);
    const URResult b2 = ur2_check(bos, phi);
    const double want[4] = {0, 1, 1, 0};
    const double got[4] = {b1.deltas.dS, b1.deltas.dSd, b1.deltas.dT, b1.deltas.dTd};
    for (int i = 0; i < 4; ++i) boson_dev = std::max(boson_dev, std::abs(got[i] - want[i]));
    ur2_sat = ur2_sat && b2.saturated;
    gap_dev = std::max(gap_dev, std::abs(b1.gap - 1.0));
  }
  o.require(rot_dev < 1e-6 && rot_sat, "rotated pair: deltas 1/sqrt2 and UR1 saturated");
  o.require(boson_dev < 1e-6 && ur2_sat && gap_dev < 1e-6,
            "(a, a'): deltas (0,1,1,0), UR2 saturated, UR1 gap 1");

  double closed = 0.0;
  for (double theta : {0.0, 0.1, 0.2, 0.3, 0.5, std::numbers::pi / 4, 1.0}) {
    for (const StateVector& phi : {coherent_state(0.0, n), coherent_state(1.0, n), basis_state(2, n),
                                   coherent_state(cplx(0.3, -0.9), n)}) {
      closed = std::max(closed, swanson_closed_form(theta, phi).max_discrepancy);
    }
  }
  o.require(closed < 1e-6, "Swanson closed forms within 1e-6");

  const ScanTable s0 = saturation_scan(ScanModel::swanson(0.0));
  o.require(s0.min_ur1_gap > 0.4 && s0.ur1_saturated_count == 0, "swanson(0) min UR1 gap > 0.4");

  const ScanTable m = saturation_scan(ScanModel::matrix2x2(1.0, 1.0));
  std::string ur1_at, ur2_at, stated_at;
  bool ur1_ok = true, ur2_never = true;
  for (const auto& row : m.rows) {
    const bool endpoint = row.t == 0.0 || row.t == 1.0;
    if (row.ur1_saturated != endpoint) ur1_ok = false;
    if (row.ur2_saturated) ur2_never = false;
    if (row.ur1_saturated) ur1_at += " " + std::to_string(row.t).substr(0, 3);
    if (row.ur2_saturated) ur2_at += " " + std::to_string(row.t).substr(0, 3);
    if (*row.stated_ur1_condition) stated_at += " " + std::to_string(row.t).substr(0, 3);
  }
  o.require(ur1_ok && ur2_never,
            "2x2: UR1 saturated exactly at t in {0,1} and UR2 never (computed: UR1 at [" +
                ur1_at + " ], UR2 at [" + ur2_at + " ]; stated UR1 condition holds at [" +
                stated_at + " ])");
  o.note("rotated dev " + sci(rot_dev) + ", boson dev " + sci(boson_dev) + ", closed-form " +
         sci(closed) + ", swanson(0) min UR1 gap " + sci(s0.min_ur1_gap));
  return o;
}

// ------------------------------------------------------------------ 7

Outcome algebra_criterion() {
  Outcome o;
  std::mt19937_64 rng(77);
  bool inv = true, anti = true, idem = true, lin = true;
  for (int i = 0; i < 300; ++i) {
    const NCPoly p = random_poly(rng, 6), q = random_poly(rng, 6);
    inv = inv && adjoint(adjoint(p)) == p;
    anti = anti && adjoint(multiply(p, q)) == multiply(adjoint(q), adjoint(p));
    const NCPoly np = normal_order(p);
    idem = idem && normal_order(np) == np;
    const GaussRational a(Rational(3, 2), Rational(-1)), b(Rational(-2), Rational(1, 3));
    lin = lin && normal_order(a * p + b * q) == a * np + b * normal_order(q);
  }
  o.require(inv, "adjoint involution");
  o.require(anti, "adjoint antihomomorphism");
  o.require(idem, "normal_order idempotent");
  o.require(lin, "normal_order linear");

  bool confluent = true;
  int words = 0;
  for (int len = 0; len <= 6; ++len) {
    const int total = 1 << (2 * len);
    for (int code = 0; code < total; ++code) {
      Word w;
      for (int j = 0; j < len; ++j) w.push_back(static_cast<Gen>((code >> (2 * j)) & 3));
      const NCPoly m = NCPoly::monomial(w);
      confluent = confluent && normal_order(m, RewriteStrategy::Leftmost) ==
                                   normal_order(m, RewriteStrategy::Rightmost);
      ++words;
    }
  }
  for (int len : {7, 8}) {
    for (int i = 0; i < 1000; ++i) {
      const NCPoly m = NCPoly::monomial(random_word(rng, len));
      confluent = confluent && normal_order(m, RewriteStrategy::Leftmost) ==
                                   normal_order(m, RewriteStrategy::Rightmost);
      ++words;
    }
  }
  o.require(confluent, "leftmost and rightmost strategies agree");
  o.note("300 random pairs; confluence on " + std::to_string(words) +
         " words (all words up to length 6, 1000 each of length 7 and 8)");
  return o;
}

// ------------------------------------------------------------------ 8

std::string run_in_process(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = cli::run(args, out, err);
  return out.str();
}

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

bool run_process(const std::string& cmd, std::string& output, int& code) {
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return false;
  std::array<char, 4096> buf{};
  output.clear();
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), n);
  const int status = pclose(pipe);
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return true;
}

Outcome cli_criterion(const std::string& cli_path, const std::string& unit_path,
                      Clock::time_point suite_start) {
  Outcome o;
  int code = 0;

  const std::vector<std::string> inv1 = {"normal-order", "S T"};
  const std::string t1 = run_in_process(inv1, code);
  o.require(code == 0 && t1.rfind("T S + 1\n", 0) == 0, "normal-order \"S T\" prints T S + 1");

  const std::vector<std::string> inv2 = {"weights", "--alpha", "2", "--json"};
  const std::string t2 = run_in_process(inv2, code);
  const auto j2 = cli::Json::parse(t2);
  o.require(code == 0 && j2["result"]["ladder_length"]["n_max"] == 2 &&
                j2["result"]["ladder_length"]["dim_N0"] == 3,
            "weights --alpha 2 reports n_max=2, dim_N0=3");

  const std::vector<std::string> inv3 = {"uncertainty", "--model", "swanson:0", "--scan",
                                         "coherent:5x5", "--json"};
  const std::string t3 = run_in_process(inv3, code);
  const auto j3 = cli::Json::parse(t3);
  o.require(code == 0 && j3["result"]["min_ur1_gap"].get<double>() > 0.0,
            "uncertainty swanson:0 scan reports min UR1 gap > 0");

  bool same = true;
  for (const auto* args : {&inv1, &inv2, &inv3}) {
    int c2 = 0;
    const std::string again = run_in_process(*args, c2);
    same = same && again == (args == &inv1 ? t1 : args == &inv2 ? t2 : t3);
  }
  if (!cli_path.empty()) {
    for (const auto* args : {&inv1, &inv2, &inv3}) {
      std::string cmd = quote(cli_path);
      for (const auto& a : *args) cmd += " " + quote(a);
      std::string first, second;
      int c1 = 0, c2 = 0;
      const bool ok = run_process(cmd, first, c1) && run_process(cmd, second, c2);
      same = same && ok && !first.empty() && first == second && c1 == c2;
    }
    o.note("determinism checked in process and across two processes");
  } else {
    o.note("determinism checked in process only (no --cli)");
  }
  o.require(same, "byte-identical reports");

  if (!unit_path.empty()) {
    const auto t0 = Clock::now();
    std::string out;
    int uc = 0;
    const bool ok = run_process(quote(unit_path) + " 2>&1", out, uc);
    const double unit_secs = seconds_since(t0);
    o.require(ok && uc == 0, "unit suite passes");
    o.note("unit suite " + sci(unit_secs) + " s");
  } else {
    o.note("unit suite not run (no --unit-tests)");
  }
  const double total = seconds_since(suite_start);
  o.require(total < 300.0, "end-to-end under 5 minutes");
  o.note("acceptance run " + sci(total) + " s");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli_path, unit_path;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) {
      cli_path = argv[++i];
    } else if (a == "--unit-tests" && i + 1 < argc) {
      unit_path = argv[++i];
    } else {
      std::cerr << "usage: weakcr_acceptance [--cli PATH] [--unit-tests PATH]\n";
      return 2;
    }
  }

  const auto start = Clock::now();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"rewrite identities", rewrite_identities},
      {"rewrite soundness", rewrite_soundness},
      {"CR chain (boson, N=256)", cr_chain},
      {"ladder (Swanson 0.3, N=96, length 6)", ladder_criterion},
      {"weighted example", weighted_criterion},
      {"uncertainty examples", uncertainty_criterion},
      {"algebraic properties", algebra_criterion},
      {"CLI", [&] { return cli_criterion(cli_path, unit_path, start); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << "  " << criteria[i].first
              << "  [" << o.detail << "]" << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
