#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "weakcr/error.hpp"
#include "weakcr/expr.hpp"
#include "weakcr/ladder.hpp"
#include "weakcr/ncpoly.hpp"
#include "weakcr/uncertainty.hpp"
#include "weakcr/weighted_l2.hpp"

namespace weakcr::cli {

namespace {

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw UsageError("invalid " + what + " '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  const double v = parse_number(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e6) throw UsageError("invalid " + what + " '" + text + "'");
  return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double tol_or(const GlobalOptions& g, double dflt) { return g.tol.value_or(dflt); }

Json deltas_json(const DeltaReport& d) {
  return {{"dS", number(d.dS)},   {"dSd", number(d.dSd)}, {"dT", number(d.dT)},
          {"dTd", number(d.dTd)}, {"z", to_json(d.z)},    {"w", to_json(d.w)},
          {"state_norm", number(d.state_norm)}};
}

Json ur_json(const URResult& r) {
  Json j = {{"kind", to_string(r.kind)}, {"lhs", number(r.lhs)},     {"rhs", number(r.rhs)},
            {"gap", number(r.gap)},      {"saturated", r.saturated}, {"c_expectation", to_json(r.c_expectation)}};
  if (r.kind == URKind::UR2) {
    j["cross_condition_defect"] = number(r.cross_condition_defect);
    j["hypothesis_violated"] = r.hypothesis_violated;
  }
  return j;
}

std::string ur_line(const URResult& r) {
  return to_string(r.kind) + ": lhs " + fmt_short(r.lhs) + ", rhs " + fmt_short(r.rhs) + ", gap " +
         fmt_short(r.gap) + (r.saturated ? ", saturated" : ", not saturated");
}

OperatorPair fock_pair(const Model& m, int dim) {
  switch (m.kind) {
    case Model::Kind::Boson: return boson_pair(dim);
    case Model::Kind::Swanson: return swanson_pair(m.theta, dim);
    case Model::Kind::BosonRotation: return rotated_boson_pair(dim);
    case Model::Kind::Matrix2x2: break;
  }
  throw UsageError("model '" + m.text + "' has no Fock representation");
}

double fock_theta(const Model& m) {
  switch (m.kind) {
    case Model::Kind::Boson: return 0.0;
    case Model::Kind::Swanson: return m.theta;
    case Model::Kind::BosonRotation: return std::numbers::pi / 4;
    case Model::Kind::Matrix2x2: break;
  }
  throw UsageError("model '" + m.text + "' has no Fock representation");
}

void require_dim(int dim, int min) {
  if (dim < min) throw UsageError("--dim must be at least " + std::to_string(min));
}

}  // namespace

// ------------------------------------------------------------------- parsing

double parse_angle(const std::string& text) {
  const auto p = text.find("pi");
  if (p == std::string::npos) return parse_number(text, "angle");
  std::string coef = text.substr(0, p);
  const std::string rest = text.substr(p + 2);
  double mult = 1.0;
  if (coef == "-") {
    mult = -1.0;
  } else if (!coef.empty() && coef != "+") {
    if (coef.back() == '*') coef.pop_back();
    mult = parse_number(coef, "angle");
  }
  double div = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw UsageError("invalid angle '" + text + "'");
    div = parse_number(rest.substr(1), "angle");
    if (div == 0.0) throw UsageError("invalid angle '" + text + "'");
  }
  return mult * std::numbers::pi / div;
}

Model parse_model(const std::string& text) {
  Model m;
  m.text = text;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "boson" && colon == std::string::npos) {
    m.kind = Model::Kind::Boson;
  } else if (head == "boson_rotation" && colon == std::string::npos) {
    m.kind = Model::Kind::BosonRotation;
  } else if (head == "swanson" && !arg.empty()) {
    m.kind = Model::Kind::Swanson;
    m.theta = parse_angle(arg);
  } else if (head == "matrix2x2" && !arg.empty()) {
    const auto parts = split(arg, ',');
    if (parts.size() != 2) throw UsageError("matrix2x2 needs 's,q', got '" + arg + "'");
    m.kind = Model::Kind::Matrix2x2;
    m.s = parse_number(parts[0], "s");
    m.q = parse_number(parts[1], "q");
  } else {
    throw UsageError("unknown model '" + text +
                     "' (expected boson, boson_rotation, swanson:<theta> or matrix2x2:<s>,<q>)");
  }
  return m;
}

// ----------------------------------------------------------------- verify-cr

Report verify_cr(const VerifyCrOptions& o, const GlobalOptions& g) {
  const Model m = parse_model(o.model);
  require_dim(o.dim, 2);
  if (o.alpha < 0.0 || o.beta < 0.0) throw UsageError("--alpha and --beta must be >= 0");
  const OperatorPair pair = fock_pair(m, o.dim);

  Report r("verify-cr");
  r.parameters() = {{"model", o.model}, {"dim", o.dim}, {"alpha", o.alpha}, {"beta", o.beta}};
  const double t_weak = tol_or(g, 1e-12), t_quasi = tol_or(g, 1e-8), t_weyl = tol_or(g, 1e-6);
  r.tolerances() = {{"weak", t_weak}, {"quasi_strong", t_quasi}, {"weyl", t_weyl}};
  r.result()["safe_rank"] = pair.safe_rank();
  r.summary("model " + o.model + ", N = " + std::to_string(o.dim));

  const double weak = weak_defect(pair);
  r.result()["weak_defect"] = number(weak);
  r.summary("weak defect          " + fmt_short(weak));
  r.check("weak_defect", weak, t_weak);

  try {
    const double q = quasi_strong_defect(pair, o.alpha);
    r.result()["quasi_strong"] = {{"alpha", o.alpha},
                                  {"band", pair.safe_rank() - semigroup_margin(o.alpha, o.dim)},
                                  {"defect", number(q)}};
    r.summary("quasi-strong defect  " + fmt_short(q));
    r.check("quasi_strong_defect", q, t_quasi);
  } catch (const Error& e) {
    r.result()["quasi_strong"] = {{"alpha", o.alpha}, {"error", e.what()}};
    r.fail("quasi_strong_defect", e.what());
  }

  try {
    const double w = weyl_defect(pair, o.alpha, o.beta);
    r.result()["weyl"] = {
        {"alpha", o.alpha},
        {"beta", o.beta},
        {"band", pair.safe_rank() - semigroup_margin(std::max(o.alpha, o.beta), o.dim)},
        {"defect", number(w)}};
    r.summary("weyl defect          " + fmt_short(w));
    r.check("weyl_defect", w, t_weyl);
  } catch (const Error& e) {
    r.result()["weyl"] = {{"alpha", o.alpha}, {"beta", o.beta}, {"error", e.what()}};
    r.fail("weyl_defect", e.what());
  }
  return r;
}

// -------------------------------------------------------------------- ladder

Report ladder(const LadderOptions& o, const GlobalOptions& g) {
  const Model m = parse_model(o.model);
  if (m.kind == Model::Kind::Matrix2x2) throw UsageError("ladder needs a Fock model");
  require_dim(o.dim, 2);
  if (o.len < 0 || o.len >= o.dim) throw UsageError("--len must lie in [0, dim)");
  const OperatorPair pair = fock_pair(m, o.dim);

  Report r("ladder");
  r.parameters() = {{"model", o.model}, {"dim", o.dim}, {"len", o.len}};
  const double t_eig = tol_or(g, 1e-8), t_spec = tol_or(g, 1e-6), t_gram = tol_or(g, 1e-7),
               t_int = tol_or(g, 1e-6);
  r.tolerances() = {{"eigen_residual", t_eig},
                    {"spectrum", t_spec},
                    {"gram", t_gram},
                    {"intertwiner", t_int}};

  LadderAnalysis a;
  try {
    a = analyze_ladders(pair, o.len);
  } catch (const Error& e) {
    r.result()["error"] = e.what();
    r.fail("analysis", e.what());
    return r;
  }

  auto family = [](const LadderFamily& f, const EigenCheck& c) {
    Json j;
    j["length"] = f.length();
    j["ladder_operator"] = f.ladder_op_label;
    j["stop_reason"] = f.stop_reason;
    Json num = Json::array(), low = Json::array();
    for (double v : c.number_residuals) num.push_back(number(v));
    for (double v : c.lowering_residuals) low.push_back(number(v));
    j["number_residuals"] = num;
    j["lowering_residuals"] = low;
    j["max_residual"] = number(c.max_residual());
    return j;
  };
  Json& res = r.result();
  res["sigma_min_S"] = number(a.sigma_min_S);
  res["sigma_min_Td"] = number(a.sigma_min_Td);
  res["xi"] = family(a.xi, a.xi_check);
  res["eta"] = family(a.eta, a.eta_check);
  Json eig = Json::array();
  for (cplx z : a.spectrum.eigenvalues) eig.push_back(to_json(z));
  res["spectrum"] = {{"eigenvalues", eig},
                     {"max_deviation", number(a.spectrum.max_deviation)},
                     {"min_separation", number(a.spectrum.min_separation)}};
  res["gram"] = {{"normalization", to_json(a.gram.normalization)},
                 {"identity_deviation", number(a.gram.identity_deviation())}};
  const IntertwinerPair& k = a.intertwiner;
  Json sx = Json::array(), se = Json::array();
  for (double v : k.riesz.singular_values_xi) sx.push_back(number(v));
  for (double v : k.riesz.singular_values_eta) se.push_back(number(v));
  res["intertwiners"] = {{"condition_xi", number(k.condition_xi)},
                         {"condition_eta", number(k.condition_eta)},
                         {"inverse_defect", number(k.inverse_defect)},
                         {"intertwining_defect", number(k.intertwining_defect)}};
  res["riesz"] = {{"singular_values_xi", sx},
                  {"singular_values_eta", se},
                  {"positive", k.riesz.positive},
                  {"min_restricted_eigenvalue", number(k.riesz.min_restricted_eigenvalue)},
                  {"orthonormality_defect", number(k.riesz.orthonormality_defect)}};

  r.summary("model " + o.model + ", N = " + std::to_string(o.dim) + ", ladder lengths " +
            std::to_string(a.xi.length()) + " / " + std::to_string(a.eta.length()));
  std::string spec = "spectrum:";
  for (cplx z : a.spectrum.eigenvalues) spec += " " + fmt_short(z.real());
  r.summary(spec);
  r.summary("condition numbers " + fmt_short(k.condition_xi) + " / " + fmt_short(k.condition_eta));

  r.check_flag("xi_length", a.xi.length() == o.len + 1);
  r.check_flag("eta_length", a.eta.length() == o.len + 1);
  r.check("xi_eigen_residual", a.xi_check.max_residual(), t_eig);
  r.check("eta_eigen_residual", a.eta_check.max_residual(), t_eig);
  r.check("spectrum_deviation", a.spectrum.max_deviation, t_spec);
  if (a.spectrum.eigenvalues.size() > 1) {
    r.check("spectrum_min_separation", a.spectrum.min_separation, 0.5, Relation::AtLeast);
  }
  r.check("gram_identity_deviation", a.gram.identity_deviation(), t_gram);
  r.check("inverse_defect", k.inverse_defect, t_int);
  r.check("intertwining_defect", k.intertwining_defect, t_int);
  return r;
}

// ------------------------------------------------------------------- weights

namespace {

PolyFunc random_poly(std::mt19937_64& rng, int degree) {
  std::uniform_int_distribution<int> d(-3, 3);
  std::vector<GaussRational> v;
  for (int k = 0; k <= degree; ++k) v.emplace_back(Rational(d(rng)), Rational(d(rng), 2));
  if (v.back().is_zero()) v.back() = 1;
  return PolyFunc(std::move(v));
}

}  // namespace

Report weights(const WeightsOptions& o, const GlobalOptions& g) {
  if (o.alpha.has_value() == o.gaussian) throw UsageError("give exactly one of --alpha, --gaussian");
  if (o.max_moment < 0 || o.max_moment > 40) throw UsageError("--max-moment must lie in [0, 40]");
  const Weight w = o.gaussian ? Weight::gaussian() : Weight::rational_alpha(*o.alpha);

  Report r("weights");
  r.parameters() = {{"weight", o.gaussian ? Json("gaussian") : Json(*o.alpha)},
                    {"max_moment", o.max_moment},
                    {"seed", g.seed}};
  const double t_cr = tol_or(g, 1e-8);
  r.tolerances() = {{"weak_cr", t_cr}};
  Json& res = r.result();
  res["weight"] = w.describe();
  r.summary("weight " + w.describe());

  Json moments = Json::array();
  for (int k = 0; k <= o.max_moment; ++k) {
    const Moment mk = moment(w, k);
    moments.push_back({{"k", k},
                       {"finite", mk.finite},
                       {"value", mk.finite ? number(static_cast<double>(mk.value)) : Json(nullptr)}});
  }
  res["moments"] = moments;

  if (!o.gaussian) {
    const LadderLength l = ladder_length(*o.alpha);
    res["ladder_length"] = {{"n_max", l.n_max},
                            {"dim_N0", l.dim_N0},
                            {"strict_bound", number(l.strict_bound)},
                            {"closed_form_dim", l.closed_form_dim},
                            {"discrepancy", l.discrepancy}};
    const PowerProfile prof = profile_from_membership(monomial_membership(w), 8);
    res["power_profile"] = prof.to_string();
    r.summary("n_max = " + std::to_string(l.n_max) + ", dim_N0 = " + std::to_string(l.dim_N0) +
              ", closed form " + std::to_string(l.closed_form_dim) +
              (l.discrepancy ? " (discrepancy)" : ""));
    r.summary("power profile " + prof.to_string());
  } else {
    Json eig = Json::array();
    bool all_exact = true;
    double worst_quad = 0.0;
    for (int k = 0; k <= 10; ++k) {
      const GaussianEigenCheck c = gaussian_eigen_check(k);
      all_exact = all_exact && c.exact;
      worst_quad = std::max(worst_quad, c.quadrature_residual);
      eig.push_back({{"k", k},
                     {"exact", c.exact},
                     {"symbolic_residual", number(c.symbolic_residual)},
                     {"quadrature_residual", number(c.quadrature_residual)}});
    }
    res["gaussian_eigen"] = eig;
    r.summary(std::string("gaussian eigenfunctions k = 0..10: ") +
              (all_exact ? "exact" : "NOT exact"));
    r.check_flag("gaussian_eigen_exact", all_exact);
  }

  std::mt19937_64 rng(g.seed);
  Json suite = Json::array();
  double worst = 0.0;
  for (int df = 0; df <= 4; ++df) {
    for (int dg = 0; dg <= 4; ++dg) {
      if (!o.gaussian && !(df + dg + 2 < 4.0 * *o.alpha - 1.0)) continue;
      const PolyFunc f = random_poly(rng, df), h = random_poly(rng, dg);
      const double d = weak_cr_check(w, f, h);
      worst = std::max(worst, d);
      suite.push_back({{"f", f.to_string()}, {"g", h.to_string()}, {"defect", number(d)}});
    }
  }
  res["weak_cr"] = {{"pairs", suite.size()}, {"max_defect", number(worst)}, {"suite", suite}};
  r.summary("weak CR over " + std::to_string(suite.size()) + " admissible pairs: max defect " +
            fmt_short(worst));
  r.check("weak_cr_max_defect", worst, t_cr);
  return r;
}

// -------------------------------------------------------------- normal-order

namespace {

PowerProfile parse_profile(const std::string& text) {
  if (text.empty()) return PowerProfile::unbounded();
  std::vector<PowerBound> m;
  for (const auto& part : split(text, ',')) {
    if (part == "inf") {
      m.push_back(PowerBound::unbounded());
    } else {
      const int v = parse_int(part, "profile entry");
      if (v < 0) throw UsageError("profile entries must be >= 0");
      m.push_back(PowerBound::finite(v));
    }
  }
  return PowerProfile::from_bounds(std::move(m));
}

}  // namespace

Report normal_order(const NormalOrderOptions& o, const GlobalOptions& g) {
  require_dim(o.dim, 2);
  const PowerProfile profile = parse_profile(o.profile);
  const NCPoly p = parse_polynomial(o.expr);
  const NCPoly q = weakcr::normal_order(p);

  Report r("normal-order");
  r.parameters() = {{"expr", o.expr}, {"profile", profile.to_string()}, {"dim", o.dim}};
  const double t_sound = tol_or(g, 1e-10);
  r.tolerances() = {{"soundness", t_sound}};
  Json& res = r.result();
  res["input"] = render(p);
  res["canonical"] = render(q);
  res["degree"] = q.degree();
  res["terms"] = q.terms().size();

  const RegularityResult reg = is_regular(q, profile);
  res["regular"] = reg.regular;
  res["witness"] = reg.witness ? Json(render(*reg.witness)) : Json(nullptr);
  res["reason"] = reg.reason;

  r.summary(render(q));
  r.summary("regular (" + profile.to_string() + "): " +
            (reg.regular ? std::string("yes") : "no, " + render(*reg.witness) + ": " + reg.reason));

  const int block = fock_safe_block(p, o.dim);
  if (block < 1) throw UsageError("--dim too small for a polynomial of degree " +
                                  std::to_string(p.degree()));
  Json sound = {{"dim", o.dim}, {"safe_block", block}};
  for (const auto& [name, pair] :
       {std::pair{std::string("boson"), boson_pair(o.dim)},
        std::pair{std::string("swanson:0.3"), swanson_pair(0.3, o.dim)}}) {
    const Matrix a = fock_eval(p, pair).entries().topLeftCorner(block, block);
    const Matrix b = fock_eval(q, pair).entries().topLeftCorner(block, block);
    const double dev = (a - b).cwiseAbs().maxCoeff();
    sound[name] = number(dev);
    r.check("soundness_" + name, dev, t_sound);
  }
  res["soundness"] = sound;
  return r;
}

// --------------------------------------------------------------- uncertainty

namespace {

StateVector parse_fock_state(const std::string& text, int dim) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "coherent") {
    const auto parts = split(arg, ',');
    if (parts.size() != 2) throw UsageError("coherent state needs 'x,y'");
    return coherent_state(cplx(parse_number(parts[0], "state"), parse_number(parts[1], "state")),
                          dim);
  }
  if (head == "basis") {
    const int k = parse_int(arg, "basis index");
    if (k < 0 || k >= dim) throw UsageError("basis index outside [0, dim)");
    return basis_state(k, dim);
  }
  throw UsageError("unknown state '" + text + "' (expected coherent:x,y or basis:k)");
}

ScanGrid parse_grid(const std::string& text, bool two_by_two, int dim) {
  ScanGrid grid;
  grid.dim = dim;
  for (const auto& item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("invalid scan spec '" + text + "'");
    const std::string key = item.substr(0, colon), val = item.substr(colon + 1);
    if (key == "coherent" && !two_by_two) {
      const auto x = val.find('x');
      if (x == std::string::npos) throw UsageError("coherent grid needs RxI, got '" + val + "'");
      grid.re_points = parse_int(val.substr(0, x), "grid size");
      grid.im_points = parse_int(val.substr(x + 1), "grid size");
      if (grid.re_points < 1 || grid.im_points < 1) throw UsageError("grid sizes must be >= 1");
    } else if (key == "basis" && !two_by_two) {
      grid.basis_states = parse_int(val, "basis count");
      if (grid.basis_states < 0 || grid.basis_states > dim) {
        throw UsageError("basis count outside [0, dim]");
      }
    } else if (key == "width" && !two_by_two) {
      grid.half_width = parse_number(val, "width");
      if (grid.half_width < 0.0) throw UsageError("width must be >= 0");
    } else if (key == "circle" && two_by_two) {
      grid.circle_points = parse_int(val, "circle points");
      if (grid.circle_points < 2) throw UsageError("circle needs at least 2 points");
    } else {
      throw UsageError("scan key '" + key + "' does not apply to this model");
    }
  }
  return grid;
}

Json opt_number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

}  // namespace

Report uncertainty(const UncertaintyOptions& o, const GlobalOptions& g) {
  const Model m = parse_model(o.model);
  const bool two = m.kind == Model::Kind::Matrix2x2;
  if (!two) require_dim(o.dim, 2);

  Report r("uncertainty");
  r.parameters() = {{"model", o.model},
                    {"scan", o.scan.empty() ? Json(nullptr) : Json(o.scan)},
                    {"state", o.state.empty() ? Json(nullptr) : Json(o.state)},
                    {"dim", two ? 2 : o.dim}};
  const double t_valid = tol_or(g, 1e-8);
  const double t_closed = tol_or(g, two ? 1e-14 : 1e-6);
  r.tolerances() = {{"saturation", kSaturationTol},
                    {"validity", t_valid},
                    {"closed_form", t_closed},
                    {"cross_condition", kCrossConditionTol}};
  Json& res = r.result();

  if (!o.scan.empty()) {
    if (!o.state.empty()) throw UsageError("--state and --scan are exclusive");
    const ScanModel sm = two ? ScanModel::matrix2x2(m.s, m.q) : ScanModel::swanson(fock_theta(m));
    const ScanTable t = saturation_scan(sm, parse_grid(o.scan, two, o.dim));
    res["model"] = sm.to_string();
    res["rows"] = t.rows.size();
    res["min_ur1_gap"] = number(t.min_ur1_gap);
    res["min_ur2_gap"] = number(t.min_ur2_gap);
    res["ur1_saturated_count"] = t.ur1_saturated_count;
    res["ur2_saturated_count"] = t.ur2_saturated_count;
    if (!two) {
      res["min_reading_square"] = opt_number(t.min_reading_square);
      res["min_reading_linear"] = opt_number(t.min_reading_linear);
    }
    Table table;
    table.header = {"label", "z_re", "z_im", "t",       "dS",      "dSd",     "dT",
                    "dTd",   "ur1_gap", "ur2_gap", "ur1_saturated", "ur2_saturated",
                    "C_phi", "E_phi", "reading_square", "reading_linear",
                    "stated_ur1_condition", "stated_ur2_condition"};
    Json rows = Json::array();
    auto cell = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
    auto flag = [](const std::optional<bool>& v) {
      return v ? std::string(*v ? "true" : "false") : std::string();
    };
    for (const auto& row : t.rows) {
      Json j = {{"label", row.label}, {"z", to_json(row.z)},       {"t", number(row.t)},
                {"deltas", deltas_json(row.deltas)},               {"ur1_gap", number(row.ur1_gap)},
                {"ur2_gap", number(row.ur2_gap)}, {"ur1_saturated", row.ur1_saturated},
                {"ur2_saturated", row.ur2_saturated}};
      if (row.moments) j["moments"] = {{"C_phi", number(row.moments->C_phi)}, {"E_phi", number(row.moments->E_phi)}};
      if (row.reading_square || row.reading_linear) {
        j["reading_square"] = opt_number(row.reading_square);
        j["reading_linear"] = opt_number(row.reading_linear);
      }
      if (row.stated_ur1_condition) {
        j["stated_ur1_condition"] = *row.stated_ur1_condition;
        j["stated_ur2_condition"] = *row.stated_ur2_condition;
      }
      rows.push_back(j);
      table.rows.push_back(
          {row.label, fmt(row.z.real()), fmt(row.z.imag()), fmt(row.t), fmt(row.deltas.dS),
           fmt(row.deltas.dSd), fmt(row.deltas.dT), fmt(row.deltas.dTd), fmt(row.ur1_gap),
           fmt(row.ur2_gap), row.ur1_saturated ? "true" : "false",
           row.ur2_saturated ? "true" : "false",
           row.moments ? fmt(row.moments->C_phi) : "", row.moments ? fmt(row.moments->E_phi) : "",
           cell(row.reading_square), cell(row.reading_linear), flag(row.stated_ur1_condition),
           flag(row.stated_ur2_condition)});
    }
    res["table"] = rows;
    r.table() = std::move(table);

    r.summary("scan " + sm.to_string() + " over " + std::to_string(t.rows.size()) + " states");
    r.summary("min UR1 gap " + fmt_short(t.min_ur1_gap) + ", UR1 saturated in " +
              std::to_string(t.ur1_saturated_count));
    r.summary("min UR2 gap " + fmt_short(t.min_ur2_gap) + ", UR2 saturated in " +
              std::to_string(t.ur2_saturated_count));
    if (t.min_reading_square || t.min_reading_linear) {
      r.summary("min sqrt((C+1/2)^2-E^2) " +
                (t.min_reading_square ? fmt_short(*t.min_reading_square) : std::string("n/a")) +
                ", min sqrt(C+1/2-E^2) " +
                (t.min_reading_linear ? fmt_short(*t.min_reading_linear) : std::string("n/a")));
    }
    r.check("ur1_valid", t.min_ur1_gap, -t_valid, Relation::AtLeast);
    r.check("ur2_valid", t.min_ur2_gap, -t_valid, Relation::AtLeast);
    return r;
  }

  if (two) {
    double tt = 1.0;
    if (!o.state.empty()) {
      if (o.state.rfind("phi:", 0) != 0) throw UsageError("2x2 states are given as phi:<t>");
      tt = parse_number(o.state.substr(4), "t");
      if (tt < 0.0 || tt > 1.0) throw UsageError("t = |phi1|^2 must lie in [0, 1]");
    }
    const Matrix2x2Report rep = matrix2x2_report(m.s, m.q, std::sqrt(tt), std::sqrt(1.0 - tt));
    res["t"] = number(tt);
    res["deltas"] = deltas_json(rep.matrix);
    res["closed_form"] = deltas_json(rep.closed_form);
    res["closed_form_discrepancy"] = number(rep.max_discrepancy);
    res["ur1"] = ur_json(rep.ur1);
    res["ur2"] = ur_json(rep.ur2);
    res["stated_ur1_condition"] = rep.stated_ur1_condition;
    res["stated_ur2_condition"] = rep.stated_ur2_condition;
    r.summary("2x2 model s = " + fmt_short(m.s) + ", q = " + fmt_short(m.q) +
              ", |phi1|^2 = " + fmt_short(tt));
    r.summary(ur_line(rep.ur1));
    r.summary(ur_line(rep.ur2));
    r.check("closed_form_discrepancy", rep.max_discrepancy, t_closed);
    r.check("ur1_valid", rep.ur1.gap, -t_valid, Relation::AtLeast);
    r.check("ur2_valid", rep.ur2.gap, -t_valid, Relation::AtLeast);
    return r;
  }

  const StateVector phi = parse_fock_state(o.state.empty() ? "coherent:0,0" : o.state, o.dim);
  const OperatorPair pair = fock_pair(m, o.dim);
  const URResult u1 = ur1_check(pair, phi);
  const URResult u2 = ur2_check(pair, phi);
  const SwansonReport sw = swanson_closed_form(fock_theta(m), phi);
  res["deltas"] = deltas_json(u1.deltas);
  res["ur1"] = ur_json(u1);
  res["ur2"] = ur_json(u2);
  res["swanson"] = {{"theta", number(sw.theta)},
                    {"C_phi", number(sw.moments.C_phi)},
                    {"E_phi", number(sw.moments.E_phi)},
                    {"closed_form", deltas_json(sw.closed_form)},
                    {"max_discrepancy", number(sw.max_discrepancy)}};
  r.summary("model " + o.model + ", N = " + std::to_string(o.dim) + ", state " +
            (o.state.empty() ? std::string("coherent:0,0") : o.state));
  r.summary("dS " + fmt_short(u1.deltas.dS) + ", dS' " + fmt_short(u1.deltas.dSd) + ", dT " +
            fmt_short(u1.deltas.dT) + ", dT' " + fmt_short(u1.deltas.dTd));
  r.summary(ur_line(u1));
  r.summary(ur_line(u2) + (u2.hypothesis_violated ? " (cross condition violated)" : ""));
  r.check("closed_form_discrepancy", sw.max_discrepancy, t_closed);
  r.check("ur1_valid", u1.gap, -t_valid, Relation::AtLeast);
  if (!u2.hypothesis_violated) r.check("ur2_valid", u2.gap, -t_valid, Relation::AtLeast);
  return r;
}

// ----------------------------------------------------------------------- run

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int emit(const Report& r, const GlobalOptions& g, std::ostream& out, std::ostream& err, int code) {
  if (!g.out.empty()) {
    std::ofstream f(g.out, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << g.out << '\n';
      return 2;
    }
    if (ends_with(g.out, ".csv")) {
      try {
        r.write_csv(f);
      } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
      }
    } else {
      f << r.to_json().dump(2) << '\n';
    }
  }
  if (g.json) {
    out << r.to_json().dump(2) << '\n';
  } else {
    r.write_text(out);
  }
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Executable checks of the weak commutation relation [S,T] = 1.", "weakcr"};
  app.footer(
      "Operator expressions use S, T and S', T' for the adjoints (apostrophe = dagger),\n"
      "+ - * ^, parentheses, juxtaposition as product, and rational or imaginary\n"
      "coefficients such as 3, 1/2, 2i, (1 - 2i). Exit code: 0 all checks pass,\n"
      "1 a check failed, 2 invalid input.");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--out", g.out, "Also write the report to path.json or path.csv (scans)");
  app.add_option("--tol", g.tol, "Override every check threshold")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for randomized suites");
  app.add_flag("--json", g.json, "Print the JSON report instead of text");

  VerifyCrOptions vo;
  auto* vc = app.add_subcommand("verify-cr", "Weak, quasi-strong and Weyl-form defects");
  vc->add_option("--model", vo.model, "boson | swanson:<theta> | boson_rotation")->required();
  vc->add_option("--dim", vo.dim, "Truncation dimension N");
  vc->add_option("--alpha", vo.alpha, "Semigroup parameter for S");
  vc->add_option("--beta", vo.beta, "Semigroup parameter for T");

  LadderOptions lo;
  auto* lc = app.add_subcommand("ladder", "Eigenvector ladders, Gram matrix and intertwiners");
  lc->add_option("--model", lo.model, "swanson:<theta> | boson | boson_rotation");
  lc->add_option("--dim", lo.dim, "Truncation dimension N");
  lc->add_option("--len", lo.len, "Ladder length n (vectors 0..n)");

  WeightsOptions wo;
  auto* wc = app.add_subcommand("weights", "Weighted L2 moments, weak CR and ladder length");
  auto* alpha_opt = wc->add_option("--alpha", wo.alpha, "Rational weight (1 + x^4)^-alpha");
  auto* gauss_flag = wc->add_flag("--gaussian", wo.gaussian, "Gaussian weight exp(-x^2/2)");
  alpha_opt->excludes(gauss_flag);
  wc->add_option("--max-moment", wo.max_moment, "Largest moment index to report");

  NormalOrderOptions no;
  auto* nc = app.add_subcommand("normal-order", "Canonical form, regularity and soundness");
  nc->add_option("expr", no.expr, "Operator expression, e.g. \"S^2 T'\"")->required();
  nc->add_option("--profile", no.profile, "Power profile m0,m1,... (inf allowed)");
  nc->add_option("--dim", no.dim, "Dimension for the matrix soundness check");

  UncertaintyOptions uo;
  auto* uc = app.add_subcommand("uncertainty", "Uncertainty relations UR1 and UR2");
  uc->add_option("--model", uo.model,
                 "swanson:<theta> | boson | boson_rotation | matrix2x2:<s>,<q>")
      ->required();
  uc->add_option("--scan", uo.scan, "coherent:RxI[,basis:K][,width:W] or circle:P");
  uc->add_option("--state", uo.state, "coherent:x,y | basis:k | phi:t (2x2)");
  uc->add_option("--dim", uo.dim, "Truncation dimension N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::string name = app.get_subcommands().front()->get_name();
  try {
    Report r = name == "verify-cr"      ? verify_cr(vo, g)
               : name == "ladder"       ? ladder(lo, g)
               : name == "weights"      ? weights(wo, g)
               : name == "normal-order" ? normal_order(no, g)
                                        : uncertainty(uo, g);
    return emit(r, g, out, err, r.pass() ? 0 : 1);
  } catch (const SyntaxError& e) {
    Report r(name);
    r.result()["error"] = {{"line", e.line()}, {"column", e.column()}, {"message", e.message()}};
    r.fail("syntax", e.what());
    err << "error: " << e.what() << '\n';
    return emit(r, g, out, err, 2);
  } catch (const std::exception& e) {
    Report r(name);
    r.fail("input", e.what());
    err << "error: " << e.what() << '\n';
    return emit(r, g, out, err, 2);
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("weakcr");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace weakcr::cli
