#include "weakcr/ncpoly.hpp"

#include <algorithm>

#include <Eigen/SparseCore>

#include "weakcr/error.hpp"

namespace weakcr {

Gen dagger(Gen g) noexcept {
  switch (g) {
    case Gen::T: return Gen::Td;
    case Gen::S: return Gen::Sd;
    case Gen::Td: return Gen::T;
    case Gen::Sd: return Gen::S;
  }
  return g;
}

bool is_daggered(Gen g) noexcept { return g == Gen::Td || g == Gen::Sd; }

std::string_view gen_name(Gen g) noexcept {
  switch (g) {
    case Gen::T: return "T";
    case Gen::S: return "S";
    case Gen::Td: return "T'";
    case Gen::Sd: return "S'";
  }
  return "?";
}

bool WordOrder::operator()(const Word& a, const Word& b) const {
  if (a.size() != b.size()) return a.size() > b.size();
  return a < b;
}

// -------------------------------------------------------------------- NCPoly

NCPoly NCPoly::scalar(const GaussRational& c) { return monomial({}, c); }

NCPoly NCPoly::monomial(Word w, const GaussRational& c) {
  NCPoly p;
  p.add_term(w, c);
  return p;
}

int NCPoly::degree() const {
  // Highest degree sorts first.
  return terms_.empty() ? -1 : static_cast<int>(terms_.begin()->first.size());
}

GaussRational NCPoly::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? GaussRational(0) : it->second;
}

void NCPoly::add_term(const Word& w, const GaussRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

NCPoly& NCPoly::operator+=(const NCPoly& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

NCPoly& NCPoly::operator-=(const NCPoly& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

NCPoly operator-(const NCPoly& a) {
  NCPoly out;
  for (const auto& [w, c] : a.terms_) out.terms_.emplace(w, -c);
  return out;
}

NCPoly operator*(const GaussRational& s, const NCPoly& p) {
  NCPoly out;
  if (s.is_zero()) return out;
  for (const auto& [w, c] : p.terms_) out.terms_.emplace(w, s * c);
  return out;
}

NCPoly operator*(const NCPoly& a, const NCPoly& b) {
  NCPoly out;
  for (const auto& [wa, ca] : a.terms_) {
    for (const auto& [wb, cb] : b.terms_) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out.add_term(w, ca * cb);
    }
  }
  return out;
}

NCPoly multiply(const NCPoly& p, const NCPoly& q) { return p * q; }

NCPoly adjoint(const NCPoly& p) {
  NCPoly out;
  for (const auto& [w, c] : p.terms()) {
    Word r(w.rbegin(), w.rend());
    for (auto& g : r) g = dagger(g);
    out.add_term(r, c.conj());
  }
  return out;
}

NCPoly power(const NCPoly& p, int n) {
  if (n < 0) throw DomainError("power: negative exponent");
  NCPoly out = NCPoly::scalar(1);
  for (int i = 0; i < n; ++i) out = out * p;
  return out;
}

// ---------------------------------------------------------------- rewriting

namespace {

bool is_redex(Gen a, Gen b) {
  return (a == Gen::S && b == Gen::T) || (a == Gen::Sd && b == Gen::Td);
}

std::optional<std::size_t> find_redex(const Word& w, RewriteStrategy strategy) {
  if (w.size() < 2) return std::nullopt;
  if (strategy == RewriteStrategy::Leftmost) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (is_redex(w[i], w[i + 1])) return i;
    }
  } else {
    for (std::size_t i = w.size() - 1; i-- > 0;) {
      if (is_redex(w[i], w[i + 1])) return i;
    }
  }
  return std::nullopt;
}

}  // namespace

bool is_normal(const Word& w) { return !find_redex(w, RewriteStrategy::Leftmost); }

NCPoly normal_order(const NCPoly& p, RewriteStrategy strategy) {
  NCPoly done;
  NCPoly pending = p;
  while (!pending.is_zero()) {
    NCPoly next;
    for (const auto& [w, c] : pending.terms()) {
      const auto pos = find_redex(w, strategy);
      if (!pos) {
        done.add_term(w, c);
        continue;
      }
      const std::size_t i = *pos;
      const bool daggered = is_daggered(w[i]);
      Word swapped = w;
      std::swap(swapped[i], swapped[i + 1]);
      Word contracted;
      contracted.reserve(w.size() - 2);
      contracted.insert(contracted.end(), w.begin(), w.begin() + i);
      contracted.insert(contracted.end(), w.begin() + i + 2, w.end());
      next.add_term(swapped, c);
      // S T = T S + 1 and S' T' = T' S' - 1
      next.add_term(contracted, daggered ? -c : c);
    }
    pending = std::move(next);
  }
  return done;
}

// ---------------------------------------------------------------- rendering

std::string render(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    if (!out.empty()) out += ' ';
    out += gen_name(w[i]);
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

namespace {

// Splits c into a sign and the text of its magnitude. Unit magnitudes render
// as "" next to a word.
std::pair<bool, std::string> coefficient_text(const GaussRational& c, bool bare) {
  if (c.is_real()) {
    const bool neg = c.re() < 0;
    const Rational mag = neg ? Rational(-c.re()) : c.re();
    if (mag == 1 && !bare) return {neg, ""};
    return {neg, rational_to_string(mag)};
  }
  if (c.re() == 0) {
    const bool neg = c.im() < 0;
    const Rational mag = neg ? Rational(-c.im()) : c.im();
    if (mag == 1) return {neg, "i"};
    return {neg, rational_to_string(mag) + "i"};
  }
  return {false, c.to_string()};
}

}  // namespace

std::string render(const NCPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [w, c] : p.terms()) {
    auto [neg, coef] = coefficient_text(c, w.empty());
    std::string term = coef;
    if (!w.empty()) {
      if (!term.empty()) term += ' ';
      term += render(w);
    }
    if (out.empty()) {
      out = neg ? "-" + term : term;
    } else {
      out += neg ? " - " : " + ";
      out += term;
    }
  }
  return out;
}

// ----------------------------------------------------------- power profiles

PowerBound PowerBound::finite(int v) {
  if (v < 0) throw DomainError("power bound must be >= 0");
  PowerBound b;
  b.unbounded_ = false;
  b.value_ = v;
  return b;
}

std::string PowerBound::to_string() const { return unbounded_ ? "inf" : std::to_string(value_); }

bool operator<(const PowerBound& a, const PowerBound& b) {
  if (a.unbounded_) return false;
  if (b.unbounded_) return true;
  return a.value_ < b.value_;
}

PowerProfile::PowerProfile(PowerBound n0, std::vector<PowerBound> m)
    : n0_(n0), m_(std::move(m)) {
  if (m_.empty()) throw DomainError("power profile needs at least m_0");
  if (!n0_.is_unbounded() && static_cast<int>(m_.size()) != n0_.value() + 1) {
    throw DomainError("power profile: n0 = " + n0_.to_string() + " needs " +
                      std::to_string(n0_.value() + 1) + " bounds, got " +
                      std::to_string(m_.size()));
  }
  for (std::size_t i = 0; i + 1 < m_.size(); ++i) {
    if (m_[i] < m_[i + 1]) {
      throw DomainError("power profile must be nonincreasing: m_" + std::to_string(i) + " = " +
                        m_[i].to_string() + " < m_" + std::to_string(i + 1) + " = " +
                        m_[i + 1].to_string());
    }
  }
}

PowerProfile PowerProfile::from_bounds(std::vector<PowerBound> m) {
  if (m.empty()) throw DomainError("power profile needs at least m_0");
  const int n0 = static_cast<int>(m.size()) - 1;
  return PowerProfile(PowerBound::finite(n0), std::move(m));
}

PowerProfile PowerProfile::unbounded() {
  return PowerProfile(PowerBound::unbounded(), {PowerBound::unbounded()});
}

std::optional<PowerBound> PowerProfile::m_at(int r) const {
  if (r < 0 || !n0_.admits(r)) return std::nullopt;
  if (r < static_cast<int>(m_.size())) return m_[r];
  return m_.back();
}

std::string PowerProfile::to_string() const {
  std::string s = "n0=" + n0_.to_string() + " m=[";
  for (std::size_t i = 0; i < m_.size(); ++i) {
    if (i) s += ',';
    s += m_[i].to_string();
  }
  return s + "]";
}

RegularityResult is_regular(const NCPoly& p, const PowerProfile& profile) {
  const NCPoly q = normal_order(p);
  for (const auto& [w, c] : q.terms()) {
    RegularityResult fail{false, w, ""};
    if (!w.empty()) {
      const bool dag = is_daggered(w.front());
      if (std::any_of(w.begin(), w.end(), [dag](Gen g) { return is_daggered(g) != dag; })) {
        fail.reason = "mixed daggered and undaggered generators";
        return fail;
      }
    }
    const int r = static_cast<int>(
        std::count_if(w.begin(), w.end(), [](Gen g) { return g == Gen::T || g == Gen::Td; }));
    const int k = static_cast<int>(w.size()) - r;
    const auto bound = profile.m_at(r);
    if (!bound) {
      fail.reason = "T-power " + std::to_string(r) + " exceeds n0 = " + profile.n0().to_string();
      return fail;
    }
    if (!bound->admits(k)) {
      fail.reason = "S-power " + std::to_string(k) + " exceeds m_" + std::to_string(r) + " = " +
                    bound->to_string();
      return fail;
    }
  }
  return {};
}

PowerProfile profile_from_membership(const MembershipOracle& member, int degree_cap) {
  if (degree_cap < 0) throw DomainError("profile_from_membership: negative degree cap");
  int n0 = 0;
  for (int r = 0; r <= degree_cap; ++r) {
    if (member(r, 0)) n0 = r;
  }
  std::vector<int> m;
  for (int r = 0; r <= n0; ++r) {
    int best = 0;
    for (int k = 0; k <= degree_cap && member(r, k); ++k) best = k;
    m.push_back(best);
  }
  std::vector<PowerBound> bounds;
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (r > 0 && m[r] > m[r - 1]) {
      throw InconsistentOracle("membership oracle gives m_" + std::to_string(r) + " = " +
                               std::to_string(m[r]) + " > m_" + std::to_string(r - 1) + " = " +
                               std::to_string(m[r - 1]));
    }
    bounds.push_back(PowerBound::finite(m[r]));
  }
  return PowerProfile::from_bounds(std::move(bounds));
}

// ---------------------------------------------------------------- box trees

BoxExpr BoxExpr::leaf(NCPoly p) {
  BoxExpr e;
  e.leaf_ = std::move(p);
  return e;
}

BoxExpr BoxExpr::box(BoxExpr lhs, BoxExpr rhs) {
  BoxExpr e;
  e.lhs_ = std::make_shared<const BoxExpr>(std::move(lhs));
  e.rhs_ = std::make_shared<const BoxExpr>(std::move(rhs));
  return e;
}

int BoxExpr::structural_level() const {
  if (is_leaf()) return 0;
  return std::max(lhs_->structural_level(), rhs_->structural_level()) + 1;
}

NCPoly BoxExpr::flatten() const {
  if (is_leaf()) return leaf_;
  return lhs_->flatten() * rhs_->flatten();
}

BoxExpr BoxExpr::adjoint() const {
  if (is_leaf()) return leaf(weakcr::adjoint(leaf_));
  return box(rhs_->adjoint(), lhs_->adjoint());
}

namespace {

void check_leaves(const BoxExpr& e, const PowerProfile& profile) {
  if (e.is_leaf()) {
    const auto r = is_regular(e.value(), profile);
    if (!r.regular) {
      throw ConstructionError("box leaf '" + render(e.value()) + "' is not regular: " +
                              render(*r.witness) + " (" + r.reason + ")");
    }
    return;
  }
  check_leaves(e.lhs(), profile);
  check_leaves(e.rhs(), profile);
}

}  // namespace

BoxLevel box_level(const BoxExpr& e, const PowerProfile& profile) {
  check_leaves(e, profile);
  BoxLevel out;
  out.structural = e.structural_level();
  out.effective = is_regular(e.flatten(), profile).regular ? 0 : out.structural;
  return out;
}

// ---------------------------------------------------------- fock evaluation

TruncatedOperator fock_eval(const NCPoly& p, const OperatorPair& pair) {
  using Sparse = Eigen::SparseMatrix<cplx>;
  const int n = pair.dim();
  const Sparse s = pair.S().entries().sparseView();
  const Sparse t = pair.T().entries().sparseView();
  const Sparse sd = Matrix(pair.S().entries().adjoint()).sparseView();
  const Sparse td = Matrix(pair.T().entries().adjoint()).sparseView();
  auto gen_matrix = [&](Gen g) -> const Sparse& {
    switch (g) {
      case Gen::S: return s;
      case Gen::T: return t;
      case Gen::Sd: return sd;
      case Gen::Td: return td;
    }
    return s;
  };

  Matrix total = Matrix::Zero(n, n);
  for (const auto& [w, c] : p.terms()) {
    Matrix m = Matrix::Identity(n, n);
    for (Gen g : w) m = m * gen_matrix(g);
    total += c.to_complex() * m;
  }
  return TruncatedOperator(std::move(total), "p");
}

int fock_safe_block(const NCPoly& p, int dim) { return dim - std::max(1, p.degree()); }

}  // namespace weakcr
