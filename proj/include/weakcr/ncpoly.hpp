#pragma once

// Noncommutative polynomials over the generators S, T, S†, T† with exact
// Gaussian-rational coefficients, and the rewriting that brings them to
// canonical (T-left) order.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weakcr/exact.hpp"
#include "weakcr/fock_rep.hpp"

namespace weakcr {

/// Generator order T < S < T' < S' drives the canonical word order.
enum class Gen : std::uint8_t { T = 0, S = 1, Td = 2, Sd = 3 };

Gen dagger(Gen g) noexcept;
bool is_daggered(Gen g) noexcept;
/// "T", "S", "T'", "S'"
std::string_view gen_name(Gen g) noexcept;

using Word = std::vector<Gen>;

/// Higher degree first, then lexicographic in the generator order.
struct WordOrder {
  bool operator()(const Word& a, const Word& b) const;
};

class NCPoly {
public:
  using TermMap = std::map<Word, GaussRational, WordOrder>;

  NCPoly() = default;
  static NCPoly scalar(const GaussRational& c);
  static NCPoly monomial(Word w, const GaussRational& c = 1);
  static NCPoly generator(Gen g) { return monomial({g}); }

  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Largest word length, -1 for the zero polynomial.
  int degree() const;
  GaussRational coeff(const Word& w) const;

  /// Adds c * w, dropping the entry if it cancels.
  void add_term(const Word& w, const GaussRational& c);

  NCPoly& operator+=(const NCPoly& o);
  NCPoly& operator-=(const NCPoly& o);
  friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
  friend NCPoly operator-(NCPoly a, const NCPoly& b) { return a -= b; }
  friend NCPoly operator-(const NCPoly& a);
  friend NCPoly operator*(const GaussRational& s, const NCPoly& p);
  /// Free-algebra product (word concatenation).
  friend NCPoly operator*(const NCPoly& a, const NCPoly& b);
  friend bool operator==(const NCPoly& a, const NCPoly& b) { return a.terms_ == b.terms_; }

private:
  TermMap terms_;
};

NCPoly multiply(const NCPoly& p, const NCPoly& q);

/// Reverses each word, daggers every generator, conjugates coefficients.
NCPoly adjoint(const NCPoly& p);

NCPoly power(const NCPoly& p, int n);

enum class RewriteStrategy { Leftmost, Rightmost };

/// Rewrites S T -> T S + 1 and S' T' -> T' S' - 1 until no redex remains.
/// Adjacent generators from different families are never rewritten.
NCPoly normal_order(const NCPoly& p, RewriteStrategy strategy = RewriteStrategy::Leftmost);

bool is_normal(const Word& w);

/// Canonical text, e.g. "T S^2 + 2 S", "T' S'^2 - 2 S'", "0".
std::string render(const NCPoly& p);
std::string render(const Word& w);

// ------------------------------------------------------------ power profiles

/// A nonnegative bound or the unbounded marker.
class PowerBound {
public:
  static PowerBound finite(int v);
  static PowerBound unbounded() { return PowerBound(); }

  bool is_unbounded() const noexcept { return unbounded_; }
  int value() const noexcept { return value_; }
  bool admits(int k) const noexcept { return unbounded_ || k <= value_; }
  std::string to_string() const;

  friend bool operator==(const PowerBound&, const PowerBound&) = default;
  /// Total order with unbounded on top.
  friend bool operator<(const PowerBound& a, const PowerBound& b);

private:
  PowerBound() = default;
  bool unbounded_ = true;
  int value_ = 0;
};

/// n0 and the nonincreasing bounds m_0 >= m_1 >= ... . With finite n0 there
/// are exactly n0 + 1 entries; with unbounded n0 the last entry repeats.
class PowerProfile {
public:
  /// Throws DomainError when m is empty, non-monotone, or does not match n0.
  PowerProfile(PowerBound n0, std::vector<PowerBound> m);

  /// n0 = size - 1.
  static PowerProfile from_bounds(std::vector<PowerBound> m);
  /// Every monomial admissible.
  static PowerProfile unbounded();

  const PowerBound& n0() const noexcept { return n0_; }
  const std::vector<PowerBound>& m() const noexcept { return m_; }
  /// Bound on the S-power next to T^r; nullopt when r exceeds n0.
  std::optional<PowerBound> m_at(int r) const;

  std::string to_string() const;

private:
  PowerBound n0_;
  std::vector<PowerBound> m_;
};

struct RegularityResult {
  bool regular = true;
  std::optional<Word> witness;
  std::string reason;
};

/// Normal-orders p, then accepts iff every word is T^r S^k or T'^r S'^k with
/// r <= n0 and k <= m_r.
RegularityResult is_regular(const NCPoly& p, const PowerProfile& profile);

/// Oracle deciding whether the domain condition for T^r S^k holds.
using MembershipOracle = std::function<bool(int r, int k)>;

/// n0 is the largest r <= degree_cap with member(r, 0); m_r is the largest k
/// such that member(r, 0..k) all hold (0 when member(r, 0) fails). Throws
/// InconsistentOracle if the resulting bounds are not nonincreasing.
PowerProfile profile_from_membership(const MembershipOracle& member, int degree_cap);

// ---------------------------------------------------------------- box trees

class BoxExpr {
public:
  static BoxExpr leaf(NCPoly p);
  static BoxExpr box(BoxExpr lhs, BoxExpr rhs);

  bool is_leaf() const noexcept { return !lhs_; }
  const NCPoly& value() const { return leaf_; }
  const BoxExpr& lhs() const { return *lhs_; }
  const BoxExpr& rhs() const { return *rhs_; }

  /// Depth of the tree: 0 for a leaf, max(children) + 1 for a box node.
  int structural_level() const;
  /// Free-algebra product of the leaves from left to right.
  NCPoly flatten() const;
  /// Children swapped, leaves replaced by their adjoints.
  BoxExpr adjoint() const;

private:
  BoxExpr() = default;
  NCPoly leaf_;
  std::shared_ptr<const BoxExpr> lhs_;
  std::shared_ptr<const BoxExpr> rhs_;
};

struct BoxLevel {
  int structural = 0;
  /// 0 when the flattened product is itself regular, else structural.
  int effective = 0;
};

/// Throws ConstructionError if a leaf is not regular for the profile.
BoxLevel box_level(const BoxExpr& e, const PowerProfile& profile);

// ------------------------------------------------------------ fock evaluation

/// Substitutes S, T and their matrix adjoints and sums the word products.
TruncatedOperator fock_eval(const NCPoly& p, const OperatorPair& pair);

/// Leading block on which evaluation of p is free of truncation artifacts:
/// dim - max(1, degree(p)).
int fock_safe_block(const NCPoly& p, int dim);

}  // namespace weakcr
