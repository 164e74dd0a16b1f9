#include "weakcr/expr.hpp"

#include <cctype>

#include "weakcr/error.hpp"

namespace weakcr {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Caret, LParen, RParen, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  GaussRational number;
  Gen gen = Gen::S;
  bool is_imaginary_unit = false;
  int line = 1;
  int column = 1;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        lex_number(t);
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        lex_ident(t);
      } else {
        t.text = std::string(1, c);
        switch (c) {
          case '+': t.kind = Tok::Plus; break;
          case '-': t.kind = Tok::Minus; break;
          case '*': t.kind = Tok::Star; break;
          case '^': t.kind = Tok::Caret; break;
          case '(': t.kind = Tok::LParen; break;
          case ')': t.kind = Tok::RParen; break;
          default:
            throw SyntaxError("unexpected character '" + t.text + "'", t.line, t.column);
        }
        advance();
      }
      out.push_back(std::move(t));
    }
  }

private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  std::string digits() {
    std::string d;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      d += src_[pos_];
      advance();
    }
    return d;
  }

  void lex_number(Token& t) {
    t.kind = Tok::Number;
    const std::string num = digits();
    t.text = num;
    Rational value{boost::multiprecision::cpp_int(num)};
    if (pos_ < src_.size() && src_[pos_] == '/') {
      const int slash_col = col_;
      advance();
      const std::string den = digits();
      if (den.empty()) throw SyntaxError("expected denominator after '/'", line_, col_);
      if (boost::multiprecision::cpp_int(den) == 0) {
        throw SyntaxError("zero denominator", line_, slash_col);
      }
      value /= Rational(boost::multiprecision::cpp_int(den));
      t.text += "/" + den;
    }
    if (pos_ < src_.size() && src_[pos_] == 'i' &&
        !(pos_ + 1 < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_ + 1])))) {
      advance();
      t.text += "i";
      t.number = GaussRational(0, value);
    } else {
      t.number = GaussRational(value);
    }
  }

  void lex_ident(Token& t) {
    t.kind = Tok::Ident;
    std::string name;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) {
      name += src_[pos_];
      advance();
    }
    const bool primed = pos_ < src_.size() && src_[pos_] == '\'';
    if (primed) advance();
    t.text = name + (primed ? "'" : "");
    if (name == "S") {
      t.gen = primed ? Gen::Sd : Gen::S;
    } else if (name == "T") {
      t.gen = primed ? Gen::Td : Gen::T;
    } else if (name == "i" && !primed) {
      t.is_imaginary_unit = true;
      t.number = GaussRational::i();
    } else {
      throw SyntaxError("unknown identifier '" + t.text + "'", t.line, t.column);
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

using Node = std::shared_ptr<const OperatorExpr>;

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  OperatorExpr parse() {
    OperatorExpr e = sum();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return e;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw SyntaxError(t.kind == Tok::End ? msg + " at end of input" : msg, t.line, t.column);
  }

  static OperatorExpr make(OperatorExpr::Kind k, const Token& at, std::vector<Node> kids) {
    OperatorExpr e;
    e.kind = k;
    e.line = at.line;
    e.column = at.column;
    e.children = std::move(kids);
    return e;
  }
  static Node share(OperatorExpr e) { return std::make_shared<const OperatorExpr>(std::move(e)); }

  OperatorExpr sum() {
    OperatorExpr lhs = signed_term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Token& op = take();
      OperatorExpr rhs = signed_term();
      lhs = make(op.kind == Tok::Plus ? OperatorExpr::Kind::Add : OperatorExpr::Kind::Sub, op,
                 {share(std::move(lhs)), share(std::move(rhs))});
    }
    return lhs;
  }

  OperatorExpr signed_term() {
    if (peek().kind == Tok::Minus) {
      const Token& op = take();
      return make(OperatorExpr::Kind::Neg, op, {share(signed_term())});
    }
    if (peek().kind == Tok::Plus) {
      take();
      return signed_term();
    }
    return product();
  }

  static bool starts_factor(Tok k) {
    return k == Tok::Number || k == Tok::Ident || k == Tok::LParen;
  }

  OperatorExpr product() {
    OperatorExpr lhs = power();
    for (;;) {
      const Token& at = peek();
      if (at.kind == Tok::Star) {
        take();
      } else if (!starts_factor(at.kind)) {
        break;
      }
      OperatorExpr rhs = power();
      lhs = make(OperatorExpr::Kind::Mul, at, {share(std::move(lhs)), share(std::move(rhs))});
    }
    return lhs;
  }

  OperatorExpr power() {
    OperatorExpr base = atom();
    if (peek().kind == Tok::Caret) {
      const Token& op = take();
      const Token& ex = peek();
      if (ex.kind != Tok::Number || !ex.number.is_real() ||
          boost::multiprecision::denominator(ex.number.re()) != 1) {
        fail("expected a nonnegative integer exponent");
      }
      take();
      if (ex.number.re() > 64) {
        throw SyntaxError("exponent too large", ex.line, ex.column);
      }
      OperatorExpr e = make(OperatorExpr::Kind::Pow, op, {share(std::move(base))});
      e.exponent = static_cast<int>(boost::multiprecision::numerator(ex.number.re()));
      if (peek().kind == Tok::Caret) fail("chained exponents need parentheses");
      return e;
    }
    return base;
  }

  OperatorExpr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        take();
        OperatorExpr e = make(OperatorExpr::Kind::Number, t, {});
        e.number = t.number;
        return e;
      }
      case Tok::Ident: {
        take();
        if (t.is_imaginary_unit) {
          OperatorExpr e = make(OperatorExpr::Kind::Number, t, {});
          e.number = t.number;
          return e;
        }
        OperatorExpr e = make(OperatorExpr::Kind::Generator, t, {});
        e.gen = t.gen;
        return e;
      }
      case Tok::LParen: {
        take();
        OperatorExpr inner = sum();
        if (peek().kind != Tok::RParen) fail("expected ')'");
        take();
        return inner;
      }
      default:
        fail("expected an operand");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

OperatorExpr parse_operator_expr(std::string_view text) {
  return Parser(Lexer(text).run()).parse();
}

NCPoly lower(const OperatorExpr& e) {
  using K = OperatorExpr::Kind;
  switch (e.kind) {
    case K::Number: return NCPoly::scalar(e.number);
    case K::Generator: return NCPoly::generator(e.gen);
    case K::Add: return lower(*e.children[0]) + lower(*e.children[1]);
    case K::Sub: return lower(*e.children[0]) - lower(*e.children[1]);
    case K::Neg: return -lower(*e.children[0]);
    case K::Mul: return lower(*e.children[0]) * lower(*e.children[1]);
    case K::Pow: return power(lower(*e.children[0]), e.exponent);
  }
  return {};
}

NCPoly parse_polynomial(std::string_view text) { return lower(parse_operator_expr(text)); }

std::string pretty_print(const NCPoly& p) { return render(p); }

}  // namespace weakcr
