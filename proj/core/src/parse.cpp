#include "oag/parse.hpp"

#include <cctype>

namespace oag {

namespace {

class Scanner {
 public:
  explicit Scanner(const std::string& s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  bool accept_word(const char* w) {
    skip_ws();
    std::size_t i = 0;
    while (w[i] && pos_ + i < s_.size() && s_[pos_ + i] == w[i]) ++i;
    if (w[i]) return false;
    pos_ += i;
    return true;
  }
  Int nat() {
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      fail("expected a number");
    Int v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      ++pos_;
    }
    return v;
  }
  unsigned small_nat() {
    Int v = nat();
    if (v > 1000000) fail("number too large");
    return static_cast<unsigned>(v);
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }
  std::size_t pos() const { return pos_; }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

// rational = int ["/" nat]; sign handled by caller or leading '-'
Rat parse_rational(Scanner& sc, bool negative) {
  Int n = sc.nat();
  Int d = 1;
  if (sc.accept('/')) {
    d = sc.nat();
    if (d <= 0) sc.fail("denominator must be positive");
  }
  Rat q(n, d);
  return negative ? -q : q;
}

}  // namespace

Element parse_element(const std::string& text, const GroupHandle& g) {
  Scanner sc(text);
  Element::Coords coords;
  if (sc.done()) return g->zero();  // empty sum
  bool negative = sc.accept('-');
  while (true) {
    // term = [rational "*"] basis | rational-as-constant
    Rat coeff = 1;
    bool have_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(sc.peek()))) {
      coeff = parse_rational(sc, negative);
      have_coeff = true;
      negative = false;
    } else if (negative) {
      coeff = -1;
      negative = false;
    }
    std::uint32_t index;
    bool have_basis = true;
    if (sc.accept('e')) {
      index = sc.small_nat();
    } else if (sc.accept('t')) {
      index = sc.accept('^') ? sc.small_nat() : 1;
    } else {
      if (!have_coeff) sc.fail("expected a term");
      index = 0;  // bare literal is the constant term
      have_basis = false;
    }
    if (have_basis && have_coeff) {
      // the "*" between rational and basis is part of the grammar but we are
      // lenient only about whitespace, not about a missing star
    }
    coords.push_back({index, coeff});
    if (sc.done()) break;
    if (sc.accept('*')) {
      // form "c * basis": the rational was actually a coefficient
      if (!have_basis) {
        if (sc.accept('e')) coords.back().first = sc.small_nat();
        else if (sc.accept('t')) coords.back().first = sc.accept('^') ? sc.small_nat() : 1;
        else sc.fail("expected basis after '*'");
        if (sc.done()) break;
      } else {
        sc.fail("unexpected '*'");
      }
    }
    if (sc.accept('+')) { negative = false; continue; }
    if (sc.accept('-')) { negative = true; continue; }
    sc.fail("expected '+' or '-'");
  }
  return g->element(std::move(coords));
}

namespace {

ConvexSubgroup parse_convex(Scanner& sc) {
  if (sc.accept_word("tail")) {
    sc.expect('(');
    unsigned m = sc.small_nat();
    sc.expect(')');
    return ConvexSubgroup::tail(m);
  }
  if (sc.accept_word("zero")) return ConvexSubgroup::zero();
  if (sc.accept_word("full")) return ConvexSubgroup::full();
  sc.fail("expected tail(m), zero or full");
}

Int parse_prime(Scanner& sc) {
  Int p = sc.nat();
  if (p < 2) sc.fail("prime must be >= 2");
  for (Int d = 2; d * d <= p; ++d)
    if (p % d == 0) sc.fail("not a prime");
  return p;
}

SubgroupExpr parse_expr(Scanner& sc) {
  if (sc.accept_word("sharp")) {
    sc.expect('(');
    ConvexSubgroup d = parse_convex(sc);
    sc.expect(',');
    Int p = parse_prime(sc);
    sc.expect(',');
    unsigned s = sc.small_nat();
    if (s < 1) sc.fail("sharp exponent must be >= 1");
    sc.expect(')');
    return sharp_expr(d, p, s);
  }
  if (sc.accept_word("shift")) {
    sc.expect('(');
    SubgroupExpr inner = parse_expr(sc);
    sc.expect(',');
    Int p = parse_prime(sc);
    sc.expect(',');
    unsigned k = sc.small_nat();
    sc.expect(')');
    return shift(inner, p, k);
  }
  if (sc.accept_word("meet")) {
    sc.expect('(');
    SubgroupExpr a = parse_expr(sc);
    sc.expect(',');
    SubgroupExpr b = parse_expr(sc);
    sc.expect(')');
    return meet(a, b);
  }
  if (sc.accept_word("join")) {
    sc.expect('(');
    SubgroupExpr a = parse_expr(sc);
    sc.expect(',');
    SubgroupExpr b = parse_expr(sc);
    sc.expect(')');
    return join(a, b);
  }
  if (sc.accept_word("scale")) {
    sc.expect('(');
    Int p = parse_prime(sc);
    sc.expect(',');
    unsigned r = sc.small_nat();
    sc.expect(',');
    SubgroupExpr inner = parse_expr(sc);
    sc.expect(')');
    return scale(p, r, inner);
  }
  return conv(parse_convex(sc));
}

}  // namespace

SubgroupExpr parse_subgroup_text(const std::string& text) {
  Scanner sc(text);
  SubgroupExpr e = parse_expr(sc);
  if (!sc.done()) sc.fail("trailing input");
  return e;
}

BoundSubgroup parse_subgroup_expr(const std::string& text, const GroupHandle& g) {
  return bind_subgroup(g, parse_subgroup_text(text));
}

GroupSpec parse_group_spec(const std::string& text) {
  Scanner sc(text);
  if (sc.accept_word("freelex")) {
    sc.expect('(');
    unsigned k = sc.small_nat();
    sc.expect(')');
    if (!sc.done()) sc.fail("trailing input");
    return GroupSpec::free_lex(k);
  }
  if (sc.accept_word("locallex")) {
    sc.expect('(');
    if (!sc.accept_word("p=")) sc.fail("expected p=");
    Int p = parse_prime(sc);
    sc.expect(')');
    if (!sc.done()) sc.fail("trailing input");
    return GroupSpec::local_lex(p);
  }
  if (sc.accept_word("polymod")) {
    sc.expect('(');
    if (!sc.accept_word("p=")) sc.fail("expected p=");
    Int p = parse_prime(sc);
    sc.expect(',');
    if (!sc.accept_word("n=")) sc.fail("expected n=");
    unsigned n = sc.small_nat();
    sc.expect(')');
    if (!sc.done()) sc.fail("trailing input");
    return GroupSpec::poly_mod(p, n);
  }
  if (sc.accept_word("polypart")) {
    sc.expect('(');
    std::vector<PartConstraint> cs;
    unsigned cell = 0;
    while (true) {
      sc.expect('(');
      Int p = parse_prime(sc);
      sc.expect(',');
      unsigned n = sc.small_nat();
      sc.expect(')');
      cs.push_back({p, n, cell++});
      if (!sc.accept(',')) break;
    }
    sc.expect(')');
    if (!sc.done()) sc.fail("trailing input");
    return GroupSpec::poly_part(std::move(cs));
  }
  sc.fail("expected freelex, locallex, polymod or polypart");
}

}  // namespace oag
