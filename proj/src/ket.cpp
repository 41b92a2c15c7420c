#include "dfs/ket.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace dfs {

namespace {

struct Parser {
  const std::string& text;
  Eigen::Index d;
  CVec amps;
  std::size_t pos = 0;

  Parser(const std::string& t, Eigen::Index dim)
      : text(t), d(dim), amps(CVec::Zero(dim * dim)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ContractViolation("ket: " + what + " at position " + std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool ahead(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }

  bool take(char c) {
    if (!ahead(c)) return false;
    ++pos;
    return true;
  }

  void expect(char c, const std::string& what) {
    if (!take(c)) fail("expected '" + std::string(1, c) + "' " + what);
  }

  /// Floating literal via from_chars; a leading sign only where the grammar
  /// puts one (inside complex literals).
  bool try_number(double& out, bool allow_sign) {
    skip_ws();
    std::size_t start = pos;
    if (allow_sign && pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
    if (pos >= text.size() ||
        !(std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
      pos = start;
      return false;
    }
    double value = 0;
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{}) {
      pos = start;
      return false;
    }
    pos += static_cast<std::size_t>(res.ptr - begin);
    out = (start < pos && text[start] == '-') ? -value : value;
    return true;
  }

  /// Coefficient if one starts here: decimal, fraction, root-scaled
  /// fraction, or parenthesized complex literal. A '(' that does not hold a
  /// complex literal is left untouched for the group rule.
  bool try_coeff(Cx& out) {
    skip_ws();
    if (pos >= text.size()) return false;
    if (text[pos] == '(') {
      const std::size_t save = pos;
      ++pos;
      double re = 0, im = 0;
      if (try_number(re, true)) {
        bool good = true;
        if (take(',')) good = try_number(im, true);
        if (good && take(')')) {
          out = Cx(re, im);
          return true;
        }
      }
      pos = save;
      return false;
    }
    double num = 0;
    if (!try_number(num, false)) return false;
    skip_ws();
    if (pos < text.size() && text[pos] == '/') {
      ++pos;
      skip_ws();
      if (text.compare(pos, 5, "sqrt(") == 0) {
        pos += 5;
        double arg = 0;
        if (!try_number(arg, false)) fail("expected a number inside sqrt");
        if (arg <= 0) fail("sqrt argument must be positive");
        expect(')', "to close sqrt");
        out = Cx(num / std::sqrt(arg), 0);
        return true;
      }
      double den = 0;
      if (!try_number(den, false)) fail("expected a denominator");
      if (den == 0) fail("division by zero");
      out = Cx(num / den, 0);
      return true;
    }
    out = Cx(num, 0);
    return true;
  }

  void parse_ket_atom(Cx amp) {
    expect('|', "to open a ket");
    const int k = basis_digit();
    const int l = basis_digit();
    skip_ws();
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      fail("kets carry exactly two basis digits");
    expect('>', "to close the ket");
    amps(static_cast<Eigen::Index>(k) * d + l) += amp;
  }

  int basis_digit() {
    skip_ws();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      fail("expected a basis digit");
    const int v = text[pos] - '0';
    if (v >= d) fail("basis digit " + std::to_string(v) + " exceeds dimension " +
                     std::to_string(d));
    ++pos;
    return v;
  }

  void parse_term(Cx scale) {
    Cx coeff(1, 0);
    const bool have_coeff = try_coeff(coeff);
    skip_ws();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      parse_expr(scale * coeff);
      expect(')', "to close the group");
      return;
    }
    if (pos < text.size() && text[pos] == '|') {
      parse_ket_atom(scale * coeff);
      return;
    }
    if (have_coeff) fail("expected '|' or '(' after a coefficient");
    fail("expected a term");
  }

  void parse_expr(Cx scale) {
    Cx sign(1, 0);
    if (take('-'))
      sign = Cx(-1, 0);
    else
      take('+');
    parse_term(scale * sign);
    for (;;) {
      if (take('+'))
        parse_term(scale);
      else if (take('-'))
        parse_term(-scale);
      else
        return;
    }
  }
};

}  // namespace

PureState parse_ket(const std::string& text, Eigen::Index d) {
  if (d < 2 || d > 9)
    throw ContractViolation("ket: single-digit basis labels need 2 <= d <= 9");
  Parser p(text, d);
  p.skip_ws();
  if (p.pos >= text.size()) p.fail("empty expression");
  p.parse_expr(Cx(1, 0));
  p.skip_ws();
  if (p.pos != text.size()) p.fail("unexpected trailing input");
  PureState st;
  st.d1 = d;
  st.d2 = d;
  st.amps = std::move(p.amps);
  return st;
}

std::string format_ket(const PureState& state) {
  if (state.d1 < 1 || state.d1 > 9 || state.d2 < 1 || state.d2 > 9)
    throw ContractViolation("format_ket: basis labels are single digits");
  if (state.amps.size() != state.d1 * state.d2)
    throw ContractViolation("format_ket: amplitude count does not match dims");
  std::ostringstream os;
  os << std::setprecision(17);
  bool first = true;
  for (Eigen::Index k = 0; k < state.d1; ++k)
    for (Eigen::Index l = 0; l < state.d2; ++l) {
      const Cx a = state.amps(k * state.d2 + l);
      if (a == Cx(0, 0)) continue;
      if (!first) os << " + ";
      os << "(" << a.real() << ", " << a.imag() << ")|" << k << l << ">";
      first = false;
    }
  if (first) os << "(0, 0)|00>";
  return os.str();
}

}  // namespace dfs
