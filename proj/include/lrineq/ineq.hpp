#pragma once

// Linear rank inequalities: term lists over entropy measures, the canonical
// joint-entropy form, the characteristic-dependent families built from L_n,
// and seeded randomized verification.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lrineq/rational.hpp"
#include "lrineq/subspace.hpp"

namespace lrineq {

// One information measure over variable subsets: H(X), H(X|Y), I(X;Y), I(X;Y|Z).
struct Measure {
  enum class Kind { Entropy, CondEntropy, MutualInfo, CondMutualInfo };
  Kind kind = Kind::Entropy;
  SubsetMask x = 0;
  SubsetMask y = 0;
  SubsetMask z = 0;

  static Measure H(SubsetMask x) { return {Kind::Entropy, x, 0, 0}; }
  static Measure H(SubsetMask x, SubsetMask given) { return {Kind::CondEntropy, x, given, 0}; }
  static Measure I(SubsetMask x, SubsetMask y) { return {Kind::MutualInfo, x, y, 0}; }
  static Measure I(SubsetMask x, SubsetMask y, SubsetMask given) {
    return {Kind::CondMutualInfo, x, y, given};
  }

  friend bool operator==(const Measure&, const Measure&) = default;
};

struct Term {
  Rational coeff;
  Measure measure;
};

// Unexpanded inequality Σ coeff·measure ≥ 0 over a declared variable list.
struct TermList {
  std::vector<std::string> variables;
  std::vector<Term> terms;
};

// Σ coeff(S)·H(S) ≥ 0 with H(∅) absorbed and no zero coefficients stored.
class RankExpression {
 public:
  RankExpression(std::vector<std::string> variables, std::map<SubsetMask, Rational> coeffs)
      : variables_(std::move(variables)) {
    if (variables_.size() > 63) throw std::invalid_argument("too many variables");
    for (auto& [mask, c] : coeffs) {
      if (mask >> variables_.size()) throw std::invalid_argument("subset references unknown variable");
      if (mask == 0 || c == 0) continue;
      coeffs_.emplace(mask, c);
    }
    build_scaled();
  }

  const std::vector<std::string>& variables() const { return variables_; }
  const std::map<SubsetMask, Rational>& coeffs() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }

  Rational coefficient(SubsetMask mask) const {
    auto it = coeffs_.find(mask);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }

  SubsetMask mask_of(const std::vector<std::string>& names) const {
    SubsetMask m = 0;
    for (const auto& n : names) m |= SubsetMask{1} << index_of(n);
    return m;
  }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i)
      if (variables_[i] == name) return i;
    throw std::invalid_argument("unknown variable '" + name + "'");
  }

  // Σ coeff(S)·h(S) for any entropy oracle h: SubsetMask -> integer.
  template <class Oracle>
  Rational evaluate_with(Oracle&& entropy) const {
    std::int64_t acc = 0;
    for (const auto& [mask, c] : scaled_) acc += c * static_cast<std::int64_t>(entropy(mask));
    return make_rational(acc, scale_);
  }

  Rational evaluate(const SubspaceFamily& f) const {
    if (f.variables() == variables_) {
      return evaluate_with([&](SubsetMask m) { return f.entropy(m); });
    }
    std::vector<std::size_t> remap(variables_.size());
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      try {
        remap[i] = f.index_of(variables_[i]);
      } catch (const std::invalid_argument&) {
        throw std::invalid_argument("family does not assign variable '" + variables_[i] + "'");
      }
    }
    return evaluate_with([&](SubsetMask m) {
      SubsetMask g = 0;
      for (std::size_t i = 0; i < remap.size(); ++i)
        if (m >> i & 1) g |= SubsetMask{1} << remap[i];
      return f.entropy(g);
    });
  }

  // Same expression over renamed variables (positions unchanged).
  RankExpression renamed(std::vector<std::string> names) const {
    if (names.size() != variables_.size()) throw std::invalid_argument("rename: size mismatch");
    return RankExpression(std::move(names), coeffs_);
  }

  friend bool operator==(const RankExpression& a, const RankExpression& b) {
    return a.variables_ == b.variables_ && a.coeffs_ == b.coeffs_;
  }

 private:
  void build_scaled() {
    mpz_class lcm = 1;
    for (const auto& [m, c] : coeffs_) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
    if (!lcm.fits_slong_p()) throw std::overflow_error("coefficient denominators too large");
    scale_ = lcm.get_si();
    for (const auto& [m, c] : coeffs_) {
      mpz_class v = c.get_num() * (lcm / c.get_den());
      if (!v.fits_slong_p()) throw std::overflow_error("coefficient too large");
      scaled_.emplace_back(m, v.get_si());
    }
  }

  std::vector<std::string> variables_;
  std::map<SubsetMask, Rational> coeffs_;
  std::vector<std::pair<SubsetMask, std::int64_t>> scaled_;
  std::int64_t scale_ = 1;
};

// Expands H(X|Y) = H(XY) − H(Y) and I(X;Y|Z) = H(XZ) + H(YZ) − H(XYZ) − H(Z).
inline RankExpression canonicalize(const TermList& list) {
  std::map<SubsetMask, Rational> acc;
  auto add = [&](SubsetMask m, const Rational& c) {
    if (m >> list.variables.size()) throw std::invalid_argument("measure references unknown variable");
    if (m != 0) acc[m] += c;
  };
  for (const auto& [c, ms] : list.terms) {
    switch (ms.kind) {
      case Measure::Kind::Entropy:
        add(ms.x, c);
        break;
      case Measure::Kind::CondEntropy:
        add(ms.x | ms.y, c);
        add(ms.y, -c);
        break;
      case Measure::Kind::MutualInfo:
        add(ms.x, c);
        add(ms.y, c);
        add(ms.x | ms.y, -c);
        break;
      case Measure::Kind::CondMutualInfo:
        add(ms.x | ms.z, c);
        add(ms.y | ms.z, c);
        add(ms.x | ms.y | ms.z, -c);
        add(ms.z, -c);
        break;
    }
  }
  return RankExpression(list.variables, std::move(acc));
}

// Term-by-term evaluation through subspace intersections, independent of the
// expanded joint-entropy path: I(X;Y|Z) = dim((X+Z) ∩ (Y+Z)) − dim Z and
// H(X|Y) = dim X − dim(X ∩ Y).
inline Rational evaluate_terms(const TermList& list, const SubspaceFamily& f) {
  if (f.variables() != list.variables) throw std::invalid_argument("family variable order differs");
  Rational total = 0;
  for (const auto& [c, ms] : list.terms) {
    std::size_t v = 0;
    switch (ms.kind) {
      case Measure::Kind::Entropy:
        v = f.span_of(ms.x).dim();
        break;
      case Measure::Kind::CondEntropy: {
        auto x = f.span_of(ms.x);
        v = x.dim() - intersect(x, f.span_of(ms.y)).dim();
        break;
      }
      case Measure::Kind::MutualInfo:
        v = intersect(f.span_of(ms.x), f.span_of(ms.y)).dim();
        break;
      case Measure::Kind::CondMutualInfo: {
        auto z = f.span_of(ms.z);
        v = intersect(sum(f.span_of(ms.x), z), sum(f.span_of(ms.y), z)).dim() - z.dim();
        break;
      }
    }
    total += c * static_cast<long>(v);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Text format
//
//   variables: A B C
//   1 * H(A|B) - 2 * I(A;B|C) + 1/3 * H(A,B) >= 0
//
// The coefficient and '*' may be omitted (coefficient 1). Line breaks are
// whitespace. Serialization writes the canonical joint-entropy form.

namespace detail {

class InequalityParser {
 public:
  InequalityParser(std::string text, std::vector<std::string> variables)
      : s_(std::move(text)), vars_(std::move(variables)) {}

  std::vector<Term> parse() {
    std::vector<Term> terms;
    skip_ws();
    bool negative = false;
    if (peek() == '+' || peek() == '-') {
      negative = get() == '-';
    }
    for (;;) {
      auto t = parse_term();
      if (negative) t.coeff = -t.coeff;
      terms.push_back(std::move(t));
      skip_ws();
      char ch = peek();
      if (ch == '+' || ch == '-') {
        negative = get() == '-';
        continue;
      }
      break;
    }
    skip_ws();
    expect(">=");
    skip_ws();
    if (get() != '0') fail("expected '0' after '>='");
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return terms;
  }

 private:
  Term parse_term() {
    skip_ws();
    Rational coeff = 1;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/'))
        ++pos_;
      coeff = parse_rational(s_.substr(start, pos_ - start));
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        skip_ws();
      }
    }
    return {coeff, parse_measure()};
  }

  Measure parse_measure() {
    char kind = get();
    if (kind != 'H' && kind != 'I') fail("expected measure H(...) or I(...)");
    skip_ws();
    if (get() != '(') fail("expected '('");
    Measure m;
    if (kind == 'H') {
      m.x = parse_set();
      if (peek() == '|') {
        ++pos_;
        m.y = parse_set();
        m.kind = Measure::Kind::CondEntropy;
      }
    } else {
      m.x = parse_set();
      if (get() != ';') fail("expected ';' in I(X;Y)");
      m.y = parse_set();
      m.kind = Measure::Kind::MutualInfo;
      if (peek() == '|') {
        ++pos_;
        m.z = parse_set();
        m.kind = Measure::Kind::CondMutualInfo;
      }
    }
    if (get() != ')') fail("expected ')'");
    return m;
  }

  SubsetMask parse_set() {
    SubsetMask m = 0;
    for (;;) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      if (start == pos_) fail("expected variable name");
      auto name = s_.substr(start, pos_ - start);
      auto it = std::find(vars_.begin(), vars_.end(), name);
      if (it == vars_.end()) throw std::invalid_argument("unknown variable '" + name + "'");
      m |= SubsetMask{1} << (it - vars_.begin());
      skip_ws();
      if (peek() != ',') return m;
      ++pos_;
    }
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char get() { return pos_ < s_.size() ? s_[pos_++] : '\0'; }
  void expect(const char* tok) {
    for (const char* c = tok; *c; ++c)
      if (get() != *c) fail(std::string("expected '") + tok + "'");
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("malformed inequality at offset " + std::to_string(pos_) + ": " + what);
  }

  std::string s_;
  std::vector<std::string> vars_;
  std::size_t pos_ = 0;
};

inline std::string set_to_text(SubsetMask m, const std::vector<std::string>& vars) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!(m >> i & 1)) continue;
    if (!out.empty()) out += ',';
    out += vars[i];
  }
  return out;
}

}  // namespace detail

// Parses the text format. A leading "variables:" line declares the variable
// list; otherwise `declared` must be supplied.
inline TermList parse_inequality(const std::string& text,
                                 std::optional<std::vector<std::string>> declared = std::nullopt) {
  std::string body = text;
  std::vector<std::string> vars;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text.compare(first, 10, "variables:") == 0) {
    auto eol = text.find('\n', first);
    std::istringstream header(text.substr(first + 10, eol == std::string::npos ? std::string::npos
                                                                               : eol - first - 10));
    for (std::string v; header >> v;) vars.push_back(v);
    body = eol == std::string::npos ? "" : text.substr(eol + 1);
  } else if (declared) {
    vars = *declared;
  } else {
    throw std::invalid_argument("inequality text has no variable declaration");
  }
  if (vars.empty()) throw std::invalid_argument("empty variable declaration");
  auto terms = detail::InequalityParser(body, vars).parse();
  return {std::move(vars), std::move(terms)};
}

inline std::string measure_to_text(const Measure& m, const std::vector<std::string>& vars) {
  using detail::set_to_text;
  switch (m.kind) {
    case Measure::Kind::Entropy:
      return "H(" + set_to_text(m.x, vars) + ")";
    case Measure::Kind::CondEntropy:
      return "H(" + set_to_text(m.x, vars) + "|" + set_to_text(m.y, vars) + ")";
    case Measure::Kind::MutualInfo:
      return "I(" + set_to_text(m.x, vars) + ";" + set_to_text(m.y, vars) + ")";
    case Measure::Kind::CondMutualInfo:
      return "I(" + set_to_text(m.x, vars) + ";" + set_to_text(m.y, vars) + "|" +
             set_to_text(m.z, vars) + ")";
  }
  return {};
}

inline std::string to_text(const TermList& list) {
  std::ostringstream os;
  os << "variables:";
  for (const auto& v : list.variables) os << ' ' << v;
  os << '\n';
  bool first = true;
  for (const auto& [c, m] : list.terms) {
    os << (c < 0 ? "- " : (first ? "" : "+ ")) << to_string(abs(Rational(c))) << " * "
       << measure_to_text(m, list.variables) << '\n';
    first = false;
  }
  if (first) os << "0 * H(" << list.variables.front() << ")\n";
  os << ">= 0\n";
  return os.str();
}

inline std::string to_text(const RankExpression& e) {
  TermList list{e.variables(), {}};
  for (const auto& [m, c] : e.coeffs()) list.terms.push_back({c, Measure::H(m)});
  return to_text(list);
}

// ---------------------------------------------------------------------------
// Variables named after the columns of L_n: A_1..A_{n+1}, B_1..B_{n+1}, C
// (and P for the tight forms).

inline std::vector<std::string> ln_variables(int n, bool with_p = false) {
  std::vector<std::string> v;
  for (int i = 1; i <= n + 1; ++i) v.push_back("A_" + std::to_string(i));
  for (int i = 1; i <= n + 1; ++i) v.push_back("B_" + std::to_string(i));
  v.push_back("C");
  if (with_p) v.push_back("P");
  return v;
}

namespace detail {

// Bitmask helpers over ln_variables(n[, P]); indices are 1-based like A_i.
struct LnMasks {
  int n;
  SubsetMask a(int i) const { return SubsetMask{1} << (i - 1); }
  SubsetMask b(int i) const { return SubsetMask{1} << (n + 1 + i - 1); }
  SubsetMask c() const { return SubsetMask{1} << (2 * n + 2); }
  SubsetMask p() const { return SubsetMask{1} << (2 * n + 3); }
  SubsetMask a_prefix(int k) const {
    SubsetMask m = 0;
    for (int i = 1; i <= k; ++i) m |= a(i);
    return m;
  }
  SubsetMask a_all() const { return a_prefix(n + 1); }
  SubsetMask a_except(int i) const { return a_all() & ~a(i); }
  SubsetMask b_all() const {
    SubsetMask m = 0;
    for (int i = 1; i <= n + 1; ++i) m |= b(i);
    return m;
  }
  SubsetMask b_except(int i) const { return b_all() & ~b(i); }
};

inline void check_n(int n) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (2 * n + 4 > 63) throw std::invalid_argument("n too large");
}

}  // namespace detail

// H(B_[n+1]) ≤ n·I(A_[n+1];C) + Σ H(B_i|A_[n+1]-i) + Σ H(B_i|A_i,C)
//   + n·Σ_{i=2..n} I(A_[i-1];A_i)
//   + (n+1)[I(A_[n];A_{n+1}) + H(C|A_[n+1]) + Σ I(A_[n+1]-i;C)]
// Valid when char(F) divides n.
inline TermList thm_div_terms(int n) {
  detail::check_n(n);
  detail::LnMasks k{n};
  const Rational rn = n, rn1 = n + 1;
  std::vector<Term> t;
  t.push_back({-1, Measure::H(k.b_all())});
  t.push_back({rn, Measure::I(k.a_all(), k.c())});
  for (int i = 1; i <= n + 1; ++i) t.push_back({1, Measure::H(k.b(i), k.a_except(i))});
  for (int i = 1; i <= n + 1; ++i) t.push_back({1, Measure::H(k.b(i), k.a(i) | k.c())});
  for (int i = 2; i <= n; ++i) t.push_back({rn, Measure::I(k.a_prefix(i - 1), k.a(i))});
  t.push_back({rn1, Measure::I(k.a_prefix(n), k.a(n + 1))});
  t.push_back({rn1, Measure::H(k.c(), k.a_all())});
  for (int i = 1; i <= n + 1; ++i) t.push_back({rn1, Measure::I(k.a_except(i), k.c())});
  return {ln_variables(n), std::move(t)};
}

// H(C) ≤ 1/(n+1)·H(B_[n+1]) + H(C|A_[n+1]) + Σ I(A_[n+1]-i;C) + Σ H(C|A_i,B_i)
//   + n·Σ_{i=2..n} I(A_[i-1];A_i) + (n+1)·I(A_[n];A_{n+1}) + Σ H(B_i|A_[n+1]-i)
// Valid when char(F) does not divide n.
inline TermList thm_nondiv_terms(int n) {
  detail::check_n(n);
  detail::LnMasks k{n};
  const Rational rn = n, rn1 = n + 1;
  std::vector<Term> t;
  t.push_back({-1, Measure::H(k.c())});
  t.push_back({Rational(1) / rn1, Measure::H(k.b_all())});
  t.push_back({1, Measure::H(k.c(), k.a_all())});
  for (int i = 1; i <= n + 1; ++i) t.push_back({1, Measure::I(k.a_except(i), k.c())});
  for (int i = 1; i <= n + 1; ++i) t.push_back({1, Measure::H(k.c(), k.a(i) | k.b(i))});
  for (int i = 2; i <= n; ++i) t.push_back({rn, Measure::I(k.a_prefix(i - 1), k.a(i))});
  t.push_back({rn1, Measure::I(k.a_prefix(n), k.a(n + 1))});
  for (int i = 1; i <= n + 1; ++i) t.push_back({1, Measure::H(k.b(i), k.a_except(i))});
  return {ln_variables(n), std::move(t)};
}

// Tight form with the extra variable P, char(F) dividing n.
inline TermList tight_div_terms(int n) {
  detail::check_n(n);
  detail::LnMasks k{n};
  const Rational rn = n, rn1 = n + 1;
  const auto P = k.p();
  const auto all = k.a_all() | k.b_all() | P;
  std::vector<Term> t;
  // left-hand side, moved over with negative sign
  t.push_back({-1, Measure::H(k.b_all(), P)});
  for (int i = 1; i <= n + 1; ++i)
    t.push_back({-1, Measure::H(k.b(i), k.a_all() | k.b_except(i) | k.c() | P)});
  t.push_back({-rn1, Measure::H(k.c(), all)});
  // right-hand side
  for (int i = 1; i <= n + 1; ++i) t.push_back({rn1, Measure::I(k.a_except(i), k.c(), P)});
  t.push_back({rn, Measure::I(k.a_all(), k.c(), P)});
  for (int i = 1; i <= n + 1; ++i) t.push_back({1, Measure::H(k.b(i), k.a_except(i) | P)});
  for (int i = 1; i <= n + 1; ++i) t.push_back({1, Measure::H(k.b(i), k.a(i) | k.c() | P)});
  for (int i = 2; i <= n; ++i) t.push_back({rn, Measure::I(k.a_prefix(i - 1), k.a(i), P)});
  t.push_back({rn1, Measure::I(k.a_prefix(n), k.a(n + 1), P)});
  t.push_back({rn1, Measure::H(k.c(), k.a_all() | P)});
  return {ln_variables(n, true), std::move(t)};
}

// Tight form with the extra variable P, char(F) not dividing n.
inline TermList tight_nondiv_terms(int n) {
  detail::check_n(n);
  detail::LnMasks k{n};
  const Rational rn = n, rn1 = n + 1;
  const auto P = k.p();
  std::vector<Term> t;
  t.push_back({-1, Measure::H(k.c(), P)});
  t.push_back({-rn1, Measure::H(k.c(), k.a_all() | k.b_all() | P)});
  for (int i = 1; i <= n + 1; ++i)
    t.push_back({-(rn + 2) / rn1, Measure::H(k.b(i), k.a_all() | k.b_except(i) | k.c() | P)});
  t.push_back({Rational(1) / rn1, Measure::H(k.b_all(), P)});
  t.push_back({1, Measure::H(k.c(), k.a_all() | P)});
  for (int i = 1; i <= n + 1; ++i) t.push_back({1, Measure::I(k.a_except(i), k.c(), P)});
  for (int i = 1; i <= n + 1; ++i) t.push_back({1, Measure::H(k.c(), k.a(i) | k.b(i) | P)});
  for (int i = 2; i <= n; ++i) t.push_back({rn, Measure::I(k.a_prefix(i - 1), k.a(i), P)});
  t.push_back({rn1, Measure::I(k.a_prefix(n), k.a(n + 1), P)});
  for (int i = 1; i <= n + 1; ++i) t.push_back({1, Measure::H(k.b(i), k.a_except(i) | P)});
  return {ln_variables(n, true), std::move(t)};
}

inline RankExpression thm_div(int n) { return canonicalize(thm_div_terms(n)); }
inline RankExpression thm_nondiv(int n) { return canonicalize(thm_nondiv_terms(n)); }
inline RankExpression tight_div(int n) { return canonicalize(tight_div_terms(n)); }
inline RankExpression tight_nondiv(int n) { return canonicalize(tight_nondiv_terms(n)); }

// The family spanned by the columns of L_n in GF(p)^ambient (ambient ≥ n+1,
// extra coordinates zero): A_i = <e_i>, B_k = <1 - e_k>, C = <1>; P = 0.
inline SubspaceFamily ln_family(int n, std::uint64_t p, std::optional<std::size_t> ambient = std::nullopt,
                                bool with_p = false) {
  detail::check_n(n);
  PrimeModulus mod(p);
  const auto rows = static_cast<std::size_t>(n + 1);
  const auto d = ambient.value_or(rows);
  if (d < rows) throw std::invalid_argument("ln_family: ambient dimension below n+1");
  std::vector<Subspace> members;
  auto vec = [&](auto&& entry) {
    std::vector<std::int64_t> v(d, 0);
    for (std::size_t r = 0; r < rows; ++r) v[r] = entry(r);
    return Subspace::span(mod, d, {v});
  };
  for (std::size_t i = 0; i < rows; ++i) members.push_back(vec([&](std::size_t r) { return r == i ? 1 : 0; }));
  for (std::size_t i = 0; i < rows; ++i) members.push_back(vec([&](std::size_t r) { return r == i ? 0 : 1; }));
  members.push_back(vec([](std::size_t) { return 1; }));
  if (with_p) members.push_back(Subspace::zero(mod, d));
  return SubspaceFamily(ln_variables(n, with_p), std::move(members));
}

// n such that `vars` is ln_variables(n[, P]), if any.
inline std::optional<std::pair<int, bool>> match_ln_variables(const std::vector<std::string>& vars) {
  for (bool with_p : {false, true}) {
    auto extra = with_p ? 4 : 3;
    if (vars.size() < static_cast<std::size_t>(extra) + 4) continue;
    if ((vars.size() - extra) % 2 != 0) continue;
    int n = static_cast<int>((vars.size() - extra) / 2);
    if (n >= 2 && ln_variables(n, with_p) == vars) return std::make_pair(n, with_p);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Randomized verification

struct Violation {
  std::int64_t trial = 0;  // -1 for injected families
  SubspaceFamily family;
  Rational value;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  std::uint32_t modulus = 0;
  std::size_t ambient_dim = 0;
  std::size_t trials = 0;
  std::size_t injected = 0;
  std::vector<Violation> violations;
  std::optional<Rational> min_value;

  bool clean() const { return violations.empty(); }
};

// Associative merge (violations ordered by trial index).
inline VerificationReport merge(VerificationReport a, const VerificationReport& b) {
  a.trials += b.trials;
  a.injected += b.injected;
  a.violations.insert(a.violations.end(), b.violations.begin(), b.violations.end());
  std::stable_sort(a.violations.begin(), a.violations.end(),
                   [](const Violation& x, const Violation& y) { return x.trial < y.trial; });
  if (b.min_value && (!a.min_value || *b.min_value < *a.min_value)) a.min_value = b.min_value;
  return a;
}

// Independent generator per trial, so results do not depend on worker count.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

struct VerifyOptions {
  unsigned workers = 1;
  DimPolicy dims{};
  // Evaluate the L_n family first whenever the variables match and the ambient
  // space is large enough.
  bool inject_counterexample = true;
  std::vector<SubspaceFamily> extra_families{};
};

template <class Rng>
SubspaceFamily random_family(const std::vector<std::string>& vars, PrimeModulus mod, std::size_t d,
                             Rng& rng, DimPolicy dims = {}) {
  std::vector<Subspace> members;
  members.reserve(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) members.push_back(random_subspace(mod, d, rng, dims));
  return SubspaceFamily(vars, std::move(members));
}

inline VerificationReport verify(const RankExpression& e, std::uint64_t p, std::size_t ambient_dim,
                                 std::size_t trials, std::uint64_t seed, const VerifyOptions& opts = {}) {
  PrimeModulus mod(p);
  VerificationReport report;
  report.seed = seed;
  report.modulus = mod.value();
  report.ambient_dim = ambient_dim;

  auto record = [](VerificationReport& r, std::int64_t trial, const SubspaceFamily& f, Rational v) {
    if (!r.min_value || v < *r.min_value) r.min_value = v;
    if (v < 0) r.violations.push_back({trial, f, std::move(v)});
  };

  std::vector<SubspaceFamily> injected = opts.extra_families;
  if (opts.inject_counterexample) {
    if (auto ln = match_ln_variables(e.variables()); ln && ambient_dim >= static_cast<std::size_t>(ln->first + 1)) {
      injected.insert(injected.begin(), ln_family(ln->first, p, ambient_dim, ln->second));
    }
  }
  for (const auto& f : injected) {
    record(report, -1, f, e.evaluate(f));
    ++report.injected;
  }

  const unsigned workers = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(std::max<std::size_t>(trials, 1))));
  std::vector<VerificationReport> parts(workers);
  auto run = [&](unsigned w) {
    auto& part = parts[w];
    for (std::size_t t = w; t < trials; t += workers) {
      auto rng = trial_rng(seed, t);
      auto f = random_family(e.variables(), mod, ambient_dim, rng, opts.dims);
      record(part, static_cast<std::int64_t>(t), f, e.evaluate(f));
      ++part.trials;
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  for (const auto& part : parts) report = merge(std::move(report), part);
  return report;
}

// Re-evaluates every recorded violation; true iff each reproduces exactly.
inline bool violations_reproduce(const RankExpression& e, const VerificationReport& r) {
  return std::all_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) {
    auto again = e.evaluate(v.family);
    return again == v.value && again < 0;
  });
}

enum class TheoremKind { Div, NonDiv };

inline RankExpression theorem(TheoremKind which, int n) {
  return which == TheoremKind::Div ? thm_div(n) : thm_nondiv(n);
}

// Both theorems hold over every field once the ambient dimension is at most n.
inline VerificationReport bounded_dim_check(TheoremKind which, int n, std::uint64_t p, std::size_t trials,
                                            std::uint64_t seed, std::optional<std::size_t> ambient = std::nullopt,
                                            unsigned workers = 1) {
  auto d = ambient.value_or(static_cast<std::size_t>(n));
  if (d > static_cast<std::size_t>(n)) throw std::invalid_argument("bounded_dim_check: ambient dimension exceeds n");
  VerifyOptions opts;
  opts.workers = workers;
  return verify(theorem(which, n), p, d, trials, seed, opts);
}

// ---------------------------------------------------------------------------
// Projection-entropy dichotomy for mutually complementary A_1..A_{n+1} and C
// in general position: H({π_[n+1]-i(C)}) is n·H(C) if p | n, else (n+1)·H(C).

struct ProjectionMismatch {
  std::size_t trial = 0;
  std::size_t measured = 0;
  std::size_t expected = 0;
};

struct ProjectionReport {
  int n = 0;
  std::uint32_t modulus = 0;
  std::size_t block_dim = 1;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t degenerate = 0;           // trials with C = 0
  std::map<std::size_t, std::size_t> measured;  // value -> count
  std::vector<ProjectionMismatch> mismatches;
  std::size_t line_checks = 0;    // random C found in general position
  std::size_t line_violations = 0;    // of those, H(C) > block_dim

  bool clean() const { return mismatches.empty() && line_violations == 0; }
};

// Sum of π_[n+1]-i(C) over i, as a subspace.
inline Subspace projection_sum(const DirectSumDecomposition& dec, const Subspace& c) {
  const auto parts = dec.parts().size();
  std::vector<Subspace> images;
  for (std::size_t i = 0; i < parts; ++i) {
    std::vector<std::size_t> sel;
    for (std::size_t j = 0; j < parts; ++j)
      if (j != i) sel.push_back(j);
    images.push_back(dec.project(sel, c));
  }
  return sum(images, c.modulus(), c.ambient_dim());
}

// True iff C ∩ (⊕_{i≠k} A_i) = 0 for every k.
inline bool general_position(const DirectSumDecomposition& dec, const Subspace& c) {
  const auto parts = dec.parts().size();
  for (std::size_t k = 0; k < parts; ++k) {
    std::vector<Subspace> others;
    for (std::size_t j = 0; j < parts; ++j)
      if (j != k) others.push_back(dec.parts()[j]);
    if (!intersect(sum(others, c.modulus(), c.ambient_dim()), c).is_zero()) return false;
  }
  return true;
}

inline ProjectionReport projection_check(int n, std::uint64_t p, std::size_t trials, std::uint64_t seed,
                                 std::size_t block_dim = 1) {
  detail::check_n(n);
  if (block_dim < 1) throw std::invalid_argument("projection_check: block dimension must be positive");
  PrimeModulus mod(p);
  const auto parts = static_cast<std::size_t>(n + 1);
  const auto d = parts * block_dim;
  const bool divides = mod.divides(static_cast<std::uint64_t>(n));

  ProjectionReport rep;
  rep.n = n;
  rep.modulus = mod.value();
  rep.block_dim = block_dim;
  rep.seed = seed;

  std::uniform_int_distribution<std::uint32_t> nonzero(1, mod.value() - 1);
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, t);
    auto basis = random_invertible(mod, d, rng);
    std::vector<Subspace> blocks;
    for (std::size_t i = 0; i < parts; ++i) {
      std::vector<std::size_t> idx(block_dim);
      std::iota(idx.begin(), idx.end(), i * block_dim);
      blocks.push_back(Subspace::row_space(basis.select_rows(idx)));
    }
    DirectSumDecomposition dec(blocks);

    // Every tenth trial uses C = 0; otherwise C is spanned by Σ v_i with each
    // v_i a nonzero vector of A_i.
    Subspace c = Subspace::zero(mod, d);
    if (t % 10 == 9) {
      ++rep.degenerate;
    } else {
      std::vector<std::uint32_t> v(d, 0);
      for (std::size_t i = 0; i < parts; ++i) {
        std::vector<std::uint32_t> coeff(block_dim, 0);
        std::uniform_int_distribution<std::uint32_t> any(0, mod.value() - 1);
        do {
          for (auto& x : coeff) x = any(rng);
        } while (std::all_of(coeff.begin(), coeff.end(), [](auto x) { return x == 0; }));
        for (std::size_t r = 0; r < block_dim; ++r)
          for (std::size_t j = 0; j < d; ++j)
            v[j] = mod.add(v[j], mod.mul(coeff[r], basis(i * block_dim + r, j)));
      }
      FpMatrix g(mod, 0, d);
      g.append_row(v);
      c = Subspace::row_space(g);
    }
    const auto measured = projection_sum(dec, c).dim();
    const auto expected = (divides ? parts - 1 : parts) * c.dim();
    ++rep.measured[measured];
    if (measured != expected) rep.mismatches.push_back({t, measured, expected});
    ++rep.trials;

    // An admissible C embeds into A_1 via the projection, so H(C) ≤ dim A_1
    // (= 1 for one-dimensional blocks).
    auto candidate = random_subspace(mod, d, rng, DimPolicy{1, std::min(block_dim + 1, d)});
    if (general_position(dec, candidate)) {
      ++rep.line_checks;
      if (candidate.dim() > block_dim) ++rep.line_violations;
    }
  }
  return rep;
}

}  // namespace lrineq
