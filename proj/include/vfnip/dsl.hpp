#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hahn.hpp"
#include "valfield.hpp"

namespace vfnip {

// Syntax errors carry the 1-based source position of the offending token.
struct parse_error : input_error {
  parse_error(const std::string& what, size_t line, size_t col)
      : input_error("parse error at " + std::to_string(line) + ":" +
                    std::to_string(col) + ": " + what),
        line(line),
        col(col) {}
  size_t line;
  size_t col;
};

namespace dsl_detail {

struct Cursor {
  const std::string& s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' ||
                            s[i] == '\r'))
      ++i;
  }

  bool done() {
    skip_ws();
    return i >= s.size();
  }

  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }

  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  static bool ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9');
  }

  // peeks an identifier without consuming it
  std::string peek_ident() {
    skip_ws();
    size_t j = i;
    std::string out;
    while (j < s.size() && ident_char(s[j])) out += s[j++];
    return out;
  }

  std::string ident() {
    auto out = peek_ident();
    if (out.empty()) fail("expected a name");
    i += out.size();
    return out;
  }

  long integer() {
    skip_ws();
    size_t start = i;
    bool neg = i < s.size() && s[i] == '-';
    if (neg) ++i;
    if (i >= s.size() || s[i] < '0' || s[i] > '9') {
      i = start;
      fail("expected an integer");
    }
    long v = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
      if (v > (1L << 60)) fail("integer literal too large");
      v = v * 10 + (s[i] - '0');
      ++i;
    }
    return neg ? -v : v;
  }

  Rat rational() {
    long n = integer();
    size_t save = i;
    if (eat('/')) {
      skip_ws();
      if (i < s.size() && s[i] >= '0' && s[i] <= '9') {
        long d = integer();
        if (d == 0) fail("zero denominator");
        return Rat(n, d);
      }
      i = save;
    }
    return Rat(n);
  }

  [[noreturn]] void fail(const std::string& what) {
    skip_ws();
    size_t line = 1, last = 0;
    for (size_t j = 0; j < i && j < s.size(); ++j)
      if (s[j] == '\n') {
        ++line;
        last = j + 1;
      }
    throw parse_error(what, line, i - last + 1);
  }
};

// ---------------------------------------------------------------------------
// Groups.

inline ArchSummand parse_summand(Cursor& c);

inline OAGDesc parse_group(Cursor& c) {
  if (c.peek_ident() == "lex") {
    c.ident();
    c.expect('(');
    OAGDesc out;
    if (!c.eat(')')) {
      do {
        auto part = parse_group(c);
        for (auto& su : part.summands) out.summands.push_back(std::move(su));
      } while (c.eat(','));
      c.expect(')');
    }
    return out;
  }
  return OAGDesc{{parse_summand(c)}};
}

inline ArchSummand parse_summand(Cursor& c) {
  auto name = c.peek_ident();
  if (name == "Z") {
    c.ident();
    // Z[1/p] is sugar for dense{p}
    if (c.eat('[')) {
      if (c.integer() != 1) c.fail("expected '1' in Z[1/p]");
      c.expect('/');
      long p = c.integer();
      if (!is_prime(p)) c.fail("Z[1/p] needs a prime");
      c.expect(']');
      return summand_dense({p});
    }
    return summand_Z();
  }
  if (name == "Q") {
    c.ident();
    return summand_Q();
  }
  if (name == "dense") {
    c.ident();
    c.expect('{');
    std::vector<long> ps;
    do {
      long p = c.integer();
      if (!is_prime(p)) c.fail("dense{...} takes primes");
      ps.push_back(p);
    } while (c.eat(','));
    c.expect('}');
    return summand_dense(std::move(ps));
  }
  c.fail("expected a group (Z, Q, Z[1/p], dense{...} or lex(...))");
}

inline std::string print_summand(const ArchSummand& s) {
  if (s.discrete) return "Z";
  if (s.all_divisible) return "Q";
  std::string out = "dense{";
  for (size_t i = 0; i < s.primes.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s.primes[i]);
  }
  return out + "}";
}

inline std::string print_group(const OAGDesc& g) {
  if (g.rank() == 1) return print_summand(g.summands[0]);
  std::string out = "lex(";
  for (size_t i = 0; i < g.summands.size(); ++i) {
    if (i) out += ",";
    out += print_summand(g.summands[i]);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// Elements: a bare rational or a parenthesized tuple.

inline std::vector<Rat> parse_coords(Cursor& c) {
  std::vector<Rat> out;
  if (c.eat('(')) {
    do out.push_back(c.rational());
    while (c.eat(','));
    c.expect(')');
    return out;
  }
  out.push_back(c.rational());
  return out;
}

inline std::string print_element(const GroupElement& e) {
  if (e.coords.size() == 1) return rat_str(e.coords[0]);
  std::string out = "(";
  for (size_t i = 0; i < e.coords.size(); ++i) {
    if (i) out += ", ";
    out += rat_str(e.coords[i]);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// Fields.

inline Tri parse_tri(Cursor& c) {
  auto word = c.ident();
  if (word == "true") return Tri::True;
  if (word == "false") return Tri::False;
  if (word == "unknown") return Tri::Unknown;
  c.fail("expected true, false or unknown");
}

inline ImpDeg parse_impdeg(Cursor& c) {
  if (c.peek_ident() == "inf") {
    c.ident();
    return ImpDeg::infinite();
  }
  long e = c.integer();
  if (e < 0) c.fail("imperfection degree cannot be negative");
  return ImpDeg::finite(e);
}

inline std::string print_impdeg(const ImpDeg& e) {
  return e.inf ? "inf" : std::to_string(e.e);
}

inline FieldDesc parse_field(Cursor& c) {
  auto name = c.peek_ident();
  if (name == "ACF0") {
    c.ident();
    return AlgClosedField{0};
  }
  if (name == "RCF") {
    c.ident();
    return RealClosedField{};
  }
  if (name == "F") {
    c.ident();
    c.expect('(');
    long q = c.integer();
    c.expect(')');
    if (q < 2) c.fail("finite field size must be a prime power");
    auto ps = prime_factors(Int(q));
    if (ps.size() != 1) c.fail("finite field size must be a prime power");
    long p = ps[0], d = 0;
    while (q > 1) {
      if (q % p != 0) c.fail("finite field size must be a prime power");
      q /= p;
      ++d;
    }
    return FiniteField{p, d};
  }
  if (name == "Falg") {
    c.ident();
    c.expect('(');
    long p = c.integer();
    c.expect(')');
    if (!is_prime(p)) c.fail("Falg takes a prime characteristic");
    return AlgClosedField{p};
  }
  if (name == "SCF") {
    c.ident();
    c.expect('(');
    long p = c.integer();
    if (!is_prime(p)) c.fail("SCF takes a prime characteristic");
    c.expect(',');
    auto e = parse_impdeg(c);
    c.expect(')');
    return SepClosedField{p, e};
  }
  if (name == "field") {
    c.ident();
    c.expect('{');
    AbstractField f;
    bool saw_char = false;
    bool first = true;
    while (!c.eat('}')) {
      if (!first) c.expect(',');
      first = false;
      auto key = c.ident();
      c.expect('=');
      if (key == "char") {
        long ch = c.integer();
        if (ch != 0 && !is_prime(ch)) c.fail("characteristic must be 0 or prime");
        f.char_p = ch;
        saw_char = true;
      } else if (key == "perfect") {
        f.perfect = parse_tri(c);
      } else if (key == "imp") {
        if (c.peek_ident() == "unknown") {
          c.ident();
          f.imp = std::nullopt;
        } else {
          f.imp = parse_impdeg(c);
        }
      } else if (key == "noPext") {
        f.no_p_ext = parse_tri(c);
      } else if (key == "nip") {
        f.nip = parse_tri(c);
      } else {
        c.fail("unknown field key '" + key + "'");
      }
    }
    if (!saw_char) c.fail("field{...} needs char=");
    return f;
  }
  c.fail("expected a field (F, Falg, ACF0, RCF, SCF or field{...})");
}

inline std::string print_field(const FieldDesc& f) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FiniteField>) {
          long q = 1;
          for (long i = 0; i < v.d; ++i) q *= v.p;
          return "F(" + std::to_string(q) + ")";
        } else if constexpr (std::is_same_v<T, AlgClosedField>) {
          return v.char_p == 0 ? "ACF0"
                               : "Falg(" + std::to_string(v.char_p) + ")";
        } else if constexpr (std::is_same_v<T, RealClosedField>) {
          return "RCF";
        } else if constexpr (std::is_same_v<T, SepClosedField>) {
          return "SCF(" + std::to_string(v.p) + "," + print_impdeg(v.e) + ")";
        } else {
          std::string out = "field{char=" + std::to_string(v.char_p);
          if (v.perfect != Tri::Unknown)
            out += ", perfect=" + to_string(v.perfect);
          if (v.imp) out += ", imp=" + print_impdeg(*v.imp);
          if (v.no_p_ext != Tri::Unknown)
            out += ", noPext=" + to_string(v.no_p_ext);
          if (v.nip != Tri::Unknown) out += ", nip=" + to_string(v.nip);
          return out + "}";
        }
      },
      f);
}

// ---------------------------------------------------------------------------
// Valued fields.

inline ValuedFieldDesc parse_vf(Cursor& c);

inline bool starts_vf(const std::string& name) {
  return name == "triv" || name == "hahn" || name == "Qp" || name == "cohen" ||
         name == "tame" || name == "abstract";
}

inline ValuedFieldDesc parse_vf(Cursor& c) {
  auto name = c.peek_ident();
  if (name == "triv") {
    c.ident();
    c.expect('(');
    auto k = parse_field(c);
    c.expect(')');
    return build({}, TrivialCore{std::move(k)});
  }
  if (name == "hahn") {
    c.ident();
    c.expect('(');
    auto base = parse_vf(c);
    c.expect(',');
    auto g = parse_group(c);
    c.expect(')');
    validate_group(g);
    if (g.trivial()) c.fail("hahn layer needs a nontrivial group");
    return hahn(std::move(base), std::move(g));
  }
  if (name == "Qp") {
    c.ident();
    c.expect('(');
    long p = c.integer();
    c.expect(',');
    long e = c.integer();
    c.expect(',');
    long f = c.integer();
    c.expect(')');
    return build({}, QpExtCore{p, e, f});
  }
  if (name == "cohen") {
    c.ident();
    c.expect('(');
    ValuedFieldDesc out;
    if (starts_vf(c.peek_ident())) {
      auto lower = parse_vf(c);
      out = build({}, CohenCore{FieldDesc{},
                                std::make_shared<const ValuedFieldDesc>(
                                    std::move(lower))});
    } else {
      auto k = parse_field(c);
      out = build({}, CohenCore{std::move(k), nullptr});
    }
    c.expect(')');
    return out;
  }
  if (name == "tame") {
    c.ident();
    c.expect('(');
    auto k = parse_field(c);
    c.expect(',');
    auto g = parse_group(c);
    c.expect(',');
    auto coords = parse_coords(c);
    c.expect(')');
    auto vp = make_element(g, std::move(coords));
    return build({}, TameKaplanskyCore{std::move(k), std::move(g), std::move(vp)});
  }
  if (name == "abstract") {
    c.ident();
    c.expect('{');
    AbstractCore core;
    std::optional<OAGDesc> g;
    std::optional<FieldDesc> residue;
    std::optional<std::vector<Rat>> vp_coords;
    bool first = true;
    while (!c.eat('}')) {
      if (!first) c.expect(',');
      first = false;
      auto key = c.ident();
      c.expect('=');
      if (key == "residue") residue = parse_field(c);
      else if (key == "group") g = parse_group(c);
      else if (key == "vp") vp_coords = parse_coords(c);
      else if (key == "field") core.field_sort = parse_field(c);
      else if (key == "henselian") core.flags.henselian = parse_tri(c);
      else if (key == "defectless") core.flags.defectless = parse_tri(c);
      else if (key == "sepDefectless") core.flags.sep_defectless = parse_tri(c);
      else if (key == "algMax") core.flags.alg_max = parse_tri(c);
      else if (key == "sepAlgMax") core.flags.sep_alg_max = parse_tri(c);
      else c.fail("unknown abstract key '" + key + "'");
    }
    if (!residue) c.fail("abstract{...} needs residue=");
    if (!g) c.fail("abstract{...} needs group=");
    core.k = std::move(*residue);
    core.g = std::move(*g);
    if (vp_coords) core.vp = make_element(core.g, std::move(*vp_coords));
    return build({}, std::move(core));
  }
  c.fail("expected a valued field (triv, hahn, Qp, cohen, tame or abstract)");
}

inline std::string print_vf(const ValuedFieldDesc& vf);

inline std::string print_core(const Core& core) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TrivialCore>) {
          return "triv(" + print_field(v.k) + ")";
        } else if constexpr (std::is_same_v<T, QpExtCore>) {
          return "Qp(" + std::to_string(v.p) + "," + std::to_string(v.e) +
                 "," + std::to_string(v.f) + ")";
        } else if constexpr (std::is_same_v<T, CohenCore>) {
          if (v.plain()) return "cohen(" + print_field(v.lower_field) + ")";
          return "cohen(" + print_vf(*v.lower_valued) + ")";
        } else if constexpr (std::is_same_v<T, TameKaplanskyCore>) {
          return "tame(" + print_field(v.k) + ", " + print_group(v.g) + ", " +
                 print_element(v.vp) + ")";
        } else {
          std::string out = "abstract{residue=" + print_field(v.k) +
                            ", group=" + print_group(v.g);
          if (v.vp) out += ", vp=" + print_element(*v.vp);
          if (v.field_sort) out += ", field=" + print_field(*v.field_sort);
          if (v.flags.henselian != Tri::Unknown)
            out += ", henselian=" + to_string(v.flags.henselian);
          if (v.flags.defectless != Tri::Unknown)
            out += ", defectless=" + to_string(v.flags.defectless);
          if (v.flags.sep_defectless != Tri::Unknown)
            out += ", sepDefectless=" + to_string(v.flags.sep_defectless);
          if (v.flags.alg_max != Tri::Unknown)
            out += ", algMax=" + to_string(v.flags.alg_max);
          if (v.flags.sep_alg_max != Tri::Unknown)
            out += ", sepAlgMax=" + to_string(v.flags.sep_alg_max);
          return out + "}";
        }
      },
      core);
}

inline std::string print_vf(const ValuedFieldDesc& vf) {
  std::string out = print_core(vf.core);
  for (size_t i = vf.layers.size(); i-- > 0;)
    out = "hahn(" + out + ", " + print_group(vf.layers[i]) + ")";
  return out;
}

}  // namespace dsl_detail

// ---------------------------------------------------------------------------
// Entry points. Each parses a complete string (trailing garbage rejected).

inline OAGDesc parse_group(const std::string& text) {
  dsl_detail::Cursor c{text};
  auto g = dsl_detail::parse_group(c);
  if (!c.done()) c.fail("trailing input after the group");
  validate_group(g);
  return g;
}

inline FieldDesc parse_field(const std::string& text) {
  dsl_detail::Cursor c{text};
  auto f = dsl_detail::parse_field(c);
  if (!c.done()) c.fail("trailing input after the field");
  return f;
}

inline ValuedFieldDesc parse_descriptor(const std::string& text) {
  dsl_detail::Cursor c{text};
  auto vf = dsl_detail::parse_vf(c);
  if (!c.done()) c.fail("trailing input after the descriptor");
  validate_vf(vf);
  return vf;
}

using dsl_detail::print_element;
using dsl_detail::print_field;
using dsl_detail::print_group;

inline std::string print_descriptor(const ValuedFieldDesc& vf) {
  return dsl_detail::print_vf(vf);
}

// ---------------------------------------------------------------------------
// Series expressions: sums, differences, products and quotients of rational
// constants and powers of t, with group-element tuples as exponents.
// Quotients truncate at the requested order (exponents up to order in the
// leading coordinate).

namespace dsl_detail {

struct SNode {
  enum Kind { Const, Term, Add, Sub, Mul, Div, Neg } kind = Const;
  Rat value;
  std::vector<Rat> exps;
  std::unique_ptr<SNode> a, b;
};

using NodePtr = std::unique_ptr<SNode>;

inline NodePtr parse_series_expr(Cursor& c, std::optional<size_t>& rank);

inline NodePtr parse_series_atom(Cursor& c, std::optional<size_t>& rank) {
  if (c.peek_ident() == "t") {
    c.ident();
    auto node = std::make_unique<SNode>();
    node->kind = SNode::Term;
    if (c.eat('^')) {
      if (c.peek() == '(') {
        node->exps = parse_coords(c);
      } else {
        node->exps = {Rat(c.integer())};
      }
    } else {
      node->exps = {Rat(1)};
    }
    if (rank && *rank != node->exps.size())
      c.fail("exponent arity mismatch");
    rank = node->exps.size();
    return node;
  }
  if (c.peek() == '(') {
    c.expect('(');
    auto inner = parse_series_expr(c, rank);
    c.expect(')');
    return inner;
  }
  auto node = std::make_unique<SNode>();
  node->kind = SNode::Const;
  node->value = c.rational();
  return node;
}

inline NodePtr parse_series_unary(Cursor& c, std::optional<size_t>& rank) {
  if (c.eat('-')) {
    auto node = std::make_unique<SNode>();
    node->kind = SNode::Neg;
    node->a = parse_series_unary(c, rank);
    return node;
  }
  return parse_series_atom(c, rank);
}

inline NodePtr parse_series_mul(Cursor& c, std::optional<size_t>& rank) {
  auto lhs = parse_series_unary(c, rank);
  while (true) {
    char op = 0;
    if (c.eat('*')) op = '*';
    else if (c.eat('/')) op = '/';
    else break;
    auto node = std::make_unique<SNode>();
    node->kind = op == '*' ? SNode::Mul : SNode::Div;
    node->a = std::move(lhs);
    node->b = parse_series_unary(c, rank);
    lhs = std::move(node);
  }
  return lhs;
}

inline NodePtr parse_series_expr(Cursor& c, std::optional<size_t>& rank) {
  auto lhs = parse_series_mul(c, rank);
  while (true) {
    char op = 0;
    if (c.eat('+')) op = '+';
    else if (c.eat('-')) op = '-';
    else break;
    auto node = std::make_unique<SNode>();
    node->kind = op == '+' ? SNode::Add : SNode::Sub;
    node->a = std::move(lhs);
    node->b = parse_series_mul(c, rank);
    lhs = std::move(node);
  }
  return lhs;
}

inline Series<RatRing> eval_series(const SNode& n, size_t rank, long order) {
  RatRing R;
  switch (n.kind) {
    case SNode::Const: {
      GroupElement zero;
      zero.coords.assign(rank, Rat(0));
      return series_term(R, zero, n.value);
    }
    case SNode::Term: {
      GroupElement e;
      e.coords = n.exps;
      return series_term(R, e, Rat(1));
    }
    case SNode::Neg:
      return series_neg(R, eval_series(*n.a, rank, order));
    case SNode::Add:
      return series_add(R, eval_series(*n.a, rank, order),
                        eval_series(*n.b, rank, order));
    case SNode::Sub:
      return series_sub(R, eval_series(*n.a, rank, order),
                        eval_series(*n.b, rank, order));
    case SNode::Mul:
      return series_mul(R, eval_series(*n.a, rank, order),
                        eval_series(*n.b, rank, order));
    case SNode::Div: {
      GroupElement bound;
      bound.coords.assign(rank, Rat(0));
      bound.coords[0] = Rat(order);
      auto inv = series_invert(R, eval_series(*n.b, rank, order), bound);
      return series_truncate(series_mul(R, eval_series(*n.a, rank, order), inv),
                             bound);
    }
  }
  throw internal_error("unreachable series node");
}

}  // namespace dsl_detail

struct SeriesValue {
  Series<RatRing> series;
  size_t rank = 1;
};

inline SeriesValue parse_series(const std::string& text, long order) {
  dsl_detail::Cursor c{text};
  std::optional<size_t> rank;
  auto ast = dsl_detail::parse_series_expr(c, rank);
  if (!c.done()) c.fail("trailing input after the series");
  size_t r = rank.value_or(1);
  return {dsl_detail::eval_series(*ast, r, order), r};
}

inline std::string print_series_exponent(const GroupElement& e) {
  if (e.coords.size() == 1 && is_integer(e.coords[0]) && e.coords[0] > 0) {
    if (e.coords[0] == 1) return "t";
    return "t^" + rat_str(e.coords[0]);
  }
  std::string out = "t^(";
  for (size_t i = 0; i < e.coords.size(); ++i) {
    if (i) out += ",";
    out += rat_str(e.coords[i]);
  }
  return out + ")";
}

inline std::string print_series(const Series<RatRing>& s) {
  if (s.c.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, coef] : s.c) {
    Rat a = coef;
    if (first) {
      if (a < 0) {
        out += "-";
        a = -a;
      }
    } else {
      out += a < 0 ? " - " : " + ";
      if (a < 0) a = -a;
    }
    first = false;
    bool zero_exp = e.is_zero();
    if (zero_exp) {
      out += rat_str(a);
    } else {
      if (!(a == 1)) out += rat_str(a) + "*";
      out += print_series_exponent(e);
    }
  }
  return out;
}

}  // namespace vfnip
