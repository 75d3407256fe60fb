#include "mverse/formula.hpp"

#include <algorithm>
#include <cctype>

namespace mverse {

namespace {

FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

}  // namespace

FormulaPtr f_member(Term a, Term b, std::optional<std::string> via) {
  Formula f;
  f.kind = Formula::Kind::Member;
  f.terms = {std::move(a), std::move(b)};
  f.via = std::move(via);
  return make(std::move(f));
}

FormulaPtr f_equal(Term a, Term b) {
  Formula f;
  f.kind = Formula::Kind::Equal;
  f.terms = {std::move(a), std::move(b)};
  return make(std::move(f));
}

FormulaPtr f_subset(Term a, Term b) {
  Formula f;
  f.kind = Formula::Kind::Subset;
  f.terms = {std::move(a), std::move(b)};
  return make(std::move(f));
}

FormulaPtr f_pair_eq(Term a, Term x, Term y) {
  Formula f;
  f.kind = Formula::Kind::PairEq;
  f.terms = {std::move(a), std::move(x), std::move(y)};
  return make(std::move(f));
}

FormulaPtr f_not(FormulaPtr body) {
  Formula f;
  f.kind = Formula::Kind::Not;
  f.left = std::move(body);
  return make(std::move(f));
}

namespace {
FormulaPtr binary(Formula::Kind k, FormulaPtr l, FormulaPtr r) {
  Formula f;
  f.kind = k;
  f.left = std::move(l);
  f.right = std::move(r);
  return make(std::move(f));
}
FormulaPtr quant(Formula::Kind k, std::string var, std::optional<Term> bound,
                 FormulaPtr body) {
  Formula f;
  f.kind = k;
  f.var = std::move(var);
  f.bound = std::move(bound);
  f.left = std::move(body);
  return make(std::move(f));
}
}  // namespace

FormulaPtr f_and(FormulaPtr l, FormulaPtr r) { return binary(Formula::Kind::And, std::move(l), std::move(r)); }
FormulaPtr f_or(FormulaPtr l, FormulaPtr r) { return binary(Formula::Kind::Or, std::move(l), std::move(r)); }
FormulaPtr f_implies(FormulaPtr l, FormulaPtr r) { return binary(Formula::Kind::Implies, std::move(l), std::move(r)); }
FormulaPtr f_iff(FormulaPtr l, FormulaPtr r) { return binary(Formula::Kind::Iff, std::move(l), std::move(r)); }

FormulaPtr f_forall(std::string var, FormulaPtr body) {
  return quant(Formula::Kind::ForAll, std::move(var), std::nullopt, std::move(body));
}
FormulaPtr f_exists(std::string var, FormulaPtr body) {
  return quant(Formula::Kind::Exists, std::move(var), std::nullopt, std::move(body));
}
FormulaPtr f_forall_in(std::string var, Term bound, FormulaPtr body) {
  return quant(Formula::Kind::ForAll, std::move(var), std::move(bound), std::move(body));
}
FormulaPtr f_exists_in(std::string var, Term bound, FormulaPtr body) {
  return quant(Formula::Kind::Exists, std::move(var), std::move(bound), std::move(body));
}

FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs) {
  FormulaPtr out = fs.at(0);
  for (std::size_t i = 1; i < fs.size(); ++i) out = f_and(out, fs[i]);
  return out;
}

FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs) {
  FormulaPtr out = fs.at(0);
  for (std::size_t i = 1; i < fs.size(); ++i) out = f_or(out, fs[i]);
  return out;
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.kind != b.kind || a.terms != b.terms || a.via != b.via ||
      a.var != b.var || a.bound != b.bound) {
    return false;
  }
  if ((a.left == nullptr) != (b.left == nullptr)) return false;
  if ((a.right == nullptr) != (b.right == nullptr)) return false;
  if (a.left && !structurally_equal(*a.left, *b.left)) return false;
  if (a.right && !structurally_equal(*a.right, *b.right)) return false;
  return true;
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound,
                  std::set<std::string>& free) {
  for (const Term& t : f.terms) {
    if (t.kind == Term::Kind::Var && !bound.count(t.name)) free.insert(t.name);
  }
  if (f.bound && f.bound->kind == Term::Kind::Var && !bound.count(f.bound->name)) {
    free.insert(f.bound->name);
  }
  if (f.is_quantifier()) {
    const bool inserted = bound.insert(f.var).second;
    collect_free(*f.left, bound, free);
    if (inserted) bound.erase(f.var);
    return;
  }
  if (f.left) collect_free(*f.left, bound, free);
  if (f.right) collect_free(*f.right, bound, free);
}

void collect_names(const Formula& f, std::set<std::string>& names) {
  for (const Term& t : f.terms) {
    if (t.kind != Term::Kind::Lit) names.insert(t.name);
  }
  if (f.bound && f.bound->kind != Term::Kind::Lit) names.insert(f.bound->name);
  if (f.is_quantifier()) names.insert(f.var);
  if (f.via) names.insert(*f.via);
  if (f.left) collect_names(*f.left, names);
  if (f.right) collect_names(*f.right, names);
}

}  // namespace

std::vector<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, free;
  collect_free(f, bound, free);
  return {free.begin(), free.end()};
}

std::set<std::string> all_names(const Formula& f) {
  std::set<std::string> names;
  collect_names(f, names);
  return names;
}

bool is_core(const Formula& f) {
  if (f.kind == Formula::Kind::Subset || f.kind == Formula::Kind::PairEq) return false;
  if (f.is_quantifier() && f.bound) return false;
  if (f.left && !is_core(*f.left)) return false;
  if (f.right && !is_core(*f.right)) return false;
  return true;
}

std::size_t quantifier_rank(const Formula& f) {
  std::size_t l = f.left ? quantifier_rank(*f.left) : 0;
  std::size_t r = f.right ? quantifier_rank(*f.right) : 0;
  return std::max(l, r) + (f.is_quantifier() ? 1 : 0);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength; higher binds tighter.
int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    case Formula::Kind::Not: return 5;
    default: return 6;  // atoms, quantifiers print self-delimiting
  }
}

std::string term_text(const Term& t) {
  if (t.kind == Term::Kind::Lit) return to_string_sugared(t.value);
  return t.name;
}

void print(const Formula& f, std::string& out, int parent_prec) {
  const int prec = precedence(f.kind);
  switch (f.kind) {
    case Formula::Kind::Member:
      out += term_text(f.terms[0]);
      out += f.via ? " in_" + *f.via + " " : " in ";
      out += term_text(f.terms[1]);
      return;
    case Formula::Kind::Equal:
      out += term_text(f.terms[0]) + " = " + term_text(f.terms[1]);
      return;
    case Formula::Kind::Subset:
      out += term_text(f.terms[0]) + " sub " + term_text(f.terms[1]);
      return;
    case Formula::Kind::PairEq:
      out += term_text(f.terms[0]) + " = (" + term_text(f.terms[1]) + ", " +
             term_text(f.terms[2]) + ")";
      return;
    case Formula::Kind::Not:
      out += '!';
      if (f.left->kind == Formula::Kind::Not) {
        print(*f.left, out, prec);
      } else {
        out += '(';
        print(*f.left, out, 0);
        out += ')';
      }
      return;
    case Formula::Kind::ForAll:
    case Formula::Kind::Exists: {
      const bool parens = parent_prec > 0;
      if (parens) out += '(';
      out += f.kind == Formula::Kind::ForAll ? "forall " : "exists ";
      out += f.var;
      if (f.bound) out += " in " + term_text(*f.bound);
      out += ". ";
      print(*f.left, out, 0);
      if (parens) out += ')';
      return;
    }
    default: {
      const char* op = f.kind == Formula::Kind::And     ? " & "
                       : f.kind == Formula::Kind::Or    ? " | "
                       : f.kind == Formula::Kind::Implies ? " -> "
                                                          : " <-> ";
      const bool parens = prec < parent_prec || (prec == parent_prec);
      if (parens) out += '(';
      // For the right-associative -> keep the right child unparenthesized.
      print(*f.left, out, prec + (f.kind == Formula::Kind::Implies ? 0 : 0));
      out += op;
      print(*f.right, out, f.kind == Formula::Kind::Implies ? prec - 1 : prec);
      if (parens) out += ')';
      return;
    }
  }
}

}  // namespace

std::string to_text(const Formula& f) {
  std::string out;
  print(f, out, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  enum class Kind {
    Ident, Numeral, Literal,  // Literal carries a parsed HF set
    LParen, RParen, Comma, Dot, Semicolon,
    Bang, Amp, Pipe, Arrow, DArrow, Equals,
    End
  };
  Kind kind;
  std::string text;
  HfSet value;
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_ws();
    const std::size_t at = pos_;
    if (pos_ >= text_.size()) return {Token::Kind::End, "", {}, at};
    const char c = text_[pos_];
    if (c == '{') return lex_literal(at);
    if (std::isdigit(static_cast<unsigned char>(c))) return lex_numeral(at);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident(at);
    ++pos_;
    switch (c) {
      case '(': return {Token::Kind::LParen, "(", {}, at};
      case ')': return {Token::Kind::RParen, ")", {}, at};
      case ',': return {Token::Kind::Comma, ",", {}, at};
      case '.': return {Token::Kind::Dot, ".", {}, at};
      case ';': return {Token::Kind::Semicolon, ";", {}, at};
      case '!': return {Token::Kind::Bang, "!", {}, at};
      case '&': return {Token::Kind::Amp, "&", {}, at};
      case '|': return {Token::Kind::Pipe, "|", {}, at};
      case '=': return {Token::Kind::Equals, "=", {}, at};
      case '-':
        if (pos_ < text_.size() && text_[pos_] == '>') {
          ++pos_;
          return {Token::Kind::Arrow, "->", {}, at};
        }
        throw ParseError("stray '-'", at);
      case '<':
        if (pos_ + 1 < text_.size() && text_[pos_] == '-' && text_[pos_ + 1] == '>') {
          pos_ += 2;
          return {Token::Kind::DArrow, "<->", {}, at};
        }
        throw ParseError("stray '<'", at);
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", at);
    }
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Token lex_ident(std::size_t at) {
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_' ||
            text_[end] == '\'')) {
      ++end;
    }
    std::string word(text_.substr(pos_, end - pos_));
    pos_ = end;
    return {Token::Kind::Ident, std::move(word), {}, at};
  }

  Token lex_numeral(std::size_t at) {
    std::size_t end = pos_;
    std::size_t n = 0;
    while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) {
      n = n * 10 + static_cast<std::size_t>(text_[end] - '0');
      if (n > kDefaultCeiling) throw ParseError("numeral too large", at);
      ++end;
    }
    pos_ = end;
    return {Token::Kind::Numeral, std::string(text_.substr(at, end - at)), nat(n), at};
  }

  Token lex_literal(std::size_t at) {
    // Scan the balanced braces and reuse the set-literal parser.
    std::size_t depth = 0, end = pos_;
    while (end < text_.size()) {
      if (text_[end] == '{') ++depth;
      if (text_[end] == '}') {
        --depth;
        if (depth == 0) {
          ++end;
          break;
        }
      }
      ++end;
    }
    if (depth != 0) throw ParseError("unterminated set literal", at);
    HfSet v;
    try {
      v = parse_hf(text_.substr(pos_, end - pos_));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), at + e.offset());
    }
    pos_ = end;
    return {Token::Kind::Literal, std::string(text_.substr(at, end - at)), v, at};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class FormulaParser {
 public:
  FormulaParser(std::string_view text, std::set<std::string> constants)
      : lexer_(text), constants_(std::move(constants)) {
    advance();
  }

  ParsedFormula parse() {
    while (tok_.kind == Token::Kind::Ident && tok_.text == "const") parse_preamble();
    FormulaPtr f = parse_iff();
    expect(Token::Kind::End, "trailing input after formula");
    return {std::move(f), constants_};
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  void expect(Token::Kind k, const std::string& what) {
    if (tok_.kind != k) throw ParseError(what, tok_.offset);
  }

  void parse_preamble() {
    advance();  // const
    while (true) {
      expect(Token::Kind::Ident, "expected constant name");
      constants_.insert(tok_.text);
      advance();
      if (tok_.kind == Token::Kind::Comma) {
        advance();
        continue;
      }
      expect(Token::Kind::Semicolon, "expected ';' after constant declarations");
      advance();
      return;
    }
  }

  bool is_keyword(const std::string& w) const {
    return w == "forall" || w == "exists" || w == "in" || w == "sub" || w == "const";
  }

  FormulaPtr parse_iff() {
    FormulaPtr f = parse_implies();
    while (tok_.kind == Token::Kind::DArrow) {
      advance();
      f = f_iff(std::move(f), parse_implies());
    }
    return f;
  }

  FormulaPtr parse_implies() {
    FormulaPtr f = parse_or();
    if (tok_.kind == Token::Kind::Arrow) {
      advance();
      return f_implies(std::move(f), parse_implies());  // right-associative
    }
    return f;
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (tok_.kind == Token::Kind::Pipe) {
      advance();
      f = f_or(std::move(f), parse_and());
    }
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_unary();
    while (tok_.kind == Token::Kind::Amp) {
      advance();
      f = f_and(std::move(f), parse_unary());
    }
    return f;
  }

  FormulaPtr parse_unary() {
    if (tok_.kind == Token::Kind::Bang) {
      advance();
      return f_not(parse_unary());
    }
    if (tok_.kind == Token::Kind::Ident &&
        (tok_.text == "forall" || tok_.text == "exists")) {
      return parse_quantifier();
    }
    if (tok_.kind == Token::Kind::LParen) {
      advance();
      FormulaPtr f = parse_iff();
      expect(Token::Kind::RParen, "expected ')'");
      advance();
      return f;
    }
    return parse_atom();
  }

  FormulaPtr parse_quantifier() {
    const bool universal = tok_.text == "forall";
    advance();
    expect(Token::Kind::Ident, "expected quantified variable");
    if (is_keyword(tok_.text)) throw ParseError("expected quantified variable", tok_.offset);
    std::string var = tok_.text;
    advance();
    std::optional<Term> bound;
    if (tok_.kind == Token::Kind::Ident && tok_.text == "in") {
      advance();
      bound = parse_term();
    }
    if (tok_.kind == Token::Kind::Dot) advance();  // the dot is optional
    FormulaPtr body = parse_iff();
    if (universal) {
      return bound ? f_forall_in(std::move(var), std::move(*bound), std::move(body))
                   : f_forall(std::move(var), std::move(body));
    }
    return bound ? f_exists_in(std::move(var), std::move(*bound), std::move(body))
                 : f_exists(std::move(var), std::move(body));
  }

  Term parse_term() {
    if (tok_.kind == Token::Kind::Numeral || tok_.kind == Token::Kind::Literal) {
      Term t = Term::lit(tok_.value);
      advance();
      return t;
    }
    expect(Token::Kind::Ident, "expected term");
    if (is_keyword(tok_.text)) throw ParseError("expected term", tok_.offset);
    Term t = constants_.count(tok_.text) ? Term::cnst(tok_.text) : Term::var(tok_.text);
    advance();
    return t;
  }

  FormulaPtr parse_atom() {
    Term lhs = parse_term();
    if (tok_.kind == Token::Kind::Ident && tok_.text == "in") {
      advance();
      Term rhs = parse_term();
      return f_member(std::move(lhs), std::move(rhs));
    }
    if (tok_.kind == Token::Kind::Ident && tok_.text == "sub") {
      advance();
      Term rhs = parse_term();
      return f_subset(std::move(lhs), std::move(rhs));
    }
    if (tok_.kind == Token::Kind::Equals) {
      advance();
      if (tok_.kind == Token::Kind::LParen) {
        advance();
        Term x = parse_term();
        expect(Token::Kind::Comma, "expected ',' in pair");
        advance();
        Term y = parse_term();
        expect(Token::Kind::RParen, "expected ')' after pair");
        advance();
        return f_pair_eq(std::move(lhs), std::move(x), std::move(y));
      }
      Term rhs = parse_term();
      return f_equal(std::move(lhs), std::move(rhs));
    }
    throw ParseError("expected 'in', 'sub' or '=' after term", tok_.offset);
  }

  Lexer lexer_;
  Token tok_{Token::Kind::End, "", {}, 0};
  std::set<std::string> constants_;
};

}  // namespace

ParsedFormula parse_formula(std::string_view text,
                            const std::set<std::string>& extra_constants) {
  FormulaParser p(text, extra_constants);
  return p.parse();
}

}  // namespace mverse
