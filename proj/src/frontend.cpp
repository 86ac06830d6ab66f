#include "loopinvar/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "loopinvar/errors.hpp"

namespace loopinvar {

ExprPtr make_num(const Rational& v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Num;
  e->num = v;
  return e;
}

ExprPtr make_sym(const std::string& s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Sym;
  e->sym = s;
  return e;
}

namespace {

ExprPtr make_binary(Expr::Kind k, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

}  // namespace

ExprPtr make_add(ExprPtr a, ExprPtr b) {
  return make_binary(Expr::Kind::Add, std::move(a), std::move(b));
}
ExprPtr make_sub(ExprPtr a, ExprPtr b) {
  return make_binary(Expr::Kind::Sub, std::move(a), std::move(b));
}
ExprPtr make_mul(ExprPtr a, ExprPtr b) {
  return make_binary(Expr::Kind::Mul, std::move(a), std::move(b));
}

ExprPtr make_neg(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Neg;
  e->a = std::move(a);
  return e;
}

ExprPtr make_pow(ExprPtr a, unsigned ex) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Pow;
  e->a = std::move(a);
  e->exp = ex;
  return e;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Num:
      return a->num == b->num;
    case Expr::Kind::Sym:
      return a->sym == b->sym;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Mul:
      return expr_equal(a->a, b->a) && expr_equal(a->b, b->b);
    case Expr::Kind::Neg:
      return expr_equal(a->a, b->a);
    case Expr::Kind::Pow:
      return a->exp == b->exp && expr_equal(a->a, b->a);
  }
  return false;
}

std::optional<Rational> expr_const_value(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Num:
      return e->num;
    case Expr::Kind::Sym:
      return std::nullopt;
    case Expr::Kind::Add: {
      auto a = expr_const_value(e->a);
      auto b = expr_const_value(e->b);
      if (a && b) return *a + *b;
      return std::nullopt;
    }
    case Expr::Kind::Sub: {
      auto a = expr_const_value(e->a);
      auto b = expr_const_value(e->b);
      if (a && b) return *a - *b;
      return std::nullopt;
    }
    case Expr::Kind::Mul: {
      auto a = expr_const_value(e->a);
      auto b = expr_const_value(e->b);
      if (a && b) return *a * *b;
      return std::nullopt;
    }
    case Expr::Kind::Neg: {
      auto a = expr_const_value(e->a);
      if (a) return Rational(-*a);
      return std::nullopt;
    }
    case Expr::Kind::Pow: {
      auto a = expr_const_value(e->a);
      if (a) return pow_rational(*a, e->exp);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum class Kind {
    Newline,
    Ident,
    Keyword,
    Number,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Equals,
    Plus,
    Minus,
    Star,
    Caret,
    End
  };
  Kind kind = Kind::End;
  std::string text;
  Rational value;
  int line = 1;
  int col = 1;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "params", "while", "true",   "end",    "choose",  "if",
      "then",   "else",  "Bernoulli", "Normal", "Uniform"};
  return kw;
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto push = [&](Token::Kind k, int l, int c) {
    Token t;
    t.kind = k;
    t.line = l;
    t.col = c;
    out.push_back(std::move(t));
  };
  while (i < src.size()) {
    char ch = src[i];
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') {
        ++i;
        ++col;
      }
      continue;
    }
    if (ch == '\n') {
      push(Token::Kind::Newline, line, col);
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++i;
      ++col;
      continue;
    }
    int tl = line;
    int tc = col;
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string text;
      bool decimal = false;
      auto digits = [&]() {
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
          text += src[i];
          ++i;
          ++col;
        }
      };
      digits();
      if (i + 1 < src.size() && src[i] == '.' &&
          std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
        decimal = true;
        text += '.';
        ++i;
        ++col;
        digits();
      }
      if (!decimal && i + 1 < src.size() && src[i] == '/' &&
          std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
        text += '/';
        ++i;
        ++col;
        digits();
      }
      auto v = parse_rational(text);
      if (!v) throw ParseError("malformed number '" + text + "'", tl, tc);
      Token t;
      t.kind = Token::Kind::Number;
      t.text = text;
      t.value = *v;
      t.line = tl;
      t.col = tc;
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string text;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) ||
                                src[i] == '_')) {
        text += src[i];
        ++i;
        ++col;
      }
      Token t;
      t.kind = keywords().count(text) ? Token::Kind::Keyword : Token::Kind::Ident;
      t.text = text;
      t.line = tl;
      t.col = tc;
      out.push_back(std::move(t));
      continue;
    }
    Token::Kind k;
    switch (ch) {
      case '(': k = Token::Kind::LParen; break;
      case ')': k = Token::Kind::RParen; break;
      case '{': k = Token::Kind::LBrace; break;
      case '}': k = Token::Kind::RBrace; break;
      case ',': k = Token::Kind::Comma; break;
      case ':': k = Token::Kind::Colon; break;
      case '=': k = Token::Kind::Equals; break;
      case '+': k = Token::Kind::Plus; break;
      case '-': k = Token::Kind::Minus; break;
      case '*': k = Token::Kind::Star; break;
      case '^': k = Token::Kind::Caret; break;
      default:
        throw ParseError(std::string("unexpected character '") + ch + "'", tl, tc);
    }
    push(k, tl, tc);
    ++i;
    ++col;
  }
  push(Token::Kind::End, line, col);
  return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program parse() {
    Program p;
    skip_newlines();
    if (at_keyword("params")) {
      advance();
      p.params.push_back(expect_ident("parameter name"));
      while (at(Token::Kind::Comma)) {
        advance();
        p.params.push_back(expect_ident("parameter name"));
      }
      end_of_line();
    }
    skip_newlines();
    while (!at_keyword("while")) {
      if (at(Token::Kind::End))
        throw err("expected 'while' loop before end of input");
      p.inits.push_back(parse_simple_stmt());
      end_of_line();
      skip_newlines();
    }
    advance();  // while
    if (at_keyword("true") || at(Token::Kind::Star)) {
      advance();
    } else {
      throw err("expected 'true' or '*' after 'while'");
    }
    expect(Token::Kind::Colon, "':' after loop header");
    end_of_line();
    p.body = parse_block([&] { return at_keyword("end"); });
    advance();  // end
    skip_newlines();
    if (!at(Token::Kind::End)) throw err("unexpected content after 'end'");
    return p;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& peek2() const {
    return toks_[std::min(pos_ + 1, toks_.size() - 1)];
  }
  bool at(Token::Kind k) const { return peek().kind == k; }
  bool at_keyword(const std::string& kw) const {
    return peek().kind == Token::Kind::Keyword && peek().text == kw;
  }
  bool at_dist() const {
    return at_keyword("Bernoulli") || at_keyword("Normal") || at_keyword("Uniform");
  }
  const Token& advance() { return toks_[pos_++]; }
  ParseError err(const std::string& msg) const {
    return ParseError(msg, peek().line, peek().col);
  }
  void expect(Token::Kind k, const std::string& what) {
    if (!at(k)) throw err("expected " + what);
    advance();
  }
  std::string expect_ident(const std::string& what) {
    if (!at(Token::Kind::Ident)) throw err("expected " + what);
    return advance().text;
  }
  void skip_newlines() {
    while (at(Token::Kind::Newline)) advance();
  }
  /// A statement must end the line (or the input/brace).
  void end_of_line() {
    if (at(Token::Kind::End) || at(Token::Kind::RBrace)) return;
    if (!at(Token::Kind::Newline)) throw err("expected end of line");
    advance();
  }

  std::vector<Stmt> parse_block(const std::function<bool()>& stop) {
    std::vector<Stmt> out;
    while (true) {
      skip_newlines();
      if (stop()) break;
      if (at(Token::Kind::End)) throw err("unexpected end of input inside block");
      out.push_back(parse_stmt());
      if (!stop()) end_of_line();
    }
    if (out.empty()) throw err("empty statement block");
    return out;
  }

  Stmt parse_stmt() {
    if (at_keyword("choose")) return parse_choose();
    if (at_keyword("if")) return parse_if();
    return parse_simple_stmt();
  }

  Stmt parse_choose() {
    advance();  // choose
    Stmt s;
    s.kind = Stmt::Kind::Choice;
    while (true) {
      expect(Token::Kind::LBrace, "'{' opening a choice branch");
      if (!at(Token::Kind::Number)) throw err("expected a branch probability");
      Rational prob = advance().value;
      expect(Token::Kind::Colon, "':' after the branch probability");
      std::vector<Stmt> branch =
          parse_block([&] { return at(Token::Kind::RBrace); });
      expect(Token::Kind::RBrace, "'}' closing the choice branch");
      s.branches.emplace_back(prob, std::move(branch));
      std::size_t save = pos_;
      skip_newlines();
      if (at(Token::Kind::LBrace)) continue;
      pos_ = save;
      break;
    }
    return s;
  }

  Stmt parse_if() {
    advance();  // if
    Stmt s;
    s.kind = Stmt::Kind::If;
    s.cond_var = expect_ident("a variable after 'if'");
    expect(Token::Kind::Equals, "'=' in the if condition");
    if (!at(Token::Kind::Number)) throw err("expected an integer in the if condition");
    const Token& num = advance();
    if (!is_integer(num.value))
      throw ParseError("if compares against an integer", num.line, num.col);
    s.cond_value = static_cast<long>(num.value.get_num().get_si());
    if (!at_keyword("then")) throw err("expected 'then'");
    advance();
    end_of_line();
    s.then_body = parse_block([&] { return at_keyword("else") || at_keyword("end"); });
    if (at_keyword("else")) {
      advance();
      end_of_line();
      s.else_body = parse_block([&] { return at_keyword("end"); });
    }
    if (!at_keyword("end")) throw err("expected 'end' closing the if");
    advance();
    return s;
  }

  /// Assignment or draw (the statement forms allowed before the loop).
  Stmt parse_simple_stmt() {
    Stmt s;
    if (at(Token::Kind::LParen)) {
      advance();
      s.targets.push_back(expect_ident("a variable name"));
      expect(Token::Kind::Comma, "',' in the tuple of targets");
      s.targets.push_back(expect_ident("a variable name"));
      while (at(Token::Kind::Comma)) {
        advance();
        s.targets.push_back(expect_ident("a variable name"));
      }
      expect(Token::Kind::RParen, "')' closing the tuple of targets");
    } else {
      s.targets.push_back(expect_ident("a variable name"));
    }
    expect(Token::Kind::Equals, "'='");

    if (s.targets.size() == 1 && at_dist()) return parse_draw(s.targets[0]);

    s.kind = Stmt::Kind::Assign;
    s.rhs.push_back(parse_rhs());
    while (at(Token::Kind::Comma)) {
      advance();
      s.rhs.push_back(parse_rhs());
    }
    if (s.rhs.size() != s.targets.size())
      throw err("expected " + std::to_string(s.targets.size()) +
                " right-hand sides, found " + std::to_string(s.rhs.size()));
    return s;
  }

  Stmt parse_draw(const std::string& target) {
    Stmt s;
    s.kind = Stmt::Kind::Draw;
    s.targets.push_back(target);
    const Token& kw = advance();
    std::size_t arity;
    if (kw.text == "Bernoulli") {
      s.dist = DistKind::Bernoulli;
      arity = 1;
    } else if (kw.text == "Normal") {
      s.dist = DistKind::Normal;
      arity = 2;
    } else {
      s.dist = DistKind::Uniform;
      arity = 2;
    }
    expect(Token::Kind::LParen, "'(' after the distribution name");
    s.args.push_back(parse_expr());
    while (at(Token::Kind::Comma)) {
      advance();
      s.args.push_back(parse_expr());
    }
    expect(Token::Kind::RParen, "')' closing the distribution arguments");
    if (s.args.size() != arity)
      throw ParseError(kw.text + " expects " + std::to_string(arity) +
                           (arity == 1 ? " argument" : " arguments") + ", found " +
                           std::to_string(s.args.size()),
                       kw.line, kw.col);
    return s;
  }

  RhsExpr parse_rhs() {
    RhsExpr r;
    r.main = parse_expr();
    if (at(Token::Kind::LBrace)) {
      advance();
      if (!at(Token::Kind::Number)) throw err("expected a probability");
      r.prob = advance().value;
      expect(Token::Kind::RBrace, "'}' after the probability");
      r.alt = parse_expr();
    }
    return r;
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (at(Token::Kind::Plus) || at(Token::Kind::Minus)) {
      bool plus = at(Token::Kind::Plus);
      advance();
      ExprPtr r = parse_term();
      e = plus ? make_add(std::move(e), std::move(r))
               : make_sub(std::move(e), std::move(r));
    }
    return e;
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (at(Token::Kind::Star)) {
      advance();
      e = make_mul(std::move(e), parse_factor());
    }
    return e;
  }

  ExprPtr parse_factor() {
    if (at(Token::Kind::Minus)) {
      advance();
      return make_neg(parse_factor());
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (at(Token::Kind::Caret)) {
      advance();
      if (!at(Token::Kind::Number)) throw err("expected a numeric exponent");
      const Token& t = advance();
      if (!is_integer(t.value) || t.value < 0)
        throw ParseError("exponent must be a nonnegative integer", t.line, t.col);
      unsigned long e = t.value.get_num().get_ui();
      base = make_pow(std::move(base), static_cast<unsigned>(e));
    }
    return base;
  }

  ExprPtr parse_primary() {
    if (at(Token::Kind::Number)) return make_num(advance().value);
    if (at(Token::Kind::Ident)) {
      const Token& t = advance();
      if (at(Token::Kind::LParen))
        throw ParseError("function calls are not part of the language ('" +
                             t.text + "(...)')",
                         t.line, t.col);
      return make_sym(t.text);
    }
    if (at_dist())
      throw err("a distribution draw cannot appear inside an expression");
    if (at(Token::Kind::LParen)) {
      advance();
      ExprPtr e = parse_expr();
      expect(Token::Kind::RParen, "')'");
      return e;
    }
    throw err("expected a number, a variable, or a parenthesized expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

void walk_stmts(const std::vector<Stmt>& stmts,
                const std::function<void(const Stmt&)>& fn) {
  for (const auto& s : stmts) {
    fn(s);
    for (const auto& [p, branch] : s.branches) walk_stmts(branch, fn);
    walk_stmts(s.then_body, fn);
    walk_stmts(s.else_body, fn);
  }
}

void walk_exprs(const Stmt& s, const std::function<void(const ExprPtr&)>& fn) {
  for (const auto& r : s.rhs) {
    fn(r.main);
    if (r.has_choice()) fn(r.alt);
  }
  for (const auto& a : s.args) fn(a);
}

void collect_syms(const ExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  if (e->kind == Expr::Kind::Sym) out.insert(e->sym);
  collect_syms(e->a, out);
  collect_syms(e->b, out);
}

void collect_vars(const std::vector<Stmt>& stmts, std::vector<std::string>& order,
                  std::set<std::string>& seen) {
  for (const auto& s : stmts) {
    for (const auto& t : s.targets) {
      if (seen.insert(t).second) order.push_back(t);
    }
    for (const auto& [p, branch] : s.branches) collect_vars(branch, order, seen);
    collect_vars(s.then_body, order, seen);
    collect_vars(s.else_body, order, seen);
  }
}

bool stmts_probabilistic(const std::vector<Stmt>& stmts) {
  bool prob = false;
  walk_stmts(stmts, [&](const Stmt& s) {
    if (s.kind != Stmt::Kind::Assign) prob = true;
    for (const auto& r : s.rhs)
      if (r.has_choice()) prob = true;
  });
  return prob;
}

/// Sets of variables assigned along each execution path of the list.
std::vector<std::set<std::string>> assigned_per_path(const std::vector<Stmt>& stmts) {
  std::vector<std::set<std::string>> acc = {{}};
  for (const auto& s : stmts) {
    std::vector<std::set<std::string>> here;
    switch (s.kind) {
      case Stmt::Kind::Assign:
      case Stmt::Kind::Draw:
        here.push_back({s.targets.begin(), s.targets.end()});
        break;
      case Stmt::Kind::Choice:
        for (const auto& [p, branch] : s.branches)
          for (auto& set : assigned_per_path(branch)) here.push_back(std::move(set));
        break;
      case Stmt::Kind::If: {
        for (auto& set : assigned_per_path(s.then_body)) here.push_back(std::move(set));
        if (s.else_body.empty()) {
          here.push_back({});
        } else {
          for (auto& set : assigned_per_path(s.else_body))
            here.push_back(std::move(set));
        }
        break;
      }
    }
    std::vector<std::set<std::string>> next;
    for (const auto& left : acc) {
      for (const auto& right : here) {
        std::set<std::string> merged = left;
        for (const auto& v : right) {
          if (!merged.insert(v).second)
            throw ValidationError("variable '" + v +
                                  "' is assigned twice on one path of a "
                                  "probabilistic body");
        }
        next.push_back(std::move(merged));
      }
    }
    acc = std::move(next);
  }
  return acc;
}

void validate(Program& p) {
  // Parameters: distinct, and disjoint from the assigned variables.
  std::set<std::string> params(p.params.begin(), p.params.end());
  if (params.size() != p.params.size())
    throw ValidationError("duplicate parameter name");

  std::vector<std::string> order;
  std::set<std::string> seen;
  collect_vars(p.inits, order, seen);
  collect_vars(p.body, order, seen);
  p.vars = order;
  p.var_index.clear();
  for (std::size_t i = 0; i < order.size(); ++i) p.var_index[order[i]] = i;
  for (const auto& v : order)
    if (params.count(v))
      throw ValidationError("'" + v + "' is declared a parameter but assigned");

  if (p.body.empty()) throw ValidationError("empty loop body");

  // Symbol resolution and per-statement structural checks.
  auto check_stmt = [&](const Stmt& s) {
    std::set<std::string> tset(s.targets.begin(), s.targets.end());
    if (tset.size() != s.targets.size())
      throw ValidationError("duplicate target in a tuple assignment");
    walk_exprs(s, [&](const ExprPtr& e) {
      std::set<std::string> syms;
      collect_syms(e, syms);
      for (const auto& name : syms)
        if (!params.count(name) && !seen.count(name))
          throw ValidationError("unknown symbol '" + name + "'");
    });
    for (const auto& r : s.rhs) {
      if (r.has_choice() && (*r.prob < 0 || *r.prob > 1))
        throw ValidationError("inline choice probability outside [0, 1]");
    }
    if (s.kind == Stmt::Kind::Choice) {
      Rational total(0);
      for (const auto& [prob, branch] : s.branches) {
        if (prob < 0 || prob > 1)
          throw ValidationError("choice probability outside [0, 1]");
        total += prob;
      }
      if (total != 1) throw ValidationError("choice probabilities must sum to 1");
    }
    if (s.kind == Stmt::Kind::Draw) {
      auto constant = [&](std::size_t i) { return expr_const_value(s.args[i]); };
      if (s.dist == DistKind::Bernoulli) {
        auto v = constant(0);
        if (v && (*v < 0 || *v > 1))
          throw ValidationError("Bernoulli parameter outside [0, 1]");
      } else if (s.dist == DistKind::Uniform) {
        auto lo = constant(0);
        auto hi = constant(1);
        if (lo && hi && !(*lo < *hi))
          throw ValidationError("Uniform requires lo < hi");
      } else {
        auto var = constant(1);
        if (var && *var < 0)
          throw ValidationError("Normal requires a nonnegative variance");
      }
    }
    if (s.kind == Stmt::Kind::If) {
      if (!seen.count(s.cond_var))
        throw ValidationError("if condition on unknown variable '" + s.cond_var + "'");
    }
  };
  walk_stmts(p.inits, check_stmt);
  walk_stmts(p.body, check_stmt);

  // Initialization section: assignments and draws only.
  for (const auto& s : p.inits)
    if (s.kind != Stmt::Kind::Assign && s.kind != Stmt::Kind::Draw)
      throw ValidationError("only assignments and draws may precede the loop");

  p.probabilistic = stmts_probabilistic(p.inits) || stmts_probabilistic(p.body);

  // A probabilistic body writes each variable at most once per path.
  if (p.probabilistic) assigned_per_path(p.body);
}

}  // namespace

Program parse_program(const std::string& source) {
  Parser parser(lex(source));
  Program p = parser.parse();
  validate(p);
  return p;
}

// ---------------------------------------------------------------------------
// Desugaring
// ---------------------------------------------------------------------------

namespace {

/// Expands inline choices of one assignment into explicit branches,
/// first right-hand side varying slowest.
std::vector<std::pair<Rational, std::vector<ExprPtr>>> expand_inline(
    const Stmt& s) {
  std::vector<std::pair<Rational, std::vector<ExprPtr>>> acc = {
      {Rational(1), {}}};
  for (const auto& r : s.rhs) {
    std::vector<std::pair<Rational, std::vector<ExprPtr>>> next;
    for (const auto& [prob, exprs] : acc) {
      if (r.has_choice()) {
        auto with_main = exprs;
        with_main.push_back(r.main);
        next.emplace_back(prob * *r.prob, std::move(with_main));
        auto with_alt = exprs;
        with_alt.push_back(r.alt);
        next.emplace_back(prob * (Rational(1) - *r.prob), std::move(with_alt));
      } else {
        auto with_main = exprs;
        with_main.push_back(r.main);
        next.emplace_back(prob, std::move(with_main));
      }
    }
    acc = std::move(next);
  }
  return acc;
}

struct DrawInfo {
  DistKind dist = DistKind::Bernoulli;
  std::optional<Rational> bernoulli_p;
};

std::vector<Stmt> desugar_stmts(const std::vector<Stmt>& in) {
  std::vector<Stmt> out;
  // Bernoulli draws seen so far in this list, for if conditions.
  std::map<std::string, DrawInfo> draws;
  for (const auto& s : in) {
    switch (s.kind) {
      case Stmt::Kind::Draw: {
        DrawInfo info;
        info.dist = s.dist;
        if (s.dist == DistKind::Bernoulli) info.bernoulli_p = expr_const_value(s.args[0]);
        draws[s.targets[0]] = info;
        out.push_back(s);
        break;
      }
      case Stmt::Kind::Assign: {
        bool any = false;
        for (const auto& r : s.rhs) any = any || r.has_choice();
        if (!any) {
          out.push_back(s);
          break;
        }
        Stmt c;
        c.kind = Stmt::Kind::Choice;
        for (auto& [prob, exprs] : expand_inline(s)) {
          Stmt plain;
          plain.kind = Stmt::Kind::Assign;
          plain.targets = s.targets;
          for (auto& e : exprs) plain.rhs.push_back(RhsExpr{std::move(e), {}, {}});
          c.branches.emplace_back(prob, std::vector<Stmt>{std::move(plain)});
        }
        out.push_back(std::move(c));
        break;
      }
      case Stmt::Kind::Choice: {
        Stmt c;
        c.kind = Stmt::Kind::Choice;
        for (const auto& [prob, branch] : s.branches)
          c.branches.emplace_back(prob, desugar_stmts(branch));
        out.push_back(std::move(c));
        break;
      }
      case Stmt::Kind::If: {
        auto it = draws.find(s.cond_var);
        if (it == draws.end() || it->second.dist != DistKind::Bernoulli)
          throw DesugarError("if condition on '" + s.cond_var +
                             "' requires an earlier Bernoulli draw of it in the "
                             "same block");
        if (!it->second.bernoulli_p)
          throw DesugarError(
              "the Bernoulli parameter of the flag '" + s.cond_var +
              "' must be a rational constant to branch on it");
        if (s.cond_value != 0 && s.cond_value != 1)
          throw DesugarError("if compares a Bernoulli flag against 0 or 1");
        Rational p = *it->second.bernoulli_p;
        std::vector<Stmt> then_d = desugar_stmts(s.then_body);
        // A missing alternative is the empty (identity) branch.
        std::vector<Stmt> else_d =
            s.else_body.empty() ? std::vector<Stmt>{} : desugar_stmts(s.else_body);
        Stmt c;
        c.kind = Stmt::Kind::Choice;
        // The flag equals 1 with probability p.
        Rational p_then = s.cond_value == 1 ? p : Rational(1) - p;
        c.branches.emplace_back(p_then, std::move(then_d));
        c.branches.emplace_back(Rational(1) - p_then, std::move(else_d));
        out.push_back(std::move(c));
        break;
      }
    }
  }
  return out;
}

}  // namespace

Program desugar(const Program& p) {
  // Every variable branched on must be a write-only flag: branch selection
  // and value are correlated, and reads elsewhere would lose that
  // correlation once the if becomes a weighted choice.
  std::map<std::string, int> if_counts;
  walk_stmts(p.body, [&](const Stmt& s) {
    if (s.kind == Stmt::Kind::If) ++if_counts[s.cond_var];
  });
  walk_stmts(p.inits, [&](const Stmt& s) {
    if (s.kind == Stmt::Kind::If) ++if_counts[s.cond_var];
  });
  if (!if_counts.empty()) {
    std::set<std::string> read;
    auto note_reads = [&](const Stmt& s) {
      walk_exprs(s, [&](const ExprPtr& e) { collect_syms(e, read); });
    };
    walk_stmts(p.inits, note_reads);
    walk_stmts(p.body, note_reads);
    for (const auto& [v, count] : if_counts) {
      if (count > 1)
        throw DesugarError("the flag '" + v + "' controls more than one if");
      if (read.count(v))
        throw DesugarError("the flag '" + v +
                           "' is read outside its if condition; the branch "
                           "correlation cannot be preserved");
    }
  }

  Program q = p;
  q.inits = desugar_stmts(p.inits);
  q.body = desugar_stmts(p.body);

  // Idempotence guard: a desugared program has no ifs and no inline
  // choices, so a second pass is the identity.
  walk_stmts(q.body, [](const Stmt& s) {
    if (s.kind == Stmt::Kind::If)
      throw DesugarError("internal: if survived desugaring");
  });
  return q;
}

// ---------------------------------------------------------------------------
// Pretty-printing
// ---------------------------------------------------------------------------

namespace {

/// Node precedence levels: additive 1, negation 2, multiplicative 3,
/// power 4, atoms 5. A node is parenthesized when its level is below the
/// context's minimum, which is exactly what makes the output re-parse to
/// the same tree under left associativity.
int expr_level(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Neg:
      return 2;
    case Expr::Kind::Mul:
      return 3;
    case Expr::Kind::Pow:
      return 4;
    case Expr::Kind::Num:
      return e.num < 0 ? 2 : 5;
    case Expr::Kind::Sym:
      return 5;
  }
  return 5;
}

std::string render_expr(const ExprPtr& e, int min_level) {
  std::string body;
  switch (e->kind) {
    case Expr::Kind::Num:
      if (e->num < 0) {
        body = "-" + to_string(Rational(-e->num));
      } else {
        body = to_string(e->num);
      }
      break;
    case Expr::Kind::Sym:
      body = e->sym;
      break;
    case Expr::Kind::Add:
      body = render_expr(e->a, 1) + " + " + render_expr(e->b, 2);
      break;
    case Expr::Kind::Sub:
      body = render_expr(e->a, 1) + " - " + render_expr(e->b, 2);
      break;
    case Expr::Kind::Mul:
      body = render_expr(e->a, 3) + "*" + render_expr(e->b, 4);
      break;
    case Expr::Kind::Neg:
      body = "-" + render_expr(e->a, 4);
      break;
    case Expr::Kind::Pow:
      body = render_expr(e->a, 5) + "^" + std::to_string(e->exp);
      break;
  }
  if (expr_level(*e) < min_level) return "(" + body + ")";
  return body;
}

const char* dist_name(DistKind d) {
  switch (d) {
    case DistKind::Bernoulli: return "Bernoulli";
    case DistKind::Normal: return "Normal";
    case DistKind::Uniform: return "Uniform";
  }
  return "?";
}

void print_stmts(std::string& out, const std::vector<Stmt>& stmts, int indent);

void print_stmt(std::string& out, const Stmt& s, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  switch (s.kind) {
    case Stmt::Kind::Assign: {
      out += pad;
      if (s.targets.size() == 1) {
        out += s.targets[0];
      } else {
        out += "(";
        for (std::size_t i = 0; i < s.targets.size(); ++i) {
          if (i) out += ", ";
          out += s.targets[i];
        }
        out += ")";
      }
      out += " = ";
      for (std::size_t i = 0; i < s.rhs.size(); ++i) {
        if (i) out += ", ";
        out += render_expr(s.rhs[i].main, 0);
        if (s.rhs[i].has_choice()) {
          out += " {" + to_string(*s.rhs[i].prob) + "} ";
          out += render_expr(s.rhs[i].alt, 0);
        }
      }
      out += "\n";
      break;
    }
    case Stmt::Kind::Draw: {
      out += pad + s.targets[0] + " = " + dist_name(s.dist) + "(";
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        if (i) out += ", ";
        out += render_expr(s.args[i], 0);
      }
      out += ")\n";
      break;
    }
    case Stmt::Kind::Choice: {
      out += pad + "choose";
      for (const auto& [prob, branch] : s.branches) {
        out += " {" + to_string(prob) + ":\n";
        print_stmts(out, branch, indent + 2);
        out += pad + "}";
      }
      out += "\n";
      break;
    }
    case Stmt::Kind::If: {
      out += pad + "if " + s.cond_var + " = " + std::to_string(s.cond_value) +
             " then\n";
      print_stmts(out, s.then_body, indent + 2);
      if (!s.else_body.empty()) {
        out += pad + "else\n";
        print_stmts(out, s.else_body, indent + 2);
      }
      out += pad + "end\n";
      break;
    }
  }
}

void print_stmts(std::string& out, const std::vector<Stmt>& stmts, int indent) {
  for (const auto& s : stmts) print_stmt(out, s, indent);
}

}  // namespace

std::string expr_to_string(const ExprPtr& e) { return render_expr(e, 0); }

std::string pretty_print(const Program& p) {
  std::string out;
  if (!p.params.empty()) {
    out += "params ";
    for (std::size_t i = 0; i < p.params.size(); ++i) {
      if (i) out += ", ";
      out += p.params[i];
    }
    out += "\n";
  }
  print_stmts(out, p.inits, 0);
  out += "while true:\n";
  print_stmts(out, p.body, 2);
  out += "end\n";
  return out;
}

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

bool stmt_equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind) return false;
  if (a.targets != b.targets) return false;
  if (a.rhs.size() != b.rhs.size()) return false;
  for (std::size_t i = 0; i < a.rhs.size(); ++i) {
    if (!expr_equal(a.rhs[i].main, b.rhs[i].main)) return false;
    if (a.rhs[i].prob != b.rhs[i].prob) return false;
    if (a.rhs[i].has_choice() && !expr_equal(a.rhs[i].alt, b.rhs[i].alt))
      return false;
  }
  if (a.kind == Stmt::Kind::Draw) {
    if (a.dist != b.dist || a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (!expr_equal(a.args[i], b.args[i])) return false;
  }
  if (a.branches.size() != b.branches.size()) return false;
  for (std::size_t i = 0; i < a.branches.size(); ++i) {
    if (a.branches[i].first != b.branches[i].first) return false;
    if (a.branches[i].second.size() != b.branches[i].second.size()) return false;
    for (std::size_t j = 0; j < a.branches[i].second.size(); ++j)
      if (!stmt_equal(a.branches[i].second[j], b.branches[i].second[j]))
        return false;
  }
  if (a.cond_var != b.cond_var || a.cond_value != b.cond_value) return false;
  auto blocks_equal = [](const std::vector<Stmt>& x, const std::vector<Stmt>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!stmt_equal(x[i], y[i])) return false;
    return true;
  };
  return blocks_equal(a.then_body, b.then_body) &&
         blocks_equal(a.else_body, b.else_body);
}

bool program_equal(const Program& a, const Program& b) {
  if (a.params != b.params || a.vars != b.vars ||
      a.probabilistic != b.probabilistic)
    return false;
  auto blocks_equal = [](const std::vector<Stmt>& x, const std::vector<Stmt>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!stmt_equal(x[i], y[i])) return false;
    return true;
  };
  return blocks_equal(a.inits, b.inits) && blocks_equal(a.body, b.body);
}

// ---------------------------------------------------------------------------
// Lowering
// ---------------------------------------------------------------------------

Polynomial lower_expr(const ExprPtr& e, const Program& p) {
  std::size_t n = p.vars.size();
  switch (e->kind) {
    case Expr::Kind::Num:
      return Polynomial::constant(n, Scalar(e->num));
    case Expr::Kind::Sym: {
      auto it = p.var_index.find(e->sym);
      if (it != p.var_index.end()) return Polynomial::variable(n, it->second);
      return Polynomial::constant(n, Scalar::param(e->sym));
    }
    case Expr::Kind::Add:
      return lower_expr(e->a, p) + lower_expr(e->b, p);
    case Expr::Kind::Sub:
      return lower_expr(e->a, p) - lower_expr(e->b, p);
    case Expr::Kind::Mul:
      return lower_expr(e->a, p) * lower_expr(e->b, p);
    case Expr::Kind::Neg:
      return -lower_expr(e->a, p);
    case Expr::Kind::Pow:
      return lower_expr(e->a, p).pow(e->exp);
  }
  throw Error("lower_expr: unreachable");
}

}  // namespace loopinvar
