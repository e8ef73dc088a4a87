#include "causal/dsl.hpp"

#include <cctype>
#include <charconv>
#include <functional>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "causal/error.hpp"
#include "causal/transforms.hpp"

namespace causal {

namespace {

enum class Tok {
  Ident,
  Int,
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Semi,
  Colon,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Arrow,      // ->
  LeftArrow,  // <-
  And,
  Or,
  Bang,
  Plus,
  Minus,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Value value = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

const std::set<std::string, std::less<>> kKeywords = {"model",   "exogenous", "endogenous", "context",
                                                      "normality", "case",    "default"};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto is_ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      while (j < text.size() && text[j] == '\'') ++j;
      t.kind = Tok::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(text.substr(i, j - i));
      auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + j, t.value);
      if (ec != std::errc()) throw ParseError(line, col, "integer literal out of range");
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    auto two = [&](char a, char b) { return c == a && i + 1 < text.size() && text[i + 1] == b; };
    std::size_t len = 1;
    if (two('-', '>')) {
      t.kind = Tok::Arrow, len = 2;
    } else if (two('<', '-')) {
      t.kind = Tok::LeftArrow, len = 2;
    } else if (two('!', '=')) {
      t.kind = Tok::Ne, len = 2;
    } else if (two('<', '=')) {
      t.kind = Tok::Le, len = 2;
    } else if (two('>', '=')) {
      t.kind = Tok::Ge, len = 2;
    } else {
      switch (c) {
        case '{': t.kind = Tok::LBrace; break;
        case '}': t.kind = Tok::RBrace; break;
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case '[': t.kind = Tok::LBracket; break;
        case ']': t.kind = Tok::RBracket; break;
        case ',': t.kind = Tok::Comma; break;
        case ';': t.kind = Tok::Semi; break;
        case ':': t.kind = Tok::Colon; break;
        case '=': t.kind = Tok::Eq; break;
        case '<': t.kind = Tok::Lt; break;
        case '>': t.kind = Tok::Gt; break;
        case '&': t.kind = Tok::And; break;
        case '|': t.kind = Tok::Or; break;
        case '!': t.kind = Tok::Bang; break;
        case '+': t.kind = Tok::Plus; break;
        case '-': t.kind = Tok::Minus; break;
        default:
          throw ParseError(line, col, std::string("unexpected character '") + c + "'");
      }
    }
    t.text = std::string(text.substr(i, len));
    advance(len);
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

// Expression syntax tree with names still unresolved.
struct Raw {
  Expression::Op op = Expression::Op::Const;
  Value value = 0;
  std::string name;
  std::size_t line = 0, column = 0;
  std::vector<Raw> children;  // operands; for Case: guard, value, guard, value, ..., fallback
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_keyword(std::string_view kw) const { return at(Tok::Ident) && peek().text == kw; }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(peek().line, peek().column, msg); }

  const Token& expect(Tok k, std::string_view what) {
    if (!at(k)) fail("expected " + std::string(what) + ", found " + describe(peek()));
    return take();
  }
  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) fail("expected '" + std::string(kw) + "', found " + describe(peek()));
    take();
  }
  std::string name(std::string_view what) {
    if (at(Tok::Ident) && kKeywords.count(peek().text)) fail("'" + peek().text + "' is a reserved word");
    return expect(Tok::Ident, what).text;
  }
  Value integer() {
    bool neg = false;
    if (at(Tok::Minus)) {
      take();
      neg = true;
    }
    Value v = expect(Tok::Int, "an integer").value;
    return neg ? -v : v;
  }

  Raw expression() { return disjunction(); }

 private:
  Raw node(Expression::Op op, const Token& at_tok) {
    Raw r;
    r.op = op;
    r.line = at_tok.line;
    r.column = at_tok.column;
    return r;
  }

  Raw disjunction() {
    Raw lhs = conjunction();
    while (at(Tok::Or)) {
      Raw r = node(Expression::Op::Or, take());
      r.children = {std::move(lhs), conjunction()};
      lhs = std::move(r);
    }
    return lhs;
  }

  Raw conjunction() {
    Raw lhs = negation();
    while (at(Tok::And)) {
      Raw r = node(Expression::Op::And, take());
      r.children = {std::move(lhs), negation()};
      lhs = std::move(r);
    }
    return lhs;
  }

  Raw negation() {
    if (at(Tok::Bang)) {
      Raw r = node(Expression::Op::Not, take());
      r.children = {negation()};
      return r;
    }
    return comparison();
  }

  Raw comparison() {
    Raw lhs = additive();
    while (true) {
      Expression::Op op;
      switch (peek().kind) {
        case Tok::Eq: op = Expression::Op::Eq; break;
        case Tok::Ne: op = Expression::Op::Ne; break;
        case Tok::Lt: op = Expression::Op::Lt; break;
        case Tok::Le: op = Expression::Op::Le; break;
        case Tok::Gt: op = Expression::Op::Gt; break;
        case Tok::Ge: op = Expression::Op::Ge; break;
        default: return lhs;
      }
      Raw r = node(op, take());
      r.children = {std::move(lhs), additive()};
      lhs = std::move(r);
    }
  }

  Raw additive() {
    Raw lhs = atom();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      const Expression::Op op = at(Tok::Plus) ? Expression::Op::Add : Expression::Op::Sub;
      Raw r = node(op, take());
      r.children = {std::move(lhs), atom()};
      lhs = std::move(r);
    }
    return lhs;
  }

  Raw atom() {
    const Token& t = peek();
    if (t.kind == Tok::Int || (t.kind == Tok::Minus && peek(1).kind == Tok::Int)) {
      Raw r = node(Expression::Op::Const, t);
      r.value = integer();
      return r;
    }
    if (t.kind == Tok::LParen) {
      take();
      Raw inner = expression();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind == Tok::Ident && t.text == "case") return case_expression();
    if (t.kind == Tok::Ident && !kKeywords.count(t.text)) {
      Raw r = node(Expression::Op::Var, take());
      r.name = t.text;
      return r;
    }
    fail("expected an expression, found " + describe(t));
  }

  Raw case_expression() {
    Raw r = node(Expression::Op::Case, take());
    expect(Tok::LBrace, "'{'");
    while (true) {
      if (at_keyword("default")) {
        take();
        expect(Tok::Arrow, "'->'");
        r.children.push_back(expression());
        if (at(Tok::Semi)) take();
        expect(Tok::RBrace, "'}' after the default arm");
        return r;
      }
      Raw guard = expression();
      expect(Tok::Arrow, "'->'");
      Raw value = expression();
      expect(Tok::Semi, "';' between case arms");
      r.children.push_back(std::move(guard));
      r.children.push_back(std::move(value));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

Range parse_range(Parser& p) {
  const Token& open = p.expect(Tok::LBrace, "'{' starting a range");
  std::vector<Value> values;
  while (true) {
    values.push_back(p.integer());
    if (p.at(Tok::Comma)) {
      p.take();
      continue;
    }
    p.expect(Tok::RBrace, "',' or '}' in a range");
    break;
  }
  try {
    return Range::of(values);
  } catch (const InvalidModel&) {
    throw ParseError(open.line, open.column, "range values must be distinct and listed in increasing order");
  }
}

using Resolver = std::function<VarRef(const Raw&)>;

Expression resolve(const Raw& r, const Resolver& lookup) {
  using Op = Expression::Op;
  switch (r.op) {
    case Op::Const:
      return Expression::constant(r.value);
    case Op::Var:
      return Expression::var(lookup(r));
    case Op::Not:
      return Expression::logical_not(resolve(r.children[0], lookup));
    case Op::Case: {
      std::vector<Expression::CaseArm> arms;
      for (std::size_t i = 0; i + 1 < r.children.size(); i += 2) {
        arms.push_back({resolve(r.children[i], lookup), resolve(r.children[i + 1], lookup)});
      }
      return Expression::cases(std::move(arms), resolve(r.children.back(), lookup));
    }
    default:
      return Expression::binary(r.op, resolve(r.children[0], lookup), resolve(r.children[1], lookup));
  }
}

struct RawNormality {
  NormalitySpec::Kind kind = NormalitySpec::Kind::Ranks;
  std::string context;
  std::vector<std::string> vars;
  std::vector<std::pair<Raw, Raw>> rules;
  Raw fallback;
  bool has_fallback = false;
};

}  // namespace

const Context& ModelDocument::context(std::string_view wanted) const {
  for (const auto& [n, ctx] : contexts) {
    if (n == wanted) return ctx;
  }
  throw UnknownContext(std::string(wanted));
}

ExtendedCausalModel ModelDocument::extended() const {
  if (!normality) return {model, NormalityOrder::flat()};
  const NormalitySpec& spec = *normality;
  if (spec.kind == NormalitySpec::Kind::RespectEquations) {
    std::vector<VarIndex> vars;
    for (const std::string& v : spec.variables) vars.push_back(model.signature().endogenous_index(v));
    return {model, normality_from_respect(model, context(spec.context), vars)};
  }
  Expression rank = spec.rules.empty() ? spec.fallback : Expression::cases(spec.rules, spec.fallback);
  return {model, NormalityOrder::ranked([rank](const World& w) -> long { return rank.eval({}, w.values); })};
}

ModelDocument parse_model(std::string_view text) {
  Parser p(tokenize(text));
  p.expect_keyword("model");
  std::string model_name = p.name("a model name");

  struct EndoDecl {
    VariableDecl decl;
    Raw equation;
  };
  std::vector<VariableDecl> exo;
  std::vector<EndoDecl> endo;
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, Value>>>> raw_contexts;
  std::optional<RawNormality> raw_norm;
  std::set<std::string> var_names, context_names;

  auto declare = [&](const std::string& n) {
    if (!var_names.insert(n).second) throw DuplicateDefinition(n);
  };

  while (!p.at(Tok::End)) {
    if (p.at_keyword("exogenous")) {
      p.take();
      std::vector<std::string> names{p.name("a variable name")};
      while (p.at(Tok::Comma)) {
        p.take();
        names.push_back(p.name("a variable name"));
      }
      p.expect(Tok::Colon, "':'");
      Range r = parse_range(p);
      for (auto& n : names) {
        declare(n);
        exo.push_back({n, r});
      }
    } else if (p.at_keyword("endogenous")) {
      p.take();
      std::string n = p.name("a variable name");
      p.expect(Tok::Colon, "':'");
      Range r = parse_range(p);
      p.expect(Tok::Eq, "'=' before the equation");
      Raw eq = p.expression();
      declare(n);
      endo.push_back({{n, r}, std::move(eq)});
    } else if (p.at_keyword("context")) {
      p.take();
      std::string n = p.name("a context name");
      if (!context_names.insert(n).second) throw DuplicateDefinition(n);
      p.expect(Tok::LBrace, "'{'");
      std::vector<std::pair<std::string, Value>> values;
      while (!p.at(Tok::RBrace)) {
        std::string var = p.name("a variable name");
        p.expect(Tok::Eq, "'='");
        values.emplace_back(var, p.integer());
        if (!p.at(Tok::Comma)) break;
        p.take();
      }
      p.expect(Tok::RBrace, "'}'");
      raw_contexts.emplace_back(std::move(n), std::move(values));
    } else if (p.at_keyword("normality")) {
      if (raw_norm) p.fail("only one normality block is allowed");
      p.take();
      RawNormality rn;
      if (p.at_keyword("respect_equations")) {
        p.take();
        rn.kind = NormalitySpec::Kind::RespectEquations;
        p.expect(Tok::LParen, "'('");
        rn.context = p.name("a context name");
        p.expect(Tok::RParen, "')'");
        p.expect(Tok::LBrace, "'{'");
        while (!p.at(Tok::RBrace)) {
          rn.vars.push_back(p.name("a variable name"));
          if (!p.at(Tok::Comma)) break;
          p.take();
        }
        p.expect(Tok::RBrace, "'}'");
      } else if (p.at_keyword("ranks")) {
        p.take();
        rn.kind = NormalitySpec::Kind::Ranks;
        p.expect(Tok::LBrace, "'{'");
        while (true) {
          if (p.at_keyword("default")) {
            p.take();
            p.expect(Tok::Arrow, "'->'");
            rn.fallback = p.expression();
            rn.has_fallback = true;
            if (p.at(Tok::Semi)) p.take();
            p.expect(Tok::RBrace, "'}' after the default rule");
            break;
          }
          Raw guard = p.expression();
          p.expect(Tok::Arrow, "'->'");
          Raw rank = p.expression();
          p.expect(Tok::Semi, "';' between rank rules");
          rn.rules.emplace_back(std::move(guard), std::move(rank));
        }
      } else {
        p.fail("expected 'ranks' or 'respect_equations', found " + describe(p.peek()));
      }
      raw_norm = std::move(rn);
    } else {
      p.fail("expected a declaration, found " + describe(p.peek()));
    }
  }

  std::vector<VariableDecl> endo_decls;
  for (const auto& e : endo) endo_decls.push_back(e.decl);
  Signature sig(exo, endo_decls);

  auto lookup_any = [&](const Raw& r) {
    if (auto i = sig.find_endogenous(r.name)) return VarRef::endogenous(*i);
    if (auto i = sig.find_exogenous(r.name)) return VarRef::exogenous(*i);
    throw UnknownVariable(r.name);
  };
  std::vector<Expression> equations;
  for (const auto& e : endo) equations.push_back(resolve(e.equation, lookup_any));

  ModelDocument doc{std::move(model_name), CausalModel::create(sig, std::move(equations)), {}, std::nullopt};
  for (auto& [n, values] : raw_contexts) {
    Context ctx = doc.model.context_from(values);
    doc.contexts.emplace_back(n, std::move(ctx));
  }
  if (raw_norm) {
    NormalitySpec spec;
    spec.kind = raw_norm->kind;
    if (spec.kind == NormalitySpec::Kind::RespectEquations) {
      doc.context(raw_norm->context);
      for (const auto& v : raw_norm->vars) sig.endogenous_index(v);
      spec.context = raw_norm->context;
      spec.variables = raw_norm->vars;
    } else {
      auto lookup_endo = [&](const Raw& r) {
        if (sig.find_exogenous(r.name)) {
          throw ParseError(r.line, r.column, "rank rules may only mention endogenous variables");
        }
        return VarRef::endogenous(sig.endogenous_index(r.name));
      };
      for (const auto& [g, v] : raw_norm->rules) spec.rules.push_back({resolve(g, lookup_endo), resolve(v, lookup_endo)});
      spec.fallback = raw_norm->has_fallback ? resolve(raw_norm->fallback, lookup_endo) : Expression::constant(0);
    }
    doc.normality = std::move(spec);
  }
  return doc;
}

ModelDocument load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

namespace {

int precedence(Expression::Op op) {
  using Op = Expression::Op;
  switch (op) {
    case Op::Or:
      return 1;
    case Op::And:
      return 2;
    case Op::Not:
      return 3;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
      return 4;
    case Op::Add:
    case Op::Sub:
      return 5;
    default:
      return 6;
  }
}

std::string_view symbol(Expression::Op op) {
  using Op = Expression::Op;
  switch (op) {
    case Op::Or: return " | ";
    case Op::And: return " & ";
    case Op::Eq: return " = ";
    case Op::Ne: return " != ";
    case Op::Lt: return " < ";
    case Op::Le: return " <= ";
    case Op::Gt: return " > ";
    case Op::Ge: return " >= ";
    case Op::Add: return " + ";
    case Op::Sub: return " - ";
    default: return " ? ";
  }
}

void print_expr(std::ostream& os, const Expression& e, const Signature& sig, int min_prec) {
  using Op = Expression::Op;
  const int prec = precedence(e.op());
  const bool parens = prec < min_prec;
  if (parens) os << '(';
  switch (e.op()) {
    case Op::Const:
      os << e.constant_value();
      break;
    case Op::Var:
      os << sig.name_of(e.var_ref());
      break;
    case Op::Not:
      os << '!';
      print_expr(os, e.operand(), sig, prec);
      break;
    case Op::Case:
      os << "case { ";
      for (const auto& arm : e.arms()) {
        print_expr(os, arm.guard, sig, 0);
        os << " -> ";
        print_expr(os, arm.value, sig, 0);
        os << "; ";
      }
      os << "default -> ";
      print_expr(os, e.fallback(), sig, 0);
      os << " }";
      break;
    default:
      print_expr(os, e.lhs(), sig, prec);
      os << symbol(e.op());
      print_expr(os, e.rhs(), sig, prec + 1);
      break;
  }
  if (parens) os << ')';
}

std::string range_text(const Range& r) {
  std::string s = "{";
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(r.values()[i]);
  }
  return s + "}";
}

}  // namespace

std::string format_expression(const Expression& e, const Signature& sig) {
  std::ostringstream os;
  print_expr(os, e, sig, 0);
  return os.str();
}

std::string print_model(const ModelDocument& doc) {
  const Signature& sig = doc.model.signature();
  std::ostringstream os;
  os << "model " << doc.name << "\n";
  for (const std::string& note : doc.model.notes()) os << "# " << note << "\n";
  os << "\n";
  for (const VariableDecl& d : sig.exogenous()) os << "exogenous " << d.name << ": " << range_text(d.range) << "\n";
  if (!sig.exogenous().empty()) os << "\n";
  for (VarIndex v = 0; v < sig.endogenous_count(); ++v) {
    const VariableDecl& d = sig.endogenous()[v];
    os << "endogenous " << d.name << ": " << range_text(d.range) << " = "
       << format_expression(doc.model.equation(v), sig) << "\n";
  }
  if (!doc.contexts.empty()) os << "\n";
  for (const auto& [n, ctx] : doc.contexts) {
    os << "context " << n << " { ";
    for (VarIndex i = 0; i < ctx.values.size(); ++i) {
      if (i) os << ", ";
      os << sig.exogenous()[i].name << " = " << ctx.values[i];
    }
    os << " }\n";
  }
  if (doc.normality) {
    const NormalitySpec& spec = *doc.normality;
    os << "\n";
    if (spec.kind == NormalitySpec::Kind::RespectEquations) {
      os << "normality respect_equations(" << spec.context << ") { ";
      for (std::size_t i = 0; i < spec.variables.size(); ++i) {
        if (i) os << ", ";
        os << spec.variables[i];
      }
      os << " }\n";
    } else {
      os << "normality ranks {\n";
      for (const auto& rule : spec.rules) {
        os << "  " << format_expression(rule.guard, sig) << " -> " << format_expression(rule.value, sig) << ";\n";
      }
      os << "  default -> " << format_expression(spec.fallback, sig) << "\n}\n";
    }
  }
  return os.str();
}

namespace {

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const CausalModel& model) : p_(tokenize(text)), model_(model) {}

  CausalFormula parse() {
    CausalFormula f = disjunction();
    if (!p_.at(Tok::End)) p_.fail("unexpected " + describe(p_.peek()));
    f.validate(model_);
    return f;
  }

  Parser& tokens() { return p_; }

  Setting event_setting(Tok& relation) {
    const Token& t = p_.expect(Tok::Ident, "a variable");
    VarIndex v = variable(t);
    if (!p_.at(Tok::Eq) && !p_.at(Tok::Ne)) p_.fail("expected '=' or '!=', found " + describe(p_.peek()));
    relation = p_.take().kind;
    return {v, p_.integer()};
  }

 private:
  VarIndex variable(const Token& t) {
    const Signature& sig = model_.signature();
    if (sig.find_exogenous(t.text)) {
      throw MalformedFormula("'" + t.text + "' is exogenous; formulas may only mention endogenous variables");
    }
    return sig.endogenous_index(t.text);
  }

  CausalFormula disjunction() {
    CausalFormula lhs = conjunction();
    while (p_.at(Tok::Or)) {
      p_.take();
      lhs = CausalFormula::disjunction(std::move(lhs), conjunction());
    }
    return lhs;
  }

  CausalFormula conjunction() {
    CausalFormula lhs = unary();
    while (p_.at(Tok::And)) {
      p_.take();
      lhs = CausalFormula::conjunction(std::move(lhs), unary());
    }
    return lhs;
  }

  CausalFormula unary() {
    if (p_.at(Tok::Bang)) {
      p_.take();
      return CausalFormula::negation(unary());
    }
    if (p_.at(Tok::LBracket)) {
      p_.take();
      std::vector<Setting> settings;
      while (!p_.at(Tok::RBracket)) {
        const Token& t = p_.expect(Tok::Ident, "a variable");
        VarIndex v = variable(t);
        p_.expect(Tok::LeftArrow, "'<-'");
        settings.push_back({v, p_.integer()});
        if (!p_.at(Tok::Comma)) break;
        p_.take();
      }
      p_.expect(Tok::RBracket, "']'");
      Intervention iv(std::move(settings));
      return CausalFormula::held(std::move(iv), unary());
    }
    if (p_.at(Tok::LParen)) {
      p_.take();
      CausalFormula inner = disjunction();
      p_.expect(Tok::RParen, "')'");
      return inner;
    }
    Tok relation = Tok::Eq;
    Setting s = event_setting(relation);
    CausalFormula e = CausalFormula::event(s.var, s.value);
    return relation == Tok::Ne ? CausalFormula::negation(std::move(e)) : e;
  }

  Parser p_;
  const CausalModel& model_;
};

void print_formula(std::ostream& os, const CausalFormula& f, const Signature& sig, int min_prec) {
  using K = CausalFormula::Kind;
  const int prec = f.kind() == K::Or ? 1 : f.kind() == K::And ? 2 : 3;
  const bool parens = prec < min_prec;
  if (parens) os << '(';
  switch (f.kind()) {
    case K::Event:
      os << sig.endogenous_name(f.event_setting().var) << "=" << f.event_setting().value;
      break;
    case K::Not:
      os << '!';
      print_formula(os, f.operand(), sig, 3);
      break;
    case K::And:
    case K::Or:
      print_formula(os, f.lhs(), sig, prec);
      os << (f.kind() == K::And ? " & " : " | ");
      print_formula(os, f.rhs(), sig, prec + 1);
      break;
    case K::Held: {
      os << '[';
      const auto& settings = f.intervention().settings();
      for (std::size_t i = 0; i < settings.size(); ++i) {
        if (i) os << ", ";
        os << sig.endogenous_name(settings[i].var) << "<-" << settings[i].value;
      }
      os << "](";
      print_formula(os, f.operand(), sig, 0);
      os << ')';
      break;
    }
  }
  if (parens) os << ')';
}

}  // namespace

CausalFormula parse_formula(std::string_view text, const CausalModel& model) {
  return FormulaParser(text, model).parse();
}

std::string format_formula(const CausalFormula& f, const Signature& sig) {
  std::ostringstream os;
  print_formula(os, f, sig, 0);
  return os.str();
}

CandidateCause parse_cause(std::string_view text, const CausalModel& model) {
  FormulaParser fp(text, model);
  Parser& p = fp.tokens();
  std::vector<Setting> conjuncts;
  while (true) {
    Tok relation = Tok::Eq;
    conjuncts.push_back(fp.event_setting(relation));
    if (relation != Tok::Eq) throw MalformedFormula("a cause is a conjunction of X=x events");
    if (p.at(Tok::End)) break;
    if (!p.at(Tok::And)) p.fail("expected '&' or end of cause, found " + describe(p.peek()));
    p.take();
  }
  CandidateCause c = CandidateCause::of(std::move(conjuncts));
  for (const Setting& s : c.conjuncts) {
    if (!model.signature().endogenous_range(s.var).contains(s.value)) {
      throw ValueOutOfRange("value " + std::to_string(s.value) + " is outside the range of '" +
                            model.signature().endogenous_name(s.var) + "'");
    }
  }
  return c;
}

std::string format_settings(std::span<const Setting> settings, const Signature& sig) {
  std::string out;
  for (std::size_t i = 0; i < settings.size(); ++i) {
    if (i) out += " & ";
    out += sig.endogenous_name(settings[i].var) + "=" + std::to_string(settings[i].value);
  }
  return out;
}

std::string format_cause(const CandidateCause& c, const Signature& sig) { return format_settings(c.conjuncts, sig); }

}  // namespace causal
