#pragma once

// Surface language: lcc sketches, telescope contexts and judgment blocks.
//
//   sketch S { obj A, B; arrow f : A -> B; eq f = g; mark tm (A); }
//   context G over S { x : A; p : Eq(x, x); }
//   judgment in G { check (fst (pair x x)) : A; eq s = t : A; norm t; }
//   use-model chain2;
//
// Comments run from `--` to the end of the line.  The grammar is LL(1) over
// the token stream; every diagnostic carries a source span.

#include "slcc/term.hpp"

#include <memory>
#include <optional>
#include <sstream>

namespace slcc {

struct Span {
  int line = 1, col = 1;
};

struct Diagnostic {
  enum Sev { Error, Warning, Note };
  Sev sev = Error;
  Span span;
  std::string message;
  std::string detail;  // optional engine trace or countermodel rendering
};

// ---------------------------------------------------------------------------
// AST

struct SType;
using STypePtr = std::shared_ptr<SType>;
struct STerm;
using STermPtr = std::shared_ptr<STerm>;

struct SType {
  enum K { Unit, Named, Prod, Eq, Sigma, Pi } k;
  Span span;
  std::string name;      // Named; binder for Sigma/Pi
  STypePtr l, r;         // Prod; Sigma/Pi: l = domain, r = body
  STermPtr t1, t2;       // Eq
};

struct STerm {
  enum K { Tt, Var, Pair, Fst, Snd, DPair, DFst, DSnd, Refl, App, Lam } k;
  Span span;
  std::string name;  // Var; Lam binder
  STermPtr a, b;     // children
  STypePtr ann;      // optional Lam binder annotation
};

struct SMorExpr {
  enum K { Gen, Id, Comp, Bang } k;
  Span span;
  std::string name;                  // Gen; Id/Bang object name ("" = Unit)
  std::shared_ptr<SMorExpr> g, f;    // Comp
};
using SMorPtr = std::shared_ptr<SMorExpr>;

struct SSketch {
  std::string name;
  Span span;
  std::vector<std::string> objs;
  struct Arrow {
    std::string name, dom, cod;  // "" encodes Unit
    Span span;
  };
  std::vector<Arrow> arrows;
  std::vector<std::pair<SMorPtr, SMorPtr>> eqs;
  struct Marking {
    Shape shape;
    std::vector<SMorPtr> parts;  // tm: one Id-wrapped object; pb: 4; pi: 6
    Span span;
  };
  std::vector<Marking> markings;
};

struct SContextDecl {
  std::string name, over;  // over == "" means the empty context
  Span span;
  std::vector<std::pair<std::string, STypePtr>> entries;
};

struct SJudgment {
  enum K { Check, EqJ, Norm } k;
  Span span;
  STermPtr t, u;
  STypePtr ty;
};

struct SJudgBlock {
  std::string ctx;
  Span span;
  std::vector<SJudgment> judgments;
};

struct SurfaceFile {
  std::vector<SSketch> sketches;
  std::vector<SContextDecl> contexts;
  std::vector<SJudgBlock> blocks;
  std::vector<std::string> models;
};

// ---------------------------------------------------------------------------
// Lexer

namespace surface_detail {

struct Token {
  enum K {
    Ident,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Colon,
    Comma,
    Star,
    Arrow,
    Equals,
    Dot,
    Lambda,
    End
  } k;
  std::string text;
  Span span;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) { next(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    next();
    return t;
  }

private:
  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;

  int cur() const { return pos_ < src_.size() ? static_cast<unsigned char>(src_[pos_]) : -1; }

  void advance() {
    if (cur() == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void next() {
    for (;;) {
      while (isspace(cur())) advance();
      if (cur() == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        while (cur() != -1 && cur() != '\n') advance();
        continue;
      }
      break;
    }
    Span sp{line_, col_};
    int c = cur();
    if (c == -1) {
      tok_ = {Token::End, "", sp};
      return;
    }
    if (isalpha(c) || c == '_') {
      std::string s;
      while (isalnum(cur()) || cur() == '_' || cur() == '\'' || cur() == '#') {
        s += static_cast<char>(cur());
        advance();
      }
      // the use-model directive keyword contains a hyphen
      if (s == "use" && cur() == '-') {
        advance();
        std::string s2;
        while (isalnum(cur()) || cur() == '_') {
          s2 += static_cast<char>(cur());
          advance();
        }
        s += "-" + s2;
      }
      tok_ = {Token::Ident, s, sp};
      return;
    }
    switch (c) {
      case '{': advance(); tok_ = {Token::LBrace, "{", sp}; return;
      case '}': advance(); tok_ = {Token::RBrace, "}", sp}; return;
      case '(': advance(); tok_ = {Token::LParen, "(", sp}; return;
      case ')': advance(); tok_ = {Token::RParen, ")", sp}; return;
      case ';': advance(); tok_ = {Token::Semi, ";", sp}; return;
      case ':': advance(); tok_ = {Token::Colon, ":", sp}; return;
      case ',': advance(); tok_ = {Token::Comma, ",", sp}; return;
      case '*': advance(); tok_ = {Token::Star, "*", sp}; return;
      case '=': advance(); tok_ = {Token::Equals, "=", sp}; return;
      case '.': advance(); tok_ = {Token::Dot, ".", sp}; return;
      case '\\': advance(); tok_ = {Token::Lambda, "\\", sp}; return;
      case '-':
        advance();
        if (cur() == '>') {
          advance();
          tok_ = {Token::Arrow, "->", sp};
          return;
        }
        fail(Err::SyntaxError, "stray '-' at line " + std::to_string(sp.line));
      default:
        fail(Err::SyntaxError, "unexpected character '" + std::string(1, static_cast<char>(c)) +
                                   "' at line " + std::to_string(sp.line) + ", column " +
                                   std::to_string(sp.col));
    }
  }
};

}  // namespace surface_detail

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
  explicit Parser(std::string_view src) : lx_(src) {}

  SurfaceFile file() {
    SurfaceFile f;
    while (peek().k != Tok::End) {
      if (at_ident("sketch")) {
        f.sketches.push_back(sketch());
      } else if (at_ident("context")) {
        f.contexts.push_back(context_decl());
      } else if (at_ident("judgment")) {
        f.blocks.push_back(judg_block());
      } else if (at_ident("use-model")) {
        take();
        f.models.push_back(expect_ident("model name"));
        expect(Tok::Semi, "';'");
      } else {
        err("expected sketch, context, judgment or use-model");
      }
    }
    return f;
  }

private:
  using Tok = surface_detail::Token;
  surface_detail::Lexer lx_;

  const Tok& peek() const { return lx_.peek(); }
  Tok take() { return lx_.take(); }
  bool at_ident(const std::string& s) const {
    return peek().k == Tok::Ident && peek().text == s;
  }
  [[noreturn]] void err(const std::string& what) const {
    fail(Err::SyntaxError, what + " at line " + std::to_string(peek().span.line) + ", column " +
                               std::to_string(peek().span.col) + " (found '" + peek().text + "')");
  }
  Tok expect(Tok::K k, const std::string& what) {
    if (peek().k != k) err("expected " + what);
    return take();
  }
  std::string expect_ident(const std::string& what) {
    if (peek().k != Tok::Ident) err("expected " + what);
    return take().text;
  }

  // ---- sketches ----

  SSketch sketch() {
    SSketch s;
    s.span = peek().span;
    take();  // sketch
    s.name = expect_ident("sketch name");
    expect(Tok::LBrace, "'{'");
    while (peek().k != Tok::RBrace) {
      if (at_ident("obj")) {
        take();
        s.objs.push_back(expect_ident("object name"));
        while (peek().k == Tok::Comma) {
          take();
          s.objs.push_back(expect_ident("object name"));
        }
        expect(Tok::Semi, "';'");
      } else if (at_ident("arrow")) {
        Span sp = take().span;
        std::string n = expect_ident("arrow name");
        expect(Tok::Colon, "':'");
        std::string d = obj_name();
        expect(Tok::Arrow, "'->'");
        std::string c = obj_name();
        expect(Tok::Semi, "';'");
        s.arrows.push_back({n, d, c, sp});
      } else if (at_ident("eq")) {
        take();
        SMorPtr l = morexpr();
        expect(Tok::Equals, "'='");
        SMorPtr r = morexpr();
        expect(Tok::Semi, "';'");
        s.eqs.emplace_back(l, r);
      } else if (at_ident("mark")) {
        Span sp = take().span;
        std::string sh = expect_ident("marking shape (tm, pb or pi)");
        Shape shape;
        size_t arity;
        if (sh == "tm") {
          shape = Shape::Tm;
          arity = 1;
        } else if (sh == "pb") {
          shape = Shape::Pb;
          arity = 4;
        } else if (sh == "pi") {
          shape = Shape::Pi;
          arity = 6;
        } else {
          err("expected tm, pb or pi");
        }
        expect(Tok::LParen, "'('");
        SSketch::Marking m{shape, {}, sp};
        m.parts.push_back(morexpr());
        while (peek().k == Tok::Comma) {
          take();
          m.parts.push_back(morexpr());
        }
        expect(Tok::RParen, "')'");
        expect(Tok::Semi, "';'");
        if (m.parts.size() != arity) err("marking arity mismatch");
        s.markings.push_back(std::move(m));
      } else {
        err("expected obj, arrow, eq or mark");
      }
    }
    take();  // }
    return s;
  }

  std::string obj_name() {
    if (at_ident("Unit")) {
      take();
      return "";
    }
    return expect_ident("object name or Unit");
  }

  SMorPtr morexpr() {
    SMorPtr l = moratom();
    while (peek().k == Tok::Dot) {
      take();
      SMorPtr r = moratom();
      auto c = std::make_shared<SMorExpr>();
      c->k = SMorExpr::Comp;
      c->span = l->span;
      c->g = l;
      c->f = r;
      l = c;
    }
    return l;
  }

  SMorPtr moratom() {
    auto m = std::make_shared<SMorExpr>();
    m->span = peek().span;
    if (peek().k == Tok::LParen) {
      take();
      SMorPtr inner = morexpr();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (at_ident("id") || at_ident("bang")) {
      m->k = at_ident("id") ? SMorExpr::Id : SMorExpr::Bang;
      take();
      expect(Tok::LParen, "'('");
      m->name = obj_name();
      expect(Tok::RParen, "')'");
      return m;
    }
    m->k = SMorExpr::Gen;
    m->name = expect_ident("morphism name");
    return m;
  }

  // ---- contexts ----

  SContextDecl context_decl() {
    SContextDecl c;
    c.span = peek().span;
    take();  // context
    c.name = expect_ident("context name");
    if (at_ident("over")) {
      take();
      c.over = expect_ident("sketch name");
    }
    expect(Tok::LBrace, "'{'");
    while (peek().k != Tok::RBrace) {
      std::string v = expect_ident("variable name");
      expect(Tok::Colon, "':'");
      STypePtr t = type();
      expect(Tok::Semi, "';'");
      c.entries.emplace_back(v, t);
    }
    take();
    return c;
  }

  // ---- judgments ----

  SJudgBlock judg_block() {
    SJudgBlock b;
    b.span = peek().span;
    take();  // judgment
    if (at_ident("in")) {
      take();
      b.ctx = expect_ident("context name");
    }
    expect(Tok::LBrace, "'{'");
    while (peek().k != Tok::RBrace) {
      SJudgment j;
      j.span = peek().span;
      if (at_ident("check")) {
        take();
        j.k = SJudgment::Check;
        j.t = term();
        expect(Tok::Colon, "':'");
        j.ty = type();
      } else if (at_ident("eq")) {
        take();
        j.k = SJudgment::EqJ;
        j.t = term();
        expect(Tok::Equals, "'='");
        j.u = term();
        expect(Tok::Colon, "':'");
        j.ty = type();
      } else if (at_ident("norm")) {
        take();
        j.k = SJudgment::Norm;
        j.t = term();
      } else {
        err("expected check, eq or norm");
      }
      expect(Tok::Semi, "';'");
      b.judgments.push_back(std::move(j));
    }
    take();
    return b;
  }

  // ---- types ----

  STypePtr type() {
    STypePtr l = type_atom();
    while (peek().k == Tok::Star) {
      Span sp = take().span;
      STypePtr r = type_atom();
      auto p = std::make_shared<SType>();
      p->k = SType::Prod;
      p->span = sp;
      p->l = l;
      p->r = r;
      l = p;
    }
    return l;
  }

  STypePtr type_atom() {
    auto t = std::make_shared<SType>();
    t->span = peek().span;
    if (peek().k == Tok::LParen) {
      take();
      STypePtr inner = type();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (at_ident("Unit")) {
      take();
      t->k = SType::Unit;
      return t;
    }
    if (at_ident("Eq")) {
      take();
      expect(Tok::LParen, "'('");
      t->k = SType::Eq;
      t->t1 = term();
      expect(Tok::Comma, "','");
      t->t2 = term();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (at_ident("Sigma") || at_ident("Pi")) {
      t->k = at_ident("Sigma") ? SType::Sigma : SType::Pi;
      take();
      expect(Tok::LParen, "'('");
      t->name = expect_ident("binder");
      expect(Tok::Colon, "':'");
      t->l = type();
      expect(Tok::RParen, "')'");
      t->r = type_atom();
      return t;
    }
    t->k = SType::Named;
    t->name = expect_ident("type name");
    return t;
  }

  // ---- terms ----

  STermPtr term() {
    if (peek().k == Tok::Lambda) {
      auto t = std::make_shared<STerm>();
      t->span = take().span;
      t->k = STerm::Lam;
      t->name = expect_ident("binder");
      if (peek().k == Tok::Colon) {
        take();
        t->ann = type();
      }
      expect(Tok::Dot, "'.'");
      t->a = term();
      return t;
    }
    return appterm();
  }

  STermPtr appterm() {
    static const std::map<std::string, std::pair<STerm::K, int>> builtins = {
        {"pair", {STerm::Pair, 2}}, {"fst", {STerm::Fst, 1}},   {"snd", {STerm::Snd, 1}},
        {"dpair", {STerm::DPair, 2}}, {"dfst", {STerm::DFst, 1}}, {"dsnd", {STerm::DSnd, 1}},
        {"refl", {STerm::Refl, 1}},  {"app", {STerm::App, 2}},
    };
    if (peek().k == Tok::Ident) {
      auto it = builtins.find(peek().text);
      if (it != builtins.end()) {
        auto t = std::make_shared<STerm>();
        t->span = take().span;
        t->k = it->second.first;
        t->a = atom();
        if (it->second.second == 2) t->b = atom();
        return t;
      }
    }
    return atom();
  }

  STermPtr atom() {
    auto t = std::make_shared<STerm>();
    t->span = peek().span;
    if (peek().k == Tok::LParen) {
      take();
      STermPtr inner = term();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (at_ident("tt")) {
      take();
      t->k = STerm::Tt;
      return t;
    }
    t->k = STerm::Var;
    t->name = expect_ident("term");
    return t;
  }
};

inline SurfaceFile parse(std::string_view src) { return Parser(src).file(); }

// ---------------------------------------------------------------------------
// Pretty-printer (parse o print is the identity on printed files)

inline std::string print(const SMorPtr& m) {
  switch (m->k) {
    case SMorExpr::Gen: return m->name;
    case SMorExpr::Id: return "id(" + (m->name.empty() ? std::string("Unit") : m->name) + ")";
    case SMorExpr::Bang: return "bang(" + (m->name.empty() ? std::string("Unit") : m->name) + ")";
    case SMorExpr::Comp: return print(m->g) + " . " + print(m->f);
  }
  return "?";
}

inline std::string print(const STermPtr& t);
inline std::string print(const STypePtr& t);

inline std::string print_atom(const STermPtr& t) {
  if (t->k == STerm::Tt || t->k == STerm::Var) return print(t);
  return "(" + print(t) + ")";
}

inline std::string print(const STermPtr& t) {
  switch (t->k) {
    case STerm::Tt: return "tt";
    case STerm::Var: return t->name;
    case STerm::Pair: return "pair " + print_atom(t->a) + " " + print_atom(t->b);
    case STerm::Fst: return "fst " + print_atom(t->a);
    case STerm::Snd: return "snd " + print_atom(t->a);
    case STerm::DPair: return "dpair " + print_atom(t->a) + " " + print_atom(t->b);
    case STerm::DFst: return "dfst " + print_atom(t->a);
    case STerm::DSnd: return "dsnd " + print_atom(t->a);
    case STerm::Refl: return "refl " + print_atom(t->a);
    case STerm::App: return "app " + print_atom(t->a) + " " + print_atom(t->b);
    case STerm::Lam:
      return "\\" + t->name + (t->ann ? " : " + print(t->ann) : std::string()) + ". " +
             print(t->a);
  }
  return "?";
}

inline std::string print(const STypePtr& t) {
  switch (t->k) {
    case SType::Unit: return "Unit";
    case SType::Named: return t->name;
    case SType::Prod: {
      std::string l = print(t->l);
      if (t->l->k == SType::Prod) l = "(" + l + ")";
      std::string r = print(t->r);
      if (t->r->k == SType::Prod) r = "(" + r + ")";
      return l + " * " + r;
    }
    case SType::Eq: return "Eq(" + print(t->t1) + ", " + print(t->t2) + ")";
    case SType::Sigma:
    case SType::Pi: {
      std::string head = t->k == SType::Sigma ? "Sigma" : "Pi";
      std::string body = print(t->r);
      if (t->r->k != SType::Unit && t->r->k != SType::Named && t->r->k != SType::Eq)
        body = "(" + body + ")";
      return head + "(" + t->name + " : " + print(t->l) + ") " + body;
    }
  }
  return "?";
}

inline std::string print(const SurfaceFile& f) {
  std::ostringstream os;
  for (const auto& s : f.sketches) {
    os << "sketch " << s.name << " {\n";
    for (const auto& o : s.objs) os << "  obj " << o << ";\n";
    for (const auto& a : s.arrows)
      os << "  arrow " << a.name << " : " << (a.dom.empty() ? "Unit" : a.dom) << " -> "
         << (a.cod.empty() ? "Unit" : a.cod) << ";\n";
    for (const auto& [l, r] : s.eqs) os << "  eq " << print(l) << " = " << print(r) << ";\n";
    for (const auto& m : s.markings) {
      os << "  mark " << (m.shape == Shape::Tm ? "tm" : m.shape == Shape::Pb ? "pb" : "pi")
         << " (";
      for (size_t i = 0; i < m.parts.size(); ++i) os << (i ? ", " : "") << print(m.parts[i]);
      os << ");\n";
    }
    os << "}\n";
  }
  for (const auto& c : f.contexts) {
    os << "context " << c.name;
    if (!c.over.empty()) os << " over " << c.over;
    os << " {\n";
    for (const auto& [v, t] : c.entries) os << "  " << v << " : " << print(t) << ";\n";
    os << "}\n";
  }
  for (const auto& b : f.blocks) {
    os << "judgment";
    if (!b.ctx.empty()) os << " in " << b.ctx;
    os << " {\n";
    for (const auto& j : b.judgments) {
      switch (j.k) {
        case SJudgment::Check:
          os << "  check " << print(j.t) << " : " << print(j.ty) << ";\n";
          break;
        case SJudgment::EqJ:
          os << "  eq " << print(j.t) << " = " << print(j.u) << " : " << print(j.ty) << ";\n";
          break;
        case SJudgment::Norm: os << "  norm " << print(j.t) << ";\n"; break;
      }
    }
    os << "}\n";
  }
  for (const auto& m : f.models) os << "use-model " << m << ";\n";
  return os.str();
}

}  // namespace slcc
