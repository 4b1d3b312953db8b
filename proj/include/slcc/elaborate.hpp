#pragma once

// Elaboration of surface files into the cwf: telescopes become iterated
// extensions, surface types map onto the formers, and each judgment yields a
// pass/fail verdict with a certificate.  The engine's Unknown is a distinct
// outcome, never silently treated as failure or success.

#include "slcc/cwf.hpp"
#include "slcc/json_io.hpp"
#include "slcc/surface.hpp"

namespace slcc {

struct ElabOptions {
  long long budget = 10000;
  bool trace = false;
  std::vector<const FinStrictLcc*> models;
};

struct ElabResult {
  bool failed = false;
  bool unknown = false;
  std::vector<Diagnostic> diags;
  std::vector<std::string> output;

  int exit_code() const { return failed ? 1 : unknown ? 2 : 0; }
};

class Elaborator {
public:
  explicit Elaborator(ElabOptions opt) : opt_(std::move(opt)) {}

  ElabResult run(const SurfaceFile& f) {
    for (const auto& m : f.models) {
      const FinStrictLcc* M = builtin_model(m);
      if (!M) {
        diag(Span{}, "unknown model '" + m + "'");
        continue;
      }
      opt_.models.push_back(M);
    }
    for (const auto& s : f.sketches) elaborate_sketch(s);
    for (const auto& c : f.contexts) elaborate_context(c);
    for (const auto& b : f.blocks) elaborate_block(b);
    return std::move(res_);
  }

  const std::map<std::string, PresPtr>& sketch_map() const { return sketches_; }

  std::map<std::string, Context> context_map() const {
    std::map<std::string, Context> r;
    for (const auto& [n, e] : contexts_) r.emplace(n, e.ctx);
    return r;
  }

private:
  struct Binding {
    std::string name;
    Tm tm;
    Ty ty;
  };
  struct ElabCtx {
    Context ctx;
    std::vector<Binding> scope;
    PresPtr sketch;
  };
  struct DepInfo {
    Obj sigma;
    Obj tau;     // over the binding extension
    Name binder;
  };

  ElabOptions opt_;
  ElabResult res_;
  std::map<std::string, PresPtr> sketches_;
  std::map<std::string, ElabCtx> contexts_;
  std::map<uint32_t, DepInfo> pi_reg_, sigma_reg_;

  void diag(Span sp, const std::string& msg, const std::string& detail = "") {
    res_.failed = true;
    res_.diags.push_back(Diagnostic{Diagnostic::Error, sp, msg, detail});
  }
  void note(const std::string& line) { res_.output.push_back(line); }

  EqOptions eq_options(const ElabCtx& e) const {
    EqOptions o;
    o.budget = opt_.budget;
    o.state = e.ctx.eq.get();
    o.models = opt_.models;
    o.want_trace = opt_.trace;
    return o;
  }

  // ---- sketches ----

  Obj sketch_obj(const std::string& n, Span sp) {
    if (n.empty()) return obj_one();
    return obj_gen(n);
  }

  Mor elaborate_morexpr(const SMorPtr& m) {
    switch (m->k) {
      case SMorExpr::Gen: return mor_gen(m->name);
      case SMorExpr::Id: return mor_id(sketch_obj(m->name, m->span));
      case SMorExpr::Bang: return bang(sketch_obj(m->name, m->span));
      case SMorExpr::Comp:
        return comp(elaborate_morexpr(m->g), elaborate_morexpr(m->f));
    }
    fail(Err::SyntaxError, "morphism expression");
  }

  void elaborate_sketch(const SSketch& s) {
    try {
      std::vector<ArrowDecl> arrows;
      for (const auto& a : s.arrows)
        arrows.push_back({a.name, sketch_obj(a.dom, a.span), sketch_obj(a.cod, a.span)});
      std::vector<std::pair<Mor, Mor>> eqs;
      for (const auto& [l, r] : s.eqs)
        eqs.emplace_back(elaborate_morexpr(l), elaborate_morexpr(r));
      std::vector<MarkId> marks;
      for (const auto& m : s.markings) {
        std::vector<Mor> ps;
        for (const auto& p : m.parts) ps.push_back(elaborate_morexpr(p));
        switch (m.shape) {
          case Shape::Tm: {
            // a tm marking names an object through an identity expression
            Mor p0 = ps.at(0);
            MorNode pn = node(p0);
            Obj t = pn.k == MorK::Id ? pn.a : obj_gen(print(m.parts.at(0)));
            marks.push_back(mk_tm_marking(t));
            break;
          }
          case Shape::Pb: marks.push_back(mk_pb_marking(ps[0], ps[1], ps[2], ps[3])); break;
          case Shape::Pi:
            marks.push_back(mk_pi_marking(ps[0], ps[1], ps[2], ps[3], ps[4], ps[5]));
            break;
        }
      }
      sketches_[s.name] = mk_presentation(s.objs, arrows, eqs, marks);
    } catch (const Error& e) {
      diag(s.span, "in sketch " + s.name + ": " + e.what());
    }
  }

  // ---- contexts ----

  void elaborate_context(const SContextDecl& c) {
    try {
      ElabCtx e;
      if (!c.over.empty()) {
        auto it = sketches_.find(c.over);
        if (it == sketches_.end()) {
          diag(c.span, "unknown sketch '" + c.over + "'");
          return;
        }
        e.sketch = it->second;
        e.ctx = free_context(it->second);
      } else {
        e.ctx = empty_context();
      }
      for (const auto& [v, tty] : c.entries) {
        Ty ty = elaborate_type(e, tty);
        Extension ext = extend(e.ctx, ty);
        // terms and facts of the smaller context remain valid verbatim
        e.ctx = ext.ctx;
        e.scope.push_back(Binding{v, ext.var, ty});
        reflect_if_equality(e, ty, ext.var);
      }
      contexts_[c.name] = std::move(e);
    } catch (const Error& err) {
      diag(c.span, "in context " + c.name + ": " + err.what());
    }
  }

  // extending by an equality type reflects the equation into the context
  void reflect_if_equality(ElabCtx& e, Ty ty, Tm witness) {
    ObjNode n = node(nf(ty, e.ctx.P()));
    if (n.k != ObjK::Pb) return;
    Bound b1 = infer(n.m1, e.ctx.P());
    Bound b2 = infer(n.m2, e.ctx.P());
    if (nf(b1.dom, e.ctx.P()) != obj_one() || nf(b2.dom, e.ctx.P()) != obj_one()) return;
    if (n.m1 == n.m2) return;
    register_fact(*e.ctx.eq, e.ctx.P(), n.m1, n.m2);
    (void)witness;
  }

  // ---- types ----

  Ty elaborate_type(ElabCtx& e, const STypePtr& t) {
    switch (t->k) {
      case SType::Unit: return obj_one();
      case SType::Named: {
        Obj o = obj_gen(t->name);
        if (!e.ctx.P().has_obj_gen(store().name(t->name)))
          fail(Err::ScopeError, "unknown type '" + t->name + "'");
        return o;
      }
      case SType::Prod: {
        Ty l = elaborate_type(e, t->l);
        Ty r = elaborate_type(e, t->r);
        return prod_ty(e.ctx, l, r);
      }
      case SType::Eq: {
        auto [a, sa] = infer_term(e, t->t1);
        auto [b, sb] = infer_term(e, t->t2);
        if (nf(sa, e.ctx.P()) != nf(sb, e.ctx.P()))
          fail(Err::TypeMismatch, "Eq sides have different types");
        return eq_ty(e.ctx, sa, a, b);
      }
      case SType::Sigma:
      case SType::Pi: {
        Ty sigma = elaborate_type(e, t->l);
        Extension ext = extend(e.ctx, sigma);
        ElabCtx inner = e;
        inner.ctx = ext.ctx;
        inner.scope.push_back(Binding{t->name, ext.var, sigma});
        Ty tau = elaborate_type(inner, t->r);
        DepTy d = t->k == SType::Sigma ? sigma_ty(e.ctx, ext, tau) : pi_ty(e.ctx, ext, tau);
        auto& reg = t->k == SType::Sigma ? sigma_reg_ : pi_reg_;
        reg[d.ty.id] = DepInfo{nf(sigma, e.ctx.P()), nf(tau, ext.ctx.P()), ext.vname};
        return d.ty;
      }
    }
    fail(Err::SyntaxError, "type");
  }

  // rebuild the binding extension of a registered Sigma/Pi type in the
  // current context, renaming the binder
  std::pair<Extension, Ty> rebuild(ElabCtx& e, const DepInfo& info) {
    Extension ext = extend(e.ctx, info.sigma);
    Subst rename = identity_subst(ext.ctx.pres);
    rename.mmap[info.binder] = ext.var;
    // the renaming reads terms of the original binding extension; its source
    // generators are a subset of the rebuilt context's plus the old binder
    Ty tau = apply(rename, info.tau);
    return {std::move(ext), tau};
  }

  // ---- terms ----

  std::pair<Tm, Ty> infer_term(ElabCtx& e, const STermPtr& t) {
    switch (t->k) {
      case STerm::Tt: return {mor_id(obj_one()), obj_one()};
      case STerm::Var: {
        for (auto it = e.scope.rbegin(); it != e.scope.rend(); ++it)
          if (it->name == t->name) return {it->tm, it->ty};
        // constants: sketch arrows out of Unit are sections
        if (const MorGenInfo* gi = e.ctx.P().mor_gen(store().name(t->name))) {
          if (nf(gi->dom, e.ctx.P()) == obj_one()) return {mor_gen(t->name), gi->cod};
        }
        fail(Err::ScopeError, "unbound variable '" + t->name + "'");
      }
      case STerm::Pair: {
        auto [a, sa] = infer_term(e, t->a);
        auto [b, sb] = infer_term(e, t->b);
        return {prod_pair(e.ctx, sa, sb, a, b), prod_ty(e.ctx, sa, sb)};
      }
      case STerm::Fst:
      case STerm::Snd: {
        auto [a, sa] = infer_term(e, t->a);
        ObjNode n = node(nf(sa, e.ctx.P()));
        if (n.k != ObjK::Pb || node(n.m1).k != MorK::Bang || node(n.m2).k != MorK::Bang)
          fail(Err::TypeMismatch, "fst/snd need a product; for Sigma use dfst/dsnd");
        Ty l = node(n.m1).a, r = node(n.m2).a;
        if (t->k == STerm::Fst) return {prod_pr1(e.ctx, l, r, a), l};
        return {prod_pr2(e.ctx, l, r, a), r};
      }
      case STerm::Refl: {
        auto [a, sa] = infer_term(e, t->a);
        return {eq_refl(e.ctx, sa, a, a, opt_.models), eq_ty(e.ctx, sa, a, a)};
      }
      case STerm::App: {
        auto [f, sf] = infer_term(e, t->a);
        auto it = pi_reg_.find(nf(sf, e.ctx.P()).id);
        if (it == pi_reg_.end())
          fail(Err::TypeMismatch, "app needs a Pi-typed head");
        auto [ext, tau] = rebuild(e, it->second);
        Tm arg = check_term(e, t->b, it->second.sigma);
        Tm at_var = pi_app(e.ctx, ext, tau, f);
        Subst collapse = mk_subst(identity_subst(e.ctx.pres), ext, arg);
        return {tm_subst(at_var, collapse), nf(apply(collapse, tau), e.ctx.P())};
      }
      case STerm::DFst: {
        auto [u, su] = infer_term(e, t->a);
        auto it = sigma_reg_.find(nf(su, e.ctx.P()).id);
        if (it == sigma_reg_.end()) fail(Err::TypeMismatch, "dfst needs a Sigma-typed argument");
        auto [ext, tau] = rebuild(e, it->second);
        return {sigma_pr1(e.ctx, ext, tau, u), it->second.sigma};
      }
      case STerm::DSnd: {
        auto [u, su] = infer_term(e, t->a);
        auto it = sigma_reg_.find(nf(su, e.ctx.P()).id);
        if (it == sigma_reg_.end()) fail(Err::TypeMismatch, "dsnd needs a Sigma-typed argument");
        auto [ext, tau] = rebuild(e, it->second);
        Tm p2 = sigma_pr2(e.ctx, ext, tau, u);
        Tm p1 = nf(sigma_pr1(e.ctx, ext, tau, u), e.ctx.P());
        Subst collapse = mk_subst(identity_subst(e.ctx.pres), ext, p1);
        return {p2, nf(apply(collapse, tau), e.ctx.P())};
      }
      case STerm::Lam: {
        if (!t->ann)
          fail(Err::TypeMismatch, "lambda needs a binder or Pi annotation (use check)");
        Ty sigma = elaborate_type(e, t->ann);
        Extension ext = extend(e.ctx, sigma);
        ElabCtx inner = e;
        inner.ctx = ext.ctx;
        inner.scope.push_back(Binding{t->name, ext.var, sigma});
        auto [body, tau] = infer_term(inner, t->a);
        Ty tn = nf(tau, ext.ctx.P());
        DepTy d = pi_ty(e.ctx, ext, tn);
        pi_reg_[d.ty.id] = DepInfo{nf(sigma, e.ctx.P()), tn, ext.vname};
        return {pi_lam(e.ctx, ext, tn, body), d.ty};
      }
      case STerm::DPair: fail(Err::TypeMismatch, "dpair needs a Sigma annotation (use check)");
    }
    fail(Err::SyntaxError, "term");
  }

  Tm check_term(ElabCtx& e, const STermPtr& t, Ty expected) {
    Obj en = nf(expected, e.ctx.P());
    if (t->k == STerm::Lam) {
      auto it = pi_reg_.find(en.id);
      if (it == pi_reg_.end()) fail(Err::TypeMismatch, "lambda checked against a non-Pi type");
      auto [ext, tau] = rebuild(e, it->second);
      ElabCtx inner = e;
      inner.ctx = ext.ctx;
      inner.scope.push_back(Binding{t->name, ext.var, it->second.sigma});
      Tm body = check_term(inner, t->a, tau);
      return pi_lam(e.ctx, ext, tau, body);
    }
    if (t->k == STerm::DPair) {
      auto it = sigma_reg_.find(en.id);
      if (it == sigma_reg_.end()) fail(Err::TypeMismatch, "dpair checked against a non-Sigma type");
      auto [ext, tau] = rebuild(e, it->second);
      Tm a = check_term(e, t->a, it->second.sigma);
      Subst collapse = mk_subst(identity_subst(e.ctx.pres), ext, nf(a, e.ctx.P()));
      Tm b = check_term(e, t->b, apply(collapse, tau));
      return sigma_pair(e.ctx, ext, tau, nf(a, e.ctx.P()), b);
    }
    if (t->k == STerm::Refl) {
      // extensional refl: inhabits Eq(s, u) whenever the engine closes s = u
      ObjNode n = node(en);
      if (n.k == ObjK::Pb) {
        Bound b1 = infer(n.m1, e.ctx.P());
        if (nf(b1.dom, e.ctx.P()) == obj_one()) {
          auto [a, sa] = infer_term(e, t->a);
          EqOptions o = eq_options(e);
          if (!decide_equal(a, n.m1, e.ctx.P(), o).equal())
            fail(Err::ReflRequiresEqual, "refl argument differs from the left side");
          return eq_refl(e.ctx, nf(b1.cod, e.ctx.P()), n.m1, n.m2, opt_.models);
        }
      }
    }
    auto [tm, ty] = infer_term(e, t);
    if (nf(ty, e.ctx.P()) != en)
      fail(Err::TypeMismatch,
           "term has type " + to_string(nf(ty, e.ctx.P())) + ", expected " + to_string(en));
    return tm;
  }

  // ---- judgments ----

  void elaborate_block(const SJudgBlock& b) {
    ElabCtx scratch;
    ElabCtx* e = &scratch;
    if (!b.ctx.empty()) {
      auto it = contexts_.find(b.ctx);
      if (it == contexts_.end()) {
        diag(b.span, "unknown context '" + b.ctx + "'");
        return;
      }
      e = &it->second;
    } else {
      scratch.ctx = empty_context();
    }
    for (const auto& j : b.judgments) {
      try {
        switch (j.k) {
          case SJudgment::Check: {
            Ty ty = elaborate_type(*e, j.ty);
            check_term(*e, j.t, ty);
            note("check " + print(j.t) + " : " + print(j.ty) + "  ok");
            break;
          }
          case SJudgment::EqJ: {
            Ty ty = elaborate_type(*e, j.ty);
            Tm l = check_term(*e, j.t, ty);
            Tm r = check_term(*e, j.u, ty);
            EqOptions o = eq_options(*e);
            Verdict v = decide_equal(l, r, e->ctx.P(), o);
            if (v.k == VerdictK::Equal) {
              note("eq " + print(j.t) + " = " + print(j.u) + "  ok (" + v.note + ")");
              if (opt_.trace)
                for (const auto& s : v.trace)
                  note("  " + std::string(s.rule) + " @ " + s.pos + "  #" +
                       std::to_string(s.before.id) + " -> #" + std::to_string(s.after.id));
            } else if (v.k == VerdictK::Distinct) {
              std::string cm = "countermodel in " + v.countermodel->M->name;
              diag(j.span, "eq " + print(j.t) + " = " + print(j.u) + " refuted", cm);
            } else {
              res_.unknown = true;
              res_.diags.push_back(Diagnostic{Diagnostic::Warning, j.span,
                                              "eq " + print(j.t) + " = " + print(j.u) +
                                                  " undecided: " + v.note,
                                              ""});
            }
            break;
          }
          case SJudgment::Norm: {
            auto [tm, ty] = infer_term(*e, j.t);
            std::vector<TraceStep> tr;
            auto r = normalize(tm, e->ctx.P(), Budget{opt_.budget}, opt_.trace ? &tr : nullptr);
            note("norm " + print(j.t) + "  =  " + to_string(r.nf));
            if (opt_.trace)
              for (const auto& s : tr)
                note("  " + std::string(s.rule) + " @ " + s.pos + "  #" +
                     std::to_string(s.before.id) + " -> #" + std::to_string(s.after.id));
            if (r.budget_exceeded) {
              res_.unknown = true;
              res_.diags.push_back(
                  Diagnostic{Diagnostic::Warning, j.span, "normalization budget exceeded", ""});
            }
            break;
          }
        }
      } catch (const Error& err) {
        if (err.code == Err::EngineUnknown) {
          res_.unknown = true;
          res_.diags.push_back(Diagnostic{Diagnostic::Warning, j.span, err.what(), ""});
        } else {
          diag(j.span, err.what());
        }
      }
    }
  }
};

inline ElabResult elaborate(const SurfaceFile& f, ElabOptions opt = {}) {
  return Elaborator(std::move(opt)).run(f);
}

inline ElabResult elaborate_text(std::string_view src, ElabOptions opt = {}) {
  return elaborate(parse(src), std::move(opt));
}

}  // namespace slcc
