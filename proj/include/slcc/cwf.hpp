#pragma once

// The covariant cwf of contexts-as-strict-lcc-categories: contexts are
// presentations with coalgebra structure, substitutions are the generated
// strict functors, Ty(Gamma) is the object terms and Tm(Gamma, sigma) the
// sections 1 -> sigma.  Dependent sums and products go through the
// strictified comparison functor a : Gamma.sigma -> Gamma/sigma.

#include "slcc/coalgebra.hpp"

namespace slcc {

struct Context {
  PresPtr pres;
  std::shared_ptr<EqState> eq;

  Context() = default;
  explicit Context(PresPtr p) : pres(std::move(p)), eq(std::make_shared<EqState>()) {}

  const Presentation& P() const { return *pres; }

  Coalgebra& lambda() const {
    if (!lambda_) lambda_ = std::make_shared<Coalgebra>(pres);
    return *lambda_;
  }

  // per-sigma strictified sigma^* with its coalgebra collapse
  struct AData {
    SigmaStarWeak ss;
    Strictifier st;
    AData(Coalgebra& co, PresPtr base, Obj sigma, const EqState* facts)
        : ss(base, sigma, facts), st(co, ss) {}
  };
  AData& a_data(Obj sigma) const {
    Obj sn = nf(sigma, *pres);
    auto it = adata_.find(sn.id);
    if (it == adata_.end())
      it = adata_.emplace(sn.id, std::make_shared<AData>(lambda(), pres, sn, eq.get())).first;
    return *it->second;
  }

  std::map<uint32_t, IsoPair>& ab_memo(Obj sigma) const {
    return ab_memo_[nf(sigma, *pres).id];
  }

private:
  mutable std::shared_ptr<Coalgebra> lambda_;
  mutable std::map<uint32_t, std::shared_ptr<AData>> adata_;
  mutable std::map<uint32_t, std::map<uint32_t, IsoPair>> ab_memo_;
};

using Ty = Obj;
using Tm = Mor;

// ---------------------------------------------------------------------------
// Contexts

inline Context empty_context() { return Context(empty_presentation()); }

inline Context free_context(PresPtr sketch) {
  if (sketch->origin != OriginK::Free) fail(Err::UnsupportedOrigin, "free_context needs a sketch");
  return Context(sketch);
}

inline Ty mk_ty(const Context& G, Obj o) {
  check_obj(o, G.P());
  return nf(o, G.P());
}

inline void check_tm(const Context& G, Tm t, Ty sigma) {
  Bound b = infer(t, G.P());
  if (nf(b.dom, G.P()) != obj_one())
    fail(Err::TypeMismatch, "term must be a section 1 -> sigma, got domain " + to_string(b.dom));
  if (nf(b.cod, G.P()) != nf(sigma, G.P()))
    fail(Err::TypeMismatch, "term has type " + to_string(nf(b.cod, G.P())) + ", expected " +
                                to_string(nf(sigma, G.P())));
}

struct Extension {
  Context ctx;   // Gamma.sigma
  Subst p;       // Gamma -> Gamma.sigma, the generator inclusion
  Tm var;        // v : 1 -> sigma[p]
  Name vname;
  Obj sigma;
};

inline size_t context_depth(const Presentation& P) {
  size_t d = 0;
  for (const Presentation* q = &P; q->origin == OriginK::Extension; q = q->parent.get()) ++d;
  return d;
}

// Extension variables are globally fresh so that binder terms never capture
// across contexts rebuilt at different depths.
inline Name fresh_var_name() {
  static uint64_t counter = 0;
  return store().name("v#" + std::to_string(counter++));
}

// The context extension: a pushout freely adjoining one section v : 1 -> sigma.
inline Extension extend(const Context& G, Ty sigma) {
  Obj sn = mk_ty(G, sigma);
  auto Q = std::make_shared<Presentation>();
  Q->origin = OriginK::Extension;
  Q->parent = G.pres;
  Q->ext_sigma = sn;
  Name v = fresh_var_name();
  if (G.P().mor_gen(v) || G.P().has_obj_gen(v))
    fail(Err::DuplicateName, "extension variable name collides");
  Q->ext_var = v;
  Q->obj_gens = G.P().obj_gens;
  Q->mor_gen_order = G.P().mor_gen_order;
  Q->mor_gens = G.P().mor_gens;
  Q->equations = G.P().equations;
  Q->markings = G.P().markings;
  Q->mor_gen_order.push_back(v);
  Q->mor_gens.emplace(v, MorGenInfo{obj_one(), sn});

  Extension e;
  e.ctx = Context(Q);
  // reflection facts of the parent persist in the extension
  e.ctx.eq->facts = G.eq->facts;
  e.p = identity_subst(G.pres);
  e.p.dst = Q;
  e.var = mor_gen(v);
  e.vname = v;
  e.sigma = sn;
  return e;
}

// ---------------------------------------------------------------------------
// Substitutions (the generated class)

inline Ty ty_subst(Ty sigma, const Subst& f) { return apply(f, sigma); }
inline Tm tm_subst(Tm t, const Subst& f) { return apply(f, t); }

// <f, s> : Gamma.sigma -> Delta for f : Gamma -> Delta and s : Tm_Delta(sigma[f])
inline Subst mk_subst(const Subst& f, const Extension& ext, Tm s) {
  Context Delta;  // only the presentation matters here
  Bound b = infer(s, *f.dst);
  if (nf(b.dom, *f.dst) != obj_one() ||
      nf(b.cod, *f.dst) != nf(apply(f, ext.sigma), *f.dst))
    fail(Err::TypeMismatch, "mk_subst: term must inhabit sigma[f]");
  Subst r = f;
  r.src = ext.ctx.pres;
  r.mmap[ext.vname] = s;
  return r;
}

// weakening f+ : Gamma.sigma -> Delta.sigma[f]
inline std::pair<Extension, Subst> weaken(const Context& Delta, const Subst& f,
                                          const Extension& ext) {
  Extension e2 = extend(Delta, apply(f, ext.sigma));
  Subst pf = compose_subst(e2.p, f);
  Subst fplus = mk_subst(pf, ext, e2.var);
  return {std::move(e2), std::move(fplus)};
}

// ---------------------------------------------------------------------------
// The comparison functor a : Gamma.sigma -> Gamma / sigma (strict), acting on
// terms of the extension through the strictified sigma^* and the
// zeta-adjusted diagonal at the variable.

namespace detail {

struct ATarget {
  using O = SObj;
  using M = SMor;
  const Context& G;        // the base context Gamma
  Context::AData& ad;
  Name vname;
  Obj sigma;
  const SliceView& V;

  O gen_obj(Name n) { return ad.st.strict_obj(obj_gen(n)); }
  M gen_mor(Name n) {
    if (n == vname) {
      // the diagonal d = <id, id>, corrected by zeta at sigma
      SObj star_sigma = ad.ss.obj(sigma);
      SMor d = V.mk(V.terminal(), star_sigma,
                    pb_pair(slcc::bang(sigma), slcc::bang(sigma), mor_id(sigma), mor_id(sigma)));
      SIso z = ad.st.zeta(sigma);
      return V.compose(z.bwd, d);
    }
    return ad.st.strict_mor(mor_gen(n));
  }
  O one() { return V.terminal(); }
  M id(O a) { return V.id(a); }
  M compose(M g, M f) { return V.compose(g, f); }
  M bang(O a) { return V.bang(a); }
  O pb(M f1, M f2) { return V.pb(f1, f2); }
  M p1(M f1, M f2) { return V.p1(f1, f2); }
  M p2(M f1, M f2) { return V.p2(f1, f2); }
  M pair(M f1, M f2, M q1, M q2) { return V.pair(f1, f2, q1, q2); }
  O pi(M f1, M g) { return V.pi(f1, g); }
  M pimap(M f1, M g) { return V.pimap(f1, g); }
  M eval(M f1, M g) { return V.eval(f1, g); }
  M curry(M f1, M g, M f2p, M e) { return V.curry(f1, g, f2p, e); }
  M markinv(MarkId mk) { return ad.st.strict_mor(mark_inv(mk)); }
  O lifted(Obj) { fail(Err::IllFormed, "a_compare: lifted term in a context"); }
  M liftedgen(Mor) { fail(Err::IllFormed, "a_compare: lifted term in a context"); }
};

}  // namespace detail

struct ACompare {
  const Context& G;
  Extension ext;

  SObj obj(Obj tau) const {
    detail::ATarget t{G, G.a_data(ext.sigma), ext.vname, nf(ext.sigma, G.P()),
                      G.a_data(ext.sigma).ss.view()};
    return apply_obj(t, tau);
  }
  SMor mor(Mor m) const {
    detail::ATarget t{G, G.a_data(ext.sigma), ext.vname, nf(ext.sigma, G.P()),
                      G.a_data(ext.sigma).ss.view()};
    return apply_mor(t, m);
  }
  const SliceView& view() const { return G.a_data(ext.sigma).ss.view(); }
};

inline ACompare a_compare(const Context& G, const Extension& ext) { return ACompare{G, ext}; }

// b : slice object x over sigma, as the pullback of x along the variable
inline Ty b_compare_obj(const Extension& ext, const SObj& x) {
  return nf(pb_obj(ext.var, x.display), ext.ctx.P());
}

inline Mor b_compare_mor(const Extension& ext, const SMor& k) {
  // PbObj(v, x) -> PbObj(v, y) induced by k : x -> y
  Mor q1 = bang(pb_obj(ext.var, k.from.display));
  Mor q2 = comp(k.under, pb_p2(ext.var, k.from.display));
  return pb_pair(ext.var, k.to.display, q1, q2);
}

// ---------------------------------------------------------------------------
// The iso family b(a(tau)) ~ tau over Gamma.sigma, by structural recursion.
// The same family substituted along <id, s> identifies <id,s>(tau) with the
// fiber PbObj(s, a(tau)), which is what pairs and projections of Sigma types
// travel through.

inline IsoPair ab_iso(const Context& G, const Extension& ext, Ty tau);

namespace detail {

inline IsoPair ab_iso_build(const Context& G, const Extension& ext, Obj tn) {
  const Presentation& E = ext.ctx.P();
  Mor v = ext.var;
  ACompare a{G, ext};
  ObjNode n = node(tn);
  switch (n.k) {
    case ObjK::One: {
      Obj B = pb_obj(v, mor_id(nf(ext.sigma, G.P())));
      return {bang(B), pb_pair(v, mor_id(nf(ext.sigma, G.P())), mor_id(obj_one()), v)};
    }
    case ObjK::Gen: {
      Obj A = tn;
      Mor s = bang(nf(ext.sigma, G.P()));
      Mor disp = pb_p1(s, bang(A));  // a(A): sigma x A -> sigma
      Mor fwd = comp(pb_p2(s, bang(A)), pb_p2(v, disp));
      Mor bwd = pb_pair(v, disp, bang(A),
                        pb_pair(s, bang(A), comp(v, bang(A)), mor_id(A)));
      return {fwd, bwd};
    }
    case ObjK::Pb: {
      Mor m1 = n.m1, m2 = n.m2;
      Obj X = infer(m1, E).dom, Y = infer(m2, E).dom;
      IsoPair kX = ab_iso(G, ext, X);
      IsoPair kY = ab_iso(G, ext, Y);
      SMor am1 = a.mor(m1), am2 = a.mor(m2);
      Mor W = pb_p1(am1.under, am2.under);  // not used directly; vertex data below
      (void)W;
      Mor aXd = am1.from.display, aYd = am2.from.display;
      Mor Wdisp = comp(aXd, pb_p1(am1.under, am2.under));
      Obj BV = pb_obj(v, Wdisp);
      // towards tau: project to each a-fiber and transport through k
      Mor s1 = pb_pair(v, aXd, bang(BV), comp(pb_p1(am1.under, am2.under), pb_p2(v, Wdisp)));
      Mor s2 = pb_pair(v, aYd, bang(BV), comp(pb_p2(am1.under, am2.under), pb_p2(v, Wdisp)));
      Mor fwd = pb_pair(m1, m2, comp(kX.fwd, s1), comp(kY.fwd, s2));
      // back: pair the k-inverses into the a-pullback, then into the fiber
      Mor w1 = comp(pb_p2(v, aXd), comp(kX.bwd, pb_p1(m1, m2)));
      Mor w2 = comp(pb_p2(v, aYd), comp(kY.bwd, pb_p2(m1, m2)));
      Mor bwd = pb_pair(v, Wdisp, bang(tn), pb_pair(am1.under, am2.under, w1, w2));
      return {fwd, bwd};
    }
    case ObjK::Pi: {
      Mor m1 = n.m1, mg = n.m2;
      Obj A = infer(m1, E).dom, B = infer(mg, E).dom, C = infer(m1, E).cod;
      IsoPair kA = ab_iso(G, ext, A);
      IsoPair kB = ab_iso(G, ext, B);
      IsoPair kC = ab_iso(G, ext, C);
      SMor am1 = a.mor(m1), amg = a.mor(mg);
      Mor aAd = am1.from.display, aBd = amg.from.display, aCd = am1.to.display;
      Mor pim = pi_map(am1.under, amg.under);
      Mor aTd = comp(aCd, pim);  // display of a(tau)
      Obj BV = pb_obj(v, aTd);
      // fwd : PbObj(v, aTd) -> PiObj(m1, mg)
      Mor sC = pb_pair(v, aCd, bang(BV), comp(pim, pb_p2(v, aTd)));
      Mor f2p = comp(kC.fwd, sC);
      Obj PBf = pb_obj(m1, f2p);
      Mor u1 = comp(pb_p2(v, aAd), comp(kA.bwd, pb_p1(m1, f2p)));
      Mor u2 = comp(pb_p2(v, aTd), pb_p2(m1, f2p));
      Mor nmap = pb_pair(am1.under, pim, u1, u2);
      Mor mB = pb_pair(v, aBd, bang(PBf), comp(pi_eval(am1.under, amg.under), nmap));
      Mor e = comp(kB.fwd, mB);
      Mor fwd = curry(m1, mg, f2p, e);
      // bwd : PiObj(m1, mg) -> PbObj(v, aTd)
      Obj PI = pi_obj(m1, mg);
      Mor f2pp = comp(pb_p2(v, aCd), comp(kC.bwd, pi_map(m1, mg)));
      Obj PBb = pb_obj(am1.under, f2pp);
      Mor sA = pb_pair(v, aAd, bang(PBb), pb_p1(am1.under, f2pp));
      Mor r = pb_pair(m1, pi_map(m1, mg), comp(kA.fwd, sA), pb_p2(am1.under, f2pp));
      Mor epp = comp(pb_p2(v, aBd), comp(kB.bwd, comp(pi_eval(m1, mg), r)));
      Mor W2 = curry(am1.under, amg.under, f2pp, epp);
      Mor bwd = pb_pair(v, aTd, bang(PI), W2);
      return {fwd, bwd};
    }
    case ObjK::Lifted: fail(Err::IllFormed, "ab_iso: lifted type in a context");
  }
  fail(Err::IllFormed, "ab_iso");
}

}  // namespace detail

inline IsoPair ab_iso(const Context& G, const Extension& ext, Ty tau) {
  Obj tn = nf(tau, ext.ctx.P());
  auto& memo = G.ab_memo(ext.sigma);
  auto it = memo.find(tn.id);
  if (it != memo.end()) return it->second;
  IsoPair r = detail::ab_iso_build(G, ext, tn);
  memo.emplace(tn.id, r);
  return r;
}

// ---------------------------------------------------------------------------
// Type formers

inline Ty unit_ty(const Context& G) { return obj_one(); }
inline Tm unit_tm(const Context&) { return mor_id(obj_one()); }

inline Ty prod_ty(const Context& G, Ty s, Ty t) {
  return nf(pb_obj(bang(mk_ty(G, s)), bang(mk_ty(G, t))), G.P());
}
inline Tm prod_pair(const Context& G, Ty s, Ty t, Tm a, Tm b) {
  check_tm(G, a, s);
  check_tm(G, b, t);
  return pb_pair(bang(nf(s, G.P())), bang(nf(t, G.P())), a, b);
}
inline Tm prod_pr1(const Context& G, Ty s, Ty t, Tm u) {
  return comp(pb_p1(bang(nf(s, G.P())), bang(nf(t, G.P()))), u);
}
inline Tm prod_pr2(const Context& G, Ty s, Ty t, Tm u) {
  return comp(pb_p2(bang(nf(s, G.P())), bang(nf(t, G.P()))), u);
}

inline Ty eq_ty(const Context& G, Ty sigma, Tm s, Tm t) {
  check_tm(G, s, sigma);
  check_tm(G, t, sigma);
  return nf(pb_obj(nf(s, G.P()), nf(t, G.P())), G.P());
}

// refl requires the engine to close s = t
inline Tm eq_refl(const Context& G, Ty sigma, Tm s, Tm t,
                  const std::vector<const FinStrictLcc*>& models = {}) {
  EqOptions opt;
  opt.state = G.eq.get();
  opt.models = models;
  Verdict v = decide_equal(s, t, G.P(), opt);
  if (!v.equal())
    fail(Err::ReflRequiresEqual, "refl needs s = t; engine verdict was " +
                                     std::string(v.k == VerdictK::Distinct ? "Distinct" : "Unknown"));
  return pb_pair(nf(s, G.P()), nf(t, G.P()), mor_id(obj_one()), mor_id(obj_one()));
}

// equality reflection: an inhabitant of Eq s t makes s = t judgmental
inline void eq_reflect(Context& G, Ty sigma, Tm s, Tm t, Tm witness) {
  check_tm(G, witness, eq_ty(G, sigma, s, t));
  register_fact(*G.eq, G.P(), s, t);
}

// Sigma and Pi along sigma go through the display of a(tau)
struct DepTy {
  Ty ty;        // the exposed type over Gamma
  Mor display;  // a(tau) : vertex -> sigma, over Gamma
};

inline DepTy sigma_ty(const Context& G, const Extension& ext, Ty tau) {
  ACompare a{G, ext};
  SObj at = a.obj(nf(tau, ext.ctx.P()));
  Mor D = nf(at.display, G.P());
  return DepTy{nf(infer(D, G.P()).dom, G.P()), D};
}

inline DepTy pi_ty(const Context& G, const Extension& ext, Ty tau) {
  ACompare a{G, ext};
  SObj at = a.obj(nf(tau, ext.ctx.P()));
  Mor D = nf(at.display, G.P());
  return DepTy{nf(pi_obj(bang(nf(ext.sigma, G.P())), D), G.P()), D};
}

// lambda abstraction: Tm_{Gamma.sigma}(tau) -> Tm_Gamma(Pi sigma tau)
inline Tm pi_lam(const Context& G, const Extension& ext, Ty tau, Tm t) {
  check_tm(ext.ctx, t, tau);
  ACompare a{G, ext};
  SMor at = a.mor(t);
  Mor D = pi_ty(G, ext, tau).display;
  Mor s = bang(nf(ext.sigma, G.P()));
  // transpose a(t) along the Id(sigma) ~ sigma^*(1) identification
  Mor e = comp(at.under, pb_p1(s, bang(obj_one())));
  return curry(s, D, bang(obj_one()), e);
}

// application to the variable: Tm_Gamma(Pi sigma tau) -> Tm_{Gamma.sigma}(tau)
inline Tm pi_app(const Context& G, const Extension& ext, Ty tau, Tm u) {
  DepTy pt = pi_ty(G, ext, tau);
  check_tm(G, u, pt.ty);
  Mor s = bang(nf(ext.sigma, G.P()));
  Mor D = pt.display;
  Mor at_v = comp(pi_eval(s, D), pb_pair(s, pi_map(s, D), ext.var, u));
  Mor fib = pb_pair(ext.var, D, mor_id(obj_one()), at_v);
  IsoPair k = ab_iso(G, ext, tau);
  return comp(k.fwd, fib);
}

// Sigma introduction and projections
inline Tm sigma_pair(const Context& G, const Extension& ext, Ty tau, Tm s, Tm t) {
  check_tm(G, s, ext.sigma);
  DepTy st_ = sigma_ty(G, ext, tau);
  Subst collapse = mk_subst(identity_subst(G.pres), ext, s);
  check_tm(G, t, apply(collapse, nf(tau, ext.ctx.P())));
  IsoPair k = ab_iso(G, ext, tau);
  Mor j_bwd = apply(collapse, k.bwd);  // tau[<id,s>] -> PbObj(s, D)
  return comp(pb_p2(nf(s, G.P()), st_.display), comp(j_bwd, t));
}

inline Tm sigma_pr1(const Context& G, const Extension& ext, Ty tau, Tm u) {
  DepTy st_ = sigma_ty(G, ext, tau);
  check_tm(G, u, st_.ty);
  return comp(st_.display, u);
}

inline Tm sigma_pr2(const Context& G, const Extension& ext, Ty tau, Tm u) {
  DepTy st_ = sigma_ty(G, ext, tau);
  check_tm(G, u, st_.ty);
  Tm s = nf(sigma_pr1(G, ext, tau, u), G.P());
  Subst collapse = mk_subst(identity_subst(G.pres), ext, s);
  IsoPair k = ab_iso(G, ext, tau);
  Mor j_fwd = apply(collapse, k.fwd);  // PbObj(s, D) -> tau[<id,s>]
  Mor fib = pb_pair(s, st_.display, mor_id(obj_one()), u);
  return comp(j_fwd, fib);
}

// ---------------------------------------------------------------------------
// bar_term: Hom_{Gamma.tau}(1, sigma[p]) ~ Hom_Gamma(tau, sigma)

inline Mor bar_term(const Context& G, const Extension& ext, Ty sigma, Tm t) {
  // t : 1 -> sigma over Gamma.tau, sigma a type of Gamma
  check_obj(sigma, G.P());
  check_tm(ext.ctx, t, sigma);
  ACompare a{G, ext};
  SMor at = a.mor(t);
  SIso z = G.a_data(ext.sigma).st.zeta(sigma);
  Mor tau_n = bang(nf(ext.sigma, G.P()));
  Mor to_star = comp(z.fwd.under, at.under);  // tau -> tau x sigma
  return comp(pb_p2(tau_n, bang(nf(sigma, G.P()))), to_star);
}

inline Tm unbar_term(const Context& G, const Extension& ext, Mor m) {
  // m : tau -> sigma in Gamma, to a section over Gamma.tau
  Bound b = infer(m, G.P());
  if (nf(b.dom, G.P()) != nf(ext.sigma, G.P()))
    fail(Err::BoundaryMismatch, "unbar_term: domain must be the extension type");
  return comp(m, ext.var);
}

// ---------------------------------------------------------------------------
// Coslice cwf, core, and the cwf structure on an individual lcc category
// (the free context on a sketch with lambda = F(eta)).

struct CosliceContext {
  Context under;
  Subst from;  // Gamma -> under
};

struct CosliceCwf {
  Context base;

  CosliceContext initial() const { return {base, identity_subst(base.pres)}; }

  std::pair<CosliceContext, Extension> extend_by(const CosliceContext& c, Ty sigma) const {
    Extension e = extend(c.under, sigma);
    CosliceContext r{e.ctx, compose_subst(e.p, c.from)};
    return {r, e};
  }
};

// The equivalence of Gamma^op with the category of context extensions:
// a morphism term s : tau -> sigma corresponds to the extension morphism
// <p_tau, s o v_tau> : Gamma.sigma -> Gamma.tau, and back via bar_term.
struct ContextAsModel {
  Context G;

  explicit ContextAsModel(PresPtr sketch) : G(free_context(std::move(sketch))) {}

  Extension ty_to_context(Ty sigma) const { return extend(G, sigma); }

  // s : tau -> sigma in Gamma gives Gamma.sigma -> Gamma.tau over Gamma
  Subst mor_to_subst(Mor s, const Extension& ext_sigma, const Extension& ext_tau) const {
    Bound b = infer(s, G.P());
    if (nf(b.cod, G.P()) != nf(ext_sigma.sigma, G.P()) ||
        nf(b.dom, G.P()) != nf(ext_tau.sigma, G.P()))
      fail(Err::BoundaryMismatch, "mor_to_subst: boundary must be tau -> sigma");
    Tm s_v = unbar_term(G, ext_tau, s);
    return mk_subst(ext_tau.p, ext_sigma, s_v);
  }

  // a substitution h : Gamma.sigma -> Gamma.tau over Gamma gives tau -> sigma
  Mor subst_to_mor(const Subst& h, const Extension& ext_sigma, const Extension& ext_tau) const {
    Tm hv = apply(h, ext_sigma.var);
    return bar_term(G, ext_tau, ext_sigma.sigma, hv);
  }
};

}  // namespace slcc
