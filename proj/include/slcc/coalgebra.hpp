#pragma once

// Coalgebra structure on contexts and strictification of weak lcc functors.
//
// lambda : Gamma -> F(G(Gamma)) is the chosen section of the counit; phi is
// the canonical natural isomorphism G(lambda) ~ eta built by structural
// recursion through the lift's realized markings; strictification collapses
// lambda-images leafwise through a weak functor, with zeta = collapse(phi).

#include "slcc/lift.hpp"
#include "slcc/slice.hpp"

namespace slcc {

struct IsoPair {
  Mor fwd, bwd;
};

class Coalgebra {
public:
  explicit Coalgebra(PresPtr ctx) : ctx_(std::move(ctx)), lift_(mk_lift(ctx_)) {
    std::vector<const Presentation*> chain;
    for (const Presentation* p = ctx_.get();;) {
      chain.push_back(p);
      if (p->origin == OriginK::Extension) {
        p = p->parent.get();
      } else {
        break;
      }
    }
    if (chain.back()->origin != OriginK::Free)
      fail(Err::UnsupportedOrigin, "coalgebra structure needs a Free or Extension origin chain");
    std::reverse(chain.begin(), chain.end());
    const Presentation* root = chain.front();
    for (Name g : root->obj_gens) ogen_[g] = obj_lifted(obj_gen(g));
    for (Name f : root->mor_gen_order) mgen_[f] = mor_lifted_gen(mor_gen(f));
    // lambda.sigma = <F(G(p)) o lambda, v'> where v' is eta(v) corrected by
    // the terminal iso and the phi component at sigma
    for (size_t i = 1; i < chain.size(); ++i) {
      const Presentation* pk = chain[i];
      Mor iota = mark_inv(lift_mark_tm_one(*lift_));
      Mor etav = mor_lifted_gen(mor_gen(pk->ext_var));
      IsoPair ph = phi(pk->ext_sigma);
      mgen_[pk->ext_var] = comp(ph.bwd, comp(etav, iota));
    }
  }

  PresPtr ctx() const { return ctx_; }
  PresPtr lift() const { return lift_; }

  Obj lam(Obj x);
  Mor lam(Mor m);

  // phi component at x (normalized): lambda(x) -> Lifted(x), with inverse.
  IsoPair phi(Obj x) {
    Obj xn = nf(x, *ctx_);
    auto it = phi_memo_.find(xn.id);
    if (it != phi_memo_.end()) return it->second;
    if (!inflight_.insert(xn.id).second)
      fail(Err::IllFormed, "circular generator boundary under phi");
    IsoPair r = phi_build(xn);
    inflight_.erase(xn.id);
    phi_memo_.emplace(xn.id, r);
    return r;
  }

  const std::map<Name, Obj>& obj_images() const { return ogen_; }
  const std::map<Name, Mor>& mor_images() const { return mgen_; }

private:
  friend struct LamTarget;
  PresPtr ctx_;
  PresPtr lift_;
  std::map<Name, Obj> ogen_;
  std::map<Name, Mor> mgen_;
  std::map<uint32_t, IsoPair> phi_memo_;
  std::set<uint32_t> inflight_;

  IsoPair phi_build(Obj xn) {
    ObjNode n = node(xn);
    switch (n.k) {
      case ObjK::Gen: {
        Obj lx = obj_lifted(xn);
        return {mor_id(lx), mor_id(lx)};
      }
      case ObjK::One: {
        MarkId m = lift_mark_tm_one(*lift_);
        return {mark_inv(m), bang(obj_lifted(obj_one()))};
      }
      case ObjK::Pb: {
        Mor f1 = n.m1, f2 = n.m2;
        IsoPair phA = phi(infer(f1, *ctx_).dom);
        IsoPair phB = phi(infer(f2, *ctx_).dom);
        Mor lf1 = lam(f1), lf2 = lam(f2);
        Mor ef1 = mor_lifted_gen(f1), ef2 = mor_lifted_gen(f2);
        MarkId m = lift_mark_pb_canonical(*lift_, f1, f2);
        Mor fwd = comp(mark_inv(m),
                       pb_pair(ef1, ef2, comp(phA.fwd, pb_p1(lf1, lf2)),
                               comp(phB.fwd, pb_p2(lf1, lf2))));
        Mor bwd = comp(pb_pair(lf1, lf2, comp(phA.bwd, pb_p1(ef1, ef2)),
                               comp(phB.bwd, pb_p2(ef1, ef2))),
                       marking_cmp(m));
        return {fwd, bwd};
      }
      case ObjK::Pi: {
        Mor f1 = n.m1, g = n.m2;
        Bound b1 = infer(f1, *ctx_);
        IsoPair phA = phi(b1.dom);
        IsoPair phB = phi(infer(g, *ctx_).dom);
        IsoPair phC = phi(b1.cod);
        Mor lf1 = lam(f1), lg = lam(g);
        Mor ef1 = mor_lifted_gen(f1), eg = mor_lifted_gen(g);
        MarkId m = lift_mark_pi_canonical(*lift_, f1, g);
        // transport along the phi components, then the marking comparison
        Mor f2p = comp(phC.fwd, pi_map(lf1, lg));
        Mor med = pb_pair(lf1, pi_map(lf1, lg), comp(phA.bwd, pb_p1(ef1, f2p)),
                          pb_p2(ef1, f2p));
        Mor e = comp(phB.fwd, comp(pi_eval(lf1, lg), med));
        Mor fwd = comp(mark_inv(m), curry(ef1, eg, f2p, e));
        Mor f2pp = comp(phC.bwd, pi_map(ef1, eg));
        Mor medp = pb_pair(ef1, pi_map(ef1, eg), comp(phA.fwd, pb_p1(lf1, f2pp)),
                           pb_p2(lf1, f2pp));
        Mor ep = comp(phB.bwd, comp(pi_eval(ef1, eg), medp));
        Mor bwd = comp(curry(lf1, lg, f2pp, ep), marking_cmp(m));
        return {fwd, bwd};
      }
      case ObjK::Lifted: fail(Err::IllFormed, "phi over a lift presentation");
    }
    fail(Err::IllFormed, "phi");
  }
};

namespace detail {

struct LamTarget {
  using O = Obj;
  using M = Mor;
  Coalgebra& co;
  O gen_obj(Name n) {
    auto it = co.obj_images().find(n);
    if (it == co.obj_images().end())
      fail(Err::IllFormed, "lambda: unknown object generator " + store().name_str(n));
    return it->second;
  }
  M gen_mor(Name n) {
    auto it = co.mor_images().find(n);
    if (it == co.mor_images().end())
      fail(Err::IllFormed, "lambda: unknown morphism generator " + store().name_str(n));
    return it->second;
  }
  O one() { return obj_one(); }
  M id(O a) { return mor_id(a); }
  M compose(M g, M f) { return comp(g, f); }
  M bang(O a) { return slcc::bang(a); }
  O pb(M f1, M f2) { return pb_obj(f1, f2); }
  M p1(M f1, M f2) { return pb_p1(f1, f2); }
  M p2(M f1, M f2) { return pb_p2(f1, f2); }
  M pair(M f1, M f2, M q1, M q2) { return pb_pair(f1, f2, q1, q2); }
  O pi(M f1, M g) { return pi_obj(f1, g); }
  M pimap(M f1, M g) { return pi_map(f1, g); }
  M eval(M f1, M g) { return pi_eval(f1, g); }
  M curry(M f1, M g, M f2p, M e) { return slcc::curry(f1, g, f2p, e); }
  M markinv(MarkId m0) {
    // lambda is strict: conjugate the eta-image of the inverse by phi
    MarkingData d = marking(m0);
    Obj Vm, Cm;
    switch (d.shape) {
      case Shape::Tm:
        Vm = d.t;
        Cm = obj_one();
        break;
      case Shape::Pb:
        Vm = infer(d.p1, *co.ctx()).dom;
        Cm = pb_obj(d.f1, d.f2);
        break;
      case Shape::Pi:
        Vm = infer(d.f2, *co.ctx()).dom;
        Cm = pi_obj(d.f1, d.g);
        break;
    }
    IsoPair phV = co.phi(Vm);
    IsoPair phC = co.phi(Cm);
    return comp(phV.bwd, comp(mor_lifted_gen(nf(mark_inv(m0), *co.ctx())), phC.fwd));
  }
  O lifted(Obj) { fail(Err::IllFormed, "lambda applies to base terms"); }
  M liftedgen(Mor) { fail(Err::IllFormed, "lambda applies to base terms"); }
};

}  // namespace detail

inline Obj Coalgebra::lam(Obj x) {
  detail::LamTarget t{*this};
  return apply_obj(t, x);
}

inline Mor Coalgebra::lam(Mor m) {
  detail::LamTarget t{*this};
  return apply_mor(t, m);
}

// ---------------------------------------------------------------------------
// Weak lcc functors out of a base presentation, given intensionally together
// with the inverses of their canonical comparison maps.

struct WeakFromBase {
  virtual ~WeakFromBase() = default;
  virtual const SliceView& view() const = 0;
  virtual SObj obj(Obj x) = 0;
  virtual SMor mor(Mor m) = 0;
  virtual SMor inv_tm() = 0;
  virtual SMor inv_pb(Mor f1, Mor f2) = 0;
  virtual SMor inv_pi(Mor f1, Mor g) = 0;
};

// sigma^* : Gamma -> Gamma / sigma as a weak functor on base terms.
class SigmaStarWeak : public WeakFromBase {
public:
  SigmaStarWeak(PresPtr base, Obj sigma, const EqState* facts = nullptr)
      : over_one_(base, obj_one(), facts),
        over_sigma_(base, sigma, facts),
        pf_(over_one_, over_sigma_, bang(sigma)),
        base_(std::move(base)) {}

  const SliceView& view() const override { return over_sigma_; }
  const PullbackFunctor& functor() const { return pf_; }

  SObj obj(Obj x) override { return pf_.obj(as_slice_over_one(x)); }
  SMor mor(Mor m) override { return pf_.mor(embed(m)); }
  SMor inv_tm() override { return pf_.inv_tm(); }
  SMor inv_pb(Mor f1, Mor f2) override { return pf_.inv_pb(embed(f1), embed(f2)); }
  SMor inv_pi(Mor f1, Mor g) override { return pf_.inv_pi(embed(f1), embed(g)); }

private:
  SliceView over_one_, over_sigma_;
  PullbackFunctor pf_;
  PresPtr base_;

  SMor embed(Mor m) {
    Bound b = infer(m, *base_);
    return over_one_.mk(as_slice_over_one(b.dom), as_slice_over_one(b.cod), m);
  }
};

// ---------------------------------------------------------------------------
// Strictification: f^s = collapse of f applied leafwise to lambda-images;
// zeta = collapse of phi, an isomorphism family f^s(x) ~ f(x).

namespace detail {

struct CollapseTarget {
  using O = SObj;
  using M = SMor;
  Coalgebra& co;
  WeakFromBase& f;
  const SliceView& V;
  O gen_obj(Name) { fail(Err::IllFormed, "lift presentations have no named generators"); }
  M gen_mor(Name) { fail(Err::IllFormed, "lift presentations have no named generators"); }
  O one() { return V.terminal(); }
  M id(O a) { return V.id(a); }
  M compose(M g, M h) { return V.compose(g, h); }
  M bang(O a) { return V.bang(a); }
  O pb(M f1, M f2) { return V.pb(f1, f2); }
  M p1(M f1, M f2) { return V.p1(f1, f2); }
  M p2(M f1, M f2) { return V.p2(f1, f2); }
  M pair(M f1, M f2, M q1, M q2) { return V.pair(f1, f2, q1, q2); }
  O pi(M f1, M g) { return V.pi(f1, g); }
  M pimap(M f1, M g) { return V.pimap(f1, g); }
  M eval(M f1, M g) { return V.eval(f1, g); }
  M curry(M f1, M g, M f2p, M e) { return V.curry(f1, g, f2p, e); }
  M markinv(MarkId mk) {
    const LiftMarkInfo* info = co.lift()->lift_mark_info(mk);
    if (!info) fail(Err::IllFormed, "collapse of an unrealized lift marking");
    switch (info->k) {
      case LiftMarkInfo::TmOne: return f.inv_tm();
      case LiftMarkInfo::PbCanonical: return f.inv_pb(info->f1, info->f2g);
      case LiftMarkInfo::PiCanonical: return f.inv_pi(info->f1, info->f2g);
      case LiftMarkInfo::TmBase:
        return V.compose(f.mor(mark_inv(info->base_mark)), f.inv_tm());
      case LiftMarkInfo::PbBase: {
        MarkingData d = marking(info->base_mark);
        return V.compose(f.mor(mark_inv(info->base_mark)), f.inv_pb(d.f1, d.f2));
      }
      case LiftMarkInfo::PiBase: {
        MarkingData d = marking(info->base_mark);
        return V.compose(f.mor(mark_inv(info->base_mark)), f.inv_pi(d.f1, d.g));
      }
    }
    fail(Err::IllFormed, "collapse markinv");
  }
  O lifted(Obj x) { return f.obj(x); }
  M liftedgen(Mor m) { return f.mor(m); }
};

}  // namespace detail

struct SIso {
  SMor fwd, bwd;
};

class Strictifier {
public:
  Strictifier(Coalgebra& co, WeakFromBase& f) : co_(co), f_(f) {}

  const SliceView& view() const { return f_.view(); }

  // collapse of terms over the lift
  SObj collapse(Obj x) {
    detail::CollapseTarget t{co_, f_, f_.view()};
    return apply_obj(t, x);
  }
  SMor collapse(Mor m) {
    detail::CollapseTarget t{co_, f_, f_.view()};
    return apply_mor(t, m);
  }

  // the strictified functor on base terms
  SObj strict_obj(Obj x) { return collapse(co_.lam(x)); }
  SMor strict_mor(Mor m) { return collapse(co_.lam(m)); }

  // zeta components: strict_obj(x) -> f(x), with inverse
  SIso zeta(Obj x) {
    IsoPair ph = co_.phi(x);
    return SIso{collapse(ph.fwd), collapse(ph.bwd)};
  }

private:
  Coalgebra& co_;
  WeakFromBase& f_;
};

}  // namespace slcc
