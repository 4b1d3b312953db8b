#pragma once

// Slice views with canonical lcc structure, the weak pullback functors, the
// canonical Sigma/Pi functors, and the adjunction transposes.
//
// A slice object over sigma is a morphism term of the base with codomain
// sigma; a slice morphism carries its commuting-triangle evidence, computed
// once at construction and stored.

#include "slcc/equality.hpp"
#include "slcc/functor.hpp"

namespace slcc {

struct SObj {
  Mor display;  // vertex -> sigma in the base
  friend bool operator==(const SObj& a, const SObj& b) { return a.display == b.display; }
};

struct SMor {
  Mor under;
  SObj from, to;
  std::shared_ptr<const Verdict> evidence;
};

class SliceView {
public:
  using O = SObj;
  using M = SMor;

  SliceView(PresPtr base, Obj sigma, const EqState* facts = nullptr, long long budget = 10000)
      : base_(std::move(base)), sigma_(sigma), facts_(facts), budget_(budget) {
    check_obj(sigma_, *base_);
  }

  const Presentation& base() const { return *base_; }
  PresPtr base_ptr() const { return base_; }
  Obj sigma() const { return sigma_; }
  const EqState* facts() const { return facts_; }

  Obj vertex(const SObj& x) const { return infer(x.display, *base_).dom; }

  // checked constructor: h must commute with the displays
  SMor mk(const SObj& from, const SObj& to, Mor under) const {
    Bound b = infer(under, *base_);
    if (nf(b.dom, *base_) != nf(vertex(from), *base_) ||
        nf(b.cod, *base_) != nf(vertex(to), *base_))
      fail(Err::BoundaryMismatch, "slice morphism boundary mismatch");
    Verdict v = check_triangle(from, to, under);
    if (!v.equal())
      fail(v.k == VerdictK::Unknown ? Err::EngineUnknown : Err::TypeMismatch,
           "slice triangle does not commute: " + to_string(comp(to.display, under)) +
               " vs " + to_string(from.display));
    return SMor{under, from, to, std::make_shared<Verdict>(std::move(v))};
  }

  SObj terminal() const { return SObj{mor_id(sigma_)}; }
  SObj one() const { return terminal(); }

  SMor id(const SObj& x) const { return mk(x, x, mor_id(vertex(x))); }

  // evidence for a composite follows from the evidence of its parts by
  // congruence and transitivity; no engine query is needed
  SMor compose(const SMor& g, const SMor& f) const {
    Verdict v;
    v.k = VerdictK::Equal;
    v.note = "composite of verified triangles";
    return SMor{comp(g.under, f.under), f.from, g.to, std::make_shared<Verdict>(std::move(v))};
  }
  SMor bang(const SObj& x) const { return mk(x, terminal(), x.display); }

  // canonical pullbacks: the canonical pullback of the underlying cospan in
  // the base, displayed through the first leg
  SObj pb(const SMor& k1, const SMor& k2) const {
    return SObj{comp(k1.from.display, pb_p1(k1.under, k2.under))};
  }
  SMor p1(const SMor& k1, const SMor& k2) const {
    return mk(pb(k1, k2), k1.from, pb_p1(k1.under, k2.under));
  }
  SMor p2(const SMor& k1, const SMor& k2) const {
    return mk(pb(k1, k2), k2.from, pb_p2(k1.under, k2.under));
  }
  SMor pair(const SMor& k1, const SMor& k2, const SMor& q1, const SMor& q2) const {
    return mk(q1.from, pb(k1, k2), pb_pair(k1.under, k2.under, q1.under, q2.under));
  }

  // canonical dependent products, computed on the underlying diagram
  SObj pi(const SMor& m1, const SMor& mg) const {
    return SObj{comp(m1.to.display, pi_map(m1.under, mg.under))};
  }
  SMor pimap(const SMor& m1, const SMor& mg) const {
    return mk(pi(m1, mg), m1.to, pi_map(m1.under, mg.under));
  }
  SMor eval(const SMor& m1, const SMor& mg) const {
    return mk(pb(m1, pimap(m1, mg)), mg.from, pi_eval(m1.under, mg.under));
  }
  SMor curry(const SMor& m1, const SMor& mg, const SMor& m2p, const SMor& e) const {
    return mk(m2p.from, pi(m1, mg), slcc::curry(m1.under, mg.under, m2p.under, e.under));
  }

  // engine access for clients (transposes, iso checks)
  Verdict eq(Mor a, Mor b) const {
    EqOptions opt;
    opt.budget = budget_;
    opt.state = facts_;
    return decide_equal(a, b, *base_, opt);
  }

private:
  PresPtr base_;
  Obj sigma_;
  const EqState* facts_;
  long long budget_;

  Verdict check_triangle(const SObj& from, const SObj& to, Mor under) const {
    Mor lhs = comp(to.display, under);
    if (nf(lhs, *base_) == nf(from.display, *base_)) {
      Verdict v;
      v.k = VerdictK::Equal;
      v.note = "definitional";
      return v;
    }
    return eq(lhs, from.display);
  }
};

// ---------------------------------------------------------------------------
// slice_view over One is the base itself: embed and project.

inline SObj as_slice_over_one(Obj x) { return SObj{bang(x)}; }

// ---------------------------------------------------------------------------
// Canonical pullback functor s^* : slice(tau) -> slice(sigma) for s : sigma
// -> tau, lcc but not strict; the comparison data of its weak structure is
// exposed as explicit inverse components.

class PullbackFunctor {
public:
  PullbackFunctor(SliceView from, SliceView to, Mor s) : from_(from), to_(to), s_(s) {
    Bound b = infer(s, from.base());
    if (nf(b.dom, from.base()) != nf(to.sigma(), from.base()) ||
        nf(b.cod, from.base()) != nf(from.sigma(), from.base()))
      fail(Err::BoundaryMismatch, "pullback functor needs s : sigma -> tau");
  }

  const SliceView& from() const { return from_; }
  const SliceView& to() const { return to_; }
  Mor s() const { return s_; }

  SObj obj(const SObj& x) const { return SObj{pb_p1(s_, x.display)}; }

  SMor mor(const SMor& k) const {
    Mor u = pb_pair(s_, k.to.display, pb_p1(s_, k.from.display),
                    comp(k.under, pb_p2(s_, k.from.display)));
    return to_.mk(obj(k.from), obj(k.to), u);
  }

  // Comparison inverses witnessing lcc-ness (weak functor data).
  // terminal: to.terminal -> obj(from.terminal)
  SMor inv_tm() const {
    Obj sg = to_.sigma();
    Mor u = pb_pair(s_, from_.terminal().display, mor_id(sg), s_);
    return to_.mk(to_.terminal(), obj(from_.terminal()), u);
  }

  // pullback: to.pb(mor k1, mor k2) -> obj(from.pb(k1, k2))
  SMor inv_pb(const SMor& k1, const SMor& k2) const {
    SMor i1 = mor(k1), i2 = mor(k2);
    SObj tpb = to_.pb(i1, i2);
    Mor w1 = pb_p1(i1.under, i2.under);  // -> Pb(s, x.display)
    Mor w2 = pb_p2(i1.under, i2.under);  // -> Pb(s, y.display)
    // to sigma, then pair into the base pullback of the underlying cospan
    Mor to_sigma = comp(pb_p1(s_, k1.from.display), w1);
    Mor leg1 = comp(pb_p2(s_, k1.from.display), w1);
    Mor leg2 = comp(pb_p2(s_, k2.from.display), w2);
    Mor into_base_pb = pb_pair(k1.under, k2.under, leg1, leg2);
    Mor u = pb_pair(s_, from_.pb(k1, k2).display, to_sigma, into_base_pb);
    return to_.mk(tpb, obj(from_.pb(k1, k2)), u);
  }

  // dependent product: to.pi(mor m1, mor mg) -> obj(from.pi(m1, mg))
  SMor inv_pi(const SMor& m1, const SMor& mg) const {
    SMor i1 = mor(m1), ig = mor(mg);
    SObj tpi = to_.pi(i1, ig);
    Mor pim = pi_map(i1.under, ig.under);  // Q -> Pb(s, c.display)
    Mor to_sigma = comp(pb_p1(s_, m1.to.display), pim);
    // f2' : Q -> dom(from-Pi display codomain) through the tau-side component
    Mor f2p = comp(pb_p2(s_, m1.to.display), pim);
    // mediate n : Pb(m1.under, f2p) -> Pb(i1.under, pim)
    Mor n1 = pb_pair(s_, m1.from.display, comp(to_sigma, pb_p2(m1.under, f2p)),
                     pb_p1(m1.under, f2p));
    Mor n = pb_pair(i1.under, pim, n1, pb_p2(m1.under, f2p));
    Mor e = comp(pb_p2(s_, mg.from.display), comp(pi_eval(i1.under, ig.under), n));
    Mor q2 = slcc::curry(m1.under, mg.under, f2p, e);
    Mor u = pb_pair(s_, from_.pi(m1, mg).display, to_sigma, q2);
    return to_.mk(tpi, obj(from_.pi(m1, mg)), u);
  }

private:
  SliceView from_, to_;
  Mor s_;
};

// sigma^* : base -> slice(sigma), the pullback along sigma -> 1.
inline PullbackFunctor sigma_star(PresPtr base, Obj sigma, const EqState* facts = nullptr) {
  SliceView over_one(base, obj_one(), facts);
  SliceView over_sigma(base, sigma, facts);
  return PullbackFunctor(over_one, over_sigma, bang(sigma));
}

// ---------------------------------------------------------------------------
// Canonical Sigma and Pi functors along s : sigma -> tau and the adjunction
// transposes Sigma_s -| s^* -| Pi_s.

class SigmaFunctor {
public:
  SigmaFunctor(SliceView from, SliceView to, Mor s) : from_(from), to_(to), s_(s) {}
  SObj obj(const SObj& x) const { return SObj{comp(s_, x.display)}; }
  SMor mor(const SMor& k) const { return to_.mk(obj(k.from), obj(k.to), k.under); }
  Mor s() const { return s_; }

private:
  SliceView from_, to_;
  Mor s_;
};

class PiFunctor {
public:
  PiFunctor(SliceView from, SliceView to, Mor s) : from_(from), to_(to), s_(s) {}
  SObj obj(const SObj& x) const { return SObj{pi_map(s_, x.display)}; }
  SMor mor(const SMor& k) const {
    Mor u = slcc::curry(s_, k.to.display, pi_map(s_, k.from.display),
                        comp(k.under, pi_eval(s_, k.from.display)));
    return to_.mk(obj(k.from), obj(k.to), u);
  }
  Mor s() const { return s_; }

private:
  SliceView from_, to_;
  Mor s_;
};

// Adjoint mates.  sigma-side: Hom_tau(Sigma_s x, y) ~ Hom_sigma(x, s^* y);
// pi-side: Hom_sigma(s^* y, x) ~ Hom_tau(y, Pi_s x).
struct SliceAdjunction {
  SliceView lo;  // slice over sigma
  SliceView hi;  // slice over tau
  Mor s;         // sigma -> tau

  // k : Sigma_s x -> y over tau, to x -> s^* y over sigma
  SMor sigma_transpose_fwd(const SObj& x, const SObj& y, const SMor& k) const {
    Mor u = pb_pair(s, y.display, x.display, k.under);
    return lo.mk(x, SObj{pb_p1(s, y.display)}, u);
  }
  // m : x -> s^* y over sigma, to Sigma_s x -> y over tau
  SMor sigma_transpose_bwd(const SObj& x, const SObj& y, const SMor& m) const {
    Mor u = comp(pb_p2(s, y.display), m.under);
    return hi.mk(SObj{comp(s, x.display)}, y, u);
  }
  // k : s^* y -> x over sigma, to y -> Pi_s x over tau
  SMor pi_transpose_fwd(const SObj& x, const SObj& y, const SMor& k) const {
    Mor u = slcc::curry(s, x.display, y.display, k.under);
    return hi.mk(y, SObj{pi_map(s, x.display)}, u);
  }
  // m : y -> Pi_s x over tau, to s^* y -> x over sigma
  SMor pi_transpose_bwd(const SObj& x, const SObj& y, const SMor& m) const {
    Mor f2m = pi_map(s, x.display);
    Mor u = comp(pi_eval(s, x.display),
                 pb_pair(s, f2m, pb_p1(s, y.display), comp(m.under, pb_p2(s, y.display))));
    return lo.mk(SObj{pb_p1(s, y.display)}, x, u);
  }
};

inline SliceAdjunction slice_adjunction(PresPtr base, Mor s, const EqState* facts = nullptr) {
  Bound b = infer(s, *base);
  return SliceAdjunction{SliceView(base, b.dom, facts), SliceView(base, b.cod, facts), s};
}

}  // namespace slcc
