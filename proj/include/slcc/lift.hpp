#pragma once

// The lazy lift F(G(Gamma)): unit and counit of the free-forgetful adjunction
// on terms, plus lazy realization of the lift's markings.  A lift presentation
// never materializes its generators; Lifted/LiftedGen leaves carry base terms
// (normalized for marking-key stability), and markings are realized on demand
// with a record of where they came from.

#include "slcc/rewrite.hpp"

namespace slcc {

// eta: the one-generator embedding of a base term.  Not homomorphic: a
// compound term becomes a single lifted generator.
inline Obj eta_embed(Obj x, const Presentation& G) {
  if (G.origin == OriginK::Lift) fail(Err::AlreadyLifted, "context is already a lift");
  check_obj(x, G);
  return obj_lifted(x);
}

inline Mor eta_embed(Mor f, const Presentation& G) {
  if (G.origin == OriginK::Lift) fail(Err::AlreadyLifted, "context is already a lift");
  infer(f, G);
  return mor_lifted_gen(f);
}

// ---------------------------------------------------------------------------
// Lazy lift markings.  All payloads are normalized over the base before the
// marking tuple is interned, so equal diagrams share one marking.

inline MarkId lift_mark_tm_one(const Presentation& L) {
  MarkId m = mk_tm_marking(obj_lifted(obj_one()));
  if (!L.has_marking(m)) L.add_lazy_marking(m, LiftMarkInfo{LiftMarkInfo::TmOne, {}, {}, 0});
  return m;
}

inline MarkId lift_mark_pb_canonical(const Presentation& L, Mor f1, Mor f2) {
  const Presentation& B = L.base();
  Mor nf1 = nf(f1, B), nf2 = nf(f2, B);
  Mor ef1 = mor_lifted_gen(nf1), ef2 = mor_lifted_gen(nf2);
  Mor ep1 = mor_lifted_gen(nf(pb_p1(nf1, nf2), B));
  Mor ep2 = mor_lifted_gen(nf(pb_p2(nf1, nf2), B));
  MarkId m = mk_pb_marking(ef1, ef2, ep1, ep2);
  if (!L.has_marking(m))
    L.add_lazy_marking(m, LiftMarkInfo{LiftMarkInfo::PbCanonical, nf1, nf2, 0});
  return m;
}

inline MarkId lift_mark_pi_canonical(const Presentation& L, Mor f1, Mor g) {
  const Presentation& B = L.base();
  Mor nf1 = nf(f1, B), ng = nf(g, B);
  Mor pim = pi_map(nf1, ng);
  // the evaluation square of the dependent product is the canonical pullback
  lift_mark_pb_canonical(L, nf1, pim);
  Mor ef1 = mor_lifted_gen(nf1), eg = mor_lifted_gen(ng);
  Mor ef2 = mor_lifted_gen(nf(pim, B));
  Mor ep1 = mor_lifted_gen(nf(pb_p1(nf1, pim), B));
  Mor ep2 = mor_lifted_gen(nf(pb_p2(nf1, pim), B));
  Mor eev = mor_lifted_gen(nf(pi_eval(nf1, ng), B));
  MarkId m = mk_pi_marking(ef1, eg, ef2, ep1, ep2, eev);
  if (!L.has_marking(m))
    L.add_lazy_marking(m, LiftMarkInfo{LiftMarkInfo::PiCanonical, nf1, ng, 0});
  return m;
}

// eta-image of a realized base marking
inline MarkId lift_mark_base(const Presentation& L, MarkId m0) {
  const Presentation& B = L.base();
  if (!B.has_marking(m0)) fail(Err::IllFormed, "lift of an unrealized base marking");
  MarkingData d = marking(m0);
  MarkId m = 0;
  switch (d.shape) {
    case Shape::Tm: {
      m = mk_tm_marking(obj_lifted(nf(d.t, B)));
      if (!L.has_marking(m)) L.add_lazy_marking(m, LiftMarkInfo{LiftMarkInfo::TmBase, {}, {}, m0});
      break;
    }
    case Shape::Pb: {
      m = mk_pb_marking(mor_lifted_gen(nf(d.f1, B)), mor_lifted_gen(nf(d.f2, B)),
                        mor_lifted_gen(nf(d.p1, B)), mor_lifted_gen(nf(d.p2, B)));
      if (!L.has_marking(m)) L.add_lazy_marking(m, LiftMarkInfo{LiftMarkInfo::PbBase, {}, {}, m0});
      break;
    }
    case Shape::Pi: {
      lift_mark_base(L, pi_marking_pb_part(m0));
      m = mk_pi_marking(mor_lifted_gen(nf(d.f1, B)), mor_lifted_gen(nf(d.g, B)),
                        mor_lifted_gen(nf(d.f2, B)), mor_lifted_gen(nf(d.p1, B)),
                        mor_lifted_gen(nf(d.p2, B)), mor_lifted_gen(nf(d.eps, B)));
      if (!L.has_marking(m)) L.add_lazy_marking(m, LiftMarkInfo{LiftMarkInfo::PiBase, {}, {}, m0});
      break;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// eps: the counit collapse, replacing each lifted leaf by its payload and
// every canonical constructor by the same constructor over the base.  Left
// inverse of the homomorphic lifting; eps(eta(x)) = x on the nose.

inline Obj eps_collapse(Obj t, const Presentation& L);
inline Mor eps_collapse(Mor t, const Presentation& L);

inline Obj eps_collapse(Obj t, const Presentation& L) {
  ObjNode n = node(t);
  switch (n.k) {
    case ObjK::Gen: fail(Err::IllFormed, "lift presentations have no named generators");
    case ObjK::One: return obj_one();
    case ObjK::Pb: return pb_obj(eps_collapse(n.m1, L), eps_collapse(n.m2, L));
    case ObjK::Pi: return pi_obj(eps_collapse(n.m1, L), eps_collapse(n.m2, L));
    case ObjK::Lifted: return n.sub;
  }
  fail(Err::IllFormed, "eps_collapse");
}

inline Mor eps_collapse(Mor t, const Presentation& L) {
  MorNode n = node(t);
  switch (n.k) {
    case MorK::Gen: fail(Err::IllFormed, "lift presentations have no named generators");
    case MorK::Id: return mor_id(eps_collapse(n.a, L));
    case MorK::Comp: return comp(eps_collapse(n.m1, L), eps_collapse(n.m2, L));
    case MorK::Bang: return bang(eps_collapse(n.a, L));
    case MorK::P1: return pb_p1(eps_collapse(n.m1, L), eps_collapse(n.m2, L));
    case MorK::P2: return pb_p2(eps_collapse(n.m1, L), eps_collapse(n.m2, L));
    case MorK::PbPair:
      return pb_pair(eps_collapse(n.m1, L), eps_collapse(n.m2, L), eps_collapse(n.m3, L),
                     eps_collapse(n.m4, L));
    case MorK::PiMap: return pi_map(eps_collapse(n.m1, L), eps_collapse(n.m2, L));
    case MorK::Eval: return pi_eval(eps_collapse(n.m1, L), eps_collapse(n.m2, L));
    case MorK::Curry:
      return curry(eps_collapse(n.m1, L), eps_collapse(n.m2, L), eps_collapse(n.m3, L),
                   eps_collapse(n.m4, L));
    case MorK::MarkInv: {
      const LiftMarkInfo* info = L.lift_mark_info(n.mark);
      if (!info) fail(Err::IllFormed, "MarkInv of an unrealized lift marking");
      switch (info->k) {
        case LiftMarkInfo::TmOne: return mor_id(obj_one());
        case LiftMarkInfo::PbCanonical: return mor_id(pb_obj(info->f1, info->f2g));
        case LiftMarkInfo::PiCanonical: return mor_id(pi_obj(info->f1, info->f2g));
        case LiftMarkInfo::TmBase:
        case LiftMarkInfo::PbBase:
        case LiftMarkInfo::PiBase: return mark_inv(info->base_mark);
      }
      fail(Err::IllFormed, "eps_collapse markinv");
    }
    case MorK::LiftedGen: return n.sub;
  }
  fail(Err::IllFormed, "eps_collapse");
}

}  // namespace slcc
