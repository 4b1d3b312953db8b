#pragma once

// Homomorphic extension of generator assignments.  apply_obj/apply_mor send
// each canonical constructor to the target's canonical constructor and are
// purely syntactic; strict functoriality of substitution is a theorem of this
// representation (no normalization happens here).

#include "slcc/presentation.hpp"

namespace slcc {

// A target must provide the canonical-structure surface plus generator and
// marking images.  Presentations, slice views and finite models all fit.
template <class T>
concept ApplyTarget = requires(T t, Name n, MarkId mk, typename T::O o, typename T::M m) {
  { t.gen_obj(n) } -> std::same_as<typename T::O>;
  { t.gen_mor(n) } -> std::same_as<typename T::M>;
  { t.one() } -> std::same_as<typename T::O>;
  { t.id(o) } -> std::same_as<typename T::M>;
  { t.compose(m, m) } -> std::same_as<typename T::M>;
  { t.bang(o) } -> std::same_as<typename T::M>;
  { t.pb(m, m) } -> std::same_as<typename T::O>;
  { t.p1(m, m) } -> std::same_as<typename T::M>;
  { t.p2(m, m) } -> std::same_as<typename T::M>;
  { t.pair(m, m, m, m) } -> std::same_as<typename T::M>;
  { t.pi(m, m) } -> std::same_as<typename T::O>;
  { t.pimap(m, m) } -> std::same_as<typename T::M>;
  { t.eval(m, m) } -> std::same_as<typename T::M>;
  { t.curry(m, m, m, m) } -> std::same_as<typename T::M>;
  { t.markinv(mk) } -> std::same_as<typename T::M>;
  { t.lifted(Obj{}) } -> std::same_as<typename T::O>;
  { t.liftedgen(Mor{}) } -> std::same_as<typename T::M>;
};

template <class T>
typename T::O apply_obj(T& t, Obj x);

template <class T>
typename T::M apply_mor(T& t, Mor m);

template <class T>
typename T::O apply_obj(T& t, Obj x) {
  ObjNode n = node(x);
  switch (n.k) {
    case ObjK::Gen: return t.gen_obj(n.name);
    case ObjK::One: return t.one();
    case ObjK::Pb: return t.pb(apply_mor(t, n.m1), apply_mor(t, n.m2));
    case ObjK::Pi: return t.pi(apply_mor(t, n.m1), apply_mor(t, n.m2));
    case ObjK::Lifted: return t.lifted(n.sub);
  }
  fail(Err::IllFormed, "apply_obj");
}

template <class T>
typename T::M apply_mor(T& t, Mor m) {
  MorNode n = node(m);
  switch (n.k) {
    case MorK::Gen: return t.gen_mor(n.name);
    case MorK::Id: return t.id(apply_obj(t, n.a));
    case MorK::Comp: return t.compose(apply_mor(t, n.m1), apply_mor(t, n.m2));
    case MorK::Bang: return t.bang(apply_obj(t, n.a));
    case MorK::P1: return t.p1(apply_mor(t, n.m1), apply_mor(t, n.m2));
    case MorK::P2: return t.p2(apply_mor(t, n.m1), apply_mor(t, n.m2));
    case MorK::PbPair:
      return t.pair(apply_mor(t, n.m1), apply_mor(t, n.m2), apply_mor(t, n.m3),
                    apply_mor(t, n.m4));
    case MorK::PiMap: return t.pimap(apply_mor(t, n.m1), apply_mor(t, n.m2));
    case MorK::Eval: return t.eval(apply_mor(t, n.m1), apply_mor(t, n.m2));
    case MorK::Curry:
      return t.curry(apply_mor(t, n.m1), apply_mor(t, n.m2), apply_mor(t, n.m3),
                     apply_mor(t, n.m4));
    case MorK::MarkInv: return t.markinv(n.mark);
    case MorK::LiftedGen: return t.liftedgen(n.sub);
  }
  fail(Err::IllFormed, "apply_mor");
}

// ---------------------------------------------------------------------------
// Strict functors between presentations, given by generator assignments.
// Substitutions of the cwf are exactly these (built by the generated
// operations; see cwf.hpp).

struct Subst {
  PresPtr src, dst;
  std::map<Name, Obj> omap;
  std::map<Name, Mor> mmap;
  std::map<MarkId, MarkId> kmap;  // marking images (sketch-morphism data)

  friend bool operator==(const Subst& a, const Subst& b) {
    return a.omap == b.omap && a.mmap == b.mmap && a.kmap == b.kmap;
  }
};

namespace detail {

struct PresTarget {
  using O = Obj;
  using M = Mor;
  const Subst& F;
  O gen_obj(Name n) {
    auto it = F.omap.find(n);
    if (it == F.omap.end())
      fail(Err::IllFormed, "no image for object generator " + store().name_str(n));
    return it->second;
  }
  M gen_mor(Name n) {
    auto it = F.mmap.find(n);
    if (it == F.mmap.end())
      fail(Err::IllFormed, "no image for morphism generator " + store().name_str(n));
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
  M markinv(MarkId mk) {
    auto it = F.kmap.find(mk);
    if (it == F.kmap.end())
      fail(Err::IllFormed, "functor has no image for a realized marking");
    return mark_inv(it->second);
  }
  O lifted(Obj) { fail(Err::IllFormed, "lifted term outside a lift presentation"); }
  M liftedgen(Mor) { fail(Err::IllFormed, "lifted term outside a lift presentation"); }
};

}  // namespace detail

inline Obj apply(const Subst& F, Obj x) {
  detail::PresTarget t{F};
  return apply_obj(t, x);
}

inline Mor apply(const Subst& F, Mor m) {
  detail::PresTarget t{F};
  return apply_mor(t, m);
}

inline Subst identity_subst(PresPtr P) {
  Subst s;
  s.src = P;
  s.dst = P;
  for (Name n : P->obj_gens) s.omap[n] = obj_gen(n);
  for (Name n : P->mor_gen_order) s.mmap[n] = mor_gen(n);
  for (MarkId m : P->markings) s.kmap[m] = m;
  return s;
}

// g after f, as an assignment: generators of f.src through f then g.
inline Subst compose_subst(const Subst& g, const Subst& f) {
  Subst r;
  r.src = f.src;
  r.dst = g.dst;
  for (const auto& [n, x] : f.omap) r.omap[n] = apply(g, x);
  for (const auto& [n, m] : f.mmap) r.mmap[n] = apply(g, m);
  for (const auto& [mk, im] : f.kmap) {
    auto it = g.kmap.find(im);
    if (it != g.kmap.end()) r.kmap[mk] = it->second;
  }
  return r;
}

// Boundary preservation of an assignment, checked on the generators.
inline void check_subst(const Subst& F) {
  for (const auto& [n, x] : F.omap) check_obj(x, *F.dst);
  for (const auto& [n, m] : F.mmap) {
    const MorGenInfo* gi = F.src->mor_gen(n);
    if (!gi) fail(Err::IllFormed, "assignment names unknown generator");
    Bound b = infer(m, *F.dst);
    Obj want_dom = apply(F, gi->dom);
    Obj want_cod = apply(F, gi->cod);
    if (nf(b.dom, *F.dst) != nf(want_dom, *F.dst) || nf(b.cod, *F.dst) != nf(want_cod, *F.dst))
      fail(Err::BoundaryMismatch,
           "assignment does not preserve the boundary of " + store().name_str(n));
  }
}

}  // namespace slcc
