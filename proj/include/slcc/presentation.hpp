#pragma once

// Finitely presented strict lcc categories.
//
// A presentation lists object and morphism generators, equations between
// parallel morphism terms, and realized markings.  Contexts are presentations
// tagged with how they were built: free on a sketch, extension of a parent by
// one variable, or the lazy lift F(G(Gamma)) of a base presentation.

#include "slcc/term.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>

namespace slcc {

struct Bound {
  Obj dom, cod;
  friend bool operator==(const Bound& a, const Bound& b) { return a.dom == b.dom && a.cod == b.cod; }
};

enum class OriginK { Free, Extension, Lift };

// Provenance of a lazily realized lift marking: the eta-image of either a
// canonical universal diagram of the base or of a base marking.
struct LiftMarkInfo {
  enum K { TmOne, TmBase, PbCanonical, PbBase, PiCanonical, PiBase } k;
  Mor f1, f2g;       // canonical cases: the base cospan / Pi input
  MarkId base_mark;  // base-marking cases
};

struct Presentation;
using PresPtr = std::shared_ptr<const Presentation>;

struct MorGenInfo {
  Obj dom, cod;
};

struct Presentation : std::enable_shared_from_this<Presentation> {
  std::vector<Name> obj_gens;                 // declaration order
  std::vector<Name> mor_gen_order;
  std::map<Name, MorGenInfo> mor_gens;
  std::vector<std::pair<Mor, Mor>> equations;
  std::vector<MarkId> markings;               // realized markings

  OriginK origin = OriginK::Free;
  PresPtr parent;      // Extension: parent context; Lift: base presentation
  Obj ext_sigma;       // Extension: the extending type
  Name ext_var = 0;    // Extension: the distinguished variable v : 1 -> sigma

  bool has_obj_gen(Name n) const {
    for (Name g : obj_gens)
      if (g == n) return true;
    return false;
  }
  const MorGenInfo* mor_gen(Name n) const {
    auto it = mor_gens.find(n);
    return it == mor_gens.end() ? nullptr : &it->second;
  }
  bool has_marking(MarkId m) const {
    for (MarkId x : markings)
      if (x == m) return true;
    return lazy_marks_.count(m) > 0;
  }

  const Presentation& base() const {
    if (origin != OriginK::Lift) fail(Err::IllFormed, "not a lift presentation");
    return *parent;
  }

  // Lazy marking realization for lift presentations; see lift.hpp.
  void add_lazy_marking(MarkId m, const LiftMarkInfo& info) const {
    lazy_marks_.insert(m);
    lift_mark_info_.emplace(m, info);
  }
  const std::set<MarkId>& lazy_markings() const { return lazy_marks_; }
  const LiftMarkInfo* lift_mark_info(MarkId m) const {
    auto it = lift_mark_info_.find(m);
    return it == lift_mark_info_.end() ? nullptr : &it->second;
  }

  // memo tables, single-writer or externally synchronized
  mutable std::unordered_map<uint32_t, Bound> mor_bound_memo;
  mutable std::unordered_map<uint32_t, bool> obj_wf_memo;
  mutable std::unordered_map<uint32_t, uint32_t> nf_memo;      // mor -> normal form
  mutable std::unordered_map<uint32_t, uint32_t> nf_obj_memo;  // obj -> normal form
  mutable std::unordered_map<MarkId, Mor> cmp_nf_memo;         // marking -> NF of comparison

private:
  mutable std::set<MarkId> lazy_marks_;
  mutable std::map<MarkId, LiftMarkInfo> lift_mark_info_;
};

// ---------------------------------------------------------------------------
// Boundary inference.  Total on well-formed terms; raises IllFormed naming the
// first violating subterm, BoundaryMismatch for composition/equation clashes.
// Boundary objects produced by different construction routes may differ
// syntactically while sharing a normal form; comparisons bridge through
// normalization (defined in rewrite.hpp).

inline void check_obj(Obj o, const Presentation& P);
inline Bound infer(Mor m, const Presentation& P);

namespace detail {
inline bool obj_bridge_eq(Obj a, Obj b, const Presentation& P);  // defined in rewrite.hpp
}

inline bool beq(Obj a, Obj b, const Presentation& P) {
  return a == b || detail::obj_bridge_eq(a, b, P);
}

// Marked-vertex and canonical-vertex boundaries of a marking's comparison map.
inline Bound marking_cmp_bound(MarkId mk) {
  MarkingData d = marking(mk);
  switch (d.shape) {
    case Shape::Tm: return Bound{d.t, obj_one()};
    case Shape::Pb: {
      // cmp: dom(p1) -> Pb(f1,f2)
      return Bound{{}, pb_obj(d.f1, d.f2)};  // dom filled by caller via infer
    }
    case Shape::Pi: return Bound{{}, pi_obj(d.f1, d.g)};
  }
  return Bound{};
}

inline void check_obj(Obj o, const Presentation& P) {
  auto it = P.obj_wf_memo.find(o.id);
  if (it != P.obj_wf_memo.end()) {
    if (!it->second) fail(Err::IllFormed, "ill-formed object " + to_string(o));
    return;
  }
  P.obj_wf_memo.emplace(o.id, false);
  ObjNode n = node(o);
  switch (n.k) {
    case ObjK::Gen:
      if (!P.has_obj_gen(n.name))
        fail(Err::IllFormed, "unknown object generator " + store().name_str(n.name));
      break;
    case ObjK::One: break;
    case ObjK::Pb: {
      Bound b1 = infer(n.m1, P);
      Bound b2 = infer(n.m2, P);
      if (!beq(b1.cod, b2.cod, P))
        fail(Err::BoundaryMismatch, "pullback cospan codomains differ in " + to_string(o));
      break;
    }
    case ObjK::Pi: {
      Bound b1 = infer(n.m1, P);
      Bound bg = infer(n.m2, P);
      if (!beq(bg.cod, b1.dom, P))
        fail(Err::BoundaryMismatch, "Pi shape requires cod(g) = dom(f1) in " + to_string(o));
      break;
    }
    case ObjK::Lifted: {
      if (P.origin != OriginK::Lift)
        fail(Err::IllFormed, "Lifted object outside a lift presentation: " + to_string(o));
      check_obj(n.sub, P.base());
      break;
    }
  }
  P.obj_wf_memo[o.id] = true;
}

inline Bound infer(Mor m, const Presentation& P) {
  auto it = P.mor_bound_memo.find(m.id);
  if (it != P.mor_bound_memo.end()) return it->second;
  MorNode n = node(m);
  Bound r;
  switch (n.k) {
    case MorK::Gen: {
      const MorGenInfo* gi = P.mor_gen(n.name);
      if (!gi) fail(Err::IllFormed, "unknown morphism generator " + store().name_str(n.name));
      r = Bound{gi->dom, gi->cod};
      break;
    }
    case MorK::Id:
      check_obj(n.a, P);
      r = Bound{n.a, n.a};
      break;
    case MorK::Comp: {
      Bound bf = infer(n.m2, P);
      Bound bg = infer(n.m1, P);
      if (!beq(bf.cod, bg.dom, P))
        fail(Err::BoundaryMismatch,
             "composition boundary mismatch: cod(" + to_string(n.m2) + ") = " + to_string(bf.cod) +
                 " vs dom(" + to_string(n.m1) + ") = " + to_string(bg.dom));
      r = Bound{bf.dom, bg.cod};
      break;
    }
    case MorK::Bang:
      check_obj(n.a, P);
      r = Bound{n.a, obj_one()};
      break;
    case MorK::P1: {
      Obj v = pb_obj(n.m1, n.m2);
      check_obj(v, P);
      r = Bound{v, infer(n.m1, P).dom};
      break;
    }
    case MorK::P2: {
      Obj v = pb_obj(n.m1, n.m2);
      check_obj(v, P);
      r = Bound{v, infer(n.m2, P).dom};
      break;
    }
    case MorK::PbPair: {
      Obj v = pb_obj(n.m1, n.m2);
      check_obj(v, P);
      Bound b1 = infer(n.m3, P);
      Bound b2 = infer(n.m4, P);
      if (!beq(b1.dom, b2.dom, P))
        fail(Err::BoundaryMismatch, "pairing legs have different domains in " + to_string(m));
      if (!beq(b1.cod, infer(n.m1, P).dom, P) || !beq(b2.cod, infer(n.m2, P).dom, P))
        fail(Err::BoundaryMismatch, "pairing legs do not match the cospan in " + to_string(m));
      r = Bound{b1.dom, v};
      break;
    }
    case MorK::PiMap: {
      Obj v = pi_obj(n.m1, n.m2);
      check_obj(v, P);
      r = Bound{v, infer(n.m1, P).cod};
      break;
    }
    case MorK::Eval: {
      Obj v = pi_obj(n.m1, n.m2);
      check_obj(v, P);
      // dom(Eval) = Pb(f1, PiMap(f1,g)), cod(Eval) = dom(g)
      r = Bound{pb_obj(n.m1, pi_map(n.m1, n.m2)), infer(n.m2, P).dom};
      break;
    }
    case MorK::Curry: {
      Obj v = pi_obj(n.m1, n.m2);
      check_obj(v, P);
      Bound bf2p = infer(n.m3, P);
      Bound b1 = infer(n.m1, P);
      if (!beq(bf2p.cod, b1.cod, P))
        fail(Err::BoundaryMismatch, "curry competitor must share cod(f1) in " + to_string(m));
      Bound be = infer(n.m4, P);
      if (!beq(be.dom, pb_obj(n.m1, n.m3), P) || !beq(be.cod, infer(n.m2, P).dom, P))
        fail(Err::BoundaryMismatch,
             "curry body must map Pb(f1,f2') to dom(g) in " + to_string(m));
      r = Bound{bf2p.dom, v};
      break;
    }
    case MorK::MarkInv: {
      if (!P.has_marking(n.mark))
        fail(Err::IllFormed, "MarkInv of a marking not realized in this presentation");
      MarkingData d = marking(n.mark);
      switch (d.shape) {
        case Shape::Tm:
          check_obj(d.t, P);
          r = Bound{obj_one(), d.t};
          break;
        case Shape::Pb: {
          Obj v = pb_obj(d.f1, d.f2);
          check_obj(v, P);
          r = Bound{v, infer(d.p1, P).dom};
          break;
        }
        case Shape::Pi: {
          Obj v = pi_obj(d.f1, d.g);
          check_obj(v, P);
          r = Bound{v, infer(d.f2, P).dom};
          break;
        }
      }
      break;
    }
    case MorK::LiftedGen: {
      if (P.origin != OriginK::Lift)
        fail(Err::IllFormed, "LiftedGen outside a lift presentation: " + to_string(m));
      Bound b = infer(n.sub, P.base());
      r = Bound{obj_lifted(b.dom), obj_lifted(b.cod)};
      break;
    }
  }
  P.mor_bound_memo.emplace(m.id, r);
  return r;
}

inline bool well_formed(Mor m, const Presentation& P) {
  try {
    infer(m, P);
    return true;
  } catch (const Error&) {
    return false;
  }
}

inline bool well_formed(Obj o, const Presentation& P) {
  try {
    check_obj(o, P);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Marking validation and realization.
//
// Realizing a marking enables its MarkInv constructor; the two inverse-law
// equations are implemented as rewrite rules keyed on the marking (rewrite.hpp).
// Realizing a Pi marking also realizes its pullback part, which the comparison
// map of the Pi part factors through.

inline void validate_marking(MarkId mk, const Presentation& P) {
  MarkingData d = marking(mk);
  switch (d.shape) {
    case Shape::Tm:
      check_obj(d.t, P);
      break;
    case Shape::Pb: {
      Bound b1 = infer(d.f1, P), b2 = infer(d.f2, P);
      Bound bp1 = infer(d.p1, P), bp2 = infer(d.p2, P);
      if (!beq(b1.cod, b2.cod, P) || !beq(bp1.dom, bp2.dom, P) || !beq(bp1.cod, b1.dom, P) ||
          !beq(bp2.cod, b2.dom, P))
        fail(Err::MalformedMarking, "Pb marking tuple does not form a square");
      break;
    }
    case Shape::Pi: {
      Bound b1 = infer(d.f1, P), bg = infer(d.g, P), b2 = infer(d.f2, P);
      Bound bp1 = infer(d.p1, P), bp2 = infer(d.p2, P), be = infer(d.eps, P);
      if (!beq(bg.cod, b1.dom, P)) fail(Err::MalformedMarking, "Pi marking: cod(g) != dom(f1)");
      if (!beq(b2.cod, b1.cod, P)) fail(Err::MalformedMarking, "Pi marking: cod(f2) != cod(f1)");
      if (!beq(bp1.dom, bp2.dom, P) || !beq(bp1.dom, be.dom, P))
        fail(Err::MalformedMarking, "Pi marking: square vertex mismatch");
      if (!beq(bp1.cod, b1.dom, P) || !beq(bp2.cod, b2.dom, P))
        fail(Err::MalformedMarking, "Pi marking: projections do not match the cospan");
      if (!beq(be.cod, bg.dom, P)) fail(Err::MalformedMarking, "Pi marking: eps must target dom(g)");
      break;
    }
  }
}

// Pullback part of a Pi marking: the square (f1, f2m, p1, p2).
inline MarkId pi_marking_pb_part(MarkId mk) {
  MarkingData d = marking(mk);
  return mk_pb_marking(d.f1, d.f2, d.p1, d.p2);
}

// The comparison map of a realized marking into the canonical universal
// object.  For Pi markings the evaluation leg travels through the inverse of
// the pullback part's comparison.
inline Mor marking_cmp(MarkId mk) {
  MarkingData d = marking(mk);
  switch (d.shape) {
    case Shape::Tm: return bang(d.t);
    case Shape::Pb: return pb_pair(d.f1, d.f2, d.p1, d.p2);
    case Shape::Pi: {
      MarkId pb_part = pi_marking_pb_part(mk);
      Mor e = comp(d.eps, mark_inv(pb_part));
      return curry(d.f1, d.g, d.f2, e);
    }
  }
  return Mor{};
}

// ---------------------------------------------------------------------------
// mk_presentation

struct ArrowDecl {
  std::string name;
  Obj dom, cod;
};

inline PresPtr mk_presentation(const std::vector<std::string>& obj_gens,
                               const std::vector<ArrowDecl>& mor_gens,
                               const std::vector<std::pair<Mor, Mor>>& equations,
                               const std::vector<MarkId>& markings) {
  auto P = std::make_shared<Presentation>();
  P->origin = OriginK::Free;
  std::set<std::string> seen;
  for (const auto& o : obj_gens) {
    if (!seen.insert(o).second) fail(Err::DuplicateName, "duplicate object generator " + o);
    P->obj_gens.push_back(store().name(o));
  }
  for (const auto& a : mor_gens) {
    if (!seen.insert(a.name).second) fail(Err::DuplicateName, "duplicate generator " + a.name);
    Name n = store().name(a.name);
    P->mor_gen_order.push_back(n);
    P->mor_gens.emplace(n, MorGenInfo{a.dom, a.cod});
  }
  // generator boundaries must themselves be well-formed
  for (const auto& [n, gi] : P->mor_gens) {
    check_obj(gi.dom, *P);
    check_obj(gi.cod, *P);
  }
  for (const auto& [l, r] : equations) {
    Bound bl = infer(l, *P);
    Bound br = infer(r, *P);
    if (!beq(bl.dom, br.dom, *P) || !beq(bl.cod, br.cod, *P))
      fail(Err::BoundaryMismatch,
           "equation sides have different boundaries: " + to_string(l) + " = " + to_string(r));
    P->equations.emplace_back(l, r);
  }
  for (MarkId mk : markings) {
    validate_marking(mk, *P);
    if (marking(mk).shape == Shape::Pi) {
      MarkId part = pi_marking_pb_part(mk);
      if (!P->has_marking(part)) P->markings.push_back(part);
    }
    if (!P->has_marking(mk)) P->markings.push_back(mk);
  }
  return P;
}

inline PresPtr empty_presentation() { return mk_presentation({}, {}, {}, {}); }

// The lazy lift F(G(base)): one object generator per base object term, one
// morphism generator per base morphism term, realized markings on demand.
inline PresPtr mk_lift(PresPtr base) {
  if (base->origin == OriginK::Lift) fail(Err::AlreadyLifted, "cannot lift a lift presentation");
  auto P = std::make_shared<Presentation>();
  P->origin = OriginK::Lift;
  P->parent = std::move(base);
  return P;
}

}  // namespace slcc
