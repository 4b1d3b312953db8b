#pragma once

// Three-valued equality oracle: rewrite to normal form, then congruence
// closure over presentation equations, registered facts, and sound axiom
// instances; a Distinct verdict requires a concrete separating finite-model
// assignment.  Unknown is an honest outcome, never a guess.

#include "slcc/finlcc.hpp"
#include "slcc/rewrite.hpp"

namespace slcc {

enum class VerdictK { Equal, Distinct, Unknown };

struct Verdict {
  VerdictK k = VerdictK::Unknown;
  std::vector<TraceStep> trace;
  std::optional<FinAssign> countermodel;
  std::string note;
  bool equal() const { return k == VerdictK::Equal; }
};

// Context-local congruence facts (equality reflection lands here).
struct EqState {
  std::vector<std::pair<Mor, Mor>> facts;
};

inline void register_fact(EqState& st, const Presentation& P, Mor t, Mor u) {
  Bound bt = infer(t, P);
  Bound bu = infer(u, P);
  if (nf(bt.dom, P) != nf(bu.dom, P) || nf(bt.cod, P) != nf(bu.cod, P))
    fail(Err::BoundaryMismatch, "registered fact sides must be parallel");
  if (t == u) return;  // no-op
  st.facts.emplace_back(t, u);
}

struct EqOptions {
  long long budget = 10000;
  std::vector<const FinStrictLcc*> models = {};  // countermodel search targets
  const EqState* state = nullptr;
  bool want_trace = false;
  size_t closure_cap = 4000;
  int closure_rounds = 3;
  long long countermodel_cap = 100000;
};

// ---------------------------------------------------------------------------
// Congruence closure over the shared term graph.  Objects and morphisms both
// enter the universe so that merged morphisms merge the canonical objects
// built from them.

class Closure {
public:
  Closure(const Presentation& P, Budget& budget) : P_(P), rw_(P, budget), budget_(budget) {}

  int add(Mor m) {
    uint64_t key = (static_cast<uint64_t>(m.id) << 1) | 1;
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    MorNode n = node(m);
    Entry e;
    e.is_obj = false;
    e.id = m.id;
    switch (n.k) {
      case MorK::Gen: e.lit = n.name; break;
      case MorK::Id: e.kids = {add(n.a)}; break;
      case MorK::Comp: e.kids = {add(n.m1), add(n.m2)}; break;
      case MorK::Bang: e.kids = {add(n.a)}; break;
      case MorK::P1:
      case MorK::P2:
      case MorK::PiMap:
      case MorK::Eval: e.kids = {add(n.m1), add(n.m2)}; break;
      case MorK::PbPair:
      case MorK::Curry: e.kids = {add(n.m1), add(n.m2), add(n.m3), add(n.m4)}; break;
      case MorK::MarkInv: e.lit = n.mark; break;
      case MorK::LiftedGen: e.lit = n.sub.id; break;
    }
    e.kind = 100 + static_cast<int>(n.k);
    return insert(key, std::move(e));
  }

  int add(Obj o) {
    uint64_t key = static_cast<uint64_t>(o.id) << 1;
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    ObjNode n = node(o);
    Entry e;
    e.is_obj = true;
    e.id = o.id;
    switch (n.k) {
      case ObjK::Gen: e.lit = n.name; break;
      case ObjK::One: break;
      case ObjK::Pb:
      case ObjK::Pi: e.kids = {add(n.m1), add(n.m2)}; break;
      case ObjK::Lifted: e.lit = n.sub.id; break;
    }
    e.kind = static_cast<int>(n.k);
    return insert(key, std::move(e));
  }

  void merge(int a, int b) { parent_[find(a)] = find(b); }

  bool same(int a, int b) { return find(a) == find(b); }

  size_t size() const { return entries_.size(); }

  void close() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::unordered_map<std::string, int> seen;
      for (size_t i = 0; i < entries_.size(); ++i) {
        std::string s = sig(static_cast<int>(i));
        auto [it, fresh] = seen.emplace(s, static_cast<int>(i));
        if (!fresh && !same(it->second, static_cast<int>(i))) {
          merge(it->second, static_cast<int>(i));
          changed = true;
        }
      }
    }
  }

  // Sound axiom instances over the current universe.  Raw application nodes
  // are interned alongside their normal forms so congruence can flow through
  // projections and transposes:
  //   pb0:   f1 . P1(f1,f2) = f2 . P2(f1,f2)
  //   pbeta: P1 . m and P2 . m are linked to their reducts, and
  //          <P1.m, P2.m> = m for every m into a canonical vertex
  //   pieta: PiMap . m and the eval transpose are linked, Curry(...) = m.
  void instantiate(size_t cap) {
    size_t n0 = entries_.size();
    for (size_t i = 0; i < n0 && entries_.size() < cap; ++i) {
      Entry e = entries_[i];
      if (budget_.exceeded) return;
      if (e.is_obj) {
        ObjNode on = node(Obj{e.id});
        if (on.k == ObjK::Pb) {
          Mor raw1 = comp(on.m1, pb_p1(on.m1, on.m2));
          Mor raw2 = comp(on.m2, pb_p2(on.m1, on.m2));
          merge(add(raw1), add(rw_.norm(raw1)));
          merge(add(raw2), add(rw_.norm(raw2)));
          merge(add(raw1), add(raw2));
        }
        continue;
      }
      Mor m{e.id};
      // pb0 fires from every node that mentions a pullback cospan
      {
        MorNode mn = node(m);
        if (mn.k == MorK::P1 || mn.k == MorK::P2 || mn.k == MorK::PbPair) {
          try {
            Mor raw1 = comp(mn.m1, pb_p1(mn.m1, mn.m2));
            Mor raw2 = comp(mn.m2, pb_p2(mn.m1, mn.m2));
            merge(add(raw1), add(rw_.norm(raw1)));
            merge(add(raw2), add(rw_.norm(raw2)));
            merge(add(raw1), add(raw2));
          } catch (const Error&) {
          }
        }
        // pi0 through the evaluation: g . ev = P1(f1, PiMap(f1,g)), and its
        // projected variants when g is itself a pairing
        if (mn.k == MorK::Eval) {
          try {
            Mor raw = comp(mn.m2, m);
            merge(add(raw), add(rw_.norm(raw)));
            MorNode gn = node(mn.m2);
            if (gn.k == MorK::PbPair) {
              Mor pm = pi_map(mn.m1, mn.m2);
              Mor l1 = comp(gn.m3, m);
              Mor r1 = comp(pb_p1(gn.m1, gn.m2), pb_p1(mn.m1, pm));
              merge(add(l1), add(rw_.norm(l1)));
              merge(add(rw_.norm(l1)), add(rw_.norm(r1)));
              Mor l2 = comp(gn.m4, m);
              Mor r2 = comp(pb_p2(gn.m1, gn.m2), pb_p1(mn.m1, pm));
              merge(add(l2), add(rw_.norm(l2)));
              merge(add(rw_.norm(l2)), add(rw_.norm(r2)));
            }
          } catch (const Error&) {
          }
        }
      }
      Obj co;
      try {
        co = rw_.norm(infer(m, P_).cod);
      } catch (const Error&) {
        continue;
      }
      // tm2: parallel maps into the terminal agree
      if (co == obj_one()) {
        try {
          Obj d = rw_.norm(infer(m, P_).dom);
          Mor canon = (d == obj_one()) ? mor_id(obj_one()) : slcc::bang(d);
          merge(add(m), add(canon));
        } catch (const Error&) {
        }
        continue;
      }
      ObjNode cn = node(co);
      try {
        if (cn.k == ObjK::Pb) {
          Mor raw1 = comp(pb_p1(cn.m1, cn.m2), m);
          Mor raw2 = comp(pb_p2(cn.m1, cn.m2), m);
          merge(add(raw1), add(rw_.norm(raw1)));
          merge(add(raw2), add(rw_.norm(raw2)));
          Mor rawpair = pb_pair(cn.m1, cn.m2, raw1, raw2);
          merge(add(rawpair), add(rw_.norm(rawpair)));
          merge(add(rawpair), add(m));
        } else if (cn.k == ObjK::Pi) {
          Mor rawm = comp(pi_map(cn.m1, cn.m2), m);
          Mor f2m = rw_.norm(rawm);
          merge(add(rawm), add(f2m));
          Mor rawpair = pb_pair(cn.m1, pi_map(cn.m1, cn.m2), pb_p1(cn.m1, rawm),
                                comp(m, pb_p2(cn.m1, rawm)));
          Mor rawev = comp(pi_eval(cn.m1, cn.m2), rawpair);
          Mor trans = rw_.norm(rawev);
          merge(add(rawev), add(trans));
          Mor cur = curry(cn.m1, cn.m2, f2m, trans);
          merge(add(cur), add(rw_.norm(cur)));
          merge(add(cur), add(m));
        }
      } catch (const Error&) {
        // degenerate instance (boundary clash after a merge): skip it
      }
    }
  }

private:
  struct Entry {
    bool is_obj = false;
    uint32_t id = 0;
    int kind = 0;
    uint32_t lit = 0;
    std::vector<int> kids;
  };

  const Presentation& P_;
  Rewriter rw_;
  Budget& budget_;
  std::vector<Entry> entries_;
  std::vector<int> parent_;
  std::unordered_map<uint64_t, int> index_;

  int insert(uint64_t key, Entry e) {
    entries_.push_back(std::move(e));
    parent_.push_back(static_cast<int>(entries_.size()) - 1);
    index_.emplace(key, static_cast<int>(entries_.size()) - 1);
    return static_cast<int>(entries_.size()) - 1;
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  std::string sig(int i) {
    const Entry& e = entries_[i];
    std::string s = std::to_string(e.kind) + ":" + std::to_string(e.lit);
    for (int k : e.kids) s += "," + std::to_string(find(k));
    return s;
  }
};

// ---------------------------------------------------------------------------

inline Verdict decide_equal(Mor t, Mor u, const Presentation& P, EqOptions opt = {}) {
  Bound bt = infer(t, P);
  Bound bu = infer(u, P);
  Budget budget{opt.budget};
  std::vector<TraceStep> trace;
  Rewriter rw(P, budget, opt.want_trace ? &trace : nullptr);
  Obj dt = rw.norm(bt.dom), ct = rw.norm(bt.cod);
  Obj du = rw.norm(bu.dom), cu = rw.norm(bu.cod);
  if (dt != du || ct != cu)
    fail(Err::BoundaryMismatch, "decide_equal requires parallel terms");

  Verdict v;

  Mor nt = rw.norm(t);
  Mor nu = rw.norm(u);

  if (nt == nu) {
    v.k = VerdictK::Equal;
    v.note = "normal forms coincide";
    v.trace = std::move(trace);
    return v;
  }

  // terminal-hom collapse: parallel maps into 1 are equal
  if (ct == obj_one()) {
    v.k = VerdictK::Equal;
    v.note = "terminal-hom collapse";
    v.trace = std::move(trace);
    return v;
  }

  // congruence closure over equations, facts, and axiom instances
  {
    Closure cl(P, budget);
    int it = cl.add(nt);
    int iu = cl.add(nu);
    for (const auto& [l, r] : P.equations) cl.merge(cl.add(rw.norm(l)), cl.add(rw.norm(r)));
    if (opt.state)
      for (const auto& [l, r] : opt.state->facts) cl.merge(cl.add(rw.norm(l)), cl.add(rw.norm(r)));
    cl.close();
    for (int round = 0; round < opt.closure_rounds && !cl.same(it, iu); ++round) {
      if (budget.exceeded || cl.size() >= opt.closure_cap) break;
      cl.instantiate(opt.closure_cap);
      cl.close();
    }
    if (cl.same(it, iu)) {
      v.k = VerdictK::Equal;
      v.note = "congruence closure";
      v.trace = std::move(trace);
      return v;
    }
  }

  // countermodel search
  if (!opt.models.empty()) {
    if (auto cm = countermodel_search(nt, nu, P, opt.models, opt.countermodel_cap)) {
      v.k = VerdictK::Distinct;
      v.countermodel = cm;
      v.note = "separated in finite model " + cm->M->name;
      v.trace = std::move(trace);
      return v;
    }
  }

  v.k = VerdictK::Unknown;
  v.note = budget.exceeded ? "budget exceeded" : "no derivation found within budget";
  v.trace = std::move(trace);
  return v;
}

// Type equality in checking is syntactic normal-form equality.
inline bool types_equal(Obj a, Obj b, const Presentation& P) { return nf(a, P) == nf(b, P); }

}  // namespace slcc
