#pragma once

// Oriented rewrite rules for the equational theory of strict lcc categories.
//
// Composites are normalized on flattened spines (associativity and unit laws
// are implicit).  Beta-like rules rewrite left to right; eta/uniqueness rules
// collapse a term when a witness is syntactically recoverable and verifiable.
// Normalization is deterministic (innermost-first, fixed rule order) and
// budget-bounded; exceeding the budget returns the best term so far with a
// flag, never an unsound one.

#include "slcc/presentation.hpp"

#include <algorithm>

namespace slcc {

struct Budget {
  long long steps = 10000;
  bool exceeded = false;
  bool step() {
    if (exceeded || steps <= 0) {
      exceeded = true;
      return false;
    }
    --steps;
    return true;
  }
};

struct TraceStep {
  const char* rule;
  std::string pos;
  Mor before, after;
};

class Rewriter {
public:
  Rewriter(const Presentation& P, Budget& budget, std::vector<TraceStep>* trace = nullptr)
      : P_(P), budget_(budget), trace_(trace) {}

  Obj norm(Obj o) {
    if (trace_ == nullptr) {
      auto it = P_.nf_obj_memo.find(o.id);
      if (it != P_.nf_obj_memo.end()) return Obj{it->second};
    }
    ObjNode n = node(o);
    Obj r = o;
    switch (n.k) {
      case ObjK::Gen:
      case ObjK::One: r = o; break;
      case ObjK::Pb: r = pb_obj(norm(n.m1), norm(n.m2)); break;
      case ObjK::Pi: r = pi_obj(norm(n.m1), norm(n.m2)); break;
      case ObjK::Lifted: r = obj_lifted(base_rewriter().norm(n.sub)); break;
    }
    if (!budget_.exceeded) P_.nf_obj_memo.emplace(o.id, r.id);
    return r;
  }

  Mor norm(Mor m) {
    if (trace_ == nullptr) {
      auto it = P_.nf_memo.find(m.id);
      if (it != P_.nf_memo.end()) return Mor{it->second};
    }
    Bound b = infer(m, P_);
    Obj ndom = norm(b.dom);
    std::vector<Mor> raw = spine(m);
    std::vector<Mor> fs;
    fs.reserve(raw.size());
    for (Mor f : raw) {
      Mor a = atom(f);
      flatten_into(a, fs);  // eta collapses may return composites
    }
    run_passes(fs, ndom, m);
    Mor r = unspine(fs, ndom);
    if (!budget_.exceeded) P_.nf_memo.emplace(m.id, r.id);
    return r;
  }

  // Normal form of a marking's comparison map.
  Mor cmp_nf(MarkId mk) {
    auto it = P_.cmp_nf_memo.find(mk);
    if (it != P_.cmp_nf_memo.end()) return it->second;
    Mor c = norm(marking_cmp(mk));
    if (!budget_.exceeded) P_.cmp_nf_memo.emplace(mk, c);
    return c;
  }

private:
  const Presentation& P_;
  Budget& budget_;
  std::vector<TraceStep>* trace_;
  std::unique_ptr<Rewriter> base_rw_;

  Rewriter& base_rewriter() {
    if (!base_rw_) base_rw_ = std::make_unique<Rewriter>(P_.base(), budget_, trace_);
    return *base_rw_;
  }

  void emit(const char* rule, const std::string& pos, Mor before, Mor after) {
    if (trace_) trace_->push_back(TraceStep{rule, pos, before, after});
  }

  bool is_id(Mor f) const { return node(f).k == MorK::Id; }

  Obj cod_of(Mor f) { return infer(f, P_).cod; }
  Obj dom_of(Mor f) { return infer(f, P_).dom; }

  // ---- atom normalization (non-Comp constructors) -------------------------

  Mor atom(Mor f) {
    MorNode n = node(f);
    switch (n.k) {
      case MorK::Gen: return f;
      case MorK::Id: return mor_id(norm(n.a));
      case MorK::Comp: return comp(atom_or_norm(n.m1), atom_or_norm(n.m2));
      case MorK::Bang: {
        Obj a = norm(n.a);
        if (a == obj_one()) {
          if (a != n.a && budget_.step()) emit("tm2", "atom", f, mor_id(obj_one()));
          return mor_id(obj_one());
        }
        return bang(a);
      }
      case MorK::P1: return pb_p1(norm(n.m1), norm(n.m2));
      case MorK::P2: return pb_p2(norm(n.m1), norm(n.m2));
      case MorK::PiMap: return pi_map(norm(n.m1), norm(n.m2));
      case MorK::Eval: return pi_eval(norm(n.m1), norm(n.m2));
      case MorK::PbPair: {
        Mor f1 = norm(n.m1), f2 = norm(n.m2), q1 = norm(n.m3), q2 = norm(n.m4);
        Mor pair = pb_pair(f1, f2, q1, q2);
        if (Mor w; try_pb_eta(f1, f2, q1, q2, w)) {
          if (budget_.step()) emit("pb2eta", "atom", pair, w);
          return w;
        }
        return pair;
      }
      case MorK::Curry: {
        Mor f1 = norm(n.m1), g = norm(n.m2), f2p = norm(n.m3), e = norm(n.m4);
        Mor cur = curry(f1, g, f2p, e);
        if (Mor w; try_pi_eta(f1, g, f2p, e, w)) {
          if (budget_.step()) emit("pi2eta", "atom", cur, w);
          return w;
        }
        return cur;
      }
      case MorK::MarkInv: {
        Mor c = cmp_nf(n.mark);
        if (is_id(c)) {
          // marking directly on the canonical object; the inverse is trivial
          Mor r = mor_id(dom_of(f));
          if (budget_.step()) emit("mark-inv", "atom", f, r);
          return r;
        }
        return f;
      }
      case MorK::LiftedGen: {
        Mor payload = base_rewriter().norm(n.sub);
        if (node(payload).k == MorK::Id) {
          Mor r = mor_id(obj_lifted(node(payload).a));
          if (budget_.step()) emit("eta-functoriality", "atom", f, r);
          return r;
        }
        return mor_lifted_gen(payload);
      }
    }
    return f;
  }

  Mor atom_or_norm(Mor f) { return node(f).k == MorK::Comp ? norm(f) : atom(f); }

  // pb2eta: PbPair(f1,f2,q1,q2) collapses to w when q1 = P1.w and q2 = P2.w.
  bool try_pb_eta(Mor f1, Mor f2, Mor q1, Mor q2, Mor& out) {
    std::vector<Mor> cands;
    collect_tail_candidate(q1, pb_p1(f1, f2), cands);
    collect_tail_candidate(q2, pb_p2(f1, f2), cands);
    cands.push_back(mor_id(norm(dom_of(q1))));
    for (Mor w : cands) {
      if (norm(dom_of(q1)) != norm(dom_of(w))) continue;
      if (norm(cod_of(w)) != pb_obj(f1, f2)) continue;
      if (norm(comp(pb_p1(f1, f2), w)) == q1 && norm(comp(pb_p2(f1, f2), w)) == q2) {
        out = w;
        return true;
      }
    }
    return false;
  }

  // pi2eta: Curry(f1,g,f2p,e) collapses to w when f2p = PiMap.w and e is the
  // transposed evaluation of w.
  bool try_pi_eta(Mor f1, Mor g, Mor f2p, Mor e, Mor& out) {
    std::vector<Mor> cands;
    collect_tail_candidate(f2p, pi_map(f1, g), cands);
    cands.push_back(mor_id(pi_obj(f1, g)));
    for (Mor w : cands) {
      if (norm(dom_of(f2p)) != norm(dom_of(w))) continue;
      if (norm(cod_of(w)) != pi_obj(f1, g)) continue;
      if (norm(comp(pi_map(f1, g), w)) != f2p) continue;
      Mor back = pb_pair(f1, pi_map(f1, g), pb_p1(f1, f2p), comp(w, pb_p2(f1, f2p)));
      if (norm(comp(pi_eval(f1, g), back)) == e) {
        out = w;
        return true;
      }
    }
    return false;
  }

  // If the outermost factor of q is `head`, the rest of the spine is a
  // candidate witness.
  void collect_tail_candidate(Mor q, Mor head, std::vector<Mor>& cands) {
    std::vector<Mor> s = spine(q);
    if (!s.empty() && s.back() == head) {
      std::vector<Mor> rest(s.begin(), s.end() - 1);
      cands.push_back(unspine(rest, norm(dom_of(q))));
    }
  }

  // ---- spine passes --------------------------------------------------------

  void run_passes(std::vector<Mor>& fs, Obj dom0, Mor whole) {
    bool changed = true;
    while (changed && !budget_.exceeded) {
      changed = false;
      if (drop_identities(fs, dom0, whole)) changed = true;
      if (collapse_terminal(fs, dom0, whole)) {
        changed = true;
        continue;
      }
      if (pair_scan(fs, dom0, whole)) changed = true;
    }
  }

  bool drop_identities(std::vector<Mor>& fs, Obj dom0, Mor whole) {
    size_t before = fs.size();
    std::vector<Mor> out;
    out.reserve(fs.size());
    for (Mor f : fs) {
      if (is_id(f) && fs.size() > 1 && budget_.step()) continue;  // unit law
      out.push_back(f);
    }
    if (out.size() != before) {
      fs = std::move(out);
      emit("unit", "spine", whole, unspine(fs, dom0));
      return true;
    }
    return false;
  }

  // tm2: a composite prefix with codomain 1 collapses to Bang, as does a bare
  // generator into 1.  Canonical-structure atoms (projections, PiMap, Eval,
  // pairings) keep their shape; parallel maps into 1 are identified at the
  // decide_equal level instead, so no information is lost.
  bool collapse_terminal(std::vector<Mor>& fs, Obj dom0, Mor whole) {
    for (size_t i = fs.size(); i-- > 0;) {
      if (norm(cod_of(fs[i])) != obj_one()) continue;
      if (i == 0 && node(fs[0]).k != MorK::Gen) continue;
      Obj d = norm(dom_of(fs[0]));
      Mor collapsed = (d == obj_one()) ? mor_id(obj_one()) : bang(d);
      if (i == 0 && fs[0] == collapsed) return false;
      if (!budget_.step()) return false;
      std::vector<Mor> out;
      if (!is_id(collapsed)) out.push_back(collapsed);
      out.insert(out.end(), fs.begin() + i + 1, fs.end());
      emit("tm2", "spine@" + std::to_string(i), whole, unspine(out, dom0));
      fs = std::move(out);
      return true;
    }
    return false;
  }

  // Adjacent-pair rules, scanned innermost-first.  fs[i] is applied before
  // fs[i+1]; the pair (fs[i+1], fs[i]) reads fs[i+1] o fs[i].
  bool pair_scan(std::vector<Mor>& fs, Obj dom0, Mor whole) {
    for (size_t i = 0; i + 1 < fs.size(); ++i) {
      Mor lo = fs[i], hi = fs[i + 1];
      MorNode nlo = node(lo);
      MorNode nhi = node(hi);

      // marking-inverse laws
      if (nhi.k == MorK::MarkInv) {
        Mor c = cmp_nf(nhi.mark);
        if (lo == c) return splice(fs, i, 2, {}, "mark-inv", dom0, whole);
      }
      if (nlo.k == MorK::MarkInv) {
        Mor c = cmp_nf(nlo.mark);
        if (hi == c) return splice(fs, i, 2, {}, "mark-inv", dom0, whole);
      }

      // eta functoriality: lifted generators fuse through the base
      if (nhi.k == MorK::LiftedGen && nlo.k == MorK::LiftedGen) {
        Mor fused = base_rewriter().norm(comp(nhi.sub, nlo.sub));
        Mor rep = node(fused).k == MorK::Id ? mor_id(obj_lifted(node(fused).a))
                                            : mor_lifted_gen(fused);
        return splice(fs, i, 2, {rep}, "eta-functoriality", dom0, whole);
      }

      // pb2beta: projections of a pairing
      if (nlo.k == MorK::PbPair) {
        if (nhi.k == MorK::P1 && nhi.m1 == nlo.m1 && nhi.m2 == nlo.m2)
          return splice(fs, i, 2, spine(nlo.m3), "pb2beta", dom0, whole);
        if (nhi.k == MorK::P2 && nhi.m1 == nlo.m1 && nhi.m2 == nlo.m2)
          return splice(fs, i, 2, spine(nlo.m4), "pb2beta", dom0, whole);
      }

      // pi0: g o Eval(f1,g) = P1(f1, PiMap(f1,g))
      if (nlo.k == MorK::Eval && hi == nlo.m2) {
        Mor rep = pb_p1(nlo.m1, pi_map(nlo.m1, nlo.m2));
        return splice(fs, i, 2, {rep}, "pi0", dom0, whole);
      }

      // the curried map lives over cod(f1): PiMap(f1,g) o Curry(f1,g,f2',e) = f2'
      if (nlo.k == MorK::Curry && nhi.k == MorK::PiMap && nhi.m1 == nlo.m1 &&
          nhi.m2 == nlo.m2) {
        return splice(fs, i, 2, spine(nlo.m3), "pi2-triangle", dom0, whole);
      }

      // pi2beta: evaluation of a curried competitor
      if (nhi.k == MorK::Eval && nlo.k == MorK::PbPair && nlo.m1 == nhi.m1 &&
          nlo.m2 == pi_map(nhi.m1, nhi.m2)) {
        std::vector<Mor> q2s = spine(nlo.m4);
        if (!q2s.empty()) {
          MorNode ncur = node(q2s.back());
          if (ncur.k == MorK::Curry && ncur.m1 == nhi.m1 && ncur.m2 == nhi.m2) {
            std::vector<Mor> rest(q2s.begin(), q2s.end() - 1);
            Mor rest_m = unspine(rest, dom_of(nlo.m4));
            Mor pair = atom(pb_pair(ncur.m1, ncur.m3, nlo.m3, rest_m));
            std::vector<Mor> rep = spine(pair);
            std::vector<Mor> etail = spine(ncur.m4);
            rep.insert(rep.end(), etail.begin(), etail.end());
            return splice(fs, i, 2, rep, "pi2beta", dom0, whole);
          }
        }
      }

      // pairing fusion: <q1,q2> o h = <q1 h, q2 h>
      if (nhi.k == MorK::PbPair) {
        Mor q1h = norm(comp(nhi.m3, lo));
        Mor q2h = norm(comp(nhi.m4, lo));
        Mor rep = atom(pb_pair(nhi.m1, nhi.m2, q1h, q2h));
        return splice(fs, i, 2, spine(rep), "pb-fuse", dom0, whole);
      }

      // curry fusion: cur(e) o h = cur(e o Pb(f1, h))
      if (nhi.k == MorK::Curry) {
        Mor f2ph = norm(comp(nhi.m3, lo));
        Mor tr = pb_pair(nhi.m1, nhi.m3, pb_p1(nhi.m1, f2ph), comp(lo, pb_p2(nhi.m1, f2ph)));
        Mor eh = norm(comp(nhi.m4, tr));
        Mor rep = atom(curry(nhi.m1, nhi.m2, f2ph, eh));
        return splice(fs, i, 2, spine(rep), "curry-fuse", dom0, whole);
      }

      // pb0: commutativity of the canonical pullback square, oriented from
      // the first leg to the second
      if (nlo.k == MorK::P1 && hi == nlo.m1) {
        Mor p2 = pb_p2(nlo.m1, nlo.m2);
        return splice(fs, i, 2, {p2, nlo.m2}, "pb0", dom0, whole);
      }
    }
    return false;
  }

  bool splice(std::vector<Mor>& fs, size_t at, size_t len, const std::vector<Mor>& rep,
              const char* rule, Obj dom0, Mor whole) {
    if (!budget_.step()) return false;
    std::vector<Mor> out(fs.begin(), fs.begin() + at);
    out.insert(out.end(), rep.begin(), rep.end());
    out.insert(out.end(), fs.begin() + at + len, fs.end());
    emit(rule, "spine@" + std::to_string(at), whole, unspine(out, dom0));
    fs = std::move(out);
    return true;
  }
};

// ---------------------------------------------------------------------------

namespace detail {
inline bool obj_bridge_eq(Obj a, Obj b, const Presentation& P) {
  Budget budget{5000};
  Rewriter rw(P, budget);
  return rw.norm(a) == rw.norm(b);
}
}  // namespace detail

struct NormResult {
  Mor nf;
  bool budget_exceeded;
};

inline NormResult normalize(Mor t, const Presentation& P, Budget budget = Budget{},
                            std::vector<TraceStep>* trace = nullptr) {
  Rewriter rw(P, budget, trace);
  Mor r = rw.norm(t);
  return NormResult{r, budget.exceeded};
}

inline Mor nf(Mor t, const Presentation& P) {
  Budget b;
  Rewriter rw(P, b);
  return rw.norm(t);
}

inline Obj nf(Obj t, const Presentation& P) {
  Budget b;
  Rewriter rw(P, b);
  return rw.norm(t);
}

}  // namespace slcc
