#pragma once

// Brute-force canonical lcc structure on finite categories, the fibrancy
// checker, and the evaluation oracle for rule soundness and countermodels.
//
// Finite categories with all finite limits are preorders, so the built-in
// model library consists of finite Heyting-style posets; the checkers
// themselves work on arbitrary finite categories.

#include "slcc/fincat.hpp"
#include "slcc/presentation.hpp"

#include <functional>
#include <map>
#include <optional>

namespace slcc {

// ---------------------------------------------------------------------------
// Universal-property predicates (exhaustive)

inline bool is_terminal_obj(const FinCat& C, int t) {
  for (int x = 0; x < C.n_objs(); ++x)
    if (C.homset(x, t).size() != 1) return false;
  return true;
}

// (p1,p2) with common domain is a pullback square over the cospan (f1,f2).
inline bool is_pullback_square(const FinCat& C, int f1, int f2, int p1, int p2) {
  if (C.arrows[p1].dom != C.arrows[p2].dom) return false;
  if (C.arrows[p1].cod != C.arrows[f1].dom || C.arrows[p2].cod != C.arrows[f2].dom) return false;
  if (C.compose(f1, p1) != C.compose(f2, p2)) return false;
  int V = C.arrows[p1].dom;
  for (int x = 0; x < C.n_objs(); ++x) {
    for (int q1 : C.homset(x, C.arrows[f1].dom))
      for (int q2 : C.homset(x, C.arrows[f2].dom)) {
        if (C.compose(f1, q1) != C.compose(f2, q2)) continue;
        int found = 0;
        for (int h : C.homset(x, V))
          if (C.compose(p1, h) == q1 && C.compose(p2, h) == q2) ++found;
        if (found != 1) return false;
      }
  }
  return true;
}

// The factorization through a pullback square, when unique.
inline std::optional<int> pullback_factor(const FinCat& C, int p1, int p2, int q1, int q2) {
  if (C.arrows[q1].dom != C.arrows[q2].dom) return std::nullopt;
  int V = C.arrows[p1].dom;
  std::optional<int> r;
  for (int h : C.homset(C.arrows[q1].dom, V))
    if (C.compose(p1, h) == q1 && C.compose(p2, h) == q2) {
      if (r) return std::nullopt;
      r = h;
    }
  return r;
}

// (f2, eps) over the pullback square (p1,p2) of (f1,f2) exhibits
// dom(f2) = Pi_{f1}(g) with evaluation eps.
inline bool is_pi_diagram(const FinCat& C, int f1, int g, int f2, int p1, int p2, int eps) {
  if (C.arrows[g].cod != C.arrows[f1].dom) return false;
  if (C.arrows[f2].cod != C.arrows[f1].cod) return false;
  if (!is_pullback_square(C, f1, f2, p1, p2)) return false;
  if (C.arrows[eps].dom != C.arrows[p1].dom || C.arrows[eps].cod != C.arrows[g].dom) return false;
  if (C.compose(g, eps) != p1) return false;
  // universal among competitors (f2', e) over any pullback of (f1, f2')
  for (int f2p = 0; f2p < C.n_arrows(); ++f2p) {
    if (C.arrows[f2p].cod != C.arrows[f1].cod) continue;
    // find some pullback square over (f1, f2p)
    int q1 = -1, q2 = -1;
    for (int c1 = 0; c1 < C.n_arrows() && q1 < 0; ++c1)
      for (int c2 = 0; c2 < C.n_arrows() && q1 < 0; ++c2)
        if (is_pullback_square(C, f1, f2p, c1, c2)) {
          q1 = c1;
          q2 = c2;
        }
    if (q1 < 0) return false;  // no pullback: not even an lcc candidate
    for (int e : C.homset(C.arrows[q1].dom, C.arrows[g].dom)) {
      if (C.compose(g, e) != q1) continue;
      int found = 0;
      for (int u : C.homset(C.arrows[f2p].dom, C.arrows[f2].dom)) {
        if (C.compose(f2, u) != f2p) continue;
        auto w = pullback_factor(C, p1, p2, q1, C.compose(u, q2));
        if (w && C.compose(eps, *w) == e) ++found;
      }
      if (found != 1) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Fibrancy report (Prop.: fibrant iff lcc and marked-iff-universal)

struct FibrancyReport {
  bool fibrant = true;
  std::vector<std::string> violations;
  void violation(const std::string& s) {
    fibrant = false;
    violations.push_back(s);
  }
};

inline FibrancyReport is_fibrant(const FinCat& C) {
  FibrancyReport R;
  auto marked_tm = [&](int t) {
    for (int m : C.tm_marks)
      if (m == t) return true;
    return false;
  };
  auto marked_pb = [&](int f1, int f2, int p1, int p2) {
    for (const auto& m : C.pb_marks)
      if (m[0] == f1 && m[1] == f2 && m[2] == p1 && m[3] == p2) return true;
    return false;
  };
  auto marked_pi = [&](std::array<int, 6> d) {
    for (const auto& m : C.pi_marks)
      if (m == d) return true;
    return false;
  };

  bool has_terminal = false;
  for (int t = 0; t < C.n_objs(); ++t) {
    bool term = is_terminal_obj(C, t);
    has_terminal = has_terminal || term;
    if (term && !marked_tm(t)) R.violation("terminal object not marked: " + C.objs[t]);
    if (!term && marked_tm(t)) R.violation("marked object is not terminal: " + C.objs[t]);
  }
  if (!has_terminal) R.violation("no terminal object");

  // all cospans have pullbacks; marked squares are exactly the pullbacks
  for (int f1 = 0; f1 < C.n_arrows(); ++f1)
    for (int f2 = 0; f2 < C.n_arrows(); ++f2) {
      if (C.arrows[f1].cod != C.arrows[f2].cod) continue;
      bool any = false;
      for (int p1 = 0; p1 < C.n_arrows() && !any; ++p1)
        for (int p2 = 0; p2 < C.n_arrows() && !any; ++p2)
          any = is_pullback_square(C, f1, f2, p1, p2);
      if (!any)
        R.violation("cospan without pullback: (" + C.arrows[f1].name + ", " + C.arrows[f2].name +
                    ")");
    }
  for (const auto& m : C.pb_marks) {
    if (C.compose(m[0], m[2]) != C.compose(m[1], m[3]))
      R.violation("Pb-marked square does not commute: (" + C.arrows[m[0]].name + ", " +
                  C.arrows[m[1]].name + ")");
    else if (!is_pullback_square(C, m[0], m[1], m[2], m[3]))
      R.violation("Pb-marked square is not a pullback: (" + C.arrows[m[0]].name + ", " +
                  C.arrows[m[1]].name + ")");
  }
  for (int f1 = 0; f1 < C.n_arrows(); ++f1)
    for (int f2 = 0; f2 < C.n_arrows(); ++f2) {
      if (C.arrows[f1].cod != C.arrows[f2].cod) continue;
      for (int p1 = 0; p1 < C.n_arrows(); ++p1)
        for (int p2 = 0; p2 < C.n_arrows(); ++p2)
          if (is_pullback_square(C, f1, f2, p1, p2) && !marked_pb(f1, f2, p1, p2))
            R.violation("pullback square not marked: (" + C.arrows[f1].name + ", " +
                        C.arrows[f2].name + ")");
    }

  // dependent products exist for every composable (f1, g); marked iff genuine
  for (int f1 = 0; f1 < C.n_arrows(); ++f1)
    for (int g = 0; g < C.n_arrows(); ++g) {
      if (C.arrows[g].cod != C.arrows[f1].dom) continue;
      bool any = false;
      for (int f2 = 0; f2 < C.n_arrows() && !any; ++f2)
        for (int p1 = 0; p1 < C.n_arrows() && !any; ++p1)
          for (int p2 = 0; p2 < C.n_arrows() && !any; ++p2)
            for (int eps = 0; eps < C.n_arrows() && !any; ++eps)
              any = is_pi_diagram(C, f1, g, f2, p1, p2, eps);
      if (!any)
        R.violation("no dependent product for (" + C.arrows[f1].name + ", " + C.arrows[g].name +
                    ")");
    }
  for (const auto& m : C.pi_marks)
    if (!is_pi_diagram(C, m[0], m[1], m[2], m[3], m[4], m[5]))
      R.violation("Pi-marked diagram is not a dependent product: (" + C.arrows[m[0]].name + ", " +
                  C.arrows[m[1]].name + ")");
  for (int f1 = 0; f1 < C.n_arrows(); ++f1)
    for (int g = 0; g < C.n_arrows(); ++g) {
      if (C.arrows[g].cod != C.arrows[f1].dom) continue;
      for (int f2 = 0; f2 < C.n_arrows(); ++f2)
        for (int p1 = 0; p1 < C.n_arrows(); ++p1)
          for (int p2 = 0; p2 < C.n_arrows(); ++p2)
            for (int eps = 0; eps < C.n_arrows(); ++eps)
              if (is_pi_diagram(C, f1, g, f2, p1, p2, eps) &&
                  !marked_pi({f1, g, f2, p1, p2, eps}))
                R.violation("dependent product not marked: (" + C.arrows[f1].name + ", " +
                            C.arrows[g].name + ")");
    }

  return R;
}

// Marks exactly the universal diagrams; the result is fibrant when the
// underlying category is lcc.
inline FinCat mark_all_universal(FinCat C) {
  C.tm_marks.clear();
  C.pb_marks.clear();
  C.pi_marks.clear();
  for (int t = 0; t < C.n_objs(); ++t)
    if (is_terminal_obj(C, t)) C.tm_marks.push_back(t);
  for (int f1 = 0; f1 < C.n_arrows(); ++f1)
    for (int f2 = 0; f2 < C.n_arrows(); ++f2) {
      if (C.arrows[f1].cod != C.arrows[f2].cod) continue;
      for (int p1 = 0; p1 < C.n_arrows(); ++p1)
        for (int p2 = 0; p2 < C.n_arrows(); ++p2)
          if (is_pullback_square(C, f1, f2, p1, p2)) C.pb_marks.push_back({f1, f2, p1, p2});
    }
  for (int f1 = 0; f1 < C.n_arrows(); ++f1)
    for (int g = 0; g < C.n_arrows(); ++g) {
      if (C.arrows[g].cod != C.arrows[f1].dom) continue;
      for (int f2 = 0; f2 < C.n_arrows(); ++f2)
        for (int p1 = 0; p1 < C.n_arrows(); ++p1)
          for (int p2 = 0; p2 < C.n_arrows(); ++p2)
            for (int eps = 0; eps < C.n_arrows(); ++eps)
              if (is_pi_diagram(C, f1, g, f2, p1, p2, eps))
                C.pi_marks.push_back({f1, g, f2, p1, p2, eps});
    }
  return C;
}

// ---------------------------------------------------------------------------
// Canonical structure: least-index choices, all universal properties
// re-verified exhaustively.

struct FinStrictLcc {
  FinCat C;
  std::string name;
  int terminal = -1;
  struct PbChoice {
    int vertex, p1, p2;
  };
  struct PiChoice {
    int vertex, f2, eps;
  };
  std::map<std::pair<int, int>, PbChoice> pb;  // cospan (f1,f2)
  std::map<std::pair<int, int>, PiChoice> pi;  // (f1,g)

  int dom(int f) const { return C.arrows[f].dom; }
  int cod(int f) const { return C.arrows[f].cod; }
  int identity(int x) const { return C.ident[x]; }
  int compose(int g, int f) const {
    int r = C.compose(g, f);
    if (r < 0) fail(Err::BoundaryMismatch, "model composition of non-composable arrows");
    return r;
  }

  int bang(int a) const {
    auto h = C.homset(a, terminal);
    return h.at(0);
  }

  const PbChoice& pb_of(int f1, int f2) const {
    auto it = pb.find({f1, f2});
    if (it == pb.end()) fail(Err::NotLcc, "model has no canonical pullback for cospan");
    return it->second;
  }
  const PiChoice& pi_of(int f1, int g) const {
    auto it = pi.find({f1, g});
    if (it == pi.end()) fail(Err::NotLcc, "model has no canonical dependent product");
    return it->second;
  }

  int pb_pair(int f1, int f2, int q1, int q2) const {
    const PbChoice& c = pb_of(f1, f2);
    auto h = pullback_factor(C, c.p1, c.p2, q1, q2);
    if (!h) fail(Err::TargetRejects, "no factorization through canonical pullback");
    return *h;
  }

  int curry(int f1, int g, int f2p, int e) const {
    const PiChoice& c = pi_of(f1, g);
    const PbChoice& cp = pb_of(f1, f2p);
    std::optional<int> r;
    for (int u : C.homset(C.arrows[f2p].dom, C.arrows[c.f2].dom)) {
      if (C.compose(c.f2, u) != f2p) continue;
      const PbChoice& cc = pb_of(f1, c.f2);
      auto w = pullback_factor(C, cc.p1, cc.p2, cp.p1, C.compose(u, cp.p2));
      if (w && C.compose(c.eps, *w) == e) {
        if (r) fail(Err::TargetRejects, "curry not unique in model");
        r = u;
      }
    }
    if (!r) fail(Err::TargetRejects, "no curried map in model");
    return *r;
  }

  std::optional<int> invert(int f) const {
    for (int g : C.homset(C.arrows[f].cod, C.arrows[f].dom))
      if (C.compose(g, f) == C.ident[C.arrows[f].dom] &&
          C.compose(f, g) == C.ident[C.arrows[f].cod])
        return g;
    return std::nullopt;
  }
};

struct NotLccWitness {
  std::string what;
};

inline FinStrictLcc canonicalize(const FinCat& C, const std::string& name = "") {
  FinStrictLcc M;
  M.C = C;
  M.name = name;
  for (int t = 0; t < C.n_objs(); ++t)
    if (is_terminal_obj(C, t)) {
      M.terminal = t;
      break;
    }
  if (M.terminal < 0) fail(Err::NotLcc, "no terminal object");
  for (int f1 = 0; f1 < C.n_arrows(); ++f1)
    for (int f2 = 0; f2 < C.n_arrows(); ++f2) {
      if (C.arrows[f1].cod != C.arrows[f2].cod) continue;
      bool found = false;
      for (int p1 = 0; p1 < C.n_arrows() && !found; ++p1)
        for (int p2 = 0; p2 < C.n_arrows() && !found; ++p2)
          if (is_pullback_square(C, f1, f2, p1, p2)) {
            M.pb[{f1, f2}] = {C.arrows[p1].dom, p1, p2};
            found = true;
          }
      if (!found)
        fail(Err::NotLcc, "cospan without pullback: (" + C.arrows[f1].name + ", " +
                              C.arrows[f2].name + ")");
    }
  for (int f1 = 0; f1 < C.n_arrows(); ++f1)
    for (int g = 0; g < C.n_arrows(); ++g) {
      if (C.arrows[g].cod != C.arrows[f1].dom) continue;
      bool found = false;
      for (int f2 = 0; f2 < C.n_arrows() && !found; ++f2) {
        if (C.arrows[f2].cod != C.arrows[f1].cod) continue;
        auto it = M.pb.find({f1, f2});
        if (it == M.pb.end()) continue;
        for (int eps : C.homset(it->second.vertex, C.arrows[g].dom)) {
          if (is_pi_diagram(C, f1, g, f2, it->second.p1, it->second.p2, eps)) {
            M.pi[{f1, g}] = {C.arrows[f2].dom, f2, eps};
            found = true;
            break;
          }
        }
      }
      if (!found)
        fail(Err::NotLcc, "no dependent product for (" + C.arrows[f1].name + ", " +
                              C.arrows[g].name + ")");
    }
  return M;
}

// ---------------------------------------------------------------------------
// Built-in model library: finite Heyting-style posets.

inline const FinStrictLcc& model_chain2() {
  static FinStrictLcc M = [] {
    std::vector<std::vector<bool>> leq = {{1, 1}, {0, 1}};
    return canonicalize(poset_category({"0", "1"}, leq), "chain2");
  }();
  return M;
}

inline const FinStrictLcc& model_chain3() {
  static FinStrictLcc M = [] {
    std::vector<std::vector<bool>> leq = {{1, 1, 1}, {0, 1, 1}, {0, 0, 1}};
    return canonicalize(poset_category({"0", "a", "1"}, leq), "chain3");
  }();
  return M;
}

// 2x2 diamond lattice {0, a, b, 1} with a, b incomparable
inline const FinStrictLcc& model_diamond() {
  static FinStrictLcc M = [] {
    std::vector<std::vector<bool>> leq = {
        {1, 1, 1, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}, {0, 0, 0, 1}};
    return canonicalize(poset_category({"0", "a", "b", "1"}, leq), "diamond");
  }();
  return M;
}

// free meet-semilattice with top on 3 generators: the powerset cube
inline const FinStrictLcc& model_cube() {
  static FinStrictLcc M = [] {
    std::vector<std::string> names;
    std::vector<std::vector<bool>> leq(8, std::vector<bool>(8, false));
    for (int s = 0; s < 8; ++s) {
      std::string n = "{";
      for (int b = 0; b < 3; ++b)
        if (s & (1 << b)) n += ("xyz"[b]);
      n += "}";
      names.push_back(n);
    }
    // subsets ordered by superset-as-leq so that the full set is terminal
    for (int s = 0; s < 8; ++s)
      for (int t = 0; t < 8; ++t) leq[s][t] = (s & t) == s ? true : false;
    return canonicalize(poset_category(names, leq), "cube");
  }();
  return M;
}

inline std::vector<const FinStrictLcc*> builtin_models() {
  return {&model_chain2(), &model_chain3(), &model_diamond()};
}

inline const FinStrictLcc* builtin_model(const std::string& name) {
  for (const FinStrictLcc* m : {&model_chain2(), &model_chain3(), &model_diamond(), &model_cube()})
    if (m->name == name) return m;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Evaluation of presentation terms in a finite model.  A strict functor out
// of a free presentation is determined by its generator images; lifted
// generators evaluate through the base assignment.

struct FinAssign {
  const FinStrictLcc* M = nullptr;
  std::map<Name, int> obj;
  std::map<Name, int> mor;
};

inline int eval_obj(Obj o, const Presentation& P, const FinAssign& A);
inline int eval_mor(Mor m, const Presentation& P, const FinAssign& A);

inline int eval_obj(Obj o, const Presentation& P, const FinAssign& A) {
  const FinStrictLcc& M = *A.M;
  ObjNode n = node(o);
  switch (n.k) {
    case ObjK::Gen: {
      auto it = A.obj.find(n.name);
      if (it == A.obj.end()) fail(Err::TargetRejects, "unassigned object generator");
      return it->second;
    }
    case ObjK::One: return M.terminal;
    case ObjK::Pb: {
      int f1 = eval_mor(n.m1, P, A), f2 = eval_mor(n.m2, P, A);
      return M.pb_of(f1, f2).vertex;
    }
    case ObjK::Pi: {
      int f1 = eval_mor(n.m1, P, A), g = eval_mor(n.m2, P, A);
      return M.pi_of(f1, g).vertex;
    }
    case ObjK::Lifted: return eval_obj(n.sub, P.base(), A);
  }
  fail(Err::IllFormed, "eval_obj");
}

inline int eval_mor(Mor m, const Presentation& P, const FinAssign& A) {
  const FinStrictLcc& M = *A.M;
  MorNode n = node(m);
  switch (n.k) {
    case MorK::Gen: {
      auto it = A.mor.find(n.name);
      if (it == A.mor.end()) fail(Err::TargetRejects, "unassigned morphism generator");
      return it->second;
    }
    case MorK::Id: return M.identity(eval_obj(n.a, P, A));
    case MorK::Comp: return M.compose(eval_mor(n.m1, P, A), eval_mor(n.m2, P, A));
    case MorK::Bang: return M.bang(eval_obj(n.a, P, A));
    case MorK::P1: return M.pb_of(eval_mor(n.m1, P, A), eval_mor(n.m2, P, A)).p1;
    case MorK::P2: return M.pb_of(eval_mor(n.m1, P, A), eval_mor(n.m2, P, A)).p2;
    case MorK::PbPair:
      return M.pb_pair(eval_mor(n.m1, P, A), eval_mor(n.m2, P, A), eval_mor(n.m3, P, A),
                       eval_mor(n.m4, P, A));
    case MorK::PiMap: return M.pi_of(eval_mor(n.m1, P, A), eval_mor(n.m2, P, A)).f2;
    case MorK::Eval: return M.pi_of(eval_mor(n.m1, P, A), eval_mor(n.m2, P, A)).eps;
    case MorK::Curry:
      return M.curry(eval_mor(n.m1, P, A), eval_mor(n.m2, P, A), eval_mor(n.m3, P, A),
                     eval_mor(n.m4, P, A));
    case MorK::MarkInv: {
      int c = eval_mor(marking_cmp(n.mark), P, A);
      auto inv = M.invert(c);
      if (!inv) fail(Err::EquationFails, "marked diagram is not universal under this assignment");
      return *inv;
    }
    case MorK::LiftedGen: return eval_mor(n.sub, P.base(), A);
  }
  fail(Err::IllFormed, "eval_mor");
}

// Checks assignment admissibility: generator boundaries, equations, and
// realized markings must all hold in the model.
inline bool assignment_admissible(const Presentation& P, const FinAssign& A) {
  try {
    for (const auto& [name, gi] : P.mor_gens) {
      auto it = A.mor.find(name);
      if (it == A.mor.end()) return false;
      if (A.M->dom(it->second) != eval_obj(gi.dom, P, A)) return false;
      if (A.M->cod(it->second) != eval_obj(gi.cod, P, A)) return false;
    }
    for (const auto& [l, r] : P.equations)
      if (eval_mor(l, P, A) != eval_mor(r, P, A)) return false;
    for (MarkId mk : P.markings) {
      int c = eval_mor(marking_cmp(mk), P, A);
      if (!A.M->invert(c)) return false;
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

// Enumerate admissible assignments, calling fn on each; stops early when fn
// returns true or the cap is reached.  Returns the assignment found, if any.
template <class Fn>
inline std::optional<FinAssign> enumerate_assignments(const Presentation& P,
                                                      const FinStrictLcc& M, long long cap,
                                                      Fn&& fn) {
  std::vector<Name> ogens = P.obj_gens;
  std::vector<Name> mgens = P.mor_gen_order;
  FinAssign A;
  A.M = &M;
  long long count = 0;

  std::function<std::optional<FinAssign>(size_t)> go_mor = [&](size_t i) -> std::optional<FinAssign> {
    if (count >= cap) return std::nullopt;
    if (i == mgens.size()) {
      ++count;
      if (!assignment_admissible(P, A)) return std::nullopt;
      if (fn(A)) return A;
      return std::nullopt;
    }
    for (int a = 0; a < M.C.n_arrows(); ++a) {
      A.mor[mgens[i]] = a;
      if (auto r = go_mor(i + 1)) return r;
      if (count >= cap) break;
    }
    A.mor.erase(mgens[i]);
    return std::nullopt;
  };

  std::function<std::optional<FinAssign>(size_t)> go_obj = [&](size_t i) -> std::optional<FinAssign> {
    if (i == ogens.size()) return go_mor(0);
    for (int x = 0; x < M.C.n_objs(); ++x) {
      A.obj[ogens[i]] = x;
      if (auto r = go_obj(i + 1)) return r;
      if (count >= cap) break;
    }
    A.obj.erase(ogens[i]);
    return std::nullopt;
  };

  return go_obj(0);
}

// First assignment separating t from u in one of the models, if any.
inline std::optional<FinAssign> countermodel_search(Mor t, Mor u, const Presentation& P,
                                                    const std::vector<const FinStrictLcc*>& models,
                                                    long long cap = 100000) {
  for (const FinStrictLcc* M : models) {
    auto r = enumerate_assignments(P, *M, cap, [&](const FinAssign& A) {
      try {
        return eval_mor(t, P, A) != eval_mor(u, P, A);
      } catch (const Error&) {
        return false;
      }
    });
    if (r) return r;
  }
  return std::nullopt;
}

inline std::optional<FinAssign> countermodel_search_obj(
    Obj t, Obj u, const Presentation& P, const std::vector<const FinStrictLcc*>& models,
    long long cap = 100000) {
  for (const FinStrictLcc* M : models) {
    auto r = enumerate_assignments(P, *M, cap, [&](const FinAssign& A) {
      try {
        return eval_obj(t, P, A) != eval_obj(u, P, A);
      } catch (const Error&) {
        return false;
      }
    });
    if (r) return r;
  }
  return std::nullopt;
}

}  // namespace slcc
