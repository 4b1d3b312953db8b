#pragma once

// Finite marked categories: desk-scale lcc sketches with explicit composition
// tables, used as fibrancy-checking inputs and as evaluation models.

#include "slcc/term.hpp"

#include <array>
#include <nlohmann/json.hpp>
#include <sstream>

namespace slcc {

struct FinCat {
  struct Arrow {
    std::string name;
    int dom = 0, cod = 0;
  };

  std::vector<std::string> objs;
  std::vector<Arrow> arrows;
  std::vector<int> ident;                // per object: identity arrow id
  std::vector<std::vector<int>> table;   // table[g][f] = g o f, -1 when not composable

  std::vector<int> tm_marks;                    // marked terminal objects
  std::vector<std::array<int, 4>> pb_marks;     // f1,f2,p1,p2
  std::vector<std::array<int, 6>> pi_marks;     // f1,g,f2,p1,p2,eps

  int n_objs() const { return static_cast<int>(objs.size()); }
  int n_arrows() const { return static_cast<int>(arrows.size()); }

  int compose(int g, int f) const {
    if (arrows[f].cod != arrows[g].dom) return -1;
    return table[g][f];
  }

  std::vector<int> homset(int a, int b) const {
    std::vector<int> r;
    for (int i = 0; i < n_arrows(); ++i)
      if (arrows[i].dom == a && arrows[i].cod == b) r.push_back(i);
    return r;
  }

  void validate() const {
    if (static_cast<int>(ident.size()) != n_objs()) fail(Err::IllFormed, "identity table size");
    for (int x = 0; x < n_objs(); ++x) {
      int i = ident[x];
      if (i < 0 || i >= n_arrows() || arrows[i].dom != x || arrows[i].cod != x)
        fail(Err::IllFormed, "bad identity on object " + objs[x]);
    }
    if (static_cast<int>(table.size()) != n_arrows()) fail(Err::IllFormed, "composition table size");
    for (int g = 0; g < n_arrows(); ++g) {
      if (static_cast<int>(table[g].size()) != n_arrows())
        fail(Err::IllFormed, "composition table row size");
      for (int f = 0; f < n_arrows(); ++f) {
        bool composable = arrows[f].cod == arrows[g].dom;
        int gf = table[g][f];
        if (!composable && gf != -1) fail(Err::IllFormed, "composite of non-composable pair");
        if (composable) {
          if (gf < 0 || gf >= n_arrows()) fail(Err::IllFormed, "missing composite");
          if (arrows[gf].dom != arrows[f].dom || arrows[gf].cod != arrows[g].cod)
            fail(Err::IllFormed, "composite has wrong boundary");
        }
      }
    }
    // unital and associative
    for (int f = 0; f < n_arrows(); ++f) {
      if (compose(f, ident[arrows[f].dom]) != f || compose(ident[arrows[f].cod], f) != f)
        fail(Err::IllFormed, "identity law fails at " + arrows[f].name);
    }
    for (int h = 0; h < n_arrows(); ++h)
      for (int g = 0; g < n_arrows(); ++g) {
        if (arrows[g].cod != arrows[h].dom) continue;
        for (int f = 0; f < n_arrows(); ++f) {
          if (arrows[f].cod != arrows[g].dom) continue;
          if (compose(compose(h, g), f) != compose(h, compose(g, f)))
            fail(Err::IllFormed, "associativity fails");
        }
      }
    // markings reference existing cells with matching boundaries
    for (int t : tm_marks)
      if (t < 0 || t >= n_objs()) fail(Err::IllFormed, "tm marking out of range");
    for (const auto& m : pb_marks) {
      auto [f1, f2, p1, p2] = m;
      for (int a : {f1, f2, p1, p2})
        if (a < 0 || a >= n_arrows()) fail(Err::IllFormed, "pb marking out of range");
      if (arrows[f1].cod != arrows[f2].cod || arrows[p1].dom != arrows[p2].dom ||
          arrows[p1].cod != arrows[f1].dom || arrows[p2].cod != arrows[f2].dom)
        fail(Err::IllFormed, "pb marking boundary mismatch");
    }
    for (const auto& m : pi_marks) {
      auto [f1, g, f2, p1, p2, eps] = m;
      for (int a : {f1, g, f2, p1, p2, eps})
        if (a < 0 || a >= n_arrows()) fail(Err::IllFormed, "pi marking out of range");
      if (arrows[g].cod != arrows[f1].dom) fail(Err::IllFormed, "pi marking: cod(g) != dom(f1)");
      if (arrows[f2].cod != arrows[f1].cod) fail(Err::IllFormed, "pi marking: cod(f2) != cod(f1)");
      if (arrows[p1].dom != arrows[p2].dom || arrows[p1].dom != arrows[eps].dom)
        fail(Err::IllFormed, "pi marking: vertex mismatch");
      if (arrows[p1].cod != arrows[f1].dom || arrows[p2].cod != arrows[f2].dom ||
          arrows[eps].cod != arrows[g].dom)
        fail(Err::IllFormed, "pi marking: leg boundary mismatch");
    }
  }
};

// ---------------------------------------------------------------------------
// Posets as categories.  leq is a reflexive-transitive order matrix; one arrow
// per related pair.

inline FinCat poset_category(const std::vector<std::string>& names,
                             const std::vector<std::vector<bool>>& leq) {
  FinCat C;
  C.objs = names;
  int n = static_cast<int>(names.size());
  std::vector<std::vector<int>> arrow_of(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (leq[a][b]) {
        arrow_of[a][b] = C.n_arrows();
        C.arrows.push_back({names[a] + "<=" + names[b], a, b});
      }
  C.ident.resize(n);
  for (int a = 0; a < n; ++a) C.ident[a] = arrow_of[a][a];
  C.table.assign(C.n_arrows(), std::vector<int>(C.n_arrows(), -1));
  for (int g = 0; g < C.n_arrows(); ++g)
    for (int f = 0; f < C.n_arrows(); ++f)
      if (C.arrows[f].cod == C.arrows[g].dom)
        C.table[g][f] = arrow_of[C.arrows[f].dom][C.arrows[g].cod];
  C.validate();
  return C;
}

// ---------------------------------------------------------------------------
// JSON round-trip

inline nlohmann::ordered_json fincat_to_json(const FinCat& C) {
  nlohmann::ordered_json j;
  j["objects"] = C.objs;
  auto arrows = nlohmann::ordered_json::array();
  for (const auto& a : C.arrows)
    arrows.push_back({{"name", a.name}, {"dom", a.dom}, {"cod", a.cod}});
  j["arrows"] = arrows;
  j["identities"] = C.ident;
  auto comp = nlohmann::ordered_json::array();
  for (int g = 0; g < C.n_arrows(); ++g)
    for (int f = 0; f < C.n_arrows(); ++f)
      if (C.table[g][f] >= 0) comp.push_back({g, f, C.table[g][f]});
  j["compose"] = comp;
  nlohmann::ordered_json marks;
  marks["tm"] = C.tm_marks;
  auto pbj = nlohmann::ordered_json::array();
  for (const auto& m : C.pb_marks) pbj.push_back({m[0], m[1], m[2], m[3]});
  marks["pb"] = pbj;
  auto pij = nlohmann::ordered_json::array();
  for (const auto& m : C.pi_marks) pij.push_back({m[0], m[1], m[2], m[3], m[4], m[5]});
  marks["pi"] = pij;
  j["markings"] = marks;
  return j;
}

inline FinCat fincat_from_json(const nlohmann::json& j) {
  FinCat C;
  C.objs = j.at("objects").get<std::vector<std::string>>();
  for (const auto& a : j.at("arrows"))
    C.arrows.push_back({a.at("name").get<std::string>(), a.at("dom").get<int>(),
                        a.at("cod").get<int>()});
  C.ident = j.at("identities").get<std::vector<int>>();
  C.table.assign(C.n_arrows(), std::vector<int>(C.n_arrows(), -1));
  for (const auto& t : j.at("compose")) C.table[t.at(0).get<int>()][t.at(1).get<int>()] = t.at(2).get<int>();
  if (j.contains("markings")) {
    const auto& m = j.at("markings");
    if (m.contains("tm")) C.tm_marks = m.at("tm").get<std::vector<int>>();
    if (m.contains("pb"))
      for (const auto& q : m.at("pb"))
        C.pb_marks.push_back({q.at(0).get<int>(), q.at(1).get<int>(), q.at(2).get<int>(),
                              q.at(3).get<int>()});
    if (m.contains("pi"))
      for (const auto& q : m.at("pi"))
        C.pi_marks.push_back({q.at(0).get<int>(), q.at(1).get<int>(), q.at(2).get<int>(),
                              q.at(3).get<int>(), q.at(4).get<int>(), q.at(5).get<int>()});
  }
  C.validate();
  return C;
}

// ---------------------------------------------------------------------------
// DOT export

inline std::string fincat_to_dot(const FinCat& C, const std::string& name = "fincat") {
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  for (int x = 0; x < C.n_objs(); ++x) {
    bool tm = false;
    for (int t : C.tm_marks) tm = tm || t == x;
    os << "  o" << x << " [label=\"" << C.objs[x] << "\"" << (tm ? ", shape=doublecircle" : "")
       << "];\n";
  }
  for (int f = 0; f < C.n_arrows(); ++f) {
    if (f == C.ident[C.arrows[f].dom]) continue;
    os << "  o" << C.arrows[f].dom << " -> o" << C.arrows[f].cod << " [label=\""
       << C.arrows[f].name << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace slcc
