#pragma once

// Stable JSON schemas: presentation round-trip (bit-exact), context and
// substitution dumps, and debug dumps of the coalgebra data.

#include "slcc/cwf.hpp"
#include "slcc/fincat.hpp"

#include <nlohmann/json.hpp>

namespace slcc {

using ordered_json = nlohmann::ordered_json;

// marking references inside terms are indices into the presentation's
// realized-marking list
struct MarkIndex {
  std::vector<MarkId> by_index;
  std::map<MarkId, size_t> by_id;
  explicit MarkIndex(const std::vector<MarkId>& ms) : by_index(ms) {
    for (size_t i = 0; i < ms.size(); ++i) by_id.emplace(ms[i], i);
  }
};

inline ordered_json obj_to_json(Obj o, const MarkIndex& mi);
inline ordered_json mor_to_json(Mor m, const MarkIndex& mi);

inline ordered_json obj_to_json(Obj o, const MarkIndex& mi) {
  ObjNode n = node(o);
  ordered_json j;
  switch (n.k) {
    case ObjK::Gen:
      j["k"] = "gen";
      j["name"] = store().name_str(n.name);
      break;
    case ObjK::One: j["k"] = "one"; break;
    case ObjK::Pb:
      j["k"] = "pb";
      j["f1"] = mor_to_json(n.m1, mi);
      j["f2"] = mor_to_json(n.m2, mi);
      break;
    case ObjK::Pi:
      j["k"] = "pi";
      j["f1"] = mor_to_json(n.m1, mi);
      j["g"] = mor_to_json(n.m2, mi);
      break;
    case ObjK::Lifted:
      j["k"] = "lifted";
      j["of"] = obj_to_json(n.sub, mi);
      break;
  }
  return j;
}

inline ordered_json mor_to_json(Mor m, const MarkIndex& mi) {
  MorNode n = node(m);
  ordered_json j;
  switch (n.k) {
    case MorK::Gen:
      j["k"] = "mgen";
      j["name"] = store().name_str(n.name);
      break;
    case MorK::Id:
      j["k"] = "id";
      j["obj"] = obj_to_json(n.a, mi);
      break;
    case MorK::Comp:
      j["k"] = "comp";
      j["g"] = mor_to_json(n.m1, mi);
      j["f"] = mor_to_json(n.m2, mi);
      break;
    case MorK::Bang:
      j["k"] = "bang";
      j["obj"] = obj_to_json(n.a, mi);
      break;
    case MorK::P1:
    case MorK::P2:
      j["k"] = n.k == MorK::P1 ? "p1" : "p2";
      j["f1"] = mor_to_json(n.m1, mi);
      j["f2"] = mor_to_json(n.m2, mi);
      break;
    case MorK::PbPair:
      j["k"] = "pbpair";
      j["f1"] = mor_to_json(n.m1, mi);
      j["f2"] = mor_to_json(n.m2, mi);
      j["q1"] = mor_to_json(n.m3, mi);
      j["q2"] = mor_to_json(n.m4, mi);
      break;
    case MorK::PiMap:
    case MorK::Eval:
      j["k"] = n.k == MorK::PiMap ? "pimap" : "eval";
      j["f1"] = mor_to_json(n.m1, mi);
      j["g"] = mor_to_json(n.m2, mi);
      break;
    case MorK::Curry:
      j["k"] = "curry";
      j["f1"] = mor_to_json(n.m1, mi);
      j["g"] = mor_to_json(n.m2, mi);
      j["f2p"] = mor_to_json(n.m3, mi);
      j["e"] = mor_to_json(n.m4, mi);
      break;
    case MorK::MarkInv: {
      auto it = mi.by_id.find(n.mark);
      if (it == mi.by_id.end())
        fail(Err::IllFormed, "term mentions a marking outside the presentation");
      j["k"] = "markinv";
      j["marking"] = it->second;
      break;
    }
    case MorK::LiftedGen:
      j["k"] = "liftedgen";
      j["of"] = mor_to_json(n.sub, mi);
      break;
  }
  return j;
}

inline Obj obj_from_json(const nlohmann::json& j, const MarkIndex& mi);
inline Mor mor_from_json(const nlohmann::json& j, const MarkIndex& mi);

inline Obj obj_from_json(const nlohmann::json& j, const MarkIndex& mi) {
  std::string k = j.at("k").get<std::string>();
  if (k == "gen") return obj_gen(j.at("name").get<std::string>());
  if (k == "one") return obj_one();
  if (k == "pb") return pb_obj(mor_from_json(j.at("f1"), mi), mor_from_json(j.at("f2"), mi));
  if (k == "pi") return pi_obj(mor_from_json(j.at("f1"), mi), mor_from_json(j.at("g"), mi));
  if (k == "lifted") return obj_lifted(obj_from_json(j.at("of"), mi));
  fail(Err::SyntaxError, "unknown object node kind " + k);
}

inline Mor mor_from_json(const nlohmann::json& j, const MarkIndex& mi) {
  std::string k = j.at("k").get<std::string>();
  if (k == "mgen") return mor_gen(j.at("name").get<std::string>());
  if (k == "id") return mor_id(obj_from_json(j.at("obj"), mi));
  if (k == "comp") return comp(mor_from_json(j.at("g"), mi), mor_from_json(j.at("f"), mi));
  if (k == "bang") return bang(obj_from_json(j.at("obj"), mi));
  if (k == "p1") return pb_p1(mor_from_json(j.at("f1"), mi), mor_from_json(j.at("f2"), mi));
  if (k == "p2") return pb_p2(mor_from_json(j.at("f1"), mi), mor_from_json(j.at("f2"), mi));
  if (k == "pbpair")
    return pb_pair(mor_from_json(j.at("f1"), mi), mor_from_json(j.at("f2"), mi),
                   mor_from_json(j.at("q1"), mi), mor_from_json(j.at("q2"), mi));
  if (k == "pimap") return pi_map(mor_from_json(j.at("f1"), mi), mor_from_json(j.at("g"), mi));
  if (k == "eval") return pi_eval(mor_from_json(j.at("f1"), mi), mor_from_json(j.at("g"), mi));
  if (k == "curry")
    return curry(mor_from_json(j.at("f1"), mi), mor_from_json(j.at("g"), mi),
                 mor_from_json(j.at("f2p"), mi), mor_from_json(j.at("e"), mi));
  if (k == "markinv") {
    size_t idx = j.at("marking").get<size_t>();
    if (idx >= mi.by_index.size()) fail(Err::SyntaxError, "marking index out of range");
    return mark_inv(mi.by_index[idx]);
  }
  if (k == "liftedgen") return mor_lifted_gen(mor_from_json(j.at("of"), mi));
  fail(Err::SyntaxError, "unknown morphism node kind " + k);
}

inline ordered_json marking_to_json(MarkId mk, const MarkIndex& mi) {
  MarkingData d = marking(mk);
  ordered_json j;
  switch (d.shape) {
    case Shape::Tm:
      j["shape"] = "tm";
      j["t"] = obj_to_json(d.t, mi);
      break;
    case Shape::Pb:
      j["shape"] = "pb";
      j["f1"] = mor_to_json(d.f1, mi);
      j["f2"] = mor_to_json(d.f2, mi);
      j["p1"] = mor_to_json(d.p1, mi);
      j["p2"] = mor_to_json(d.p2, mi);
      break;
    case Shape::Pi:
      j["shape"] = "pi";
      j["f1"] = mor_to_json(d.f1, mi);
      j["g"] = mor_to_json(d.g, mi);
      j["f2"] = mor_to_json(d.f2, mi);
      j["p1"] = mor_to_json(d.p1, mi);
      j["p2"] = mor_to_json(d.p2, mi);
      j["eps"] = mor_to_json(d.eps, mi);
      break;
  }
  return j;
}

inline ordered_json presentation_to_json(const Presentation& P) {
  MarkIndex mi(P.markings);
  ordered_json j;
  ordered_json objs = ordered_json::array();
  for (Name n : P.obj_gens) objs.push_back(store().name_str(n));
  j["objects"] = objs;
  ordered_json arrows = ordered_json::array();
  for (Name n : P.mor_gen_order) {
    const MorGenInfo* gi = P.mor_gen(n);
    arrows.push_back({{"name", store().name_str(n)},
                      {"dom", obj_to_json(gi->dom, mi)},
                      {"cod", obj_to_json(gi->cod, mi)}});
  }
  j["arrows"] = arrows;
  ordered_json eqs = ordered_json::array();
  for (const auto& [l, r] : P.equations)
    eqs.push_back({mor_to_json(l, mi), mor_to_json(r, mi)});
  j["equations"] = eqs;
  ordered_json marks = ordered_json::array();
  for (MarkId mk : P.markings) marks.push_back(marking_to_json(mk, mi));
  j["markings"] = marks;
  return j;
}

inline PresPtr presentation_from_json(const nlohmann::json& j) {
  // markings can reference earlier markings through their comparison terms,
  // so resolve them in order with a growing index
  MarkIndex mi({});
  std::vector<MarkId> mks;
  if (j.contains("markings")) {
    for (const auto& mj : j.at("markings")) {
      std::string shape = mj.at("shape").get<std::string>();
      MarkId mk = 0;
      if (shape == "tm") {
        mk = mk_tm_marking(obj_from_json(mj.at("t"), mi));
      } else if (shape == "pb") {
        mk = mk_pb_marking(mor_from_json(mj.at("f1"), mi), mor_from_json(mj.at("f2"), mi),
                           mor_from_json(mj.at("p1"), mi), mor_from_json(mj.at("p2"), mi));
      } else if (shape == "pi") {
        mk = mk_pi_marking(mor_from_json(mj.at("f1"), mi), mor_from_json(mj.at("g"), mi),
                           mor_from_json(mj.at("f2"), mi), mor_from_json(mj.at("p1"), mi),
                           mor_from_json(mj.at("p2"), mi), mor_from_json(mj.at("eps"), mi));
      } else {
        fail(Err::SyntaxError, "unknown marking shape " + shape);
      }
      mks.push_back(mk);
      mi = MarkIndex(mks);
    }
  }
  std::vector<std::string> objs = j.at("objects").get<std::vector<std::string>>();
  std::vector<ArrowDecl> arrows;
  for (const auto& aj : j.at("arrows"))
    arrows.push_back(ArrowDecl{aj.at("name").get<std::string>(),
                               obj_from_json(aj.at("dom"), mi), obj_from_json(aj.at("cod"), mi)});
  std::vector<std::pair<Mor, Mor>> eqs;
  if (j.contains("equations"))
    for (const auto& ej : j.at("equations"))
      eqs.emplace_back(mor_from_json(ej.at(0), mi), mor_from_json(ej.at(1), mi));
  return mk_presentation(objs, arrows, eqs, mks);
}

// ---------------------------------------------------------------------------
// Context, substitution and derivation dumps

inline ordered_json context_to_json(const Context& G) {
  ordered_json j;
  std::vector<const Presentation*> chain;
  for (const Presentation* p = G.pres.get();;) {
    chain.push_back(p);
    if (p->origin == OriginK::Extension)
      p = p->parent.get();
    else
      break;
  }
  std::reverse(chain.begin(), chain.end());
  j["root"] = presentation_to_json(*chain.front());
  ordered_json exts = ordered_json::array();
  for (size_t i = 1; i < chain.size(); ++i) {
    MarkIndex mi(chain[i]->markings);
    exts.push_back({{"var", store().name_str(chain[i]->ext_var)},
                    {"sigma", obj_to_json(chain[i]->ext_sigma, mi)}});
  }
  j["extensions"] = exts;
  return j;
}

inline ordered_json subst_to_json(const Subst& f) {
  MarkIndex mi(f.dst->markings);
  ordered_json j;
  ordered_json om = ordered_json::object();
  for (const auto& [n, x] : f.omap) om[store().name_str(n)] = obj_to_json(x, mi);
  j["objects"] = om;
  ordered_json mm = ordered_json::object();
  for (const auto& [n, m] : f.mmap) mm[store().name_str(n)] = mor_to_json(m, mi);
  j["arrows"] = mm;
  return j;
}

inline ordered_json trace_to_json(const std::vector<TraceStep>& tr) {
  ordered_json steps = ordered_json::array();
  for (const auto& s : tr)
    steps.push_back({{"rule", s.rule},
                     {"pos", s.pos},
                     {"before", s.before.id},
                     {"after", s.after.id}});
  return steps;
}

// debug dump of the coalgebra data at selected objects
inline ordered_json coalgebra_dump(const Context& G, const std::vector<Obj>& samples) {
  Coalgebra& co = G.lambda();
  MarkIndex mi({});
  ordered_json j;
  ordered_json lam = ordered_json::object();
  for (const auto& [n, x] : co.obj_images()) lam[store().name_str(n)] = to_string(x);
  for (const auto& [n, m] : co.mor_images()) lam[store().name_str(n)] = to_string(m);
  j["lambda"] = lam;
  ordered_json phis = ordered_json::array();
  for (Obj x : samples) {
    IsoPair p = co.phi(x);
    phis.push_back(
        {{"at", to_string(x)}, {"fwd", to_string(p.fwd)}, {"bwd", to_string(p.bwd)}});
  }
  j["phi"] = phis;
  return j;
}

}  // namespace slcc
