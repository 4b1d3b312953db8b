#pragma once

// Hash-consed term calculus for finitely presented strict lcc categories.
//
// Object terms and morphism terms are interned in a global store; equality of
// canonical representatives is identity of ids.  Terms are context-free
// syntax; presentations decide well-formedness.

#include <array>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace slcc {

// ---------------------------------------------------------------------------
// Errors

enum class Err {
  DuplicateName,
  BoundaryMismatch,
  MalformedMarking,
  IllFormed,
  AlreadyLifted,
  UnsupportedOrigin,
  TypeMismatch,
  ReflRequiresEqual,
  TargetRejects,
  EquationFails,
  NotLcc,
  SyntaxError,
  ScopeError,
  EngineUnknown,
  UsageError,
};

class Error : public std::runtime_error {
public:
  Err code;
  Error(Err c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] inline void fail(Err c, const std::string& msg) { throw Error(c, msg); }

// ---------------------------------------------------------------------------
// Handles

using Name = uint32_t;

struct Obj {
  uint32_t id = 0;
  bool ok() const { return id != 0; }
  friend bool operator==(Obj a, Obj b) { return a.id == b.id; }
  friend bool operator!=(Obj a, Obj b) { return a.id != b.id; }
  friend bool operator<(Obj a, Obj b) { return a.id < b.id; }
};

struct Mor {
  uint32_t id = 0;
  bool ok() const { return id != 0; }
  friend bool operator==(Mor a, Mor b) { return a.id == b.id; }
  friend bool operator!=(Mor a, Mor b) { return a.id != b.id; }
  friend bool operator<(Mor a, Mor b) { return a.id < b.id; }
};

using MarkId = uint32_t;

enum class ObjK : uint8_t { Gen, One, Pb, Pi, Lifted };

enum class MorK : uint8_t {
  Gen,
  Id,
  Comp,
  Bang,
  P1,
  P2,
  PbPair,
  PiMap,
  Eval,
  Curry,
  MarkInv,
  LiftedGen,
};

enum class Shape : uint8_t { Tm, Pb, Pi };

struct ObjNode {
  ObjK k;
  Name name = 0;  // Gen
  Mor m1, m2;     // Pb: (f1,f2); Pi: (f1,g)
  Obj sub;        // Lifted payload
  friend bool operator==(const ObjNode& a, const ObjNode& b) {
    return a.k == b.k && a.name == b.name && a.m1 == b.m1 && a.m2 == b.m2 && a.sub == b.sub;
  }
};

struct MorNode {
  MorK k;
  Name name = 0;       // Gen
  Obj a;               // Id, Bang
  Mor m1, m2, m3, m4;  // Comp(g,f)=(m1,m2); P1/P2/PiMap/Eval(f1,f2|g)=(m1,m2);
                       // PbPair(f1,f2,q1,q2); Curry(f1,g,f2p,e)
  Mor sub;             // LiftedGen payload
  MarkId mark = 0;     // MarkInv
  friend bool operator==(const MorNode& a, const MorNode& b) {
    return a.k == b.k && a.name == b.name && a.a == b.a && a.m1 == b.m1 && a.m2 == b.m2 &&
           a.m3 == b.m3 && a.m4 == b.m4 && a.sub == b.sub && a.mark == b.mark;
  }
};

// A marked Tm/Pb/Pi diagram.  Tm: (t).  Pb: (f1,f2,p1,p2), vertex dom(p1).
// Pi: (f1,g,f2m,p1,p2,eps), vertex dom(f2m).
struct MarkingData {
  Shape shape;
  Obj t;                       // Tm
  Mor f1, f2, p1, p2, g, eps;  // Pb uses f1,f2,p1,p2; Pi uses all six (f2 = f2m)
  friend bool operator==(const MarkingData& a, const MarkingData& b) {
    return a.shape == b.shape && a.t == b.t && a.f1 == b.f1 && a.f2 == b.f2 && a.p1 == b.p1 &&
           a.p2 == b.p2 && a.g == b.g && a.eps == b.eps;
  }
};

namespace detail {

inline size_t hash_mix(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

struct ObjNodeHash {
  size_t operator()(const ObjNode& n) const {
    size_t h = static_cast<size_t>(n.k);
    h = hash_mix(h, n.name);
    h = hash_mix(h, n.m1.id);
    h = hash_mix(h, n.m2.id);
    h = hash_mix(h, n.sub.id);
    return h;
  }
};

struct MorNodeHash {
  size_t operator()(const MorNode& n) const {
    size_t h = static_cast<size_t>(n.k);
    h = hash_mix(h, n.name);
    h = hash_mix(h, n.a.id);
    h = hash_mix(h, n.m1.id);
    h = hash_mix(h, n.m2.id);
    h = hash_mix(h, n.m3.id);
    h = hash_mix(h, n.m4.id);
    h = hash_mix(h, n.sub.id);
    h = hash_mix(h, n.mark);
    return h;
  }
};

struct MarkingHash {
  size_t operator()(const MarkingData& m) const {
    size_t h = static_cast<size_t>(m.shape);
    h = hash_mix(h, m.t.id);
    h = hash_mix(h, m.f1.id);
    h = hash_mix(h, m.f2.id);
    h = hash_mix(h, m.p1.id);
    h = hash_mix(h, m.p2.id);
    h = hash_mix(h, m.g.id);
    h = hash_mix(h, m.eps.id);
    return h;
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Global interning store.  Concurrent reads of already-interned nodes are
// safe after publication; inserts are serialized by a mutex.

class TermStore {
public:
  static TermStore& instance() {
    static TermStore s;
    return s;
  }

  Name name(const std::string& s) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = name_ids_.find(s);
    if (it != name_ids_.end()) return it->second;
    names_.push_back(s);
    Name id = static_cast<Name>(names_.size() - 1);
    name_ids_.emplace(s, id);
    return id;
  }

  const std::string& name_str(Name n) const { return names_.at(n); }

  Obj intern_obj(const ObjNode& n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = obj_ids_.find(n);
    if (it != obj_ids_.end()) return it->second;
    objs_.push_back(n);
    Obj o{static_cast<uint32_t>(objs_.size() - 1)};
    obj_ids_.emplace(n, o);
    return o;
  }

  Mor intern_mor(const MorNode& n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = mor_ids_.find(n);
    if (it != mor_ids_.end()) return it->second;
    mors_.push_back(n);
    Mor m{static_cast<uint32_t>(mors_.size() - 1)};
    mor_ids_.emplace(n, m);
    return m;
  }

  MarkId intern_marking(const MarkingData& d) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = mark_ids_.find(d);
    if (it != mark_ids_.end()) return it->second;
    marks_.push_back(d);
    MarkId id = static_cast<MarkId>(marks_.size() - 1);
    mark_ids_.emplace(d, id);
    return id;
  }

  const ObjNode& obj(Obj o) const { return objs_.at(o.id); }
  const MorNode& mor(Mor m) const { return mors_.at(m.id); }
  const MarkingData& marking(MarkId m) const { return marks_.at(m); }

private:
  TermStore() {
    // id 0 of every arena is the invalid sentinel
    names_.push_back("<invalid>");
    name_ids_.emplace("<invalid>", 0);
    objs_.push_back(ObjNode{ObjK::Gen, 0, {}, {}, {}});
    mors_.push_back(MorNode{});
    marks_.push_back(MarkingData{Shape::Tm, {}, {}, {}, {}, {}, {}, {}});
  }

  std::mutex mu_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, Name> name_ids_;
  std::vector<ObjNode> objs_;
  std::unordered_map<ObjNode, Obj, detail::ObjNodeHash> obj_ids_;
  std::vector<MorNode> mors_;
  std::unordered_map<MorNode, Mor, detail::MorNodeHash> mor_ids_;
  std::vector<MarkingData> marks_;
  std::unordered_map<MarkingData, MarkId, detail::MarkingHash> mark_ids_;
};

inline TermStore& store() { return TermStore::instance(); }

inline const ObjNode& node(Obj o) { return store().obj(o); }
inline const MorNode& node(Mor m) { return store().mor(m); }
inline const MarkingData& marking(MarkId m) { return store().marking(m); }

// ---------------------------------------------------------------------------
// Builders

inline Obj obj_gen(Name n) { return store().intern_obj(ObjNode{ObjK::Gen, n, {}, {}, {}}); }
inline Obj obj_gen(const std::string& n) { return obj_gen(store().name(n)); }

inline Obj obj_one() { return store().intern_obj(ObjNode{ObjK::One, 0, {}, {}, {}}); }

inline Obj pb_obj(Mor f1, Mor f2) {
  return store().intern_obj(ObjNode{ObjK::Pb, 0, f1, f2, {}});
}

inline Obj pi_obj(Mor f1, Mor g) {
  return store().intern_obj(ObjNode{ObjK::Pi, 0, f1, g, {}});
}

inline Obj obj_lifted(Obj x) {
  if (node(x).k == ObjK::Lifted) fail(Err::IllFormed, "Lifted(Lifted _) is ill-formed");
  return store().intern_obj(ObjNode{ObjK::Lifted, 0, {}, {}, x});
}

inline Mor mor_gen(Name n) {
  MorNode m{};
  m.k = MorK::Gen;
  m.name = n;
  return store().intern_mor(m);
}
inline Mor mor_gen(const std::string& n) { return mor_gen(store().name(n)); }

inline Mor mor_id(Obj a) {
  MorNode m{};
  m.k = MorK::Id;
  m.a = a;
  return store().intern_mor(m);
}

inline Mor comp(Mor g, Mor f) {  // g after f
  MorNode m{};
  m.k = MorK::Comp;
  m.m1 = g;
  m.m2 = f;
  return store().intern_mor(m);
}

inline Mor bang(Obj a) {
  MorNode m{};
  m.k = MorK::Bang;
  m.a = a;
  return store().intern_mor(m);
}

inline Mor pb_p1(Mor f1, Mor f2) {
  MorNode m{};
  m.k = MorK::P1;
  m.m1 = f1;
  m.m2 = f2;
  return store().intern_mor(m);
}

inline Mor pb_p2(Mor f1, Mor f2) {
  MorNode m{};
  m.k = MorK::P2;
  m.m1 = f1;
  m.m2 = f2;
  return store().intern_mor(m);
}

inline Mor pb_pair(Mor f1, Mor f2, Mor q1, Mor q2) {
  MorNode m{};
  m.k = MorK::PbPair;
  m.m1 = f1;
  m.m2 = f2;
  m.m3 = q1;
  m.m4 = q2;
  return store().intern_mor(m);
}

inline Mor pi_map(Mor f1, Mor g) {
  MorNode m{};
  m.k = MorK::PiMap;
  m.m1 = f1;
  m.m2 = g;
  return store().intern_mor(m);
}

inline Mor pi_eval(Mor f1, Mor g) {
  MorNode m{};
  m.k = MorK::Eval;
  m.m1 = f1;
  m.m2 = g;
  return store().intern_mor(m);
}

inline Mor curry(Mor f1, Mor g, Mor f2p, Mor e) {
  MorNode m{};
  m.k = MorK::Curry;
  m.m1 = f1;
  m.m2 = g;
  m.m3 = f2p;
  m.m4 = e;
  return store().intern_mor(m);
}

inline Mor mark_inv(MarkId mk) {
  MorNode m{};
  m.k = MorK::MarkInv;
  m.mark = mk;
  return store().intern_mor(m);
}

inline Mor mor_lifted_gen(Mor f) {
  MorNode m{};
  m.k = MorK::LiftedGen;
  m.sub = f;
  return store().intern_mor(m);
}

inline MarkId mk_tm_marking(Obj t) {
  return store().intern_marking(MarkingData{Shape::Tm, t, {}, {}, {}, {}, {}, {}});
}

inline MarkId mk_pb_marking(Mor f1, Mor f2, Mor p1, Mor p2) {
  return store().intern_marking(MarkingData{Shape::Pb, {}, f1, f2, p1, p2, {}, {}});
}

inline MarkId mk_pi_marking(Mor f1, Mor g, Mor f2m, Mor p1, Mor p2, Mor eps) {
  return store().intern_marking(MarkingData{Shape::Pi, {}, f1, f2m, p1, p2, g, eps});
}

// ---------------------------------------------------------------------------
// Composition spines.  spine[0] is the first morphism applied; the composite
// reads right to left:  t = s[n-1] o ... o s[0].

inline void flatten_into(Mor m, std::vector<Mor>& out) {
  MorNode n = node(m);
  if (n.k == MorK::Comp) {
    flatten_into(n.m2, out);
    flatten_into(n.m1, out);
  } else {
    out.push_back(m);
  }
}

inline std::vector<Mor> spine(Mor m) {
  std::vector<Mor> s;
  flatten_into(m, s);
  return s;
}

// Rebuild a right-associated composite; an empty spine yields the identity on
// the given object.
inline Mor unspine(const std::vector<Mor>& s, Obj dom_if_empty) {
  if (s.empty()) return mor_id(dom_if_empty);
  Mor acc = s[0];
  for (size_t i = 1; i < s.size(); ++i) acc = comp(s[i], acc);
  return acc;
}

// ---------------------------------------------------------------------------
// Printing

inline std::string to_string(Obj o);
inline std::string to_string(Mor m);

inline std::string to_string(Obj o) {
  ObjNode n = node(o);
  switch (n.k) {
    case ObjK::Gen: return store().name_str(n.name);
    case ObjK::One: return "1";
    case ObjK::Pb: return "Pb(" + to_string(n.m1) + ", " + to_string(n.m2) + ")";
    case ObjK::Pi: return "Pi(" + to_string(n.m1) + ", " + to_string(n.m2) + ")";
    case ObjK::Lifted: return "^" + to_string(n.sub);
  }
  return "?";
}

inline std::string to_string(Mor m) {
  MorNode n = node(m);
  switch (n.k) {
    case MorK::Gen: return store().name_str(n.name);
    case MorK::Id: return "id{" + to_string(n.a) + "}";
    case MorK::Comp: return to_string(n.m1) + " . " + to_string(n.m2);
    case MorK::Bang: return "!{" + to_string(n.a) + "}";
    case MorK::P1: return "p1(" + to_string(n.m1) + ", " + to_string(n.m2) + ")";
    case MorK::P2: return "p2(" + to_string(n.m1) + ", " + to_string(n.m2) + ")";
    case MorK::PbPair:
      return "<" + to_string(n.m3) + ", " + to_string(n.m4) + ">{" + to_string(n.m1) + "; " +
             to_string(n.m2) + "}";
    case MorK::PiMap: return "pi(" + to_string(n.m1) + ", " + to_string(n.m2) + ")";
    case MorK::Eval: return "ev(" + to_string(n.m1) + ", " + to_string(n.m2) + ")";
    case MorK::Curry:
      return "cur(" + to_string(n.m1) + ", " + to_string(n.m2) + "; " + to_string(n.m3) + "; " +
             to_string(n.m4) + ")";
    case MorK::MarkInv: return "inv#" + std::to_string(n.mark);
    case MorK::LiftedGen: return "^(" + to_string(n.sub) + ")";
  }
  return "?";
}

inline size_t term_size(Obj o);
inline size_t term_size(Mor m);

inline size_t term_size(Obj o) {
  ObjNode n = node(o);
  switch (n.k) {
    case ObjK::Gen:
    case ObjK::One: return 1;
    case ObjK::Pb:
    case ObjK::Pi: return 1 + term_size(n.m1) + term_size(n.m2);
    case ObjK::Lifted: return 1 + term_size(n.sub);
  }
  return 1;
}

inline size_t term_size(Mor m) {
  MorNode n = node(m);
  switch (n.k) {
    case MorK::Gen: return 1;
    case MorK::Id:
    case MorK::Bang: return 1 + term_size(n.a);
    case MorK::Comp: return 1 + term_size(n.m1) + term_size(n.m2);
    case MorK::P1:
    case MorK::P2:
    case MorK::PiMap:
    case MorK::Eval: return 1 + term_size(n.m1) + term_size(n.m2);
    case MorK::PbPair:
    case MorK::Curry:
      return 1 + term_size(n.m1) + term_size(n.m2) + term_size(n.m3) + term_size(n.m4);
    case MorK::MarkInv: return 1;
    case MorK::LiftedGen: return 1 + term_size(n.sub);
  }
  return 1;
}

}  // namespace slcc
