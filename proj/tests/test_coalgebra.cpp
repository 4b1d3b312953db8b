#include <catch2/catch_amalgamated.hpp>

#include "slcc/coalgebra.hpp"

using namespace slcc;

namespace {

PresPtr free_ctx() {
  Obj A = obj_gen("A"), B = obj_gen("B");
  return mk_presentation({"A", "B"}, {{"f", A, B}, {"g", B, A}}, {}, {});
}

// a context extension by hand: parent generators plus v : 1 -> sigma
PresPtr extend_raw(PresPtr parent, Obj sigma, const std::string& vname) {
  auto Q = std::make_shared<Presentation>();
  Q->origin = OriginK::Extension;
  Q->parent = parent;
  Q->ext_sigma = nf(sigma, *parent);
  Q->ext_var = store().name(vname);
  Q->obj_gens = parent->obj_gens;
  Q->mor_gen_order = parent->mor_gen_order;
  Q->mor_gens = parent->mor_gens;
  Q->equations = parent->equations;
  Q->markings = parent->markings;
  Q->mor_gen_order.push_back(Q->ext_var);
  Q->mor_gens.emplace(Q->ext_var, MorGenInfo{obj_one(), Q->ext_sigma});
  return Q;
}

Verdict lift_eq(const Coalgebra& co, Mor a, Mor b) {
  EqOptions opt;
  opt.budget = 50000;
  return decide_equal(a, b, *co.lift(), opt);
}

}  // namespace

TEST_CASE("eta embedding and eps collapse") {
  auto P = free_ctx();
  auto L = mk_lift(P);
  Obj A = obj_gen("A");
  Mor f = mor_gen("f");

  CHECK(eta_embed(A, *P) == obj_lifted(A));
  CHECK(eta_embed(obj_one(), *P) == obj_lifted(obj_one()));
  CHECK(obj_lifted(obj_one()) != obj_one());

  // eps o eta = identity on terms
  CHECK(eps_collapse(eta_embed(A, *P), *L) == A);
  CHECK(eps_collapse(eta_embed(f, *P), *L) == f);
  Obj pb = pb_obj(f, f);
  CHECK(eps_collapse(eta_embed(pb, *P), *L) == pb);
  // homomorphy on constructors
  CHECK(eps_collapse(pb_obj(mor_lifted_gen(f), mor_lifted_gen(f)), *L) == pb_obj(f, f));

  CHECK_THROWS_AS(eta_embed(A, *L), Error);
}

TEST_CASE("coalgebra on a free context sends generators to lifted generators") {
  auto P = free_ctx();
  Coalgebra co(P);
  CHECK(co.lam(obj_gen("A")) == obj_lifted(obj_gen("A")));
  CHECK(co.lam(mor_gen("f")) == mor_lifted_gen(mor_gen("f")));
  // lambda is strict: the canonical terminal goes to the lift's terminal
  CHECK(co.lam(obj_one()) == obj_one());
  Mor f = mor_gen("f");
  CHECK(co.lam(pb_obj(f, f)) == pb_obj(co.lam(f), co.lam(f)));
}

TEST_CASE("empty context has the empty coalgebra") {
  auto P = empty_presentation();
  Coalgebra co(P);
  CHECK(co.obj_images().empty());
  CHECK(co.mor_images().empty());
  CHECK(co.lam(obj_one()) == obj_one());
}

TEST_CASE("phi components are engine-verified isomorphisms") {
  auto P = free_ctx();
  Coalgebra co(P);
  Obj A = obj_gen("A");
  Mor f = mor_gen("f");

  SECTION("generator: identity") {
    IsoPair p = co.phi(A);
    CHECK(p.fwd == mor_id(obj_lifted(A)));
  }
  SECTION("terminal: the unique iso between One and Lifted(One)") {
    IsoPair p = co.phi(obj_one());
    Mor rt = comp(p.fwd, p.bwd);  // Lifted(One) -> One -> Lifted(One)
    CHECK(lift_eq(co, rt, mor_id(obj_lifted(obj_one()))).equal());
    Mor rt2 = comp(p.bwd, p.fwd);
    CHECK(lift_eq(co, rt2, mor_id(obj_one())).equal());
  }
  SECTION("pullback object: comparison assembled from pairings and MarkInv") {
    Obj x = pb_obj(f, f);
    IsoPair p = co.phi(x);
    Bound bf = infer(p.fwd, *co.lift());
    CHECK(nf(bf.dom, *co.lift()) == nf(co.lam(x), *co.lift()));
    CHECK(nf(bf.cod, *co.lift()) == obj_lifted(nf(x, *P)));
    CHECK(lift_eq(co, comp(p.fwd, p.bwd), mor_id(nf(bf.cod, *co.lift()))).equal());
    CHECK(lift_eq(co, comp(p.bwd, p.fwd), mor_id(nf(bf.dom, *co.lift()))).equal());
  }
  SECTION("dependent product object") {
    Mor g = mor_gen("g");
    Obj x = pi_obj(f, g);  // f : A -> B, g : B -> A so cod(g) = dom(f)
    IsoPair p = co.phi(x);
    Bound bf = infer(p.fwd, *co.lift());
    CHECK(lift_eq(co, comp(p.fwd, p.bwd), mor_id(nf(bf.cod, *co.lift()))).equal());
    CHECK(lift_eq(co, comp(p.bwd, p.fwd), mor_id(nf(bf.dom, *co.lift()))).equal());
  }
}

TEST_CASE("coalgebra on an extension: the corrected variable") {
  auto P = free_ctx();
  Obj A = obj_gen("A");
  auto Q = extend_raw(P, A, "v");
  Coalgebra co(Q);
  // v' : 1 -> image of lambda(sigma), as in the pushout extension
  Mor vprime = co.lam(mor_gen("v"));
  Bound b = infer(vprime, *co.lift());
  CHECK(nf(b.dom, *co.lift()) == obj_one());
  CHECK(nf(b.cod, *co.lift()) == nf(co.lam(A), *co.lift()));
}

TEST_CASE("coalgebra on an extension by a compound type") {
  auto P = free_ctx();
  Mor f = mor_gen("f");
  auto Q = extend_raw(P, pb_obj(f, f), "v");
  Coalgebra co(Q);
  Mor vprime = co.lam(mor_gen("v"));
  Bound b = infer(vprime, *co.lift());
  CHECK(nf(b.dom, *co.lift()) == obj_one());
  CHECK(nf(b.cod, *co.lift()) == nf(co.lam(pb_obj(f, f)), *co.lift()));
  // iterated extension
  auto R = extend_raw(Q, obj_gen("B"), "w");
  Coalgebra co2(R);
  Mor wprime = co2.lam(mor_gen("w"));
  CHECK(nf(infer(wprime, *co2.lift()).dom, *co2.lift()) == obj_one());
}

TEST_CASE("unsupported origins are rejected") {
  auto P = free_ctx();
  auto L = mk_lift(P);
  CHECK_THROWS_AS(Coalgebra(L), Error);
}

TEST_CASE("strictification of sigma^*") {
  auto P = free_ctx();
  Obj A = obj_gen("A"), B = obj_gen("B");
  Coalgebra co(P);
  SigmaStarWeak ss(P, A);
  Strictifier st(co, ss);

  SECTION("the strictness repair at the terminal") {
    // sigma^* sends 1 to the projection of A x 1; the strictification sends
    // it to the slice terminal Id(A)
    SObj weak = ss.obj(obj_one());
    CHECK(nf(weak.display, *P) != mor_id(A));
    SObj strict = st.strict_obj(obj_one());
    CHECK(nf(strict.display, *P) == mor_id(A));
  }
  SECTION("generators are untouched") {
    SObj s1 = st.strict_obj(B);
    SObj s2 = ss.obj(B);
    CHECK(nf(s1.display, *P) == nf(s2.display, *P));
  }
  SECTION("zeta at the terminal is the unique terminal iso") {
    SIso z = st.zeta(obj_one());
    // z.fwd : strict(1) = Id(A) -> weak image A x 1 -> A; both composites id
    Verdict v1 = ss.view().eq(comp(z.fwd.under, z.bwd.under),
                              mor_id(infer(z.bwd.under, *P).dom));
    CHECK(v1.equal());
    Verdict v2 = ss.view().eq(comp(z.bwd.under, z.fwd.under),
                              mor_id(infer(z.fwd.under, *P).dom));
    CHECK(v2.equal());
  }
  SECTION("zeta naturality on a sample morphism") {
    // zeta_cod o f^s(h) = f(h) o zeta_dom for h = f : A -> B
    Mor h = mor_gen("f");
    SMor fs_h = st.strict_mor(h);
    SMor f_h = ss.mor(h);
    SIso zd = st.zeta(A);
    SIso zc = st.zeta(B);
    Mor lhs = comp(zc.fwd.under, fs_h.under);
    Mor rhs = comp(f_h.under, zd.fwd.under);
    CHECK(ss.view().eq(lhs, rhs).equal());
  }
}

TEST_CASE("strictify is idempotent") {
  // wrap the strictification of sigma^* as a weak functor whose comparisons
  // are definitional, and strictify again: same images, identity zeta
  auto P = free_ctx();
  Obj A = obj_gen("A"), B = obj_gen("B");
  Coalgebra co(P);
  SigmaStarWeak ss(P, A);
  Strictifier st(co, ss);

  struct StrictWrap : WeakFromBase {
    Strictifier& st;
    explicit StrictWrap(Strictifier& s) : st(s) {}
    const SliceView& view() const override { return st.view(); }
    SObj obj(Obj x) override { return st.strict_obj(x); }
    SMor mor(Mor m) override { return st.strict_mor(m); }
    SMor inv_tm() override {
      const SliceView& V = st.view();
      return V.id(V.terminal());
    }
    SMor inv_pb(Mor f1, Mor f2) override {
      SMor i1 = st.strict_mor(f1), i2 = st.strict_mor(f2);
      return st.view().id(st.view().pb(i1, i2));
    }
    SMor inv_pi(Mor f1, Mor g) override {
      SMor i1 = st.strict_mor(f1), ig = st.strict_mor(g);
      return st.view().id(st.view().pi(i1, ig));
    }
  } wrap(st);

  Strictifier st2(co, wrap);
  for (Obj x : {A, B, obj_one(), pb_obj(mor_gen("f"), mor_gen("f"))}) {
    SObj a = st2.strict_obj(x);
    SObj b = st.strict_obj(x);
    CHECK(nf(a.display, *P) == nf(b.display, *P));
    SIso z = st2.zeta(x);
    Verdict v = st.view().eq(z.fwd.under, mor_id(nf(infer(z.fwd.under, *P).dom, *P)));
    CHECK(v.equal());
  }
}
