#include <catch2/catch_amalgamated.hpp>

#include "slcc/json_io.hpp"

using namespace slcc;

TEST_CASE("presentation JSON round-trips bit-exactly") {
  Obj A = obj_gen("A"), B = obj_gen("B"), C = obj_gen("C"), V = obj_gen("V");
  Mor f1 = mor_gen("f1"), f2 = mor_gen("f2"), p1 = mor_gen("p1"), p2 = mor_gen("p2");
  MarkId tmm = mk_tm_marking(A);
  MarkId pbm = mk_pb_marking(f1, f2, p1, p2);
  auto P = mk_presentation(
      {"A", "B", "C", "V"},
      {{"f1", A, C}, {"f2", B, C}, {"p1", V, A}, {"p2", V, B},
       {"x", pb_obj(f1, f2), A}},
      {{comp(mor_gen("f1"), mor_gen("p1")), comp(mor_gen("f2"), mor_gen("p2"))}},
      {tmm, pbm});
  auto j1 = presentation_to_json(*P);
  PresPtr Q = presentation_from_json(j1);
  auto j2 = presentation_to_json(*Q);
  CHECK(j1 == j2);
  CHECK(j1.dump() == j2.dump());
}

TEST_CASE("terms with MarkInv round-trip through marking indices") {
  Obj A = obj_gen("A");
  MarkId tmm = mk_tm_marking(A);
  auto P = mk_presentation({"A"}, {}, {}, {tmm});
  MarkIndex mi(P->markings);
  Mor t = comp(mark_inv(tmm), bang(A));
  auto j = mor_to_json(t, mi);
  Mor back = mor_from_json(j, mi);
  CHECK(back == t);
}

TEST_CASE("context and substitution dumps") {
  Obj A = obj_gen("A");
  auto S = mk_presentation({"A"}, {}, {}, {});
  Context G = free_context(S);
  Extension e = extend(G, A);
  auto cj = context_to_json(e.ctx);
  CHECK(cj.contains("root"));
  REQUIRE(cj.at("extensions").size() == 1);
  CHECK(cj.at("extensions").at(0).at("sigma").at("k") == "gen");

  Subst id = identity_subst(e.ctx.pres);
  auto sj = subst_to_json(id);
  CHECK(sj.at("objects").contains("A"));
}

TEST_CASE("coalgebra debug dump") {
  Obj A = obj_gen("A");
  auto S = mk_presentation({"A"}, {}, {}, {});
  Context G = free_context(S);
  auto j = coalgebra_dump(G, {A, obj_one()});
  CHECK(j.contains("lambda"));
  CHECK(j.at("phi").size() == 2);
}
