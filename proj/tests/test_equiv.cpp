#include <catch2/catch_amalgamated.hpp>

#include <mpst/mpst.hpp>

#include "support/generators.hpp"

using namespace mpst;

TEST_CASE("one swap separates the worked protocol from its first variant") {
  IsoVerdict v = check_iso(testgen::ehealth(), testgen::ehealth_sw());
  REQUIRE(v.status == IsoStatus::Isomorphic);
  Witness expect{{{}, Family::SwapPrefix, Direction::Forward, 2}};
  CHECK(v.witness == expect);
  CHECK(v.bound == 8);
  CHECK(v.unroll == 2);
}

TEST_CASE("swap then hoist reaches the second variant") {
  IsoVerdict v = check_iso(testgen::ehealth(), testgen::ehealth_sw_br());
  REQUIRE(v.status == IsoStatus::Isomorphic);
  Witness expect{{{}, Family::SwapPrefix, Direction::Forward, 2},
                 {{0, 0, 0}, Family::ContrExp, Direction::Forward, 0}};
  CHECK(v.witness == expect);
  // the witness really maps one type onto the other
  CHECK(alpha_equal(apply_witness(testgen::ehealth(), v.witness), testgen::ehealth_sw_br()));
  CHECK(alpha_equal(apply_witness(testgen::ehealth_sw_br(), inverted(v.witness)),
                    testgen::ehealth()));
}

TEST_CASE("a type is isomorphic to itself with an empty witness") {
  IsoVerdict v = check_iso(testgen::ehealth(), testgen::ehealth());
  CHECK(v.status == IsoStatus::Isomorphic);
  CHECK(v.witness.empty());
}

TEST_CASE("renamed recursion binders need no rewrites") {
  GlobalType a = parse_global("rec t . A -> B : <Int> ; t");
  GlobalType b = parse_global("rec s . A -> B : <Int> ; s");
  IsoVerdict v = check_iso(a, b);
  CHECK(v.status == IsoStatus::Isomorphic);
  CHECK(v.witness.empty());
}

TEST_CASE("a changed payload is a proven mismatch") {
  GlobalType g = testgen::ehealth();
  // the record update becomes a receipt
  GlobalType mutated = parse_global(
      "P -> I : <PId, DId> ; D -> R : <RetrRec> ; P -> D : <IId, Symptoms> ;"
      "D -> P : { Prescr: R -> I : <Quote> ; D -> R : { Prescr: D -> R : <Receipt> ; end },"
      "           Ref:    R -> I : <Quote> ; D -> R : { Ref: D -> R : <Test> ; end } }");
  IsoVerdict v = check_iso(g, mutated);
  REQUIRE(v.status == IsoStatus::Mismatch);
  REQUIRE(v.counterexample.has_value());
  CHECK(v.counterexample->size() == 7);
  CHECK_FALSE(v.counterexample_truncated);
  // the differing run mentions the payload only one side has
  bool mentions = false;
  for (const auto& e : *v.counterexample) {
    std::string name = payload_name(e.payload());
    if (name == "UpRec" || name == "Receipt") mentions = true;
  }
  CHECK(mentions);
  CHECK(v.detail.find("maximal") != std::string::npos);
}

TEST_CASE("loops that disagree only beyond the horizon mismatch on truncated runs") {
  GlobalType a = parse_global("rec t . A -> B : <Int> ; t");
  GlobalType b = parse_global("rec t . A -> C : <Int> ; t");
  IsoVerdict v = check_iso(a, b, {1});
  REQUIRE(v.status == IsoStatus::Mismatch);
  CHECK(v.counterexample_truncated);
  CHECK(v.detail.find("truncated") != std::string::npos);
  REQUIRE(v.counterexample.has_value());
  CHECK(v.counterexample->size() == 1);
}

TEST_CASE("the search bound turns distant pairs into inconclusive answers") {
  // three pairwise disjoint exchanges fully reversed need three swaps
  GlobalType g = parse_global("A -> B : <Int> ; C -> D : <Bool> ; E -> F : <Str> ; end");
  GlobalType h = parse_global("E -> F : <Str> ; C -> D : <Bool> ; A -> B : <Int> ; end");
  IsoVerdict far = check_iso(g, h, {0}, 2);
  CHECK(far.status == IsoStatus::Inconclusive);
  CHECK(far.bound == 2);
  CHECK(far.detail.find("no rewrite sequence") != std::string::npos);
  CHECK(far.explored > 1);

  IsoVerdict near = check_iso(g, h, {0}, 3);
  REQUIRE(near.status == IsoStatus::Isomorphic);
  CHECK(near.witness.size() == 3);

  // bound zero cannot even leave the start type
  IsoVerdict stuck = check_iso(testgen::ehealth(), testgen::ehealth_sw(), {2}, 0);
  CHECK(stuck.status == IsoStatus::Inconclusive);
  CHECK(stuck.explored == 1);
}

TEST_CASE("both inputs must be well formed and projectable") {
  GlobalType good = testgen::ehealth();
  GlobalType unbound = GlobalType::var(RecVar("t"));
  CHECK_THROWS_AS(check_iso(unbound, good), FormationError);
  GlobalType unprojectable =
      parse_global("A -> B : { l1: C -> E : <Int> ; end, l2: E -> C : <Int> ; end }");
  CHECK_THROWS_AS(check_iso(good, unprojectable), UnmergeableError);
  CHECK_THROWS_AS(require_projectable(unprojectable), UnmergeableError);
  try {
    require_projectable(unbound);
    FAIL("expected FormationError");
  } catch (const FormationError& e) {
    CHECK(e.rule() == "Recursion");
  }
}

TEST_CASE("trace correspondence holds for the worked protocol and the corpus") {
  CHECK(check_trace_correspondence(testgen::ehealth(), {2}).ok);
  CHECK(check_trace_correspondence(testgen::ehealth_sw_br(), {2}).ok);
  for (const auto& g : testgen::projectable_corpus(60, 1312)) {
    CheckResult r = check_trace_correspondence(g, {0});
    CHECK(r.ok);
    CHECK(r.name == "trace-correspondence");
  }
}

TEST_CASE("correspondence reports the recursive budget skew honestly") {
  // one global unfolding buys a whole exchange, but the configuration pays
  // for both endpoints, so the done-run exists globally yet not locally
  GlobalType g = parse_global("rec t . A -> B : { more: t, done: end }");
  CheckResult r = check_trace_correspondence(g, {1});
  CHECK_FALSE(r.ok);
  CHECK(r.detail.find("differ") != std::string::npos);
  // at budget zero neither side affords anything and they agree again
  CHECK(check_trace_correspondence(g, {0}).ok);
}

TEST_CASE("every applicable rewrite preserves traces and denotation here") {
  GlobalType g = testgen::ehealth();
  for (const auto& site : applicable_sites(g)) {
    CheckResult t = check_site_preserves_traces(g, site, {2});
    CHECK(t.ok);
    CHECK(t.name == "trace-preservation");
    CheckResult d = check_site_preserves_denotation(g, site, {2});
    CHECK(d.ok);
    CHECK(d.name == "denotation-preservation");
  }
}
