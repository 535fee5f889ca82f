#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include <mpst/mpst.hpp>

#include "support/generators.hpp"

using namespace mpst;

TEST_CASE("swap exchanges adjacent independent prefixes") {
  GlobalType g = testgen::ehealth();
  GlobalType swapped = swap_prefix(g, 2);
  CHECK(alpha_equal(swapped, testgen::ehealth_sw()));
  CHECK(alpha_equal(swap_prefix(swapped, 2), g));  // self-inverse

  // positions 2 and 3 share the doctor, so the guard leaves g alone
  CHECK(alpha_equal(swap_prefix(g, 3), g));
}

TEST_CASE("swap rejects indices outside the chain") {
  GlobalType g = testgen::ehealth();  // chain length 3
  CHECK_THROWS_AS(swap_prefix(g, 0), IndexOutOfChainError);
  CHECK_THROWS_AS(swap_prefix(g, 1), IndexOutOfChainError);
  CHECK_THROWS_AS(swap_prefix(g, 4), IndexOutOfChainError);
  CHECK_THROWS_AS(swap_prefix(GlobalType::end(), 2), IndexOutOfChainError);
}

TEST_CASE("swap descends to the addressed position") {
  GlobalType g = parse_global("A -> B : <Int> ; C -> D : <Bool> ; E -> F : <Str> ; end");
  GlobalType expect = parse_global("A -> B : <Int> ; E -> F : <Str> ; C -> D : <Bool> ; end");
  CHECK(alpha_equal(swap_prefix(g, 3), expect));
  // the head stays in place when the swap happens further down
  CHECK(swap_prefix(g, 3).head() == g.head());
}

TEST_CASE("contr hoists a shared independent head out of a branching") {
  GlobalType g = parse_global("A -> B : { l: C -> D : <Int> ; end, m: C -> D : <Int> ; end }");
  GlobalType hoisted = contr(g);
  CHECK(alpha_equal(hoisted,
                    parse_global("C -> D : <Int> ; A -> B : { l: end, m: end }")));
  CHECK(alpha_equal(exp(hoisted), g));  // push it back in

  // guard failures leave the input untouched
  GlobalType touches = parse_global("A -> B : { l: B -> C : <Int> ; end, m: B -> C : <Int> ; end }");
  CHECK(alpha_equal(contr(touches), touches));
  GlobalType differs = parse_global("A -> B : { l: C -> D : <Int> ; end, m: C -> D : <Bool> ; end }");
  CHECK(alpha_equal(contr(differs), differs));
  GlobalType bare = parse_global("A -> B : { l: end, m: end }");
  CHECK(alpha_equal(contr(bare), bare));
  CHECK(alpha_equal(exp(bare), bare));          // not a prefix
  CHECK(alpha_equal(exp(touches), touches));    // continuation is not a branching
}

TEST_CASE("exp respects the independence guard") {
  GlobalType g = parse_global("A -> C : <Int> ; A -> B : { l: end, m: end }");
  CHECK(alpha_equal(exp(g), g));  // head involves the selecting participant
  GlobalType ok = parse_global("C -> D : <Int> ; A -> B : { l: end, m: end }");
  CHECK(exp(ok).kind() == GlobalType::Kind::Branch);
}

TEST_CASE("hoist and push round-trip through the worked protocol") {
  GlobalType gsw = testgen::ehealth_sw();
  RewriteSite hoist{{0, 0, 0}, Family::ContrExp, Direction::Forward, 0};
  GlobalType gswbr = apply_site(gsw, hoist);
  CHECK(alpha_equal(gswbr, testgen::ehealth_sw_br()));
  CHECK(alpha_equal(apply_site(gswbr, inverted(hoist)), gsw));
}

TEST_CASE("branch distribution flips independent nested choices") {
  GlobalType g = parse_global(
      "A -> B : { l1: C -> D : { m1: end, m2: A -> C : <Int> ; end },"
      "           l2: C -> D : { m1: end, m2: A -> C : <Int> ; end } }");
  GlobalType flipped = branch_distrib(g, Direction::Forward);
  GlobalType expect = parse_global(
      "C -> D : { m1: A -> B : { l1: end, l2: end },"
      "           m2: A -> B : { l1: A -> C : <Int> ; end, l2: A -> C : <Int> ; end } }");
  CHECK(alpha_equal(flipped, expect));
  CHECK_FALSE(alpha_equal(flipped, g));  // the root pair changed
  CHECK(alpha_equal(branch_distrib(flipped, Direction::Inverse), g));
}

TEST_CASE("branch distribution guards") {
  // continuations depending on the outer label block the forward direction
  GlobalType skew = parse_global(
      "A -> B : { l1: C -> D : { m: end }, l2: C -> D : { m: A -> C : <Int> ; end } }");
  CHECK(alpha_equal(branch_distrib(skew, Direction::Forward), skew));
  // but the inverse direction applies (one inner label per arm) and round-trips
  GlobalType pushed = branch_distrib(skew, Direction::Inverse);
  CHECK_FALSE(alpha_equal(pushed, skew));
  CHECK(pushed.sender() == Participant("C"));
  CHECK(alpha_equal(branch_distrib(pushed, Direction::Forward), skew));

  // overlapping pairs fail the shape check in both directions
  GlobalType overlap = parse_global(
      "A -> B : { l1: A -> C : { m: end }, l2: A -> C : { m: end } }");
  CHECK(alpha_equal(branch_distrib(overlap, Direction::Forward), overlap));
  CHECK(alpha_equal(branch_distrib(overlap, Direction::Inverse), overlap));

  // differing inner label sets fail the shape check
  GlobalType ragged = parse_global(
      "A -> B : { l1: C -> D : { m1: end }, l2: C -> D : { m2: end } }");
  CHECK(alpha_equal(branch_distrib(ragged, Direction::Forward), ragged));
}

TEST_CASE("witness inversion reverses and flips") {
  RewriteSite sw{{}, Family::SwapPrefix, Direction::Forward, 2};
  RewriteSite ce{{0}, Family::ContrExp, Direction::Forward, 0};
  RewriteSite bd{{1}, Family::BranchDistrib, Direction::Inverse, 0};
  CHECK(inverted(sw) == sw);
  CHECK(inverted(ce) == (RewriteSite{{0}, Family::ContrExp, Direction::Inverse, 0}));
  CHECK(inverted(bd) == (RewriteSite{{1}, Family::BranchDistrib, Direction::Forward, 0}));
  Witness w{sw, ce, bd};
  Witness wi = inverted(w);
  REQUIRE(wi.size() == 3);
  CHECK(wi[0] == inverted(bd));
  CHECK(wi[1] == inverted(ce));
  CHECK(wi[2] == sw);
}

TEST_CASE("apply_site addresses nodes by path") {
  GlobalType g = testgen::ehealth();
  CHECK_THROWS_AS(
      (apply_site(g, RewriteSite{{5, 5}, Family::ContrExp, Direction::Forward, 0})), Error);
  // identity witness
  CHECK(alpha_equal(apply_witness(g, {}), g));
  // a swap inside a recursion body
  GlobalType loop = parse_global("rec t . A -> B : <Int> ; C -> D : <Bool> ; t");
  GlobalType turned =
      apply_site(loop, RewriteSite{{0}, Family::SwapPrefix, Direction::Forward, 2});
  CHECK(alpha_equal(turned, parse_global("rec t . C -> D : <Bool> ; A -> B : <Int> ; t")));
}

TEST_CASE("site enumeration lists each rewrite exactly once") {
  GlobalType g = testgen::ehealth();
  std::vector<RewriteSite> expect{
      {{}, Family::SwapPrefix, Direction::Forward, 2},
      {{0, 0, 0}, Family::ContrExp, Direction::Forward, 0},
  };
  CHECK(applicable_sites(g) == expect);
  CHECK(applicable_sites(testgen::ehealth_sw()) == expect);

  // one chain of three mutually disjoint exchanges: swaps live at the chain
  // head only, never again at the tail sequence nodes
  GlobalType chain = parse_global("A -> B : <Int> ; C -> D : <Bool> ; E -> F : <Str> ; end");
  std::vector<RewriteSite> swaps{
      {{}, Family::SwapPrefix, Direction::Forward, 2},
      {{}, Family::SwapPrefix, Direction::Forward, 3},
  };
  CHECK(applicable_sites(chain) == swaps);

  // recursion bodies restart a chain
  GlobalType loop = parse_global("rec t . A -> B : <Int> ; C -> D : <Bool> ; t");
  std::vector<RewriteSite> inside{{{0}, Family::SwapPrefix, Direction::Forward, 2}};
  CHECK(applicable_sites(loop) == inside);
}

TEST_CASE("enumerated sites really fire and really invert") {
  auto corpus = testgen::projectable_corpus(120, 90210);
  corpus.push_back(testgen::ehealth());
  corpus.push_back(testgen::ehealth_sw());
  corpus.push_back(testgen::ehealth_sw_br());
  for (const auto& g : corpus) {
    for (const auto& site : applicable_sites(g)) {
      GlobalType h = apply_site(g, site);
      CHECK_FALSE(alpha_equal(h, g));             // guard success means change
      CHECK(alpha_equal(apply_site(h, inverted(site)), g));
    }
  }
}

TEST_CASE("rewrites preserve the trace sets") {
  std::vector<GlobalType> sample{testgen::ehealth(), testgen::ehealth_sw(),
                                 testgen::ehealth_sw_br()};
  for (const auto& g : testgen::projectable_corpus(40, 4242)) sample.push_back(g);
  for (const auto& g : sample) {
    TraceSet before = traces(g, {2});
    for (const auto& site : applicable_sites(g)) {
      CHECK(traces(apply_site(g, site), {2}) == before);
    }
  }
}
