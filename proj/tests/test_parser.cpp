#include <catch2/catch_amalgamated.hpp>

#include <mpst/mpst.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "support/generators.hpp"

using namespace mpst;

namespace {

std::string read_file(const std::string& name) {
  std::ifstream in(std::string(MPST_PROTO_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ParseError capture(const std::string& text) {
  try {
    parse_global(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("parses the basic forms") {
  CHECK(parse_global("end").kind() == GlobalType::Kind::End);
  GlobalType g = parse_global("A -> B : <Int> ; end");
  REQUIRE(g.kind() == GlobalType::Kind::Seq);
  CHECK(g.head().sender().name() == "A");
  CHECK(payload_name(g.head().payload()) == "Int");

  GlobalType b = parse_global("A -> B : { go: end, stop: A -> C : <Int> ; end }");
  REQUIRE(b.kind() == GlobalType::Kind::Branch);
  CHECK(b.arms().size() == 2);
  CHECK(b.arms()[0].label.name() == "go");

  GlobalType r = parse_global("rec t . A -> B : <Int> ; t");
  REQUIRE(r.kind() == GlobalType::Kind::Rec);
  CHECK(r.rec_var().name() == "t");
  CHECK(is_closed(r));
}

TEST_CASE("composite payload sorts keep their comma structure") {
  GlobalType g = parse_global("P -> I : <PId, DId> ; end");
  CHECK(payload_name(g.head().payload()) == "PId,DId");
  CHECK(print_global(g) == "P -> I : <PId,DId> ; end");
}

TEST_CASE("comments and whitespace are ignored") {
  GlobalType g = parse_global("// leading comment\nA -> B : <Int> ; // trailing\n  end\n");
  CHECK(g.kind() == GlobalType::Kind::Seq);
}

TEST_CASE("parsed file equals the programmatic fixture") {
  GlobalType parsed = parse_global(read_file("ehealth.mpst"));
  CHECK(alpha_equal(parsed, testgen::ehealth()));
}

TEST_CASE("printer round-trips") {
  for (const char* name : {"ehealth.mpst", "ehealth_sw.mpst", "ehealth_sw_br.mpst",
                           "recursive.mpst", "two_disjoint.mpst", "end_only.mpst"}) {
    GlobalType g = parse_global(read_file(name));
    CHECK(alpha_equal(parse_global(print_global(g)), g));
  }
  auto corpus = testgen::projectable_corpus(100, 777);
  for (const auto& g : corpus) CHECK(alpha_equal(parse_global(print_global(g)), g));
  // print_global on a printed parse is a fixed point
  for (const auto& g : corpus) CHECK(print_global(parse_global(print_global(g))) == print_global(g));
}

TEST_CASE("print_local notation") {
  Participant d("D");
  LocalType t = LocalType::rec(
      RecVar("t"), LocalType::send(d, ValueSort("Int"), LocalType::var(RecVar("t"))));
  CHECK(print_local(t) == "rec t . D!<Int>; t");
  CHECK(print_local(LocalType::select(d, {{Label("x"), LocalType::end()}})) ==
        "D ⊕ {x: end}");
  CHECK(print_local(LocalType::offer(d, {{Label("x"), LocalType::end()},
                                         {Label("y"), LocalType::end()}})) ==
        "D & {x: end, y: end}");
}

TEST_CASE("syntax errors carry spans and expectations") {
  ParseError e = capture("A -> -> B : <Int> ; end");
  CHECK(e.code() == ParseErrorCode::Syntax);
  CHECK(e.span().start_line == 1);
  CHECK(e.span().start_col == 6);
  CHECK_FALSE(e.expected().empty());

  ParseError e2 = capture("A -> B :\n  <Int> ;");
  CHECK(e2.code() == ParseErrorCode::Syntax);
  CHECK(e2.span().start_line == 2);

  ParseError e3 = capture("A -> B : <Int> ; end end");
  CHECK(e3.code() == ParseErrorCode::Syntax);
}

TEST_CASE("duplicate labels are reported at the second occurrence") {
  ParseError e = capture("A -> B : { go: end, go: end }");
  CHECK(e.code() == ParseErrorCode::DuplicateLabel);
  CHECK(e.span().start_line == 1);
  CHECK(e.span().start_col == 21);
}

TEST_CASE("self communication is reported at the receiver") {
  ParseError e = capture("A -> A : <Int> ; end");
  CHECK(e.code() == ParseErrorCode::SelfCommunication);
  CHECK(e.span().start_col == 6);
}

TEST_CASE("unbound recursion variables") {
  ParseError e = capture("A -> B : <Int> ; t");
  CHECK(e.code() == ParseErrorCode::UnboundRecVar);
  CHECK(e.span().start_col == 18);
  // binding in one arm does not leak into a sibling
  ParseError e2 = capture("A -> B : { x: rec t . A -> B : <Int> ; t, y: t }");
  CHECK(e2.code() == ParseErrorCode::UnboundRecVar);
}

TEST_CASE("unguarded recursion is a structured error") {
  ParseError e = capture("rec t . t");
  CHECK(e.code() == ParseErrorCode::UnguardedRecursion);
  CHECK(e.span().start_col == 5);
  ParseError e2 = capture("rec t . rec s . t");
  CHECK(e2.code() == ParseErrorCode::UnguardedRecursion);
  // guarded through a branch is fine
  CHECK(parse_global("rec t . A -> B : { go: t, stop: end }").kind() == GlobalType::Kind::Rec);
}

TEST_CASE("error fixtures parse as their expected error class") {
  CHECK(capture(read_file("syntax_error.mpst")).code() == ParseErrorCode::Syntax);
  CHECK(capture(read_file("dup_label.mpst")).code() == ParseErrorCode::DuplicateLabel);
  CHECK(capture(read_file("self_comm.mpst")).code() == ParseErrorCode::SelfCommunication);
  CHECK(capture(read_file("unbound_var.mpst")).code() == ParseErrorCode::UnboundRecVar);
  CHECK(capture(read_file("unguarded.mpst")).code() == ParseErrorCode::UnguardedRecursion);
}
