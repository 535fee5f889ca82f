// Command-line front end. Subcommands: check, project, traces, iso, verify.
//
// Exit codes are a stable contract:
//   0 success / isomorphic
//   1 trace mismatch or failed verification
//   2 I/O or syntax error
//   3 semantic error (ill-formed protocol, unprojectable role)
//   4 inconclusive search
//
// Structured output goes to stdout, diagnostics to stderr. MPST_COLOR=0
// disables ANSI colors; they are only used when stderr is a terminal.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>

#include <mpst/mpst.hpp>
#include <mpst/serialize.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitIo = 2;
constexpr int kExitSemantic = 3;
constexpr int kExitInconclusive = 4;

bool use_color() {
  const char* env = std::getenv("MPST_COLOR");
  if (env && std::string(env) == "0") return false;
  return isatty(fileno(stderr));
}

std::string red(const std::string& s) { return use_color() ? "\x1b[31m" + s + "\x1b[0m" : s; }
std::string green(const std::string& s) { return use_color() ? "\x1b[32m" + s + "\x1b[0m" : s; }

const char* code_name(mpst::ParseErrorCode code) {
  switch (code) {
    case mpst::ParseErrorCode::Syntax:
      return "Syntax";
    case mpst::ParseErrorCode::DuplicateLabel:
      return "DuplicateLabel";
    case mpst::ParseErrorCode::SelfCommunication:
      return "SelfCommunication";
    case mpst::ParseErrorCode::UnboundRecVar:
      return "UnboundRecVar";
    case mpst::ParseErrorCode::UnguardedRecursion:
      return "UnguardedRecursion";
  }
  return "Syntax";
}

std::string path_text(const mpst::NodePath& path) {
  std::string out = "[";
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(path[i]);
  }
  return out + "]";
}

std::string site_text(const mpst::RewriteSite& site) {
  std::string out = mpst::family_name(site.family);
  if (site.family == mpst::Family::SwapPrefix)
    out += " index " + std::to_string(site.index);
  else
    out += " " + mpst::direction_name(site.direction);
  return out + " at " + path_text(site.path);
}

// Reads and parses a protocol file, exiting with the contract code on
// failure: 2 for unreadable files and plain syntax errors, 3 for errors that
// are really semantic (duplicate labels, self communication, unbound or
// unguarded recursion variables).
mpst::GlobalType load(const std::string& file) {
  std::ifstream in(file);
  if (!in) {
    std::cerr << red("error: ") << "cannot read '" << file << "'\n";
    std::exit(kExitIo);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return mpst::parse_global(buf.str());
  } catch (const mpst::ParseError& e) {
    std::cerr << file << ":" << e.span().start_line << ":" << e.span().start_col << ": "
              << red("error: ") << e.message() << " [" << code_name(e.code()) << "]\n";
    std::exit(e.code() == mpst::ParseErrorCode::Syntax ? kExitIo : kExitSemantic);
  }
}

int run_check(const std::string& file, bool json) {
  mpst::GlobalType g = load(file);
  auto violations = mpst::check_formation(g);
  auto failures = violations.empty() ? mpst::check_projectable(g)
                                     : std::vector<std::pair<mpst::Participant,
                                                             mpst::ProjectionFailure>>{};
  if (json) {
    nlohmann::json out;
    out["formation"] = nlohmann::json::array();
    for (const auto& v : violations) out["formation"].push_back(mpst::violation_json(v));
    out["projectability"] = nlohmann::json::array();
    for (const auto& [p, f] : failures)
      out["projectability"].push_back(mpst::projection_failure_json(p, f));
    out["ok"] = violations.empty() && failures.empty();
    std::cout << out.dump(2) << "\n";
  } else {
    if (violations.empty()) {
      std::cout << "formation: " << green("ok") << "\n";
    } else {
      std::cout << "formation: " << red(std::to_string(violations.size()) + " violation(s)")
                << "\n";
      for (const auto& v : violations)
        std::cout << "  " << v.rule << " at " << path_text(v.path) << ": " << v.message << "\n";
    }
    if (violations.empty() && failures.empty()) {
      std::cout << "projectability: " << green("ok") << "\n";
    } else if (!failures.empty()) {
      std::cout << "projectability: " << red(std::to_string(failures.size()) + " failure(s)")
                << "\n";
      for (const auto& [p, f] : failures)
        std::cout << "  " << p.name() << " at " << path_text(f.path) << ": cannot merge ["
                  << mpst::print_local(f.left) << "] with [" << mpst::print_local(f.right)
                  << "]\n";
    }
  }
  return violations.empty() && failures.empty() ? kExitOk : kExitSemantic;
}

int run_project(const std::string& file, const std::string& role, bool json) {
  mpst::GlobalType g = load(file);
  auto violations = mpst::check_formation(g);
  if (!violations.empty()) {
    std::cerr << red("error: ") << "ill-formed protocol: " << violations.front().rule << " at "
              << path_text(violations.front().path) << ": " << violations.front().message << "\n";
    return kExitSemantic;
  }
  try {
    mpst::LocalType t = mpst::project(g, mpst::Participant(role));
    if (json)
      std::cout << mpst::local_type_json(t).dump(2) << "\n";
    else
      std::cout << mpst::print_local(t) << "\n";
    return kExitOk;
  } catch (const mpst::UnmergeableError& e) {
    std::cerr << red("error: ") << "protocol is not projectable onto '" << role
              << "': cannot merge [" << mpst::print_local(e.failure().left) << "] with ["
              << mpst::print_local(e.failure().right) << "] at " << path_text(e.failure().path)
              << "\n";
    return kExitSemantic;
  }
}

int run_traces(const std::string& file, int unroll, const std::string& kind) {
  mpst::GlobalType g = load(file);
  auto violations = mpst::check_formation(g);
  if (!violations.empty()) {
    std::cerr << red("error: ") << "ill-formed protocol: " << violations.front().message << "\n";
    return kExitSemantic;
  }
  mpst::UnrollBudget budget{unroll};
  if (kind == "global") {
    std::cout << mpst::trace_set_json(mpst::traces(g, budget)).dump(2) << "\n";
    return kExitOk;
  }
  auto failures = mpst::check_projectable(g);
  if (!failures.empty()) {
    std::cerr << red("error: ") << "protocol is not projectable onto '"
              << failures.front().first.name() << "'\n";
    return kExitSemantic;
  }
  mpst::ConfigTraceSet cs = mpst::config_traces(mpst::project_all(g), budget);
  if (kind == "config") {
    std::cout << mpst::config_trace_set_json(cs).dump(2) << "\n";
  } else {  // denotation: just the terminated runs
    nlohmann::json out = nlohmann::json::array();
    for (const auto& ct : cs.terminated) out.push_back(mpst::config_trace_json(ct));
    std::cout << out.dump(2) << "\n";
  }
  return kExitOk;
}

int run_iso(const std::string& file1, const std::string& file2, int unroll, int bound) {
  mpst::GlobalType g1 = load(file1);
  mpst::GlobalType g2 = load(file2);
  try {
    mpst::IsoVerdict v = mpst::check_iso(g1, g2, {unroll}, bound);
    std::cout << mpst::verdict_json(v).dump(2) << "\n";
    switch (v.status) {
      case mpst::IsoStatus::Isomorphic:
        return kExitOk;
      case mpst::IsoStatus::Mismatch:
        return kExitMismatch;
      case mpst::IsoStatus::Inconclusive:
        return kExitInconclusive;
    }
    return kExitInconclusive;
  } catch (const mpst::FormationError& e) {
    std::cerr << red("error: ") << e.what() << "\n";
    return kExitSemantic;
  } catch (const mpst::UnmergeableError& e) {
    std::cerr << red("error: ") << "input is not projectable: cannot merge ["
              << mpst::print_local(e.failure().left) << "] with ["
              << mpst::print_local(e.failure().right) << "]\n";
    return kExitSemantic;
  }
}

int run_verify(const std::string& file, int unroll, bool json) {
  mpst::GlobalType g = load(file);
  std::vector<mpst::CheckResult> results;
  auto violations = mpst::check_formation(g);
  results.push_back({"formation", violations.empty(),
                     violations.empty() ? "" : violations.front().message});
  bool projectable = false;
  if (violations.empty()) {
    auto failures = mpst::check_projectable(g);
    projectable = failures.empty();
    results.push_back({"projectability", projectable,
                       projectable ? ""
                                   : "not projectable onto " + failures.front().first.name()});
  }
  if (projectable) {
    mpst::UnrollBudget budget{unroll};
    results.push_back(mpst::check_trace_correspondence(g, budget));
    for (const auto& site : mpst::applicable_sites(g)) {
      auto tp = mpst::check_site_preserves_traces(g, site, budget);
      tp.name += " (" + site_text(site) + ")";
      results.push_back(tp);
      auto dp = mpst::check_site_preserves_denotation(g, site, budget);
      dp.name += " (" + site_text(site) + ")";
      results.push_back(dp);
    }
  }
  bool all_ok = true;
  for (const auto& r : results) all_ok = all_ok && r.ok;
  if (json) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : results) out.push_back(mpst::check_result_json(r));
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& r : results) {
      std::cout << r.name << ": " << (r.ok ? green("ok") : red("FAIL"));
      if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
      std::cout << "\n";
    }
  }
  return all_ok ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiparty protocol toolkit: well-formedness, projection, "
               "traces, and isomorphism checking over global types"};
  app.require_subcommand(1);

  std::string file, file2, role, kind = "global";
  int unroll = 2, bound = 8;
  bool json = false;

  auto* check = app.add_subcommand("check", "Check well-formedness and projectability");
  check->add_option("file", file, "protocol file")->required();
  check->add_flag("--json", json, "emit JSON");

  auto* project = app.add_subcommand("project", "Project onto one participant");
  project->add_option("file", file, "protocol file")->required();
  project->add_option("--role", role, "participant to project onto")->required();
  project->add_flag("--json", json, "emit JSON instead of text");

  auto* traces = app.add_subcommand("traces", "Enumerate bounded trace sets");
  traces->add_option("file", file, "protocol file")->required();
  traces->add_option("--unroll", unroll, "max recursion unfoldings per run")
      ->check(CLI::NonNegativeNumber);
  traces->add_option("--kind", kind, "global, config, or denotation")
      ->check(CLI::IsMember({"global", "config", "denotation"}));

  auto* iso = app.add_subcommand("iso", "Decide isomorphism of two protocols");
  iso->add_option("file1", file, "first protocol file")->required();
  iso->add_option("file2", file2, "second protocol file")->required();
  iso->add_option("--unroll", unroll, "max recursion unfoldings per run")
      ->check(CLI::NonNegativeNumber);
  iso->add_option("--bound", bound, "max rewrite sequence length")
      ->check(CLI::NonNegativeNumber);

  auto* verify = app.add_subcommand("verify", "Run semantic sanity checks on a protocol");
  verify->add_option("file", file, "protocol file")->required();
  verify->add_option("--unroll", unroll, "max recursion unfoldings per run")
      ->check(CLI::NonNegativeNumber);
  verify->add_flag("--json", json, "emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitIo : kExitOk;
  }

  if (check->parsed()) return run_check(file, json);
  if (project->parsed()) return run_project(file, role, json);
  if (traces->parsed()) return run_traces(file, unroll, kind);
  if (iso->parsed()) return run_iso(file, file2, unroll, bound);
  if (verify->parsed()) return run_verify(file, unroll, json);
  return kExitIo;
}
