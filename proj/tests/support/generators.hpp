#pragma once

// Random projectable global types for the property suites, plus the worked
// protocol built through the factories rather than the parser.
//
// Generation is rejection-sampled: candidates are structurally well formed
// by construction (the factories enforce that), and only candidates that
// project onto every participant are kept. Branch arms are duplicated with
// some bias because fully independent arms rarely merge for outsiders.

#include <mpst/mpst.hpp>

#include <random>
#include <string>
#include <utility>
#include <vector>

namespace testgen {

struct GenConfig {
  int max_depth = 4;
  int max_width = 3;
  int max_participants = 4;
  double identical_arms = 0.5;  // chance a branch reuses one body for every arm
};

inline mpst::Participant pick_participant(std::mt19937& rng, const GenConfig& cfg) {
  static const char* names[] = {"A", "B", "C", "D"};
  std::uniform_int_distribution<int> d(0, cfg.max_participants - 1);
  return mpst::Participant(names[d(rng)]);
}

inline std::pair<mpst::Participant, mpst::Participant> pick_pair(std::mt19937& rng,
                                                                 const GenConfig& cfg) {
  mpst::Participant s = pick_participant(rng, cfg);
  mpst::Participant r = pick_participant(rng, cfg);
  while (r == s) r = pick_participant(rng, cfg);
  return {s, r};
}

inline mpst::ValueSort pick_sort(std::mt19937& rng) {
  static const char* sorts[] = {"Int", "Bool", "Str"};
  std::uniform_int_distribution<int> d(0, 2);
  return mpst::ValueSort(sorts[d(rng)]);
}

inline mpst::GlobalType random_raw(std::mt19937& rng, const GenConfig& cfg, int depth) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (depth >= cfg.max_depth) return mpst::GlobalType::end();
  double roll = coin(rng);
  if (roll < 0.2) return mpst::GlobalType::end();
  if (roll < 0.7) {
    auto [s, r] = pick_pair(rng, cfg);
    return mpst::GlobalType::seq(mpst::Prefix(s, r, pick_sort(rng)),
                                 random_raw(rng, cfg, depth + 1));
  }
  auto [s, r] = pick_pair(rng, cfg);
  std::uniform_int_distribution<int> wd(1, cfg.max_width);
  int width = wd(rng);
  std::vector<mpst::GlobalType::Arm> arms;
  if (coin(rng) < cfg.identical_arms) {
    mpst::GlobalType body = random_raw(rng, cfg, depth + 1);
    for (int i = 0; i < width; ++i)
      arms.push_back({mpst::Label("l" + std::to_string(i + 1)), body});
  } else {
    for (int i = 0; i < width; ++i)
      arms.push_back({mpst::Label("l" + std::to_string(i + 1)), random_raw(rng, cfg, depth + 1)});
  }
  return mpst::GlobalType::branch(s, r, std::move(arms));
}

inline mpst::GlobalType random_projectable(std::mt19937& rng, const GenConfig& cfg = {}) {
  for (;;) {
    mpst::GlobalType g = random_raw(rng, cfg, 0);
    if (mpst::check_projectable(g).empty()) return g;
  }
}

inline std::vector<mpst::GlobalType> projectable_corpus(size_t n, unsigned seed,
                                                        const GenConfig& cfg = {}) {
  std::mt19937 rng(seed);
  std::vector<mpst::GlobalType> out;
  out.reserve(n);
  while (out.size() < n) out.push_back(random_projectable(rng, cfg));
  return out;
}

namespace detail {

inline mpst::GlobalType ehealth_arm(const char* label, const char* payload) {
  using namespace mpst;
  Participant D("D"), R("R");
  return GlobalType::branch(
      D, R, {{Label(label), GlobalType::seq(Prefix(D, R, ValueSort(payload)), GlobalType::end())}});
}

// The consultation outcome: D tells P, R quotes I, then D and R settle the
// record. When hoist_quote is set the quote is pulled out of both arms.
inline mpst::GlobalType ehealth_tail(bool hoist_quote) {
  using namespace mpst;
  Participant P("P"), I("I"), D("D"), R("R");
  Prefix quote(R, I, ValueSort("Quote"));
  GlobalType prescr = ehealth_arm("Prescr", "UpRec");
  GlobalType ref = ehealth_arm("Ref", "Test");
  if (hoist_quote)
    return GlobalType::seq(
        quote, GlobalType::branch(D, P, {{Label("Prescr"), prescr}, {Label("Ref"), ref}}));
  return GlobalType::branch(D, P,
                            {{Label("Prescr"), GlobalType::seq(quote, prescr)},
                             {Label("Ref"), GlobalType::seq(quote, ref)}});
}

inline mpst::GlobalType ehealth_from(bool swapped, bool hoisted) {
  using namespace mpst;
  Participant P("P"), I("I"), D("D"), R("R");
  Prefix intro(P, I, ValueSort("PId,DId"));
  Prefix retrieve(D, R, ValueSort("RetrRec"));
  Prefix symptoms(P, D, ValueSort("IId,Symptoms"));
  GlobalType rest = GlobalType::seq(symptoms, ehealth_tail(hoisted));
  if (swapped) return GlobalType::seq(retrieve, GlobalType::seq(intro, rest));
  return GlobalType::seq(intro, GlobalType::seq(retrieve, rest));
}

}  // namespace detail

// The worked protocol, assembled from factories so parser tests have an
// independent reference term, plus its two rearrangements.
inline mpst::GlobalType ehealth() { return detail::ehealth_from(false, false); }
inline mpst::GlobalType ehealth_sw() { return detail::ehealth_from(true, false); }
inline mpst::GlobalType ehealth_sw_br() { return detail::ehealth_from(true, true); }

}  // namespace testgen
