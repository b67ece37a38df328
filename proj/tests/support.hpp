// Builders shared by the unit tests and the acceptance binary.
#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "mtsuite/analysis.hpp"
#include "mtsuite/suite.hpp"
#include "mtsuite/taxonomy.hpp"

namespace mtsuite::testing {

inline std::vector<Pattern> patterns(std::initializer_list<const char*> exprs, bool ci = false) {
  std::vector<Pattern> out;
  for (const char* e : exprs) out.push_back(Pattern{e, ci, "fixture", ""});
  return out;
}

inline TestItem make_item(std::string id, std::string phenomenon, std::initializer_list<const char*> positive,
                          std::initializer_list<const char*> negative = {},
                          std::vector<std::string> exact = {}) {
  TestItem item;
  item.id = std::move(id);
  item.source = "Quelle " + item.id;
  item.phenomenon = std::move(phenomenon);
  item.rules.positive = patterns(positive);
  item.rules.negative = patterns(negative);
  item.rules.exact_valid = std::move(exact);
  return item;
}

// Negation and False friends have no bundled phenomena; suites declare one.
inline Phenomenon negation_phenomenon() { return Phenomenon{"negation", "negation", "negation", {}, {}}; }
inline Phenomenon false_friend_phenomenon() {
  return Phenomenon{"false-friend", "false friend", "false-friends", {}, {}};
}

// The three worked examples with the translations quoted for them.
struct WorkedExample {
  Suite suite;
  std::vector<SystemOutput> outputs;
  std::vector<std::pair<SystemOutput, Verdict>> expected;
};

inline WorkedExample worked_examples() {
  WorkedExample w;
  w.suite.phenomena.push_back(negation_phenomenon());

  TestItem punct = make_item("punct-direct-speech", "quotation-marks", {R"(, ["“])"}, {R"(: ["“])"});
  punct.source = "Er rief: „Ich gewinne!“";
  TestItem neg = make_item("neg-nie", "negation", {R"(\bnever\b)"}, {R"(^(?!.*\bnever\b))"});
  neg.source = "Tim wäscht seine Kleidung nie selber.";
  TestItem mwe = make_item("mwe-holzweg", "idiom", {R"(\bwrong (track|path|way)\b)"}, {R"(wood(en)? (track|path|way))"});
  mwe.source = "Du bist auf dem Holzweg.";
  w.suite.items = {punct, neg, mwe};

  const auto add = [&](const char* sys, const char* item, const char* text, Verdict v) {
    SystemOutput o{sys, item, text};
    w.outputs.push_back(o);
    w.expected.emplace_back(o, v);
  };
  add("NTT", "punct-direct-speech", "He shouted, “I win!\"", Verdict::pass);
  add("Online-F", "punct-direct-speech", "He called: “I win!\"", Verdict::fail);
  add("Ubiqus", "punct-direct-speech", "He cried: “I win!\"", Verdict::fail);
  add("Online-B", "neg-nie", "Tim never washes his clothes himself.", Verdict::pass);
  add("Online-G", "neg-nie", "Tim is washing his clothes myself.", Verdict::fail);
  add("MLLP", "mwe-holzweg", "You're on the wood track.", Verdict::fail);
  add("RWTH", "mwe-holzweg", "You're on the wrong track.", Verdict::pass);
  add("UCAM", "mwe-holzweg", "You're on the wooden path.", Verdict::fail);
  return w;
}

// Two systems, two items, both negation outputs left as warnings.
inline WorkedExample triage_fixture() {
  WorkedExample w;
  w.suite.phenomena.push_back(negation_phenomenon());
  TestItem punct = make_item("punct-direct-speech", "quotation-marks", {R"(, ["“])"}, {R"(: ["“])"});
  punct.source = "Er rief: „Ich gewinne!“";
  TestItem neg = make_item("neg-nie", "negation", {"nie"});
  neg.source = "Tim wäscht seine Kleidung nie selber.";
  w.suite.items = {punct, neg};
  w.outputs = {{"Online-B", "punct-direct-speech", "He shouted, “I win!\""},
               {"Online-B", "neg-nie", "Tim never washes his clothes himself."},
               {"Online-G", "punct-direct-speech", "He called: “I win!\""},
               {"Online-G", "neg-nie", "Tim is washing his clothes myself."}};
  return w;
}

// Negation row of the category table: correct counts out of 20 per system.
struct RowSystem {
  const char* system;
  std::size_t correct;
};
inline const std::vector<RowSystem>& negation_row() {
  static const std::vector<RowSystem> row = {
      {"JHU", 20},  {"LMU", 18},  {"MLLP", 20}, {"NJUNMT", 19}, {"NTT", 20},    {"onl-A", 20}, {"onl-B", 19},
      {"onl-F", 13}, {"onl-G", 12}, {"onl-Y", 20}, {"RWTH", 20},  {"Ubiqus", 19}, {"UCAM", 20},  {"uedin", 20},
  };
  return row;
}

inline std::vector<AccuracyCell> row_cells(const std::vector<RowSystem>& row, std::size_t n, const std::string& key) {
  std::vector<AccuracyCell> cells;
  for (const auto& r : row) cells.push_back(AccuracyCell{r.system, key, r.correct, n, false});
  return cells;
}

// Per-category (correct, evaluated) counts consistent with every printed
// cell of two columns of the category table, in bundled category order.
struct CategoryCount {
  const char* category;
  std::size_t correct;
  std::size_t evaluated;
};

inline std::vector<CategoryCount> ucam_column() {
  return {{"ambiguity", 58, 76},        {"composition", 40, 43},        {"coordination-ellipsis", 21, 24},
          {"false-friends", 23, 34},    {"function-word", 40, 50},      {"ldd-interrogative", 35, 40},
          {"mwe", 36, 54},              {"ne-terminology", 28, 35},     {"negation", 20, 20},
          {"non-verbal-agreement", 39, 48}, {"punctuation", 27, 51},    {"subordination", 32, 35},
          {"verb-tense-aspect-mood", 3572, 4110}, {"verb-valency", 26, 30}};
}

inline std::vector<CategoryCount> online_f_column() {
  return {{"ambiguity", 32, 76},        {"composition", 33, 43},        {"coordination-ellipsis", 6, 24},
          {"false-friends", 24, 34},    {"function-word", 19, 50},      {"ldd-interrogative", 24, 40},
          {"mwe", 23, 54},              {"ne-terminology", 27, 35},     {"negation", 13, 20},
          {"non-verbal-agreement", 24, 48}, {"punctuation", 2, 51},     {"subordination", 16, 35},
          {"verb-tense-aspect-mood", 3091, 4110}, {"verb-valency", 21, 30}};
}

inline std::vector<AccuracyCell> column_cells(const std::string& system, const std::vector<CategoryCount>& column) {
  std::vector<AccuracyCell> cells;
  for (const auto& c : column) cells.push_back(AccuracyCell{system, c.category, c.correct, c.evaluated, false});
  return cells;
}

}  // namespace mtsuite::testing
