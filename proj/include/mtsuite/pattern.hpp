#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace mtsuite {

namespace detail {
struct Program;
}

// Regular expressions in the suite's portable dialect.
//
// Supported: literals, '.', character classes with ranges and \d \w \s
// (and their negations), alternation, capturing and (?:...) groups, the
// quantifiers * + ? {n} {n,} {n,m} (optionally lazy), anchors ^ $, word
// boundaries \b \B, and negative lookahead (?!...). Backreferences,
// lookbehind, positive lookahead, named groups and inline flags are
// rejected at compile time.
//
// Matching works on Unicode code points. Word characters are letters,
// digits and '_' in the Unicode sense, so \b behaves on "Kleidung für".
class Regex {
 public:
  // Throws PatternError.
  static Regex compile(std::string_view expression, bool case_insensitive = false);

  bool search(std::u32string_view text) const;
  bool search(std::string_view utf8) const;
  // Leftmost match as [begin, end) code point offsets.
  std::optional<std::pair<std::size_t, std::size_t>> find(std::u32string_view text) const;

  const std::string& expression() const { return expression_; }
  bool case_insensitive() const { return case_insensitive_; }

  // Backtracking work is capped per search; exceeding it throws
  // MatchBudgetExceeded rather than hanging on pathological patterns.
  static constexpr std::size_t kStepBudget = 2'000'000;

 private:
  Regex() = default;
  std::string expression_;
  bool case_insensitive_ = false;
  std::shared_ptr<const detail::Program> program_;
};

class MatchBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Compile error message, or nullopt when the expression is valid.
std::optional<std::string> check_pattern(std::string_view expression);

}  // namespace mtsuite
