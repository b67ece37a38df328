#include "mtsuite/pattern.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <type_traits>
#include <vector>

#include "mtsuite/errors.hpp"
#include "mtsuite/unicode.hpp"

namespace mtsuite {
namespace detail {

struct CharClass {
  std::vector<std::pair<char32_t, char32_t>> ranges;
  bool digit = false, not_digit = false;
  bool word = false, not_word = false;
  bool space = false, not_space = false;
  bool negated = false;

  bool contains_raw(char32_t c) const {
    for (const auto& [lo, hi] : ranges) {
      if (c >= lo && c <= hi) return true;
    }
    return (digit && text::is_digit(c)) || (not_digit && !text::is_digit(c)) ||
           (word && text::is_word_char(c)) || (not_word && !text::is_word_char(c)) ||
           (space && text::is_space(c)) || (not_space && !text::is_space(c));
  }

  bool matches(char32_t c, bool case_insensitive) const {
    bool hit = contains_raw(c);
    if (!hit && case_insensitive) {
      hit = contains_raw(text::fold_case(c)) || contains_raw(text::to_lower(c)) || contains_raw(text::to_upper(c));
    }
    return hit != negated;
  }
};

struct Node {
  enum class Kind { literal, any, char_class, group, repeat, line_start, line_end, word_boundary, not_word_boundary, negative_lookahead };
  Kind kind = Kind::literal;
  char32_t ch = 0;
  int cls = -1;  // index into Program::classes
  int alt = -1;  // index into Program::alts (group, repeat body, lookahead)
  int min = 0;
  int max = 0;  // -1 = unbounded
  bool lazy = false;
};

using Sequence = std::vector<Node>;

struct Alternation {
  std::vector<Sequence> branches;
};

struct Program {
  std::vector<Alternation> alts;
  std::vector<CharClass> classes;
  int root = -1;
  bool case_insensitive = false;
};

namespace {

constexpr int kMaxRepeat = 1000;
constexpr int kMaxNesting = 200;

class Parser {
 public:
  Parser(std::u32string_view src, bool ci) : src_(src) { prog_.case_insensitive = ci; }

  Program run() {
    prog_.root = parse_alternation(0);
    if (pos_ < src_.size()) {
      // Only an unmatched ')' can stop the top-level alternation early.
      fail("unmatched ')'");
    }
    return std::move(prog_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw PatternError(pos_, msg); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const { throw PatternError(at, msg); }

  bool at_end() const { return pos_ >= src_.size(); }
  char32_t peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : 0; }

  int parse_alternation(int depth) {
    if (depth > kMaxNesting) fail("groups nested too deeply");
    Alternation alt;
    alt.branches.push_back(parse_sequence(depth));
    while (!at_end() && peek() == U'|') {
      ++pos_;
      alt.branches.push_back(parse_sequence(depth));
    }
    prog_.alts.push_back(std::move(alt));
    return static_cast<int>(prog_.alts.size() - 1);
  }

  Sequence parse_sequence(int depth) {
    Sequence seq;
    while (!at_end() && peek() != U'|' && peek() != U')') {
      const std::size_t atom_start = pos_;
      Node atom = parse_atom(depth);
      if (!at_end() && is_quantifier_start()) {
        if (!quantifiable(atom)) fail("nothing to repeat");
        atom = parse_quantifier(std::move(atom));
        if (!at_end() && is_quantifier_start()) fail("nested quantifier");
      }
      (void)atom_start;
      seq.push_back(std::move(atom));
    }
    return seq;
  }

  static bool quantifiable(const Node& n) {
    switch (n.kind) {
      case Node::Kind::line_start:
      case Node::Kind::line_end:
      case Node::Kind::word_boundary:
      case Node::Kind::not_word_boundary:
      case Node::Kind::negative_lookahead:
        return false;
      default:
        return true;
    }
  }

  bool is_quantifier_start() const {
    const char32_t c = peek();
    return c == U'*' || c == U'+' || c == U'?' || c == U'{';
  }

  int read_int() {
    const std::size_t start = pos_;
    long value = 0;
    while (!at_end() && peek() >= U'0' && peek() <= U'9') {
      value = value * 10 + static_cast<long>(peek() - U'0');
      if (value > kMaxRepeat) fail_at(start, "repetition bound exceeds " + std::to_string(kMaxRepeat));
      ++pos_;
    }
    if (pos_ == start) return -1;
    return static_cast<int>(value);
  }

  Node parse_quantifier(Node atom) {
    const std::size_t start = pos_;
    int min = 0, max = 0;
    switch (peek()) {
      case U'*': min = 0; max = -1; ++pos_; break;
      case U'+': min = 1; max = -1; ++pos_; break;
      case U'?': min = 0; max = 1; ++pos_; break;
      default: {  // '{'
        ++pos_;
        min = read_int();
        if (min < 0) fail_at(start, "malformed repetition (escape a literal '{')");
        if (peek() == U',') {
          ++pos_;
          if (peek() == U'}') {
            max = -1;
          } else {
            max = read_int();
            if (max < 0) fail_at(start, "malformed repetition");
          }
        } else {
          max = min;
        }
        if (peek() != U'}') fail_at(start, "malformed repetition");
        ++pos_;
        if (max >= 0 && max < min) fail_at(start, "repetition bounds out of order");
      }
    }
    bool lazy = false;
    if (peek() == U'?') {
      lazy = true;
      ++pos_;
    }
    // Wrap the atom so the repeat node owns a single-branch alternation.
    int body = atom.alt;
    if (atom.kind != Node::Kind::group) {
      Alternation a;
      a.branches.push_back(Sequence{std::move(atom)});
      prog_.alts.push_back(std::move(a));
      body = static_cast<int>(prog_.alts.size() - 1);
    }
    Node rep;
    rep.kind = Node::Kind::repeat;
    rep.alt = body;
    rep.min = min;
    rep.max = max;
    rep.lazy = lazy;
    return rep;
  }

  Node literal(char32_t c) const {
    Node n;
    n.kind = Node::Kind::literal;
    n.ch = prog_.case_insensitive ? text::fold_case(c) : c;
    return n;
  }

  Node parse_atom(int depth) {
    const std::size_t start = pos_;
    const char32_t c = src_[pos_++];
    Node n;
    switch (c) {
      case U'.':
        n.kind = Node::Kind::any;
        return n;
      case U'^':
        n.kind = Node::Kind::line_start;
        return n;
      case U'$':
        n.kind = Node::Kind::line_end;
        return n;
      case U'[':
        return parse_class(start);
      case U'(':
        return parse_group(start, depth);
      case U')':
        fail_at(start, "unmatched ')'");
      case U'*':
      case U'+':
      case U'?':
        fail_at(start, "nothing to repeat");
      case U'{':
        fail_at(start, "literal '{' must be escaped");
      case U'}':
        fail_at(start, "literal '}' must be escaped");
      case U']':
        fail_at(start, "literal ']' must be escaped");
      case U'\\':
        return parse_escape(start);
      default:
        return literal(c);
    }
  }

  Node parse_group(std::size_t start, int depth) {
    Node n;
    n.kind = Node::Kind::group;
    if (peek() == U'?') {
      const char32_t kind = peek(1);
      if (kind == U':') {
        pos_ += 2;
      } else if (kind == U'!') {
        pos_ += 2;
        n.kind = Node::Kind::negative_lookahead;
      } else if (kind == U'=') {
        fail_at(start, "positive lookahead is not supported");
      } else if (kind == U'<') {
        fail_at(start, "lookbehind and named groups are not supported");
      } else {
        fail_at(start, "unsupported group construct");
      }
    }
    n.alt = parse_alternation(depth + 1);
    if (at_end() || peek() != U')') fail_at(start, "unterminated group");
    ++pos_;
    return n;
  }

  uint32_t parse_hex(std::size_t digits, std::size_t start) {
    uint32_t v = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      const char32_t h = peek();
      uint32_t d;
      if (h >= U'0' && h <= U'9') d = h - U'0';
      else if (h >= U'a' && h <= U'f') d = h - U'a' + 10;
      else if (h >= U'A' && h <= U'F') d = h - U'A' + 10;
      else fail_at(start, "malformed hex escape");
      v = v * 16 + d;
      ++pos_;
    }
    return v;
  }

  // Escapes that denote one code point; shared by atoms and classes.
  std::optional<char32_t> simple_escape(char32_t e, std::size_t start) {
    switch (e) {
      case U'n': return U'\n';
      case U't': return U'\t';
      case U'r': return U'\r';
      case U'f': return U'\f';
      case U'v': return U'\v';
      case U'x': return static_cast<char32_t>(parse_hex(2, start));
      case U'u': return static_cast<char32_t>(parse_hex(4, start));
      default: break;
    }
    if (e < 0x80 && !((e >= U'a' && e <= U'z') || (e >= U'A' && e <= U'Z') || (e >= U'0' && e <= U'9'))) {
      return e;  // escaped punctuation or space
    }
    if (e >= 0x80) return e;
    return std::nullopt;
  }

  Node parse_escape(std::size_t start) {
    if (at_end()) fail_at(start, "trailing backslash");
    const char32_t e = src_[pos_++];
    Node n;
    switch (e) {
      case U'b': n.kind = Node::Kind::word_boundary; return n;
      case U'B': n.kind = Node::Kind::not_word_boundary; return n;
      case U'd': case U'D': case U'w': case U'W': case U's': case U'S': {
        CharClass cls;
        set_class_escape(cls, e);
        n.kind = Node::Kind::char_class;
        n.cls = add_class(std::move(cls));
        return n;
      }
      default: break;
    }
    if (e >= U'1' && e <= U'9') fail_at(start, "backreferences are not supported");
    if (e == U'k') fail_at(start, "named backreferences are not supported");
    if (e == U'0') fail_at(start, "null escape is not supported");
    if (const auto c = simple_escape(e, start)) return literal(*c);
    fail_at(start, std::string("unknown escape '\\") + static_cast<char>(e) + "'");
  }

  static void set_class_escape(CharClass& cls, char32_t e) {
    switch (e) {
      case U'd': cls.digit = true; break;
      case U'D': cls.not_digit = true; break;
      case U'w': cls.word = true; break;
      case U'W': cls.not_word = true; break;
      case U's': cls.space = true; break;
      case U'S': cls.not_space = true; break;
      default: break;
    }
  }

  int add_class(CharClass cls) {
    prog_.classes.push_back(std::move(cls));
    return static_cast<int>(prog_.classes.size() - 1);
  }

  // One class member: either a single code point or a class escape (\d etc).
  struct ClassAtom {
    std::optional<char32_t> ch;
    char32_t class_escape = 0;
  };

  ClassAtom parse_class_atom(std::size_t class_start) {
    if (at_end()) fail_at(class_start, "unterminated character class");
    const std::size_t start = pos_;
    const char32_t c = src_[pos_++];
    if (c != U'\\') {
      if (c == U'[') fail_at(start, "literal '[' inside a class must be escaped");
      return {c, 0};
    }
    if (at_end()) fail_at(class_start, "unterminated character class");
    const char32_t e = src_[pos_++];
    switch (e) {
      case U'd': case U'D': case U'w': case U'W': case U's': case U'S':
        return {std::nullopt, e};
      case U'b':
        fail_at(start, "\\b inside a class is not portable");
      default: break;
    }
    if (e >= U'0' && e <= U'9') fail_at(start, "numeric escape inside a class is not supported");
    if (const auto ch = simple_escape(e, start)) return {*ch, 0};
    fail_at(start, std::string("unknown escape '\\") + static_cast<char>(e) + "' in class");
  }

  Node parse_class(std::size_t start) {
    CharClass cls;
    if (peek() == U'^') {
      cls.negated = true;
      ++pos_;
    }
    if (peek() == U']') fail_at(start, "empty character class");
    while (true) {
      if (at_end()) fail_at(start, "unterminated character class");
      if (peek() == U']') {
        ++pos_;
        break;
      }
      const std::size_t member_start = pos_;
      const ClassAtom first = parse_class_atom(start);
      if (peek() == U'-' && peek(1) != U']' && pos_ + 1 < src_.size()) {
        ++pos_;
        const ClassAtom second = parse_class_atom(start);
        if (!first.ch || !second.ch) fail_at(member_start, "class escape used as range bound");
        if (*second.ch < *first.ch) fail_at(member_start, "character range out of order");
        add_range(cls, *first.ch, *second.ch);
      } else if (first.ch) {
        add_range(cls, *first.ch, *first.ch);
      } else {
        set_class_escape(cls, first.class_escape);
      }
    }
    Node n;
    n.kind = Node::Kind::char_class;
    n.cls = add_class(std::move(cls));
    return n;
  }

  void add_range(CharClass& cls, char32_t lo, char32_t hi) const {
    cls.ranges.emplace_back(lo, hi);
  }

  std::u32string_view src_;
  std::size_t pos_ = 0;
  Program prog_;
};

// Non-owning callable reference; continuations never outlive the call.
template <typename Sig>
class FunctionRef;

template <typename R, typename... Args>
class FunctionRef<R(Args...)> {
 public:
  template <typename F, typename = std::enable_if_t<!std::is_same_v<std::decay_t<F>, FunctionRef>>>
  FunctionRef(F&& f)  // NOLINT(google-explicit-constructor)
      : obj_(const_cast<void*>(static_cast<const void*>(&f))),
        call_([](void* o, Args... a) -> R { return (*static_cast<std::remove_reference_t<F>*>(o))(a...); }) {}

  R operator()(Args... a) const { return call_(obj_, a...); }

 private:
  void* obj_;
  R (*call_)(void*, Args...);
};

using Cont = FunctionRef<bool(std::size_t)>;

class Backtracker {
 public:
  Backtracker(const Program& p, std::u32string_view s) : p_(p), s_(s) {}

  std::optional<std::size_t> match_at(std::size_t start) {
    std::size_t end = 0;
    const bool ok = alt(p_.root, start, [&](std::size_t e) {
      end = e;
      return true;
    });
    if (!ok) return std::nullopt;
    return end;
  }

 private:
  void tick() {
    if (++steps_ > Regex::kStepBudget) throw MatchBudgetExceeded("pattern exceeded backtracking budget");
  }

  bool same(char32_t text_char, char32_t pattern_char) const {
    if (text_char == pattern_char) return true;
    return p_.case_insensitive && text::fold_case(text_char) == pattern_char;
  }

  bool word_at(std::size_t i) const { return i < s_.size() && text::is_word_char(s_[i]); }

  bool alt(int index, std::size_t pos, Cont k) {
    for (const auto& branch : p_.alts[static_cast<std::size_t>(index)].branches) {
      if (seq(branch, 0, pos, k)) return true;
    }
    return false;
  }

  bool seq(const Sequence& nodes, std::size_t i, std::size_t pos, Cont k) {
    tick();
    if (i == nodes.size()) return k(pos);
    const Node& n = nodes[i];
    const auto next = [&](std::size_t p) { return seq(nodes, i + 1, p, k); };
    switch (n.kind) {
      case Node::Kind::literal:
        return pos < s_.size() && same(s_[pos], n.ch) && next(pos + 1);
      case Node::Kind::any:
        return pos < s_.size() && s_[pos] != U'\n' && next(pos + 1);
      case Node::Kind::char_class:
        return pos < s_.size() && p_.classes[static_cast<std::size_t>(n.cls)].matches(s_[pos], p_.case_insensitive) &&
               next(pos + 1);
      case Node::Kind::line_start:
        return pos == 0 && next(pos);
      case Node::Kind::line_end:
        return pos == s_.size() && next(pos);
      case Node::Kind::word_boundary:
        return (pos > 0 && word_at(pos - 1)) != word_at(pos) && next(pos);
      case Node::Kind::not_word_boundary:
        return (pos > 0 && word_at(pos - 1)) == word_at(pos) && next(pos);
      case Node::Kind::group:
        return alt(n.alt, pos, next);
      case Node::Kind::negative_lookahead:
        if (alt(n.alt, pos, [](std::size_t) { return true; })) return false;
        return next(pos);
      case Node::Kind::repeat:
        return repeat(n, 0, pos, next);
    }
    return false;
  }

  bool repeat(const Node& n, int count, std::size_t pos, Cont k) {
    tick();
    if (count < n.min) {
      return alt(n.alt, pos, [&](std::size_t p) { return repeat(n, count + 1, p, k); });
    }
    const bool can_grow = n.max < 0 || count < n.max;
    // Iterations past the minimum must consume input, otherwise (a*)* loops.
    const auto grow = [&]() {
      return can_grow && alt(n.alt, pos, [&](std::size_t p) { return p != pos && repeat(n, count + 1, p, k); });
    };
    if (n.lazy) return k(pos) || grow();
    return grow() || k(pos);
  }

  const Program& p_;
  std::u32string_view s_;
  std::size_t steps_ = 0;
};

}  // namespace
}  // namespace detail

Regex Regex::compile(std::string_view expression, bool case_insensitive) {
  if (expression.empty()) throw PatternError(0, "empty pattern");
  const std::u32string src = text::decode_utf8(expression);
  detail::Parser parser(src, case_insensitive);
  Regex r;
  r.expression_ = std::string(expression);
  r.case_insensitive_ = case_insensitive;
  r.program_ = std::make_shared<const detail::Program>(parser.run());
  return r;
}

std::optional<std::pair<std::size_t, std::size_t>> Regex::find(std::u32string_view text) const {
  detail::Backtracker bt(*program_, text);
  for (std::size_t start = 0; start <= text.size(); ++start) {
    if (const auto end = bt.match_at(start)) return std::make_pair(start, *end);
  }
  return std::nullopt;
}

bool Regex::search(std::u32string_view text) const { return find(text).has_value(); }

bool Regex::search(std::string_view utf8) const { return search(text::decode_utf8(utf8)); }

std::optional<std::string> check_pattern(std::string_view expression) {
  try {
    (void)Regex::compile(expression);
  } catch (const PatternError& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

}  // namespace mtsuite
