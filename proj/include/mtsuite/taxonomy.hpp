#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mtsuite {

inline constexpr std::size_t kCategoryCount = 14;

struct Category {
  std::string id;
  std::string name;

  bool operator==(const Category&) const = default;
};

struct Phenomenon {
  std::string id;
  std::string name;
  std::string category;
  // Only meaningful inside the verb tense/aspect/mood category.
  std::optional<std::string> tense_group;
  std::optional<std::string> verb_type_group;

  bool operator==(const Phenomenon&) const = default;
};

// Fixed category list plus an extensible phenomenon registry.
//
// The text form is line-oriented and tab-separated:
//
//   version          <n>
//   category         <id> <name>
//   tense-group      <label>
//   verb-type-group  <label>
//   phenomenon       <id> <name> <category-id> [tense=<label>;verb-type=<label>]
//
// Blank lines and lines starting with '#' are ignored. Record order is
// preserved and defines report row order.
class Taxonomy {
 public:
  static constexpr std::string_view kVerbCategory = "verb-tense-aspect-mood";

  static Taxonomy parse(std::string_view text, std::string_view origin = "<taxonomy>");
  std::string serialize() const;

  const std::vector<Category>& categories() const { return categories_; }
  const std::vector<Phenomenon>& phenomena() const { return phenomena_; }
  const std::vector<std::string>& tense_groups() const { return tense_groups_; }
  const std::vector<std::string>& verb_type_groups() const { return verb_type_groups_; }

  const Category* find_category(std::string_view id) const;
  const Phenomenon* find_phenomenon(std::string_view id) const;
  std::vector<const Phenomenon*> phenomena_in(std::string_view category_id) const;

  // Registers a suite-declared phenomenon. Throws std::invalid_argument when
  // the id is taken, the category is unknown, or a grouping tag is invalid.
  // Re-declaring an identical phenomenon is a no-op.
  void add_phenomenon(Phenomenon p);

  bool operator==(const Taxonomy& other) const {
    return version_ == other.version_ && categories_ == other.categories_ &&
           phenomena_ == other.phenomena_ && tense_groups_ == other.tense_groups_ &&
           verb_type_groups_ == other.verb_type_groups_;
  }

 private:
  int version_ = 1;
  std::vector<Category> categories_;
  std::vector<Phenomenon> phenomena_;
  std::vector<std::string> tense_groups_;
  std::vector<std::string> verb_type_groups_;
  std::map<std::string, std::size_t, std::less<>> category_index_;
  std::map<std::string, std::size_t, std::less<>> phenomenon_index_;
};

// The taxonomy bundled with the library (data/taxonomy.tsv).
Taxonomy load_taxonomy();

}  // namespace mtsuite
