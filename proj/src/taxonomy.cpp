#include "mtsuite/taxonomy.hpp"

#include <algorithm>
#include <stdexcept>

#include "mtsuite/errors.hpp"

namespace mtsuite {
namespace detail {
extern const std::string_view kBundledTaxonomy;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

bool contains(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

Taxonomy Taxonomy::parse(std::string_view text, std::string_view origin) {
  Taxonomy tax;
  const std::string where(origin);
  bool saw_version = false;
  std::size_t line_no = 0;
  std::size_t last_line = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') {
      if (eol == text.size()) break;
      continue;
    }
    last_line = line_no;

    const auto f = split_tabs(line);
    const auto fail = [&](const std::string& msg) { throw ParseError(where, line_no, msg); };
    const auto expect_fields = [&](std::size_t lo, std::size_t hi) {
      if (f.size() < lo || f.size() > hi) {
        fail("'" + std::string(f[0]) + "' record expects " + std::to_string(lo - 1) +
             (lo == hi ? "" : "-" + std::to_string(hi - 1)) + " fields, got " +
             std::to_string(f.size() - 1));
      }
      for (std::size_t i = 1; i < f.size(); ++i) {
        if (f[i].empty()) fail("empty field " + std::to_string(i));
      }
    };

    if (f[0] == "version") {
      expect_fields(2, 2);
      if (f[1] != "1") fail("unsupported taxonomy version '" + std::string(f[1]) + "'");
      saw_version = true;
    } else if (f[0] == "category") {
      expect_fields(3, 3);
      if (tax.find_category(f[1])) fail("duplicate category id '" + std::string(f[1]) + "'");
      tax.category_index_.emplace(std::string(f[1]), tax.categories_.size());
      tax.categories_.push_back({std::string(f[1]), std::string(f[2])});
    } else if (f[0] == "tense-group") {
      expect_fields(2, 2);
      if (contains(tax.tense_groups_, f[1])) fail("duplicate tense group");
      tax.tense_groups_.emplace_back(f[1]);
    } else if (f[0] == "verb-type-group") {
      expect_fields(2, 2);
      if (contains(tax.verb_type_groups_, f[1])) fail("duplicate verb-type group");
      tax.verb_type_groups_.emplace_back(f[1]);
    } else if (f[0] == "phenomenon") {
      expect_fields(4, 5);
      Phenomenon p{std::string(f[1]), std::string(f[2]), std::string(f[3]), {}, {}};
      if (f.size() == 5) {
        std::string_view tags = f[4];
        while (!tags.empty()) {
          const auto semi = tags.find(';');
          const auto tag = tags.substr(0, semi);
          tags = semi == std::string_view::npos ? std::string_view{} : tags.substr(semi + 1);
          const auto eq = tag.find('=');
          if (eq == std::string_view::npos) fail("malformed tag '" + std::string(tag) + "'");
          const auto key = tag.substr(0, eq);
          const auto value = std::string(tag.substr(eq + 1));
          if (key == "tense") {
            p.tense_group = value;
          } else if (key == "verb-type") {
            p.verb_type_group = value;
          } else {
            fail("unknown tag '" + std::string(key) + "'");
          }
        }
      }
      try {
        tax.add_phenomenon(std::move(p));
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    } else {
      fail("unknown record type '" + std::string(f[0]) + "'");
    }
    if (eol == text.size()) break;
  }

  if (!saw_version) throw ParseError(where, 0, "missing version record");
  if (tax.categories_.size() != kCategoryCount) {
    throw ParseError(where, last_line,
                     "expected " + std::to_string(kCategoryCount) + " categories, found " +
                         std::to_string(tax.categories_.size()));
  }
  return tax;
}

std::string Taxonomy::serialize() const {
  std::string out = "version\t" + std::to_string(version_) + "\n";
  for (const auto& c : categories_) out += "category\t" + c.id + "\t" + c.name + "\n";
  for (const auto& g : tense_groups_) out += "tense-group\t" + g + "\n";
  for (const auto& g : verb_type_groups_) out += "verb-type-group\t" + g + "\n";
  for (const auto& p : phenomena_) {
    out += "phenomenon\t" + p.id + "\t" + p.name + "\t" + p.category;
    std::string tags;
    if (p.tense_group) tags += "tense=" + *p.tense_group;
    if (p.verb_type_group) tags += (tags.empty() ? "" : ";") + std::string("verb-type=") + *p.verb_type_group;
    if (!tags.empty()) out += "\t" + tags;
    out += "\n";
  }
  return out;
}

const Category* Taxonomy::find_category(std::string_view id) const {
  const auto it = category_index_.find(id);
  return it == category_index_.end() ? nullptr : &categories_[it->second];
}

const Phenomenon* Taxonomy::find_phenomenon(std::string_view id) const {
  const auto it = phenomenon_index_.find(id);
  return it == phenomenon_index_.end() ? nullptr : &phenomena_[it->second];
}

std::vector<const Phenomenon*> Taxonomy::phenomena_in(std::string_view category_id) const {
  std::vector<const Phenomenon*> out;
  for (const auto& p : phenomena_) {
    if (p.category == category_id) out.push_back(&p);
  }
  return out;
}

void Taxonomy::add_phenomenon(Phenomenon p) {
  if (p.id.empty()) throw std::invalid_argument("phenomenon id must not be empty");
  if (const auto* existing = find_phenomenon(p.id)) {
    if (*existing == p) return;
    throw std::invalid_argument("phenomenon '" + p.id + "' already declared differently");
  }
  if (!find_category(p.category)) {
    throw std::invalid_argument("phenomenon '" + p.id + "' references unknown category '" + p.category + "'");
  }
  if ((p.tense_group || p.verb_type_group) && p.category != kVerbCategory) {
    throw std::invalid_argument("grouping tags on '" + p.id + "' are only valid in category '" +
                                std::string(kVerbCategory) + "'");
  }
  if (p.tense_group && !contains(tense_groups_, *p.tense_group)) {
    throw std::invalid_argument("unknown tense group '" + *p.tense_group + "'");
  }
  if (p.verb_type_group && !contains(verb_type_groups_, *p.verb_type_group)) {
    throw std::invalid_argument("unknown verb-type group '" + *p.verb_type_group + "'");
  }
  phenomenon_index_.emplace(p.id, phenomena_.size());
  phenomena_.push_back(std::move(p));
}

Taxonomy load_taxonomy() { return Taxonomy::parse(detail::kBundledTaxonomy, "taxonomy.tsv"); }

}  // namespace mtsuite
