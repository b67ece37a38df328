#pragma once

#include <string>
#include <string_view>

namespace mtsuite {

// Text normalization applied to outputs and exact translations before
// matching. Case, quotes and punctuation are never altered unless
// `fold_case` is switched on explicitly.
struct NormalizationPolicy {
  bool compose = true;  // Unicode NFC
  bool trim = true;
  bool collapse_whitespace = true;
  bool fold_case = false;

  bool operator==(const NormalizationPolicy&) const = default;
};

// Idempotent: normalize(normalize(x, p), p) == normalize(x, p).
std::string normalize(std::string_view text, const NormalizationPolicy& policy = {});

}  // namespace mtsuite
