#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mtsuite {

enum class EventKind { decide_pass, decide_fail, add_positive_pattern, add_negative_pattern, add_exact_translation };

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view s);

inline bool is_decision(EventKind k) { return k == EventKind::decide_pass || k == EventKind::decide_fail; }

// One line of the append-only annotation log.
struct AnnotationEvent {
  std::uint64_t seq = 0;    // strictly increasing; defines replay order
  std::string timestamp;    // UTC, informational only
  std::string annotator;
  EventKind kind = EventKind::decide_pass;
  std::string item;
  std::optional<std::string> system;  // decisions only
  std::string payload;                // pattern text, sentence, or note
  bool case_insensitive = false;      // pattern additions
  bool override_verdict = false;      // decision on a non-warning judgment

  bool operator==(const AnnotationEvent&) const = default;
};

}  // namespace mtsuite
