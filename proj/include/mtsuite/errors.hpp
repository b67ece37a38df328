#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mtsuite {

// Malformed input file or resource. `line` is 1-based; 0 means "whole file".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string origin, std::size_t line, const std::string& message)
      : std::runtime_error(origin + ":" + std::to_string(line) + ": " + message),
        origin_(std::move(origin)),
        line_(line) {}

  const std::string& origin() const { return origin_; }
  std::size_t line() const { return line_; }

 private:
  std::string origin_;
  std::size_t line_;
};

// Pattern outside the supported dialect or syntactically broken.
// `offset` counts code points from the start of the expression.
class PatternError : public std::runtime_error {
 public:
  PatternError(std::size_t offset, const std::string& message)
      : std::runtime_error("at offset " + std::to_string(offset) + ": " + message), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class ClassificationError : public std::runtime_error {
 public:
  ClassificationError(std::string item_id, std::string expression, const std::string& message)
      : std::runtime_error("item '" + item_id + "', pattern '" + expression + "': " + message),
        item_id_(std::move(item_id)),
        expression_(std::move(expression)) {}

  const std::string& item_id() const { return item_id_; }
  const std::string& expression() const { return expression_; }

 private:
  std::string item_id_;
  std::string expression_;
};

class OrphanOutputsError : public std::runtime_error {
 public:
  explicit OrphanOutputsError(std::vector<std::string> orphans)
      : std::runtime_error(describe(orphans)), orphans_(std::move(orphans)) {}

  const std::vector<std::string>& orphans() const { return orphans_; }

 private:
  static std::string describe(const std::vector<std::string>& ids) {
    std::string s = "outputs reference unknown item ids:";
    for (const auto& id : ids) s += " " + id;
    return s;
  }
  std::vector<std::string> orphans_;
};

class EmptyAnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Event at `position` (0-based index into the log) could not be applied.
class ReplayError : public std::runtime_error {
 public:
  ReplayError(std::size_t position, const std::string& message)
      : std::runtime_error("replay halted at event #" + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Service-level failures, mapped onto HTTP status codes by the transport.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConflictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidRequestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mtsuite
