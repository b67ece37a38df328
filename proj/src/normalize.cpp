#include "mtsuite/normalize.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <stdexcept>

#include "mtsuite/unicode.hpp"

namespace mtsuite {
namespace {

std::string to_nfc(const std::string& s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
  const icu::UnicodeString in = icu::UnicodeString::fromUTF8(s);
  const icu::UnicodeString out = nfc->normalize(in, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");
  std::string result;
  out.toUTF8String(result);
  return result;
}

std::string fold(const std::string& s) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(s);
  u.foldCase(U_FOLD_CASE_DEFAULT);
  std::string result;
  u.toUTF8String(result);
  return result;
}

}  // namespace

std::string normalize(std::string_view text, const NormalizationPolicy& policy) {
  // Decoding replaces ill-formed UTF-8 with U+FFFD up front, so every later
  // stage sees well-formed input.
  const std::u32string decoded = text::decode_utf8(text);
  std::u32string spaced;
  spaced.reserve(decoded.size());
  bool pending_space = false;
  for (const char32_t c : decoded) {
    if (policy.collapse_whitespace && text::is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) {
      if (!(policy.trim && spaced.empty())) spaced.push_back(U' ');
      pending_space = false;
    }
    spaced.push_back(c);
  }
  if (pending_space && !policy.trim) spaced.push_back(U' ');

  std::string out = text::encode_utf8(spaced);
  if (policy.trim && !policy.collapse_whitespace) {
    std::u32string t = text::decode_utf8(out);
    std::size_t b = 0, e = t.size();
    while (b < e && text::is_space(t[b])) ++b;
    while (e > b && text::is_space(t[e - 1])) --e;
    out = text::encode_utf8(std::u32string_view(t).substr(b, e - b));
  }
  if (policy.fold_case) out = fold(out);
  if (policy.compose) out = to_nfc(out);
  return out;
}

}  // namespace mtsuite
