#include "cayperc/keyvalue.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "cayperc/error.hpp"

namespace cayperc {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::CapExceeded: return "cap-exceeded";
    case ErrorKind::Undetermined: return "undetermined";
  }
  return "unknown";
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

KeyValueText KeyValueText::parse(std::string_view text) {
  KeyValueText out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::InvalidInput, fmt::format("line {}: expected `key = value`", line_no));
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) fail(ErrorKind::InvalidInput, fmt::format("line {}: empty key", line_no));
    if (!out.entries_.emplace(key, value).second) {
      fail(ErrorKind::InvalidInput, fmt::format("line {}: duplicate key `{}`", line_no, key));
    }
  }
  return out;
}

std::optional<std::string> KeyValueText::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueText::get_string(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

long long KeyValueText::get_int(const std::string& key, long long fallback) const {
  const auto raw = get(key);
  if (!raw) return fallback;
  long long value = 0;
  const auto* end = raw->data() + raw->size();
  const auto [ptr, ec] = std::from_chars(raw->data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    fail(ErrorKind::InvalidInput, fmt::format("key `{}`: `{}` is not an integer", key, *raw));
  }
  return value;
}

namespace {

double parse_double(const std::string& key, std::string_view raw) {
  // strtod accepts forms from_chars<double> rejects on older toolchains.
  const std::string text(trim(raw));
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(value)) {
    fail(ErrorKind::InvalidInput, fmt::format("key `{}`: `{}` is not a finite number", key, text));
  }
  return value;
}

}  // namespace

double KeyValueText::get_double(const std::string& key, double fallback) const {
  const auto raw = get(key);
  if (!raw) return fallback;
  return parse_double(key, *raw);
}

std::vector<double> KeyValueText::get_double_list(const std::string& key) const {
  std::vector<double> out;
  const auto raw = get(key);
  if (!raw) return out;
  std::string_view rest = *raw;
  while (!rest.empty()) {
    const auto sep = rest.find_first_of(", ");
    const auto item = trim(rest.substr(0, sep));
    if (!item.empty()) out.push_back(parse_double(key, item));
    if (sep == std::string_view::npos) break;
    rest = rest.substr(sep + 1);
  }
  return out;
}

bool KeyValueText::get_bool(const std::string& key, bool fallback) const {
  const auto raw = get(key);
  if (!raw) return fallback;
  if (*raw == "true" || *raw == "1" || *raw == "yes") return true;
  if (*raw == "false" || *raw == "0" || *raw == "no") return false;
  fail(ErrorKind::InvalidInput, fmt::format("key `{}`: `{}` is not a boolean", key, *raw));
}

void KeyValueText::require_known(const std::vector<std::string>& allowed) const {
  for (const auto& [key, value] : entries_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(ErrorKind::InvalidInput, fmt::format("unknown key `{}`", key));
    }
  }
}

KeyValueText KeyValueText::subset(const std::vector<std::string>& keys) const {
  KeyValueText out;
  for (const auto& key : keys) {
    if (auto v = get(key)) out.entries_.emplace(key, *v);
  }
  return out;
}

}  // namespace cayperc
