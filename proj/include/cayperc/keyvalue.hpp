#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cayperc {

/// Flat `key = value` text as used by presentation specs and experiment
/// configs. Blank lines and `#` comments are ignored; keys are unique.
class KeyValueText {
 public:
  static KeyValueText parse(std::string_view text);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;

  /// Throws InvalidInput naming the first key not in `allowed`.
  void require_known(const std::vector<std::string>& allowed) const;

  /// Copy restricted to the given keys.
  KeyValueText subset(const std::vector<std::string>& keys) const;

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

std::string_view trim(std::string_view s);

}  // namespace cayperc
