#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mces::env {

/// Flat key = value file. '#' starts a comment; blank lines are ignored;
/// keys are unique. Values are read as numbers or comma-separated lists.
class EnvConfig {
 public:
  static EnvConfig parse(std::string_view text, std::string source = "<string>");
  static EnvConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& text(const std::string& key) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::vector<double> numbers(const std::string& key) const;

  /// Throws std::invalid_argument naming the first key outside `allowed`.
  void require_only(const std::vector<std::string>& allowed) const;

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, std::string> values_;
};

/// $MCES_DATA_DIR when set, else the directory configured at build time.
std::filesystem::path default_data_dir();

}  // namespace mces::env
