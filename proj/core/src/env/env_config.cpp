#include "mces/env/env_config.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#ifndef MCES_DATA_DIR
#define MCES_DATA_DIR "data/envs"
#endif

namespace mces::env {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_number(std::string_view s, const std::string& where) {
  s = trim(s);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument(fmt::format("{}: '{}' is not a number", where, s));
  }
  return out;
}

}  // namespace

EnvConfig EnvConfig::parse(std::string_view text, std::string source) {
  EnvConfig cfg;
  cfg.source_ = std::move(source);
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument(fmt::format("{}:{}: expected key = value", cfg.source_, number));
    }
    std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw std::invalid_argument(fmt::format("{}:{}: empty key", cfg.source_, number));
    if (cfg.values_.count(key)) throw std::invalid_argument(fmt::format("{}:{}: duplicate key '{}'", cfg.source_, number, key));
    cfg.values_[key] = std::string(trim(line.substr(eq + 1)));
  }
  return cfg;
}

EnvConfig EnvConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open environment config {}", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

const std::string& EnvConfig::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw std::invalid_argument(fmt::format("{}: missing key '{}'", source_, key));
  return it->second;
}

double EnvConfig::number(const std::string& key) const { return to_number(text(key), source_ + " key " + key); }

double EnvConfig::number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

std::vector<double> EnvConfig::numbers(const std::string& key) const {
  std::vector<double> out;
  std::string_view rest = text(key);
  while (true) {
    const std::size_t comma = rest.find(',');
    out.push_back(to_number(rest.substr(0, comma), source_ + " key " + key));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

void EnvConfig::require_only(const std::vector<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    bool known = false;
    for (const auto& a : allowed) known = known || a == key;
    if (!known) throw std::invalid_argument(fmt::format("{}: unknown key '{}'", source_, key));
  }
}

std::filesystem::path default_data_dir() {
  if (const char* dir = std::getenv("MCES_DATA_DIR"); dir != nullptr && *dir != '\0') return dir;
  return MCES_DATA_DIR;
}

}  // namespace mces::env
