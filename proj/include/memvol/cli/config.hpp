#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ptree.hpp>

namespace memvol::cli {

/// Bad config or argument (exit code 1).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// A numeric check exceeded its tolerance (exit code 2).
struct ToleranceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Filesystem failure (exit code 3).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sectioned key = value config with strict validation.
class Config {
 public:
  static Config parse(std::string text);
  static Config load(const std::filesystem::path& path);

  /// The exact text the config was parsed from.
  const std::string& text() const { return text_; }

  bool has_section(std::string_view section) const;
  bool has(std::string_view section, std::string_view key) const;

  /// Rejects sections outside `allowed`.
  void allow_sections(std::initializer_list<std::string_view> allowed) const;
  /// Rejects keys of `section` outside `allowed`.
  void allow_keys(std::string_view section, std::initializer_list<std::string_view> allowed) const;

  std::string str(std::string_view section, std::string_view key, std::optional<std::string> fallback = {}) const;
  double real(std::string_view section, std::string_view key, std::optional<double> fallback = {}) const;
  std::uint64_t integer(std::string_view section, std::string_view key,
                        std::optional<std::uint64_t> fallback = {}) const;
  bool boolean(std::string_view section, std::string_view key, std::optional<bool> fallback = {}) const;
  /// Comma-separated lists.
  std::vector<double> reals(std::string_view section, std::string_view key,
                            std::optional<std::vector<double>> fallback = {}) const;
  std::vector<std::size_t> integers(std::string_view section, std::string_view key,
                                    std::optional<std::vector<std::size_t>> fallback = {}) const;
  std::vector<std::string> strings(std::string_view section, std::string_view key,
                                   std::optional<std::vector<std::string>> fallback = {}) const;

 private:
  std::optional<std::string> raw(std::string_view section, std::string_view key) const;

  std::string text_;
  boost::property_tree::ptree tree_;
};

double parse_real(std::string_view token, std::string_view what);
std::uint64_t parse_integer(std::string_view token, std::string_view what);

}  // namespace memvol::cli
