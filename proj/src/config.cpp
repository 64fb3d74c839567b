#include "memvol/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

namespace memvol::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// A blank value is an empty list; a blank item inside a list is kept so the
// caller rejects it.
std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::string where(std::string_view section, std::string_view key) {
  return "[" + std::string(section) + "] " + std::string(key);
}

}  // namespace

double parse_real(std::string_view token, std::string_view what) {
  token = trim(token);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty() || !std::isfinite(v))
    throw ValidationError(std::string(what) + ": '" + std::string(token) + "' is not a finite number");
  return v;
}

std::uint64_t parse_integer(std::string_view token, std::string_view what) {
  token = trim(token);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty())
    throw ValidationError(std::string(what) + ": '" + std::string(token) + "' is not a nonnegative integer");
  return v;
}

Config Config::parse(std::string text) {
  Config c;
  c.text_ = std::move(text);
  std::istringstream in(c.text_);
  try {
    boost::property_tree::ini_parser::read_ini(in, c.tree_);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError("config: " + std::string(e.what()));
  }
  for (const auto& [name, node] : c.tree_)
    if (node.empty()) throw ValidationError("config: key '" + name + "' must belong to a section");
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool Config::has_section(std::string_view section) const {
  return tree_.find(std::string(section)) != tree_.not_found();
}

bool Config::has(std::string_view section, std::string_view key) const { return raw(section, key).has_value(); }

void Config::allow_sections(std::initializer_list<std::string_view> allowed) const {
  for (const auto& [name, node] : tree_)
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
      throw ValidationError("config: unknown section [" + name + "]");
}

void Config::allow_keys(std::string_view section, std::initializer_list<std::string_view> allowed) const {
  const auto it = tree_.find(std::string(section));
  if (it == tree_.not_found()) return;
  for (const auto& [name, node] : it->second)
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
      throw ValidationError("config: unknown key " + where(section, name));
}

std::optional<std::string> Config::raw(std::string_view section, std::string_view key) const {
  const auto it = tree_.find(std::string(section));
  if (it == tree_.not_found()) return std::nullopt;
  const auto v = it->second.get_optional<std::string>(boost::property_tree::ptree::path_type(std::string(key), '\0'));
  if (!v) return std::nullopt;
  return std::string(trim(*v));
}

std::string Config::str(std::string_view section, std::string_view key, std::optional<std::string> fallback) const {
  if (auto v = raw(section, key)) return *v;
  if (fallback) return *fallback;
  throw ValidationError("config: missing " + where(section, key));
}

double Config::real(std::string_view section, std::string_view key, std::optional<double> fallback) const {
  if (auto v = raw(section, key)) return parse_real(*v, where(section, key));
  if (fallback) return *fallback;
  throw ValidationError("config: missing " + where(section, key));
}

std::uint64_t Config::integer(std::string_view section, std::string_view key,
                              std::optional<std::uint64_t> fallback) const {
  if (auto v = raw(section, key)) return parse_integer(*v, where(section, key));
  if (fallback) return *fallback;
  throw ValidationError("config: missing " + where(section, key));
}

bool Config::boolean(std::string_view section, std::string_view key, std::optional<bool> fallback) const {
  if (auto v = raw(section, key)) {
    if (*v == "true") return true;
    if (*v == "false") return false;
    throw ValidationError(where(section, key) + ": expected true or false");
  }
  if (fallback) return *fallback;
  throw ValidationError("config: missing " + where(section, key));
}

std::vector<double> Config::reals(std::string_view section, std::string_view key,
                                  std::optional<std::vector<double>> fallback) const {
  if (auto v = raw(section, key)) {
    std::vector<double> out;
    for (auto item : split_list(*v)) out.push_back(parse_real(item, where(section, key)));
    return out;
  }
  if (fallback) return *fallback;
  throw ValidationError("config: missing " + where(section, key));
}

std::vector<std::size_t> Config::integers(std::string_view section, std::string_view key,
                                          std::optional<std::vector<std::size_t>> fallback) const {
  if (auto v = raw(section, key)) {
    std::vector<std::size_t> out;
    for (auto item : split_list(*v)) out.push_back(parse_integer(item, where(section, key)));
    return out;
  }
  if (fallback) return *fallback;
  throw ValidationError("config: missing " + where(section, key));
}

std::vector<std::string> Config::strings(std::string_view section, std::string_view key,
                                         std::optional<std::vector<std::string>> fallback) const {
  if (auto v = raw(section, key)) {
    std::vector<std::string> out;
    for (auto item : split_list(*v)) {
      if (item.empty()) throw ValidationError(where(section, key) + ": empty list item");
      out.emplace_back(item);
    }
    return out;
  }
  if (fallback) return *fallback;
  throw ValidationError("config: missing " + where(section, key));
}

}  // namespace memvol::cli
