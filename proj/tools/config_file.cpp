#include "config_file.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "anxpipe/error.hpp"

namespace anxpipe::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text, const std::string& source) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw DataError(where + "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (!valid_key(section)) throw DataError(where + "bad section name");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw DataError(where + "expected key = value");
    const std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (!valid_key(key)) throw DataError(where + "bad key \"" + key + "\"");
    if (!value.empty() && value.front() == '"') {
      std::string out;
      std::size_t i = 1;
      bool closed = false;
      for (; i < value.size(); ++i) {
        if (value[i] == '\\' && i + 1 < value.size()) {
          out += value[++i];
        } else if (value[i] == '"') {
          closed = true;
          ++i;
          break;
        } else {
          out += value[i];
        }
      }
      const std::string rest = trim(value.substr(i));
      if (!closed || (!rest.empty() && rest[0] != '#')) throw DataError(where + "bad quoted value");
      value = out;
    } else {
      const auto hash = value.find(" #");
      if (hash != std::string::npos) value = trim(value.substr(0, hash));
    }
    const std::string full = section.empty() ? key : section + "." + key;
    if (!cfg.values_.emplace(full, value).second) throw DataError(where + "duplicate key " + full);
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

std::optional<std::string> ConfigFile::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void ConfigFile::require_known(const std::initializer_list<const char*>& known) const {
  std::set<std::string> k(known.begin(), known.end());
  for (const auto& [key, v] : values_)
    if (!k.count(key)) throw DataError("unknown config key " + key);
}

}  // namespace anxpipe::cli
