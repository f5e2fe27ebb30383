#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace anxpipe::cli {

/// Key/value configuration file.
///
///   # comment                 blank lines and '#' comments are ignored
///   seed = 42                 top-level key
///   [train]                   section header; following keys become train.<key>
///   epochs = 20
///   lr = 0.001
///   name = "quoted value"     double quotes are stripped; \" and \\ escape
///
/// Keys are [A-Za-z0-9_]+. A repeated key is an error.
class ConfigFile {
 public:
  static ConfigFile parse(const std::string& text, const std::string& source);
  static ConfigFile load(const std::filesystem::path& path);

  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  /// Keys not in `known` raise DataError naming the first one.
  void require_known(const std::initializer_list<const char*>& known) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace anxpipe::cli
