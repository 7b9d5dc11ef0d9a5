#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace akm {

/// Plain-text key=value settings with '#' comments. The set of valid keys and
/// their defaults is fixed at construction; anything else is a ConfigError.
class RunConfig {
 public:
  explicit RunConfig(std::map<std::string, std::string> defaults);

  void load_file(const std::filesystem::path& path);
  void parse(const std::string& text, const std::string& source = "<string>");
  /// Override one key (e.g. from a command-line flag).
  void set(const std::string& key, const std::string& value);
  /// "key=value" form of `set`.
  void set_assignment(const std::string& assignment);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::size_t get_size(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  /// Comma-separated lists.
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::size_t> get_sizes(const std::string& key) const;

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace akm
