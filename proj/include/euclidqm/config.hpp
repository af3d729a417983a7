#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace euclidqm {

/// Flat key=value configuration. '#' starts a comment at line start or after
/// whitespace; keys
/// use dotted sections (model.mpi_mev). A value can be overridden by the
/// environment variable ES_<KEY>, with the key upper-cased and '.' mapped to
/// '_' (ES_MODEL_MPI_MEV). Typed getters throw ConfigError on malformed values.
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text, const std::string& origin = "<string>");

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  [[nodiscard]] bool has(const std::string& key) const { return lookup(key).has_value(); }

  [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const;
  [[nodiscard]] double get_double(const std::string& key, double fallback) const;
  [[nodiscard]] long get_int(const std::string& key, long fallback) const;
  [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated list of numbers.
  [[nodiscard]] std::vector<double> get_doubles(const std::string& key,
                                               const std::vector<double>& fallback) const;

  static std::string env_name(const std::string& key);

 private:
  [[nodiscard]] std::optional<std::string> lookup(const std::string& key) const;

  std::map<std::string, std::string> values_;
};

}  // namespace euclidqm
