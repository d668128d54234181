#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sel {

struct ManifestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key-value run manifest with dotted section names
/// (equation.alpha = 1.0). Order-preserving; errors carry line anchors.
class Manifest {
 public:
  static Manifest parse(const std::string& text,
                        const std::string& name = "<manifest>");
  static Manifest load(const std::string& path);

  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  const std::string& require(const std::string& key) const;

  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long get_long_or(const std::string& key, long fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_list(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);

  std::string serialize() const;
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Built-in experiment presets; throws ManifestError on unknown names.
Manifest preset_manifest(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace sel
