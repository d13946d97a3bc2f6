#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace glace {

/// Ordered key=value record of one CLI run: the resolved configuration under
/// the exact flag names (so the file doubles as a --config input that replays
/// the run), plus `x-` prefixed metadata such as input digests and timing.
class RunManifest {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long long value);
  void set_flag(const std::string& key, bool value);

  const std::string* find(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  void write(const std::filesystem::path& path) const;
  static RunManifest read(const std::filesystem::path& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace glace
