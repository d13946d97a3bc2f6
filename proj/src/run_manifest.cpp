#include "glace/run_manifest.hpp"

#include <cstdio>
#include <fstream>

#include "glace/errors.hpp"

namespace glace {

void RunManifest::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void RunManifest::set(const std::string& key, double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  set(key, std::string(buf));
}

void RunManifest::set(const std::string& key, long long value) {
  set(key, std::to_string(value));
}

void RunManifest::set_flag(const std::string& key, bool value) {
  set(key, value ? std::string("true") : std::string("false"));
}

const std::string* RunManifest::find(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return &v;
  return nullptr;
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write manifest: " + path.string());
  out << "# glace run manifest; usable as --config to replay the run\n";
  // Section header so the config loader routes keys to the right subcommand.
  if (const std::string* cmd = find("command")) out << '[' << *cmd << "]\n";
  for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
}

RunManifest RunManifest::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open manifest: " + path.string());
  RunManifest m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    m.entries_.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return m;
}

}  // namespace glace
