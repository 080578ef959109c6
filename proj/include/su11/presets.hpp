#ifndef SU11_PRESETS_HPP
#define SU11_PRESETS_HPP

// Named configurations shipped in presets/*.json and compiled in.

#include <string>
#include <vector>

#include "su11/config_io.hpp"
#include "su11/presets_data.hpp"

namespace su11 {

inline std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& s : presets_data::kSources) names.emplace_back(s.name);
  return names;
}

inline Document load_preset(const std::string& name) {
  for (const auto& s : presets_data::kSources) {
    if (name == s.name) return io::parse_document(s.json);
  }
  throw Error(ErrorKind::config, "unknown preset '" + name + "'");
}

}  // namespace su11

#endif  // SU11_PRESETS_HPP
