#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "youngwave/errors.hpp"

namespace youngwave::cli {

using Json = nlohmann::json;

inline Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream is(path);
  if (!is) throw ConfigInvalid("cannot open config file " + path);
  try {
    return Json::parse(is, nullptr, true, true);  // allow comments
  } catch (const std::exception& e) {
    throw ConfigInvalid(std::string("config parse error: ") + e.what());
  }
}

// apply one "--dotted.key=value" override onto the tree; values parse as JSON
// literals when possible and fall back to strings
inline void apply_override(Json& cfg, const std::string& key, const std::string& value) {
  Json* node = &cfg;
  std::size_t begin = 0;
  while (true) {
    const std::size_t dot = key.find('.', begin);
    const std::string part = key.substr(begin, dot == std::string::npos ? dot : dot - begin);
    if (part.empty()) throw ConfigInvalid("bad override key: " + key);
    if (dot == std::string::npos) {
      Json parsed = Json::parse(value, nullptr, false);
      (*node)[part] = parsed.is_discarded() ? Json(value) : parsed;
      return;
    }
    node = &(*node)[part];
    begin = dot + 1;
  }
}

inline void apply_overrides(Json& cfg, const std::vector<std::string>& extras) {
  for (const auto& raw : extras) {
    if (raw.rfind("--", 0) != 0)
      throw ConfigInvalid("unrecognized argument (overrides look like --key=value): " + raw);
    const std::size_t eq = raw.find('=');
    if (eq == std::string::npos)
      throw ConfigInvalid("override missing '=': " + raw);
    apply_override(cfg, raw.substr(2, eq - 2), raw.substr(eq + 1));
  }
}

template <class T>
T get_or(const Json& cfg, const std::string& key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  try {
    return cfg.at(key).get<T>();
  } catch (const std::exception&) {
    throw ConfigInvalid("config key '" + key + "' has the wrong type");
  }
}

}  // namespace youngwave::cli
