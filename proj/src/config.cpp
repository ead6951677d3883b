#include "rotphc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace rotphc {

using nlohmann::json;

std::vector<double> Sweep::values() const {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    v.push_back(log ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start))) : start + t * (stop - start));
  }
  if (count > 1) {
    v.front() = start;
    v.back() = stop;
  }
  return v;
}

namespace {

json sweep_json(const Sweep& s) {
  return {{"start", s.start}, {"stop", s.stop}, {"count", s.count}, {"spacing", s.log ? "log" : "linear"}};
}

void check_types(const json& given, const json& schema, const std::string& prefix) {
  if (!given.is_object()) throw ConfigError("config: '" + (prefix.empty() ? "<root>" : prefix) + "' must be an object");
  for (auto it = given.begin(); it != given.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!schema.contains(it.key())) throw ConfigError("config: unknown key '" + key + "'");
    const json& ref = schema.at(it.key());
    const json& val = it.value();
    bool ok = true;
    if (ref.is_object()) {
      check_types(val, ref, key);
      continue;
    } else if (ref.is_null()) {
      ok = val.is_null() || val.is_number();
    } else if (ref.is_number_integer()) {
      ok = val.is_number_integer();
    } else if (ref.is_number()) {
      ok = val.is_number();
    } else if (ref.is_boolean()) {
      ok = val.is_boolean();
    } else if (ref.is_string()) {
      ok = val.is_string();
    } else if (ref.is_array()) {
      ok = val.is_array();
      if (ok && !ref.empty())
        for (const auto& e : val)
          if ((ref.front().is_number() && !e.is_number()) || (ref.front().is_string() && !e.is_string())) ok = false;
    }
    if (!ok) {
      std::string expected = ref.is_null() ? "number or null" : ref.is_number_integer() ? "integer" : ref.type_name();
      throw ConfigError("config: key '" + key + "' expects " + expected + ", got " + val.dump());
    }
  }
}

void merge(json& base, const json& given) {
  for (auto it = given.begin(); it != given.end(); ++it) {
    if (it.value().is_object() && base[it.key()].is_object())
      merge(base[it.key()], it.value());
    else
      base[it.key()] = it.value();
  }
}

Sweep sweep_from(const json& j, const std::string& name) {
  const std::string spacing = j.at("spacing").get<std::string>();
  if (spacing != "linear" && spacing != "log")
    throw ConfigError("config: key '" + name + ".spacing' must be \"linear\" or \"log\", got \"" + spacing + "\"");
  return {j.at("start").get<double>(), j.at("stop").get<double>(), j.at("count").get<int>(), spacing == "log"};
}

}  // namespace

json to_json(const RunConfig& c) {
  json j;
  j["physical"] = {{"wavelength", c.physical.wavelength},
                   {"refractive_index", c.physical.refractive_index},
                   {"pitch", c.physical.pitch},
                   {"fill_factor", c.physical.fill_factor},
                   {"phase_contrast", c.physical.phase_contrast},
                   {"rotation_rate", c.physical.rotation_rate}};
  j["solver"] = {{"pwe_cutoff", c.pwe_cutoff}, {"bands", c.bands}};
  j["path"] = {{"labels", c.path_labels}, {"samples_per_segment", c.samples_per_segment}};
  j["rotation_sweep"] = sweep_json(c.rotation_sweep);
  j["contrast_sweep"] = sweep_json(c.contrast_sweep);
  j["pitches"] = c.pitches;
  j["kp"] = {{"enabled", c.kp}, {"window", c.kp_window}};
  j["eta"] = {{"alpha", c.eta_alpha ? json(*c.eta_alpha) : json(nullptr)}, {"samples", c.eta_samples}};
  j["output"] = {{"directory", c.output_directory}, {"format", c.format}};
  j["seed"] = c.seed;
  return j;
}

RunConfig from_json(const json& given) {
  const json schema = to_json(RunConfig{});
  check_types(given, schema, "");
  json j = schema;
  merge(j, given);

  RunConfig c;
  const json& ph = j.at("physical");
  c.physical.wavelength = ph.at("wavelength").get<double>();
  c.physical.refractive_index = ph.at("refractive_index").get<double>();
  c.physical.pitch = ph.at("pitch").get<double>();
  c.physical.fill_factor = ph.at("fill_factor").get<double>();
  c.physical.phase_contrast = ph.at("phase_contrast").get<double>();
  c.physical.rotation_rate = ph.at("rotation_rate").get<double>();
  c.pwe_cutoff = j.at("solver").at("pwe_cutoff").get<int>();
  c.bands = j.at("solver").at("bands").get<int>();
  c.path_labels = j.at("path").at("labels").get<std::vector<std::string>>();
  c.samples_per_segment = j.at("path").at("samples_per_segment").get<int>();
  c.rotation_sweep = sweep_from(j.at("rotation_sweep"), "rotation_sweep");
  c.contrast_sweep = sweep_from(j.at("contrast_sweep"), "contrast_sweep");
  c.pitches = j.at("pitches").get<std::vector<double>>();
  c.kp = j.at("kp").at("enabled").get<bool>();
  c.kp_window = j.at("kp").at("window").get<double>();
  if (!j.at("eta").at("alpha").is_null()) c.eta_alpha = j.at("eta").at("alpha").get<double>();
  c.eta_samples = j.at("eta").at("samples").get<int>();
  c.output_directory = j.at("output").at("directory").get<std::string>();
  c.format = j.at("output").at("format").get<std::string>();
  c.seed = j.at("seed").get<std::uint64_t>();
  check(c);
  return c;
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    json j = json::parse(text, nullptr, true, true);
    if (j.is_null()) j = json::object();
    return j;
  } catch (const json::parse_error& e) {
    // e.byte is 1-based; translate to line/column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("config: parse error in '" + path + "' at line " + std::to_string(line) + ", column " +
                      std::to_string(col));
  }
}

void apply_override(json& j, const std::string& key, const std::string& value) {
  if (key.empty()) throw ConfigError("override: empty key");
  json* node = &j;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (part.empty()) throw ConfigError("override: malformed key '" + key + "'");
    if (dot == std::string::npos) {
      json parsed;
      try {
        parsed = json::parse(value);
      } catch (const json::parse_error&) {
        parsed = value;
      }
      (*node)[part] = parsed;
      return;
    }
    json& next = (*node)[part];
    if (next.is_null()) next = json::object();
    if (!next.is_object()) throw ConfigError("override: '" + key.substr(0, dot) + "' is not a section");
    node = &next;
    pos = dot + 1;
  }
}

void check(const RunConfig& c) {
  try {
    validate(c.physical);
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.pwe_cutoff < 1) throw ConfigError("config: key 'solver.pwe_cutoff' must be >= 1");
  if (c.bands < 1) throw ConfigError("config: key 'solver.bands' must be >= 1");
  if (c.samples_per_segment < 2) throw ConfigError("config: key 'path.samples_per_segment' must be >= 2");
  for (const auto& [name, s] : {std::pair{"rotation_sweep", c.rotation_sweep}, std::pair{"contrast_sweep", c.contrast_sweep}}) {
    if (s.count < 1) throw ConfigError(std::string("config: key '") + name + ".count' must be >= 1");
    if (s.log && !(s.start > 0.0 && s.stop > 0.0))
      throw ConfigError(std::string("config: '") + name + "' with log spacing needs positive start and stop");
  }
  for (double v : c.contrast_sweep.values())
    if (v == 0.0) throw ConfigError("config: 'contrast_sweep' contains phase_contrast = 0");
  if (c.pitches.empty()) throw ConfigError("config: key 'pitches' must not be empty");
  for (double p : c.pitches)
    if (!(p > 0.0)) throw ConfigError("config: key 'pitches' entries must be > 0");
  if (!(c.kp_window > 0.0)) throw ConfigError("config: key 'kp.window' must be > 0");
  if (c.eta_samples < 4 || c.eta_samples % 2) throw ConfigError("config: key 'eta.samples' must be even and >= 4");
  if (c.format != "csv" && c.format != "csv+svg")
    throw ConfigError("config: key 'output.format' must be \"csv\" or \"csv+svg\"");
  if (c.output_directory.empty()) throw ConfigError("config: key 'output.directory' must not be empty");
}

}  // namespace rotphc
