#include "meshsrr/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>

#include "meshsrr/error.hpp"

namespace meshsrr {

namespace {

std::string_view trim(std::string_view s) {
  auto issp = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && issp(s.front())) s.remove_prefix(1);
  while (!s.empty() && issp(s.back())) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(fmt::format("'{}' is not a finite number", v));
  }
  return out;
}

std::uint64_t parse_unsigned(std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(fmt::format("'{}' is not a non-negative integer", v));
  }
  return out;
}

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(fmt::format("'{}' is not a boolean", v));
}

std::string fmt_double(double v) { return fmt::format("{}", v); }

struct KeyDef {
  std::string_view section;
  std::string_view key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define MESHSRR_DOUBLE_KEY(SEC, KEY, FIELD)                                        \
  KeyDef {                                                                         \
    SEC, KEY, [](ExperimentConfig& c, std::string_view v) { c.FIELD = parse_double(v); }, \
        [](const ExperimentConfig& c) { return fmt_double(c.FIELD); }              \
  }
#define MESHSRR_COUNT_KEY(SEC, KEY, FIELD)                                                   \
  KeyDef {                                                                                   \
    SEC, KEY,                                                                                \
        [](ExperimentConfig& c, std::string_view v) {                                        \
          c.FIELD = static_cast<decltype(c.FIELD)>(parse_unsigned(v));                       \
        },                                                                                   \
        [](const ExperimentConfig& c) { return fmt::format("{}", c.FIELD); }                 \
  }

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = {
      {"scene", "kind",
       [](ExperimentConfig& c, std::string_view v) {
         if (v == "tshape") c.scene.kind = SceneKind::TShape;
         else if (v == "lung") c.scene.kind = SceneKind::Lung;
         else throw ConfigError(fmt::format("scene kind must be tshape or lung, got '{}'", v));
       },
       [](const ExperimentConfig& c) {
         return std::string(c.scene.kind == SceneKind::TShape ? "tshape" : "lung");
       }},
      MESHSRR_COUNT_KEY("scene", "frames", scene.frames),
      MESHSRR_DOUBLE_KEY("scene", "background", scene.background),
      MESHSRR_DOUBLE_KEY("scene", "inclusion", scene.inclusion),
      MESHSRR_DOUBLE_KEY("scene", "motion_variance", scene.motion_variance),
      MESHSRR_DOUBLE_KEY("scene", "motion_bound", scene.motion_bound),
      MESHSRR_COUNT_KEY("scene", "scene_seed", scene.rng_seed),
      MESHSRR_DOUBLE_KEY("scene", "stem_width", scene.tshape.stem_width),
      MESHSRR_DOUBLE_KEY("scene", "stem_height", scene.tshape.stem_height),
      MESHSRR_DOUBLE_KEY("scene", "bar_width", scene.tshape.bar_width),
      MESHSRR_DOUBLE_KEY("scene", "bar_height", scene.tshape.bar_height),
      MESHSRR_DOUBLE_KEY("scene", "lung_center_x", scene.lung.center_x),
      MESHSRR_DOUBLE_KEY("scene", "lung_center_y", scene.lung.center_y),
      MESHSRR_DOUBLE_KEY("scene", "lung_semi_x", scene.lung.semi_x),
      MESHSRR_DOUBLE_KEY("scene", "lung_semi_y", scene.lung.semi_y),
      MESHSRR_DOUBLE_KEY("scene", "lung_area_swing", scene.lung.area_swing),
      MESHSRR_DOUBLE_KEY("scene", "spine_radius", scene.lung.spine_radius),
      MESHSRR_DOUBLE_KEY("scene", "spine_y", scene.lung.spine_y),
      {"degrade", "mesh",
       [](ExperimentConfig& c, std::string_view v) {
         if (v == "fine") c.mesh = MeshDensity::Fine;
         else if (v == "coarse") c.mesh = MeshDensity::Coarse;
         else throw ConfigError(fmt::format("mesh must be fine or coarse, got '{}'", v));
       },
       [](const ExperimentConfig& c) {
         return std::string(c.mesh == MeshDensity::Fine ? "fine" : "coarse");
       }},
      MESHSRR_DOUBLE_KEY("degrade", "snr_db", snr_db),
      MESHSRR_COUNT_KEY("degrade", "noise_seed", noise_seed),
      MESHSRR_DOUBLE_KEY("srr", "mu", mu),
      MESHSRR_COUNT_KEY("srr", "k_iters", k_iters),
      MESHSRR_DOUBLE_KEY("srr", "alpha", alpha),
      MESHSRR_COUNT_KEY("srr", "grid", grid),
      {"srr", "kernel_size",
       [](ExperimentConfig& c, std::string_view v) {
         if (v == "auto") c.kernel_size.reset();
         else c.kernel_size = static_cast<std::size_t>(parse_unsigned(v));
       },
       [](const ExperimentConfig& c) {
         return c.kernel_size ? fmt::format("{}", *c.kernel_size) : std::string("auto");
       }},
      {"srr", "kernel_sigma",
       [](ExperimentConfig& c, std::string_view v) {
         if (v == "auto") c.kernel_sigma.reset();
         else c.kernel_sigma = parse_double(v);
       },
       [](const ExperimentConfig& c) {
         return c.kernel_sigma ? fmt_double(*c.kernel_sigma) : std::string("auto");
       }},
      MESHSRR_DOUBLE_KEY("flow", "lambda", flow.lambda),
      MESHSRR_COUNT_KEY("flow", "pyramid_levels", flow.pyramid_levels),
      MESHSRR_DOUBLE_KEY("flow", "pyramid_spacing", flow.pyramid_spacing),
      MESHSRR_COUNT_KEY("flow", "iterations_per_level", flow.iterations_per_level),
      MESHSRR_COUNT_KEY("flow", "warps_per_level", flow.warps_per_level),
      {"output", "output_dir",
       [](ExperimentConfig& c, std::string_view v) { c.output_dir = std::string(v); },
       [](const ExperimentConfig& c) { return c.output_dir.string(); }},
      {"output", "known_motion",
       [](ExperimentConfig& c, std::string_view v) { c.known_motion = parse_bool(v); },
       [](const ExperimentConfig& c) { return std::string(c.known_motion ? "true" : "false"); }},
      {"output", "write_images",
       [](ExperimentConfig& c, std::string_view v) { c.write_images = parse_bool(v); },
       [](const ExperimentConfig& c) { return std::string(c.write_images ? "true" : "false"); }},
  };
  return table;
}

#undef MESHSRR_DOUBLE_KEY
#undef MESHSRR_COUNT_KEY

bool known_section(std::string_view s) {
  return s == "scene" || s == "degrade" || s == "srr" || s == "flow" || s == "output";
}

struct Assignment {
  std::size_t line;
  std::string_view section;
  std::string_view key;
  std::string_view value;
};

std::vector<Assignment> tokenize(std::string_view text) {
  std::vector<Assignment> out;
  std::string_view section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (std::size_t hash = line.find_first_of("#;"); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(fmt::format("line {}: unterminated section header", line_no));
      section = trim(line.substr(1, line.size() - 2));
      if (!known_section(section)) {
        throw ConfigError(fmt::format("line {}: unknown section '[{}]'", line_no, section));
      }
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value', got '{}'", line_no, line));
    }
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("line {}: missing key", line_no));
    if (value.empty()) throw ConfigError(fmt::format("line {}: missing value for '{}'", line_no, key));
    out.push_back({line_no, section, key, value});
  }
  return out;
}

}  // namespace

std::size_t ExperimentConfig::resolved_kernel_size() const {
  if (kernel_size) return *kernel_size;
  double scaled = 60.0 * static_cast<double>(grid) / static_cast<double>(kReferenceGrid);
  return nearest_odd(std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(scaled))));
}

double ExperimentConfig::resolved_kernel_sigma() const {
  if (kernel_sigma) return *kernel_sigma;
  return kReferenceBlurSigma * static_cast<double>(grid) / static_cast<double>(kReferenceGrid);
}

Kernel ExperimentConfig::kernel() const {
  try {
    return gaussian_kernel(resolved_kernel_size(), resolved_kernel_sigma());
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }
}

SrrConfig ExperimentConfig::srr_config() const {
  SrrConfig s;
  s.mu = mu;
  s.k_iters = k_iters;
  s.alpha = alpha;
  s.width = grid;
  s.height = grid;
  s.kernel = kernel();
  return s;
}

void ExperimentConfig::validate() const {
  scene.validate();
  flow.validate();
  if (grid < 8) throw ConfigError(fmt::format("grid must be at least 8, got {}", grid));
  srr_config().validate();
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

std::vector<std::string> preset_names() { return {"ex1a", "ex1b", "ex2a", "ex2b"}; }

ExperimentConfig preset_config(std::string_view name) {
  ExperimentConfig c;
  c.preset = std::string(name);
  if (name == "ex1a") {
    c.scene.kind = SceneKind::TShape;
    c.mesh = MeshDensity::Fine;
    c.snr_db = 10.0;
  } else if (name == "ex1b") {
    c.scene.kind = SceneKind::TShape;
    c.mesh = MeshDensity::Coarse;
    c.snr_db = -5.0;
  } else if (name == "ex2a") {
    c.scene.kind = SceneKind::Lung;
    c.mesh = MeshDensity::Fine;
    c.snr_db = 10.0;
  } else if (name == "ex2b") {
    c.scene.kind = SceneKind::Lung;
    c.mesh = MeshDensity::Coarse;
    c.snr_db = -5.0;
  } else {
    throw ConfigError(fmt::format("unknown preset '{}' (expected ex1a, ex1b, ex2a or ex2b)", name));
  }
  return c;
}

ExperimentConfig parse_config(std::string_view text) {
  auto assignments = tokenize(text);
  ExperimentConfig cfg = preset_config("ex1a");
  for (const auto& a : assignments) {
    if (a.key != "preset") continue;
    if (!a.section.empty()) {
      throw ConfigError(fmt::format("line {}: 'preset' must appear before any section", a.line));
    }
    try {
      cfg = preset_config(a.value);
    } catch (const ConfigError& err) {
      throw ConfigError(fmt::format("line {}: {}", a.line, err.what()));
    }
  }
  const auto& table = key_table();
  for (const auto& a : assignments) {
    if (a.key == "preset") continue;
    auto it = std::find_if(table.begin(), table.end(), [&](const KeyDef& d) { return d.key == a.key; });
    if (it == table.end()) throw ConfigError(fmt::format("line {}: unknown key '{}'", a.line, a.key));
    if (!a.section.empty() && a.section != it->section) {
      throw ConfigError(fmt::format("line {}: key '{}' belongs to [{}], not [{}]", a.line, a.key,
                                    it->section, a.section));
    }
    try {
      it->set(cfg, a.value);
    } catch (const ConfigError& err) {
      throw ConfigError(fmt::format("line {}: {}: {}", a.line, a.key, err.what()));
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const ExperimentConfig& cfg) {
  std::string out = fmt::format("preset = {}\n", cfg.preset);
  std::string_view section;
  for (const auto& d : key_table()) {
    if (d.section != section) {
      section = d.section;
      out += fmt::format("\n[{}]\n", section);
    }
    out += fmt::format("{} = {}\n", d.key, d.get(cfg));
  }
  return out;
}

}  // namespace meshsrr
