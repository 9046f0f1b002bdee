#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "meshsrr/flow.hpp"
#include "meshsrr/kernel.hpp"
#include "meshsrr/phantoms.hpp"
#include "meshsrr/srr.hpp"

namespace meshsrr {

inline constexpr std::size_t kReferenceGrid = 200;
inline constexpr double kReferenceBlurSigma = 20.0;
// The reference 60x60 mask, made odd.
inline constexpr std::size_t kReferenceBlurSize = 61;

/// Everything one experiment needs. Blur size and sigma default to "auto":
/// 61 px and sigma 20 on a 200 px grid, scaled linearly with the grid so the
/// blur covers the same fraction of the domain at any resolution.
struct ExperimentConfig {
  std::string preset = "ex1a";
  SceneSpec scene;
  MeshDensity mesh = MeshDensity::Fine;
  double snr_db = 10.0;
  std::uint64_t noise_seed = 7;

  double mu = 0.01;
  std::size_t k_iters = 100;
  double alpha = 1.0;
  std::size_t grid = kReferenceGrid;
  std::optional<std::size_t> kernel_size;
  std::optional<double> kernel_sigma;

  FlowParams flow;

  std::filesystem::path output_dir = "srr_out";
  // Also reconstruct with known motion (analytic for the T-shape, registered
  // on the HR frames for the lung scene) next to the estimated-motion run.
  bool known_motion = true;
  bool write_images = true;

  std::size_t resolved_kernel_size() const;
  double resolved_kernel_sigma() const;
  Kernel kernel() const;
  SrrConfig srr_config() const;

  void validate() const;  // throws ConfigError
};

std::vector<std::string> preset_names();
// ex1a: T-shape, fine mesh, 10 dB; ex1b: T-shape, coarse mesh, -5 dB;
// ex2a / ex2b: the same two settings for the lung scene.
ExperimentConfig preset_config(std::string_view name);

/// Parses `key = value` lines. `[section]` headers are optional and only
/// restrict which keys may follow; `#` and `;` start comments. A `preset`
/// key selects the base preset (ex1a when absent) before any other key is
/// applied. Unknown keys and malformed lines raise ConfigError with the line
/// number.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Re-parsable dump of every key with its current value.
std::string format_config(const ExperimentConfig& cfg);

}  // namespace meshsrr
