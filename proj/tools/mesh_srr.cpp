// mesh_srr: experiment runner and per-module utilities.
//
//   mesh_srr run --preset ex2b --grid 100 --out out/ex2b
//   mesh_srr metrics --reference out/ex2b/hr --estimate out/ex2b/srr_known
//   mesh_srr mesh --density coarse --out coarse.femesh
//   mesh_srr resample --mesh coarse.femesh --values lr.femvals --grid 100 --out lr.pgm
//   mesh_srr flow --prev a.pgm --next b.pgm --out ab.flow

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "meshsrr/config.hpp"
#include "meshsrr/error.hpp"
#include "meshsrr/experiment.hpp"
#include "meshsrr/flow.hpp"
#include "meshsrr/flow_field.hpp"
#include "meshsrr/image_io.hpp"
#include "meshsrr/mesh_io.hpp"
#include "meshsrr/metrics.hpp"
#include "meshsrr/phantoms.hpp"
#include "meshsrr/resample.hpp"

namespace fs = std::filesystem;
using namespace meshsrr;

namespace {

enum ExitCode : int { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

void print_warnings(const Warnings& w, bool quiet) {
  if (quiet) return;
  for (const auto& m : w.messages) fmt::print(stderr, "warning: {}\n", m);
}

void write_or_print(const std::optional<fs::path>& path, const std::string& text) {
  if (!path) {
    fmt::print("{}", text);
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw IoError(fmt::format("cannot write '{}'", path->string()));
}

// ---- run

struct RunArgs {
  std::string preset;
  std::optional<fs::path> config;
  std::optional<std::size_t> grid;
  std::optional<fs::path> out;
  bool no_images = false;
  bool print_defaults = false;
  bool quiet = false;
};

int cmd_run(const RunArgs& a) {
  std::string text;
  if (a.config) {
    std::ifstream in(*a.config);
    if (!in) throw IoError(fmt::format("cannot read '{}'", a.config->string()));
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  // --preset only sets the base; a preset key inside the file still wins
  if (!a.preset.empty()) text = fmt::format("preset = {}\n", a.preset) + text;
  ExperimentConfig cfg = parse_config(text);
  if (a.grid) cfg.grid = *a.grid;
  if (a.out) cfg.output_dir = *a.out;
  if (a.no_images) cfg.write_images = false;

  if (a.print_defaults) {
    fmt::print("{}", format_config(cfg));
    return kOk;
  }
  cfg.validate();
  ExperimentResult r = run_experiment(cfg);
  print_warnings(r.warnings, a.quiet);
  if (!a.quiet) {
    fmt::print(stderr, "mu * L = {:.4f}; artifacts in {}\n", cfg.mu * r.lipschitz,
               cfg.output_dir.string());
  }
  fmt::print("{}", summary_csv(r));
  return kOk;
}

// ---- metrics

std::vector<fs::path> image_list(const fs::path& p) {
  if (!fs::is_directory(p)) return {p};
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(p)) {
    if (e.is_regular_file() && e.path().extension() == ".pgm") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct MetricsArgs {
  fs::path reference;
  fs::path estimate;
  std::optional<fs::path> out;
  bool quiet = false;
};

int cmd_metrics(const MetricsArgs& a) {
  auto refs = image_list(a.reference);
  auto ests = image_list(a.estimate);
  if (refs.empty()) throw IoError(fmt::format("no .pgm images in '{}'", a.reference.string()));
  if (refs.size() != ests.size()) {
    throw ConfigError(fmt::format("{} reference images but {} estimates", refs.size(), ests.size()));
  }
  MetricsReport report;
  Warnings warnings;
  for (std::size_t t = 0; t < refs.size(); ++t) {
    GridImage ref = load_grid_image(refs[t]);
    GridImage est = load_grid_image(ests[t]);
    if (!ref.same_shape(est)) {
      throw ConfigError(fmt::format("'{}' and '{}' differ in size", refs[t].string(), ests[t].string()));
    }
    try {
      report.frames.push_back(compare_images(ref, est, &warnings));
    } catch (const std::invalid_argument&) {
      throw NumericalError(fmt::format("frame {}: empty mask, distances undefined", t));
    }
  }
  print_warnings(warnings, a.quiet);
  write_or_print(a.out, report.to_csv());
  return kOk;
}

// ---- mesh

struct MeshArgs {
  std::string density = "fine";
  std::optional<std::size_t> rings;
  fs::path out;
};

int cmd_mesh(const MeshArgs& a) {
  FemMesh mesh = a.rings ? disc_mesh_rings(*a.rings)
                         : disc_mesh(a.density == "coarse" ? MeshDensity::Coarse : MeshDensity::Fine);
  save_mesh(a.out, mesh);
  fmt::print("{} nodes, {} elements\n", mesh.nodes().size(), mesh.elements().size());
  return kOk;
}

// ---- resample

struct ResampleArgs {
  fs::path mesh;
  std::optional<fs::path> values;
  std::optional<fs::path> image;
  std::size_t grid = kReferenceGrid;
  fs::path out;
  bool quiet = false;
};

int cmd_resample(const ResampleArgs& a) {
  auto mesh = std::make_shared<const FemMesh>(load_mesh(a.mesh));
  if (a.values) {
    FemImage fem = load_fem_image(*a.values, mesh);
    PixelAssignment asg = build_pixel_assignment(mesh, a.grid, a.grid);
    save_grid_image(a.out, upsample(fem, asg));
    return kOk;
  }
  GridImage img = load_grid_image(*a.image);
  PixelAssignment asg = build_pixel_assignment(mesh, img.width(), img.height());
  Warnings warnings;
  FemImage fem = downsample(img, asg, &warnings);
  print_warnings(warnings, a.quiet);
  save_fem_image(a.out, fem);
  return kOk;
}

// ---- flow

struct FlowArgs {
  fs::path prev;
  fs::path next;
  fs::path out;
  FlowParams params;
  bool quiet = false;
};

int cmd_flow(const FlowArgs& a) {
  a.params.validate();
  GridImage prev = load_grid_image(a.prev);
  GridImage next = load_grid_image(a.next);
  if (!prev.same_shape(next)) throw ConfigError("flow: images differ in size");
  HornSchunckReport report;
  report.record_energy = false;
  FlowField f = horn_schunck(prev, next, a.params, &report);
  print_warnings(report.warnings, a.quiet);
  save_flow(a.out, f);
  fmt::print("levels {}, max |f| = {:.4f} px\n", report.levels_used, f.max_magnitude());
  return kOk;
}

template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfig;
  } catch (const NumericalError& e) {
    fmt::print(stderr, "numerical error: {}\n", e.what());
    return kNumerical;
  } catch (const IoError& e) {
    fmt::print(stderr, "i/o error: {}\n", e.what());
    return kIo;
  } catch (const fs::filesystem_error& e) {
    fmt::print(stderr, "i/o error: {}\n", e.what());
    return kIo;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "invalid input: {}\n", e.what());
    return kConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Super-resolution of image sequences on finite-element meshes"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "run a synthetic experiment");
  run_cmd->add_option("--preset", run.preset, "ex1a, ex1b, ex2a or ex2b")
      ->check(CLI::IsMember(preset_names()));
  run_cmd->add_option("--config", run.config, "key = value config file")->check(CLI::ExistingFile);
  run_cmd->add_option("--grid", run.grid, "IHR grid side (overrides the config)");
  run_cmd->add_option("--out", run.out, "output directory (overrides the config)");
  run_cmd->add_flag("--no-images", run.no_images, "skip PGM frame output");
  run_cmd->add_flag("--print-defaults", run.print_defaults,
                    "print the resolved configuration and exit");
  run_cmd->add_flag("-q,--quiet", run.quiet, "suppress warnings");

  MetricsArgs metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "score estimate images against references");
  metrics_cmd->add_option("--reference", metrics.reference, "PGM file or directory")->required();
  metrics_cmd->add_option("--estimate", metrics.estimate, "PGM file or directory")->required();
  metrics_cmd->add_option("--out", metrics.out, "CSV path (default stdout)");
  metrics_cmd->add_flag("-q,--quiet", metrics.quiet, "suppress warnings");

  MeshArgs mesh;
  auto* mesh_cmd = app.add_subcommand("mesh", "write a disc mesh");
  mesh_cmd->add_option("--density", mesh.density, "fine or coarse")
      ->check(CLI::IsMember({"fine", "coarse"}));
  mesh_cmd->add_option("--rings", mesh.rings, "ring count (overrides --density)");
  mesh_cmd->add_option("--out", mesh.out, "mesh path")->required();

  ResampleArgs resample;
  auto* resample_cmd = app.add_subcommand("resample", "convert between element values and a grid");
  resample_cmd->add_option("--mesh", resample.mesh, "mesh file")->required();
  auto* values_opt =
      resample_cmd->add_option("--values", resample.values, "element values to upsample");
  auto* image_opt = resample_cmd->add_option("--image", resample.image, "PGM image to downsample");
  values_opt->excludes(image_opt);
  resample_cmd->add_option("--grid", resample.grid, "grid side when upsampling");
  resample_cmd->add_option("--out", resample.out, "output path")->required();
  resample_cmd->add_flag("-q,--quiet", resample.quiet, "suppress warnings");

  FlowArgs flow;
  auto* flow_cmd = app.add_subcommand("flow", "register two images with Horn-Schunck");
  flow_cmd->add_option("--prev", flow.prev, "reference image")->required();
  flow_cmd->add_option("--next", flow.next, "moving image")->required();
  flow_cmd->add_option("--out", flow.out, "flow path")->required();
  flow_cmd->add_option("--lambda", flow.params.lambda, "smoothness weight");
  flow_cmd->add_option("--levels", flow.params.pyramid_levels, "pyramid levels");
  flow_cmd->add_option("--spacing", flow.params.pyramid_spacing, "pyramid spacing");
  flow_cmd->add_option("--iterations", flow.params.iterations_per_level, "sweeps per warp");
  flow_cmd->add_option("--warps", flow.params.warps_per_level, "warps per level");
  flow_cmd->add_flag("-q,--quiet", flow.quiet, "suppress warnings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  if (run_cmd->parsed()) return guarded([&] { return cmd_run(run); });
  if (metrics_cmd->parsed()) return guarded([&] { return cmd_metrics(metrics); });
  if (mesh_cmd->parsed()) return guarded([&] { return cmd_mesh(mesh); });
  if (resample_cmd->parsed()) {
    if (!resample.values && !resample.image) {
      fmt::print(stderr, "resample: one of --values or --image is required\n");
      return kConfig;
    }
    return guarded([&] { return cmd_resample(resample); });
  }
  if (flow_cmd->parsed()) return guarded([&] { return cmd_flow(flow); });
  return kConfig;
}
