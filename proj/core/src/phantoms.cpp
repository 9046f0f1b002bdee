#include "meshsrr/phantoms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "meshsrr/error.hpp"
#include "meshsrr/operators.hpp"
#include "meshsrr/rng.hpp"

namespace meshsrr {

namespace {

constexpr std::uint64_t kWalkStream = 0x7773686170ULL;
constexpr int kMaxRedraws = 10000;

void check_frame(const SceneSpec& spec, std::size_t t) {
  if (t >= spec.frames) {
    throw std::out_of_range(fmt::format("frame {} out of range for a {}-frame scene", t, spec.frames));
  }
}

bool in_rect(double x, double y, double cx, double cy, double w, double h) {
  return std::abs(x - cx) <= 0.5 * w && std::abs(y - cy) <= 0.5 * h;
}

bool in_ellipse(double x, double y, double cx, double cy, double a, double b) {
  double dx = (x - cx) / a, dy = (y - cy) / b;
  return dx * dx + dy * dy <= 1.0;
}

template <typename InObject>
GridImage rasterize(const SceneSpec& spec, std::size_t width, std::size_t height, InObject inside) {
  GridImage img(width, height);
  for (std::size_t j = 0; j < height; ++j) {
    double y = img.center_y(j);
    for (std::size_t i = 0; i < width; ++i) {
      double x = img.center_x(i);
      if (x * x + y * y > 1.0) continue;
      img(i, j) = inside(x, y) ? spec.inclusion : spec.background;
    }
  }
  return img;
}

}  // namespace

void SceneSpec::validate() const {
  if (frames < 1) throw ConfigError("scene frames must be at least 1");
  if (!(motion_bound >= 0.0)) throw ConfigError("scene motion_bound must be non-negative");
  if (!(motion_variance >= 0.0)) throw ConfigError("scene motion_variance must be non-negative");
  if (inclusion == background) throw ConfigError("scene inclusion must differ from background");
  if (!std::isfinite(inclusion) || !std::isfinite(background)) {
    throw ConfigError("scene values must be finite");
  }
  if (lung.area_swing < 0.0 || lung.area_swing >= 1.0) {
    throw ConfigError("lung area_swing must lie in [0, 1)");
  }
}

std::vector<Point2> tshape_positions(const SceneSpec& spec) {
  std::vector<Point2> pos(spec.frames);
  CounterRng rng(spec.rng_seed, kWalkStream);
  const double sd = std::sqrt(spec.motion_variance);
  auto step = [&](double from) {
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
      double candidate = from + sd * rng.normal();
      if (std::abs(candidate) <= spec.motion_bound) return candidate;
    }
    // stay put; only reachable with a tiny bound and a huge variance
    return from;
  };
  for (std::size_t t = 1; t < spec.frames; ++t) {
    pos[t].x = step(pos[t - 1].x);
    pos[t].y = step(pos[t - 1].y);
  }
  return pos;
}

GridImage render_tshape(const SceneSpec& spec, std::size_t t, std::size_t width,
                        std::size_t height) {
  check_frame(spec, t);
  const Point2 c = tshape_positions(spec)[t];
  const TShapeGeometry& g = spec.tshape;
  const double bar_cy = c.y + 0.5 * g.stem_height - 0.5 * g.bar_height;
  return rasterize(spec, width, height, [&](double x, double y) {
    return in_rect(x, y, c.x, c.y, g.stem_width, g.stem_height) ||
           in_rect(x, y, c.x, bar_cy, g.bar_width, g.bar_height);
  });
}

double lung_area_scale(const SceneSpec& spec, double t) {
  double period = static_cast<double>(spec.frames) / 2.0;
  return 1.0 + spec.lung.area_swing * std::cos(2.0 * std::numbers::pi * t / period);
}

GridImage render_lung(const SceneSpec& spec, std::size_t t, std::size_t width, std::size_t height) {
  check_frame(spec, t);
  const LungGeometry& g = spec.lung;
  const double s = std::sqrt(lung_area_scale(spec, static_cast<double>(t)));
  const double a = g.semi_x * s, b = g.semi_y * s;
  return rasterize(spec, width, height, [&](double x, double y) {
    return in_ellipse(x, y, -g.center_x, g.center_y, a, b) ||
           in_ellipse(x, y, g.center_x, g.center_y, a, b) ||
           in_ellipse(x, y, 0.0, g.spine_y, g.spine_radius, g.spine_radius);
  });
}

GridImage render_frame(const SceneSpec& spec, std::size_t t, std::size_t width,
                       std::size_t height) {
  return spec.kind == SceneKind::TShape ? render_tshape(spec, t, width, height)
                                        : render_lung(spec, t, width, height);
}

std::vector<FlowField> tshape_true_flows(const SceneSpec& spec, std::size_t width,
                                         std::size_t height) {
  auto pos = tshape_positions(spec);
  std::vector<FlowField> flows;
  flows.reserve(pos.size());
  flows.emplace_back(width, height);
  const double sx = static_cast<double>(width) / 2.0, sy = static_cast<double>(height) / 2.0;
  for (std::size_t t = 1; t < pos.size(); ++t) {
    flows.push_back(FlowField::constant(width, height, (pos[t - 1].x - pos[t].x) * sx,
                                        (pos[t - 1].y - pos[t].y) * sy));
  }
  return flows;
}

GridImage difference_image(const GridImage& frame, double background) {
  GridImage out(frame.width(), frame.height());
  for (std::size_t j = 0; j < frame.height(); ++j) {
    double y = frame.center_y(j);
    for (std::size_t i = 0; i < frame.width(); ++i) {
      double x = frame.center_x(i);
      out(i, j) = x * x + y * y <= 1.0 ? frame(i, j) - background : 0.0;
    }
  }
  return out;
}

FemMesh disc_mesh_rings(std::size_t rings) {
  if (rings < 1) throw std::invalid_argument("disc_mesh: need at least one ring");
  std::vector<Point2> nodes{{0.0, 0.0}};
  std::vector<std::size_t> ring_start{0};
  std::vector<std::size_t> ring_size{1};
  for (std::size_t k = 1; k <= rings; ++k) {
    ring_start.push_back(nodes.size());
    ring_size.push_back(4 * k);
    double r = static_cast<double>(k) / static_cast<double>(rings);
    for (std::size_t j = 0; j < 4 * k; ++j) {
      double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(4 * k);
      nodes.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
  }

  std::vector<Element> elements;
  auto add = [&](std::size_t a, std::size_t b, std::size_t c) {
    if (signed_double_area(nodes[a], nodes[b], nodes[c]) < 0.0) std::swap(b, c);
    elements.push_back({a, b, c});
  };
  for (std::size_t j = 0; j < 4; ++j) add(0, 1 + j, 1 + (j + 1) % 4);

  // Zip consecutive rings together in angular order.
  for (std::size_t k = 2; k <= rings; ++k) {
    const std::size_t m = ring_size[k - 1], n = ring_size[k];
    auto inner = [&](std::size_t a) { return ring_start[k - 1] + a % m; };
    auto outer = [&](std::size_t b) { return ring_start[k] + b % n; };
    std::size_t a = 0, b = 0;
    while (a < m || b < n) {
      // angles as fractions of a turn, compared exactly via cross-multiplication
      bool advance_outer = a == m || (b < n && (b + 1) * m <= (a + 1) * n);
      if (advance_outer) {
        add(inner(a), outer(b), outer(b + 1));
        ++b;
      } else {
        add(inner(a), outer(b), inner(a + 1));
        ++a;
      }
    }
  }
  return FemMesh(std::move(nodes), std::move(elements));
}

FemMesh disc_mesh(MeshDensity density) {
  return disc_mesh_rings(density == MeshDensity::Fine ? 16 : 8);
}

FemImage degrade(const GridImage& x_hr, const DegradeSpec& spec, const PixelAssignment& assignment,
                 std::size_t frame, Warnings* warnings) {
  if (!std::isfinite(spec.snr_db)) throw std::invalid_argument("degrade: snr_db must be finite");
  FemImage clean = downsample(convolve_neumann(x_hr, spec.kernel), assignment, warnings);
  std::vector<double> values(clean.values().begin(), clean.values().end());

  double signal_power = 0.0;
  for (double v : values) signal_power += v * v;
  CounterRng rng(spec.rng_seed, static_cast<std::uint64_t>(frame));
  std::vector<double> noise(values.size());
  double noise_power = 0.0;
  for (double& e : noise) {
    e = rng.normal();
    noise_power += e * e;
  }
  if (signal_power > 0.0 && noise_power > 0.0) {
    double target = signal_power * std::pow(10.0, -spec.snr_db / 10.0);
    double scale = std::sqrt(target / noise_power);
    for (std::size_t k = 0; k < values.size(); ++k) values[k] += scale * noise[k];
  }
  return FemImage(assignment.mesh(), std::move(values));
}

}  // namespace meshsrr
