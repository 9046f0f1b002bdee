#include "meshsrr/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "meshsrr/kernel.hpp"
#include "meshsrr/operators.hpp"

namespace meshsrr {

namespace {

struct Sampler {
  std::size_t x0, x1, y0, y1;
  double fx, fy;
};

Sampler sampler_at(std::size_t w, std::size_t h, double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(w - 1));
  y = std::clamp(y, 0.0, static_cast<double>(h - 1));
  Sampler s;
  s.x0 = static_cast<std::size_t>(std::floor(x));
  s.y0 = static_cast<std::size_t>(std::floor(y));
  s.x1 = std::min(s.x0 + 1, w - 1);
  s.y1 = std::min(s.y0 + 1, h - 1);
  s.fx = x - static_cast<double>(s.x0);
  s.fy = y - static_cast<double>(s.y0);
  return s;
}

double sample(const std::vector<double>& data, std::size_t w, const Sampler& s) {
  return (1.0 - s.fx) * (1.0 - s.fy) * data[s.y0 * w + s.x0] +
         s.fx * (1.0 - s.fy) * data[s.y0 * w + s.x1] +
         (1.0 - s.fx) * s.fy * data[s.y1 * w + s.x0] + s.fx * s.fy * data[s.y1 * w + s.x1];
}

// Source coordinate of destination pixel center `i` when resizing n -> m.
double map_center(std::size_t i, std::size_t n, std::size_t m) {
  return (static_cast<double>(i) + 0.5) * (static_cast<double>(n) / static_cast<double>(m)) - 0.5;
}

std::size_t level_size(std::size_t n, double spacing) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(n) / spacing)));
}

Kernel pyramid_kernel(double spacing, std::size_t w, std::size_t h) {
  double sigma = 0.8 * spacing;
  std::size_t size = 2 * static_cast<std::size_t>(std::ceil(3.0 * sigma)) + 1;
  std::size_t limit = 2 * std::min(w, h) - 1;
  if (size > limit) size = limit % 2 == 1 ? limit : limit - 1;
  return gaussian_kernel(std::max<std::size_t>(size, 1), sigma);
}

GridImage normalized(const GridImage& img, double lo, double scale) {
  GridImage out = img;
  for (double& v : out.values()) v = (v - lo) * scale;
  return out;
}

// Central differences with clamped neighbours.
void gradients(const GridImage& img, std::vector<double>& gx, std::vector<double>& gy) {
  const std::size_t w = img.width(), h = img.height();
  gx.assign(w * h, 0.0);
  gy.assign(w * h, 0.0);
  for (std::size_t j = 0; j < h; ++j) {
    std::size_t jm = j > 0 ? j - 1 : 0, jp = std::min(j + 1, h - 1);
    for (std::size_t i = 0; i < w; ++i) {
      std::size_t im = i > 0 ? i - 1 : 0, ip = std::min(i + 1, w - 1);
      gx[j * w + i] = 0.5 * (img(ip, j) - img(im, j));
      gy[j * w + i] = 0.5 * (img(i, jp) - img(i, jm));
    }
  }
}

struct Linearization {
  std::size_t w, h;
  std::vector<double> ix, iy, it;  // it already shifted by the current flow
};

double stage_energy(const Linearization& lin, const FlowField& f, double lambda) {
  const std::size_t w = lin.w, h = lin.h;
  const auto& u = f.u_data();
  const auto& v = f.v_data();
  double data = 0.0, smooth = 0.0;
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      std::size_t p = j * w + i;
      double r = lin.ix[p] * u[p] + lin.iy[p] * v[p] + lin.it[p];
      data += r * r;
      if (i + 1 < w) {
        double du = u[p + 1] - u[p], dv = v[p + 1] - v[p];
        smooth += du * du + dv * dv;
      }
      if (j + 1 < h) {
        double du = u[p + w] - u[p], dv = v[p + w] - v[p];
        smooth += du * du + dv * dv;
      }
    }
  }
  return data + lambda * smooth;
}

// One red-black Gauss-Seidel sweep; each pixel gets the exact joint
// minimizer of the energy in (u_p, v_p) with its neighbours fixed.
void sweep(const Linearization& lin, FlowField& f, double lambda) {
  const std::size_t w = lin.w, h = lin.h;
  auto& u = f.u_data();
  auto& v = f.v_data();
  for (std::size_t colour = 0; colour < 2; ++colour) {
    for (std::size_t j = 0; j < h; ++j) {
      for (std::size_t i = (j + colour) % 2; i < w; i += 2) {
        std::size_t p = j * w + i;
        double su = 0.0, sv = 0.0;
        int n = 0;
        if (i > 0) su += u[p - 1], sv += v[p - 1], ++n;
        if (i + 1 < w) su += u[p + 1], sv += v[p + 1], ++n;
        if (j > 0) su += u[p - w], sv += v[p - w], ++n;
        if (j + 1 < h) su += u[p + w], sv += v[p + w], ++n;
        if (n == 0) {
          // 1x1 grid: no smoothness, leave the flow unchanged
          continue;
        }
        const double ix = lin.ix[p], iy = lin.iy[p], it = lin.it[p];
        const double ln = lambda * n;
        const double a11 = ix * ix + ln, a22 = iy * iy + ln, a12 = ix * iy;
        const double r1 = lambda * su - ix * it;
        const double r2 = lambda * sv - iy * it;
        const double det = a11 * a22 - a12 * a12;
        u[p] = (a22 * r1 - a12 * r2) / det;
        v[p] = (a11 * r2 - a12 * r1) / det;
      }
    }
  }
}

Linearization linearize(const GridImage& ref, const GridImage& moving, const FlowField& f) {
  GridImage warped = warp_image(moving, f);
  Linearization lin{ref.width(), ref.height(), {}, {}, {}};
  std::vector<double> rx, ry, wx, wy;
  gradients(ref, rx, ry);
  gradients(warped, wx, wy);
  const std::size_t n = ref.size();
  lin.ix.resize(n);
  lin.iy.resize(n);
  lin.it.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    lin.ix[p] = 0.5 * (rx[p] + wx[p]);
    lin.iy[p] = 0.5 * (ry[p] + wy[p]);
    // data residual expressed in the total flow: Ix (u - u0) + Iy (v - v0) + It
    lin.it[p] = warped[p] - ref[p] - lin.ix[p] * f.u_data()[p] - lin.iy[p] * f.v_data()[p];
  }
  return lin;
}

}  // namespace

void FlowParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError(fmt::format("flow lambda must be positive, got {}", lambda));
  }
  if (pyramid_levels < 1) throw ConfigError("flow pyramid_levels must be at least 1");
  if (!(pyramid_spacing > 1.0) || !std::isfinite(pyramid_spacing)) {
    throw ConfigError(fmt::format("flow pyramid_spacing must exceed 1, got {}", pyramid_spacing));
  }
  if (iterations_per_level < 1) throw ConfigError("flow iterations_per_level must be at least 1");
  if (warps_per_level < 1) throw ConfigError("flow warps_per_level must be at least 1");
}

GridImage resize_bilinear(const GridImage& img, std::size_t width, std::size_t height) {
  if (img.empty() || width == 0 || height == 0) {
    throw std::invalid_argument("resize_bilinear: empty image or target size");
  }
  GridImage out(width, height);
  for (std::size_t j = 0; j < height; ++j) {
    double y = map_center(j, img.height(), height);
    for (std::size_t i = 0; i < width; ++i) {
      Sampler s = sampler_at(img.width(), img.height(), map_center(i, img.width(), width), y);
      out(i, j) = sample(img.data(), img.width(), s);
    }
  }
  return out;
}

FlowField resize_flow(const FlowField& flow, std::size_t width, std::size_t height) {
  const double sx = static_cast<double>(width) / static_cast<double>(flow.width());
  const double sy = static_cast<double>(height) / static_cast<double>(flow.height());
  FlowField out(width, height);
  for (std::size_t j = 0; j < height; ++j) {
    double y = map_center(j, flow.height(), height);
    for (std::size_t i = 0; i < width; ++i) {
      Sampler s = sampler_at(flow.width(), flow.height(), map_center(i, flow.width(), width), y);
      out.u(i, j) = sx * sample(flow.u_data(), flow.width(), s);
      out.v(i, j) = sy * sample(flow.v_data(), flow.width(), s);
    }
  }
  return out;
}

std::vector<GridImage> build_pyramid(const GridImage& img, std::size_t levels, double spacing) {
  if (levels < 1) throw std::invalid_argument("build_pyramid: levels must be at least 1");
  if (!(spacing > 1.0)) throw std::invalid_argument("build_pyramid: spacing must exceed 1");
  std::vector<GridImage> pyramid;
  pyramid.reserve(levels);
  pyramid.push_back(img);
  for (std::size_t k = 1; k < levels; ++k) {
    const GridImage& fine = pyramid.back();
    GridImage smooth =
        convolve_neumann(fine, pyramid_kernel(spacing, fine.width(), fine.height()));
    pyramid.push_back(resize_bilinear(smooth, level_size(fine.width(), spacing),
                                      level_size(fine.height(), spacing)));
  }
  return pyramid;
}

FlowField horn_schunck(const GridImage& prev, const GridImage& next, const FlowParams& params,
                       HornSchunckReport* report) {
  require_same_shape(prev, next, "horn_schunck");
  params.validate();
  if (prev.empty()) throw std::invalid_argument("horn_schunck: empty images");
  if (!all_finite(prev) || !all_finite(next)) {
    throw std::invalid_argument("horn_schunck: images contain non-finite values");
  }

  // Rescale both frames jointly to [0, 1] so lambda does not depend on units.
  double lo = std::min(min_value(prev), min_value(next));
  double hi = std::max(max_value(prev), max_value(next));
  double scale = hi > lo ? 1.0 / (hi - lo) : 1.0;
  GridImage ref = normalized(prev, lo, scale);
  GridImage mov = normalized(next, lo, scale);

  std::size_t levels = params.pyramid_levels;
  {
    std::size_t w = prev.width(), h = prev.height();
    std::size_t usable = 1;
    for (std::size_t k = 1; k < levels; ++k) {
      w = level_size(w, params.pyramid_spacing);
      h = level_size(h, params.pyramid_spacing);
      if (w < kMinPyramidSide || h < kMinPyramidSide) break;
      ++usable;
    }
    if (usable < levels && report) {
      report->warnings.add(fmt::format(
          "horn_schunck: pyramid reduced from {} to {} levels (coarsest side below {})", levels,
          usable, kMinPyramidSide));
    }
    levels = usable;
  }
  if (report) report->levels_used = levels;

  auto ref_pyr = build_pyramid(ref, levels, params.pyramid_spacing);
  auto mov_pyr = build_pyramid(mov, levels, params.pyramid_spacing);

  FlowField flow(ref_pyr.back().width(), ref_pyr.back().height());
  for (std::size_t level = levels; level-- > 0;) {
    const GridImage& r = ref_pyr[level];
    const GridImage& m = mov_pyr[level];
    if (flow.width() != r.width() || flow.height() != r.height()) {
      flow = resize_flow(flow, r.width(), r.height());
    }
    for (std::size_t warp = 0; warp < params.warps_per_level; ++warp) {
      Linearization lin = linearize(r, m, flow);
      std::vector<double>* trace = nullptr;
      if (report && report->record_energy) {
        report->energy.emplace_back();
        trace = &report->energy.back();
        trace->push_back(stage_energy(lin, flow, params.lambda));
      }
      for (std::size_t it = 0; it < params.iterations_per_level; ++it) {
        sweep(lin, flow, params.lambda);
        if (trace) trace->push_back(stage_energy(lin, flow, params.lambda));
      }
    }
  }
  return flow;
}

FlowField compose_flows(const FlowField& f_ab, const FlowField& f_bc) {
  if (f_ab.width() != f_bc.width() || f_ab.height() != f_bc.height()) {
    throw std::invalid_argument("compose_flows: flow dimensions differ");
  }
  const std::size_t w = f_bc.width(), h = f_bc.height();
  FlowField out(w, h);
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      double du = f_bc.u(i, j), dv = f_bc.v(i, j);
      Sampler s = sampler_at(w, h, static_cast<double>(i) + du, static_cast<double>(j) + dv);
      out.u(i, j) = du + sample(f_ab.u_data(), w, s);
      out.v(i, j) = dv + sample(f_ab.v_data(), w, s);
    }
  }
  return out;
}

}  // namespace meshsrr
