#include "meshsrr/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "meshsrr/parallel.hpp"

namespace meshsrr {

namespace {

// Whole-sample symmetric index: -1 -> 0, -2 -> 1, n -> n-1, n+1 -> n-2.
std::size_t reflect(long k, long n) {
  while (k < 0 || k >= n) {
    if (k < 0) k = -k - 1;
    if (k >= n) k = 2 * n - 1 - k;
  }
  return static_cast<std::size_t>(k);
}

// table[p] = reflect(p - r) for p in [0, n + 2r)
std::vector<std::size_t> reflect_table(std::size_t n, std::size_t r) {
  std::vector<std::size_t> table(n + 2 * r);
  for (std::size_t p = 0; p < table.size(); ++p) {
    table[p] = reflect(static_cast<long>(p) - static_cast<long>(r), static_cast<long>(n));
  }
  return table;
}

void check_kernel_fits(const GridImage& img, const Kernel& k, const char* what) {
  std::size_t limit = 2 * std::min(img.width(), img.height());
  if (img.empty() || k.size() + 1 > limit) {
    throw std::invalid_argument(fmt::format("{}: {}x{} kernel does not fit a {}x{} image", what,
                                            k.size(), k.size(), img.width(), img.height()));
  }
}

GridImage correlate_rows(const GridImage& img, std::span<const double> g) {
  const std::size_t w = img.width(), h = img.height(), r = g.size() / 2;
  const auto table = reflect_table(w, r);
  GridImage out(w, h);
  parallel_rows(h, w * g.size(), [&](std::size_t j0, std::size_t j1) {
    std::vector<double> padded(w + 2 * r);
    for (std::size_t j = j0; j < j1; ++j) {
      for (std::size_t p = 0; p < padded.size(); ++p) padded[p] = img(table[p], j);
      for (std::size_t i = 0; i < w; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) s += g[k] * padded[i + k];
        out(i, j) = s;
      }
    }
  });
  return out;
}

GridImage correlate_cols(const GridImage& img, std::span<const double> g) {
  const std::size_t w = img.width(), h = img.height(), r = g.size() / 2;
  const auto table = reflect_table(h, r);
  GridImage out(w, h);
  parallel_rows(h, w * g.size(), [&](std::size_t j0, std::size_t j1) {
    for (std::size_t j = j0; j < j1; ++j) {
      double* dst = &out(0, j);
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double* src = img.values().data() + table[j + k] * w;
        const double gk = g[k];
        for (std::size_t i = 0; i < w; ++i) dst[i] += gk * src[i];
      }
    }
  });
  return out;
}

GridImage scatter_rows(const GridImage& img, std::span<const double> g) {
  const std::size_t w = img.width(), h = img.height(), r = g.size() / 2;
  const auto table = reflect_table(w, r);
  GridImage out(w, h);
  std::vector<double> buf(w + 2 * r);
  for (std::size_t j = 0; j < h; ++j) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (std::size_t i = 0; i < w; ++i) {
      const double y = img(i, j);
      for (std::size_t k = 0; k < g.size(); ++k) buf[i + k] += g[k] * y;
    }
    for (std::size_t p = 0; p < buf.size(); ++p) out(table[p], j) += buf[p];
  }
  return out;
}

GridImage scatter_cols(const GridImage& img, std::span<const double> g) {
  const std::size_t w = img.width(), h = img.height(), r = g.size() / 2;
  const auto table = reflect_table(h, r);
  GridImage out(w, h);
  for (std::size_t j = 0; j < h; ++j) {
    const double* src = img.values().data() + j * w;
    for (std::size_t k = 0; k < g.size(); ++k) {
      double* dst = &out(0, table[j + k]);
      const double gk = g[k];
      for (std::size_t i = 0; i < w; ++i) dst[i] += gk * src[i];
    }
  }
  return out;
}

GridImage correlate_direct(const GridImage& img, const Kernel& k) {
  const std::size_t w = img.width(), h = img.height(), n = k.size(), r = k.radius();
  const auto tx = reflect_table(w, r);
  const auto ty = reflect_table(h, r);
  GridImage out(w, h);
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      double s = 0.0;
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t a = 0; a < n; ++a) s += k.tap(a, b) * img(tx[i + a], ty[j + b]);
      }
      out(i, j) = s;
    }
  }
  return out;
}

GridImage scatter_direct(const GridImage& img, const Kernel& k) {
  const std::size_t w = img.width(), h = img.height(), n = k.size(), r = k.radius();
  const auto tx = reflect_table(w, r);
  const auto ty = reflect_table(h, r);
  GridImage out(w, h);
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      const double y = img(i, j);
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t a = 0; a < n; ++a) out(tx[i + a], ty[j + b]) += k.tap(a, b) * y;
      }
    }
  }
  return out;
}

struct BilinearTap {
  std::size_t index[4];
  double weight[4];
};

BilinearTap bilinear_tap(std::size_t w, std::size_t h, double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(w - 1));
  y = std::clamp(y, 0.0, static_cast<double>(h - 1));
  auto x0 = static_cast<std::size_t>(std::floor(x));
  auto y0 = static_cast<std::size_t>(std::floor(y));
  std::size_t x1 = std::min(x0 + 1, w - 1);
  std::size_t y1 = std::min(y0 + 1, h - 1);
  double fx = x - static_cast<double>(x0);
  double fy = y - static_cast<double>(y0);
  return {{y0 * w + x0, y0 * w + x1, y1 * w + x0, y1 * w + x1},
          {(1.0 - fx) * (1.0 - fy), fx * (1.0 - fy), (1.0 - fx) * fy, fx * fy}};
}

void check_flow(const GridImage& img, const FlowField& flow, const char* what) {
  if (img.width() != flow.width() || img.height() != flow.height()) {
    throw std::invalid_argument(fmt::format("{}: flow is {}x{} but the image is {}x{}", what,
                                            flow.width(), flow.height(), img.width(),
                                            img.height()));
  }
}

}  // namespace

GridImage convolve_neumann(const GridImage& img, const Kernel& k) {
  check_kernel_fits(img, k, "convolve_neumann");
  if (const auto& g = k.separable_factor()) return correlate_cols(correlate_rows(img, *g), *g);
  return correlate_direct(img, k);
}

GridImage blur_adjoint(const GridImage& img, const Kernel& k) {
  check_kernel_fits(img, k, "blur_adjoint");
  if (const auto& g = k.separable_factor()) return scatter_rows(scatter_cols(img, *g), *g);
  return scatter_direct(img, k);
}

GridImage laplacian_apply(const GridImage& img) {
  const std::size_t w = img.width(), h = img.height();
  if (w < 3 || h < 3) {
    throw std::invalid_argument(
        fmt::format("laplacian_apply: image must be at least 3x3, got {}x{}", w, h));
  }
  GridImage out(w, h);
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      double neighbours = 0.0;
      int n = 0;
      if (i > 0) neighbours += img(i - 1, j), ++n;
      if (i + 1 < w) neighbours += img(i + 1, j), ++n;
      if (j > 0) neighbours += img(i, j - 1), ++n;
      if (j + 1 < h) neighbours += img(i, j + 1), ++n;
      out(i, j) = n * img(i, j) - neighbours;
    }
  }
  return out;
}

GridImage warp_image(const GridImage& img, const FlowField& flow) {
  check_flow(img, flow, "warp_image");
  const std::size_t w = img.width(), h = img.height();
  GridImage out(w, h);
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      BilinearTap t = bilinear_tap(w, h, static_cast<double>(i) + flow.u(i, j),
                                   static_cast<double>(j) + flow.v(i, j));
      out(i, j) = t.weight[0] * img[t.index[0]] + t.weight[1] * img[t.index[1]] +
                  t.weight[2] * img[t.index[2]] + t.weight[3] * img[t.index[3]];
    }
  }
  return out;
}

GridImage warp_adjoint(const GridImage& img, const FlowField& flow) {
  check_flow(img, flow, "warp_adjoint");
  const std::size_t w = img.width(), h = img.height();
  GridImage out(w, h);
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      BilinearTap t = bilinear_tap(w, h, static_cast<double>(i) + flow.u(i, j),
                                   static_cast<double>(j) + flow.v(i, j));
      const double y = img(i, j);
      for (int c = 0; c < 4; ++c) out[t.index[c]] += t.weight[c] * y;
    }
  }
  return out;
}

GridImage forward_observe(const GridImage& x, const PixelAssignment& assignment, const Kernel& k) {
  return apply_hd(convolve_neumann(x, k), assignment);
}

GridImage adjoint_observe(const GridImage& r, const PixelAssignment& assignment, const Kernel& k) {
  return blur_adjoint(apply_hd(r, assignment), k);
}

LinearOp make_blur_op(Kernel k) {
  auto desc = fmt::format("H_B gaussian {}x{}", k.size(), k.size());
  return {[k](const GridImage& x) { return convolve_neumann(x, k); },
          [k](const GridImage& y) { return blur_adjoint(y, k); }, std::move(desc)};
}

LinearOp make_hd_op(PixelAssignment assignment) {
  auto desc = fmt::format("H_D over {} elements", assignment.element_count());
  auto shared = std::make_shared<const PixelAssignment>(std::move(assignment));
  return {[shared](const GridImage& x) { return apply_hd(x, *shared); },
          [shared](const GridImage& y) { return apply_hd(y, *shared); }, std::move(desc)};
}

LinearOp make_laplacian_op() {
  return {[](const GridImage& x) { return laplacian_apply(x); },
          [](const GridImage& y) { return laplacian_apply(y); }, "S 5-point laplacian"};
}

LinearOp make_warp_op(FlowField flow) {
  auto shared = std::make_shared<const FlowField>(std::move(flow));
  return {[shared](const GridImage& x) { return warp_image(x, *shared); },
          [shared](const GridImage& y) { return warp_adjoint(y, *shared); }, "G bilinear warp"};
}

LinearOp make_observe_op(PixelAssignment assignment, Kernel k) {
  auto desc = fmt::format("H_D H_B ({} elements, {}x{} kernel)", assignment.element_count(),
                          k.size(), k.size());
  auto shared = std::make_shared<const PixelAssignment>(std::move(assignment));
  return {[shared, k](const GridImage& x) { return forward_observe(x, *shared, k); },
          [shared, k](const GridImage& y) { return adjoint_observe(y, *shared, k); },
          std::move(desc)};
}

}  // namespace meshsrr
