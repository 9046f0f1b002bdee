#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

std::vector<double> Dense::apply(const std::vector<double>& x) const {
  if (x.size() != cols) throw std::invalid_argument("Dense::apply: size mismatch");
  std::vector<double> y(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols; ++c) s += at(r, c) * x[c];
    y[r] = s;
  }
  return y;
}

Dense Dense::transpose() const {
  Dense t(cols, rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
  }
  return t;
}

Dense Dense::multiply(const Dense& b) const {
  if (cols != b.rows) throw std::invalid_argument("Dense::multiply: size mismatch");
  Dense out(rows, b.cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < cols; ++k) {
      double v = at(r, k);
      if (v == 0.0) continue;
      for (std::size_t c = 0; c < b.cols; ++c) out.at(r, c) += v * b.at(k, c);
    }
  }
  return out;
}

double max_abs_diff(const Dense& a, const Dense& b) {
  if (a.rows != b.rows || a.cols != b.cols) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t k = 0; k < a.a.size(); ++k) m = std::max(m, std::abs(a.a[k] - b.a[k]));
  return m;
}

GridImage from_vector(std::size_t w, std::size_t h, const std::vector<double>& v) {
  return GridImage(w, h, v);
}

Dense probe(const std::function<GridImage(const GridImage&)>& op, std::size_t w, std::size_t h) {
  const std::size_t n = w * h;
  Dense m(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    GridImage e(w, h);
    e[c] = 1.0;
    GridImage col = op(e);
    for (std::size_t r = 0; r < n; ++r) m.at(r, c) = col[r];
  }
  return m;
}

namespace {

double center(std::size_t k, std::size_t n) {
  return -1.0 + (static_cast<double>(k) + 0.5) * 2.0 / static_cast<double>(n);
}

// Closed triangle test on edge cross products, either orientation.
bool in_triangle(const meshsrr::Point2& a, const meshsrr::Point2& b, const meshsrr::Point2& c,
                 double px, double py) {
  const double tol = 1e-12;
  double d1 = (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
  double d2 = (c.x - b.x) * (py - b.y) - (c.y - b.y) * (px - b.x);
  double d3 = (a.x - c.x) * (py - c.y) - (a.y - c.y) * (px - c.x);
  bool has_neg = d1 < -tol || d2 < -tol || d3 < -tol;
  bool has_pos = d1 > tol || d2 > tol || d3 > tol;
  return !(has_neg && has_pos);
}

long reflect_index(long p, long n) {
  if (p < 0) return -p - 1;
  if (p >= n) return 2 * n - 1 - p;
  return p;
}

}  // namespace

std::vector<long> brute_owner(const FemMesh& mesh, std::size_t w, std::size_t h) {
  std::vector<long> owner(w * h, -1);
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        if (in_triangle(mesh.vertex(e, 0), mesh.vertex(e, 1), mesh.vertex(e, 2), center(i, w),
                        center(j, h))) {
          owner[j * w + i] = static_cast<long>(e);
          break;
        }
      }
    }
  }
  return owner;
}

Dense hd_matrix(const FemMesh& mesh, std::size_t w, std::size_t h) {
  auto owner = brute_owner(mesh, w, h);
  std::vector<double> count(mesh.element_count(), 0.0);
  for (long o : owner) {
    if (o >= 0) count[static_cast<std::size_t>(o)] += 1.0;
  }
  Dense m(w * h, w * h);
  for (std::size_t r = 0; r < w * h; ++r) {
    if (owner[r] < 0) continue;
    for (std::size_t c = 0; c < w * h; ++c) {
      if (owner[c] == owner[r]) m.at(r, c) = 1.0 / count[static_cast<std::size_t>(owner[r])];
    }
  }
  return m;
}

Dense blur_matrix(const std::vector<double>& taps, std::size_t size, std::size_t w, std::size_t h) {
  const long r = static_cast<long>(size / 2);
  Dense m(w * h, w * h);
  for (long j = 0; j < static_cast<long>(h); ++j) {
    for (long i = 0; i < static_cast<long>(w); ++i) {
      for (long b = 0; b < static_cast<long>(size); ++b) {
        for (long a = 0; a < static_cast<long>(size); ++a) {
          long si = reflect_index(i + a - r, static_cast<long>(w));
          long sj = reflect_index(j + b - r, static_cast<long>(h));
          m.at(static_cast<std::size_t>(j) * w + static_cast<std::size_t>(i),
               static_cast<std::size_t>(sj) * w + static_cast<std::size_t>(si)) +=
              taps[static_cast<std::size_t>(b) * size + static_cast<std::size_t>(a)];
        }
      }
    }
  }
  return m;
}

Dense laplacian_matrix(std::size_t w, std::size_t h) {
  Dense m(w * h, w * h);
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      std::size_t p = j * w + i;
      auto link = [&](std::size_t q) {
        m.at(p, p) += 1.0;
        m.at(p, q) -= 1.0;
      };
      if (i > 0) link(p - 1);
      if (i + 1 < w) link(p + 1);
      if (j > 0) link(p - w);
      if (j + 1 < h) link(p + w);
    }
  }
  return m;
}

Dense warp_matrix(const FlowField& flow) {
  const std::size_t w = flow.width(), h = flow.height();
  Dense m(w * h, w * h);
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      double x = std::min(std::max(static_cast<double>(i) + flow.u(i, j), 0.0), static_cast<double>(w - 1));
      double y = std::min(std::max(static_cast<double>(j) + flow.v(i, j), 0.0), static_cast<double>(h - 1));
      double fx0 = std::floor(x), fy0 = std::floor(y);
      std::size_t x0 = static_cast<std::size_t>(fx0), y0 = static_cast<std::size_t>(fy0);
      std::size_t x1 = x0 + 1 < w ? x0 + 1 : x0;
      std::size_t y1 = y0 + 1 < h ? y0 + 1 : y0;
      double tx = x - fx0, ty = y - fy0;
      std::size_t p = j * w + i;
      m.at(p, y0 * w + x0) += (1.0 - tx) * (1.0 - ty);
      m.at(p, y0 * w + x1) += tx * (1.0 - ty);
      m.at(p, y1 * w + x0) += (1.0 - tx) * ty;
      m.at(p, y1 * w + x1) += tx * ty;
    }
  }
  return m;
}

FemMesh jittered_square_mesh(std::size_t n, double jitter, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-jitter, jitter);
  const double step = 2.0 / static_cast<double>(n);
  std::vector<meshsrr::Point2> nodes;
  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t i = 0; i <= n; ++i) {
      double x = -1.0 + static_cast<double>(i) * step;
      double y = -1.0 + static_cast<double>(j) * step;
      if (i > 0 && i < n) x += u(rng) * step;
      if (j > 0 && j < n) y += u(rng) * step;
      nodes.push_back({x, y});
    }
  }
  std::vector<meshsrr::Element> elements;
  auto id = [n](std::size_t i, std::size_t j) { return j * (n + 1) + i; };
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      elements.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return FemMesh(std::move(nodes), std::move(elements));
}

GridImage random_image(std::size_t w, std::size_t h, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  GridImage img(w, h);
  for (double& v : img.values()) v = g(rng);
  return img;
}

FlowField random_flow(std::size_t w, std::size_t h, double amplitude, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  FlowField f(w, h);
  for (double& v : f.u_data()) v = u(rng);
  for (double& v : f.v_data()) v = u(rng);
  return f;
}

Mask random_mask(std::size_t w, std::size_t h, std::mt19937_64& rng) {
  Mask m{w, h, std::vector<std::uint8_t>(w * h, 0)};
  std::uniform_int_distribution<int> style(0, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (style(rng)) {
    case 0: {  // salt and pepper
      double density = 0.05 + 0.6 * u(rng);
      for (auto& b : m.bits) b = u(rng) < density ? 1 : 0;
      break;
    }
    case 1: {  // union of discs
      int blobs = 1 + static_cast<int>(u(rng) * 4);
      for (int k = 0; k < blobs; ++k) {
        double cx = u(rng) * static_cast<double>(w), cy = u(rng) * static_cast<double>(h);
        double r = 1.0 + u(rng) * static_cast<double>(std::max(w, h)) / 3.0;
        for (std::size_t j = 0; j < h; ++j) {
          for (std::size_t i = 0; i < w; ++i) {
            double dx = static_cast<double>(i) + 0.5 - cx, dy = static_cast<double>(j) + 0.5 - cy;
            if (dx * dx + dy * dy <= r * r) m.bits[j * w + i] = 1;
          }
        }
      }
      break;
    }
    default: {  // rectangle with holes
      std::size_t x0 = static_cast<std::size_t>(u(rng) * static_cast<double>(w));
      std::size_t y0 = static_cast<std::size_t>(u(rng) * static_cast<double>(h));
      std::size_t x1 = x0 + static_cast<std::size_t>(u(rng) * static_cast<double>(w - x0));
      std::size_t y1 = y0 + static_cast<std::size_t>(u(rng) * static_cast<double>(h - y0));
      for (std::size_t j = y0; j <= std::min(y1, h - 1); ++j) {
        for (std::size_t i = x0; i <= std::min(x1, w - 1); ++i) m.bits[j * w + i] = u(rng) < 0.9 ? 1 : 0;
      }
      break;
    }
  }
  if (std::none_of(m.bits.begin(), m.bits.end(), [](auto b) { return b != 0; })) {
    std::uniform_int_distribution<std::size_t> any(0, w * h - 1);
    m.bits[any(rng)] = 1;
  }
  return m;
}

std::vector<Pixel> boundary_pixels(const Mask& m) {
  const long w = static_cast<long>(m.w), h = static_cast<long>(m.h);
  std::vector<Pixel> out;
  for (long j = 0; j < h; ++j) {
    for (long i = 0; i < w; ++i) {
      if (!m.get(i, j)) continue;
      bool edge = false;
      const long di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
      for (int k = 0; k < 4; ++k) {
        long ni = i + di[k], nj = j + dj[k];
        if (ni < 0 || nj < 0 || ni >= w || nj >= h || !m.get(ni, nj)) edge = true;
      }
      if (edge) out.push_back({i, j});
    }
  }
  return out;
}

namespace {

// Squared distance from p to the nearest point of `set`, both in pixel
// indices, converted with the pitch before squaring.
double nearest_squared(const Pixel& p, const std::vector<Pixel>& set, double px, double py) {
  double best = std::numeric_limits<double>::infinity();
  for (const Pixel& q : set) {
    double dx = static_cast<double>(p.i - q.i) * px;
    double dy = static_cast<double>(p.j - q.j) * py;
    best = std::min(best, dx * dx + dy * dy);
  }
  return best;
}

}  // namespace

double brute_hausdorff(const Mask& a, const Mask& b) {
  auto ba = boundary_pixels(a), bb = boundary_pixels(b);
  const double px = 2.0 / static_cast<double>(a.w), py = 2.0 / static_cast<double>(a.h);
  double worst = 0.0;
  for (const auto& p : ba) worst = std::max(worst, nearest_squared(p, bb, px, py));
  for (const auto& q : bb) worst = std::max(worst, nearest_squared(q, ba, px, py));
  return std::sqrt(worst);
}

double brute_masd(const Mask& a, const Mask& b) {
  auto ba = boundary_pixels(a), bb = boundary_pixels(b);
  const double px = 2.0 / static_cast<double>(a.w), py = 2.0 / static_cast<double>(a.h);
  double s_ab = 0.0, s_ba = 0.0;
  for (const auto& p : ba) s_ab += std::sqrt(nearest_squared(p, bb, px, py));
  for (const auto& q : bb) s_ba += std::sqrt(nearest_squared(q, ba, px, py));
  return 0.5 * (s_ab / static_cast<double>(ba.size()) + s_ba / static_cast<double>(bb.size()));
}

GridImage coverage(std::size_t w, std::size_t h, std::size_t s,
                   const std::function<bool(double, double)>& inside) {
  GridImage out(w, h);
  const double dx = 2.0 / static_cast<double>(w), dy = 2.0 / static_cast<double>(h);
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      std::size_t hits = 0;
      for (std::size_t b = 0; b < s; ++b) {
        for (std::size_t a = 0; a < s; ++a) {
          double x = -1.0 + (static_cast<double>(i) + (static_cast<double>(a) + 0.5) / static_cast<double>(s)) * dx;
          double y = -1.0 + (static_cast<double>(j) + (static_cast<double>(b) + 0.5) / static_cast<double>(s)) * dy;
          hits += inside(x, y) ? 1 : 0;
        }
      }
      out(i, j) = static_cast<double>(hits) / static_cast<double>(s * s);
    }
  }
  return out;
}

}  // namespace oracle
