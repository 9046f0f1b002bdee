#include "meshsrr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace meshsrr {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

void check_same(const BinaryMask& a, const BinaryMask& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw std::invalid_argument(fmt::format("{}: mask dimensions differ", what));
  }
}

/// Exact Euclidean distance to a boundary point set, in two separable
/// passes. The column pass stores, per pixel, the row distance to the
/// nearest boundary point in the same column; a query then scans all
/// columns. Squared distances are formed as (di * px)^2 + (dj * py)^2 from
/// integer offsets, so results are identical to an all-pairs search.
class BoundaryDistance {
 public:
  BoundaryDistance(const std::vector<BoundaryPoint>& pts, std::size_t width, std::size_t height)
      : width_(width),
        height_(height),
        px_(2.0 / static_cast<double>(width)),
        py_(2.0 / static_cast<double>(height)),
        column_gap_(width * height, kNone) {
    std::vector<std::uint8_t> on(width * height, 0);
    for (const auto& p : pts) on[p.j * width + p.i] = 1;
    for (std::size_t i = 0; i < width; ++i) {
      std::size_t gap = kNone;
      for (std::size_t j = 0; j < height; ++j) {
        gap = on[j * width + i] ? 0 : (gap == kNone ? kNone : gap + 1);
        column_gap_[j * width + i] = gap;
      }
      gap = kNone;
      for (std::size_t j = height; j-- > 0;) {
        gap = on[j * width + i] ? 0 : (gap == kNone ? kNone : gap + 1);
        column_gap_[j * width + i] = std::min(column_gap_[j * width + i], gap);
      }
    }
  }

  double squared(std::size_t i, std::size_t j) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < width_; ++c) {
      std::size_t gap = column_gap_[j * width_ + c];
      if (gap == kNone) continue;
      double dx = (static_cast<double>(i) - static_cast<double>(c)) * px_;
      double dy = static_cast<double>(gap) * py_;
      best = std::min(best, dx * dx + dy * dy);
    }
    return best;
  }

 private:
  std::size_t width_, height_;
  double px_, py_;
  std::vector<std::size_t> column_gap_;
};

struct Surfaces {
  std::vector<BoundaryPoint> a, b;
};

Surfaces surfaces(const BinaryMask& a, const BinaryMask& b, const char* what) {
  check_same(a, b, what);
  Surfaces s{boundary(a), boundary(b)};
  if (s.a.empty() || s.b.empty()) {
    throw std::invalid_argument(fmt::format("{}: a mask has an empty boundary", what));
  }
  return s;
}

}  // namespace

BinaryMask::BinaryMask(std::size_t width, std::size_t height)
    : width_(width), height_(height), bits_(width * height, 0) {}

BinaryMask::BinaryMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (bits_.size() != width * height) {
    throw std::invalid_argument("BinaryMask: bit count does not match dimensions");
  }
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count_if(bits_.begin(), bits_.end(), [](auto b) { return b != 0; }));
}

Binarized binarize(const GridImage& img, double fraction) {
  Binarized out{BinaryMask(img.width(), img.height()), false};
  if (img.empty()) return out;
  double peak = max_value(img);
  if (!(peak > 0.0)) {
    out.degenerate = true;
    return out;
  }
  const double threshold = fraction * peak;
  for (std::size_t j = 0; j < img.height(); ++j) {
    for (std::size_t i = 0; i < img.width(); ++i) {
      if (img(i, j) >= threshold) out.mask.set(i, j);
    }
  }
  return out;
}

double overlap(const BinaryMask& a, const BinaryMask& b, Warnings* warnings) {
  check_same(a, b, "overlap");
  std::size_t inter = 0, uni = 0;
  for (std::size_t k = 0; k < a.width() * a.height(); ++k) {
    inter += a[k] && b[k];
    uni += a[k] || b[k];
  }
  if (uni == 0) {
    if (warnings) warnings->add("overlap: both masks are empty; reporting 1");
    return 1.0;
  }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<BoundaryPoint> boundary(const BinaryMask& mask) {
  const std::size_t w = mask.width(), h = mask.height();
  std::vector<BoundaryPoint> out;
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      if (!mask.get(i, j)) continue;
      bool edge = i == 0 || j == 0 || i + 1 == w || j + 1 == h || !mask.get(i - 1, j) ||
                  !mask.get(i + 1, j) || !mask.get(i, j - 1) || !mask.get(i, j + 1);
      if (!edge) continue;
      out.push_back({i, j, -1.0 + (static_cast<double>(i) + 0.5) * (2.0 / static_cast<double>(w)),
                     -1.0 + (static_cast<double>(j) + 0.5) * (2.0 / static_cast<double>(h))});
    }
  }
  return out;
}

double hausdorff(const BinaryMask& a, const BinaryMask& b) {
  Surfaces s = surfaces(a, b, "hausdorff");
  BoundaryDistance to_a(s.a, a.width(), a.height());
  BoundaryDistance to_b(s.b, b.width(), b.height());
  double worst = 0.0;
  for (const auto& p : s.a) worst = std::max(worst, to_b.squared(p.i, p.j));
  for (const auto& q : s.b) worst = std::max(worst, to_a.squared(q.i, q.j));
  return std::sqrt(worst);
}

double masd(const BinaryMask& a, const BinaryMask& b) {
  Surfaces s = surfaces(a, b, "masd");
  BoundaryDistance to_a(s.a, a.width(), a.height());
  BoundaryDistance to_b(s.b, b.width(), b.height());
  double sum_ab = 0.0, sum_ba = 0.0;
  for (const auto& p : s.a) sum_ab += std::sqrt(to_b.squared(p.i, p.j));
  for (const auto& q : s.b) sum_ba += std::sqrt(to_a.squared(q.i, q.j));
  double mean_ab = sum_ab / static_cast<double>(s.a.size());
  double mean_ba = sum_ba / static_cast<double>(s.b.size());
  return 0.5 * (mean_ab + mean_ba);
}

FrameMetrics MetricsReport::average() const {
  FrameMetrics avg;
  if (frames.empty()) return avg;
  for (const auto& f : frames) {
    avg.overlap += f.overlap;
    avg.hausdorff += f.hausdorff;
    avg.masd += f.masd;
  }
  const double n = static_cast<double>(frames.size());
  avg.overlap /= n;
  avg.hausdorff /= n;
  avg.masd /= n;
  return avg;
}

std::string MetricsReport::to_csv() const {
  std::string out = "frame,overlap,hausdorff,masd\n";
  for (std::size_t t = 0; t < frames.size(); ++t) {
    out += fmt::format("{},{:.9f},{:.9f},{:.9f}\n", t, frames[t].overlap, frames[t].hausdorff,
                       frames[t].masd);
  }
  FrameMetrics avg = average();
  out += fmt::format("avg,{:.9f},{:.9f},{:.9f}\n", avg.overlap, avg.hausdorff, avg.masd);
  return out;
}

FrameMetrics compare_images(const GridImage& reference, const GridImage& estimate,
                            Warnings* warnings) {
  require_same_shape(reference, estimate, "compare_images");
  Binarized ref = binarize(reference);
  Binarized est = binarize(estimate);
  if (warnings) {
    if (ref.degenerate) warnings->add("compare_images: reference has no positive values");
    if (est.degenerate) warnings->add("compare_images: estimate has no positive values");
  }
  FrameMetrics m;
  m.overlap = overlap(est.mask, ref.mask, warnings);
  m.hausdorff = hausdorff(est.mask, ref.mask);
  m.masd = masd(est.mask, ref.mask);
  return m;
}

}  // namespace meshsrr
