#include "meshsrr/flow_field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "meshsrr/error.hpp"

namespace meshsrr {

FlowField::FlowField(std::size_t width, std::size_t height)
    : width_(width), height_(height), u_(width * height, 0.0), v_(width * height, 0.0) {}

FlowField::FlowField(std::size_t width, std::size_t height, std::vector<double> u,
                     std::vector<double> v)
    : width_(width), height_(height), u_(std::move(u)), v_(std::move(v)) {
  if (u_.size() != width * height || v_.size() != width * height) {
    throw std::invalid_argument(
        fmt::format("FlowField: component lengths do not match {}x{}", width, height));
  }
}

FlowField FlowField::constant(std::size_t width, std::size_t height, double u, double v) {
  return FlowField(width, height, std::vector<double>(width * height, u),
                   std::vector<double>(width * height, v));
}

bool FlowField::all_finite() const {
  auto finite = [](double x) { return std::isfinite(x); };
  return std::all_of(u_.begin(), u_.end(), finite) && std::all_of(v_.begin(), v_.end(), finite);
}

double FlowField::max_magnitude() const {
  double m = 0.0;
  for (std::size_t k = 0; k < u_.size(); ++k) m = std::max(m, std::hypot(u_[k], v_[k]));
  return m;
}

void write_flow(std::ostream& out, const FlowField& flow) {
  out << "FLOW 1\n" << flow.width() << ' ' << flow.height() << '\n';
  for (std::size_t k = 0; k < flow.size(); ++k) {
    out << fmt::format("{} {}\n", flow.u_data()[k], flow.v_data()[k]);
  }
}

FlowField read_flow(std::istream& in) {
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "FLOW" || version != 1) {
    throw IoError("expected 'FLOW 1' header");
  }
  std::size_t w = 0, h = 0;
  if (!(in >> w >> h)) throw IoError("flow: missing dimensions");
  std::vector<double> u(w * h), v(w * h);
  for (std::size_t k = 0; k < w * h; ++k) {
    if (!(in >> u[k] >> v[k])) throw IoError(fmt::format("flow: bad line for pixel {}", k));
  }
  return FlowField(w, h, std::move(u), std::move(v));
}

void save_flow(const std::filesystem::path& path, const FlowField& flow) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  write_flow(out, flow);
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

FlowField load_flow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  return read_flow(in);
}

}  // namespace meshsrr
