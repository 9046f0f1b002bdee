#include <cmath>
#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "meshsrr/error.hpp"
#include "meshsrr/operators.hpp"
#include "meshsrr/phantoms.hpp"
#include "meshsrr/srr.hpp"
#include "oracles.hpp"

using namespace meshsrr;

namespace {

constexpr std::size_t kN = 16;

struct Problem {
  PixelAssignment asg;
  Kernel kernel;
  SrrConfig cfg;
};

Problem make_setup(double alpha, std::size_t k_iters = 20) {
  auto mesh = std::make_shared<const FemMesh>(disc_mesh_rings(3));
  Problem s{build_pixel_assignment(mesh, kN, kN), gaussian_kernel(5, 1.2), {}};
  s.cfg.mu = 0.01;
  s.cfg.k_iters = k_iters;
  s.cfg.alpha = alpha;
  s.cfg.width = kN;
  s.cfg.height = kN;
  s.cfg.kernel = s.kernel;
  return s;
}

std::vector<double> taps_of(const Kernel& k) { return {k.taps().begin(), k.taps().end()}; }

// A = H_D B and R = S^T S as dense matrices from the oracle constructions.
struct DenseModel {
  oracle::Dense a;
  oracle::Dense r;
  std::vector<double> inside;
};

DenseModel dense_model(const Problem& s) {
  oracle::Dense hd = oracle::hd_matrix(*s.asg.mesh(), kN, kN);
  oracle::Dense b = oracle::blur_matrix(taps_of(s.kernel), s.kernel.size(), kN, kN);
  oracle::Dense l = oracle::laplacian_matrix(kN, kN);
  std::vector<long> owner = oracle::brute_owner(*s.asg.mesh(), kN, kN);
  std::vector<double> inside(owner.size());
  for (std::size_t p = 0; p < owner.size(); ++p) inside[p] = owner[p] >= 0 ? 1.0 : 0.0;
  return {hd.multiply(b), l.transpose().multiply(l), inside};
}

std::vector<double> to_vec(const GridImage& g) { return g.data(); }

}  // namespace

TEST(SrrCost, AtZeroIsObservationEnergyOverAssignedPixels) {
  Problem s = make_setup(0.5);
  std::mt19937_64 rng(3);
  GridImage y = oracle::random_image(kN, kN, rng);
  double expected = 0.0;
  for (std::size_t p = 0; p < y.size(); ++p) {
    if (!s.asg.is_outside(p)) expected += y[p] * y[p];
  }
  EXPECT_NEAR(srr_cost(GridImage(kN, kN), y, s.asg, s.kernel, 0.5), expected, 1e-12 * expected);
}

TEST(SrrGradient, ConsistentObservationIsAFixedPointWithoutRegularization) {
  Problem s = make_setup(0.0);
  std::mt19937_64 rng(4);
  GridImage x = oracle::random_image(kN, kN, rng);
  GridImage y = forward_observe(x, s.asg, s.kernel);
  EXPECT_LE(srr_cost(x, y, s.asg, s.kernel, 0.0), 1e-24);
  GridImage g = srr_gradient(x, y, s.asg, s.kernel, 0.0);
  EXPECT_LE(norm(g), 1e-12);
}

TEST(SrrGradient, MatchesDenseFormula) {
  Problem s = make_setup(0.3);
  DenseModel m = dense_model(s);
  std::mt19937_64 rng(5);
  GridImage x = oracle::random_image(kN, kN, rng);
  GridImage y = oracle::random_image(kN, kN, rng);
  std::vector<double> r = m.a.apply(to_vec(x));
  for (std::size_t p = 0; p < r.size(); ++p) r[p] -= m.inside[p] * y[p];
  std::vector<double> g = m.a.transpose().apply(r);
  std::vector<double> reg = m.r.apply(to_vec(x));
  GridImage got = srr_gradient(x, y, s.asg, s.kernel, 0.3);
  for (std::size_t p = 0; p < g.size(); ++p) EXPECT_NEAR(got[p], 2.0 * (g[p] + 0.3 * reg[p]), 1e-11);
}

TEST(SrrStep, MatchesDenseGradientDescent) {
  Problem s = make_setup(0.01, 25);
  DenseModel m = dense_model(s);
  std::mt19937_64 rng(6);
  GridImage x_hat = oracle::random_image(kN, kN, rng);
  GridImage y = oracle::random_image(kN, kN, rng);
  FlowField flow = oracle::random_flow(kN, kN, 1.5, rng);
  oracle::Dense w = oracle::warp_matrix(flow);
  oracle::Dense at = m.a.transpose();

  std::vector<double> x = w.apply(to_vec(x_hat));
  for (std::size_t p = 0; p < x.size(); ++p) x[p] *= m.inside[p];
  for (std::size_t k = 0; k < s.cfg.k_iters; ++k) {
    std::vector<double> r = m.a.apply(x);
    for (std::size_t p = 0; p < r.size(); ++p) r[p] -= m.inside[p] * y[p];
    std::vector<double> g = at.apply(r);
    std::vector<double> reg = m.r.apply(x);
    for (std::size_t p = 0; p < x.size(); ++p) {
      x[p] = m.inside[p] * (x[p] - s.cfg.mu * (g[p] + s.cfg.alpha * reg[p]));
    }
  }

  SrrStepTrace trace;
  SrrState out = srr_step(SrrState{x_hat, 0, 0.0}, y, flow, s.asg, s.cfg, &trace);
  double scale = 0.0, err = 0.0;
  for (std::size_t p = 0; p < x.size(); ++p) {
    scale = std::max(scale, std::abs(x[p]));
    err = std::max(err, std::abs(out.x_hat[p] - x[p]));
  }
  EXPECT_LE(err, 1e-8 * scale);
  EXPECT_EQ(out.frame_index, 1u);
  ASSERT_EQ(trace.cost.size(), s.cfg.k_iters + 1);
  for (std::size_t k = 1; k < trace.cost.size(); ++k) EXPECT_LE(trace.cost[k], trace.cost[k - 1]);
  EXPECT_DOUBLE_EQ(trace.cost.back(), out.last_cost);
}

TEST(SrrStep, DivergenceRaisesNumericalError) {
  Problem s = make_setup(1.0);
  s.cfg.mu = 5.0;
  std::mt19937_64 rng(7);
  GridImage y = oracle::random_image(kN, kN, rng);
  SrrState st = srr_init(y, s.cfg);
  EXPECT_THROW(srr_step(st, y, FlowField(kN, kN), s.asg, s.cfg), NumericalError);
}

TEST(SrrStep, RejectsMismatchedInputs) {
  Problem s = make_setup(1.0);
  SrrState st{GridImage(kN, kN), 0, 0.0};
  EXPECT_THROW(srr_step(st, GridImage(kN + 1, kN), FlowField(kN, kN), s.asg, s.cfg), std::invalid_argument);
  SrrConfig bad = s.cfg;
  bad.mu = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Lipschitz, RayleighQuotientBelowDenseLargestEigenvalue) {
  Problem s = make_setup(1.0);
  DenseModel m = dense_model(s);
  oracle::Dense h = m.a.transpose().multiply(m.a);
  for (std::size_t k = 0; k < h.a.size(); ++k) h.a[k] += m.r.a[k];
  std::vector<double> v(h.cols, 1.0);
  double lambda = 0.0;
  for (int it = 0; it < 3000; ++it) {
    std::vector<double> hv = h.apply(v);
    double n = 0.0;
    for (double t : hv) n += t * t;
    n = std::sqrt(n);
    for (std::size_t p = 0; p < v.size(); ++p) v[p] = hv[p] / n;
    lambda = n;
  }
  double est = estimate_lipschitz(s.asg, s.kernel, 1.0);
  EXPECT_LE(est, lambda * (1.0 + 1e-10));
  EXPECT_GE(est, 0.95 * lambda);
}

TEST(RunSequence, SingleFrameAndLengthChecks) {
  Problem s = make_setup(0.1, 5);
  std::mt19937_64 rng(8);
  GridImage y = oracle::random_image(kN, kN, rng);
  SequenceTrace trace;
  auto out = run_sequence_upsampled({y}, {FlowField(kN, kN)}, s.asg, s.cfg, &trace);
  ASSERT_EQ(out.size(), 1u);
  ASSERT_EQ(trace.steps.size(), 1u);
  SrrState direct = srr_step(srr_init(y, s.cfg), y, FlowField(kN, kN), s.asg, s.cfg);
  EXPECT_EQ(out[0], direct.x_hat);
  EXPECT_THROW(run_sequence_upsampled({y, y}, {FlowField(kN, kN)}, s.asg, s.cfg), std::invalid_argument);
  EXPECT_THROW(run_sequence_upsampled({}, {}, s.asg, s.cfg), std::invalid_argument);
}

TEST(EstimateSequenceFlows, FirstFlowIsZero) {
  std::vector<GridImage> frames(3, GridImage(kN, kN, 1.0));
  auto flows = estimate_sequence_flows(frames, FlowParams{});
  ASSERT_EQ(flows.size(), 3u);
  for (const auto& f : flows) EXPECT_EQ(f.max_magnitude(), 0.0);
}
