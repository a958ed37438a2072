// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "curveband/cli.hpp"
#include "curveband/curve_model.hpp"
#include "curveband/denoise.hpp"
#include "curveband/experiments.hpp"
#include "curveband/io.hpp"
#include "curveband/lifting.hpp"
#include "curveband/recovery.hpp"
#include "curveband/segmentation.hpp"
#include "test_helpers.hpp"

using namespace curveband;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * double(v.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (pos - double(i)) * (v[i + 1] - v[i]);
}

// 1: small curves from 36 samples, uniform and half-restricted.
Verdict criterion1() {
  int ok = 0, total = 0;
  double worst = 0.0, slowest = 0.0;
  for (bool half : {false, true}) {
    RecoveryTrialConfig cfg;
    cfg.half_restricted = half;
    cfg.single_component = true;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto t0 = Clock::now();
      const TrialOutcome o = recovery_trial(3, 36, seed, cfg);
      slowest = std::max(slowest, seconds_since(t0));
      worst = std::max(worst, o.chamfer);
      ok += o.success ? 1 : 0;
      ++total;
    }
  }
  return {ok == total && slowest < 5.0, std::to_string(ok) + "/" + std::to_string(total) + " recovered, worst chamfer " +
                                            fmt(worst) + ", slowest trial " + fmt(slowest) + " s"};
}

// 2: phase transition over k in {3, 5, 7}.
Verdict criterion2() {
  PhaseTransitionConfig cfg;
  cfg.ks = {3, 5, 7};
  cfg.ns = default_phase_ns(cfg.ks);
  cfg.trials = 10;
  cfg.seed = 2024;
  const auto t0 = Clock::now();
  const auto cells = phase_transition(cfg);
  const double elapsed = seconds_since(t0);
  bool hard = true;
  int hard_cells = 0;
  std::string soft;
  for (const PhaseCell& c : cells) {
    if (c.n > 4 * c.k * c.k) {
      ++hard_cells;
      if (c.frequency() < 1.0) hard = false;
    }
    if (c.n == c.k * c.k + 5) soft += " k=" + std::to_string(c.k) + ":" + fmt(c.frequency());
  }
  return {hard && elapsed < 600.0, std::to_string(hard_cells) + " cells above (2k)^2 " +
                                       (hard ? "all at 1.0" : "NOT all at 1.0") + "; at N=k^2+5" + soft + "; " +
                                       fmt(elapsed) + " s"};
}

struct LargeCase {
  TrigPolynomial truth;
  Polyline curve;
  PointSet samples;
};

LargeCase large_case(std::uint64_t seed) {
  auto truth = random_curve(FrequencySupport(5, 5), seed);
  auto curve = extract_zero_level_set(truth, 2048);
  auto samples = sample_curve(curve, 220, UniformArclength{}, seed);
  return {std::move(truth), std::move(curve), std::move(samples)};
}

// 3: null-space dimension and rank for 5x5 curves seen through 11x11.
Verdict criterion3() {
  int ok = 0;
  std::string seen;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const LargeCase c = large_case(seed);
    const NullspaceBasis b = nullspace_basis(c.samples, FrequencySupport(11, 11), TolerancePolicy::rasterized(2048));
    if (b.dimension() == 49 && b.rank() == 72) ++ok;
    else seen += " seed " + std::to_string(seed) + ": Q=" + std::to_string(b.dimension());
  }
  return {ok == 10, std::to_string(ok) + "/10 seeds with Q=49, rank=72" + seen};
}

// 4: SOS values on and off the curve.
Verdict criterion4() {
  int ok = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const LargeCase c = large_case(seed);
    const SosPolynomial sos =
        sos_polynomial(nullspace_basis(c.samples, FrequencySupport(11, 11), TolerancePolicy::rasterized(2048)));
    std::vector<double> on, off;
    for (std::size_t i = 0; i < c.samples.size(); ++i) on.push_back(sos(c.samples.point2(i)));
    const std::vector<Vec2> verts = c.curve.vertices();
    const Eigen::MatrixXd probes = cbtest::random_points(2000, derive_seed(seed, 4));
    for (Eigen::Index j = 0; j < probes.cols(); ++j) {
      const Vec2 p = probes.col(j);
      if (cbtest::brute_nearest(p, verts) > 0.02) off.push_back(sos(p));
    }
    if (off.empty()) continue;
    const double ratio = quantile(off, 0.5) / std::max(quantile(on, 0.95), 1e-300);
    min_ratio = std::min(min_ratio, ratio);
    if (ratio > 10.0) ++ok;
  }
  return {ok == 10, std::to_string(ok) + "/10 seeds separated, smallest median(off)/p95(on) " + fmt(min_ratio)};
}

// 5: union of two 3x3 curves sampled evenly versus lopsidedly.
Verdict criterion5() {
  const double tol = 3.0 / 256;
  int even_ok = 0, lopsided_fail = 0;
  double sos_lopsided_worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SyntheticCurve a = random_nonempty_curve(FrequencySupport(3, 3), derive_seed(seed, 1), 2048);
    const SyntheticCurve b = random_nonempty_curve(FrequencySupport(3, 3), derive_seed(seed, 2), 2048);
    Polyline both = a.curve;
    both.components.insert(both.components.end(), b.curve.components.begin(), b.curve.components.end());
    auto run = [&](std::size_t na, std::size_t nb, double* sos_chamfer) {
      const PointSet pa = sample_curve(a.curve, na, UniformArclength{}, derive_seed(seed, 3));
      const PointSet pb = sample_curve(b.curve, nb, UniformArclength{}, derive_seed(seed, 4));
      Eigen::MatrixXd xy(2, pa.size() + pb.size());
      xy << pa.coords(), pb.coords();
      const PointSet pts(xy);
      const TolerancePolicy policy = TolerancePolicy::rasterized(2048);
      if (sos_chamfer) *sos_chamfer = chamfer_distance(recover_curve(pts, FrequencySupport(5, 5), 256, policy), both);
      try {
        const TrigPolynomial est = estimate_coefficients(pts, FrequencySupport(5, 5), policy);
        const Polyline rec = extract_zero_level_set(align_hermitian(est), 256);
        return rec.empty() ? std::numeric_limits<double>::infinity() : chamfer_distance(rec, both);
      } catch (const AmbiguousSupport&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    if (run(25, 25, nullptr) <= tol) ++even_ok;
    double sos = 0.0;
    if (run(49, 1, &sos) > 10 * tol) ++lopsided_fail;
    sos_lopsided_worst = std::max(sos_lopsided_worst, sos);
  }
  return {even_ok >= 8 && lopsided_fail >= 8,
          "25+25 recovered in " + std::to_string(even_ok) + "/10, 49+1 failed in " + std::to_string(lopsided_fail) +
              "/10 (SOS contour of the 49+1 null space: worst chamfer " + fmt(sos_lopsided_worst) + ")"};
}

// 6: Dirichlet Gram against explicit feature columns.
Verdict criterion6() {
  double worst = 0.0;
  for (int k1 = 1; k1 <= 9; ++k1) {
    for (int k2 = 1; k2 <= 9; ++k2) {
      const FrequencySupport s(k1, k2);
      const Eigen::MatrixXd x = cbtest::random_points(100, std::uint64_t(k1 * 10 + k2));
      Eigen::MatrixXcd phi(static_cast<Eigen::Index>(s.size()), 100);
      for (int j = 0; j < 100; ++j) {
        Eigen::Index row = 0;
        for (int a = s.lo1(); a <= s.hi1(); ++a)
          for (int b = s.lo2(); b <= s.hi2(); ++b)
            phi(row++, j) = std::polar(1.0, 2 * cbtest::kPi * (a * x(0, j) + b * x(1, j)));
      }
      const Eigen::MatrixXcd ref = phi.adjoint() * phi;
      worst = std::max(worst, (dirichlet_gram(PointSet(x), s).data - ref).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-10, "max deviation " + fmt(worst) + " over all supports up to 9x9"};
}

// 7: common zeros of 2x2-support pairs.
Verdict criterion7() {
  const FrequencySupport s(2, 2);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t most = 0;
  int planted_found = 0, planted_total = 0;
  for (int trial = 0; trial < 50; ++trial) {
    TrigPolynomial a(s, cbtest::random_complex(4, rng()));
    TrigPolynomial b(s, cbtest::random_complex(4, rng()));
    std::vector<Vec2> planted;
    if (trial % 2 == 1) {
      // Half the pairs are forced to share one or two zeros; three would
      // leave a one-dimensional space and make a and b proportional.
      const int count = 1 + (trial / 2) % 2;
      for (int i = 0; i < count; ++i) planted.emplace_back(u(rng), u(rng));
      a = cbtest::vanishing_at(s, planted, rng());
      b = cbtest::vanishing_at(s, planted, rng());
    }
    const auto zeros = cbtest::common_zeros(a, b, 128);
    most = std::max(most, zeros.size());
    for (const Vec2& p : planted) {
      ++planted_total;
      for (const Vec2& z : zeros)
        if (torus_distance(p, z) < 1e-6) {
          ++planted_found;
          break;
        }
    }
  }
  return {most <= 16, "at most " + std::to_string(most) + " common zeros in 50 pairs; " + std::to_string(planted_found) +
                          "/" + std::to_string(planted_total) + " planted zeros found"};
}

// 8: denoising improves SNR; the quadratic step has the right gradient.
Verdict criterion8() {
  bool pass = true;
  std::string detail;
  for (double sd : {0.005, 0.01, 0.02}) {
    int better = 0;
    for (std::uint64_t run = 0; run < 20; ++run) {
      const std::uint64_t seed = derive_seed(8, run);
      const TrigPolynomial p = cbtest::nonempty_curve(FrequencySupport(3, 3), seed);
      const PointSet clean = sample_curve(extract_zero_level_set(p, 512), 400, UniformArclength{}, seed);
      std::mt19937_64 rng(derive_seed(seed, 1));
      std::normal_distribution<double> g(0.0, sd);
      Eigen::MatrixXd y = clean.coords();
      for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += g(rng);
      const PointSet noisy(y);
      const DenoiseResult r = klr_denoise(noisy, IrlsConfig{});
      if (point_cloud_snr(clean, r.points) > point_cloud_snr(clean, noisy)) ++better;
    }
    pass = pass && better >= 18;
    detail += "std " + fmt(sd) + ": " + std::to_string(better) + "/20; ";
  }
  // Central differences of |X - Y|^2 + lambda tr(X L X^T) around a random X.
  const Eigen::MatrixXd y = cbtest::random_points(30, 81);
  const Eigen::MatrixXd l = graph_laplacian(irls_weights(PointSet(y), 0.2, 1e-2).w);
  const double lambda = 0.05;
  auto objective = [&](const Eigen::MatrixXd& x) {
    return (x - y).squaredNorm() + lambda * (x * l * x.transpose()).trace();
  };
  const Eigen::MatrixXd x0 = solve_quadratic(y, l, lambda);
  const Eigen::MatrixXd probe = x0 + 0.01 * cbtest::random_points(30, 82);
  double worst = 0.0;
  for (const Eigen::MatrixXd& x : {x0, probe}) {
    const Eigen::MatrixXd grad = 2.0 * (x - y) + lambda * x * (l + l.transpose());
    Eigen::MatrixXd fd(x.rows(), x.cols());
    const double h = 1e-5;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      Eigen::MatrixXd xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      fd(i) = (objective(xp) - objective(xm)) / (2 * h);
    }
    worst = std::max(worst, (fd - grad).norm() / std::max(grad.norm(), 1.0));
  }
  // The solver's output is the stationary point.
  const double stationarity = (2.0 * (x0 - y) + lambda * x0 * (l + l.transpose())).norm() / y.norm();
  pass = pass && worst <= 1e-5 && stationarity <= 1e-8;
  detail += "gradient check rel. err " + fmt(worst) + ", stationarity " + fmt(stationarity);
  return {pass, detail};
}

Eigen::MatrixXd disk_phantom(int n) {
  Eigen::MatrixXd px(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      px(r, c) = -std::cos(2 * cbtest::kPi * c / n) - std::cos(2 * cbtest::kPi * r / n) - 1.0 > 0 ? 1.0 : 0.0;
  return px;
}

// 9: disk phantom segmentation.
Verdict criterion9() {
  const int n = 64;
  const GrayImage h(disk_phantom(n));
  SegmentationConfig cfg;
  cfg.lambda = 1.0;
  cfg.filter = FrequencySupport(7, 7);
  std::vector<std::size_t> counts;
  double worst_px = std::numeric_limits<double>::infinity();
  bool energy_down = false;
  for (int rank : {10, 24, 40}) {
    cfg.rank = rank;
    const SegmentationResult res = segment(h, cfg);
    const Polyline edges = edge_contours(res, 1.0);
    counts.push_back(edges.components.size());
    if (rank == 24) {
      energy_down = res.trailing_energy_final < res.trailing_energy_initial;
      worst_px = edges.empty() ? worst_px : 0.0;
      for (const Vec2& v : edges.vertices()) {
        const double x1 = v.x(), x2 = v.y();
        const double psi = -std::cos(2 * cbtest::kPi * x1) - std::cos(2 * cbtest::kPi * x2) - 1.0;
        const double g = 2 * cbtest::kPi * std::hypot(std::sin(2 * cbtest::kPi * x1), std::sin(2 * cbtest::kPi * x2));
        worst_px = std::max(worst_px, std::abs(psi) / std::max(g, 1e-12) * n);
      }
    }
  }
  const bool monotone = counts[0] <= counts[1] && counts[1] <= counts[2] && counts[0] < counts[2];
  return {worst_px <= 2.0 && energy_down && monotone,
          "edge within " + fmt(worst_px) + " px; trailing energy " + (energy_down ? "decreased" : "did NOT decrease") +
              "; contour components at ranks 10/24/40: " + std::to_string(counts[0]) + "/" +
              std::to_string(counts[1]) + "/" + std::to_string(counts[2])};
}

// 10: every CLI command twice with the same seed gives identical files.
Verdict criterion10() {
  const fs::path root = fs::temp_directory_path() / "curveband_acceptance";
  fs::remove_all(root);
  const fs::path input = root / "input";
  fs::create_directories(input);
  io::write_pgm(input / "disk.pgm", GrayImage(disk_phantom(48)));
  io::write_text(input / "irls.cfg", "max_iters = 10\n");

  std::vector<std::vector<std::string>> commands = {
      {"synth", "--support", "3x3", "--samples", "120"},
      {"recover", "--points", (input / "samples.csv").string(), "--gamma", "3x3", "--truth",
       (input / "curve.json").string()},
      {"phase-transition", "--k-range", "3", "--n-range", "9,37", "--trials", "3"},
      {"denoise", "--points", (input / "samples.csv").string(), "--config", (input / "irls.cfg").string()},
      {"segment", "--image", (input / "disk.pgm").string(), "--rank", "10,20", "--filter", "5x5"},
      {"eval", "--metric", "chamfer", "--truth", (input / "curve.csv").string(), "--pred",
       (input / "curve.csv").string()},
  };
  // Inputs for the later commands come from a synth run of their own.
  std::ostringstream sink;
  if (cli::run({"--seed", "10", "--out-dir", input.string(), "synth", "--support", "3x3", "--samples", "120"}, sink,
               sink) != 0)
    return {false, "could not synthesize inputs"};

  int identical = 0, compared = 0;
  std::string mismatch;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::vector<fs::path> dirs;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / (std::to_string(i) + "_" + std::to_string(rep));
      std::vector<std::string> args{"--seed", "10", "--out-dir", dir.string()};
      args.insert(args.end(), commands[i].begin(), commands[i].end());
      std::ostringstream out, err;
      if (cli::run(args, out, err) != 0) return {false, commands[i][0] + " failed: " + err.str()};
      dirs.push_back(dir);
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      const auto ext = entry.path().extension();
      if (ext != ".csv" && ext != ".json") continue;
      ++compared;
      if (io::read_text(entry.path()) == io::read_text(dirs[1] / entry.path().filename())) ++identical;
      else mismatch += " " + commands[i][0] + "/" + entry.path().filename().string();
    }
  }
  return {compared > 0 && identical == compared,
          std::to_string(identical) + "/" + std::to_string(compared) + " CSV/JSON outputs identical" + mismatch};
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments pick a subset of criteria by number.
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const std::vector<std::pair<int, std::function<Verdict()>>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},  {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10},
  };
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << v.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
