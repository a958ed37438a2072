#include "curveband/cli.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "curveband/curve_model.hpp"
#include "curveband/denoise.hpp"
#include "curveband/errors.hpp"
#include "curveband/experiments.hpp"
#include "curveband/io.hpp"
#include "curveband/recovery.hpp"
#include "curveband/segmentation.hpp"

namespace curveband::cli {

namespace {

namespace fs = std::filesystem;

struct Globals {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int threads = 1;
};

FrequencySupport parse_support(const std::string& text, const char* flag) {
  try {
    return FrequencySupport::parse(text);
  } catch (const ContractViolation&) {
    throw ContractViolation(std::string(flag) + ": expected a support like 5x5, got '" + text + "'");
  }
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct SynthArgs {
  std::string support = "3x3";
  int grid_res = kDefaultGridRes;
  std::size_t samples = 0;
  std::string sampling = "uniform";
  bool single_component = false;
};

void cmd_synth(const Globals& g, const SynthArgs& a, std::ostream& out) {
  const fs::path dir(g.out_dir);
  const SyntheticCurve s = random_nonempty_curve(parse_support(a.support, "--support"), g.seed, a.grid_res,
                                                 a.single_component);
  io::write_coefficients(dir / "curve.json", s.poly);
  io::write_polyline_csv(dir / "curve.csv", s.curve);
  std::optional<PointSet> pts;
  if (a.samples > 0) {
    const SamplingStrategy strategy = a.sampling == "half"
                                          ? SamplingStrategy{RestrictedToRegion{left_half_region(s.curve)}}
                                          : SamplingStrategy{UniformArclength{}};
    pts = sample_curve(s.curve, a.samples, strategy, derive_seed(g.seed, 1));
    io::write_points_csv(dir / "samples.csv", *pts);
  }
  io::write_polyline_svg(dir / "curve.svg", s.curve, pts ? &*pts : nullptr);
  out << "synth: " << a.support << " curve with " << s.curve.components.size() << " component(s) -> "
      << (dir / "curve.json").string() << '\n';
}

struct RecoverArgs {
  std::string points;
  std::string gamma;
  std::string lambda;
  int grid_res = kDefaultGridRes;
  int sample_grid = kDefaultGridRes;
  std::optional<double> tau;
  std::string truth;
};

void cmd_recover(const Globals& g, const RecoverArgs& a, std::ostream& out) {
  const fs::path dir(g.out_dir);
  const PointSet pts = io::read_points_csv(fs::path(a.points));
  if (pts.dim() != 2) throw DataError(a.points + ": expected 2 columns");
  const FrequencySupport gamma = parse_support(a.gamma, "--gamma");
  const FrequencySupport lambda = a.lambda.empty() ? gamma : parse_support(a.lambda, "--lambda");
  if (!lambda.fits_in(gamma)) throw ContractViolation("--lambda must fit inside --gamma");
  const TolerancePolicy tol = a.tau ? TolerancePolicy{*a.tau} : TolerancePolicy::rasterized(a.sample_grid);
  const Stopwatch clock;
  const NullspaceBasis basis = nullspace_basis(pts, gamma, tol);
  const Polyline curve = recover_curve(pts, gamma, a.grid_res, tol);
  const double elapsed = clock.seconds();

  io::write_polyline_svg(dir / "recovered.svg", curve, &pts);
  io::write_polyline_csv(dir / "recovered.csv", curve);
  io::write_text(dir / "nullspace.json", io::nullspace_to_json(basis));
  io::write_rank_report(dir / "rank_report.csv", {{gamma.to_string(), lambda.to_string(), pts.size(), basis.rank(),
                                                   rank_bound(gamma, lambda)}});
  out << "recover: N=" << pts.size() << " Q=" << basis.dimension() << " rank=" << basis.rank()
      << " bound=" << rank_bound(gamma, lambda) << " time=" << elapsed << "s\n";
  if (!a.truth.empty()) {
    const TrigPolynomial truth = io::read_coefficients(fs::path(a.truth));
    const Polyline truth_curve = extract_zero_level_set(truth, a.grid_res);
    const double d = curve.empty() || truth_curve.empty() ? std::numeric_limits<double>::infinity()
                                                           : chamfer_distance(curve, truth_curve);
    io::write_text(dir / "chamfer.csv", "metric,value\nchamfer," + io::format_double(d) + "\n");
    out << "recover: chamfer=" << d << '\n';
  }
}

struct PhaseArgs {
  std::vector<int> ks{3, 5, 7};
  std::vector<int> ns;
  int trials = 10;
  double threshold = 3.0 / 256.0;
  int grid_res = 256;
  int sample_grid = kDefaultGridRes;
};

void cmd_phase(const Globals& g, const PhaseArgs& a, std::ostream& out) {
  const fs::path dir(g.out_dir);
  PhaseTransitionConfig cfg;
  cfg.ks = a.ks;
  cfg.ns = a.ns.empty() ? default_phase_ns(a.ks) : a.ns;
  cfg.trials = a.trials;
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  cfg.trial.threshold = a.threshold;
  cfg.trial.recover_grid = a.grid_res;
  cfg.trial.sample_grid = a.sample_grid;
  const Stopwatch clock;
  const auto cells = phase_transition(cfg);
  write_phase_csv(dir / "phase_transition.csv", cells);
  write_phase_svg(dir / "phase_transition.svg", cells);
  out << "phase-transition: " << cells.size() << " cells, " << cfg.trials << " trials each, time=" << clock.seconds()
      << "s\n";
}

struct DenoiseArgs {
  std::string points;
  std::string config;
  std::string truth;
};

void cmd_denoise(const Globals& g, const DenoiseArgs& a, std::ostream& out) {
  const fs::path dir(g.out_dir);
  const IrlsConfig cfg = a.config.empty() ? IrlsConfig{} : io::read_irls_config(fs::path(a.config));
  const PointSet y = io::read_points_csv(fs::path(a.points));
  std::optional<PointSet> truth;
  if (!a.truth.empty()) truth = io::read_points_csv(fs::path(a.truth));
  const Stopwatch clock;
  const DenoiseResult res = klr_denoise(y, cfg);
  const double elapsed = clock.seconds();
  io::write_points_csv(dir / "denoised.csv", res.points);
  io::write_trace_csv(dir / "trace.csv", res.trace);
  std::ostringstream report;
  report << "iterations,converged";
  if (truth) report << ",snr_in,snr_out";
  report << '\n' << res.trace.iterations.size() << ',' << (res.trace.converged ? 1 : 0);
  if (truth) {
    report << ',' << io::format_double(point_cloud_snr(*truth, y)) << ','
           << io::format_double(point_cloud_snr(*truth, res.points));
  }
  report << '\n';
  io::write_text(dir / "snr.csv", report.str());
  out << "denoise: " << res.trace.iterations.size() << " iterations"
      << (res.trace.converged ? "" : " (max_iters reached)") << ", time=" << elapsed << "s\n";
  if (truth) {
    out << "denoise: SNR " << point_cloud_snr(*truth, y) << " dB -> " << point_cloud_snr(*truth, res.points)
        << " dB\n";
  }
}

struct SegmentArgs {
  std::string image;
  std::vector<int> ranks;
  double lambda = SegmentationConfig{}.lambda;
  std::string filter = "9x9";
  int max_iters = SegmentationConfig{}.max_iters;
  double offset_px = 1.0;
};

void cmd_segment(const Globals& g, const SegmentArgs& a, std::ostream& out) {
  const fs::path dir(g.out_dir);
  const GrayImage h = io::read_pgm(fs::path(a.image));
  std::ostringstream sweep;
  sweep << "rank,iterations,converged,trailing_energy_initial,trailing_energy_final,components,vertices,"
           "contour_length\n";
  for (int rank : a.ranks) {
    SegmentationConfig cfg;
    cfg.rank = rank;
    cfg.lambda = a.lambda;
    cfg.filter = parse_support(a.filter, "--filter");
    cfg.max_iters = a.max_iters;
    const Stopwatch clock;
    const SegmentationResult res = segment(h, cfg);
    const Polyline edges = edge_contours(res, a.offset_px);
    const std::string suffix = a.ranks.size() > 1 ? "_r" + std::to_string(rank) : "";
    io::write_pgm(dir / ("fstar" + suffix + ".pgm"), res.fstar);
    io::write_pgm(dir / ("edges" + suffix + ".pgm"), res.edge_map);
    io::write_polyline_svg(dir / ("edges" + suffix + ".svg"), edges);
    sweep << rank << ',' << res.iterations << ',' << (res.converged ? 1 : 0) << ','
          << io::format_double(res.trailing_energy_initial) << ',' << io::format_double(res.trailing_energy_final)
          << ',' << edges.components.size() << ',' << edges.vertex_count() << ','
          << io::format_double(edges.length()) << '\n';
    out << "segment: rank=" << rank << " iterations=" << res.iterations
        << (res.converged ? "" : " (not converged)") << " edge components=" << edges.components.size()
        << " time=" << clock.seconds() << "s\n";
  }
  io::write_text(dir / (a.ranks.size() > 1 ? "rank_sweep.csv" : "segment_report.csv"), sweep.str());
}

struct EvalArgs {
  std::string metric = "chamfer";
  std::string truth;
  std::string pred;
};

void cmd_eval(const Globals& g, const EvalArgs& a, std::ostream& out) {
  double value = 0.0;
  if (a.metric == "chamfer") {
    const Polyline t = io::read_polyline_csv(fs::path(a.truth));
    const Polyline p = io::read_polyline_csv(fs::path(a.pred));
    if (t.empty() || p.empty()) throw DataError("eval: empty polyline");
    value = chamfer_distance(t, p);
  } else {
    const PointSet t = io::read_points_csv(fs::path(a.truth));
    const PointSet p = io::read_points_csv(fs::path(a.pred));
    if (t.dim() != p.dim()) throw DataError("eval: point dimensions differ");
    value = a.metric == "mse" ? point_cloud_mse(t, p) : point_cloud_snr(t, p);
  }
  io::write_text(fs::path(g.out_dir) / "eval.csv", "metric,value\n" + a.metric + "," + io::format_double(value) + "\n");
  out << a.metric << ' ' << io::format_double(value) << '\n';
}

// CLI11 wants a mutable argv.
int parse_into(CLI::App& app, const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("curveband");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  app.parse(static_cast<int>(argv.size()), argv.data());
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Band-limited curve recovery, denoising and segmentation experiments", "curveband"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "base random seed");
  app.add_option("--out-dir", g.out_dir, "directory for output files");
  app.add_option("--threads", g.threads, "worker threads for trial sweeps")->check(CLI::PositiveNumber);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "random curve -> coefficient JSON, polyline CSV and SVG");
  s->add_option("--support", synth.support, "coefficient support, e.g. 3x3");
  s->add_option("--grid-res", synth.grid_res, "contouring grid");
  s->add_option("--samples", synth.samples, "also draw this many samples to samples.csv");
  s->add_option("--sampling", synth.sampling)->check(CLI::IsMember({"uniform", "half"}));
  s->add_flag("--single-component", synth.single_component, "redraw until the curve has one component");

  RecoverArgs rec;
  auto* r = app.add_subcommand("recover", "points CSV -> recovered curve and rank report");
  r->add_option("--points", rec.points)->required();
  r->add_option("--gamma", rec.gamma, "estimation support, e.g. 11x11")->required();
  r->add_option("--lambda", rec.lambda, "true support for the rank bound (default: gamma)");
  r->add_option("--grid-res", rec.grid_res, "contouring grid");
  r->add_option("--sample-grid", rec.sample_grid, "grid the samples were rasterized on (sets the tolerance)");
  r->add_option("--tau", rec.tau, "relative singular value threshold");
  r->add_option("--truth", rec.truth, "coefficient JSON of the true curve");

  PhaseArgs phase;
  auto* p = app.add_subcommand("phase-transition", "success frequency over (k, N)");
  p->add_option("--k-range", phase.ks)->delimiter(',');
  p->add_option("--n-range", phase.ns)->delimiter(',');
  p->add_option("--trials", phase.trials)->check(CLI::PositiveNumber);
  p->add_option("--threshold", phase.threshold, "Chamfer success threshold");
  p->add_option("--grid-res", phase.grid_res, "contouring grid for recovery");
  p->add_option("--sample-grid", phase.sample_grid, "contouring grid for the true curves");

  DenoiseArgs den;
  auto* d = app.add_subcommand("denoise", "kernel low-rank denoising of a point CSV");
  d->add_option("--points", den.points)->required();
  d->add_option("--config", den.config, "key = value file with IrlsConfig fields");
  d->add_option("--truth", den.truth, "clean points for the SNR report");

  SegmentArgs seg;
  auto* sg = app.add_subcommand("segment", "piecewise-constant segmentation of a PGM image");
  sg->add_option("--image", seg.image)->required();
  sg->add_option("--rank", seg.ranks, "rank, or a comma list for a sweep")->required()->delimiter(',');
  sg->add_option("--lambda", seg.lambda);
  sg->add_option("--filter", seg.filter, "annihilating filter support");
  sg->add_option("--max-iters", seg.max_iters);
  sg->add_option("--offset-px", seg.offset_px, "contour offset from the edge valley");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "compare two curves or point sets");
  e->add_option("--metric", ev.metric)->check(CLI::IsMember({"chamfer", "mse", "snr"}));
  e->add_option("--truth", ev.truth)->required();
  e->add_option("--pred", ev.pred)->required();

  try {
    parse_into(app, args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "curveband: " << ex.what() << '\n';
    return kUsage;
  }

  try {
    if (*s) cmd_synth(g, synth, out);
    else if (*r) cmd_recover(g, rec, out);
    else if (*p) cmd_phase(g, phase, out);
    else if (*d) cmd_denoise(g, den, out);
    else if (*sg) cmd_segment(g, seg, out);
    else if (*e) cmd_eval(g, ev, out);
  } catch (const ContractViolation& ex) {
    err << "curveband: " << ex.what() << '\n';
    return kUsage;
  } catch (const DataError& ex) {
    err << "curveband: " << ex.what() << '\n';
    return kData;
  } catch (const NumericalError& ex) {
    err << "curveband: numerical failure: " << ex.what() << '\n';
    return kNumerical;
  } catch (const fs::filesystem_error& ex) {
    err << "curveband: " << ex.what() << '\n';
    return kData;
  } catch (const std::exception& ex) {
    err << "curveband: unexpected failure: " << ex.what() << '\n';
    return kNumerical;
  }
  return kOk;
}

}  // namespace curveband::cli
