#include "curveband/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "curveband/errors.hpp"
#include "curveband/io.hpp"

namespace curveband {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SyntheticCurve random_nonempty_curve(const FrequencySupport& support, std::uint64_t seed, int grid_res,
                                     bool single_component) {
  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, attempt);
    TrigPolynomial poly = random_curve(support, s);
    Polyline curve = extract_zero_level_set(poly, grid_res);
    if (curve.empty()) continue;
    if (single_component && curve.components.size() != 1) continue;
    return {std::move(poly), std::move(curve), s};
  }
  throw DataError("random_nonempty_curve: no suitable curve after 1000 draws");
}

TrialOutcome recovery_trial(int k, std::size_t n, std::uint64_t seed, const RecoveryTrialConfig& cfg) {
  const FrequencySupport support(k, k);
  const SyntheticCurve truth = random_nonempty_curve(support, seed, cfg.sample_grid, cfg.single_component);
  const SamplingStrategy strategy = cfg.half_restricted ? SamplingStrategy{RestrictedToRegion{left_half_region(truth.curve)}}
                                                        : SamplingStrategy{UniformArclength{}};
  const PointSet pts = sample_curve(truth.curve, n, strategy, derive_seed(seed, 0xC0FFEE));
  const TolerancePolicy tol = TolerancePolicy::rasterized(cfg.sample_grid);
  TrialOutcome out;
  out.null_dim = nullspace_basis(pts, support, tol).dimension();
  const Polyline rec = recover_curve(pts, support, cfg.recover_grid, tol);
  out.chamfer = rec.empty() ? std::numeric_limits<double>::infinity() : chamfer_distance(rec, truth.curve);
  out.success = out.chamfer <= cfg.threshold;
  return out;
}

std::vector<int> default_phase_ns(const std::vector<int>& ks) {
  std::set<int> ns;
  int kmax = 1;
  for (int k : ks) kmax = std::max(kmax, k);
  for (int i = 1; i <= 2 * kmax + 1; ++i) ns.insert(i * i);
  for (int k : ks) {
    ns.insert(k * k + 5);
    ns.insert(4 * k * k + 1);
  }
  return {ns.begin(), ns.end()};
}

std::vector<PhaseCell> phase_transition(const PhaseTransitionConfig& cfg) {
  detail::require(!cfg.ks.empty() && !cfg.ns.empty(), "phase_transition: ranges must be non-empty");
  detail::require(cfg.trials >= 1, "phase_transition: trials must be positive");
  for (int k : cfg.ks) detail::require(k >= 1 && k % 2 == 1, "phase_transition: k must be odd and positive");
  for (int n : cfg.ns) detail::require(n >= 1, "phase_transition: N must be positive");

  const std::size_t cells = cfg.ks.size() * cfg.ns.size();
  const std::size_t total = cells * static_cast<std::size_t>(cfg.trials);
  std::vector<TrialOutcome> outcomes(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t job = next++; job < total; job = next++) {
      const std::size_t cell = job / static_cast<std::size_t>(cfg.trials);
      const int k = cfg.ks[cell / cfg.ns.size()];
      const int n = cfg.ns[cell % cfg.ns.size()];
      const std::size_t trial = job % static_cast<std::size_t>(cfg.trials);
      // The curve depends on (k, trial) only, so every N sees the same curves.
      const std::uint64_t seed = derive_seed(derive_seed(cfg.seed, static_cast<std::uint64_t>(k)), trial);
      outcomes[job] = recovery_trial(k, static_cast<std::size_t>(n), seed, cfg.trial);
    }
  };
  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<PhaseCell> out;
  out.reserve(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    PhaseCell c{cfg.ks[cell / cfg.ns.size()], cfg.ns[cell % cfg.ns.size()], 0, cfg.trials, 0.0};
    int finite = 0;
    for (int t = 0; t < cfg.trials; ++t) {
      const TrialOutcome& o = outcomes[cell * static_cast<std::size_t>(cfg.trials) + static_cast<std::size_t>(t)];
      c.successes += o.success ? 1 : 0;
      if (std::isfinite(o.chamfer)) {
        c.mean_chamfer += o.chamfer;
        ++finite;
      }
    }
    c.mean_chamfer = finite > 0 ? c.mean_chamfer / finite : std::numeric_limits<double>::infinity();
    out.push_back(c);
  }
  return out;
}

void write_phase_csv(const std::filesystem::path& path, const std::vector<PhaseCell>& cells) {
  std::ostringstream out;
  out << "k,N,trials,successes,frequency,mean_chamfer\n";
  for (const auto& c : cells)
    out << c.k << ',' << c.n << ',' << c.trials << ',' << c.successes << ',' << io::format_double(c.frequency())
        << ',' << io::format_double(c.mean_chamfer) << '\n';
  io::write_text(path, out.str());
}

void write_phase_svg(const std::filesystem::path& path, const std::vector<PhaseCell>& cells) {
  std::vector<int> ks;
  std::vector<int> ns;
  for (const auto& c : cells) {
    if (std::find(ks.begin(), ks.end(), c.k) == ks.end()) ks.push_back(c.k);
    if (std::find(ns.begin(), ns.end(), c.n) == ns.end()) ns.push_back(c.n);
  }
  std::sort(ks.begin(), ks.end());
  std::sort(ns.begin(), ns.end());
  const double cw = 24.0;
  const double ch = 40.0;
  const double left = 40.0;
  const double top = 10.0;
  const double w = left + cw * static_cast<double>(ns.size()) + 10.0;
  const double h = top + ch * static_cast<double>(ks.size()) + 40.0;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  auto col_of = [&](int n) { return static_cast<double>(std::find(ns.begin(), ns.end(), n) - ns.begin()); };
  auto row_of = [&](int k) { return static_cast<double>(std::find(ks.begin(), ks.end(), k) - ks.begin()); };
  for (const auto& c : cells) {
    const int shade = static_cast<int>(std::lround(255.0 * c.frequency()));
    out << "<rect x=\"" << left + cw * col_of(c.n) << "\" y=\"" << top + ch * row_of(c.k) << "\" width=\"" << cw
        << "\" height=\"" << ch << "\" fill=\"rgb(" << shade << ',' << shade << ',' << shade << ")\"/>\n";
  }
  // Fractional column position of an arbitrary N between the sampled ones.
  auto x_of = [&](double n) {
    if (n <= ns.front()) return left;
    for (std::size_t i = 1; i < ns.size(); ++i) {
      if (n <= ns[i]) {
        const double t = (n - ns[i - 1]) / static_cast<double>(ns[i] - ns[i - 1]);
        return left + cw * (static_cast<double>(i - 1) + 0.5 + t);
      }
    }
    return left + cw * static_cast<double>(ns.size());
  };
  auto guide = [&](const char* colour, auto bound) {
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (int k : ks) out << x_of(bound(k)) << ',' << top + ch * (row_of(k) + 0.5) << ' ';
    out << "\"/>\n";
  };
  guide("blue", [](int k) { return static_cast<double>(k * k); });
  guide("red", [](int k) { return static_cast<double>(4 * k * k); });
  for (int k : ks)
    out << "<text x=\"4\" y=\"" << top + ch * (row_of(k) + 0.6) << "\" font-size=\"12\">k=" << k << "</text>\n";
  for (int n : ns)
    out << "<text x=\"" << left + cw * col_of(n) + 2 << "\" y=\"" << top + ch * static_cast<double>(ks.size()) + 14
        << "\" font-size=\"8\">" << n << "</text>\n";
  out << "</svg>\n";
  io::write_text(path, out.str());
}

}  // namespace curveband
