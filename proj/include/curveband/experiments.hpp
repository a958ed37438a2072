#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "curveband/curve_model.hpp"
#include "curveband/polyline.hpp"
#include "curveband/recovery.hpp"

namespace curveband {

/// splitmix64 of base and index; the per-trial seed derivation.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

struct SyntheticCurve {
  TrigPolynomial poly;
  Polyline curve;
  std::uint64_t seed = 0;  // seed that produced poly
};

/// random_curve with derived seeds until the zero set is non-empty (and has
/// exactly one component when `single_component`).
SyntheticCurve random_nonempty_curve(const FrequencySupport& support, std::uint64_t seed, int grid_res,
                                     bool single_component = false);

struct RecoveryTrialConfig {
  int sample_grid = 512;
  int recover_grid = 256;
  double threshold = 3.0 / 256.0;
  bool half_restricted = false;
  bool single_component = false;
};

struct TrialOutcome {
  double chamfer = 0.0;
  std::size_t null_dim = 0;
  bool success = false;
};

/// Samples n points from a random k x k curve and recovers it with the same
/// support.
TrialOutcome recovery_trial(int k, std::size_t n, std::uint64_t seed, const RecoveryTrialConfig& cfg = {});

struct PhaseTransitionConfig {
  std::vector<int> ks{3, 5, 7};
  std::vector<int> ns;
  int trials = 10;
  std::uint64_t seed = 0;
  int threads = 1;
  RecoveryTrialConfig trial;
};

struct PhaseCell {
  int k = 0;
  int n = 0;
  int successes = 0;
  int trials = 0;
  double mean_chamfer = 0.0;

  double frequency() const { return trials > 0 ? static_cast<double>(successes) / trials : 0.0; }
};

/// Default sample counts: squares up to (2 * k_max)^2 plus one past each
/// (k1 + k2)^2 bound.
std::vector<int> default_phase_ns(const std::vector<int>& ks);

/// Cells in (k, n) order. Trial t of a cell uses derive_seed(seed, ...);
/// results do not depend on the thread count.
std::vector<PhaseCell> phase_transition(const PhaseTransitionConfig& cfg);

void write_phase_csv(const std::filesystem::path& path, const std::vector<PhaseCell>& cells);
/// Heatmap of success frequency with guide curves at N = k^2 and N = (2k)^2.
void write_phase_svg(const std::filesystem::path& path, const std::vector<PhaseCell>& cells);

}  // namespace curveband
