#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "curveband/denoise.hpp"
#include "curveband/errors.hpp"
#include "curveband/point_set.hpp"
#include "curveband/polyline.hpp"
#include "curveband/recovery.hpp"
#include "curveband/segmentation.hpp"
#include "curveband/trig_polynomial.hpp"

namespace curveband::io {

namespace fs = std::filesystem;

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

// {"k1":..,"k2":..,"hermitian":..,"coeffs":[[re,im],...]}
std::string coefficients_to_json(const TrigPolynomial& poly);
TrigPolynomial coefficients_from_json(const std::string& text);
void write_coefficients(const fs::path& path, const TrigPolynomial& poly);
TrigPolynomial read_coefficients(const fs::path& path);

/// Same layout with "vectors" (one coefficient list per basis vector) and
/// "singular_values".
std::string nullspace_to_json(const NullspaceBasis& basis);
NullspaceBasis nullspace_from_json(const std::string& text);

/// One point per line, comma separated, no header.
void write_points_csv(std::ostream& out, const PointSet& pts);
void write_points_csv(const fs::path& path, const PointSet& pts);
PointSet read_points_csv(std::istream& in, const std::string& name = "<stream>");
PointSet read_points_csv(const fs::path& path);

/// Rows "component,x1,x2".
void write_polyline_csv(const fs::path& path, const Polyline& curve);
Polyline read_polyline_csv(const fs::path& path);

struct SvgStyle {
  std::string stroke = "#1f4e9c";
  double stroke_width = 0.003;
};
/// Paths in a 1x1 view box; a path is broken where it wraps around the torus.
/// Optional sample points are drawn as dots.
void write_polyline_svg(const fs::path& path, const std::vector<std::pair<Polyline, SvgStyle>>& layers,
                        const PointSet* points = nullptr);
void write_polyline_svg(const fs::path& path, const Polyline& curve, const PointSet* points = nullptr);

struct RankReportRow {
  std::string gamma;
  std::string lambda;
  std::size_t n = 0;
  std::size_t measured_rank = 0;
  std::size_t bound = 0;
};
void write_rank_report(const fs::path& path, const std::vector<RankReportRow>& rows);

/// Rows "iter,cost,gamma,rel_change".
void write_trace_csv(const fs::path& path, const DenoiseTrace& trace);

/// Config parse failure; line() is 1-based.
class ConfigError : public DataError {
 public:
  ConfigError(const std::string& what, int line) : DataError(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// `key = value` lines with the IrlsConfig field names; '#' starts a comment.
IrlsConfig parse_irls_config(std::istream& in, const std::string& name = "<stream>");
IrlsConfig read_irls_config(const fs::path& path);

/// Binary 8-bit PGM (P5). Pixels are scaled to [0, 1] by maxval.
GrayImage read_pgm(const fs::path& path);
GrayImage read_pgm(std::istream& in, const std::string& name = "<stream>");
/// Values are clamped to [0, 1] and quantized to 8 bits.
void write_pgm(const fs::path& path, const GrayImage& img);

void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

}  // namespace curveband::io
