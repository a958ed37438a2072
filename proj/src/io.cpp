#include "curveband/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace curveband::io {

namespace {

using nlohmann::json;

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, mode);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw DataError("cannot open " + path.string() + " for reading");
  return in;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_double(std::string_view text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(f);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

json coeff_list(const Eigen::VectorXcd& c) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < c.size(); ++i) arr.push_back({c(i).real(), c(i).imag()});
  return arr;
}

Eigen::VectorXcd coeff_vector(const json& arr, std::size_t expected) {
  if (!arr.is_array() || arr.size() != expected)
    throw DataError("coefficient list must have " + std::to_string(expected) + " entries");
  Eigen::VectorXcd c(static_cast<Eigen::Index>(expected));
  for (std::size_t i = 0; i < expected; ++i) {
    const json& e = arr[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw DataError("coefficient " + std::to_string(i) + " is not a [re, im] pair");
    c(static_cast<Eigen::Index>(i)) = cdouble(e[0].get<double>(), e[1].get<double>());
  }
  return c;
}

FrequencySupport support_of(const json& j) {
  if (!j.contains("k1") || !j.contains("k2") || !j["k1"].is_number_integer() || !j["k2"].is_number_integer())
    throw DataError("missing integer fields k1/k2");
  const int k1 = j["k1"].get<int>();
  const int k2 = j["k2"].get<int>();
  if (k1 < 1 || k2 < 1) throw DataError("k1/k2 must be positive");
  return FrequencySupport(k1, k2);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string coefficients_to_json(const TrigPolynomial& poly) {
  json j;
  j["k1"] = poly.support().k1();
  j["k2"] = poly.support().k2();
  j["hermitian"] = poly.hermitian();
  j["coeffs"] = coeff_list(poly.coeffs());
  return j.dump() + "\n";
}

TrigPolynomial coefficients_from_json(const std::string& text) {
  const json j = parse_json(text);
  const FrequencySupport support = support_of(j);
  const bool hermitian = j.value("hermitian", false);
  Eigen::VectorXcd c = coeff_vector(j.value("coeffs", json()), support.size());
  try {
    return TrigPolynomial(support, std::move(c), hermitian);
  } catch (const ContractViolation& e) {
    throw DataError(e.what());
  }
}

void write_coefficients(const fs::path& path, const TrigPolynomial& poly) {
  write_text(path, coefficients_to_json(poly));
}

TrigPolynomial read_coefficients(const fs::path& path) {
  try {
    return coefficients_from_json(read_text(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string nullspace_to_json(const NullspaceBasis& basis) {
  json j;
  j["k1"] = basis.support.k1();
  j["k2"] = basis.support.k2();
  j["hermitian"] = false;
  json vecs = json::array();
  for (Eigen::Index i = 0; i < basis.vectors.cols(); ++i) vecs.push_back(coeff_list(basis.vectors.col(i)));
  j["vectors"] = vecs;
  j["singular_values"] = std::vector<double>(basis.singular_values.data(),
                                             basis.singular_values.data() + basis.singular_values.size());
  return j.dump() + "\n";
}

NullspaceBasis nullspace_from_json(const std::string& text) {
  const json j = parse_json(text);
  NullspaceBasis b{support_of(j), {}, {}};
  const json& vecs = j.value("vectors", json::array());
  if (!vecs.is_array()) throw DataError("\"vectors\" must be an array");
  b.vectors.resize(static_cast<Eigen::Index>(b.support.size()), static_cast<Eigen::Index>(vecs.size()));
  for (std::size_t i = 0; i < vecs.size(); ++i)
    b.vectors.col(static_cast<Eigen::Index>(i)) = coeff_vector(vecs[i], b.support.size());
  const auto sv = j.value("singular_values", std::vector<double>{});
  b.singular_values = Eigen::Map<const Eigen::VectorXd>(sv.data(), static_cast<Eigen::Index>(sv.size()));
  return b;
}

void write_points_csv(std::ostream& out, const PointSet& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int d = 0; d < pts.dim(); ++d) {
      if (d > 0) out << ',';
      out << format_double(pts.coords()(d, static_cast<Eigen::Index>(i)));
    }
    out << '\n';
  }
}

void write_points_csv(const fs::path& path, const PointSet& pts) {
  auto out = open_out(path);
  write_points_csv(out, pts);
}

PointSet read_points_csv(std::istream& in, const std::string& name) {
  std::vector<double> values;
  std::size_t dim = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_commas(line);
    if (dim == 0) dim = fields.size();
    if (fields.size() != dim)
      throw DataError(name + ":" + std::to_string(lineno) + ": expected " + std::to_string(dim) + " columns");
    for (const auto& f : fields) {
      double v = 0.0;
      if (!parse_double(f, v) || !std::isfinite(v))
        throw DataError(name + ":" + std::to_string(lineno) + ": not a finite number: '" + trim(f) + "'");
      values.push_back(v);
    }
  }
  if (dim == 0) throw DataError(name + ": no points");
  Eigen::MatrixXd m = Eigen::Map<Eigen::MatrixXd>(values.data(), static_cast<Eigen::Index>(dim),
                                                  static_cast<Eigen::Index>(values.size() / dim));
  return PointSet(std::move(m));
}

PointSet read_points_csv(const fs::path& path) {
  auto in = open_in(path);
  return read_points_csv(in, path.string());
}

void write_polyline_csv(const fs::path& path, const Polyline& curve) {
  auto out = open_out(path);
  for (std::size_t c = 0; c < curve.components.size(); ++c)
    for (const auto& v : curve.components[c].vertices)
      out << c << ',' << format_double(v.x()) << ',' << format_double(v.y()) << '\n';
}

Polyline read_polyline_csv(const fs::path& path) {
  auto in = open_in(path);
  Polyline curve;
  std::string line;
  int lineno = 0;
  long current = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_commas(line);
    double id = 0.0, x1 = 0.0, x2 = 0.0;
    if (fields.size() != 3 || !parse_double(fields[0], id) || !parse_double(fields[1], x1) ||
        !parse_double(fields[2], x2) || id < 0 || id != std::floor(id))
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected 'component,x1,x2'");
    if (static_cast<long>(id) != current) {
      current = static_cast<long>(id);
      curve.components.emplace_back();
    }
    curve.components.back().vertices.emplace_back(x1, x2);
  }
  return curve;
}

namespace {

// Splits a component into drawable runs, cutting where a segment wraps.
std::vector<std::vector<Vec2>> drawable_runs(const PolylineComponent& comp) {
  std::vector<std::vector<Vec2>> runs;
  const auto& v = comp.vertices;
  if (v.empty()) return runs;
  runs.push_back({v.front()});
  const std::size_t n = comp.closed ? v.size() + 1 : v.size();
  for (std::size_t i = 1; i < n; ++i) {
    const Vec2& a = v[i - 1];
    const Vec2& b = v[i % v.size()];
    const Vec2 d = wrap_delta(Vec2(b - a));
    if ((a + d - b).cwiseAbs().maxCoeff() > 1e-12) {
      runs.back().push_back(a + d);
      runs.push_back({b - d, b});
    } else {
      runs.back().push_back(b);
    }
  }
  return runs;
}

}  // namespace

void write_polyline_svg(const fs::path& path, const std::vector<std::pair<Polyline, SvgStyle>>& layers,
                        const PointSet* points) {
  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\" width=\"512\" height=\"512\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"white\"/>\n";
  // x2 grows upward in the plots, so flip the vertical axis.
  out << "<g transform=\"matrix(1 0 0 -1 0 1)\">\n";
  for (const auto& [curve, style] : layers) {
    for (const auto& comp : curve.components) {
      for (const auto& run : drawable_runs(comp)) {
        out << "<path fill=\"none\" stroke=\"" << style.stroke << "\" stroke-width=\""
            << format_double(style.stroke_width) << "\" d=\"";
        for (std::size_t i = 0; i < run.size(); ++i)
          out << (i == 0 ? 'M' : 'L') << format_double(run[i].x()) << ' ' << format_double(run[i].y()) << ' ';
        out << "\"/>\n";
      }
    }
  }
  if (points != nullptr && points->dim() == 2) {
    for (std::size_t i = 0; i < points->size(); ++i) {
      const Vec2 p = points->point2(i);
      out << "<circle cx=\"" << format_double(p.x()) << "\" cy=\"" << format_double(p.y())
          << "\" r=\"0.004\" fill=\"#c0392b\"/>\n";
    }
  }
  out << "</g>\n</svg>\n";
}

void write_polyline_svg(const fs::path& path, const Polyline& curve, const PointSet* points) {
  write_polyline_svg(path, {{curve, SvgStyle{}}}, points);
}

void write_rank_report(const fs::path& path, const std::vector<RankReportRow>& rows) {
  auto out = open_out(path);
  out << "gamma,lambda,N,measured_rank,bound\n";
  for (const auto& r : rows)
    out << r.gamma << ',' << r.lambda << ',' << r.n << ',' << r.measured_rank << ',' << r.bound << '\n';
}

void write_trace_csv(const fs::path& path, const DenoiseTrace& trace) {
  auto out = open_out(path);
  out << "iter,cost,gamma,rel_change\n";
  for (const auto& r : trace.iterations)
    out << r.iter << ',' << format_double(r.cost) << ',' << format_double(r.gamma) << ','
        << format_double(r.rel_change) << '\n';
}

IrlsConfig parse_irls_config(std::istream& in, const std::string& name) {
  IrlsConfig cfg;
  std::map<std::string, double*> reals{{"lambda", &cfg.lambda}, {"sigma", &cfg.sigma}, {"gamma0", &cfg.gamma0},
                                       {"eta", &cfg.eta}, {"rel_tol", &cfg.rel_tol}};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> ConfigError {
    return ConfigError(name + ":" + std::to_string(lineno) + ": " + msg, lineno);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw fail("expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    double v = 0.0;
    if (!parse_double(value, v) || !std::isfinite(v)) throw fail("value of '" + key + "' is not a number");
    if (key == "max_iters") {
      if (v != std::floor(v) || v < 1 || v > 1e9) throw fail("max_iters must be a positive integer");
      cfg.max_iters = static_cast<int>(v);
    } else if (auto it = reals.find(key); it != reals.end()) {
      *it->second = v;
    } else {
      throw fail("unknown key '" + key + "'");
    }
  }
  try {
    cfg.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(name + ": " + e.what(), 0);
  }
  return cfg;
}

IrlsConfig read_irls_config(const fs::path& path) {
  auto in = open_in(path);
  return parse_irls_config(in, path.string());
}

GrayImage read_pgm(std::istream& in, const std::string& name) {
  auto bad = [&](const std::string& msg) { return DataError(name + ": " + msg); };
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') throw bad("not a binary PGM (P5) file");
  auto next_int = [&]() -> long {
    int ch = in.get();
    while (in) {
      if (ch == '#') {
        while (in && ch != '\n') ch = in.get();
      } else if (std::isspace(ch)) {
        ch = in.get();
      } else {
        break;
      }
    }
    if (!in || !std::isdigit(ch)) throw bad("malformed header");
    long v = 0;
    while (in && std::isdigit(ch)) {
      v = v * 10 + (ch - '0');
      if (v > 1'000'000) throw bad("header value too large");
      ch = in.get();
    }
    // Exactly one whitespace byte separates the header from the raster.
    if (!in || !std::isspace(ch)) throw bad("malformed header");
    return v;
  };
  const long width = next_int();
  const long height = next_int();
  const long maxval = next_int();
  if (width < 1 || height < 1) throw bad("empty image");
  if (maxval < 1 || maxval > 255) throw bad("only 8-bit PGM is supported");
  std::vector<unsigned char> raster(static_cast<std::size_t>(width * height));
  in.read(reinterpret_cast<char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
  if (in.gcount() != static_cast<std::streamsize>(raster.size())) throw bad("truncated raster");
  Eigen::MatrixXd px(height, width);
  for (long r = 0; r < height; ++r)
    for (long c = 0; c < width; ++c)
      px(r, c) = static_cast<double>(raster[static_cast<std::size_t>(r * width + c)]) / static_cast<double>(maxval);
  try {
    return GrayImage(std::move(px));
  } catch (const ContractViolation& e) {
    throw bad(e.what());
  }
}

GrayImage read_pgm(const fs::path& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  return read_pgm(in, path.string());
}

void write_pgm(const fs::path& path, const GrayImage& img) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<unsigned char> raster(static_cast<std::size_t>(img.width()) * static_cast<std::size_t>(img.height()));
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c) {
      const double v = std::clamp(img.pixels()(r, c), 0.0, 1.0);
      raster[static_cast<std::size_t>(r * img.width() + c)] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
  out.write(reinterpret_cast<const char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

std::string read_text(const fs::path& path) {
  auto in = open_in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace curveband::io
