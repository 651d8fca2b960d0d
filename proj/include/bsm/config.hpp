#pragma once

// JSON experiment configuration. Every physical quantity carries its unit in
// the key name; unknown keys are rejected with the full key path.
//
// {
//   "description": "...",
//   "source":   { "builder": "type2_ultrafast", ... },
//   "grid":     { "points": 256, "half_width_sigmas": 6 },
//   "scan":     { "delay_min_fs": -1500, "delay_max_fs": 1500, "samples": 601 },
//   "analysis": { "chsh_deg": [0, 45, 22.5, 67.5], "threshold": 1e-3, "mode_overlap": 1 }
// }

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "json.hpp"

#include "bsm/core.hpp"
#include "bsm/correlation.hpp"
#include "bsm/sources.hpp"
#include "bsm/units.hpp"

namespace bsm {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Type2Source {
  SpdcParams spdc;
  std::optional<FilterParams> filter;
};

// Separable double-Gaussian envelope G_H(wH) G_V(wV) exp(i (wH t_H + wV t_V)),
// loaded into the antisymmetric (minus) or symmetric (plus) combination.
struct GaussianPairSource {
  bool antisymmetric = true;
  double center = angular_frequency(780.0 * kNanometer);
  double sigma_h = 1.0e13;
  double sigma_v = 1.0e13;
  double t_h = 0.0;
  double t_v = 0.0;
};

struct PathEnvelope {
  double center = angular_frequency(780.0 * kNanometer);
  double sigma = 1.0e13;
  double delay = 0.0;
};

struct BellSource {
  PathEnvelope path1;
  PathEnvelope path2;
};

struct TwoColorSource {
  TwoColorCase which = TwoColorCase::kColorWithPolarization;
  double red_center = angular_frequency(790.0 * kNanometer);
  double blue_center = angular_frequency(770.0 * kNanometer);
  double sigma = 5.0e12;
};

using SourceConfig = std::variant<Type2Source, GaussianPairSource, BellSource, TwoColorSource>;

struct GridConfig {
  std::size_t points = 256;
  double half_width_sigmas = 6.0;
};

struct ScanConfig {
  double delay_min = -1500.0 * kFemtosecond;
  double delay_max = 1500.0 * kFemtosecond;
  std::size_t samples = 601;
};

struct AnalysisConfig {
  ChshAngles chsh{};
  double threshold = 1e-3;
  double mode_overlap = 1.0;
};

struct ExperimentConfig {
  std::string description;
  SourceConfig source;
  GridConfig grid;
  ScanConfig scan;
  AnalysisConfig analysis;
};

namespace detail {

using nlohmann::json;

// Tracks which keys of one JSON object were consumed.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + "expected a JSON object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return number(key);
  }
  double number(const std::string& key) {
    const json& v = field(key);
    if (!v.is_number()) throw ConfigError(where(key) + "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where(key) + "must be finite");
    return x;
  }
  double positive(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) throw ConfigError(where(key) + "must be > 0");
    return x;
  }
  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const json& v = field(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw ConfigError(where(key) + "expected a non-negative integer");
    return v.get<std::size_t>();
  }
  std::string text(const std::string& key) {
    const json& v = field(key);
    if (!v.is_string()) throw ConfigError(where(key) + "expected a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) {
    return has(key) ? text(key) : fallback;
  }
  const json& field(const std::string& key) {
    if (!has(key)) throw ConfigError(where(key) + "missing required key");
    used_.insert(key);
    return j_.at(key);
  }
  ObjectReader child(const std::string& key) { return {field(key), path_ + key + "."}; }

  // Throws on the first key never consumed.
  void finish() const {
    for (const auto& [key, _] : j_.items())
      if (!used_.contains(key)) throw ConfigError(where(key) + "unknown key");
  }

  std::string where(const std::string& key = "") const {
    const std::string p = path_ + key;
    return p.empty() ? std::string("config: ") : p + ": ";
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

inline double nm(ObjectReader& r, const std::string& key, double fallback_m) {
  return r.positive(key, fallback_m / kNanometer) * kNanometer;
}
inline double fs(ObjectReader& r, const std::string& key, double fallback_s) {
  return r.number(key, fallback_s / kFemtosecond) * kFemtosecond;
}

inline FilterParams parse_filter(ObjectReader r) {
  FilterParams f;
  const std::string shape = r.text("shape", "gaussian");
  if (shape == "gaussian") f.shape = FilterShape::kGaussian;
  else if (shape == "tophat") f.shape = FilterShape::kTophat;
  else throw ConfigError(r.where("shape") + "expected \"gaussian\" or \"tophat\"");
  f.center_wavelength = nm(r, "center_nm", f.center_wavelength);
  f.fwhm = nm(r, "fwhm_nm", f.fwhm);
  r.finish();
  return f;
}

inline PathEnvelope parse_path(ObjectReader r) {
  PathEnvelope p;
  p.center = angular_frequency(nm(r, "center_nm", 780.0 * kNanometer));
  p.sigma = r.positive("sigma_rad_per_s", p.sigma);
  p.delay = fs(r, "delay_fs", 0.0);
  r.finish();
  return p;
}

inline SourceConfig parse_source(ObjectReader r) {
  const std::string builder = r.text("builder");
  if (builder == "type2_ultrafast") {
    Type2Source s;
    SpdcParams& p = s.spdc;
    p.pump_center_wavelength = nm(r, "pump_center_nm", p.pump_center_wavelength);
    p.pump_duration_fwhm = fs(r, "pump_duration_fs", p.pump_duration_fwhm);
    if (!(p.pump_duration_fwhm > 0.0)) throw ConfigError(r.where("pump_duration_fs") + "must be > 0");
    p.sigma_h = r.positive("sigma_h_rad_per_s", p.sigma_h);
    p.sigma_v = r.positive("sigma_v_rad_per_s", p.sigma_v);
    p.t_h = fs(r, "t_h_fs", p.t_h);
    p.t_v = fs(r, "t_v_fs", p.t_v);
    p.phi = degrees(r.number("phi_deg", 180.0));
    p.extra_group_delay_arm2 = fs(r, "arm2_delay_fs", 0.0);
    if (r.has("filter") && !r.field("filter").is_null()) s.filter = parse_filter(r.child("filter"));
    r.finish();
    return s;
  }
  if (builder == "antisymmetric_gaussian" || builder == "symmetric_gaussian") {
    GaussianPairSource s;
    s.antisymmetric = builder == "antisymmetric_gaussian";
    s.center = angular_frequency(nm(r, "center_nm", 780.0 * kNanometer));
    s.sigma_h = r.positive("sigma_h_rad_per_s", s.sigma_h);
    s.sigma_v = r.positive("sigma_v_rad_per_s", s.sigma_v);
    s.t_h = fs(r, "t_h_fs", 0.0);
    s.t_v = fs(r, "t_v_fs", 0.0);
    r.finish();
    return s;
  }
  if (builder == "bell_psi_minus") {
    BellSource s;
    s.path1 = parse_path(r.child("path1"));
    s.path2 = parse_path(r.child("path2"));
    r.finish();
    return s;
  }
  if (builder == "two_color") {
    TwoColorSource s;
    const std::string which = r.text("case");
    if (which == "i") s.which = TwoColorCase::kColorWithPolarization;
    else if (which == "ii") s.which = TwoColorCase::kColorWithPath;
    else throw ConfigError(r.where("case") + "expected \"i\" or \"ii\"");
    s.red_center = angular_frequency(nm(r, "red_center_nm", 790.0 * kNanometer));
    s.blue_center = angular_frequency(nm(r, "blue_center_nm", 770.0 * kNanometer));
    s.sigma = r.positive("sigma_rad_per_s", s.sigma);
    r.finish();
    return s;
  }
  throw ConfigError(r.where("builder") + "unknown builder \"" + builder + "\"");
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  detail::ObjectReader root(j, "");
  ExperimentConfig cfg;
  cfg.description = root.text("description", "");
  cfg.source = detail::parse_source(root.child("source"));

  if (root.has("grid")) {
    auto g = root.child("grid");
    cfg.grid.points = g.count("points", cfg.grid.points);
    if (cfg.grid.points < 2) throw ConfigError(g.where("points") + "must be >= 2");
    cfg.grid.half_width_sigmas = g.positive("half_width_sigmas", cfg.grid.half_width_sigmas);
    g.finish();
  }
  if (root.has("scan")) {
    auto s = root.child("scan");
    cfg.scan.delay_min = detail::fs(s, "delay_min_fs", cfg.scan.delay_min);
    cfg.scan.delay_max = detail::fs(s, "delay_max_fs", cfg.scan.delay_max);
    cfg.scan.samples = s.count("samples", cfg.scan.samples);
    if (!(cfg.scan.delay_min < cfg.scan.delay_max))
      throw ConfigError(s.where("delay_max_fs") + "must exceed delay_min_fs");
    if (cfg.scan.samples < 20) throw ConfigError(s.where("samples") + "must be >= 20");
    s.finish();
  }
  if (root.has("analysis")) {
    auto a = root.child("analysis");
    if (a.has("chsh_deg")) {
      const auto& v = a.field("chsh_deg");
      if (!v.is_array() || v.size() != 4 ||
          !std::all_of(v.begin(), v.end(), [](const auto& x) { return x.is_number(); }))
        throw ConfigError(a.where("chsh_deg") + "expected four angles [a, a', b, b']");
      cfg.analysis.chsh = {degrees(v[0].get<double>()), degrees(v[1].get<double>()),
                           degrees(v[2].get<double>()), degrees(v[3].get<double>())};
    }
    cfg.analysis.threshold = a.positive("threshold", cfg.analysis.threshold);
    cfg.analysis.mode_overlap = a.number("mode_overlap", cfg.analysis.mode_overlap);
    if (cfg.analysis.mode_overlap < 0.0 || cfg.analysis.mode_overlap > 1.0)
      throw ConfigError(a.where("mode_overlap") + "must lie in [0, 1]");
    a.finish();
  }
  root.finish();
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

inline FrequencyGrid grid_for(const ExperimentConfig& cfg) {
  const std::size_t n = cfg.grid.points;
  const double k = cfg.grid.half_width_sigmas;
  return std::visit(
      [&](const auto& s) -> FrequencyGrid {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Type2Source>) {
          return default_grid(s.spdc, n, k);
        } else if constexpr (std::is_same_v<T, GaussianPairSource>) {
          return FrequencyGrid::centered(s.center, k * std::max(s.sigma_h, s.sigma_v), n);
        } else if constexpr (std::is_same_v<T, BellSource>) {
          const double lo = std::min(s.path1.center, s.path2.center);
          const double hi = std::max(s.path1.center, s.path2.center);
          return FrequencyGrid::centered(0.5 * (lo + hi),
                                         0.5 * (hi - lo) + k * std::max(s.path1.sigma, s.path2.sigma), n);
        } else {
          return two_color_grid(s.red_center, s.blue_center, s.sigma, n, k);
        }
      },
      cfg.source);
}

inline TwoPhotonState build_state(const ExperimentConfig& cfg) {
  const FrequencyGrid grid = grid_for(cfg);
  return std::visit(
      [&](const auto& s) -> TwoPhotonState {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Type2Source>) {
          TwoPhotonState st = build_type2_ultrafast(s.spdc, grid);
          return s.filter ? apply_filters(st, *s.filter) : st;
        } else if constexpr (std::is_same_v<T, GaussianPairSource>) {
          const JointAmplitude env = JointAmplitude::sample(grid, [&](double wh, double wv) {
            return gaussian_amplitude(wh, s.center, s.sigma_h) *
                   gaussian_amplitude(wv, s.center, s.sigma_v) * std::exp(kI * (wh * s.t_h + wv * s.t_v));
          });
          check_grid_coverage(env, "gaussian pair source");
          return s.antisymmetric ? build_antisymmetric(env) : build_symmetric(env);
        } else if constexpr (std::is_same_v<T, BellSource>) {
          const auto g1 = SpectralEnvelope::gaussian(grid, s.path1.center, s.path1.sigma, s.path1.delay);
          const auto g2 = SpectralEnvelope::gaussian(grid, s.path2.center, s.path2.sigma, s.path2.delay);
          TwoPhotonState st = build_bell_psi_minus(g1, g2);
          check_grid_coverage(st.f_h1v2(), "bell source");
          return st;
        } else {
          return build_two_color(s.which, s.red_center, s.blue_center, s.sigma, grid);
        }
      },
      cfg.source);
}

inline std::vector<double> scan_delays(const ExperimentConfig& cfg) {
  return linspace(cfg.scan.delay_min, cfg.scan.delay_max, cfg.scan.samples);
}

}  // namespace bsm
