// bsm: command-line front end for beamsplitter two-photon interference runs.
//
//   bsm scan          --config fig2_peak.json --out peak.csv [--epsilon 0.91]
//   bsm classify      --config two_color_i.json
//   bsm chsh          --config bell_identical.json
//   bsm oracle-check  --config fig2_dip.json --bins 8
//   bsm presets list
//
// Exit codes: 0 success, 2 configuration / input error, 3 invariant failure.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bsm/bsm.hpp"
#include "bsm/config.hpp"
#include "bsm/io.hpp"

#ifndef BSM_PRESET_DIR
#define BSM_PRESET_DIR "presets"
#endif

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

constexpr double kOracleTolerance = 1e-6;
constexpr double kUnitarityTolerance = 1e-12;

struct InvariantFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config;
  std::string preset_dir = BSM_PRESET_DIR;
  std::optional<std::size_t> grid_points;
  std::optional<double> epsilon;
};

// A bare preset name ("fig2_peak") resolves against the preset directory.
fs::path resolve_config(const CommonOptions& opt) {
  const fs::path direct(opt.config);
  if (fs::exists(direct)) return direct;
  for (const fs::path candidate : {fs::path(opt.preset_dir) / opt.config,
                                   fs::path(opt.preset_dir) / (opt.config + ".json")})
    if (fs::exists(candidate)) return candidate;
  throw bsm::ConfigError(opt.config + ": no such config file or bundled preset");
}

bsm::ExperimentConfig load(const CommonOptions& opt) {
  bsm::ExperimentConfig cfg = bsm::load_config(resolve_config(opt));
  if (opt.grid_points) {
    if (*opt.grid_points < 2) throw bsm::ConfigError("--grid-points: must be >= 2");
    cfg.grid.points = *opt.grid_points;
  }
  if (opt.epsilon) {
    if (*opt.epsilon < 0.0 || *opt.epsilon > 1.0) throw bsm::ConfigError("--epsilon: must lie in [0, 1]");
    cfg.analysis.mode_overlap = *opt.epsilon;
  }
  return cfg;
}

bsm::TwoPhotonState state_for(const bsm::ExperimentConfig& cfg) {
  bsm::TwoPhotonState state = bsm::build_state(cfg);
  if (!state.is_normalized()) throw InvariantFailure("built state is not normalized");
  return state;
}

int run_scan(const CommonOptions& opt, const std::string& out) {
  const bsm::ExperimentConfig cfg = load(opt);
  const bsm::TwoPhotonState state = state_for(cfg);
  const std::vector<double> delays = bsm::scan_delays(cfg);
  const bsm::DelayScanCurve curve = bsm::delay_scan(state, delays, cfg.analysis.mode_overlap);

  for (const bsm::ScanSample& s : curve.samples)
    if (s.rate < -bsm::kPhysicalTolerance || s.rate > 2.0 * curve.background + bsm::kPhysicalTolerance)
      throw InvariantFailure("scan rate outside [0, 2 * background]");

  const bsm::KeyValues report = bsm::scan_report(curve);
  if (out.empty()) {
    bsm::write_scan_csv(std::cout, curve);
    bsm::write_key_values(std::cerr, report);
    return kExitOk;
  }
  std::ofstream csv(out);
  std::ofstream side(out + ".report");
  if (!csv || !side) throw bsm::ConfigError(out + ": cannot open output for writing");
  bsm::write_scan_csv(csv, curve);
  bsm::write_key_values(side, report);
  return kExitOk;
}

int run_classify(const CommonOptions& opt) {
  const bsm::ExperimentConfig cfg = load(opt);
  const bsm::TwoPhotonState state = state_for(cfg);
  const bsm::SymmetryReport r =
      bsm::classify(state, {.threshold = cfg.analysis.threshold, .chsh_angles = cfg.analysis.chsh});
  bsm::write_key_values(std::cout, bsm::symmetry_report(r));
  return kExitOk;
}

int run_chsh(const CommonOptions& opt) {
  const bsm::ExperimentConfig cfg = load(opt);
  const bsm::TwoPhotonState state = state_for(cfg);
  const bsm::ChshAngles& a = cfg.analysis.chsh;
  const double s = bsm::chsh(state, a);
  bsm::write_key_values(std::cout, {{"E_a_b", bsm::format_number(bsm::correlator(state, a.a, a.b))},
                                    {"E_a_bp", bsm::format_number(bsm::correlator(state, a.a, a.b_prime))},
                                    {"E_ap_b", bsm::format_number(bsm::correlator(state, a.a_prime, a.b))},
                                    {"E_ap_bp", bsm::format_number(bsm::correlator(state, a.a_prime, a.b_prime))},
                                    {"S", bsm::format_number(s)},
                                    {"violates_chsh", s > 2.0 ? "true" : "false"}});
  if (s > 2.0 * std::sqrt(2.0) + bsm::kPhysicalTolerance) throw InvariantFailure("S exceeds the Tsirelson bound");
  return kExitOk;
}

int run_oracle_check(const CommonOptions& opt, int bins) {
  if (bins < 2 || bins > 32) throw bsm::ConfigError("--bins: K must lie in [2, 32]");
  const bsm::ExperimentConfig cfg = load(opt);
  const bsm::TwoPhotonState state = state_for(cfg);
  const bsm::oracle::DiscreteModeBasis basis = bsm::oracle::discretize(state, bins);
  const bsm::TwoPhotonState binned = bsm::oracle::lift_to_state(basis);
  const double tc = bsm::coherence_time(state);

  double max_dev = 0.0, max_unitarity = 0.0;
  bsm::KeyValues lines{{"bins", std::to_string(bins)},
                       {"captured_norm2", bsm::format_number(basis.captured_norm2())}};
  int index = 0;
  for (const double delay : {0.0, tc, -2.0 * tc}) {
    const auto out = bsm::oracle::apply_bs_exact(basis, delay);
    const auto probs = bsm::oracle::outcome_probabilities(out);
    const double analytic = bsm::coincidence_probability(binned, delay);
    const double dev = std::abs(probs.coincidence - analytic) / std::max(std::abs(analytic), 1e-6);
    max_dev = std::max(max_dev, dev);
    max_unitarity = std::max(max_unitarity, std::abs(probs.total() - 1.0));
    const std::string tag = "delay" + std::to_string(index++);
    lines.emplace_back(tag + "_s", bsm::format_number(delay));
    lines.emplace_back(tag + "_oracle", bsm::format_number(probs.coincidence));
    lines.emplace_back(tag + "_analytic", bsm::format_number(analytic));
    lines.emplace_back(tag + "_full_resolution", bsm::format_number(bsm::coincidence_probability(state, delay)));
  }
  const bool pass = max_dev <= kOracleTolerance && max_unitarity <= kUnitarityTolerance;
  lines.emplace_back("max_relative_deviation", bsm::format_number(max_dev));
  lines.emplace_back("max_unitarity_error", bsm::format_number(max_unitarity));
  lines.emplace_back("result", pass ? "pass" : "fail");
  bsm::write_key_values(std::cout, lines);
  return pass ? kExitOk : kExitInvariant;
}

int run_presets_list(const std::string& dir) {
  if (!fs::is_directory(dir)) throw bsm::ConfigError(dir + ": preset directory not found");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) {
    std::string description;
    try {
      std::ifstream in(f);
      description = nlohmann::json::parse(in).value("description", "");
    } catch (const std::exception&) {
      description = "(unreadable)";
    }
    std::cout << f.stem().string() << '\t' << description << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon interference at a 50/50 beamsplitter"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string out;
  int bins = 8;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Experiment config (JSON) or bundled preset name")->required();
    sub->add_option("--grid-points", opt.grid_points, "Override grid.points");
    sub->add_option("--preset-dir", opt.preset_dir, "Directory of bundled presets");
  };

  auto* scan = app.add_subcommand("scan", "Coincidence probability versus path-1 delay (CSV)");
  add_common(scan);
  scan->add_option("--out", out, "CSV output path; the report goes to <out>.report");
  scan->add_option("--epsilon", opt.epsilon, "Mode-overlap factor in [0, 1]");

  auto* classify = app.add_subcommand("classify", "Symmetry residuals, label, CHSH and visibilities");
  add_common(classify);

  auto* chsh = app.add_subcommand("chsh", "CHSH correlators and S value");
  add_common(chsh);

  auto* oracle = app.add_subcommand("oracle-check", "Compare analytic coincidence with discrete-mode brute force");
  add_common(oracle);
  oracle->add_option("--bins", bins, "Frequency bins K (2..32)");

  auto* presets = app.add_subcommand("presets", "Bundled experiment presets");
  presets->require_subcommand(1);
  auto* list = presets->add_subcommand("list", "List bundled presets");
  list->add_option("--preset-dir", opt.preset_dir, "Directory of bundled presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (scan->parsed()) return run_scan(opt, out);
    if (classify->parsed()) return run_classify(opt);
    if (chsh->parsed()) return run_chsh(opt);
    if (oracle->parsed()) return run_oracle_check(opt, bins);
    if (list->parsed()) return run_presets_list(opt.preset_dir);
  } catch (const bsm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const bsm::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvariantFailure& e) {
    std::cerr << "invariant failure: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitConfig;
}
