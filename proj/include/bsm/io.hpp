#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bsm/beamsplitter.hpp"
#include "bsm/symmetry.hpp"

namespace bsm {

// Scientific notation, 12 significant digits.
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return buf;
}

using KeyValues = std::vector<std::pair<std::string, std::string>>;

inline void write_key_values(std::ostream& os, const KeyValues& kv) {
  for (const auto& [k, v] : kv) os << k << '=' << v << '\n';
}

inline void write_scan_csv(std::ostream& os, const DelayScanCurve& curve) {
  os << "delay_s,normalized_rate\n";
  for (const ScanSample& s : curve.samples) os << format_number(s.delay) << ',' << format_number(s.rate) << '\n';
}

inline KeyValues scan_report(const DelayScanCurve& curve) {
  return {{"background", format_number(curve.background)},
          {"extremum", format_number(curve.extremum)},
          {"extremum_delay_s", format_number(curve.extremum_delay)},
          {"feature", curve.is_peak() ? "peak" : curve.is_dip() ? "dip" : "none"},
          {"feature_fwhm_s", format_number(curve.feature_fwhm)},
          {"visibility", format_number(curve.visibility)}};
}

inline KeyValues symmetry_report(const SymmetryReport& r) {
  return {{"label", to_string(r.label)},
          {"as_residual", format_number(r.as_residual)},
          {"bell_residual", format_number(r.bell_residual)},
          {"coincidence_at_zero_delay", format_number(r.coincidence_at_zero_delay)},
          {"chsh", format_number(r.chsh_value)},
          {"basis45_visibility", format_number(r.basis45_visibility)},
          {"hv_visibility", format_number(r.hv_visibility)}};
}

}  // namespace bsm
