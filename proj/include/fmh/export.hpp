#pragma once

// CSV and JSON forms of the analysis results. Numbers are written in their
// shortest round-trip form, so identical inputs give byte-identical files.

#include "fmh/garch.hpp"
#include "fmh/liquidity.hpp"
#include "fmh/rolling.hpp"
#include "fmh/scaling.hpp"
#include "fmh/synth.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>
#include <vector>

namespace fmh {

/// {omega, alpha, beta, loglik, converged, iterations}
nlohmann::ordered_json to_json(const GarchFit& fit);
/// {q, hurst, log_intercept, r_squared, stderr_hurst}
nlohmann::ordered_json to_json(const ScalingFit& fit);
/// {f0, f_sigma, f_range, f_ratio}
nlohmann::ordered_json to_json(const LiquidityIndicators& indicators);
/// One rolling-output record, same fields as a CSV row.
nlohmann::ordered_json to_json(const WindowResult& result);
/// Every field, keyed by field name; GARCH options nest under "garch".
nlohmann::ordered_json to_json(const RollingConfig& config);
nlohmann::ordered_json to_json(const GeneratorSpec& spec);

/// Header "s,F_q(s)".
void write_fluctuation_csv(std::ostream& out, const FluctuationProfile& profile);

/// Header "date,h".
void write_variance_path_csv(std::ostream& out, std::span<const Date> dates,
                             std::span<const double> h);

/// Header: date,hurst,stderr_hurst,r_squared,f0,f_sigma,f_range,f_ratio,garch_converged
/// followed by hurst_q<q> for every q other than 2 present in the results.
void write_rolling_csv(std::ostream& out, std::span<const WindowResult> results);
void write_rolling_jsonl(std::ostream& out, std::span<const WindowResult> results);

/// Parses a rolling CSV back. Only the fixed columns are read; extra columns
/// are ignored. Throws InputError with the line number on malformed rows.
std::vector<WindowResult> read_rolling_csv(std::istream& in,
                                           const std::string& source_name = "<stream>");

}  // namespace fmh
