#pragma once

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tdchan/channel.hpp"
#include "tdchan/spectrum.hpp"
#include "tdchan/verification.hpp"

namespace tdchan::io {

using nlohmann::json;

/// 17 significant digits, "null" for non-finite values.
std::string format_number(double x);

/// Serializes with format_number for every floating-point value so that
/// output round-trips exactly and diffs are reproducible.
std::string dump(const json& value, int indent = 2);

/// {"dim": n, "rows": [[[re, im], ...], ...]}. Throws Error(ParseError) with
/// the offending field named.
CMatrix matrix_from_json(const json& doc);
json matrix_to_json(const CMatrix& m);

/// "a:b:steps" (inclusive endpoints, steps >= 2) or a single number.
std::vector<double> parse_grid(std::string_view spec);

/// "a:b" or a single integer.
std::pair<int, int> parse_int_range(std::string_view spec);

/// Comma-separated decimals.
std::vector<double> parse_list(std::string_view spec);

json spectrum_to_json(const Spectrum& s);

json scan_report_to_json(const ScanReport& report);

/// Header: kind,d,t,k,samples,vertices,violations,worst_margin,seed
std::string scan_csv_header();
std::string scan_cell_csv(const ScanCell& cell);

}  // namespace tdchan::io
