#pragma once

#include <string>

#include <json.hpp>

#include "curv/measure.hpp"

namespace curv {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportSchema = 1;

// CSV rows "x,y,w"; blank lines and '#' comments allowed. Errors name the line.
Measure load_csv(const std::string& path);
void save_csv(const Measure& m, const std::string& path);

std::string fnv1a64_hex(const std::string& bytes);

nlohmann::json measure_summary(const Measure& m);

// Stamps version, schema, and a content hash over everything else, then
// writes pretty JSON to the path ("-" or empty: stdout). Same report, same
// bytes.
void write_report(nlohmann::json report, const std::string& path);
std::string render_report(nlohmann::json report);

} // namespace curv
