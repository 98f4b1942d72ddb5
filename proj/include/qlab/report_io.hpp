#pragma once

// CSV and JSON emission for reports. Doubles are written with 17
// significant digits so identical values give byte-identical files.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "qlab/explab.hpp"
#include "qlab/moments.hpp"

namespace qlab {

std::string format_double(double v);

const std::vector<std::string>& moment_report_columns();
const std::vector<std::string>& mean_value_report_columns();

void write_csv_header(std::ostream& out, const std::vector<std::string>& columns);
std::vector<std::string> csv_fields(const MomentReport& r);
std::vector<std::string> csv_fields(const MeanValueReport& r);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

nlohmann::ordered_json to_json(const MomentReport& r);
nlohmann::ordered_json to_json(const MeanValueReport& r);
nlohmann::ordered_json to_json(const CurveValues& c);
nlohmann::ordered_json to_json(const ScanMaxResult& s);
nlohmann::ordered_json to_json(const HoughRun& run);
nlohmann::ordered_json to_json(const BtRun& run);

// Experiment rows: MomentReport columns followed by run-specific columns.
std::vector<std::string> hough_run_columns();
std::vector<std::string> csv_fields(const HoughRun& run);
std::vector<std::string> bt_run_columns();
std::vector<std::string> csv_fields(const BtRun& run);

}  // namespace qlab
