#ifndef BIPHOTON_APP_RECORDS_HPP
#define BIPHOTON_APP_RECORDS_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "biphoton/analysis.hpp"
#include "biphoton/interferometer.hpp"

namespace biphoton::app {

inline constexpr const char* kCsvHeader = "tau_fs,singles_port1,singles_port2,coincidence,engine";

/// Malformed result file.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ResultRecord {
    double tau_fs;
    double singles_port1;
    double singles_port2;
    double coincidence;
    std::string engine;
};

/// Nine significant digits, locale independent.
std::string format_number(double v);

/// One record per delay and scan; several scans are interleaved per delay.
std::vector<ResultRecord> to_records(const std::vector<Interferogram>& scans);

void write_csv(std::ostream& out, const std::vector<ResultRecord>& records);
void write_json(std::ostream& out, const std::vector<ResultRecord>& records);

/// Reads CSV (or the JSON written by write_json). Throws SchemaError.
std::vector<ResultRecord> read_records(std::istream& in);

/// Records carrying the first engine tag in the file, as singles and coincidence traces (s).
std::pair<Trace, Trace> traces_for_first_engine(const std::vector<ResultRecord>& records);

/// Flat JSON object; times in fs, absent values as null.
nlohmann::ordered_json report_to_json(const VisibilityReport& r);

} // namespace biphoton::app

#endif
