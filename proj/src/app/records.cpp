#include "biphoton/app/records.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace biphoton::app {

using nlohmann::ordered_json;

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::vector<ResultRecord> to_records(const std::vector<Interferogram>& scans)
{
    std::vector<ResultRecord> out;
    if (scans.empty())
        return out;
    const std::size_t n = scans.front().size();
    for (const auto& s : scans)
        if (s.size() != n)
            throw std::invalid_argument("scans differ in length");
    out.reserve(n * scans.size());
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& s : scans)
            out.push_back({s.tau[i] / kFemtosecond, s.singles_port1[i], s.singles_port2[i], s.coincidence[i],
                           s.engine});
    return out;
}

void write_csv(std::ostream& out, const std::vector<ResultRecord>& records)
{
    out << kCsvHeader << '\n';
    for (const auto& r : records)
        out << format_number(r.tau_fs) << ',' << format_number(r.singles_port1) << ','
            << format_number(r.singles_port2) << ',' << format_number(r.coincidence) << ',' << r.engine << '\n';
}

void write_json(std::ostream& out, const std::vector<ResultRecord>& records)
{
    // numbers pass through format_number so both formats carry the same digits
    out << "{\"records\":[";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        out << (i ? ",\n" : "\n") << "{\"tau_fs\":" << format_number(r.tau_fs)
            << ",\"singles_port1\":" << format_number(r.singles_port1)
            << ",\"singles_port2\":" << format_number(r.singles_port2)
            << ",\"coincidence\":" << format_number(r.coincidence) << ",\"engine\":" << ordered_json(r.engine).dump()
            << "}";
    }
    out << "\n]}\n";
}

namespace {

double parse_field(const std::string& cell, std::size_t line, const char* name)
{
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v))
        throw SchemaError("line " + std::to_string(line) + ": column '" + name + "' is not a finite number: '" +
                          cell + "'");
    return v;
}

void check_record(const ResultRecord& r, std::size_t line)
{
    if (r.engine.empty())
        throw SchemaError("line " + std::to_string(line) + ": empty engine tag");
    if (std::abs(r.singles_port1 + r.singles_port2 - 2.0) > 1e-6)
        throw SchemaError("line " + std::to_string(line) + ": port intensities do not sum to 2");
}

std::vector<ResultRecord> read_json_records(const std::string& text)
{
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("records") || !doc["records"].is_array())
        throw SchemaError("JSON results need a 'records' array");
    std::vector<ResultRecord> out;
    std::size_t index = 0;
    for (const auto& row : doc["records"]) {
        ++index;
        auto num = [&](const char* key) {
            if (!row.is_object() || !row.contains(key) || !row[key].is_number())
                throw SchemaError("record " + std::to_string(index) + ": missing number '" + key + "'");
            return row[key].get<double>();
        };
        if (!row.contains("engine") || !row["engine"].is_string())
            throw SchemaError("record " + std::to_string(index) + ": missing string 'engine'");
        ResultRecord r{num("tau_fs"), num("singles_port1"), num("singles_port2"), num("coincidence"),
                       row["engine"].get<std::string>()};
        check_record(r, index);
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace

std::vector<ResultRecord> read_records(std::istream& in)
{
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        throw SchemaError("empty result file");
    if (text[first] == '{')
        return read_json_records(text);

    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kCsvHeader)
        throw SchemaError("unexpected header '" + line + "', expected '" + std::string(kCsvHeader) + "'");

    std::vector<ResultRecord> out;
    std::size_t number = 1;
    while (std::getline(lines, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (cells.size() != 5)
            throw SchemaError("line " + std::to_string(number) + ": expected 5 columns, found " +
                              std::to_string(cells.size()));
        ResultRecord r{parse_field(cells[0], number, "tau_fs"), parse_field(cells[1], number, "singles_port1"),
                       parse_field(cells[2], number, "singles_port2"), parse_field(cells[3], number, "coincidence"),
                       cells[4]};
        check_record(r, number);
        out.push_back(std::move(r));
    }
    // a truncated final line has no newline terminator
    if (!text.empty() && text.back() != '\n')
        throw SchemaError("file does not end with a newline (truncated?)");
    if (out.empty())
        throw SchemaError("no records");
    return out;
}

std::pair<Trace, Trace> traces_for_first_engine(const std::vector<ResultRecord>& records)
{
    if (records.empty())
        throw SchemaError("no records");
    const std::string& engine = records.front().engine;
    Trace singles;
    Trace coincidence;
    for (const auto& r : records) {
        if (r.engine != engine)
            continue;
        const double tau = r.tau_fs * kFemtosecond;
        if (!singles.tau.empty() && !(tau > singles.tau.back()))
            throw SchemaError("delays for engine '" + engine + "' are not increasing");
        singles.tau.push_back(tau);
        singles.values.push_back(r.singles_port1);
        coincidence.tau.push_back(tau);
        coincidence.values.push_back(r.coincidence);
    }
    if (singles.tau.size() < 2)
        throw SchemaError("need at least two records per engine");
    return {std::move(singles), std::move(coincidence)};
}

ordered_json report_to_json(const VisibilityReport& r)
{
    auto fs = [](const std::optional<double>& v) { return v ? ordered_json(*v / kFemtosecond) : ordered_json(nullptr); };
    ordered_json j;
    j["v1"] = r.v1;
    j["v12"] = r.v12;
    j["complementarity_sum"] = r.complementarity_sum;
    j["window"] = ordered_json::array({r.window.min / kFemtosecond, r.window.max / kFemtosecond});
    j["fringe_period_singles"] = fs(r.fringe_period_singles);
    j["fringe_period_coincidence"] = fs(r.fringe_period_coincidence);
    j["hom_fwhm"] = fs(r.hom_fwhm);
    return j;
}

} // namespace biphoton::app
