#pragma once

// Tabular run results with JSON and CSV encodings.

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace purify {

using Cell = std::variant<double, std::string>;

inline constexpr const char* kLibraryVersion = "1.0.0";

struct ResultRecord {
    std::string command;
    std::map<std::string, std::string> params;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::string version = kLibraryVersion;
    std::string timestamp;  // UTC, ISO 8601

    // Numbers are rounded to 12 significant digits on insertion so that both
    // encodings carry identical values. Throws InvalidArgument on a non-finite
    // number or a width mismatch.
    void add_row(std::vector<Cell> row);

    friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

double round12(double v);
std::string format12(double v);
std::string utc_timestamp();

// {command, params, rows: [{column: value}], meta: {version, timestamp}}
std::string to_json(const ResultRecord& r);
ResultRecord from_json(const std::string& text);

// `# key: value` preamble lines, one header row, then data rows.
std::string to_csv(const ResultRecord& r);
ResultRecord from_csv(const std::string& text);

}  // namespace purify
