#include "purify/report.hpp"

#include "purify/errors.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace purify {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

Cell parse_cell(const std::string& s) {
    if (!s.empty()) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() + s.size()) return v;
    }
    return s;
}

}  // namespace

double round12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

std::string format12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void ResultRecord::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw InvalidArgument("row width does not match the columns");
    for (auto& c : row) {
        if (auto* v = std::get_if<double>(&c)) {
            if (!std::isfinite(*v)) throw InvalidArgument("result rows must hold finite numbers");
            *v = round12(*v);
        }
    }
    rows.push_back(std::move(row));
}

std::string to_json(const ResultRecord& r) {
    ordered_json j;
    j["command"] = r.command;
    j["params"] = ordered_json::object();
    for (const auto& [k, v] : r.params) j["params"][k] = v;
    j["rows"] = ordered_json::array();
    for (const auto& row : r.rows) {
        ordered_json o = ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit([&](const auto& v) { o[r.columns[i]] = v; }, row[i]);
        }
        j["rows"].push_back(std::move(o));
    }
    j["meta"] = {{"version", r.version}, {"timestamp", r.timestamp}};
    return j.dump(2);
}

ResultRecord from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed result JSON: ") + e.what());
    }
    ResultRecord r;
    r.command = j.at("command").get<std::string>();
    for (const auto& [k, v] : j.at("params").items()) r.params[k] = v.get<std::string>();
    const auto& rows = j.at("rows");
    if (!rows.empty()) {
        for (const auto& [k, v] : rows.front().items()) r.columns.push_back(k);
    }
    for (const auto& o : rows) {
        std::vector<Cell> row;
        for (const auto& c : r.columns) {
            const auto& v = o.at(c);
            if (v.is_number()) {
                row.emplace_back(v.get<double>());
            } else {
                row.emplace_back(v.get<std::string>());
            }
        }
        r.rows.push_back(std::move(row));
    }
    r.version = j.at("meta").at("version").get<std::string>();
    r.timestamp = j.at("meta").at("timestamp").get<std::string>();
    return r;
}

std::string to_csv(const ResultRecord& r) {
    std::ostringstream os;
    os << "# command: " << r.command << '\n';
    for (const auto& [k, v] : r.params) os << "# param." << k << ": " << v << '\n';
    os << "# version: " << r.version << '\n';
    os << "# timestamp: " << r.timestamp << '\n';
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << csv_field(r.columns[i]);
    os << '\n';
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            if (const auto* v = std::get_if<double>(&row[i])) {
                os << format12(*v);
            } else {
                os << csv_field(std::get<std::string>(row[i]));
            }
        }
        os << '\n';
    }
    return os.str();
}

ResultRecord from_csv(const std::string& text) {
    ResultRecord r;
    std::istringstream is(text);
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto colon = line.find(": ");
            if (colon == std::string::npos) continue;
            const std::string key = line.substr(2, colon - 2), value = line.substr(colon + 2);
            if (key == "command") {
                r.command = value;
            } else if (key == "version") {
                r.version = value;
            } else if (key == "timestamp") {
                r.timestamp = value;
            } else if (key.rfind("param.", 0) == 0) {
                r.params[key.substr(6)] = value;
            }
        } else if (!header) {
            r.columns = split_csv_line(line);
            header = true;
        } else if (!line.empty()) {
            const auto fields = split_csv_line(line);
            if (fields.size() != r.columns.size()) throw InvalidArgument("CSV row width does not match the header");
            std::vector<Cell> row;
            for (const auto& f : fields) row.push_back(parse_cell(f));
            r.rows.push_back(std::move(row));
        }
    }
    return r;
}

}  // namespace purify
