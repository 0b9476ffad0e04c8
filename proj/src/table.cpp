#include "pnpk/table.hpp"

#include <charconv>
#include <sstream>

#include "pnpk/error.hpp"

namespace pnpk {

namespace {

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.emplace_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

Cell parse_cell(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) return v;
    return s;
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            if (const auto* d = std::get_if<double>(&row[i])) {
                out += format_number(*d);
            } else {
                out += std::get<std::string>(row[i]);
            }
        }
        out += '\n';
    }
    if (!meta.is_null()) out += "# " + meta.dump() + "\n";
    return out;
}

nlohmann::json Table::to_json() const {
    nlohmann::json j;
    j["header"] = header;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : rows) {
        auto r = nlohmann::json::array();
        for (const auto& c : row) {
            if (const auto* d = std::get_if<double>(&c)) {
                r.push_back(*d);
            } else {
                r.push_back(std::get<std::string>(c));
            }
        }
        j["rows"].push_back(r);
    }
    j["meta"] = meta;
    return j;
}

Table Table::from_csv(std::string_view text) {
    Table t;
    std::istringstream in{std::string(text)};
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto body = line.find_first_not_of("# ");
            if (body != std::string::npos) {
                try {
                    t.meta = nlohmann::json::parse(line.substr(body));
                } catch (const nlohmann::json::exception&) {
                    throw Error(ErrorCode::InvalidArgument, "metadata line is not JSON");
                }
            }
            continue;
        }
        if (!have_header) {
            t.header = split(line);
            have_header = true;
            continue;
        }
        auto cells = split(line);
        if (cells.size() != t.header.size()) throw Error(ErrorCode::InvalidArgument, "ragged CSV row: " + line);
        std::vector<Cell> row;
        for (const auto& c : cells) row.push_back(parse_cell(c));
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw Error(ErrorCode::InvalidArgument, "CSV has no header");
    return t;
}

Table Table::from_json(const nlohmann::json& j) {
    Table t;
    t.header = j.at("header").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
        std::vector<Cell> row;
        for (const auto& c : r) {
            if (c.is_number()) {
                row.emplace_back(c.get<double>());
            } else {
                row.emplace_back(c.get<std::string>());
            }
        }
        if (row.size() != t.header.size()) throw Error(ErrorCode::InvalidArgument, "ragged JSON row");
        t.rows.push_back(std::move(row));
    }
    if (j.contains("meta")) t.meta = j.at("meta");
    return t;
}

}  // namespace pnpk
