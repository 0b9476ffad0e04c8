#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace pnpk {

/// Shortest representation that parses back to the same double.
std::string format_number(double v);

using Cell = std::variant<double, std::string>;

/// Rows with a header and optional metadata. CSV form: header line, one line
/// per row, then `# {json}` when meta is set. JSON form:
/// {"header": [...], "rows": [[...], ...], "meta": {...}}.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json meta;  // null when absent

    std::string to_csv() const;
    nlohmann::json to_json() const;

    /// Throws InvalidArgument on ragged rows or a missing header.
    static Table from_csv(std::string_view text);
    static Table from_json(const nlohmann::json& j);
};

}  // namespace pnpk
