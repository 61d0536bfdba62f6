#pragma once

// Report model shared by every CLI subcommand. A report is a list of scalar
// fields plus an optional table. JSON nests the table as an array of row
// objects; CSV denormalizes it, repeating the scalar fields on every row.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "error.hpp"

namespace phisig {

/// A count that may exceed what consumers can hold exactly; written as a
/// decimal string.
struct Count {
    std::uint64_t value;
    friend bool operator==(const Count&, const Count&) = default;
};

using IntList = std::vector<std::uint64_t>;

using Cell = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string,
                          Count, IntList>;

template <class T>
Cell optional_cell(const std::optional<T>& v) {
    return v ? Cell{*v} : Cell{};
}

inline Cell optional_count(const std::optional<std::uint64_t>& v) {
    return v ? Cell{Count{*v}} : Cell{};
}

/// Shortest decimal text that round-trips the double (at most 17 significant
/// digits). Fixed notation for 1e-4 <= |v| < 1e16, scientific otherwise.
inline std::string format_double(double v) {
    char buf[64];
    const double a = std::fabs(v);
    const auto fmt = a == 0.0 || (a >= 1e-4 && a < 1e16) ? std::chars_format::fixed
                                                          : std::chars_format::scientific;
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, fmt);
    return std::string(buf, ptr);
}

inline std::string cell_text(const Cell& c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(std::uint64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return std::isfinite(v) ? format_double(v) : ""; }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(Count c) const { return std::to_string(c.value); }
        std::string operator()(const IntList& l) const {
            std::string s;
            for (std::size_t i = 0; i < l.size(); ++i) {
                if (i)
                    s += ' ';
                s += std::to_string(l[i]);
            }
            return s;
        }
    };
    return std::visit(Visitor{}, c);
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(bool b) const { return b; }
        nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
        nlohmann::ordered_json operator()(std::uint64_t v) const { return v; }
        nlohmann::ordered_json operator()(double v) const {
            if (!std::isfinite(v))
                return nullptr;
            return v;
        }
        nlohmann::ordered_json operator()(const std::string& s) const { return s; }
        nlohmann::ordered_json operator()(Count c) const { return std::to_string(c.value); }
        nlohmann::ordered_json operator()(const IntList& l) const { return l; }
    };
    return std::visit(Visitor{}, c);
}

struct Report {
    std::string kind;
    std::vector<std::pair<std::string, Cell>> fields;
    std::string table_name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    Report& field(std::string name, Cell value) {
        fields.emplace_back(std::move(name), std::move(value));
        return *this;
    }

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size())
            fail(ErrorKind::format, "report row width mismatch in " + kind);
        rows.push_back(std::move(row));
    }
};

/// Metadata embedded in every JSON report.
struct ReportHeader {
    std::string tool;
    std::string version;
    nlohmann::ordered_json config;
    std::uint64_t sieve_limit = 0;
};

inline nlohmann::ordered_json to_json(const Report& r, const ReportHeader& h) {
    nlohmann::ordered_json j;
    j["tool"] = h.tool;
    j["version"] = h.version;
    j["config"] = h.config;
    j["sieve_limit"] = h.sieve_limit ? nlohmann::ordered_json(h.sieve_limit) : nullptr;
    j["report"] = r.kind;
    for (const auto& [k, v] : r.fields)
        j[k] = cell_json(v);
    if (!r.table_name.empty()) {
        auto rows = nlohmann::ordered_json::array();
        for (const auto& row : r.rows) {
            nlohmann::ordered_json o;
            for (std::size_t i = 0; i < r.columns.size(); ++i)
                o[r.columns[i]] = cell_json(row[i]);
            rows.push_back(std::move(o));
        }
        j[r.table_name] = std::move(rows);
    }
    return j;
}

inline void write_json(std::ostream& out, const Report& r, const ReportHeader& h) {
    out << to_json(r, h).dump(2) << '\n';
}

inline std::string csv_quote(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(s);
    std::string q = "\"";
    for (char c : s) {
        if (c == '"')
            q += '"';
        q += c;
    }
    q += '"';
    return q;
}

inline void write_csv_line(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            out << ',';
        out << csv_quote(cells[i]);
    }
    out << '\n';
}

/// Header row, then one row per table row with the scalar fields prefixed.
/// A report with no table rows still emits one row carrying the fields.
inline void write_csv(std::ostream& out, const Report& r) {
    std::vector<std::string> header;
    for (const auto& [k, v] : r.fields)
        header.push_back(k);
    for (const auto& c : r.columns)
        header.push_back(c);
    write_csv_line(out, header);

    std::vector<std::string> prefix;
    for (const auto& [k, v] : r.fields)
        prefix.push_back(cell_text(v));
    if (r.rows.empty()) {
        auto line = prefix;
        line.resize(header.size());
        write_csv_line(out, line);
        return;
    }
    for (const auto& row : r.rows) {
        auto line = prefix;
        for (const auto& c : row)
            line.push_back(cell_text(c));
        write_csv_line(out, line);
    }
}

/// RFC 4180 parser (LF or CRLF record separators).
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> rec;
    std::string cell;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
            continue;
        }
        if (c == '"') {
            if (!cell.empty())
                fail(ErrorKind::format, "csv: quote inside unquoted field");
            quoted = true;
            any = true;
        } else if (c == ',') {
            rec.push_back(std::move(cell));
            cell.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            rec.push_back(std::move(cell));
            cell.clear();
            records.push_back(std::move(rec));
            rec.clear();
            any = false;
        } else {
            cell += c;
            any = true;
        }
    }
    if (quoted)
        fail(ErrorKind::format, "csv: unterminated quoted field");
    if (any || !cell.empty()) {
        rec.push_back(std::move(cell));
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace phisig
