#ifndef MAXSPEC_CSV_HPP
#define MAXSPEC_CSV_HPP

#include <cctype>
#include <charconv>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "maxspec/errors.hpp"

namespace maxspec {

/// How to ingest a numeric column from delimited text. Lines starting with
/// '#' are comments (the simulate command writes its config that way).
/// A header row is consumed when the column is addressed by name, or when the
/// first data row's selected field is not numeric.
struct IngestSpec {
    enum class NonPositive { error, drop };

    std::variant<int, std::string> column = 0;  // index (0-based) or header name
    char delimiter = ',';
    int skip_rows = 0;
    NonPositive policy = NonPositive::error;
};

struct IngestStats {
    std::int64_t rows_used = 0;
    std::int64_t dropped_nonpositive = 0;
    bool header_skipped = false;
};

namespace detail {

// One RFC-4180 record: quoted fields may contain delimiters, doubled quotes
// and (when reading a whole stream) embedded newlines. Returns false at EOF.
inline bool read_record(std::istream& is, char delim, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    int c;
    while ((c = is.get()) != std::char_traits<char>::eof()) {
        any = true;
        const char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (is.peek() == '"') {
                    field.push_back('"');
                    is.get();
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"' && field.empty()) {
            in_quotes = true;
        } else if (ch == delim) {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n') {
            break;
        } else if (ch == '\r') {
            if (is.peek() == '\n') is.get();
            break;
        } else {
            field.push_back(ch);
        }
    }
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

inline std::optional<double> parse_double(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    if (b == e) return std::nullopt;
    double v = 0.0;
    const auto res = std::from_chars(s.data() + b, s.data() + e, v);
    if (res.ec != std::errc{} || res.ptr != s.data() + e) return std::nullopt;
    return v;
}

}  // namespace detail

/// Stream the selected column through `sink`, one positive value at a time.
/// Memory stays O(1) plus I/O buffers, so arbitrarily long inputs can feed
/// the sequential spectrum. Throws ingest_error with the offending row.
inline IngestStats ingest_column(std::istream& is, const IngestSpec& spec,
                                 const std::function<void(double)>& sink) {
    IngestStats stats;
    std::vector<std::string> fields;
    std::int64_t row = 0;
    int col = -1;
    bool resolved = false;
    bool first_data_row = true;
    const auto* name = std::get_if<std::string>(&spec.column);
    if (!name) {
        col = std::get<int>(spec.column);
        if (col < 0) throw ingest_error("column index must be >= 0");
        resolved = true;
    }

    int to_skip = spec.skip_rows;
    while (detail::read_record(is, spec.delimiter, fields)) {
        ++row;
        if (!fields.empty() && !fields[0].empty() && fields[0][0] == '#') continue;
        if (to_skip > 0) {
            --to_skip;
            continue;
        }
        if (name && !resolved) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] == *name) {
                    col = static_cast<int>(i);
                    resolved = true;
                    break;
                }
            }
            if (!resolved)
                throw ingest_error("header row " + std::to_string(row) + " has no column named '" +
                                   *name + "'");
            stats.header_skipped = true;
            continue;
        }
        if (static_cast<std::size_t>(col) >= fields.size())
            throw ingest_error("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                               " fields, column " + std::to_string(col) + " requested");
        const auto value = detail::parse_double(fields[static_cast<std::size_t>(col)]);
        if (!value) {
            if (first_data_row) {
                // Unnamed header row; skip it once.
                first_data_row = false;
                stats.header_skipped = true;
                continue;
            }
            throw ingest_error("row " + std::to_string(row) + " column " + std::to_string(col) +
                               ": not a number: '" + fields[static_cast<std::size_t>(col)] + "'");
        }
        first_data_row = false;
        if (!(*value > 0.0)) {
            if (spec.policy == IngestSpec::NonPositive::error)
                throw ingest_error("row " + std::to_string(row) + ": non-positive value " +
                                   std::to_string(*value));
            ++stats.dropped_nonpositive;
            continue;
        }
        ++stats.rows_used;
        sink(*value);
    }
    return stats;
}

/// Materialized variant of ingest_column.
inline std::vector<double> read_column(std::istream& is, const IngestSpec& spec,
                                       IngestStats* stats_out = nullptr) {
    std::vector<double> values;
    IngestStats stats = ingest_column(is, spec, [&](double v) { values.push_back(v); });
    if (values.size() < 2)
        throw ingest_error("input yielded " + std::to_string(values.size()) +
                           " positive values; need at least 2");
    if (stats_out) *stats_out = stats;
    return values;
}

}  // namespace maxspec

#endif
