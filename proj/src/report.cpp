#include "asreval/report.hpp"

#include <cmath>
#include <cstdio>

namespace asreval::report {

std::string fixed(double value, int precision) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, value);
    std::string s(buf);
    // Locale-proof: snprintf may use ',' under some LC_NUMERIC settings.
    for (char& c : s)
        if (c == ',') c = '.';
    if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos) {
        if (!s.empty() && s[0] == '-') s.erase(0, 1);
    }
    return s;
}

std::string fixed(const std::optional<double>& value, int precision) {
    return value ? fixed(*value, precision) : std::string();
}

std::string percent(double ratio) { return fixed(ratio * 100.0, 2); }

namespace {

void write_delimited(std::ostream& out, const Table& table, char sep) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << sep;
            out << cells[i];
        }
        out << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
}

}  // namespace

void write_tsv(std::ostream& out, const Table& table) { write_delimited(out, table, '\t'); }
void write_csv(std::ostream& out, const Table& table) { write_delimited(out, table, ','); }

}  // namespace asreval::report
