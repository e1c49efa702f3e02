#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace asreval::report {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Fixed-point with '.' as decimal separator regardless of locale. Empty
// string for nullopt.
std::string fixed(double value, int precision);
std::string fixed(const std::optional<double>& value, int precision);
// Ratio rendered as a percentage with two decimals.
std::string percent(double ratio);

void write_tsv(std::ostream& out, const Table& table);
void write_csv(std::ostream& out, const Table& table);

// Running mean that goes undefined as soon as one value is missing.
class MeanAccumulator {
public:
    void add(const std::optional<double>& v) {
        if (!v) {
            complete_ = false;
            return;
        }
        sum_ += *v;
        ++n_;
    }
    std::optional<double> value() const {
        if (!complete_ || n_ == 0) return std::nullopt;
        return sum_ / static_cast<double>(n_);
    }

private:
    double sum_ = 0.0;
    std::size_t n_ = 0;
    bool complete_ = true;
};

}  // namespace asreval::report
