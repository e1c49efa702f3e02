#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace asreval {

enum class Severity { High, Medium, Low, VeryLow, Unknown };

// "H", "M", "L", "VL"; anything else is rejected. Unknown has no label.
std::optional<Severity> parse_severity(std::string_view label);
std::string_view severity_label(Severity s);

// Report order for stratified tables.
inline constexpr Severity kSeverityOrder[] = {Severity::High, Severity::Medium, Severity::Low,
                                              Severity::VeryLow};

struct NormalizedText {
    std::vector<std::string> tokens;
    std::string original;

    std::string joined() const;
    bool empty() const noexcept { return tokens.empty(); }
};

// Uppercase, strip punctuation (intra-word apostrophes survive), split on
// whitespace and hyphens. Characters outside [A-Z0-9'] never reach a token.
NormalizedText normalize(std::string_view text);

struct TranscriptRecord {
    std::string id;
    std::string system_id;
    Severity severity = Severity::Unknown;
    std::string reference;
    std::string hypothesis;
    std::optional<std::string> corrected_hypothesis;
    std::optional<std::vector<int>> ratings;

    bool operator==(const TranscriptRecord&) const = default;
};

// Checks one record's invariants; throws ValidationError.
void validate(const TranscriptRecord& record);

// JSONL, one record per line. Blank lines are skipped. Throws ParseError
// (with line number), ValidationError, or Error for duplicate ids.
std::vector<TranscriptRecord> load_corpus(const std::string& path);
std::vector<TranscriptRecord> parse_corpus(std::string_view jsonl, const std::string& source_name);

std::string to_jsonl(const TranscriptRecord& record);
void save_corpus(const std::string& path, std::span<const TranscriptRecord> records);

double mean_rating(const TranscriptRecord& record);

struct AgreementReport {
    std::vector<double> pairwise_pearson;  // (0,1), (0,2), ..., (M-2,M-1)
    double min_r = 0.0;
    double max_r = 0.0;
    double rating_std = 0.0;  // population std of all N*M ratings
};

// Rows are rated pairs, columns annotators.
AgreementReport annotator_agreement(const std::vector<std::vector<double>>& ratings);

// Builds the ratings matrix from records; every record must carry the
// same number of ratings.
std::vector<std::vector<double>> ratings_matrix(std::span<const TranscriptRecord> records);

}  // namespace asreval
