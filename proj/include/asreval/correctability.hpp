#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asreval/corpus.hpp"
#include "asreval/phonetic.hpp"

namespace asreval {

// Prompt used to obtain the corrected transcripts this module analyzes.
// Corrections are generated outside this toolkit.
inline constexpr std::string_view kCorrectionPrompt =
    "Correct this ASR transcript for readability, clarity, and spelling while preserving the "
    "original meaning. Make minimal changes, fixing errors or incorrect terms and names without "
    "unnecessary rephrasing.";

enum class Choice { Base, Corrected };

struct CorrectabilityRecord {
    std::string id;
    double wer_base = 0.0;
    double wer_corrected = 0.0;
    double delta = 0.0;  // wer_base - wer_corrected; positive when the correction helped
    double psim_uncorrected = 0.0;
    Choice chosen = Choice::Base;
};

// Which phonetic similarity feeds psim_uncorrected.
struct PhoneticOptions {
    enum class Kind { Soundex, Phoneme } kind = Kind::Soundex;
    const Lexicon* lexicon = nullptr;  // required for Phoneme
};

// Corrected is chosen only on strict WER improvement.
CorrectabilityRecord oracle_select(const TranscriptRecord& record, const PhoneticOptions& phonetic = {});

std::vector<CorrectabilityRecord> oracle_select_all(std::span<const TranscriptRecord> records,
                                                    const PhoneticOptions& phonetic = {});

struct OracleWer {
    double without = 0.0;
    double with_all = 0.0;
    double oracle = 0.0;
};

// Macro WER for base, corrected, and oracle-selected hypotheses.
OracleWer oracle_corpus_wer(std::span<const CorrectabilityRecord> records);

struct CorrelationResult {
    double r = 0.0;
    double p = 1.0;
    std::size_t n = 0;
};

// Pearson(delta, psim_uncorrected) with its two-sided p-value.
CorrelationResult correctability_correlation(std::span<const CorrectabilityRecord> records);

}  // namespace asreval
