#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asreval/corpus.hpp"

namespace asreval {

enum class EditOp { Match, Substitute, Insert, Delete };

struct AlignStep {
    EditOp op;
    // Position in the reference / hypothesis consumed by this step, or -1
    // when the step consumes nothing on that side (Insert / Delete).
    std::ptrdiff_t ref_index;
    std::ptrdiff_t hyp_index;

    bool operator==(const AlignStep&) const = default;
};

struct Alignment {
    std::vector<AlignStep> ops;
    std::size_t distance = 0;

    std::size_t count(EditOp op) const;
};

// Unit-cost alignment of a (reference) onto b (hypothesis). Ties resolve
// Match > Substitute > Delete > Insert, walking back from the end.
template <typename T>
Alignment align(std::span<const T> a, std::span<const T> b);

Alignment edit_distance(std::span<const std::string> ref, std::span<const std::string> hyp);

// Applies the alignment to ref; returns the resulting sequence.
std::vector<std::string> replay(const Alignment& alignment, std::span<const std::string> ref,
                                std::span<const std::string> hyp);

// Distance value only, through the SIMD-dispatched kernel.
std::size_t edit_distance_value(std::span<const std::string> a, std::span<const std::string> b);

struct WerResult {
    double wer = 0.0;  // not clamped; can exceed 1
    std::size_t substitutions = 0;
    std::size_t insertions = 0;
    std::size_t deletions = 0;
    std::size_t ref_len = 0;

    std::size_t edits() const noexcept { return substitutions + insertions + deletions; }
};

// Throws DomainError when the reference has no tokens.
WerResult wer(const NormalizedText& reference, const NormalizedText& hypothesis);
WerResult wer(std::string_view reference, std::string_view hypothesis);

// Character-level rate over the normalized text, tokens joined by a
// single space.
WerResult cer(std::string_view reference, std::string_view hypothesis);

enum class Aggregation { Macro, Micro };

double corpus_wer(std::span<const WerResult> results, Aggregation mode = Aggregation::Macro);

}  // namespace asreval

#include "asreval/align_impl.hpp"
