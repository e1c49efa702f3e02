#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "asreval/corpus.hpp"

namespace asreval {

// American Soundex with H/W transparency. Digits and apostrophes are
// dropped first; throws DomainError when nothing alphabetic remains or the
// word contains anything else.
std::string soundex(std::string_view word);

double jaro(std::string_view a, std::string_view b);

// jaro + l * prefix_scale * (1 - jaro), l = common prefix capped at
// max_prefix. No boost threshold. prefix_scale must lie in [0, 0.25].
double jaro_winkler(std::string_view a, std::string_view b, double prefix_scale = 0.1,
                    std::size_t max_prefix = 4);

// The 39 stress-free ARPAbet phonemes.
bool is_arpabet(std::string_view symbol);

struct PhonemeSeq {
    std::vector<std::string> phonemes;
    // Spelled out letter by letter because the word was not in the lexicon.
    bool fallback = false;
};

// CMU pronouncing dictionary format. Only the first pronunciation of each
// word is kept; "WORD(2)" alternates are ignored.
class Lexicon {
public:
    Lexicon() = default;

    static Lexicon load(const std::string& path);
    static Lexicon parse(std::string_view text, const std::string& source_name = "<lexicon>");

    // Stress digits already stripped. nullptr when absent.
    const std::vector<std::string>* find(std::string_view word) const;
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::unordered_map<std::string, std::vector<std::string>> entries_;
};

PhonemeSeq g2p(std::string_view word, const Lexicon& lexicon);

// Symbol placed between words in the flattened phoneme sequence.
inline constexpr std::string_view kWordBoundary = "|";

std::vector<std::string> phoneme_sequence(const NormalizedText& text, const Lexicon& lexicon);

// Psim I: 1 - levenshtein / max length over flattened phoneme sequences.
double psim_phoneme(const NormalizedText& reference, const NormalizedText& hypothesis,
                    const Lexicon& lexicon);

struct SoundexSimilarity {
    double value = 0.0;
    std::size_t skipped_words = 0;  // tokens soundex could not encode
};

// Psim II: per-word Soundex codes joined by a space, then Jaro-Winkler.
SoundexSimilarity psim_soundex_detailed(const NormalizedText& reference,
                                        const NormalizedText& hypothesis);
double psim_soundex(const NormalizedText& reference, const NormalizedText& hypothesis);

// Joined per-word code string, exposed for reports and tests.
std::string soundex_codes(const NormalizedText& text, std::size_t* skipped = nullptr);

}  // namespace asreval
