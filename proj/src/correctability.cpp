#include "asreval/correctability.hpp"

#include "asreval/align.hpp"
#include "asreval/error.hpp"
#include "asreval/stats.hpp"

namespace asreval {

CorrectabilityRecord oracle_select(const TranscriptRecord& record, const PhoneticOptions& phonetic) {
    if (!record.corrected_hypothesis) throw ValidationError(record.id, "no corrected_hypothesis");

    const NormalizedText ref = normalize(record.reference);
    const NormalizedText base = normalize(record.hypothesis);
    const NormalizedText corrected = normalize(*record.corrected_hypothesis);

    CorrectabilityRecord out;
    out.id = record.id;
    out.wer_base = wer(ref, base).wer;
    out.wer_corrected = wer(ref, corrected).wer;
    out.delta = out.wer_base - out.wer_corrected;
    out.chosen = out.wer_corrected < out.wer_base ? Choice::Corrected : Choice::Base;

    if (phonetic.kind == PhoneticOptions::Kind::Phoneme) {
        if (!phonetic.lexicon) throw DomainError("phoneme similarity requested without a lexicon");
        out.psim_uncorrected = psim_phoneme(ref, base, *phonetic.lexicon);
    } else {
        out.psim_uncorrected = psim_soundex(ref, base);
    }
    return out;
}

std::vector<CorrectabilityRecord> oracle_select_all(std::span<const TranscriptRecord> records,
                                                    const PhoneticOptions& phonetic) {
    std::vector<CorrectabilityRecord> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(oracle_select(r, phonetic));
    return out;
}

OracleWer oracle_corpus_wer(std::span<const CorrectabilityRecord> records) {
    if (records.empty()) throw DomainError("oracle_corpus_wer: empty corpus");
    OracleWer sums;
    for (const auto& r : records) {
        sums.without += r.wer_base;
        sums.with_all += r.wer_corrected;
        sums.oracle += r.chosen == Choice::Corrected ? r.wer_corrected : r.wer_base;
    }
    const auto n = static_cast<double>(records.size());
    return {sums.without / n, sums.with_all / n, sums.oracle / n};
}

CorrelationResult correctability_correlation(std::span<const CorrectabilityRecord> records) {
    std::vector<double> delta, psim;
    delta.reserve(records.size());
    psim.reserve(records.size());
    for (const auto& r : records) {
        delta.push_back(r.delta);
        psim.push_back(r.psim_uncorrected);
    }
    CorrelationResult res;
    res.n = records.size();
    res.r = stats::pearson(delta, psim);
    res.p = stats::pearson_pvalue(res.r, res.n);
    return res;
}

}  // namespace asreval
