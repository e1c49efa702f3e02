#include "asreval/align.hpp"

#include "asreval/error.hpp"
#include "asreval/symbols.hpp"

namespace asreval {

std::size_t Alignment::count(EditOp op) const {
    return static_cast<std::size_t>(
        std::count_if(ops.begin(), ops.end(), [op](const AlignStep& s) { return s.op == op; }));
}

Alignment edit_distance(std::span<const std::string> ref, std::span<const std::string> hyp) {
    return align(ref, hyp);
}

std::vector<std::string> replay(const Alignment& alignment, std::span<const std::string> ref,
                                std::span<const std::string> hyp) {
    std::vector<std::string> out;
    for (const auto& step : alignment.ops) {
        switch (step.op) {
            case EditOp::Match:
                out.push_back(ref[static_cast<std::size_t>(step.ref_index)]);
                break;
            case EditOp::Substitute:
            case EditOp::Insert:
                out.push_back(hyp[static_cast<std::size_t>(step.hyp_index)]);
                break;
            case EditOp::Delete:
                break;
        }
    }
    return out;
}

std::size_t edit_distance_value(std::span<const std::string> a, std::span<const std::string> b) {
    SymbolTable table;
    const auto ia = table.intern_all(a);
    const auto ib = table.intern_all(b);
    return kernels::levenshtein(ia, ib);
}

namespace {

template <typename T>
WerResult rate_from(std::span<const T> ref, std::span<const T> hyp) {
    if (ref.empty()) throw DomainError("error rate: reference is empty");
    const Alignment al = align(ref, hyp);
    WerResult r;
    r.substitutions = al.count(EditOp::Substitute);
    r.insertions = al.count(EditOp::Insert);
    r.deletions = al.count(EditOp::Delete);
    r.ref_len = ref.size();
    r.wer = static_cast<double>(r.edits()) / static_cast<double>(r.ref_len);
    return r;
}

}  // namespace

WerResult wer(const NormalizedText& reference, const NormalizedText& hypothesis) {
    return rate_from<std::string>(reference.tokens, hypothesis.tokens);
}

WerResult wer(std::string_view reference, std::string_view hypothesis) {
    return wer(normalize(reference), normalize(hypothesis));
}

WerResult cer(std::string_view reference, std::string_view hypothesis) {
    const std::string ref = normalize(reference).joined();
    const std::string hyp = normalize(hypothesis).joined();
    return rate_from<char>(std::span<const char>(ref.data(), ref.size()),
                           std::span<const char>(hyp.data(), hyp.size()));
}

double corpus_wer(std::span<const WerResult> results, Aggregation mode) {
    if (results.empty()) throw DomainError("corpus_wer: no results");
    if (mode == Aggregation::Macro) {
        double sum = 0.0;
        for (const auto& r : results) sum += r.wer;
        return sum / static_cast<double>(results.size());
    }
    std::size_t edits = 0, ref_tokens = 0;
    for (const auto& r : results) {
        edits += r.edits();
        ref_tokens += r.ref_len;
    }
    return static_cast<double>(edits) / static_cast<double>(ref_tokens);
}

}  // namespace asreval
