#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asreval/corpus.hpp"

namespace asreval {

struct NLIProbs {
    double entail = 0.0;
    double contradict = 0.0;
    double neutral = 0.0;
};

// Each probability in [0,1] and the triple sums to 1 within 1e-6.
void validate(const NLIProbs& p);

// Bidirectional entailment: mean of the two directional entailments.
double nli_score(const NLIProbs& forward, const NLIProbs& backward);

// Channel values read from score files, cache or the remote scorer.
struct PartialScores {
    std::optional<double> s_nli;
    std::optional<double> s_sem;
    std::map<std::string, double> extras;

    // Field-wise override: set fields of `later` replace ours.
    void merge(const PartialScores& later);
};

struct ScoreVector {
    double s_nli = 0.0;   // [0,1]
    double s_sem = 0.0;   // [-1,1], raw BERTScore F1
    double s_phon = 0.0;  // [0,1], Psim II
    double wer = 0.0;
    std::map<std::string, double> extras;
};

enum class Provenance { File, Cache, Remote, Local };
std::string_view provenance_name(Provenance p);

struct AssembledScores {
    std::string id;
    ScoreVector scores;
    Provenance nli_source = Provenance::File;
    Provenance sem_source = Provenance::File;
    // s_phon and wer are always Local.
};

using ScoreTable = std::map<std::string, PartialScores>;

// Suffix under which score files carry channels for a record's corrected
// hypothesis, e.g. "u17#corrected".
inline constexpr std::string_view kCorrectedSuffix = "#corrected";

// JSONL: {"id": str, "s_nli": num?, "s_sem": num?, "extras": {str: num}?}.
// Throws ParseError (line number) or ValidationError (range, with id).
ScoreTable parse_scores(std::string_view jsonl, const std::string& source_name);
ScoreTable load_scores(const std::string& path);
// Later paths override earlier ones field-wise.
ScoreTable load_scores(std::span<const std::string> paths);

std::string to_jsonl(const std::string& id, const PartialScores& scores);

struct RemoteResult {
    NLIProbs nli_forward;   // premise = reference
    NLIProbs nli_backward;  // premise = hypothesis
    double s_sem = 0.0;
    std::string scorer_version;
};

struct RemoteOptions {
    std::chrono::milliseconds timeout{30000};
    int max_attempts = 3;
    std::chrono::milliseconds backoff{1000};  // doubled after each failed attempt
};

struct HealthStatus {
    bool ready = false;  // 200; a 503 means the models are still loading
    std::string status;
    std::map<std::string, std::string> model_versions;
    std::string scorer_version;  // X-Scorer-Version header, if sent
};

// Client for the scorer sidecar (POST /nli, POST /semantic, GET /health).
class RemoteScorer {
public:
    explicit RemoteScorer(std::string endpoint, RemoteOptions options = {});

    // One request, no retries. TransportError when unreachable,
    // ProtocolError on any status other than 200/503 or a malformed body.
    HealthStatus health() const;

    // Raw texts are sent; the service does its own preprocessing.
    RemoteResult fetch(const std::string& reference, const std::string& hypothesis) const;
    NLIProbs nli(const std::string& premise, const std::string& hypothesis) const;
    double semantic_f1(const std::string& reference, const std::string& candidate) const;

    const std::string& endpoint() const noexcept { return endpoint_; }

private:
    std::string endpoint_;
    RemoteOptions options_;
};

RemoteResult fetch_remote(const std::string& reference, const std::string& hypothesis,
                          const std::string& endpoint, RemoteOptions options = {});

// Write-through cache of remote results, keyed by a content hash of
// (normalized reference, normalized hypothesis, scorer version). Same
// JSONL schema as score files, the hash standing in for the id.
class ScoreCache {
public:
    // Empty path: in-memory only.
    explicit ScoreCache(std::string path = {}, std::string scorer_version = "unversioned");

    static std::string key(const std::string& reference, const std::string& hypothesis,
                           const std::string& scorer_version);

    std::optional<PartialScores> get(const std::string& reference, const std::string& hypothesis) const;
    // Persists (append + flush) before returning.
    void put(const std::string& reference, const std::string& hypothesis, const PartialScores& scores);

    std::size_t size() const;
    const std::string& scorer_version() const noexcept { return version_; }

private:
    std::string path_;
    std::string version_;
    mutable std::mutex mutex_;
    std::map<std::string, PartialScores> entries_;
};

struct ScoreSources {
    const ScoreTable* files = nullptr;
    const RemoteScorer* remote = nullptr;
    ScoreCache* cache = nullptr;
};

enum class HypothesisKind { Base, Corrected };

// Complete vector for one record. File scores win over cache, cache over
// the remote. Throws MissingChannelError naming the record and channel.
AssembledScores assemble(const TranscriptRecord& record, const ScoreSources& sources,
                         HypothesisKind kind = HypothesisKind::Base);

struct AssembleFailure {
    std::string id;
    std::string message;
};

struct AssembleBatch {
    std::vector<std::optional<AssembledScores>> results;  // corpus order
    std::vector<AssembleFailure> failures;                // corpus order
};

// Assembles every record with up to `concurrency` workers; output order
// always follows the input.
AssembleBatch assemble_all(std::span<const TranscriptRecord> records, const ScoreSources& sources,
                           HypothesisKind kind = HypothesisKind::Base, std::size_t concurrency = 4);

}  // namespace asreval
