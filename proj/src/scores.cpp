#include "asreval/scores.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "asreval/align.hpp"
#include "asreval/error.hpp"
#include "asreval/phonetic.hpp"

namespace asreval {

using nlohmann::json;

void validate(const NLIProbs& p) {
    for (double v : {p.entail, p.contradict, p.neutral}) {
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("NLI probability outside [0,1]");
    }
    if (std::fabs(p.entail + p.contradict + p.neutral - 1.0) > 1e-6)
        throw DomainError("NLI probabilities do not sum to 1");
}

double nli_score(const NLIProbs& forward, const NLIProbs& backward) {
    validate(forward);
    validate(backward);
    return 0.5 * (forward.entail + backward.entail);
}

void PartialScores::merge(const PartialScores& later) {
    if (later.s_nli) s_nli = later.s_nli;
    if (later.s_sem) s_sem = later.s_sem;
    for (const auto& [k, v] : later.extras) extras[k] = v;
}

std::string_view provenance_name(Provenance p) {
    switch (p) {
        case Provenance::File: return "file";
        case Provenance::Cache: return "cache";
        case Provenance::Remote: return "remote";
        case Provenance::Local: return "local";
    }
    return "unknown";
}

namespace {

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(std::string("cannot open ") + what + " '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double number_field(const json& v, const std::string& id, const std::string& name) {
    if (!v.is_number()) throw ValidationError(id, "'" + name + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError(id, "'" + name + "' is not finite");
    return d;
}

}  // namespace

ScoreTable parse_scores(std::string_view jsonl, const std::string& source_name) {
    ScoreTable table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < jsonl.size()) {
        auto end = jsonl.find('\n', pos);
        if (end == std::string_view::npos) end = jsonl.size();
        std::string_view line = jsonl.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(source_name, line_no, e.what());
        }
        if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string())
            throw ParseError(source_name, line_no, "expected an object with a string 'id'");
        const std::string id = obj["id"].get<std::string>();

        PartialScores ps;
        try {
            if (auto it = obj.find("s_nli"); it != obj.end() && !it->is_null()) {
                ps.s_nli = number_field(*it, id, "s_nli");
                if (*ps.s_nli < 0.0 || *ps.s_nli > 1.0) throw ValidationError(id, "s_nli outside [0,1]");
            }
            if (auto it = obj.find("s_sem"); it != obj.end() && !it->is_null()) {
                ps.s_sem = number_field(*it, id, "s_sem");
                if (*ps.s_sem < -1.0 || *ps.s_sem > 1.0) throw ValidationError(id, "s_sem outside [-1,1]");
            }
            if (auto it = obj.find("extras"); it != obj.end() && !it->is_null()) {
                if (!it->is_object()) throw ValidationError(id, "'extras' must be an object");
                for (const auto& [k, v] : it->items()) ps.extras[k] = number_field(v, id, "extras." + k);
            }
        } catch (const ValidationError& e) {
            throw ValidationError(id, e.detail() + " (" + source_name + ":" + std::to_string(line_no) + ")");
        }
        table[id].merge(ps);
    }
    return table;
}

ScoreTable load_scores(const std::string& path) { return parse_scores(read_file(path, "score file"), path); }

ScoreTable load_scores(std::span<const std::string> paths) {
    ScoreTable merged;
    for (const auto& path : paths) {
        for (const auto& [id, ps] : load_scores(path)) merged[id].merge(ps);
    }
    return merged;
}

std::string to_jsonl(const std::string& id, const PartialScores& scores) {
    json obj = json::object();
    obj["id"] = id;
    if (scores.s_nli) obj["s_nli"] = *scores.s_nli;
    if (scores.s_sem) obj["s_sem"] = *scores.s_sem;
    if (!scores.extras.empty()) obj["extras"] = scores.extras;
    return obj.dump();
}

// ---------------------------------------------------------------------------
// Remote scorer

namespace {

struct Endpoint {
    std::string base;    // scheme://host:port
    std::string prefix;  // path prefix without trailing slash
};

Endpoint split_endpoint(const std::string& url) {
    const auto scheme = url.find("://");
    const auto path_start = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    Endpoint ep;
    if (path_start == std::string::npos) {
        ep.base = url;
    } else {
        ep.base = url.substr(0, path_start);
        ep.prefix = url.substr(path_start);
        while (!ep.prefix.empty() && ep.prefix.back() == '/') ep.prefix.pop_back();
    }
    return ep;
}

bool retryable_status(int status) { return status == 502 || status == 503 || status == 504; }

double prob_field(const json& body, const char* name, const std::string& path) {
    auto it = body.find(name);
    if (it == body.end() || !it->is_number())
        throw ProtocolError(path + ": response lacks numeric '" + name + "'");
    return it->get<double>();
}

}  // namespace

RemoteScorer::RemoteScorer(std::string endpoint, RemoteOptions options)
    : endpoint_(std::move(endpoint)), options_(options) {
    if (endpoint_.empty()) throw DomainError("RemoteScorer: empty endpoint");
    if (options_.max_attempts < 1) throw DomainError("RemoteScorer: max_attempts must be >= 1");
}

namespace {

struct Response {
    json body;
    std::string version;
};

Response post_json(const std::string& endpoint, const RemoteOptions& options, const std::string& path,
                   const json& payload) {
    const Endpoint ep = split_endpoint(endpoint);
    const std::string full_path = ep.prefix + path;
    const std::string body = payload.dump();
    auto delay = options.backoff;
    std::string last_error;

    for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
        httplib::Client client(ep.base);
        const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
        const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
        client.set_connection_timeout(secs.count(), usecs.count());
        client.set_read_timeout(secs.count(), usecs.count());
        client.set_write_timeout(secs.count(), usecs.count());

        auto res = client.Post(full_path, body, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
        } else if (retryable_status(res->status)) {
            last_error = "HTTP " + std::to_string(res->status);
        } else if (res->status != 200) {
            throw ProtocolError(full_path + ": HTTP " + std::to_string(res->status));
        } else {
            Response out;
            try {
                out.body = json::parse(res->body);
            } catch (const json::parse_error&) {
                throw ProtocolError(full_path + ": response body is not JSON");
            }
            if (!out.body.is_object()) throw ProtocolError(full_path + ": response is not an object");
            out.version = res->get_header_value("X-Scorer-Version");
            return out;
        }
        if (attempt < options.max_attempts) {
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
    }
    throw TransportError(full_path + ": failed after " + std::to_string(options.max_attempts) +
                         " attempts (" + last_error + ")");
}

}  // namespace

NLIProbs RemoteScorer::nli(const std::string& premise, const std::string& hypothesis) const {
    const auto res = post_json(endpoint_, options_, "/nli", {{"premise", premise}, {"hypothesis", hypothesis}});
    NLIProbs p{prob_field(res.body, "entail", "/nli"), prob_field(res.body, "contradict", "/nli"),
               prob_field(res.body, "neutral", "/nli")};
    try {
        validate(p);
    } catch (const DomainError& e) {
        throw ProtocolError(std::string("/nli: ") + e.what());
    }
    return p;
}

double RemoteScorer::semantic_f1(const std::string& reference, const std::string& candidate) const {
    const auto res =
        post_json(endpoint_, options_, "/semantic", {{"reference", reference}, {"candidate", candidate}});
    const double f1 = prob_field(res.body, "f1", "/semantic");
    if (!(f1 >= -1.0 && f1 <= 1.0)) throw ProtocolError("/semantic: f1 outside [-1,1]");
    return f1;
}

HealthStatus RemoteScorer::health() const {
    const Endpoint ep = split_endpoint(endpoint_);
    const std::string full_path = ep.prefix + "/health";
    httplib::Client client(ep.base);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());

    auto res = client.Get(full_path);
    if (!res) throw TransportError(full_path + ": " + httplib::to_string(res.error()));

    HealthStatus h;
    h.scorer_version = res->get_header_value("X-Scorer-Version");
    if (res->status == 503) {
        h.status = "loading";
        return h;
    }
    if (res->status != 200) throw ProtocolError(full_path + ": HTTP " + std::to_string(res->status));

    json body;
    try {
        body = json::parse(res->body);
    } catch (const json::parse_error&) {
        throw ProtocolError(full_path + ": response body is not JSON");
    }
    if (!body.is_object()) throw ProtocolError(full_path + ": response is not an object");
    h.ready = true;
    if (auto it = body.find("status"); it != body.end() && it->is_string()) h.status = it->get<std::string>();
    if (auto it = body.find("model_versions"); it != body.end()) {
        if (!it->is_object()) throw ProtocolError(full_path + ": 'model_versions' must be an object");
        for (const auto& [name, v] : it->items()) {
            if (!v.is_string()) throw ProtocolError(full_path + ": model version for '" + name + "' is not a string");
            h.model_versions[name] = v.get<std::string>();
        }
    }
    return h;
}

RemoteResult RemoteScorer::fetch(const std::string& reference, const std::string& hypothesis) const {
    RemoteResult r;
    const auto fwd = post_json(endpoint_, options_, "/nli", {{"premise", reference}, {"hypothesis", hypothesis}});
    const auto bwd = post_json(endpoint_, options_, "/nli", {{"premise", hypothesis}, {"hypothesis", reference}});
    const auto sem =
        post_json(endpoint_, options_, "/semantic", {{"reference", reference}, {"candidate", hypothesis}});
    auto probs = [](const json& body) {
        NLIProbs p{prob_field(body, "entail", "/nli"), prob_field(body, "contradict", "/nli"),
                   prob_field(body, "neutral", "/nli")};
        try {
            validate(p);
        } catch (const DomainError& e) {
            throw ProtocolError(std::string("/nli: ") + e.what());
        }
        return p;
    };
    r.nli_forward = probs(fwd.body);
    r.nli_backward = probs(bwd.body);
    r.s_sem = prob_field(sem.body, "f1", "/semantic");
    if (!(r.s_sem >= -1.0 && r.s_sem <= 1.0)) throw ProtocolError("/semantic: f1 outside [-1,1]");
    r.scorer_version = !sem.version.empty() ? sem.version : fwd.version;
    return r;
}

RemoteResult fetch_remote(const std::string& reference, const std::string& hypothesis,
                          const std::string& endpoint, RemoteOptions options) {
    return RemoteScorer(endpoint, options).fetch(reference, hypothesis);
}

// ---------------------------------------------------------------------------
// Cache

namespace {

std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

ScoreCache::ScoreCache(std::string path, std::string scorer_version)
    : path_(std::move(path)), version_(std::move(scorer_version)) {
    if (!path_.empty() && std::filesystem::exists(path_)) entries_ = load_scores(path_);
}

std::string ScoreCache::key(const std::string& reference, const std::string& hypothesis,
                            const std::string& scorer_version) {
    std::string material = normalize(reference).joined();
    material += '\x1f';
    material += normalize(hypothesis).joined();
    material += '\x1f';
    material += scorer_version;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(material)));
    return buf;
}

std::optional<PartialScores> ScoreCache::get(const std::string& reference, const std::string& hypothesis) const {
    const auto k = key(reference, hypothesis, version_);
    std::lock_guard lock(mutex_);
    auto it = entries_.find(k);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ScoreCache::put(const std::string& reference, const std::string& hypothesis, const PartialScores& scores) {
    const auto k = key(reference, hypothesis, version_);
    std::lock_guard lock(mutex_);
    if (!path_.empty()) {
        std::ofstream out(path_, std::ios::binary | std::ios::app);
        if (!out) throw Error("cannot write score cache '" + path_ + "'");
        out << to_jsonl(k, scores) << '\n';
        out.flush();
        if (!out) throw Error("cannot write score cache '" + path_ + "'");
    }
    entries_[k].merge(scores);
}

std::size_t ScoreCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

// ---------------------------------------------------------------------------
// Assembly

AssembledScores assemble(const TranscriptRecord& record, const ScoreSources& sources, HypothesisKind kind) {
    std::string lookup_id = record.id;
    const std::string* hypothesis = &record.hypothesis;
    if (kind == HypothesisKind::Corrected) {
        if (!record.corrected_hypothesis) throw ValidationError(record.id, "no corrected_hypothesis");
        hypothesis = &*record.corrected_hypothesis;
        lookup_id += kCorrectedSuffix;
    }

    AssembledScores out;
    out.id = record.id;

    std::optional<double> s_nli, s_sem;
    if (sources.files) {
        if (auto it = sources.files->find(lookup_id); it != sources.files->end()) {
            s_nli = it->second.s_nli;
            s_sem = it->second.s_sem;
            out.scores.extras = it->second.extras;
        }
    }
    out.nli_source = out.sem_source = Provenance::File;

    if ((!s_nli || !s_sem) && sources.cache) {
        if (auto cached = sources.cache->get(record.reference, *hypothesis)) {
            if (!s_nli && cached->s_nli) {
                s_nli = cached->s_nli;
                out.nli_source = Provenance::Cache;
            }
            if (!s_sem && cached->s_sem) {
                s_sem = cached->s_sem;
                out.sem_source = Provenance::Cache;
            }
        }
    }
    if ((!s_nli || !s_sem) && sources.remote) {
        const RemoteResult r = sources.remote->fetch(record.reference, *hypothesis);
        PartialScores fetched;
        fetched.s_nli = nli_score(r.nli_forward, r.nli_backward);
        fetched.s_sem = r.s_sem;
        if (sources.cache) sources.cache->put(record.reference, *hypothesis, fetched);
        if (!s_nli) {
            s_nli = fetched.s_nli;
            out.nli_source = Provenance::Remote;
        }
        if (!s_sem) {
            s_sem = fetched.s_sem;
            out.sem_source = Provenance::Remote;
        }
    }
    if (!s_nli) throw MissingChannelError(record.id, "s_nli");
    if (!s_sem) throw MissingChannelError(record.id, "s_sem");

    const NormalizedText ref = normalize(record.reference);
    const NormalizedText hyp = normalize(*hypothesis);
    out.scores.s_nli = *s_nli;
    out.scores.s_sem = *s_sem;
    out.scores.s_phon = psim_soundex(ref, hyp);
    out.scores.wer = wer(ref, hyp).wer;
    return out;
}

AssembleBatch assemble_all(std::span<const TranscriptRecord> records, const ScoreSources& sources,
                           HypothesisKind kind, std::size_t concurrency) {
    const std::size_t n = records.size();
    std::vector<std::optional<AssembledScores>> results(n);
    std::vector<std::optional<std::string>> errors(n);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                results[i] = assemble(records[i], sources, kind);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(concurrency, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    AssembleBatch batch;
    batch.results = std::move(results);
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) batch.failures.push_back({records[i].id, *errors[i]});
    }
    return batch;
}

}  // namespace asreval
