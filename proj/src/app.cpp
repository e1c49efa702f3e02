#include "asreval/app.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "asreval/align.hpp"
#include "asreval/error.hpp"
#include "asreval/report.hpp"
#include "asreval/scores.hpp"
#include "asreval/stats.hpp"

namespace asreval::app {

using nlohmann::ordered_json;
using report::fixed;
using report::MeanAccumulator;
using report::percent;

Weights parse_weights(std::string_view text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        const std::string part(text.substr(pos, comma - pos));
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            throw DomainError("weights: '" + part + "' is not a number");
        }
        if (used != part.size()) throw DomainError("weights: '" + part + "' is not a number");
        values.push_back(v);
        pos = comma + 1;
    }
    if (values.size() != 3) throw DomainError("weights: expected three comma-separated values a,b,g");
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0) throw DomainError("weights must be finite and non-negative");
    }
    return {values[0], values[1], values[2]};
}

Weights read_fit_report_weights(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open fit report '" + path + "'");
    nlohmann::json report;
    try {
        report = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path, 0, e.what());
    }
    const auto& n = report.at("normalized");
    Weights w{n.at("alpha").get<double>(), n.at("beta").get<double>(), n.at("gamma").get<double>()};
    for (double v : {w.alpha, w.beta, w.gamma}) {
        if (!std::isfinite(v) || v < 0.0) throw DomainError("fit report weights must be finite and non-negative");
    }
    return w;
}

Weights resolve_weights(const RunConfig& config) {
    if (config.weights && config.fit_report)
        throw DomainError("give either --weights or --fit-report, not both");
    if (config.weights) {
        for (double v : {config.weights->alpha, config.weights->beta, config.weights->gamma}) {
            if (!std::isfinite(v) || v < 0.0) throw DomainError("weights must be finite and non-negative");
        }
        return *config.weights;
    }
    if (config.fit_report) return read_fit_report_weights(*config.fit_report);
    throw DomainError("no weight source: pass --weights a,b,g or --fit-report path");
}

namespace {

struct Context {
    std::vector<TranscriptRecord> records;
    ScoreTable files;
    std::optional<RemoteScorer> remote;
    std::unique_ptr<ScoreCache> cache;
    std::optional<Lexicon> lexicon;

    ScoreSources sources() {
        ScoreSources s;
        s.files = &files;
        s.remote = remote ? &*remote : nullptr;
        s.cache = cache.get();
        return s;
    }
};

Context load_context(const RunConfig& config) {
    Context ctx;
    ctx.records = load_corpus(config.corpus);
    ctx.files = load_scores(config.score_files);
    if (config.endpoint && !config.endpoint->empty()) ctx.remote.emplace(*config.endpoint);
    if (config.cache_path || ctx.remote)
        ctx.cache = std::make_unique<ScoreCache>(config.cache_path.value_or(std::string()), config.scorer_version);
    if (config.lexicon) ctx.lexicon = Lexicon::load(*config.lexicon);
    return ctx;
}

// Writes into out_dir/filename when an output directory is configured,
// otherwise streams to `out`.
void emit(const RunConfig& config, const std::string& filename, const std::string& content, std::ostream& out) {
    if (!config.out_dir) {
        out << content;
        return;
    }
    std::filesystem::create_directories(*config.out_dir);
    const auto path = std::filesystem::path(*config.out_dir) / filename;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot write '" + path.string() + "'");
    file << content;
    if (!file) throw Error("cannot write '" + path.string() + "'");
}

std::vector<std::string> systems_in_order(std::span<const TranscriptRecord> records) {
    std::vector<std::string> systems;
    for (const auto& r : records) {
        if (std::find(systems.begin(), systems.end(), r.system_id) == systems.end())
            systems.push_back(r.system_id);
    }
    return systems;
}

void report_failures(const std::vector<AssembleFailure>& failures, std::ostream& err) {
    for (const auto& f : failures) err << "error: " << f.message << '\n';
    if (!failures.empty()) {
        err << "failed records (" << failures.size() << "):";
        for (const auto& f : failures) err << ' ' << f.id;
        err << '\n';
    }
}

std::optional<double> extra(const std::map<std::string, double>& extras, const char* name) {
    auto it = extras.find(name);
    if (it == extras.end()) return std::nullopt;
    return it->second;
}

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

// ---------------------------------------------------------------------------
// score

struct ScoredRecord {
    const TranscriptRecord* record;
    AssembledScores scores;
    std::optional<double> psim_phoneme;
    double integrated;
};

struct SummaryGroup {
    std::size_t n = 0;
    MeanAccumulator wer, psim1, psim2, bert, bleurt, heval, nli, integrated;

    void add(const ScoredRecord& r) {
        ++n;
        const auto& v = r.scores.scores;
        wer.add(v.wer);
        psim1.add(r.psim_phoneme);
        psim2.add(v.s_phon);
        bert.add(v.s_sem);
        bleurt.add(extra(v.extras, "bleurt"));
        heval.add(extra(v.extras, "heval"));
        nli.add(v.s_nli);
        integrated.add(r.integrated);
    }
};

std::vector<std::string> summary_cells(const SummaryGroup& g, bool with_psim1) {
    std::vector<std::string> cells{std::to_string(g.n), percent(*g.wer.value())};
    if (with_psim1) cells.push_back(fixed(g.psim1.value(), 4));
    for (const auto* acc : {&g.psim2, &g.bert, &g.bleurt, &g.heval, &g.nli, &g.integrated})
        cells.push_back(fixed(acc->value(), 4));
    return cells;
}

ordered_json summary_json(const SummaryGroup& g, bool with_psim1) {
    ordered_json j;
    j["n"] = g.n;
    j["wer"] = opt_json(g.wer.value());
    if (with_psim1) j["psim_phoneme"] = opt_json(g.psim1.value());
    j["psim_soundex"] = opt_json(g.psim2.value());
    j["bert"] = opt_json(g.bert.value());
    j["bleurt"] = opt_json(g.bleurt.value());
    j["heval"] = opt_json(g.heval.value());
    j["nli"] = opt_json(g.nli.value());
    j["integrated"] = opt_json(g.integrated.value());
    return j;
}

}  // namespace

int cmd_score(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const Weights weights = resolve_weights(config);
    Context ctx = load_context(config);
    const auto batch = assemble_all(ctx.records, ctx.sources(), HypothesisKind::Base, config.concurrency);
    report_failures(batch.failures, err);

    std::vector<ScoredRecord> scored;
    for (std::size_t i = 0; i < ctx.records.size(); ++i) {
        if (!batch.results[i]) continue;
        ScoredRecord sr{&ctx.records[i], *batch.results[i], std::nullopt, 0.0};
        if (ctx.lexicon)
            sr.psim_phoneme = psim_phoneme(normalize(ctx.records[i].reference),
                                           normalize(ctx.records[i].hypothesis), *ctx.lexicon);
        sr.integrated = integrated_score(weights, sr.scores.scores);
        scored.push_back(std::move(sr));
    }

    std::ostringstream lines;
    for (const auto& sr : scored) {
        const auto& v = sr.scores.scores;
        ordered_json j;
        j["id"] = sr.record->id;
        j["system_id"] = sr.record->system_id;
        j["severity"] = sr.record->severity == Severity::Unknown
                            ? ordered_json(nullptr)
                            : ordered_json(std::string(severity_label(sr.record->severity)));
        j["s_nli"] = v.s_nli;
        j["s_sem"] = v.s_sem;
        j["s_phon"] = v.s_phon;
        j["wer"] = v.wer;
        if (sr.psim_phoneme) j["psim_phoneme"] = *sr.psim_phoneme;
        j["integrated"] = sr.integrated;
        j["extras"] = v.extras;
        j["provenance"] = {{"s_nli", provenance_name(sr.scores.nli_source)},
                           {"s_sem", provenance_name(sr.scores.sem_source)},
                           {"s_phon", provenance_name(Provenance::Local)},
                           {"wer", provenance_name(Provenance::Local)}};
        lines << j.dump() << '\n';
    }

    const bool with_psim1 = ctx.lexicon.has_value();
    const auto systems = systems_in_order(ctx.records);
    std::map<std::string, SummaryGroup> by_system;
    std::map<std::pair<int, std::string>, SummaryGroup> by_severity;
    for (const auto& sr : scored) {
        by_system[sr.record->system_id].add(sr);
        if (sr.record->severity != Severity::Unknown)
            by_severity[{static_cast<int>(sr.record->severity), sr.record->system_id}].add(sr);
    }

    std::ostringstream summary;
    if (config.format == ReportFormat::Json) {
        ordered_json j;
        j["weights"] = {{"alpha", weights.alpha}, {"beta", weights.beta}, {"gamma", weights.gamma}};
        j["per_system"] = ordered_json::array();
        for (const auto& sys : systems) {
            auto it = by_system.find(sys);
            if (it == by_system.end()) continue;
            ordered_json row;
            row["system"] = sys;
            row.update(summary_json(it->second, with_psim1));
            j["per_system"].push_back(row);
        }
        if (!by_severity.empty()) {
            j["per_severity"] = ordered_json::array();
            for (Severity sev : kSeverityOrder) {
                for (const auto& sys : systems) {
                    auto it = by_severity.find({static_cast<int>(sev), sys});
                    if (it == by_severity.end()) continue;
                    ordered_json row;
                    row["severity"] = std::string(severity_label(sev));
                    row["system"] = sys;
                    row.update(summary_json(it->second, with_psim1));
                    j["per_severity"].push_back(row);
                }
            }
        }
        summary << j.dump(2) << '\n';
    } else {
        std::vector<std::string> metric_header{"n", "WER%"};
        if (with_psim1) metric_header.push_back("PsimI");
        for (const char* h : {"PsimII", "BERT", "Bleurt", "Heval", "NLI", "Integrated"}) metric_header.push_back(h);

        report::Table sys_table;
        sys_table.header = {"system"};
        sys_table.header.insert(sys_table.header.end(), metric_header.begin(), metric_header.end());
        for (const auto& sys : systems) {
            auto it = by_system.find(sys);
            if (it == by_system.end()) continue;
            std::vector<std::string> row{sys};
            auto cells = summary_cells(it->second, with_psim1);
            row.insert(row.end(), cells.begin(), cells.end());
            sys_table.rows.push_back(std::move(row));
        }
        summary << "# per-system\n";
        report::write_tsv(summary, sys_table);

        if (!by_severity.empty()) {
            report::Table sev_table;
            sev_table.header = {"severity", "system"};
            sev_table.header.insert(sev_table.header.end(), metric_header.begin(), metric_header.end());
            for (Severity sev : kSeverityOrder) {
                for (const auto& sys : systems) {
                    auto it = by_severity.find({static_cast<int>(sev), sys});
                    if (it == by_severity.end()) continue;
                    std::vector<std::string> row{std::string(severity_label(sev)), sys};
                    auto cells = summary_cells(it->second, with_psim1);
                    row.insert(row.end(), cells.begin(), cells.end());
                    sev_table.rows.push_back(std::move(row));
                }
            }
            summary << "\n# per-severity\n";
            report::write_tsv(summary, sev_table);
        }
    }

    if (config.out_dir) {
        emit(config, "scores.jsonl", lines.str(), out);
        emit(config, config.format == ReportFormat::Json ? "summary.json" : "summary.tsv", summary.str(), out);
    }
    out << summary.str();
    return batch.failures.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// fit-weights

namespace {

constexpr std::size_t kMinRatedForFit = 10;

std::vector<const TranscriptRecord*> rated_records(const std::vector<TranscriptRecord>& records) {
    std::vector<const TranscriptRecord*> rated;
    for (const auto& r : records)
        if (r.ratings && !r.ratings->empty()) rated.push_back(&r);
    return rated;
}

struct RatedScores {
    std::vector<TranscriptRecord> records;
    std::vector<CorrelationInput> inputs;
};

// Assembles channels for every rated record; returns nullopt after
// reporting failures.
std::optional<RatedScores> score_rated(Context& ctx, const RunConfig& config, std::size_t minimum,
                                       std::ostream& err) {
    RatedScores rs;
    for (const auto* r : rated_records(ctx.records)) rs.records.push_back(*r);
    if (rs.records.size() < minimum) {
        err << "error: missing ratings: " << rs.records.size() << " rated record(s), need at least "
            << minimum << '\n';
        std::size_t unrated = 0;
        for (const auto& r : ctx.records)
            if (!r.ratings || r.ratings->empty()) {
                if (unrated++ == 0) err << "unrated records:";
                err << ' ' << r.id;
            }
        if (unrated) err << '\n';
        return std::nullopt;
    }
    const auto batch = assemble_all(rs.records, ctx.sources(), HypothesisKind::Base, config.concurrency);
    if (!batch.failures.empty()) {
        report_failures(batch.failures, err);
        return std::nullopt;
    }
    for (std::size_t i = 0; i < rs.records.size(); ++i)
        rs.inputs.push_back({batch.results[i]->scores, mean_rating(rs.records[i])});
    return rs;
}

report::Table correlation_table(const std::vector<MetricCorrelation>& correlations) {
    report::Table t;
    t.header = {"metric", "pearson"};
    for (const auto& c : correlations) t.rows.push_back({c.metric, fixed(c.pearson, 6)});
    return t;
}

}  // namespace

int cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (!config.seed) {
        err << "error: --seed is required for fit-weights\n";
        return 1;
    }
    Context ctx = load_context(config);
    auto rated = score_rated(ctx, config, kMinRatedForFit, err);
    if (!rated) return 1;

    std::vector<FitRow> rows;
    for (const auto& in : rated->inputs)
        rows.push_back({in.scores.s_nli, in.scores.s_sem, in.scores.s_phon, in.rating});

    KFoldResult kf;
    try {
        kf = kfold_fit(rows, config.folds, *config.seed);
    } catch (const FitError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    const WeightFit& fit = kf.final;

    std::vector<double> fitted, target;
    for (const auto& r : rows) {
        fitted.push_back(fit.intercept + fit.raw_coeffs[0] * r.s_nli + fit.raw_coeffs[1] * r.s_sem +
                         fit.raw_coeffs[2] * r.s_phon);
        target.push_back(r.rating);
    }
    std::optional<double> in_sample;
    try {
        in_sample = stats::pearson(fitted, target);
    } catch (const DomainError&) {
    }
    double fold_sum = 0.0;
    std::size_t fold_defined = 0;
    for (const auto& f : kf.folds) {
        if (f.test_pearson) {
            fold_sum += *f.test_pearson;
            ++fold_defined;
        }
    }

    const auto correlations = metric_correlation_report(rated->inputs, fit.normalized);

    ordered_json j;
    j["n"] = rows.size();
    j["k"] = config.folds;
    j["seed"] = *config.seed;
    j["features"] = {"s_nli", "s_sem", "s_phon"};
    j["raw_coeffs"] = fit.raw_coeffs;
    j["intercept"] = fit.intercept;
    j["normalized"] = {{"alpha", fit.normalized.alpha},
                       {"beta", fit.normalized.beta},
                       {"gamma", fit.normalized.gamma}};
    j["std_errors"] = fit.std_errors;
    j["p_values"] = fit.p_values;
    j["intercept_p_value"] = fit.intercept_p_value;
    j["mse"] = fit.mse;
    j["shapiro"] = fit.shapiro ? ordered_json{{"W", fit.shapiro->w}, {"p", fit.shapiro->p}} : ordered_json(nullptr);
    j["in_sample_pearson"] = opt_json(in_sample);
    j["mean_fold_pearson"] =
        fold_defined ? ordered_json(fold_sum / static_cast<double>(fold_defined)) : ordered_json(nullptr);
    j["folds"] = ordered_json::array();
    for (const auto& f : kf.folds) {
        j["folds"].push_back({{"fold", f.fold_index},
                              {"test_size", f.test_size},
                              {"train_coeffs", f.train_coeffs},
                              {"train_intercept", f.train_intercept},
                              {"test_pearson", opt_json(f.test_pearson)},
                              {"test_mse", f.test_mse}});
    }
    j["correlations"] = ordered_json::array();
    for (const auto& c : correlations) j["correlations"].push_back({{"metric", c.metric}, {"pearson", opt_json(c.pearson)}});

    // Inter-annotator agreement, when every rated record has the same
    // number (>= 2) of ratings.
    try {
        const auto agreement = annotator_agreement(ratings_matrix(rated->records));
        j["annotator_agreement"] = {{"min_r", agreement.min_r},
                                    {"max_r", agreement.max_r},
                                    {"rating_std", agreement.rating_std}};
    } catch (const Error&) {
        j["annotator_agreement"] = nullptr;
    }

    emit(config, "fit_report.json", j.dump(2) + "\n", out);
    if (config.out_dir) {
        out << "alpha\tbeta\tgamma\n"
            << fixed(fit.normalized.alpha, 4) << '\t' << fixed(fit.normalized.beta, 4) << '\t'
            << fixed(fit.normalized.gamma, 4) << "\n\n";
        report::write_tsv(out, correlation_table(correlations));
    }
    return 0;
}

// ---------------------------------------------------------------------------
// correctability

namespace {

std::optional<double> file_channel(const ScoreTable& files, const std::string& id, HypothesisKind kind,
                                   const char* channel) {
    const std::string key = kind == HypothesisKind::Corrected ? id + std::string(kCorrectedSuffix) : id;
    auto it = files.find(key);
    if (it == files.end()) return std::nullopt;
    if (std::string_view(channel) == "s_sem") return it->second.s_sem;
    return extra(it->second.extras, channel);
}

struct BlockAccumulator {
    MeanAccumulator wer, psim, bert, bleurt, heval;
};

struct SystemBlocks {
    std::size_t n = 0;
    BlockAccumulator without, with, improved;
};

}  // namespace

int cmd_correctability(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Context ctx = load_context(config);

    std::vector<std::string> missing;
    for (const auto& r : ctx.records)
        if (!r.corrected_hypothesis) missing.push_back(r.id);
    if (!missing.empty()) {
        err << "error: missing corrected_hypothesis for " << missing.size() << " record(s):";
        for (const auto& id : missing) err << ' ' << id;
        err << '\n';
        return 1;
    }
    if (ctx.records.empty()) {
        err << "error: empty corpus\n";
        return 1;
    }

    PhoneticOptions phon;
    phon.kind = config.psim;
    if (phon.kind == PhoneticOptions::Kind::Phoneme) {
        if (!ctx.lexicon) {
            err << "error: --psim phoneme needs --lexicon\n";
            return 1;
        }
        phon.lexicon = &*ctx.lexicon;
    }
    const auto selected = oracle_select_all(ctx.records, phon);

    const auto systems = systems_in_order(ctx.records);
    std::map<std::string, SystemBlocks> blocks;
    SystemBlocks all;
    for (std::size_t i = 0; i < ctx.records.size(); ++i) {
        const auto& rec = ctx.records[i];
        const auto& sel = selected[i];
        const NormalizedText ref = normalize(rec.reference);
        const double psim_base = sel.psim_uncorrected;
        const double psim_corr = phon.kind == PhoneticOptions::Kind::Phoneme
                                     ? psim_phoneme(ref, normalize(*rec.corrected_hypothesis), *phon.lexicon)
                                     : psim_soundex(ref, normalize(*rec.corrected_hypothesis));

        auto fill = [&](BlockAccumulator& acc, HypothesisKind kind, double w, double psim) {
            acc.wer.add(w);
            acc.psim.add(psim);
            acc.bert.add(file_channel(ctx.files, rec.id, kind, "s_sem"));
            acc.bleurt.add(file_channel(ctx.files, rec.id, kind, "bleurt"));
            acc.heval.add(file_channel(ctx.files, rec.id, kind, "heval"));
        };
        const bool corrected = sel.chosen == Choice::Corrected;
        for (SystemBlocks* target : {&blocks[rec.system_id], &all}) {
            ++target->n;
            fill(target->without, HypothesisKind::Base, sel.wer_base, psim_base);
            fill(target->with, HypothesisKind::Corrected, sel.wer_corrected, psim_corr);
            fill(target->improved, corrected ? HypothesisKind::Corrected : HypothesisKind::Base,
                 corrected ? sel.wer_corrected : sel.wer_base, corrected ? psim_corr : psim_base);
        }
    }

    std::optional<CorrelationResult> corr;
    std::string corr_error;
    try {
        corr = correctability_correlation(selected);
    } catch (const DomainError& e) {
        corr_error = e.what();
        err << "warning: correctability correlation undefined: " << corr_error << '\n';
    }

    const char* psim_label = phon.kind == PhoneticOptions::Kind::Phoneme ? "PsimI" : "PsimII";
    std::ostringstream body;
    if (config.format == ReportFormat::Json) {
        auto block_json = [](const BlockAccumulator& b) {
            ordered_json j;
            j["wer"] = opt_json(b.wer.value());
            j["psim"] = opt_json(b.psim.value());
            j["bert"] = opt_json(b.bert.value());
            j["bleurt"] = opt_json(b.bleurt.value());
            j["heval"] = opt_json(b.heval.value());
            return j;
        };
        ordered_json j;
        j["psim"] = psim_label;
        j["systems"] = ordered_json::array();
        auto add_row = [&](const std::string& name, const SystemBlocks& b) {
            j["systems"].push_back({{"system", name},
                                    {"n", b.n},
                                    {"without", block_json(b.without)},
                                    {"with", block_json(b.with)},
                                    {"improved_only", block_json(b.improved)}});
        };
        for (const auto& sys : systems) add_row(sys, blocks[sys]);
        add_row("ALL", all);
        if (corr)
            j["correlation"] = {{"r", corr->r}, {"p", corr->p}, {"n", corr->n}};
        else
            j["correlation"] = {{"error", corr_error}};
        body << j.dump(2) << '\n';
    } else {
        report::Table table;
        table.header = {"system", "n"};
        for (const char* block : {"without", "with", "improved_only"}) {
            for (const char* metric : {"WER%", psim_label, "BERT", "Bleurt", "Heval"})
                table.header.push_back(std::string(block) + "." + metric);
        }
        auto add_row = [&](const std::string& name, const SystemBlocks& b) {
            std::vector<std::string> row{name, std::to_string(b.n)};
            for (const auto* acc : {&b.without, &b.with, &b.improved}) {
                row.push_back(percent(*acc->wer.value()));
                row.push_back(fixed(acc->psim.value(), 4));
                row.push_back(fixed(acc->bert.value(), 4));
                row.push_back(fixed(acc->bleurt.value(), 4));
                row.push_back(fixed(acc->heval.value(), 4));
            }
            table.rows.push_back(std::move(row));
        };
        for (const auto& sys : systems) add_row(sys, blocks[sys]);
        add_row("ALL", all);
        report::write_tsv(body, table);
        body << '\n';
        if (corr)
            body << "correctability\tr=" << fixed(corr->r, 6) << "\tp=" << fixed(corr->p, 6)
                 << "\tn=" << corr->n << '\n';
        else
            body << "correctability\tundefined\t" << corr_error << '\n';
    }

    const std::string filename = config.format == ReportFormat::Json ? "correctability.json" : "correctability.tsv";
    if (config.out_dir) emit(config, filename, body.str(), out);
    out << body.str();
    return 0;
}

// ---------------------------------------------------------------------------
// plot-data

int cmd_plotdata(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const Weights weights = resolve_weights(config);
    Context ctx = load_context(config);
    auto rated = score_rated(ctx, config, 3, err);
    if (!rated) return 1;

    const auto correlations = metric_correlation_report(rated->inputs, weights);
    std::ostringstream csv;
    report::Table t;
    t.header = {"metric", "pearson"};
    for (const auto& c : correlations) t.rows.push_back({c.metric, fixed(c.pearson, 10)});
    report::write_csv(csv, t);

    emit(config, "plot_data.csv", csv.str(), out);
    if (config.out_dir) out << csv.str();
    return 0;
}

}  // namespace asreval::app
