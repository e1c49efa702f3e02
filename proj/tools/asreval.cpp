// asreval: score ASR transcripts, fit integrated-metric weights, and
// analyze LLM correctability.
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "asreval/app.hpp"
#include "asreval/error.hpp"
#include "asreval/kernels/levenshtein.hpp"

namespace {

using asreval::app::RunConfig;

struct Flags {
    std::string corpus;
    std::vector<std::string> scores;
    std::string endpoint;
    std::string lexicon;
    std::string weights;
    std::string fit_report;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "tsv";
    std::string cache;
    std::string scorer_version = "unversioned";
    std::size_t concurrency = 4;
    std::size_t folds = 5;
    std::string psim = "soundex";
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--corpus", f.corpus, "Transcript corpus (JSONL)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--scores", f.scores, "Score file (JSONL); repeatable, later files win")
        ->check(CLI::ExistingFile);
    cmd->add_option("--endpoint", f.endpoint, "Scorer service URL")->envname("SCORER_ENDPOINT");
    cmd->add_option("--lexicon", f.lexicon, "CMU-format pronunciation lexicon")->check(CLI::ExistingFile);
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"tsv", "json"}));
    cmd->add_option("--cache", f.cache, "Write-through cache for remote scores (JSONL)");
    cmd->add_option("--scorer-version", f.scorer_version, "Scorer version string used in cache keys");
    cmd->add_option("--concurrency", f.concurrency, "Maximum in-flight remote fetches")
        ->check(CLI::Range(1, 64));
}

void add_weights(CLI::App* cmd, Flags& f) {
    auto* w = cmd->add_option("--weights", f.weights, "Literal weights alpha,beta,gamma");
    auto* r = cmd->add_option("--fit-report", f.fit_report, "Fit report to take weights from")
                  ->check(CLI::ExistingFile);
    w->excludes(r);
}

RunConfig to_config(const Flags& f, bool seed_given = false) {
    RunConfig c;
    c.corpus = f.corpus;
    c.score_files = f.scores;
    if (!f.endpoint.empty()) c.endpoint = f.endpoint;
    if (!f.lexicon.empty()) c.lexicon = f.lexicon;
    if (!f.weights.empty()) c.weights = asreval::app::parse_weights(f.weights);
    if (!f.fit_report.empty()) c.fit_report = f.fit_report;
    if (seed_given) c.seed = f.seed;
    if (!f.out.empty()) c.out_dir = f.out;
    c.format = f.format == "json" ? asreval::app::ReportFormat::Json : asreval::app::ReportFormat::Tsv;
    if (!f.cache.empty()) c.cache_path = f.cache;
    c.scorer_version = f.scorer_version;
    c.concurrency = f.concurrency;
    c.folds = f.folds;
    c.psim = f.psim == "phoneme" ? asreval::PhoneticOptions::Kind::Phoneme
                                 : asreval::PhoneticOptions::Kind::Soundex;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ASR intelligibility evaluation toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "asreval 0.1.0");

    Flags flags;

    auto* score = app.add_subcommand("score", "Score a corpus and print per-system / per-severity summaries");
    add_common(score, flags);
    add_weights(score, flags);

    auto* fit = app.add_subcommand("fit-weights", "Fit integrated-metric weights against human ratings");
    add_common(fit, flags);
    fit->add_option("--seed", flags.seed, "Shuffle seed for cross-validation")->required();
    fit->add_option("--folds", flags.folds, "Number of folds")->check(CLI::Range(2, 100));

    auto* corr = app.add_subcommand("correctability", "Compare base and corrected transcripts");
    add_common(corr, flags);
    corr->add_option("--psim", flags.psim, "Phonetic similarity for correctability")
        ->check(CLI::IsMember({"soundex", "phoneme"}));

    auto* plot = app.add_subcommand("plot-data", "Correlation of each metric with human ratings (CSV)");
    add_common(plot, flags);
    add_weights(plot, flags);

    app.add_flag_callback("--kernel-info", [] {
        std::cout << "levenshtein kernel: " << asreval::kernels::isa_name(asreval::kernels::active_isa()) << '\n';
        std::exit(0);
    }, "Print the selected SIMD kernel and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (score->parsed()) return asreval::app::cmd_score(to_config(flags), std::cout, std::cerr);
        if (fit->parsed()) return asreval::app::cmd_fit(to_config(flags, fit->count("--seed") > 0), std::cout, std::cerr);
        if (corr->parsed()) return asreval::app::cmd_correctability(to_config(flags), std::cout, std::cerr);
        if (plot->parsed()) return asreval::app::cmd_plotdata(to_config(flags), std::cout, std::cerr);
    } catch (const asreval::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
