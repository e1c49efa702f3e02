#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "asreval/correctability.hpp"
#include "asreval/fit.hpp"

// Command implementations behind the asreval CLI. Each returns the process
// exit status; diagnostics go to `err`, and primary output either to files
// under out_dir or, without one, to `out`.
namespace asreval::app {

enum class ReportFormat { Tsv, Json };

struct RunConfig {
    std::string corpus;
    std::vector<std::string> score_files;
    std::optional<std::string> endpoint;
    std::optional<std::string> lexicon;
    std::optional<Weights> weights;
    std::optional<std::string> fit_report;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    ReportFormat format = ReportFormat::Tsv;

    std::optional<std::string> cache_path;
    std::string scorer_version = "unversioned";
    std::size_t concurrency = 4;
    std::size_t folds = 5;
    PhoneticOptions::Kind psim = PhoneticOptions::Kind::Soundex;
};

// "a,b,g" -> Weights; finite and non-negative.
Weights parse_weights(std::string_view text);
// Reads normalized.{alpha,beta,gamma} from a fit report.
Weights read_fit_report_weights(const std::string& path);

// Throws DomainError when both or (if required) neither weight source is set.
Weights resolve_weights(const RunConfig& config);

int cmd_score(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_correctability(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_plotdata(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace asreval::app
