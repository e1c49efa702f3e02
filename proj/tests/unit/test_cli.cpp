#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "asreval/align.hpp"
#include "asreval/phonetic.hpp"
#include "support/fixtures.hpp"

using namespace testsupport;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using nlohmann::json;

namespace {

struct RunResult {
    int status = -1;
    std::string out;
    std::string err;
};

std::string quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return q + "'";
}

RunResult run(const std::vector<std::string>& args, const TempDir& scratch, const std::string& env = {}) {
    const auto err_path = scratch / "stderr.txt";
    std::string cmd = env.empty() ? "" : env + " ";
    cmd += quote(ASREVAL_CLI_PATH);
    for (const auto& a : args) cmd += " " + quote(a);
    cmd += " 2>" + quote(err_path.string());
    RunResult r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int raw = ::pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.err = slurp(err_path);
    return r;
}

std::string demo(const char* name) { return (source_dir() / "data" / "demo" / name).string(); }
std::string lexicon() { return (source_dir() / "data" / "lexicon" / "mini.dict").string(); }

std::vector<std::string> with_demo(std::vector<std::string> args) {
    args.insert(args.begin() + 1, {"--corpus", demo("corpus.jsonl"), "--scores", demo("scores.jsonl")});
    return args;
}

// Golden comparison; ASREVAL_UPDATE_GOLDEN=1 rewrites the file instead.
void check_golden(const std::filesystem::path& produced, const std::string& golden_name) {
    const auto golden = source_dir() / "tests" / "golden" / golden_name;
    if (std::getenv("ASREVAL_UPDATE_GOLDEN")) {
        std::filesystem::create_directories(golden.parent_path());
        std::filesystem::copy_file(produced, golden, std::filesystem::copy_options::overwrite_existing);
    }
    INFO("golden " << golden_name);
    REQUIRE(std::filesystem::exists(golden));
    CHECK(slurp(produced) == slurp(golden));
}

json record(const std::string& id, const std::string& system, const char* severity, const std::string& ref,
            const std::string& hyp, const std::vector<int>& ratings = {}) {
    json j{{"id", id}, {"system_id", system}, {"reference", ref}, {"hypothesis", hyp}};
    j["severity"] = severity ? json(severity) : json(nullptr);
    if (!ratings.empty()) j["ratings"] = ratings;
    return j;
}

void write_jsonl(const std::filesystem::path& p, const std::vector<json>& rows) {
    std::string text;
    for (const auto& r : rows) text += r.dump() + "\n";
    write_file(p, text);
}

const std::vector<std::string> kSentences = {
    "TURN ON THE KITCHEN LIGHTS", "OPEN THE FRONT DOOR", "CALL MY DAUGHTER", "SET A TIMER FOR TEN MINUTES",
    "PLAY SOME QUIET MUSIC",     "WHAT IS THE WEATHER", "LOCK THE GARAGE",  "READ ME THE NEWS"};

}  // namespace

TEST_CASE("cli: score on the demo corpus") {
    TempDir dir("cli_score");
    const auto r = run(with_demo({"score", "--weights", "0.40,0.28,0.32", "--out", (dir / "out").string()}), dir);
    INFO(r.err);
    REQUIRE(r.status == 0);
    CHECK_THAT(r.out, ContainsSubstring("# per-system"));
    CHECK_THAT(r.out, ContainsSubstring("# per-severity"));
    check_golden(dir / "out" / "summary.tsv", "summary.tsv");

    // One per-record line per corpus record.
    const auto lines = slurp(dir / "out" / "scores.jsonl");
    CHECK(std::count(lines.begin(), lines.end(), '\n') == 60);

    const auto again = run(with_demo({"score", "--weights", "0.40,0.28,0.32", "--out", (dir / "again").string()}), dir);
    REQUIRE(again.status == 0);
    CHECK(slurp(dir / "again" / "summary.tsv") == slurp(dir / "out" / "summary.tsv"));
    CHECK(slurp(dir / "again" / "scores.jsonl") == lines);
}

TEST_CASE("cli: score with unknown severities omits the severity table") {
    TempDir dir("cli_unknown");
    std::vector<json> corpus, scores;
    for (int i = 0; i < 6; ++i) {
        const auto id = "u" + std::to_string(i);
        corpus.push_back(record(id, i % 2 ? "sys-a" : "sys-b", nullptr, kSentences[i], kSentences[i + 1]));
        scores.push_back({{"id", id}, {"s_nli", 0.1 * i}, {"s_sem", 0.5}});
    }
    write_jsonl(dir / "c.jsonl", corpus);
    write_jsonl(dir / "s.jsonl", scores);
    const auto r = run({"score", "--corpus", (dir / "c.jsonl").string(), "--scores", (dir / "s.jsonl").string(),
                        "--weights", "1,1,1"},
                       dir);
    INFO(r.err);
    REQUIRE(r.status == 0);
    CHECK_THAT(r.out, ContainsSubstring("# per-system"));
    CHECK(r.out.find("# per-severity") == std::string::npos);
}

TEST_CASE("cli: missing channel is a nonzero exit naming every failing record") {
    TempDir dir("cli_missing");
    std::vector<json> corpus, scores;
    for (int i = 0; i < 4; ++i) {
        const auto id = "m" + std::to_string(i);
        corpus.push_back(record(id, "sys", "H", kSentences[i], kSentences[i]));
        json s{{"id", id}, {"s_sem", 0.9}};
        if (i % 2 == 0) s["s_nli"] = 0.8;
        scores.push_back(s);
    }
    write_jsonl(dir / "c.jsonl", corpus);
    write_jsonl(dir / "s.jsonl", scores);
    const auto r = run({"score", "--corpus", (dir / "c.jsonl").string(), "--scores", (dir / "s.jsonl").string(),
                        "--weights", "0.4,0.28,0.32"},
                       dir, "SCORER_ENDPOINT=");
    CHECK(r.status != 0);
    CHECK_THAT(r.err, ContainsSubstring("m1"));
    CHECK_THAT(r.err, ContainsSubstring("m3"));
    CHECK_THAT(r.err, ContainsSubstring("s_nli"));
    CHECK(r.err.find("m0") == std::string::npos);
}

TEST_CASE("cli: argument errors") {
    TempDir dir("cli_args");
    CHECK(run({"score", "--corpus", demo("corpus.jsonl"), "--scores", demo("scores.jsonl")}, dir).status != 0);
    CHECK(run({"score", "--corpus", demo("corpus.jsonl"), "--weights", "1,-1,1"}, dir).status != 0);
    CHECK(run(with_demo({"fit-weights"}), dir).status != 0);
    CHECK(run({"score", "--corpus", (dir / "nope.jsonl").string(), "--weights", "1,1,1"}, dir).status != 0);
    CHECK(run({"bogus"}, dir).status != 0);
}

TEST_CASE("cli: fit-weights on the demo corpus") {
    TempDir dir("cli_fit");
    const auto a = run(with_demo({"fit-weights", "--seed", "7", "--out", (dir / "a").string()}), dir);
    INFO(a.err);
    REQUIRE(a.status == 0);
    const auto b = run(with_demo({"fit-weights", "--seed", "7", "--out", (dir / "b").string()}), dir);
    REQUIRE(b.status == 0);
    const auto report = slurp(dir / "a" / "fit_report.json");
    CHECK(report == slurp(dir / "b" / "fit_report.json"));

    const auto j = json::parse(report);
    CHECK(j["n"] == 60);
    CHECK(j["seed"] == 7);
    CHECK(j["folds"].size() == 5);
    const double sum = j["normalized"]["alpha"].get<double>() + j["normalized"]["beta"].get<double>() +
                       j["normalized"]["gamma"].get<double>();
    CHECK_THAT(sum, WithinAbs(1.0, 1e-12));
    CHECK(j["correlations"][0]["metric"] == "integrated");

    // A different seed changes the split, never the final fit.
    const auto c = run(with_demo({"fit-weights", "--seed", "8", "--out", (dir / "c").string()}), dir);
    REQUIRE(c.status == 0);
    const auto jc = json::parse(slurp(dir / "c" / "fit_report.json"));
    CHECK(jc["raw_coeffs"] == j["raw_coeffs"]);
    CHECK(jc["folds"] != j["folds"]);
}

TEST_CASE("cli: fit-weights on noiseless linear ratings") {
    TempDir dir("cli_exact");
    // Ratings are chosen first; s_nli is then solved so that the mean
    // rating is exactly 1 + 4 * (0.40 s_nli + 0.28 s_sem + 0.32 s_phon).
    std::vector<json> corpus, scores;
    std::mt19937_64 rng(12);
    for (int i = 0; i < 40; ++i) {
        const auto id = "x" + std::to_string(i);
        const auto& ref = kSentences[i % kSentences.size()];
        const auto& hyp = kSentences[(i * 3 + 1) % kSentences.size()];
        const double s_phon = asreval::psim_soundex(asreval::normalize(ref), asreval::normalize(hyp));
        const double s_sem = static_cast<double>(rng() % 1000) / 1000.0;
        const int rsum = 18 + static_cast<int>(rng() % 7);  // six ratings summing to 18..24
        std::vector<int> ratings(6, 3);
        for (int k = 0; k < rsum - 18; ++k) ratings[static_cast<std::size_t>(k)] = 4;
        const double mean = rsum / 6.0;
        const double s_nli = ((mean - 1.0) / 4.0 - 0.28 * s_sem - 0.32 * s_phon) / 0.40;
        if (s_nli < 0.0 || s_nli > 1.0) continue;
        corpus.push_back(record(id, "sys", "M", ref, hyp, ratings));
        scores.push_back({{"id", id}, {"s_nli", s_nli}, {"s_sem", s_sem}});
    }
    REQUIRE(corpus.size() >= 20);
    write_jsonl(dir / "c.jsonl", corpus);
    write_jsonl(dir / "s.jsonl", scores);
    const auto r = run({"fit-weights", "--corpus", (dir / "c.jsonl").string(), "--scores",
                        (dir / "s.jsonl").string(), "--seed", "3", "--out", (dir / "out").string()},
                       dir);
    INFO(r.err);
    REQUIRE(r.status == 0);
    const auto j = json::parse(slurp(dir / "out" / "fit_report.json"));
    CHECK(j["mse"].get<double>() <= 1e-18);
    CHECK_THAT(j["normalized"]["alpha"].get<double>(), WithinAbs(0.40, 1e-9));
    CHECK_THAT(j["normalized"]["beta"].get<double>(), WithinAbs(0.28, 1e-9));
    CHECK_THAT(j["normalized"]["gamma"].get<double>(), WithinAbs(0.32, 1e-9));
    for (const auto& f : j["folds"]) CHECK_THAT(f["test_pearson"].get<double>(), WithinAbs(1.0, 1e-9));
}

TEST_CASE("cli: fit-weights needs enough rated records") {
    TempDir dir("cli_few");
    std::vector<json> corpus, scores;
    for (int i = 0; i < 5; ++i) {
        const auto id = "f" + std::to_string(i);
        corpus.push_back(record(id, "sys", "L", kSentences[i], kSentences[i], {3, 4}));
        scores.push_back({{"id", id}, {"s_nli", 0.5}, {"s_sem", 0.5}});
    }
    write_jsonl(dir / "c.jsonl", corpus);
    write_jsonl(dir / "s.jsonl", scores);
    const auto r = run({"fit-weights", "--corpus", (dir / "c.jsonl").string(), "--scores",
                        (dir / "s.jsonl").string(), "--seed", "1"},
                       dir);
    CHECK(r.status != 0);
    CHECK_THAT(r.err, ContainsSubstring("ratings"));
}

TEST_CASE("cli: correctability on the demo corpus") {
    TempDir dir("cli_corr");
    const auto r = run(with_demo({"correctability", "--out", (dir / "out").string()}), dir);
    INFO(r.err);
    REQUIRE(r.status == 0);
    check_golden(dir / "out" / "correctability.tsv", "correctability.tsv");
    CHECK_THAT(r.out, ContainsSubstring("correctability\tr="));

    // improved_only WER never exceeds either of the other two blocks.
    std::istringstream in(slurp(dir / "out" / "correctability.tsv"));
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line) && !line.empty()) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, '\t');) cells.push_back(c);
        REQUIRE(cells.size() == 17);
        const double without = std::stod(cells[2]), with = std::stod(cells[7]), improved = std::stod(cells[12]);
        CHECK(improved <= std::min(without, with));
        ++rows;
    }
    CHECK(rows == 4);

    const auto ph = run(with_demo({"correctability", "--psim", "phoneme", "--lexicon", lexicon()}), dir);
    INFO(ph.err);
    REQUIRE(ph.status == 0);
    CHECK_THAT(ph.out, ContainsSubstring("PsimI"));
    CHECK(run(with_demo({"correctability", "--psim", "phoneme"}), dir).status != 0);
}

TEST_CASE("cli: correctability edge cases") {
    TempDir dir("cli_corr_edge");
    std::vector<json> corpus;
    for (int i = 0; i < 5; ++i) {
        auto rec = record("e" + std::to_string(i), "sys", "VL", kSentences[i], kSentences[i + 1]);
        rec["corrected_hypothesis"] = kSentences[i + 1];
        corpus.push_back(rec);
    }
    write_jsonl(dir / "same.jsonl", corpus);
    const auto r = run({"correctability", "--corpus", (dir / "same.jsonl").string()}, dir);
    INFO(r.err);
    CHECK(r.status == 0);
    CHECK_THAT(r.err, ContainsSubstring("zero variance"));
    CHECK_THAT(r.out, ContainsSubstring("improved_only.WER%"));
    CHECK_THAT(r.out, ContainsSubstring("correctability\tundefined"));

    corpus[1].erase("corrected_hypothesis");
    corpus[3].erase("corrected_hypothesis");
    write_jsonl(dir / "gaps.jsonl", corpus);
    const auto g = run({"correctability", "--corpus", (dir / "gaps.jsonl").string()}, dir);
    CHECK(g.status != 0);
    CHECK_THAT(g.err, ContainsSubstring("e1 e3"));
}

TEST_CASE("cli: plot-data on the demo corpus") {
    TempDir dir("cli_plot");
    const auto r = run(with_demo({"plot-data", "--weights", "0.40,0.28,0.32", "--out", (dir / "out").string()}), dir);
    INFO(r.err);
    REQUIRE(r.status == 0);
    check_golden(dir / "out" / "plot_data.csv", "plot_data.csv");
    const auto csv = slurp(dir / "out" / "plot_data.csv");
    CHECK(csv.starts_with("metric,pearson\nintegrated,"));

    const auto stdout_only = run(with_demo({"plot-data", "--weights", "0.40,0.28,0.32"}), dir);
    CHECK(stdout_only.out == csv);
}

TEST_CASE("cli: plot-data with ratings equal to the semantic channel") {
    TempDir dir("cli_plot_sem");
    std::vector<json> corpus, scores;
    for (int i = 0; i < 12; ++i) {
        const auto id = "p" + std::to_string(i);
        const std::vector<int> ratings{1 + i % 5, 1 + (i * 2) % 5, 3};
        const double mean = (ratings[0] + ratings[1] + ratings[2]) / 3.0;
        corpus.push_back(record(id, "sys", "H", kSentences[i % 8], kSentences[(i + 3) % 8], ratings));
        scores.push_back({{"id", id}, {"s_nli", 0.05 * i}, {"s_sem", (mean - 3.0) / 2.0}});
    }
    write_jsonl(dir / "c.jsonl", corpus);
    write_jsonl(dir / "s.jsonl", scores);
    const auto r = run({"plot-data", "--corpus", (dir / "c.jsonl").string(), "--scores", (dir / "s.jsonl").string(),
                        "--weights", "0,1,0"},
                       dir);
    INFO(r.err);
    REQUIRE(r.status == 0);
    CHECK_THAT(r.out, ContainsSubstring("semantic,1.0000000000"));
    CHECK_THAT(r.out, ContainsSubstring("integrated,1.0000000000"));
}

TEST_CASE("cli: kernel info") {
    TempDir dir("cli_kernel");
    const auto forced = run({"--kernel-info"}, dir, "ASREVAL_FORCE_SCALAR=1");
    CHECK(forced.status == 0);
    CHECK(forced.out == "levenshtein kernel: scalar\n");
    const auto native = run({"--kernel-info"}, dir);
    CHECK(native.status == 0);
    CHECK(native.out.starts_with("levenshtein kernel: "));
}
