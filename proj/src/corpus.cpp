#include "asreval/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "asreval/error.hpp"
#include "asreval/stats.hpp"

namespace asreval {

using nlohmann::json;

std::optional<Severity> parse_severity(std::string_view label) {
    if (label == "H") return Severity::High;
    if (label == "M") return Severity::Medium;
    if (label == "L") return Severity::Low;
    if (label == "VL") return Severity::VeryLow;
    return std::nullopt;
}

std::string_view severity_label(Severity s) {
    switch (s) {
        case Severity::High: return "H";
        case Severity::Medium: return "M";
        case Severity::Low: return "L";
        case Severity::VeryLow: return "VL";
        case Severity::Unknown: break;
    }
    return "";
}

std::string NormalizedText::joined() const {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

namespace {

bool is_ascii_alnum(unsigned char c) { return c < 0x80 && std::isalnum(c); }

}  // namespace

NormalizedText normalize(std::string_view text) {
    NormalizedText result;
    result.original = std::string(text);

    std::string current;
    auto flush = [&] {
        if (!current.empty()) result.tokens.push_back(std::move(current));
        current.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (is_ascii_alnum(c)) {
            current += static_cast<char>(std::toupper(c));
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' || c == '-') {
            flush();
            continue;
        }

        // U+2019 (right single quotation mark) is treated as an apostrophe.
        bool apostrophe = c == '\'';
        std::size_t width = 1;
        if (c == 0xE2 && i + 2 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0x80 &&
            static_cast<unsigned char>(text[i + 2]) == 0x99) {
            apostrophe = true;
            width = 3;
        }
        if (apostrophe) {
            const std::size_t next = i + width;
            if (!current.empty() && is_ascii_alnum(static_cast<unsigned char>(current.back())) &&
                next < text.size() && is_ascii_alnum(static_cast<unsigned char>(text[next]))) {
                current += '\'';
            }
            i += width - 1;
        }
        // Other punctuation and non-ASCII bytes are dropped in place.
    }
    flush();
    return result;
}

void validate(const TranscriptRecord& record) {
    if (record.id.empty()) throw ValidationError(record.id, "id must be non-empty");
    if (normalize(record.reference).empty())
        throw ValidationError(record.id, "reference is empty after normalization");
    if (record.ratings) {
        for (int r : *record.ratings) {
            if (r < 1 || r > 5)
                throw ValidationError(record.id, "rating " + std::to_string(r) + " outside [1,5]");
        }
    }
}

namespace {

std::string require_string(const json& obj, const char* key, const std::string& id) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string())
        throw ValidationError(id, std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

TranscriptRecord record_from_json(const json& obj) {
    if (!obj.is_object()) throw DomainError("expected a JSON object");

    TranscriptRecord rec;
    auto id_it = obj.find("id");
    if (id_it == obj.end() || !id_it->is_string())
        throw ValidationError("", "field 'id' must be a string");
    rec.id = id_it->get<std::string>();
    rec.system_id = require_string(obj, "system_id", rec.id);
    rec.reference = require_string(obj, "reference", rec.id);
    rec.hypothesis = require_string(obj, "hypothesis", rec.id);

    if (auto it = obj.find("severity"); it != obj.end() && !it->is_null()) {
        if (!it->is_string()) throw ValidationError(rec.id, "severity must be a string or null");
        auto sev = parse_severity(it->get<std::string>());
        if (!sev) throw ValidationError(rec.id, "unknown severity '" + it->get<std::string>() + "'");
        rec.severity = *sev;
    }
    if (auto it = obj.find("corrected_hypothesis"); it != obj.end() && !it->is_null()) {
        if (!it->is_string()) throw ValidationError(rec.id, "corrected_hypothesis must be a string or null");
        rec.corrected_hypothesis = it->get<std::string>();
    }
    if (auto it = obj.find("ratings"); it != obj.end() && !it->is_null()) {
        if (!it->is_array()) throw ValidationError(rec.id, "ratings must be an array or null");
        std::vector<int> ratings;
        for (const auto& v : *it) {
            if (!v.is_number_integer()) throw ValidationError(rec.id, "ratings must be integers");
            ratings.push_back(v.get<int>());
        }
        rec.ratings = std::move(ratings);
    }
    validate(rec);
    return rec;
}

}  // namespace

std::vector<TranscriptRecord> parse_corpus(std::string_view jsonl, const std::string& source_name) {
    std::vector<TranscriptRecord> records;
    std::unordered_map<std::string, std::size_t> seen;  // id -> line

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= jsonl.size()) {
        auto end = jsonl.find('\n', pos);
        if (end == std::string_view::npos) end = jsonl.size();
        std::string_view line = jsonl.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) {
            if (end == jsonl.size()) break;
            continue;
        }

        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(source_name, line_no, e.what());
        }
        if (!obj.is_object()) throw ParseError(source_name, line_no, "expected a JSON object");

        TranscriptRecord rec;
        try {
            rec = record_from_json(obj);
        } catch (const ValidationError& e) {
            throw ValidationError(e.record_id(), e.detail() + " (" + source_name + ":" +
                                                     std::to_string(line_no) + ")");
        }

        auto [it, inserted] = seen.emplace(rec.id, line_no);
        if (!inserted) {
            throw Error(source_name + ": duplicate id '" + rec.id + "' on lines " +
                        std::to_string(it->second) + " and " + std::to_string(line_no));
        }
        records.push_back(std::move(rec));
        if (end == jsonl.size()) break;
    }
    return records;
}

std::vector<TranscriptRecord> load_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open corpus '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_corpus(buf.str(), path);
}

std::string to_jsonl(const TranscriptRecord& record) {
    json obj = json::object();
    obj["id"] = record.id;
    obj["system_id"] = record.system_id;
    if (record.severity == Severity::Unknown)
        obj["severity"] = nullptr;
    else
        obj["severity"] = std::string(severity_label(record.severity));
    obj["reference"] = record.reference;
    obj["hypothesis"] = record.hypothesis;
    obj["corrected_hypothesis"] =
        record.corrected_hypothesis ? json(*record.corrected_hypothesis) : json(nullptr);
    obj["ratings"] = record.ratings ? json(*record.ratings) : json(nullptr);
    return obj.dump();
}

void save_corpus(const std::string& path, std::span<const TranscriptRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write corpus '" + path + "'");
    for (const auto& r : records) out << to_jsonl(r) << '\n';
}

double mean_rating(const TranscriptRecord& record) {
    if (!record.ratings || record.ratings->empty())
        throw ValidationError(record.id, "no ratings");
    double sum = 0.0;
    for (int r : *record.ratings) sum += r;
    return sum / static_cast<double>(record.ratings->size());
}

AgreementReport annotator_agreement(const std::vector<std::vector<double>>& ratings) {
    if (ratings.empty()) throw DomainError("annotator_agreement: empty ratings matrix");
    const std::size_t m = ratings.front().size();
    if (m < 2) throw DomainError("annotator_agreement: need at least two annotators");
    for (std::size_t i = 0; i < ratings.size(); ++i) {
        if (ratings[i].size() != m)
            throw DomainError("annotator_agreement: row " + std::to_string(i) + " has " +
                              std::to_string(ratings[i].size()) + " ratings, expected " +
                              std::to_string(m));
    }

    std::vector<std::vector<double>> columns(m, std::vector<double>(ratings.size()));
    std::vector<double> all;
    all.reserve(ratings.size() * m);
    for (std::size_t i = 0; i < ratings.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            columns[j][i] = ratings[i][j];
            all.push_back(ratings[i][j]);
        }
    }

    AgreementReport report;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            report.pairwise_pearson.push_back(stats::pearson(columns[a], columns[b]));
    report.min_r = *std::min_element(report.pairwise_pearson.begin(), report.pairwise_pearson.end());
    report.max_r = *std::max_element(report.pairwise_pearson.begin(), report.pairwise_pearson.end());
    report.rating_std = std::sqrt(stats::population_variance(all));
    return report;
}

std::vector<std::vector<double>> ratings_matrix(std::span<const TranscriptRecord> records) {
    std::vector<std::vector<double>> matrix;
    for (const auto& r : records) {
        if (!r.ratings) throw ValidationError(r.id, "no ratings");
        if (!matrix.empty() && r.ratings->size() != matrix.front().size())
            throw ValidationError(r.id, "has " + std::to_string(r.ratings->size()) + " ratings, expected " +
                                            std::to_string(matrix.front().size()));
        matrix.emplace_back(r.ratings->begin(), r.ratings->end());
    }
    return matrix;
}

}  // namespace asreval
