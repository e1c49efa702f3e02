#include "asreval/phonetic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "asreval/error.hpp"
#include "asreval/kernels/levenshtein.hpp"
#include "asreval/symbols.hpp"

namespace asreval {

namespace {

// 0 for letters that carry no code (vowels, Y, H, W).
char soundex_digit(char upper) {
    switch (upper) {
        case 'B': case 'F': case 'P': case 'V': return '1';
        case 'C': case 'G': case 'J': case 'K': case 'Q': case 'S': case 'X': case 'Z': return '2';
        case 'D': case 'T': return '3';
        case 'L': return '4';
        case 'M': case 'N': return '5';
        case 'R': return '6';
        default: return '0';
    }
}

}  // namespace

std::string soundex(std::string_view word) {
    std::string letters;
    for (char ch : word) {
        const auto c = static_cast<unsigned char>(ch);
        if (c == '\'' || (c < 0x80 && std::isdigit(c))) continue;
        if (c >= 0x80 || !std::isalpha(c))
            throw DomainError("soundex: '" + std::string(word) + "' is not alphabetic");
        letters += static_cast<char>(std::toupper(c));
    }
    if (letters.empty()) throw DomainError("soundex: '" + std::string(word) + "' has no letters");

    std::string code(1, letters[0]);
    char last = soundex_digit(letters[0]);
    for (std::size_t i = 1; i < letters.size() && code.size() < 4; ++i) {
        const char c = letters[i];
        if (c == 'H' || c == 'W') continue;  // transparent: does not reset `last`
        const char d = soundex_digit(c);
        if (d != '0' && d != last) code += d;
        last = d;
    }
    code.resize(4, '0');
    return code;
}

double jaro(std::string_view a, std::string_view b) {
    if (a.empty() && b.empty()) return 1.0;
    if (a.empty() || b.empty()) return 0.0;

    const std::size_t longest = std::max(a.size(), b.size());
    const std::size_t window = longest / 2 > 0 ? longest / 2 - 1 : 0;
    std::vector<char> a_matched(a.size(), 0), b_matched(b.size(), 0);

    std::size_t matches = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t lo = i > window ? i - window : 0;
        const std::size_t hi = std::min(b.size(), i + window + 1);
        for (std::size_t j = lo; j < hi; ++j) {
            if (!b_matched[j] && a[i] == b[j]) {
                a_matched[i] = b_matched[j] = 1;
                ++matches;
                break;
            }
        }
    }
    if (matches == 0) return 0.0;

    std::size_t out_of_order = 0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a_matched[i]) continue;
        while (!b_matched[k]) ++k;
        if (a[i] != b[k]) ++out_of_order;
        ++k;
    }
    const double m = static_cast<double>(matches);
    const double t = static_cast<double>(out_of_order / 2);
    return (m / static_cast<double>(a.size()) + m / static_cast<double>(b.size()) + (m - t) / m) / 3.0;
}

double jaro_winkler(std::string_view a, std::string_view b, double prefix_scale, std::size_t max_prefix) {
    if (!(prefix_scale >= 0.0 && prefix_scale <= 0.25))
        throw DomainError("jaro_winkler: prefix_scale must lie in [0, 0.25]");
    const double sim = jaro(a, b);
    const std::size_t cap = std::min({max_prefix, a.size(), b.size()});
    std::size_t prefix = 0;
    while (prefix < cap && a[prefix] == b[prefix]) ++prefix;
    return sim + static_cast<double>(prefix) * prefix_scale * (1.0 - sim);
}

namespace {

constexpr std::array<std::string_view, 39> kArpabet = {
    "AA", "AE", "AH", "AO", "AW", "AY", "B",  "CH", "D",  "DH", "EH", "ER", "EY",
    "F",  "G",  "HH", "IH", "IY", "JH", "K",  "L",  "M",  "N",  "NG", "OW", "OY",
    "P",  "R",  "S",  "SH", "T",  "TH", "UH", "UW", "V",  "W",  "Y",  "Z",  "ZH"};

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

bool is_alternate(std::string_view word) {
    if (word.size() < 3 || word.back() != ')') return false;
    const auto open = word.rfind('(');
    if (open == std::string_view::npos || open == 0 || open + 2 > word.size() - 1) return false;
    for (std::size_t i = open + 1; i + 1 < word.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(word[i]))) return false;
    return true;
}

}  // namespace

bool is_arpabet(std::string_view symbol) {
    return std::find(kArpabet.begin(), kArpabet.end(), symbol) != kArpabet.end();
}

Lexicon Lexicon::parse(std::string_view text, const std::string& source_name) {
    Lexicon lex;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;

        if (line.rfind(";;;", 0) == 0) continue;
        std::istringstream fields(line);
        std::string word;
        if (!(fields >> word)) continue;
        if (is_alternate(word)) continue;

        std::vector<std::string> phones;
        std::string ph;
        while (fields >> ph) {
            if (ph[0] == '#') break;  // trailing annotation, as in cmudict.dict
            while (!ph.empty() && std::isdigit(static_cast<unsigned char>(ph.back()))) ph.pop_back();
            ph = upper(ph);
            if (!is_arpabet(ph))
                throw ParseError(source_name, line_no, "unknown phoneme '" + ph + "' for " + word);
            phones.push_back(std::move(ph));
        }
        if (phones.empty()) throw ParseError(source_name, line_no, "no pronunciation for " + word);
        lex.entries_.try_emplace(upper(word), std::move(phones));
    }
    return lex;
}

Lexicon Lexicon::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open lexicon '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

const std::vector<std::string>* Lexicon::find(std::string_view word) const {
    auto it = entries_.find(upper(word));
    return it == entries_.end() ? nullptr : &it->second;
}

PhonemeSeq g2p(std::string_view word, const Lexicon& lexicon) {
    PhonemeSeq seq;
    if (const auto* pron = lexicon.find(word)) {
        seq.phonemes = *pron;
        return seq;
    }
    seq.fallback = true;
    for (char ch : word) {
        const auto c = static_cast<unsigned char>(ch);
        if (c < 0x80 && std::isalnum(c)) seq.phonemes.emplace_back(1, static_cast<char>(std::toupper(c)));
    }
    return seq;
}

std::vector<std::string> phoneme_sequence(const NormalizedText& text, const Lexicon& lexicon) {
    std::vector<std::string> flat;
    for (std::size_t w = 0; w < text.tokens.size(); ++w) {
        if (w > 0) flat.emplace_back(kWordBoundary);
        auto seq = g2p(text.tokens[w], lexicon);
        flat.insert(flat.end(), std::make_move_iterator(seq.phonemes.begin()),
                    std::make_move_iterator(seq.phonemes.end()));
    }
    return flat;
}

double psim_phoneme(const NormalizedText& reference, const NormalizedText& hypothesis,
                    const Lexicon& lexicon) {
    const auto ref = phoneme_sequence(reference, lexicon);
    const auto hyp = phoneme_sequence(hypothesis, lexicon);
    const std::size_t longest = std::max(ref.size(), hyp.size());
    if (longest == 0) return 1.0;

    SymbolTable table;
    const auto a = table.intern_all(ref);
    const auto b = table.intern_all(hyp);
    const std::size_t dist = kernels::levenshtein(a, b);
    return 1.0 - static_cast<double>(dist) / static_cast<double>(longest);
}

std::string soundex_codes(const NormalizedText& text, std::size_t* skipped) {
    std::string joined;
    for (const auto& token : text.tokens) {
        std::string code;
        try {
            code = soundex(token);
        } catch (const DomainError&) {
            if (skipped) ++*skipped;
            continue;
        }
        if (!joined.empty()) joined += ' ';
        joined += code;
    }
    return joined;
}

SoundexSimilarity psim_soundex_detailed(const NormalizedText& reference,
                                        const NormalizedText& hypothesis) {
    SoundexSimilarity result;
    const std::string ref = soundex_codes(reference, &result.skipped_words);
    const std::string hyp = soundex_codes(hypothesis, &result.skipped_words);
    result.value = jaro_winkler(ref, hyp);
    return result;
}

double psim_soundex(const NormalizedText& reference, const NormalizedText& hypothesis) {
    return psim_soundex_detailed(reference, hypothesis).value;
}

}  // namespace asreval
