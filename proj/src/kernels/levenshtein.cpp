#include "asreval/kernels/levenshtein.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <vector>

namespace asreval::kernels {

std::size_t levenshtein_scalar(std::span<const Symbol> a, std::span<const Symbol> b) {
    if (a.empty()) return b.size();
    if (b.empty()) return a.size();

    // One row over b plus the carried diagonal.
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            const std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[j] = std::min({sub, up + 1, row[j - 1] + 1});
            diag = up;
        }
    }
    return row[b.size()];
}

#if !defined(ASREVAL_HAVE_AVX2)
bool avx2_available() noexcept { return false; }

std::size_t levenshtein_avx2(std::span<const Symbol> a, std::span<const Symbol> b) {
    return levenshtein_scalar(a, b);
}
#endif

namespace {

Isa detect() noexcept {
    if (const char* force = std::getenv("ASREVAL_FORCE_SCALAR"); force && std::strcmp(force, "0") != 0)
        return Isa::Scalar;
    return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

Isa active_isa() noexcept {
    static const Isa isa = detect();
    return isa;
}

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Avx2: return "avx2";
        case Isa::Scalar: break;
    }
    return "scalar";
}

std::size_t levenshtein(std::span<const Symbol> a, std::span<const Symbol> b) {
    if (active_isa() == Isa::Avx2) return levenshtein_avx2(a, b);
    return levenshtein_scalar(a, b);
}

}  // namespace asreval::kernels
