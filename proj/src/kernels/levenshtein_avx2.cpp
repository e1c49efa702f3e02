// Built with -mavx2; only entered after a runtime CPU check.
#include "asreval/kernels/levenshtein.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace asreval::kernels {

bool avx2_available() noexcept {
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

std::size_t levenshtein_avx2(std::span<const Symbol> a, std::span<const Symbol> b) {
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    if (m == 0) return n;
    if (n == 0) return m;
    if (m + n > static_cast<std::size_t>(INT32_MAX))
        throw std::length_error("levenshtein_avx2: sequences too long");

    // Diagonal buffers indexed by row i; cell (i, j) lives on diagonal i + j.
    std::vector<std::int32_t> buf0(m + 1), buf1(m + 1), buf2(m + 1);
    std::int32_t* prev2 = buf0.data();
    std::int32_t* prev1 = buf1.data();
    std::int32_t* cur = buf2.data();

    // b reversed so that b[j-1] for consecutive i is a contiguous load.
    std::vector<Symbol> rb(b.rbegin(), b.rend());
    const auto* av = reinterpret_cast<const std::int32_t*>(a.data());
    const auto* bv = reinterpret_cast<const std::int32_t*>(rb.data());

    const __m256i one = _mm256_set1_epi32(1);
    prev1[0] = 0;

    const std::size_t last = m + n;
    for (std::size_t d = 1; d <= last; ++d) {
        if (d <= n) cur[0] = static_cast<std::int32_t>(d);
        if (d <= m) cur[d] = static_cast<std::int32_t>(d);

        const std::size_t lo = std::max<std::size_t>(1, d > n ? d - n : 0);
        const std::size_t hi = std::min(m, d - 1);
        std::size_t i = lo;
        if (lo <= hi) {
            const std::size_t rb_base = n - d;  // rb index is rb_base + i, never negative
            for (; i + 8 <= hi + 1; i += 8) {
                const __m256i up = _mm256_add_epi32(
                    _mm256_loadu_si256(reinterpret_cast<const __m256i*>(prev1 + i - 1)), one);
                const __m256i left = _mm256_add_epi32(
                    _mm256_loadu_si256(reinterpret_cast<const __m256i*>(prev1 + i)), one);
                const __m256i diag = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(prev2 + i - 1));
                const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(av + i - 1));
                const __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(bv + rb_base + i));
                // eq is -1 on a match, so diag + 1 + eq is the substitution cost.
                const __m256i eq = _mm256_cmpeq_epi32(x, y);
                const __m256i sub = _mm256_add_epi32(_mm256_add_epi32(diag, one), eq);
                const __m256i best = _mm256_min_epi32(sub, _mm256_min_epi32(up, left));
                _mm256_storeu_si256(reinterpret_cast<__m256i*>(cur + i), best);
            }
            for (; i <= hi; ++i) {
                const std::int32_t sub = prev2[i - 1] + (av[i - 1] == bv[rb_base + i] ? 0 : 1);
                cur[i] = std::min({sub, prev1[i - 1] + 1, prev1[i] + 1});
            }
        }
        std::int32_t* recycled = prev2;
        prev2 = prev1;
        prev1 = cur;
        cur = recycled;
    }
    return static_cast<std::size_t>(prev1[m]);
}

}  // namespace asreval::kernels
