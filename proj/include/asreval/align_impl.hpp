#pragma once

#include <algorithm>
#include <vector>

namespace asreval {

template <typename T>
Alignment align(std::span<const T> a, std::span<const T> b) {
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    const std::size_t w = n + 1;
    std::vector<std::size_t> dp((m + 1) * w);
    for (std::size_t i = 0; i <= m; ++i) dp[i * w] = i;
    for (std::size_t j = 0; j <= n; ++j) dp[j] = j;
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t sub = dp[(i - 1) * w + j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            dp[i * w + j] = std::min({sub, dp[(i - 1) * w + j] + 1, dp[i * w + j - 1] + 1});
        }
    }

    Alignment result;
    result.distance = dp[m * w + n];
    std::size_t i = m, j = n;
    while (i > 0 || j > 0) {
        const std::size_t here = dp[i * w + j];
        const auto ri = static_cast<std::ptrdiff_t>(i) - 1;
        const auto hj = static_cast<std::ptrdiff_t>(j) - 1;
        if (i > 0 && j > 0 && a[i - 1] == b[j - 1] && dp[(i - 1) * w + j - 1] == here) {
            result.ops.push_back({EditOp::Match, ri, hj});
            --i, --j;
        } else if (i > 0 && j > 0 && dp[(i - 1) * w + j - 1] + 1 == here) {
            result.ops.push_back({EditOp::Substitute, ri, hj});
            --i, --j;
        } else if (i > 0 && dp[(i - 1) * w + j] + 1 == here) {
            result.ops.push_back({EditOp::Delete, ri, -1});
            --i;
        } else {
            result.ops.push_back({EditOp::Insert, -1, hj});
            --j;
        }
    }
    std::reverse(result.ops.begin(), result.ops.end());
    return result;
}

}  // namespace asreval
