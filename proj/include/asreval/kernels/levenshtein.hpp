#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

// Distance-only unit-cost Levenshtein kernels over interned symbol ids.
//
// The scalar kernel is the reference. The AVX2 kernel sweeps the DP table
// by anti-diagonals, eight cells at a time; it must return exactly the
// scalar result for every input. levenshtein() picks the widest kernel the
// running CPU supports, once, on first use.
namespace asreval::kernels {

using Symbol = std::uint32_t;

std::size_t levenshtein_scalar(std::span<const Symbol> a, std::span<const Symbol> b);

// True when the AVX2 kernel was compiled in and the CPU supports it.
bool avx2_available() noexcept;

// Precondition: avx2_available().
std::size_t levenshtein_avx2(std::span<const Symbol> a, std::span<const Symbol> b);

enum class Isa { Scalar, Avx2 };

// Selected kernel. ASREVAL_FORCE_SCALAR=1 in the environment pins the
// scalar path.
Isa active_isa() noexcept;
std::string_view isa_name(Isa isa) noexcept;

std::size_t levenshtein(std::span<const Symbol> a, std::span<const Symbol> b);

}  // namespace asreval::kernels
