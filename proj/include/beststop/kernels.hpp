#pragma once

// Byte-array kernels used on the enumeration hot path. Every kernel has a
// scalar reference implementation and, on x86-64, an AVX2 variant picked at
// runtime. Inputs are byte arrays with values >= 1; the SIMD paths cover up
// to kMaxLanes entries and defer to the scalar code beyond that.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace beststop::kernels {

inline constexpr std::size_t kMaxLanes = 32;

struct KernelTable {
    // out[i] = 1 + #{j : in[j] < in[i]}. Flattens a sequence of distinct bytes.
    void (*rank)(const std::uint8_t* in, std::size_t n, std::uint8_t* out);
    // out[j] = in[j] + (in[j] >= c) for j < n, out[n] = c.
    void (*insert_last)(const std::uint8_t* in, std::size_t n, std::uint8_t c, std::uint8_t* out);
    // Bit j set iff in[j] exceeds every in[i], i < j.
    std::uint32_t (*ltr_max_mask)(const std::uint8_t* in, std::size_t n);
    std::string_view name;
};

const KernelTable& scalar_table();
// Null when the CPU or build lacks the instruction set.
const KernelTable* avx2_table();

// The table selected for this process (AVX2 when supported unless forced off).
const KernelTable& active();
void force_scalar(bool on);

inline void rank(const std::uint8_t* in, std::size_t n, std::uint8_t* out) { active().rank(in, n, out); }
inline void insert_last(const std::uint8_t* in, std::size_t n, std::uint8_t c, std::uint8_t* out) {
    active().insert_last(in, n, c, out);
}
inline std::uint32_t ltr_max_mask(const std::uint8_t* in, std::size_t n) { return active().ltr_max_mask(in, n); }

}  // namespace beststop::kernels
