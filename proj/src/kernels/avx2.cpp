#include "beststop/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#include <immintrin.h>

#include <cstring>

namespace beststop::kernels {
namespace {

#define BESTSTOP_AVX2 __attribute__((target("avx2,popcnt")))

// Loads up to 32 bytes, zero padded. Bytes are biased by 0x80 so that the
// signed byte compares below order them as unsigned.
BESTSTOP_AVX2 inline __m256i load_biased(const std::uint8_t* in, std::size_t n) {
    alignas(32) std::uint8_t buf[32] = {};
    std::memcpy(buf, in, n);
    const __m256i v = _mm256_load_si256(reinterpret_cast<const __m256i*>(buf));
    return _mm256_xor_si256(v, _mm256_set1_epi8(static_cast<char>(0x80)));
}

BESTSTOP_AVX2 inline std::uint32_t lane_mask(std::size_t n) {
    return n >= 32 ? 0xFFFFFFFFu : ((std::uint32_t{1} << n) - 1);
}

BESTSTOP_AVX2 void rank_avx2(const std::uint8_t* in, std::size_t n, std::uint8_t* out) {
    if (n > kMaxLanes) {
        scalar_table().rank(in, n, out);
        return;
    }
    const __m256i v = load_biased(in, n);
    const std::uint32_t valid = lane_mask(n);
    for (std::size_t i = 0; i < n; ++i) {
        const __m256i pivot = _mm256_set1_epi8(static_cast<char>(in[i] ^ 0x80));
        const auto less = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpgt_epi8(pivot, v)));
        out[i] = static_cast<std::uint8_t>(1 + _mm_popcnt_u32(less & valid));
    }
}

BESTSTOP_AVX2 void insert_last_avx2(const std::uint8_t* in, std::size_t n, std::uint8_t c, std::uint8_t* out) {
    if (n + 1 > kMaxLanes) {
        scalar_table().insert_last(in, n, c, out);
        return;
    }
    alignas(32) std::uint8_t buf[32] = {};
    std::memcpy(buf, in, n);
    const __m256i raw = _mm256_load_si256(reinterpret_cast<const __m256i*>(buf));
    const __m256i bias = _mm256_set1_epi8(static_cast<char>(0x80));
    // in[j] >= c  <=>  in[j] > c - 1 (c >= 1 always holds for child indices)
    const __m256i threshold = _mm256_set1_epi8(static_cast<char>((c - 1) ^ 0x80));
    const __m256i ge = _mm256_cmpgt_epi8(_mm256_xor_si256(raw, bias), threshold);
    const __m256i bumped = _mm256_sub_epi8(raw, ge);  // ge lanes are -1
    _mm256_store_si256(reinterpret_cast<__m256i*>(buf), bumped);
    std::memcpy(out, buf, n);
    out[n] = c;
}

BESTSTOP_AVX2 std::uint32_t ltr_max_mask_avx2(const std::uint8_t* in, std::size_t n) {
    if (n > kMaxLanes) n = kMaxLanes;
    alignas(32) std::uint8_t buf[32] = {};
    std::memcpy(buf, in, n);
    const __m256i v = _mm256_load_si256(reinterpret_cast<const __m256i*>(buf));
    // Exclusive prefix max within each 128-bit lane: shift by one byte first,
    // then fold in log steps.
    __m256i pm = _mm256_slli_si256(v, 1);
    pm = _mm256_max_epu8(pm, _mm256_slli_si256(pm, 1));
    pm = _mm256_max_epu8(pm, _mm256_slli_si256(pm, 2));
    pm = _mm256_max_epu8(pm, _mm256_slli_si256(pm, 4));
    pm = _mm256_max_epu8(pm, _mm256_slli_si256(pm, 8));
    // Carry the low lane's full max (including its last byte) into the high lane.
    const __m256i inclusive_low = _mm256_max_epu8(pm, v);
    const __m128i low = _mm256_castsi256_si128(inclusive_low);
    const __m128i low_max = _mm_shuffle_epi8(low, _mm_set1_epi8(15));
    const __m256i carry = _mm256_inserti128_si256(_mm256_setzero_si256(), low_max, 1);
    pm = _mm256_max_epu8(pm, carry);
    // v > pm (unsigned)  <=>  max(v, pm) != pm; position 0 compares against 0
    // so a lone zero byte is never padded in (permutation values start at 1).
    const __m256i eq = _mm256_cmpeq_epi8(_mm256_max_epu8(v, pm), pm);
    const auto strict = ~static_cast<std::uint32_t>(_mm256_movemask_epi8(eq));
    return strict & lane_mask(n);
}

const KernelTable kAvx2{rank_avx2, insert_last_avx2, ltr_max_mask_avx2, "avx2"};

}  // namespace

const KernelTable* avx2_table() {
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
    return supported ? &kAvx2 : nullptr;
}

}  // namespace beststop::kernels

#else

namespace beststop::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace beststop::kernels

#endif
