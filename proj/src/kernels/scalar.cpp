#include "beststop/kernels.hpp"

namespace beststop::kernels {
namespace {

void rank_scalar(const std::uint8_t* in, std::size_t n, std::uint8_t* out) {
    for (std::size_t i = 0; i < n; ++i) {
        std::uint8_t r = 1;
        for (std::size_t j = 0; j < n; ++j) r += static_cast<std::uint8_t>(in[j] < in[i]);
        out[i] = r;
    }
}

void insert_last_scalar(const std::uint8_t* in, std::size_t n, std::uint8_t c, std::uint8_t* out) {
    for (std::size_t j = 0; j < n; ++j) out[j] = static_cast<std::uint8_t>(in[j] + (in[j] >= c ? 1 : 0));
    out[n] = c;
}

std::uint32_t ltr_max_mask_scalar(const std::uint8_t* in, std::size_t n) {
    std::uint32_t mask = 0;
    int best = -1;
    for (std::size_t j = 0; j < n && j < kMaxLanes; ++j) {
        if (in[j] > best) {
            best = in[j];
            mask |= std::uint32_t{1} << j;
        }
    }
    return mask;
}

const KernelTable kScalar{rank_scalar, insert_last_scalar, ltr_max_mask_scalar, "scalar"};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace beststop::kernels
