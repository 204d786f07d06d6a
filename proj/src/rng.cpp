#include "ccmpc/rng.hpp"

namespace ccmpc {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> Philox4x32::block(const std::array<std::uint32_t, 4>& counter,
                                               const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> c = counter;
    std::array<std::uint32_t, 2> k = key;
    for (int r = 0; r < 10; ++r) {
        round_once(c, k);
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

double counter_uniform01(std::uint64_t seed, std::uint64_t stream, std::uint32_t step, std::uint32_t index) {
    const std::array<std::uint32_t, 4> counter = {static_cast<std::uint32_t>(stream),
                                                  static_cast<std::uint32_t>(stream >> 32), step, index};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    const auto out = Philox4x32::block(counter, key);
    const std::uint64_t bits = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace ccmpc
