#pragma once

#include <array>
#include <cstdint>

namespace ccmpc {

// Philox4x32-10 counter-based generator (Salmon et al., "Parallel Random
// Numbers: As Easy as 1, 2, 3"). Stateless: every draw is a pure function of
// (key, counter), which makes seeded runs reproducible regardless of thread
// scheduling or evaluation order.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                              const std::array<std::uint32_t, 2>& key);
};

// Uniform double in [0, 1) from a 64-bit seed and a 128-bit counter split
// into (stream, step, index). 53-bit resolution.
double counter_uniform01(std::uint64_t seed, std::uint64_t stream, std::uint32_t step, std::uint32_t index);

// Counter contexts used by the pipeline; keeps simulate and mc_validate draws
// on disjoint streams for the same seed.
inline constexpr std::uint64_t kStreamTrajectory = 0;
inline constexpr std::uint64_t kStreamValidation = 1ull << 32;

}  // namespace ccmpc
