#pragma once

#include <array>
#include <cstdint>

// Counter-based random number generation. Every draw is a pure function of
// (seed, stream, index), so simulations are reproducible bit-for-bit across
// runs and may be evaluated in any order by any number of threads.
namespace rsqtsm::rng {

// One Philox4x32-10 block (Salmon, Moraes, Dror, Shaw; SC'11).
using Block = std::array<std::uint32_t, 4>;

// key = 64-bit seed, counter = (index, stream) packed into 128 bits.
Block philox4x32(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Map 64 random bits to the open interval (0,1): (k + 0.5) * 2^-53.
double to_uniform(std::uint64_t bits);

// Wichura's PPND16 (algorithm AS 241): inverse of the standard normal CDF,
// accurate to about 1e-15 over (0,1).
double inverse_normal_cdf(double p);

// Stateless draws: the i-th uniform / standard normal of a named stream.
double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t i);
double normal_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t i);

// Stream ids carry a purpose tag in the top bits so that e.g. the chain
// uniforms of replicate j never collide with its asset shocks.
enum class Purpose : std::uint64_t {
    chain_simulation = 1,
    asset_shocks = 2,
    mc_conditional = 3,
    mc_unconditional_chain = 4,
    mc_unconditional_shocks = 5,
    mc_chain_pricing = 6,
};

constexpr std::uint64_t stream_id(Purpose p, std::uint64_t replicate = 0) {
    return (static_cast<std::uint64_t>(p) << 48) | (replicate & ((std::uint64_t{1} << 48) - 1));
}

// Source of standard normal shocks; tests may substitute degenerate ones.
struct NormalSource {
    virtual ~NormalSource() = default;
    virtual double next() = 0;
};

class PhiloxNormalStream final : public NormalSource {
public:
    PhiloxNormalStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t start = 0)
        : seed_(seed), stream_(stream), index_(start) {}
    double next() override { return normal_at(seed_, stream_, index_++); }

private:
    std::uint64_t seed_, stream_, index_;
};

}  // namespace rsqtsm::rng
