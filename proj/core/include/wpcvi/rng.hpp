#ifndef WPCVI_RNG_HPP
#define WPCVI_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace wpcvi {

/// SplitMix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Derives an independent sub-stream seed from (seed, stream). Used for
/// per-restart and per-job seeds so serial and parallel runs agree.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Seedable 64-bit generator with portable distributions.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The std:: distributions are implementation-defined, so the
/// uniform/normal/index draws below are written out to stay bit-identical
/// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t uniform_index(std::uint64_t bound);

    /// Standard normal via the Marsaglia polar method.
    double normal();

    /// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

    /// Child generator seeded from this one's stream.
    Rng split();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace wpcvi

#endif  // WPCVI_RNG_HPP
