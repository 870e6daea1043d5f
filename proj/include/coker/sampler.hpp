#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "coker/prime.hpp"
#include "coker/zpe.hpp"

namespace coker {

/// SplitMix64. Small state, so a fresh stream per sample is cheap.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Generator for one (seed, index, stream) triple; a pure function of its arguments.
SplitMix64 sample_stream(std::uint64_t seed, std::uint64_t index, std::uint64_t stream);

/// Uniform integer in [0, bound) with no modulo bias.
std::uint64_t uniform_below(SplitMix64& gen, std::uint64_t bound);

struct PrimeLevel {
    Prime p;
    int e;
};

struct SampleSpec {
    /// One entry in single-prime mode; distinct primes in multi-prime mode.
    std::vector<PrimeLevel> levels;
    int n = 1;
    int u = 0;
    std::uint64_t seed = 0;
    std::uint64_t count = 0;

    static SampleSpec single(Prime p, int e, int n, int u, std::uint64_t seed,
                             std::uint64_t count) {
        return SampleSpec{{PrimeLevel{p, e}}, n, u, seed, count};
    }

    Prime prime() const { return levels.front().p; }
    int precision() const { return levels.front().e; }

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

/// Haar-uniform (n+u) × n matrix mod p^e for the first prime of the spec.
MatrixModPE sample_matrix(const SampleSpec& spec, std::uint64_t index);

/// The matrix for one prime of a multi-prime spec. Each prime draws from its own stream.
MatrixModPE sample_for_prime(const SampleSpec& spec, std::uint64_t index, std::size_t level);

/// One independent matrix per prime.
std::vector<MatrixModPE> sample_multiprime(const SampleSpec& spec, std::uint64_t index);

/// The same sample at precision 2e: low digits unchanged, high digits drawn
/// from a separate stream. Empty when p^{2e} does not fit below 2^63.
std::optional<MatrixModPE> sample_refined(const SampleSpec& spec, std::uint64_t index,
                                          std::size_t level = 0);

} // namespace coker
