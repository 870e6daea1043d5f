#include "coker/sampler.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace coker {

namespace {

std::uint64_t mix(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream tags: base digits and refinement digits per prime.
std::uint64_t base_stream(Prime p) { return p.value() << 1; }
std::uint64_t refine_stream(Prime p) { return (p.value() << 1) | 1; }

ResidueMatrix draw_entries(SplitMix64 gen, Eigen::Index rows, Eigen::Index cols,
                           std::uint64_t bound) {
    ResidueMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform_below(gen, bound);
    }
    return m;
}

void check_index(const SampleSpec& spec, std::uint64_t index, std::size_t level) {
    if (index >= spec.count) throw std::out_of_range("sample index beyond spec count");
    if (level >= spec.levels.size()) throw std::out_of_range("prime level out of range");
}

} // namespace

SplitMix64 sample_stream(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
    std::uint64_t h = mix(seed + 0x9e3779b97f4a7c15ULL);
    h = mix(h ^ (index + 0x632be59bd9b4e019ULL));
    h = mix(h ^ (stream * 0xd6e8feb86659fd93ULL + 1));
    return SplitMix64(h);
}

std::uint64_t uniform_below(SplitMix64& gen, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below needs a positive bound");
    // Reject the top 2^64 mod bound values.
    const std::uint64_t excess = (0 - bound) % bound;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - excess;
    for (;;) {
        const std::uint64_t x = gen();
        if (x <= limit) return x % bound;
    }
}

void SampleSpec::validate() const {
    if (levels.empty()) throw std::invalid_argument("at least one prime is required");
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    if (u < 0) throw std::invalid_argument("u must be nonnegative");
    std::set<std::uint64_t> seen;
    for (const auto& level : levels) {
        if (!seen.insert(level.p.value()).second) {
            throw std::invalid_argument("primes must be distinct");
        }
        Modulus check(level.p, level.e);  // throws for e < 1 or p^e >= 2^63
    }
}

MatrixModPE sample_for_prime(const SampleSpec& spec, std::uint64_t index, std::size_t level) {
    check_index(spec, index, level);
    const auto& [p, e] = spec.levels[level];
    Modulus mod(p, e);
    return MatrixModPE(p, e,
                       draw_entries(sample_stream(spec.seed, index, base_stream(p)),
                                    spec.n + spec.u, spec.n, mod.value()));
}

MatrixModPE sample_matrix(const SampleSpec& spec, std::uint64_t index) {
    return sample_for_prime(spec, index, 0);
}

std::vector<MatrixModPE> sample_multiprime(const SampleSpec& spec, std::uint64_t index) {
    std::vector<MatrixModPE> out;
    out.reserve(spec.levels.size());
    for (std::size_t level = 0; level < spec.levels.size(); ++level) {
        out.push_back(sample_for_prime(spec, index, level));
    }
    return out;
}

std::optional<MatrixModPE> sample_refined(const SampleSpec& spec, std::uint64_t index,
                                          std::size_t level) {
    check_index(spec, index, level);
    const auto& [p, e] = spec.levels[level];
    std::optional<Modulus> wide;
    try {
        wide.emplace(p, 2 * e);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
    const MatrixModPE low = sample_for_prime(spec, index, level);
    const Residue base = wide->power(e);
    ResidueMatrix high = draw_entries(sample_stream(spec.seed, index, refine_stream(p)),
                                      low.rows(), low.cols(), base);
    ResidueMatrix combined = low.entries() + base * high;
    return MatrixModPE(p, 2 * e, std::move(combined));
}

} // namespace coker
