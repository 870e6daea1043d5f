#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace coker {

/// True iff n is prime. Deterministic Miller-Rabin over the full 64-bit range.
bool is_prime(std::uint64_t n);

/// A verified prime. Construction throws std::invalid_argument for composites.
class Prime {
public:
    explicit Prime(std::uint64_t p) : value_(p) {
        if (!is_prime(p)) {
            throw std::invalid_argument(std::to_string(p) + " is not prime");
        }
    }

    std::uint64_t value() const { return value_; }
    operator std::uint64_t() const { return value_; }

    friend bool operator==(Prime a, Prime b) = default;

private:
    std::uint64_t value_;
};

} // namespace coker
