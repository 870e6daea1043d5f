#pragma once

#include <compare>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace coker {

/// Isomorphism type of a finite abelian p-group, G = Z/p^{λ_1} ⊕ ... ⊕ Z/p^{λ_k}.
///
/// Parts are strictly positive and nonincreasing; the empty partition is the
/// trivial group. Ordering is graded: first by size |λ|, then reverse
/// lexicographic within a size, so (2) precedes (1,1).
class Partition {
public:
    Partition() = default;
    Partition(std::initializer_list<int> parts);
    explicit Partition(std::vector<int> parts);

    const std::vector<int>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    /// Number of parts, i.e. the p-rank λ'_1.
    int length() const { return static_cast<int>(parts_.size()); }
    /// Σλ_i, the exponent of p in the group order.
    int size() const { return size_; }
    /// Largest part (exponent of the group); 0 for the trivial group.
    int largest() const { return parts_.empty() ? 0 : parts_.front(); }
    int operator[](std::size_t i) const { return parts_[i]; }

    /// Transpose of the Young diagram.
    Partition conjugate() const;

    /// Multiplicity of each part size: result[i] is the count of parts equal to i.
    std::vector<int> multiplicities() const;

    /// Parts joined by commas ("2,1"); empty string for the trivial group.
    std::string to_string() const;

    friend bool operator==(const Partition&, const Partition&) = default;
    friend std::strong_ordering operator<=>(const Partition& a, const Partition& b);

private:
    std::vector<int> parts_;
    int size_ = 0;
};

/// Parses "2,1" (or "" / "trivial") into a partition. Parts may be given in any
/// order; they are sorted. Throws std::invalid_argument on malformed input.
Partition parse_partition(std::string_view text);

/// Componentwise λ'_i <= μ'_i, i.e. G_λ is (isomorphic to) a subgroup and a
/// quotient of G_μ.
bool is_subtype(const Partition& lambda, const Partition& mu);

/// All partitions of exactly n, in descending lexicographic order.
std::vector<Partition> partitions_of(int n);

/// All partitions of sizes 0..max_size in graded order.
std::vector<Partition> enumerate_partitions(int max_size);

/// Partitions ν with ν ⊆ μ (as subtypes), in graded order, including μ itself.
std::vector<Partition> subtypes_of(const Partition& mu);

/// Direct sum of two groups (union of parts).
Partition direct_sum(const Partition& a, const Partition& b);

} // namespace coker
