#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coker/partition.hpp"
#include "coker/pgroup.hpp"
#include "coker/prime.hpp"

// Exhaustive ground truth for the formulas in pgroup.hpp. Everything here works
// on explicit elements and never consults a closed form.
namespace coker::oracle {

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Budget {
    std::size_t max_group_order = 4096;
    std::size_t max_work = 10'000'000;
};

using Element = std::uint32_t;

/// Set of group elements, stored as a bitset over element indices.
class ElementSet {
public:
    ElementSet() = default;
    explicit ElementSet(std::size_t universe) : words_((universe + 63) / 64, 0) {}

    bool contains(Element x) const { return (words_[x >> 6] >> (x & 63)) & 1U; }
    void insert(Element x) { words_[x >> 6] |= std::uint64_t{1} << (x & 63); }
    void merge(const ElementSet& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    }
    std::size_t count() const;
    const std::vector<std::uint64_t>& words() const { return words_; }

    friend bool operator==(const ElementSet&, const ElementSet&) = default;

private:
    std::vector<std::uint64_t> words_;
};

struct ElementSetHash {
    std::size_t operator()(const ElementSet& s) const;
};

/// Z/p^{λ_1} ⊕ ... ⊕ Z/p^{λ_k} with elements indexed in mixed radix.
class ExplicitGroup {
public:
    ExplicitGroup(const Partition& type, Prime p, std::size_t cap = Budget{}.max_group_order);

    const Partition& type() const { return type_; }
    Prime prime() const { return p_; }
    const std::vector<std::uint64_t>& moduli() const { return moduli_; }
    std::size_t order() const { return order_; }
    /// Number of cyclic generators (the k in the moduli sequence).
    int generator_count() const { return static_cast<int>(moduli_.size()); }

    Element zero() const { return 0; }
    Element generator(int i) const;
    Element add(Element a, Element b) const {
        return add_table_.empty() ? add_slow(a, b) : add_table_[a * order_ + b];
    }
    Element scale(Element a, std::uint64_t k) const;
    std::vector<std::uint64_t> residues(Element a) const;
    /// Smallest j with p^j · a = 0.
    int order_exponent(Element a) const { return order_exp_[a]; }

private:
    Partition type_;
    Prime p_;
    std::vector<std::uint64_t> moduli_;
    std::vector<std::uint64_t> stride_;
    std::size_t order_ = 1;
    std::vector<int> order_exp_;
    // Cayley table, filled for groups up to table_limit elements.
    static constexpr std::size_t table_limit = 1024;
    std::vector<Element> add_table_;
    Element add_slow(Element a, Element b) const;
};

/// Subgroup generated by `base` (a subgroup) and g.
ElementSet join(const ExplicitGroup& g, const ElementSet& base, Element x);

/// Isomorphism type of a subgroup given as an element set.
Partition subgroup_type(const ExplicitGroup& g, const ElementSet& subgroup);

struct HomEnumeration {
    BigInt count;
    /// Images of the generators of A, one tuple per homomorphism, when requested.
    std::optional<std::vector<std::vector<Element>>> maps;
};

/// Homomorphisms A → B as generator images whose order divides the generator's order.
HomEnumeration enumerate_homs(const ExplicitGroup& a, const ExplicitGroup& b,
                              bool list = false, const Budget& budget = {});

BigInt enumerate_surjections(const ExplicitGroup& a, const ExplicitGroup& b,
                             const Budget& budget = {});

/// Bijective endomorphisms of A.
BigInt enumerate_automorphisms(const ExplicitGroup& a, const Budget& budget = {});

/// All subgroups, grouped by isomorphism type, in graded order of the type.
std::vector<std::pair<Partition, BigInt>> enumerate_subgroups(const ExplicitGroup& a,
                                                              const Budget& budget = {});

/// Counts surjections into a fixed target from many sources, sharing the
/// memo of partial generating sets across calls.
class SurjectionCounter {
public:
    explicit SurjectionCounter(const ExplicitGroup& target, const Budget& budget = {});
    ~SurjectionCounter();
    SurjectionCounter(SurjectionCounter&&) noexcept;
    SurjectionCounter& operator=(SurjectionCounter&&) noexcept;

    /// Number of generator tuples (g_1..g_k) of the target with p^{orders[i]} g_i = 0
    /// that generate the whole target.
    BigInt count(const std::vector<int>& generator_exponents);

    BigInt count_from(const Partition& source) { return count(source.parts()); }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace coker::oracle
