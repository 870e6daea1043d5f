#include "coker/oracle.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace coker::oracle {

std::size_t ElementSet::count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::size_t ElementSetHash::operator()(const ElementSet& s) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : s.words()) {
        h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

ExplicitGroup::ExplicitGroup(const Partition& type, Prime p, std::size_t cap)
    : type_(type), p_(p) {
    for (int part : type.parts()) {
        std::uint64_t m = 1;
        for (int i = 0; i < part; ++i) {
            m *= p.value();
            if (m > cap) break;
        }
        if (m > cap || order_ * m > cap) {
            throw BudgetExceeded("group of type (" + type.to_string() + ") at p=" +
                                 std::to_string(p.value()) + " exceeds the element cap " +
                                 std::to_string(cap));
        }
        stride_.push_back(order_);
        moduli_.push_back(m);
        order_ *= m;
    }
    order_exp_.assign(order_, 0);
    for (Element x = 0; x < order_; ++x) {
        int exp = 0;
        const auto r = residues(x);
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (r[i] == 0) continue;
            int v = 0;
            for (std::uint64_t y = r[i]; y % p.value() == 0; y /= p.value()) ++v;
            exp = std::max(exp, type.parts()[i] - v);
        }
        order_exp_[x] = exp;
    }
    if (order_ <= table_limit) {
        add_table_.resize(order_ * order_);
        for (Element a = 0; a < order_; ++a) {
            for (Element b = 0; b < order_; ++b) add_table_[a * order_ + b] = add_slow(a, b);
        }
    }
}

Element ExplicitGroup::generator(int i) const {
    return static_cast<Element>(stride_.at(static_cast<std::size_t>(i)));
}

std::vector<std::uint64_t> ExplicitGroup::residues(Element a) const {
    std::vector<std::uint64_t> r(moduli_.size());
    for (std::size_t i = 0; i < moduli_.size(); ++i) r[i] = (a / stride_[i]) % moduli_[i];
    return r;
}

Element ExplicitGroup::add_slow(Element a, Element b) const {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
        const std::uint64_t x = (a / stride_[i]) % moduli_[i];
        const std::uint64_t y = (b / stride_[i]) % moduli_[i];
        out += ((x + y) % moduli_[i]) * stride_[i];
    }
    return static_cast<Element>(out);
}

Element ExplicitGroup::scale(Element a, std::uint64_t k) const {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
        const std::uint64_t x = (a / stride_[i]) % moduli_[i];
        out += static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * k % moduli_[i]) *
               stride_[i];
    }
    return static_cast<Element>(out);
}

namespace {

std::vector<Element> members(const ExplicitGroup& g, const ElementSet& s) {
    std::vector<Element> out;
    for (Element x = 0; x < g.order(); ++x) {
        if (s.contains(x)) out.push_back(x);
    }
    return out;
}

ElementSet join_with(const ExplicitGroup& g, const ElementSet& base,
                     const std::vector<Element>& base_members, Element x) {
    ElementSet result = base;
    for (Element cur = x; !base.contains(cur); cur = g.add(cur, x)) {
        for (Element s : base_members) result.insert(g.add(s, cur));
    }
    return result;
}

ElementSet trivial_subgroup(const ExplicitGroup& g) {
    ElementSet s(g.order());
    s.insert(g.zero());
    return s;
}

} // namespace

ElementSet join(const ExplicitGroup& g, const ElementSet& base, Element x) {
    return join_with(g, base, members(g, base), x);
}

Partition subgroup_type(const ExplicitGroup& g, const ElementSet& subgroup) {
    // |S[p^j]| = p^{λ'_1 + ... + λ'_j}
    std::vector<std::size_t> by_exp;
    for (Element x = 0; x < g.order(); ++x) {
        if (!subgroup.contains(x)) continue;
        const auto e = static_cast<std::size_t>(g.order_exponent(x));
        if (by_exp.size() <= e) by_exp.resize(e + 1, 0);
        ++by_exp[e];
    }
    std::vector<int> conj;
    std::size_t below = by_exp.empty() ? 0 : by_exp[0];
    for (std::size_t j = 1; j < by_exp.size(); ++j) {
        const std::size_t with = below + by_exp[j];
        int r = 0;
        for (std::size_t ratio = with / below; ratio > 1; ratio /= g.prime().value()) ++r;
        conj.push_back(r);
        below = with;
    }
    return Partition(std::move(conj)).conjugate();
}

HomEnumeration enumerate_homs(const ExplicitGroup& a, const ExplicitGroup& b, bool list,
                              const Budget& budget) {
    std::vector<std::vector<Element>> allowed;
    for (int part : a.type().parts()) {
        std::vector<Element> images;
        for (Element y = 0; y < b.order(); ++y) {
            if (b.order_exponent(y) <= part) images.push_back(y);
        }
        allowed.push_back(std::move(images));
    }
    HomEnumeration result;
    result.count = 1;
    for (const auto& images : allowed) result.count *= images.size();
    if (!list) return result;

    if (result.count > budget.max_work) {
        throw BudgetExceeded("homomorphism list of size " + result.count.str() +
                             " exceeds the enumeration budget");
    }
    std::vector<std::vector<Element>> maps;
    std::vector<Element> current(allowed.size());
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == allowed.size()) {
            maps.push_back(current);
            return;
        }
        for (Element y : allowed[i]) {
            current[i] = y;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    result.maps = std::move(maps);
    return result;
}

struct SurjectionCounter::Impl {
    struct Key {
        int suffix;
        ElementSet set;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return ElementSetHash{}(k.set) * 31 + static_cast<std::size_t>(k.suffix);
        }
    };

    const ExplicitGroup& target;
    Budget budget;
    std::size_t work = 0;
    std::vector<std::vector<Element>> allowed_by_exp;
    std::map<std::vector<int>, int> suffix_ids;
    std::unordered_map<Key, BigInt, KeyHash> memo;
    ElementSet full;

    Impl(const ExplicitGroup& t, const Budget& b) : target(t), budget(b), full(t.order()) {
        const int top = t.type().largest();
        allowed_by_exp.resize(static_cast<std::size_t>(top) + 1);
        for (Element y = 0; y < t.order(); ++y) {
            full.insert(y);
            for (int e = t.order_exponent(y); e <= top; ++e) {
                allowed_by_exp[static_cast<std::size_t>(e)].push_back(y);
            }
        }
    }

    int suffix_id(const std::vector<int>& exps, std::size_t from) {
        std::vector<int> suffix(exps.begin() + static_cast<std::ptrdiff_t>(from), exps.end());
        auto [it, inserted] = suffix_ids.emplace(std::move(suffix), static_cast<int>(suffix_ids.size()));
        return it->second;
    }

    // Per-call state: suffix ids and Σ_{j>=i} exps[j].
    std::vector<int> ids;
    std::vector<int> remaining_exp;
    int target_exp = 0;

    void prepare(const std::vector<int>& exps) {
        ids.assign(exps.size() + 1, 0);
        remaining_exp.assign(exps.size() + 1, 0);
        for (std::size_t i = exps.size() + 1; i-- > 0;) {
            ids[i] = suffix_id(exps, i);
            if (i < exps.size()) remaining_exp[i] = remaining_exp[i + 1] + exps[i];
        }
        target_exp = target.type().size();
    }

    int log_size(std::size_t size) const {
        int k = 0;
        for (; size > 1; size /= target.prime().value()) ++k;
        return k;
    }

    BigInt count(const std::vector<int>& exps, std::size_t i, const ElementSet& s) {
        if (i == exps.size()) return s == full ? 1 : 0;

        // |<S, g_i, ..., g_k>| <= |S| · ∏ ord(g_j)
        if (log_size(s.count()) + remaining_exp[i] < target_exp) return 0;

        Key key{ids[i], s};
        if (auto it = memo.find(key); it != memo.end()) return it->second;

        const auto base = members(target, s);
        const auto& allowed = allowed_by_exp[static_cast<std::size_t>(exps[i])];
        ElementSet covered = s;
        BigInt total = 0;
        std::size_t in_base = 0;
        for (Element g : allowed) {
            if (s.contains(g)) {
                ++in_base;
                continue;
            }
            if (covered.contains(g)) continue;
            if (++work > budget.max_work) {
                throw BudgetExceeded("surjection enumeration exceeded the work budget");
            }
            // The join depends only on the coset S + g.
            std::size_t in_coset = 0;
            for (Element b : base) {
                const Element y = target.add(b, g);
                covered.insert(y);
                if (target.order_exponent(y) <= exps[i]) ++in_coset;
            }
            total += BigInt(in_coset) * count(exps, i + 1, join_with(target, s, base, g));
        }
        if (in_base > 0) total += BigInt(in_base) * count(exps, i + 1, s);
        memo.emplace(std::move(key), total);
        return total;
    }
};

SurjectionCounter::SurjectionCounter(const ExplicitGroup& target, const Budget& budget)
    : impl_(std::make_unique<Impl>(target, budget)) {}
SurjectionCounter::~SurjectionCounter() = default;
SurjectionCounter::SurjectionCounter(SurjectionCounter&&) noexcept = default;
SurjectionCounter& SurjectionCounter::operator=(SurjectionCounter&&) noexcept = default;

BigInt SurjectionCounter::count(const std::vector<int>& generator_exponents) {
    const int top = impl_->target.type().largest();
    std::vector<int> exps;
    for (int e : generator_exponents) exps.push_back(std::min(e, top));
    std::sort(exps.begin(), exps.end(), std::greater<>());
    impl_->work = 0;
    impl_->prepare(exps);
    return impl_->count(exps, 0, trivial_subgroup(impl_->target));
}

BigInt enumerate_surjections(const ExplicitGroup& a, const ExplicitGroup& b,
                             const Budget& budget) {
    SurjectionCounter counter(b, budget);
    return counter.count_from(a.type());
}

BigInt enumerate_automorphisms(const ExplicitGroup& a, const Budget& budget) {
    return enumerate_surjections(a, a, budget);
}

std::vector<std::pair<Partition, BigInt>> enumerate_subgroups(const ExplicitGroup& a,
                                                              const Budget& budget) {
    // Every subgroup is reached from the trivial one by a chain of index-p
    // extensions, so it suffices to join with g whenever p·g already lies in S.
    std::unordered_set<ElementSet, ElementSetHash> seen;
    std::deque<ElementSet> queue;
    std::size_t work = 0;
    const auto p = a.prime().value();
    seen.insert(trivial_subgroup(a));
    queue.push_back(trivial_subgroup(a));
    while (!queue.empty()) {
        ElementSet s = std::move(queue.front());
        queue.pop_front();
        const auto base = members(a, s);
        ElementSet covered = s;
        for (Element g = 0; g < a.order(); ++g) {
            if (covered.contains(g) || !s.contains(a.scale(g, p))) continue;
            if (++work > budget.max_work) {
                throw BudgetExceeded("subgroup enumeration exceeded the work budget");
            }
            ElementSet t = join_with(a, s, base, g);
            // Any element of T \ S generates T over S.
            covered.merge(t);
            if (seen.insert(t).second) queue.push_back(std::move(t));
        }
    }
    std::map<Partition, BigInt> by_type;
    for (const auto& s : seen) by_type[subgroup_type(a, s)] += 1;
    return {by_type.begin(), by_type.end()};
}

} // namespace coker::oracle
