#include "coker/partition.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace coker {

Partition::Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] <= 0) throw std::invalid_argument("partition parts must be positive");
        if (i > 0 && parts_[i] > parts_[i - 1]) {
            throw std::invalid_argument("partition parts must be nonincreasing");
        }
    }
    size_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

Partition Partition::conjugate() const {
    std::vector<int> result(static_cast<std::size_t>(largest()), 0);
    for (int part : parts_) {
        for (int j = 0; j < part; ++j) ++result[static_cast<std::size_t>(j)];
    }
    return Partition(std::move(result));
}

std::vector<int> Partition::multiplicities() const {
    std::vector<int> m(static_cast<std::size_t>(largest()) + 1, 0);
    for (int part : parts_) ++m[static_cast<std::size_t>(part)];
    return m;
}

std::string Partition::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(parts_[i]);
    }
    return out;
}

std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    // Reverse lexicographic within a grade: larger leading parts first.
    return std::lexicographical_compare_three_way(b.parts_.begin(), b.parts_.end(),
                                                  a.parts_.begin(), a.parts_.end());
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

} // namespace

Partition parse_partition(std::string_view text) {
    text = trim(text);
    if (text.empty() || text == "trivial" || text == "()") return {};
    std::vector<int> parts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view token = trim(text.substr(pos, end - pos));
        int value = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc() || ptr != token.data() + token.size() || value <= 0) {
            throw std::invalid_argument("malformed partition '" + std::string(text) + "'");
        }
        parts.push_back(value);
        pos = end + 1;
    }
    std::sort(parts.begin(), parts.end(), std::greater<>());
    return Partition(std::move(parts));
}

bool is_subtype(const Partition& lambda, const Partition& mu) {
    if (lambda.length() > mu.length()) return false;
    for (int i = 0; i < lambda.length(); ++i) {
        if (lambda[static_cast<std::size_t>(i)] > mu[static_cast<std::size_t>(i)]) return false;
    }
    return true;
}

namespace {

void partitions_rec(int remaining, int max_part, std::vector<int>& prefix,
                    std::vector<Partition>& out) {
    if (remaining == 0) {
        out.emplace_back(prefix);
        return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        prefix.push_back(part);
        partitions_rec(remaining - part, part, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

std::vector<Partition> partitions_of(int n) {
    if (n < 0) throw std::invalid_argument("partition size must be nonnegative");
    std::vector<Partition> out;
    std::vector<int> prefix;
    partitions_rec(n, n, prefix, out);
    return out;
}

std::vector<Partition> enumerate_partitions(int max_size) {
    if (max_size < 0) throw std::invalid_argument("max_size must be nonnegative");
    std::vector<Partition> out;
    for (int n = 0; n <= max_size; ++n) {
        auto level = partitions_of(n);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

std::vector<Partition> subtypes_of(const Partition& mu) {
    std::vector<Partition> out;
    // Each ν ⊆ μ is a choice ν_i <= μ_i, nonincreasing.
    std::vector<int> prefix;
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int cap) {
        out.emplace_back(prefix);
        if (i >= static_cast<std::size_t>(mu.length())) return;
        for (int v = std::min(cap, mu[i]); v >= 1; --v) {
            prefix.push_back(v);
            rec(i + 1, v);
            prefix.pop_back();
        }
    };
    rec(0, mu.largest());
    std::sort(out.begin(), out.end());
    return out;
}

Partition direct_sum(const Partition& a, const Partition& b) {
    std::vector<int> parts = a.parts();
    parts.insert(parts.end(), b.parts().begin(), b.parts().end());
    std::sort(parts.begin(), parts.end(), std::greater<>());
    return Partition(std::move(parts));
}

} // namespace coker
