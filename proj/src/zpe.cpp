#include "coker/zpe.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace coker {

Modulus::Modulus(Prime p, int e) : p_(p), e_(e), q_(1) {
    if (e < 1) throw std::invalid_argument("precision e must be at least 1");
    powers_.push_back(1);
    for (int i = 0; i < e; ++i) {
        if (q_ > ((std::uint64_t{1} << 63) - 1) / p.value()) {
            throw std::invalid_argument("p^e = " + std::to_string(p.value()) + "^" +
                                        std::to_string(e) + " does not fit below 2^63");
        }
        q_ *= p.value();
        powers_.push_back(q_);
    }
    small_ = q_ <= (std::uint64_t{1} << 32);
}

Residue Modulus::inverse(Residue unit) const {
    // Extended Euclid on (unit, q) in signed 128-bit.
    __int128 r0 = static_cast<__int128>(q_), r1 = static_cast<__int128>(unit % q_);
    __int128 t0 = 0, t1 = 1;
    while (r1 != 0) {
        const __int128 quot = r0 / r1;
        std::swap(r0, r1);
        r1 -= quot * r0;
        std::swap(t0, t1);
        t1 -= quot * t0;
    }
    if (r0 != 1) throw std::domain_error("value is not a unit modulo p^e");
    if (t0 < 0) t0 += static_cast<__int128>(q_);
    return static_cast<Residue>(t0);
}

Residue Modulus::reduce(long long x) const {
    const auto q = static_cast<long long>(q_);
    long long r = x % q;
    if (r < 0) r += q;
    return static_cast<Residue>(r);
}

int valuation(Residue x, Prime p, int e) {
    if (x == 0) return e;
    if (p.value() == 2) return std::min(e, std::countr_zero(x));
    int v = 0;
    while (v < e && x % p.value() == 0) {
        x /= p.value();
        ++v;
    }
    return v;
}

MatrixModPE::MatrixModPE(Prime p, int e, Eigen::Index rows, Eigen::Index cols)
    : modulus_(p, e), entries_(ResidueMatrix::Zero(rows, cols)) {
    check_shape();
}

MatrixModPE::MatrixModPE(Prime p, int e, ResidueMatrix entries)
    : modulus_(p, e), entries_(std::move(entries)) {
    check_shape();
    const Residue q = modulus_.value();
    entries_ = entries_.unaryExpr([q](Residue x) { return x % q; });
}

void MatrixModPE::check_shape() const {
    if (entries_.rows() < entries_.cols()) {
        throw std::invalid_argument("matrix must have at least as many rows as columns");
    }
}

SmithForm smith_normal_form(const MatrixModPE& m, bool with_transforms) {
    const Modulus& mod = m.modulus();
    const Prime p = m.prime();
    const int e = m.precision();
    const Eigen::Index rows = m.rows();
    const Eigen::Index cols = m.cols();

    ResidueMatrix a = m.entries();
    ResidueMatrix u, v;
    if (with_transforms) {
        u = ResidueMatrix::Identity(rows, rows);
        v = ResidueMatrix::Identity(cols, cols);
    }

    SmithForm out;
    out.valuations.reserve(static_cast<std::size_t>(cols));
    for (Eigen::Index k = 0; k < cols; ++k) {
        int best = e;
        Eigen::Index pi = k, pj = k;
        for (Eigen::Index i = k; i < rows && best > 0; ++i) {
            for (Eigen::Index j = k; j < cols; ++j) {
                const int val = valuation(a(i, j), p, e);
                if (val < best) {
                    best = val;
                    pi = i;
                    pj = j;
                    if (best == 0) break;
                }
            }
        }
        if (best == e) {
            // The working block is zero mod p^e.
            out.valuations.resize(static_cast<std::size_t>(cols), e);
            break;
        }
        if (pi != k) {
            a.row(k).swap(a.row(pi));
            if (with_transforms) u.row(k).swap(u.row(pi));
        }
        if (pj != k) {
            a.col(k).swap(a.col(pj));
            if (with_transforms) v.col(k).swap(v.col(pj));
        }

        // Scale row k so the pivot becomes exactly p^best.
        const Residue scale = mod.inverse(a(k, k) / mod.power(best));
        for (Eigen::Index j = k; j < cols; ++j) a(k, j) = mod.mul(a(k, j), scale);
        if (with_transforms) {
            for (Eigen::Index j = 0; j < rows; ++j) u(k, j) = mod.mul(u(k, j), scale);
        }

        const Residue pivot_power = mod.power(best);
        for (Eigen::Index i = k + 1; i < rows; ++i) {
            if (a(i, k) == 0) continue;
            const Residue f = a(i, k) / pivot_power;
            for (Eigen::Index j = k; j < cols; ++j) a(i, j) = mod.sub(a(i, j), mod.mul(f, a(k, j)));
            if (with_transforms) {
                for (Eigen::Index j = 0; j < rows; ++j) u(i, j) = mod.sub(u(i, j), mod.mul(f, u(k, j)));
            }
        }
        // Column k is now clear below the pivot, so column operations only touch row k.
        for (Eigen::Index j = k + 1; j < cols; ++j) {
            if (a(k, j) == 0) continue;
            const Residue f = a(k, j) / pivot_power;
            a(k, j) = 0;
            if (with_transforms) {
                for (Eigen::Index i = 0; i < cols; ++i) v(i, j) = mod.sub(v(i, j), mod.mul(f, v(i, k)));
            }
        }
        out.valuations.push_back(best);
    }
    if (with_transforms) {
        out.row_transform = std::move(u);
        out.col_transform = std::move(v);
    }
    return out;
}

CokernelObservation observe_cokernel(const MatrixModPE& m) {
    const auto snf = smith_normal_form(m);
    CokernelObservation obs;
    obs.free_rank = static_cast<int>(m.rows() - m.cols());
    std::vector<int> parts;
    for (int d : snf.valuations) {
        if (d > 0) parts.push_back(d);
        if (d == m.precision()) obs.saturated = true;
    }
    std::sort(parts.begin(), parts.end(), std::greater<>());
    obs.torsion = Partition(std::move(parts));
    return obs;
}

ResidueMatrix multiply_mod(const ResidueMatrix& a, const ResidueMatrix& b, const Modulus& mod) {
    if (a.cols() != b.rows()) throw std::invalid_argument("shape mismatch in multiply_mod");
    ResidueMatrix out = ResidueMatrix::Zero(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (Eigen::Index j = 0; j < b.cols(); ++j) {
                out(i, j) = mod.add(out(i, j), mod.mul(a(i, k), b(k, j)));
            }
        }
    }
    return out;
}

} // namespace coker
