#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "coker/partition.hpp"
#include "coker/prime.hpp"

namespace coker {

using Residue = std::uint64_t;
using ResidueMatrix = Eigen::Matrix<Residue, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Arithmetic in Z/p^e with p^e < 2^63.
class Modulus {
public:
    Modulus(Prime p, int e);

    Prime prime() const { return p_; }
    int precision() const { return e_; }
    Residue value() const { return q_; }
    /// p^k for 0 <= k <= e.
    Residue power(int k) const { return powers_[static_cast<std::size_t>(k)]; }

    Residue add(Residue a, Residue b) const { return a >= q_ - b ? a - (q_ - b) : a + b; }
    Residue sub(Residue a, Residue b) const { return a >= b ? a - b : a + (q_ - b); }
    Residue mul(Residue a, Residue b) const {
        if (small_) return a * b % q_;
        return static_cast<Residue>(static_cast<unsigned __int128>(a) * b % q_);
    }
    /// Inverse of a unit (a value coprime to p).
    Residue inverse(Residue unit) const;
    Residue reduce(long long x) const;

private:
    Prime p_;
    int e_;
    Residue q_;
    bool small_;
    std::vector<Residue> powers_;
};

/// ord_p(x) for 0 <= x < p^e, with the finite-precision convention valuation(0) = e.
int valuation(Residue x, Prime p, int e);

/// An (n+u) × n matrix over Z/p^e, the finite-precision image of a Z_p matrix.
class MatrixModPE {
public:
    MatrixModPE(Prime p, int e, Eigen::Index rows, Eigen::Index cols);
    /// Entries are taken modulo p^e.
    MatrixModPE(Prime p, int e, ResidueMatrix entries);

    template <typename Derived>
    static MatrixModPE from_integers(Prime p, int e, const Eigen::MatrixBase<Derived>& m) {
        MatrixModPE out(p, e, m.rows(), m.cols());
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                out.entries_(i, j) = out.modulus_.reduce(static_cast<long long>(m(i, j)));
            }
        }
        return out;
    }

    const Modulus& modulus() const { return modulus_; }
    Prime prime() const { return modulus_.prime(); }
    int precision() const { return modulus_.precision(); }
    Eigen::Index rows() const { return entries_.rows(); }
    Eigen::Index cols() const { return entries_.cols(); }
    const ResidueMatrix& entries() const { return entries_; }
    Residue operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

    friend bool operator==(const MatrixModPE& a, const MatrixModPE& b) {
        return a.prime() == b.prime() && a.precision() == b.precision() &&
               a.entries_.rows() == b.entries_.rows() && a.entries_.cols() == b.entries_.cols() &&
               a.entries_ == b.entries_;
    }

private:
    void check_shape() const;

    Modulus modulus_;
    ResidueMatrix entries_;
};

struct SmithForm {
    /// Nondecreasing diagonal valuations d_1 <= ... <= d_n, each in [0, e].
    std::vector<int> valuations;
    /// When requested: U (rows × rows) and V (cols × cols), invertible mod p^e,
    /// with U·M·V = diag(p^{d_i}) mod p^e.
    std::optional<ResidueMatrix> row_transform;
    std::optional<ResidueMatrix> col_transform;
};

/// Smith form by minimal-valuation pivoting. Ties go to the first entry in
/// row-major order.
SmithForm smith_normal_form(const MatrixModPE& m, bool with_transforms = false);

/// One sampled cokernel: Z_p^u ⊕ G_torsion, as seen at precision e.
struct CokernelObservation {
    Partition torsion;
    int free_rank = 0;
    /// Some diagonal valuation reached e, so the true valuation is undetermined.
    bool saturated = false;

    friend bool operator==(const CokernelObservation&, const CokernelObservation&) = default;
};

CokernelObservation observe_cokernel(const MatrixModPE& m);

/// a·b mod p^e for residue matrices.
ResidueMatrix multiply_mod(const ResidueMatrix& a, const ResidueMatrix& b, const Modulus& mod);

} // namespace coker
