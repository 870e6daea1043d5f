#pragma once

#include <cstdlib>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace coker {

/// Invariant factors d_1 | d_2 | ... of an integer matrix by classical gcd
/// elimination. Zero factors (rank deficiency) come last; the result has
/// min(rows, cols) entries, all nonnegative.
///
/// Intended for small test instances. Scalar must be an exact signed integer
/// type; entry growth is unchecked for fixed-width types.
template <typename Scalar>
std::vector<Scalar> integer_snf_oracle(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a) {
    using std::abs;
    const Eigen::Index rows = a.rows();
    const Eigen::Index cols = a.cols();
    const Eigen::Index diag = std::min(rows, cols);
    std::vector<Scalar> factors;

    auto move_min_to = [&](Eigen::Index t) {
        Eigen::Index bi = -1, bj = -1;
        for (Eigen::Index i = t; i < rows; ++i) {
            for (Eigen::Index j = t; j < cols; ++j) {
                if (a(i, j) != 0 && (bi < 0 || abs(a(i, j)) < abs(a(bi, bj)))) {
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi < 0) return false;
        a.row(t).swap(a.row(bi));
        a.col(t).swap(a.col(bj));
        return true;
    };

    Eigen::Index t = 0;
    for (; t < diag; ++t) {
        if (!move_min_to(t)) break;
        for (;;) {
            bool clean = true;
            for (Eigen::Index i = t + 1; i < rows; ++i) {
                Scalar q = a(i, t) / a(t, t);
                if (q != 0) a.row(i) -= q * a.row(t);
                if (a(i, t) != 0) clean = false;
            }
            for (Eigen::Index j = t + 1; j < cols; ++j) {
                Scalar q = a(t, j) / a(t, t);
                if (q != 0) a.col(j) -= q * a.col(t);
                if (a(t, j) != 0) clean = false;
            }
            if (!clean) {
                // A smaller remainder exists in row or column t; make it the pivot.
                Eigen::Index bi = t, bj = t;
                for (Eigen::Index i = t + 1; i < rows; ++i) {
                    if (a(i, t) != 0 && abs(a(i, t)) < abs(a(bi, bj))) { bi = i; bj = t; }
                }
                for (Eigen::Index j = t + 1; j < cols; ++j) {
                    if (a(t, j) != 0 && abs(a(t, j)) < abs(a(bi, bj))) { bi = t; bj = j; }
                }
                a.row(t).swap(a.row(bi));
                a.col(t).swap(a.col(bj));
                continue;
            }
            // Pivot must divide the rest of the working block.
            Eigen::Index bad = -1;
            for (Eigen::Index i = t + 1; i < rows && bad < 0; ++i) {
                for (Eigen::Index j = t + 1; j < cols; ++j) {
                    if (a(i, j) % a(t, t) != 0) { bad = i; break; }
                }
            }
            if (bad < 0) break;
            a.row(t) += a.row(bad);
        }
        factors.push_back(abs(a(t, t)));
    }
    factors.resize(static_cast<std::size_t>(diag), Scalar(0));
    return factors;
}

} // namespace coker
