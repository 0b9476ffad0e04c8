#pragma once

// Solver for a tridiagonal matrix whose first and last rows carry extra dense
// entries. Thomas elimination on the tridiagonal part plus a rank-2 Woodbury
// correction for the two dense rows, O(n) per solve after factorization.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pnpk/error.hpp"

namespace pnpk {

template <class T>
struct BorderedSystem {
    // Row i of the tridiagonal part is lower[i]*u[i-1] + diag[i]*u[i] + upper[i]*u[i+1].
    std::vector<T> lower, diag, upper;
    // Dense additions to rows 0 and n-1.
    std::vector<T> first_extra, last_extra;

    explicit BorderedSystem(std::size_t n = 0)
        : lower(n), diag(n), upper(n), first_extra(n), last_extra(n) {}

    std::size_t size() const { return diag.size(); }

    /// y = M u
    std::vector<T> apply(const std::vector<T>& u) const {
        const std::size_t n = size();
        std::vector<T> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            T acc = diag[i] * u[i];
            if (i > 0) acc += lower[i] * u[i - 1];
            if (i + 1 < n) acc += upper[i] * u[i + 1];
            y[i] = acc;
        }
        T a0{}, a1{};
        for (std::size_t j = 0; j < n; ++j) {
            a0 += first_extra[j] * u[j];
            a1 += last_extra[j] * u[j];
        }
        y[0] += a0;
        y[n - 1] += a1;
        return y;
    }
};

template <class T>
class BorderedSolver {
public:
    /// `corner_shift` is moved from the dense rows into the tridiagonal corners
    /// before elimination, which keeps the Thomas pass away from the spectrum of
    /// the plain tridiagonal part (the full matrix is unchanged).
    explicit BorderedSolver(const BorderedSystem<T>& sys, T corner_shift = T{}) : n_(sys.size()) {
        if (n_ < 3) throw Error(ErrorCode::InvalidArgument, "bordered system needs at least 3 rows");
        lower_ = sys.lower;
        diag_ = sys.diag;
        upper_ = sys.upper;
        r0_ = sys.first_extra;
        rn_ = sys.last_extra;
        diag_[0] += corner_shift;
        diag_[n_ - 1] += corner_shift;
        r0_[0] -= corner_shift;
        rn_[n_ - 1] -= corner_shift;
        factor_tridiagonal();

        std::vector<T> e(n_, T{});
        e[0] = T(1);
        z0_ = tri_solve(e);
        e[0] = T{};
        e[n_ - 1] = T(1);
        zn_ = tri_solve(e);

        c00_ = T(1) + dot(r0_, z0_);
        c01_ = dot(r0_, zn_);
        c10_ = dot(rn_, z0_);
        c11_ = T(1) + dot(rn_, zn_);
        det_ = c00_ * c11_ - c01_ * c10_;
        const double scale = std::abs(c00_ * c11_) + std::abs(c01_ * c10_);
        if (!(std::abs(det_) > 1e-13 * scale)) {
            throw Error(ErrorCode::SingularDiscreteSystem, "capacitance matrix of bordered system is singular");
        }
    }

    std::vector<T> solve(const std::vector<T>& rhs) const {
        std::vector<T> y = tri_solve(rhs);
        const T g0 = dot(r0_, y);
        const T gn = dot(rn_, y);
        const T w0 = (c11_ * g0 - c01_ * gn) / det_;
        const T wn = (-c10_ * g0 + c00_ * gn) / det_;
        for (std::size_t i = 0; i < n_; ++i) y[i] -= z0_[i] * w0 + zn_[i] * wn;
        return y;
    }

    std::size_t size() const { return n_; }

private:
    static T dot(const std::vector<T>& a, const std::vector<T>& b) {
        T acc{};
        for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
        return acc;
    }

    void factor_tridiagonal() {
        double scale = 0.0;
        for (const auto& d : diag_) scale = std::max(scale, std::abs(d));
        cp_.assign(n_, T{});
        inv_.assign(n_, T{});
        T denom = diag_[0];
        for (std::size_t i = 0; i < n_; ++i) {
            if (i > 0) denom = diag_[i] - lower_[i] * cp_[i - 1];
            if (!(std::abs(denom) > 1e-14 * scale)) {
                throw Error(ErrorCode::SingularDiscreteSystem,
                            "zero pivot at row " + std::to_string(i) + " of tridiagonal part");
            }
            inv_[i] = T(1) / denom;
            if (i + 1 < n_) cp_[i] = upper_[i] * inv_[i];
        }
    }

    std::vector<T> tri_solve(const std::vector<T>& rhs) const {
        std::vector<T> x(n_);
        x[0] = rhs[0] * inv_[0];
        for (std::size_t i = 1; i < n_; ++i) x[i] = (rhs[i] - lower_[i] * x[i - 1]) * inv_[i];
        for (std::size_t i = n_ - 1; i-- > 0;) x[i] -= cp_[i] * x[i + 1];
        return x;
    }

    std::size_t n_;
    std::vector<T> lower_, diag_, upper_, r0_, rn_;
    std::vector<T> cp_, inv_;
    std::vector<T> z0_, zn_;
    T c00_{}, c01_{}, c10_{}, c11_{}, det_{};
};

}  // namespace pnpk
