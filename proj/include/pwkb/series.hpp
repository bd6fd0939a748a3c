#pragma once
// Formal series in eta^{-1} over the algebraic scalar field, and transseries
// graded by instanton sectors.
//
// An EtaSeries represents sum_{j >= lo} a_j eta^{-j} with coefficients known
// exactly for j <= hi (hi == kExact means the stored terms are the whole
// series).  Every operation propagates the largest exponent through which the
// result is exact, so residual checks can assert "identically zero through
// order N" honestly.
//
// A Transseries is sum_k T_k where sector k implicitly carries the factor
// (alpha eta^{-1/2})^k e^{k eta phi}; d/dt therefore acts on sector k as
// d/dt + k eta w (phi' = sqrt(Delta) = w).

#include "pwkb/algebra.hpp"

#include <climits>
#include <functional>
#include <vector>

namespace pwkb {

class EtaSeries {
public:
    static constexpr int kExact = INT_MAX / 2;

    EtaSeries() = default;
    explicit EtaSeries(ContextPtr ctx) : ctx_(std::move(ctx)) {}
    /// Single term a * eta^{-j}, exact.
    EtaSeries(const AlgebraicScalar& a, int j);

    const ContextPtr& ctx() const { return ctx_; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }
    bool is_entire() const { return hi_ == kExact; }
    /// Lowest stored nonzero exponent; hi+1 when no nonzero term is stored.
    int eff_lo() const;
    int stored_hi() const { return lo_ + (int)c_.size() - 1; }

    AlgebraicScalar coef(int j) const; // exact coefficient; throws beyond hi
    void set_coef(int j, const AlgebraicScalar& a);
    bool is_zero() const { return c_.empty(); }

    EtaSeries operator-() const;
    friend EtaSeries operator+(const EtaSeries& a, const EtaSeries& b);
    friend EtaSeries operator-(const EtaSeries& a, const EtaSeries& b);
    friend EtaSeries operator*(const EtaSeries& a, const EtaSeries& b);
    EtaSeries& operator+=(const EtaSeries& o) { return *this = *this + o; }
    EtaSeries& operator-=(const EtaSeries& o) { return *this = *this - o; }
    EtaSeries& operator*=(const EtaSeries& o) { return *this = *this * o; }

    EtaSeries scaled(const AlgebraicScalar& a) const;
    EtaSeries scaled(const Rational& r) const;
    /// Multiply by eta^{-k} (k may be negative).
    EtaSeries shifted(int k) const;
    EtaSeries truncated(int new_hi) const;

    /// Coefficient-wise d/dt (the sector factor is handled by Transseries).
    EtaSeries derivative_t() const;
    EtaSeries map(const std::function<AlgebraicScalar(const AlgebraicScalar&)>& f) const;

    /// Multiplicative inverse.  target_hi is required when the input is
    /// entire (the inverse is generally an infinite series).
    EtaSeries inverted(int target_hi = kExact) const;
    /// (1 + X)^alpha for this = 1 + X with eff_lo(X) >= 1.
    EtaSeries pow_binomial(const Rational& alpha, int target_hi = kExact) const;
    /// exp of a series with eff_lo >= 1.
    EtaSeries exponential(int target_hi = kExact) const;

    void check_same_ctx(const EtaSeries& o) const;

private:
    void trim();
    ContextPtr ctx_;
    int lo_ = 0;
    int hi_ = kExact;
    std::vector<AlgebraicScalar> c_; // c_[j - lo_]
};

class Transseries {
public:
    Transseries() = default;
    /// Zero transseries: sectors 0..K stored, sectors beyond exactly zero
    /// unless all_sectors is cleared later by arithmetic.
    Transseries(ContextPtr ctx, int K);
    static Transseries from_sector(ContextPtr ctx, int k, EtaSeries series);

    const ContextPtr& ctx() const { return ctx_; }
    int max_sector() const { return (int)sec_.size() - 1; }
    bool all_sectors_known() const { return all_sectors_; }
    /// Declare whether sectors beyond the stored range are exactly zero.
    void set_all_sectors_known(bool v) { all_sectors_ = v; }
    int min_sector() const; // lowest nonzero stored sector; max+1 if none

    EtaSeries sector(int k) const; // exact zero beyond stored range when all sectors known
    EtaSeries& sector_mut(int k);
    void set_sector(int k, EtaSeries s);
    bool is_zero() const;

    Transseries operator-() const;
    friend Transseries operator+(const Transseries& a, const Transseries& b);
    friend Transseries operator-(const Transseries& a, const Transseries& b);
    friend Transseries operator*(const Transseries& a, const Transseries& b);
    Transseries& operator+=(const Transseries& o) { return *this = *this + o; }
    Transseries& operator-=(const Transseries& o) { return *this = *this - o; }
    Transseries& operator*=(const Transseries& o) { return *this = *this * o; }

    Transseries scaled(const AlgebraicScalar& a) const;
    Transseries shifted(int k) const; // eta^{-k} *
    Transseries truncated_sectors(int K) const;

    /// d/dt including the instanton factor: sector k gains + k eta w T_k.
    Transseries derivative_t() const;

    /// Inverse (sector 0 must be invertible).
    Transseries inverted(int sector0_target_hi = EtaSeries::kExact) const;

private:
    ContextPtr ctx_;
    std::vector<EtaSeries> sec_;
    bool all_sectors_ = true;
};

} // namespace pwkb
