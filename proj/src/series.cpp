#include "pwkb/series.hpp"

#include <algorithm>
#include <stdexcept>

namespace pwkb {

namespace {
int sat_add(int a, int b) {
    if (a >= EtaSeries::kExact || b >= EtaSeries::kExact) return EtaSeries::kExact;
    long s = (long)a + (long)b;
    return s >= EtaSeries::kExact ? EtaSeries::kExact : (int)s;
}
} // namespace

EtaSeries::EtaSeries(const AlgebraicScalar& a, int j) : ctx_(a.ctx()), lo_(j) {
    if (!ctx_) throw std::invalid_argument("EtaSeries from scalar without context");
    if (!a.is_zero()) c_.push_back(a);
}

void EtaSeries::trim() {
    while (!c_.empty() && c_.front().is_zero()) {
        c_.erase(c_.begin());
        ++lo_;
    }
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

int EtaSeries::eff_lo() const {
    if (!c_.empty()) return lo_;
    return sat_add(hi_, 1);
}

AlgebraicScalar EtaSeries::coef(int j) const {
    if (j > hi_) throw std::out_of_range("EtaSeries::coef beyond exactness horizon");
    if (j < lo_ || j > stored_hi()) return ctx_ ? ctx_->zero() : AlgebraicScalar();
    return c_[j - lo_];
}

void EtaSeries::set_coef(int j, const AlgebraicScalar& a) {
    if (!ctx_) ctx_ = a.ctx();
    if (c_.empty()) {
        lo_ = j;
        c_.assign(1, a);
    } else if (j < lo_) {
        c_.insert(c_.begin(), lo_ - j, ctx_->zero());
        lo_ = j;
        c_[0] = a;
    } else {
        if (j > stored_hi()) c_.resize(j - lo_ + 1, ctx_->zero());
        c_[j - lo_] = a;
    }
    trim();
}

EtaSeries EtaSeries::operator-() const {
    EtaSeries r = *this;
    for (auto& a : r.c_) a = -a;
    return r;
}

void EtaSeries::check_same_ctx(const EtaSeries& o) const {
    if (ctx_ && o.ctx_ && ctx_ != o.ctx_)
        throw std::invalid_argument("mixing series from different contexts");
}

EtaSeries operator+(const EtaSeries& a, const EtaSeries& b) {
    a.check_same_ctx(b);
    EtaSeries r(a.ctx_ ? a.ctx_ : b.ctx_);
    r.hi_ = std::min(a.hi_, b.hi_);
    int lo = std::min(a.c_.empty() ? b.lo_ : a.lo_, b.c_.empty() ? a.lo_ : b.lo_);
    int hi = std::min(std::max(a.stored_hi(), b.stored_hi()), r.hi_);
    if (!r.ctx_) return r;
    for (int j = lo; j <= hi; ++j) {
        AlgebraicScalar v = (j <= a.hi_ ? a.coef(j) : r.ctx_->zero()) +
                            (j <= b.hi_ ? b.coef(j) : r.ctx_->zero());
        if (!v.is_zero()) r.set_coef(j, v);
    }
    return r;
}

EtaSeries operator-(const EtaSeries& a, const EtaSeries& b) { return a + (-b); }

EtaSeries operator*(const EtaSeries& a, const EtaSeries& b) {
    a.check_same_ctx(b);
    EtaSeries r(a.ctx_ ? a.ctx_ : b.ctx_);
    r.hi_ = std::min(sat_add(a.hi_, b.eff_lo()), sat_add(b.hi_, a.eff_lo()));
    if (a.c_.empty() || b.c_.empty() || !r.ctx_) return r;
    int lo = a.lo_ + b.lo_;
    int hi = std::min(a.stored_hi() + b.stored_hi(), r.hi_);
    for (int j = lo; j <= hi; ++j) {
        int i0 = std::max(a.lo_, j - b.stored_hi());
        int i1 = std::min(a.stored_hi(), j - b.lo_);
        std::vector<AlgebraicScalar> prods;
        prods.reserve(i1 - i0 + 1);
        for (int i = i0; i <= i1; ++i) prods.push_back(a.c_[i - a.lo_] * b.c_[j - i - b.lo_]);
        AlgebraicScalar acc = sum_scalars(prods);
        if (!acc.is_zero()) r.set_coef(j, acc);
    }
    return r;
}

EtaSeries EtaSeries::scaled(const AlgebraicScalar& a) const {
    EtaSeries r(ctx_);
    r.lo_ = lo_;
    r.hi_ = hi_;
    if (a.is_zero()) {
        // exact annihilation of all known orders; the unknown tail stays unknown
        return r;
    }
    for (auto& v : c_) r.c_.push_back(v * a);
    r.trim();
    return r;
}

EtaSeries EtaSeries::scaled(const Rational& r_) const {
    EtaSeries r = *this;
    if (r_ == 0) {
        r.c_.clear();
        return r;
    }
    for (auto& v : r.c_) v = v.scaled(r_);
    return r;
}

EtaSeries EtaSeries::shifted(int k) const {
    EtaSeries r = *this;
    r.lo_ += k;
    r.hi_ = sat_add(r.hi_, k);
    return r;
}

EtaSeries EtaSeries::truncated(int new_hi) const {
    EtaSeries r = *this;
    r.hi_ = std::min(r.hi_, new_hi);
    if (!r.c_.empty() && r.stored_hi() > r.hi_)
        r.c_.resize(std::max(0, r.hi_ - r.lo_ + 1));
    r.trim();
    return r;
}

EtaSeries EtaSeries::derivative_t() const {
    EtaSeries r(ctx_);
    r.lo_ = lo_;
    r.hi_ = hi_;
    for (auto& v : c_) r.c_.push_back(v.differentiate(VAR_T));
    r.trim();
    return r;
}

EtaSeries EtaSeries::map(const std::function<AlgebraicScalar(const AlgebraicScalar&)>& f) const {
    EtaSeries r(ctx_);
    r.lo_ = lo_;
    r.hi_ = hi_;
    for (auto& v : c_) r.c_.push_back(f(v));
    r.trim();
    return r;
}

EtaSeries EtaSeries::inverted(int target_hi) const {
    if (c_.empty()) throw std::domain_error("inversion of zero series");
    AlgebraicScalar L = c_.front();
    int l = lo_;
    AlgebraicScalar Linv = L.invert();
    // X = series/L * eta^{+l} - 1, eff_lo >= 1
    EtaSeries X = scaled(Linv).shifted(-l) - EtaSeries(ctx_->integer(1), 0);
    int xhi = X.hi_;
    if (X.c_.empty() && X.is_entire()) return EtaSeries(Linv, -l);
    int order = std::min(xhi, target_hi == kExact ? xhi : target_hi);
    if (order >= kExact)
        throw std::domain_error("inverting an entire series requires a target order");
    EtaSeries acc(ctx_->integer(1), 0);
    EtaSeries pw(ctx_->integer(1), 0);
    int x_eff = std::max(1, X.eff_lo());
    for (int m = 1; m * x_eff <= order; ++m) {
        pw = (pw * X).truncated(order);
        if (pw.c_.empty()) break;
        acc += (m % 2 ? -pw : pw);
    }
    acc = acc.truncated(order);
    EtaSeries r = acc.scaled(Linv).shifted(-l);
    r.hi_ = std::min(r.hi_, sat_add(order, -l));
    return r;
}

EtaSeries EtaSeries::pow_binomial(const Rational& alpha, int target_hi) const {
    EtaSeries X = *this - EtaSeries(ctx_->integer(1), 0);
    if (!X.c_.empty() && X.lo_ < 1)
        throw std::domain_error("pow_binomial requires 1 + (positive-order tail)");
    int order = std::min(X.hi_, target_hi);
    if (order >= kExact) {
        if (X.c_.empty()) return EtaSeries(ctx_->integer(1), 0);
        throw std::domain_error("binomial power of an entire series requires a target order");
    }
    EtaSeries acc(ctx_->integer(1), 0);
    EtaSeries pw(ctx_->integer(1), 0);
    int x_eff = std::max(1, X.eff_lo());
    for (int m = 1; m * x_eff <= order; ++m) {
        pw = (pw * X).truncated(order);
        if (pw.c_.empty()) break;
        acc += pw.scaled(rat_binomial_gen(alpha, m));
    }
    acc = acc.truncated(order);
    return acc;
}

EtaSeries EtaSeries::exponential(int target_hi) const {
    if (!c_.empty() && lo_ < 1)
        throw std::domain_error("exponential requires a series of positive order");
    int order = std::min(hi_, target_hi);
    if (order >= kExact) {
        if (c_.empty()) return EtaSeries(ctx_->integer(1), 0);
        throw std::domain_error("exponential of an entire series requires a target order");
    }
    EtaSeries acc(ctx_->integer(1), 0);
    EtaSeries pw(ctx_->integer(1), 0);
    int x_eff = std::max(1, eff_lo());
    Rational fact = 1;
    for (int m = 1; m * x_eff <= order; ++m) {
        pw = (pw * *this).truncated(order);
        fact /= Rational((long)m);
        if (pw.c_.empty()) break;
        acc += pw.scaled(fact);
    }
    acc = acc.truncated(order);
    return acc;
}

// ------------------------------------------------------------- Transseries

Transseries::Transseries(ContextPtr ctx, int K) : ctx_(std::move(ctx)) {
    if (K < 0) throw std::invalid_argument("negative sector count");
    sec_.assign(K + 1, EtaSeries(ctx_));
}

Transseries Transseries::from_sector(ContextPtr ctx, int k, EtaSeries series) {
    Transseries r(ctx, k);
    r.sec_[k] = std::move(series);
    return r;
}

int Transseries::min_sector() const {
    for (int k = 0; k < (int)sec_.size(); ++k)
        if (!sec_[k].is_zero()) return k;
    return (int)sec_.size();
}

EtaSeries Transseries::sector(int k) const {
    if (k < 0 || k >= (int)sec_.size()) {
        if (all_sectors_ && k >= 0) return EtaSeries(ctx_);
        throw std::out_of_range("Transseries sector beyond stored range");
    }
    return sec_[k];
}

EtaSeries& Transseries::sector_mut(int k) { return sec_.at(k); }

void Transseries::set_sector(int k, EtaSeries s) {
    if (k >= (int)sec_.size()) sec_.resize(k + 1, EtaSeries(ctx_));
    sec_[k] = std::move(s);
}

bool Transseries::is_zero() const {
    for (auto& s : sec_)
        if (!s.is_zero()) return false;
    return true;
}

Transseries Transseries::operator-() const {
    Transseries r = *this;
    for (auto& s : r.sec_) s = -s;
    return r;
}

Transseries operator+(const Transseries& a, const Transseries& b) {
    Transseries r(a.ctx_ ? a.ctx_ : b.ctx_, 0);
    int Ka = a.max_sector(), Kb = b.max_sector();
    int K;
    if (a.all_sectors_ && b.all_sectors_) {
        K = std::max(Ka, Kb);
        r.all_sectors_ = true;
    } else {
        K = std::min(a.all_sectors_ ? INT_MAX / 2 : Ka, b.all_sectors_ ? INT_MAX / 2 : Kb);
        r.all_sectors_ = false;
    }
    r.sec_.assign(K + 1, EtaSeries(r.ctx_));
    for (int k = 0; k <= K; ++k) {
        EtaSeries sa = k <= Ka ? a.sec_[k] : EtaSeries(r.ctx_);
        EtaSeries sb = k <= Kb ? b.sec_[k] : EtaSeries(r.ctx_);
        r.sec_[k] = sa + sb;
    }
    return r;
}

Transseries operator-(const Transseries& a, const Transseries& b) { return a + (-b); }

Transseries operator*(const Transseries& a, const Transseries& b) {
    Transseries r(a.ctx_ ? a.ctx_ : b.ctx_, 0);
    int Ka = a.max_sector(), Kb = b.max_sector();
    int inf = INT_MAX / 2;
    int limit_a = a.all_sectors_ ? inf : Ka + b.min_sector();
    int limit_b = b.all_sectors_ ? inf : Kb + a.min_sector();
    int K = std::min(limit_a, limit_b);
    r.all_sectors_ = a.all_sectors_ && b.all_sectors_;
    if (K >= inf) K = Ka + Kb; // both fully known
    K = std::min(K, Ka + Kb);
    r.sec_.assign(std::max(K, 0) + 1, EtaSeries(r.ctx_));
    for (int k = 0; k <= K; ++k) {
        EtaSeries acc(r.ctx_);
        for (int i = std::max(0, k - Kb); i <= std::min(k, Ka); ++i)
            acc += a.sec_[i] * b.sec_[k - i];
        r.sec_[k] = acc;
    }
    return r;
}

Transseries Transseries::scaled(const AlgebraicScalar& a) const {
    Transseries r = *this;
    for (auto& s : r.sec_) s = s.scaled(a);
    return r;
}

Transseries Transseries::shifted(int k) const {
    Transseries r = *this;
    for (auto& s : r.sec_) s = s.shifted(k);
    return r;
}

Transseries Transseries::truncated_sectors(int K) const {
    Transseries r = *this;
    if ((int)r.sec_.size() > K + 1) {
        r.sec_.resize(K + 1);
        r.all_sectors_ = false;
    }
    return r;
}

Transseries Transseries::derivative_t() const {
    Transseries r = *this;
    AlgebraicScalar w = ctx_->w();
    for (int k = 0; k < (int)sec_.size(); ++k) {
        EtaSeries d = sec_[k].derivative_t();
        if (k > 0) d += sec_[k].scaled(w.scaled(Rational((long)k))).shifted(-1);
        r.sec_[k] = d;
    }
    return r;
}

Transseries Transseries::inverted(int sector0_target_hi) const {
    if (sec_.empty() || sec_[0].is_zero())
        throw std::domain_error("Transseries inversion requires an invertible sector 0");
    EtaSeries inv0 = sec_[0].inverted(sector0_target_hi);
    Transseries i0 = Transseries::from_sector(ctx_, 0, inv0);
    i0.all_sectors_ = true;
    // rest = higher sectors; inverse = i0 * sum_m (-rest*i0)^m, graded by sector
    Transseries rest = *this;
    rest.sec_[0] = EtaSeries(ctx_);
    if (rest.is_zero() && all_sectors_) return i0;
    Transseries B = rest * i0; // min_sector >= 1
    int K = max_sector();
    Transseries acc(ctx_, K);
    acc.set_sector(0, EtaSeries(ctx_->integer(1), 0));
    Transseries pw = acc;
    for (int m = 1; m <= K; ++m) {
        pw = (pw * B).truncated_sectors(K);
        if (pw.is_zero()) break;
        acc += (m % 2 ? -pw : pw);
    }
    Transseries r = (acc * i0).truncated_sectors(K);
    r.all_sectors_ = all_sectors_;
    return r;
}

} // namespace pwkb
