#include "pwkb/algebra.hpp"

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pwkb {

namespace {

// Evaluate with an accompanying magnitude scale (sum of |term| values) so the
// caller can form a relative smallness test.
std::complex<double> eval_with_scale(const Poly& p, const std::vector<std::complex<double>>& vals,
                                     double& scale) {
    std::complex<double> acc = 0.0;
    scale = 0.0;
    for (auto& [e, c] : p.terms()) {
        std::complex<double> term = rat_to_double(c);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            std::complex<double> pw = 1.0, base = vals[i];
            int n = e[i];
            while (n) {
                if (n & 1) pw *= base;
                base *= base;
                n >>= 1;
            }
            term *= pw;
        }
        acc += term;
        scale += std::abs(term);
    }
    return acc;
}

} // namespace

// ---------------------------------------------------------------- Context

ContextPtr Context::make() {
    ContextPtr p(new Context());
    p->init();
    return p;
}

ContextPtr make_context() { return Context::make(); }

void Context::init() {
    auto third = [](long n) { return Rational(n, 3); };
    gens_.resize(7);
    gens_[VAR_T] = {"t", false, 0, {}, {}, third(-2)};
    gens_[VAR_C] = {"c", false, 0, {}, {}, Rational(-1)};
    gens_[VAR_X] = {"x", false, 0, {}, {}, third(-1)};

    Poly L = Poly::variable(VAR_LAM0);
    Poly W = Poly::variable(VAR_W);
    Poly Q = Poly::variable(VAR_Q);
    Poly S = Poly::variable(VAR_S);
    Poly T = Poly::variable(VAR_T);
    Poly C = Poly::variable(VAR_C);
    Poly X = Poly::variable(VAR_X);

    // lam0^3 = (-t lam0 - c)/2,  relation 2 lam0^3 + t lam0 + c = 0
    gens_[VAR_LAM0] = {"lam0", true, 3,
                       (T * L + C).scaled(Rational(-1, 2)),
                       L.pow(3).scaled(2) + T * L + C,
                       third(-1)};
    // w^2 = 6 lam0^2 + t = Delta
    Poly delta = L.pow(2).scaled(6) + T;
    gens_[VAR_W] = {"w", true, 2, delta, W.pow(2) - delta, third(-1)};
    // q^2 = w
    gens_[VAR_Q] = {"q", true, 2, W, Q.pow(2) - W, Rational(-1, 6)};
    // s^2 = x^2 + 2 lam0 x + 3 lam0^2 + t
    Poly qs = X.pow(2) + L * X * Poly::constant(2) + L.pow(2).scaled(3) + T;
    gens_[VAR_S] = {"s", true, 2, qs, S.pow(2) - qs, third(-1)};
}

PrimitiveSymbol Context::add_primitive(const std::string& name, const AlgebraicScalar& integrand,
                                       const std::string& basepoint, const Rational& weight) {
    int var = (int)gens_.size();
    GeneratorSpec g;
    g.name = name;
    g.weight = weight;
    g.is_primitive = true;
    g.basepoint = basepoint;
    gens_.push_back(std::move(g));
    prim_integrands_.emplace(var, integrand);
    deriv_cache_.emplace(std::make_pair(var, (int)VAR_T), integrand);
    return PrimitiveSymbol{var, name, basepoint};
}

const AlgebraicScalar& Context::primitive_integrand(int var) const {
    auto it = prim_integrands_.find(var);
    if (it == prim_integrands_.end()) throw std::out_of_range("not a primitive symbol");
    return it->second;
}

Poly Context::reduce(Poly p) const {
    bool again = true;
    while (again) {
        again = false;
        Poly out;
        for (auto& [e, c] : p.terms()) {
            int gv = -1;
            for (int v = (int)e.size() - 1; v >= VAR_LAM0; --v) {
                if (v < (int)gens_.size() && gens_[v].algebraic && e[v] >= gens_[v].red_degree) {
                    gv = v;
                    break;
                }
            }
            if (gv < 0) {
                out.add_term(e, c);
                continue;
            }
            again = true;
            ExpVec e2 = e;
            expvec_set(e2, gv, e[gv] - gens_[gv].red_degree);
            Poly m;
            m.add_term(e2, c);
            out += m * gens_[gv].red_rhs;
        }
        p = std::move(out);
    }
    return p;
}

std::map<int, int> Context::factor_into_atoms(const Poly& base_poly, Rational& content_out) {
    auto [content, prim] = base_poly.primitive();
    content_out = content;
    std::map<int, int> f;
    Poly rest = prim;
    if (rest.is_constant()) {
        // primitive() leaves a bare 1 for constants
        return f;
    }
    for (int id = 0; id < (int)atoms_.size(); ++id) {
        while (true) {
            if (!atom_may_divide(id, rest)) break;
            auto d = Poly::exact_divide(rest, atoms_[id]);
            if (!d) break;
            rest = *d;
            f[id] += 1;
            if (rest.is_constant()) break;
        }
        if (rest.is_constant()) break;
    }
    if (!rest.is_constant()) {
        atoms_.push_back(rest);
        f[(int)atoms_.size() - 1] += 1;
    } else if (rest.constant_value() != 1) {
        content_out *= rest.constant_value();
    }
    return f;
}

void Context::ensure_filter_vals(int n) {
    // deterministic pseudo-random evaluation points away from 0 and from any
    // special locus; generic complex values of modulus around 1
    static std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> u(0.6, 1.5);
    while ((int)filter_vals_.size() < n)
        filter_vals_.emplace_back(u(rng), u(rng));
}

bool Context::atom_may_divide(int id, const Poly& p) {
    ensure_filter_vals(std::max(p.max_var(), 2) + 1);
    while ((int)atom_points_.size() <= id) {
        // build a numeric zero of the atom (atoms are polynomials in t, c, x)
        int aid = (int)atom_points_.size();
        const Poly& b = atoms_[aid];
        AtomPoint pt;
        int pivot = -1, pdeg = 0;
        for (int v = 0; v <= VAR_X; ++v) {
            int d = b.degree_in(v);
            if (d <= 0) continue;
            if (pivot < 0 || d < pdeg) { pivot = v; pdeg = d; }
        }
        if (pivot >= 0) {
            std::vector<std::complex<double>> coeffs(pdeg + 1);
            for (int k = 0; k <= pdeg; ++k) coeffs[k] = b.coeff_of(pivot, k).eval(filter_vals_);
            std::complex<double> root = 0.0;
            bool ok = std::abs(coeffs[pdeg]) > 1e-12;
            if (ok && pdeg == 1) {
                root = -coeffs[0] / coeffs[1];
            } else if (ok) {
                // Durand-Kerner on the (small-degree) univariate image
                std::vector<std::complex<double>> z(pdeg);
                std::complex<double> seed(0.4, 0.9), zp = 1.0;
                for (int i = 0; i < pdeg; ++i) { zp *= seed; z[i] = zp; }
                auto f = [&](std::complex<double> x) {
                    std::complex<double> r = coeffs[pdeg];
                    for (int k = pdeg - 1; k >= 0; --k) r = r * x + coeffs[k];
                    return r;
                };
                for (int it = 0; it < 200; ++it) {
                    for (int i = 0; i < pdeg; ++i) {
                        std::complex<double> d = coeffs[pdeg];
                        for (int j = 0; j < pdeg; ++j)
                            if (j != i) d *= z[i] - z[j];
                        if (std::abs(d) > 1e-300) z[i] -= f(z[i]) / d;
                    }
                }
                root = z[0];
                for (int i = 1; i < pdeg; ++i)
                    if (std::abs(f(z[i])) < std::abs(f(root))) root = z[i];
            }
            if (ok) {
                auto vals = filter_vals_;
                vals[pivot] = root;
                double bs = 0.0;
                auto bv = eval_with_scale(b, vals, bs);
                if (std::isfinite(bs) && std::abs(bv) <= 1e-9 * std::max(bs, 1.0)) {
                    pt.pivot = pivot;
                    pt.root = root;
                    pt.usable = true;
                }
            }
        }
        atom_points_.push_back(pt);
    }
    const AtomPoint& pt = atom_points_[id];
    if (!pt.usable) return true;
    std::vector<std::complex<double>> vals(filter_vals_.begin(),
                                           filter_vals_.begin() + std::max(p.max_var(), 2) + 1);
    vals[pt.pivot] = pt.root;
    double scale = 0.0;
    auto v = eval_with_scale(p, vals, scale);
    if (!std::isfinite(scale) || !std::isfinite(std::abs(v))) return true;
    return std::abs(v) <= 1e-8 * std::max(scale, 1.0);
}

AlgebraicScalar Context::zero() { return AlgebraicScalar(shared_from_this(), Poly()); }
AlgebraicScalar Context::constant(const Rational& r) {
    return AlgebraicScalar(shared_from_this(), Poly::constant(r));
}
AlgebraicScalar Context::integer(long n) { return constant(Rational(n)); }
AlgebraicScalar Context::var(int v) {
    return AlgebraicScalar(shared_from_this(), Poly::variable(v));
}
AlgebraicScalar Context::t() { return var(VAR_T); }
AlgebraicScalar Context::c() { return var(VAR_C); }
AlgebraicScalar Context::x() { return var(VAR_X); }
AlgebraicScalar Context::lam0() { return var(VAR_LAM0); }
AlgebraicScalar Context::w() { return var(VAR_W); }
AlgebraicScalar Context::q() { return var(VAR_Q); }
AlgebraicScalar Context::s() { return var(VAR_S); }
AlgebraicScalar Context::delta() {
    return AlgebraicScalar(shared_from_this(), gens_[VAR_W].red_rhs);
}
AlgebraicScalar Context::inv_delta() { return delta().invert(); }
AlgebraicScalar Context::from_poly(Poly p) {
    return AlgebraicScalar(shared_from_this(), std::move(p));
}

const AlgebraicScalar& Context::gen_derivative(int gvar, int basevar) {
    auto key = std::make_pair(gvar, basevar);
    auto it = deriv_cache_.find(key);
    if (it != deriv_cache_.end()) return it->second;

    AlgebraicScalar d;
    if (gvar < VAR_LAM0) {
        d = gvar == basevar ? integer(1) : zero();
    } else if (gens_[gvar].is_primitive) {
        // t-primitives of x-free integrands with x-free basepoints
        if (basevar == VAR_X) {
            d = zero();
        } else {
            throw std::domain_error("primitive symbol " + gens_[gvar].name +
                                    " has no registered derivative in variable " +
                                    gens_[basevar].name);
        }
    } else {
        // implicit differentiation of the defining relation
        const Poly& rel = gens_[gvar].relation;
        AlgebraicScalar numer = zero();
        for (int u = 0; u < gvar; ++u) {
            Poly pu = rel.partial(u);
            if (pu.is_zero()) continue;
            const AlgebraicScalar& du = gen_derivative(u, basevar);
            if (du.is_zero()) continue;
            numer += from_poly(std::move(pu)) * du;
        }
        AlgebraicScalar pg = from_poly(rel.partial(gvar));
        d = -(numer / pg);
    }
    auto [it2, ok] = deriv_cache_.emplace(key, std::move(d));
    return it2->second;
}

// ---------------------------------------------------------- AlgebraicScalar

AlgebraicScalar::AlgebraicScalar(ContextPtr ctx, Poly num, std::map<int, int> den)
    : ctx_(std::move(ctx)), num_(std::move(num)), den_(std::move(den)) {
    normalize();
}

void AlgebraicScalar::normalize() {
    num_ = ctx_->reduce(std::move(num_));
    if (num_.is_zero()) {
        den_.clear();
        return;
    }
    for (auto it = den_.begin(); it != den_.end();) {
        while (it->second > 0) {
            if (!ctx_->atom_may_divide(it->first, num_)) break;
            auto d = Poly::exact_divide(num_, ctx_->atom(it->first));
            if (!d) break;
            num_ = std::move(*d);
            --it->second;
        }
        it = it->second == 0 ? den_.erase(it) : std::next(it);
    }
}

bool AlgebraicScalar::is_rational() const { return den_.empty() && num_.is_constant(); }

Rational AlgebraicScalar::rational_value() const {
    if (!is_rational()) throw std::domain_error("scalar is not rational");
    return num_.constant_value();
}

AlgebraicScalar AlgebraicScalar::operator-() const {
    AlgebraicScalar r = *this;
    r.num_ = -r.num_;
    return r;
}

AlgebraicScalar AlgebraicScalar::scaled(const Rational& c) const {
    if (c == 0) return ctx_ ? ctx_->zero() : AlgebraicScalar();
    AlgebraicScalar r = *this;
    r.num_ = r.num_.scaled(c);
    return r;
}

AlgebraicScalar operator+(const AlgebraicScalar& a, const AlgebraicScalar& b) {
    if (!a.ctx_) return b;
    if (!b.ctx_) return a;
    // lcm of factored denominators; scale each numerator by the complement
    std::map<int, int> den;
    for (auto& [id, e] : a.den_) den[id] = e;
    for (auto& [id, e] : b.den_) den[id] = std::max(den[id], e);
    Poly na = a.num_, nb = b.num_;
    for (auto& [id, e] : den) {
        auto ita = a.den_.find(id);
        int ea = e - (ita == a.den_.end() ? 0 : ita->second);
        for (int i = 0; i < ea; ++i) na *= a.ctx_->atom(id);
        auto itb = b.den_.find(id);
        int eb = e - (itb == b.den_.end() ? 0 : itb->second);
        for (int i = 0; i < eb; ++i) nb *= b.ctx_->atom(id);
    }
    return AlgebraicScalar(a.ctx_, na + nb, std::move(den));
}

AlgebraicScalar operator-(const AlgebraicScalar& a, const AlgebraicScalar& b) { return a + (-b); }

AlgebraicScalar operator*(const AlgebraicScalar& a, const AlgebraicScalar& b) {
    if (!a.ctx_) return a;
    if (!b.ctx_) return b;
    std::map<int, int> den = a.den_;
    for (auto& [id, e] : b.den_) den[id] += e;
    return AlgebraicScalar(a.ctx_, a.num_ * b.num_, std::move(den));
}

AlgebraicScalar operator/(const AlgebraicScalar& a, const AlgebraicScalar& b) {
    return a * b.invert();
}

namespace {
// first column of the adjugate and the determinant of a 3x3 polynomial matrix
void adjugate_col0(const std::array<std::array<Poly, 3>, 3>& m, std::array<Poly, 3>& u, Poly& det) {
    auto minor2 = [&](int r0, int r1, int c0, int c1) {
        return m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    };
    // u_i = C_{0i}(M), so that M u = det(M) e1
    u[0] = minor2(1, 2, 1, 2);
    u[1] = -minor2(1, 2, 0, 2);
    u[2] = minor2(1, 2, 0, 1);
    det = m[0][0] * u[0] + m[0][1] * u[1] + m[0][2] * u[2];
}
} // namespace

AlgebraicScalar AlgebraicScalar::invert() const {
    if (!ctx_ || num_.is_zero()) throw std::domain_error("inversion of zero scalar");
    if (is_rational()) {
        AlgebraicScalar r = *this;
        r.num_ = Poly::constant(Rational(1) / num_.constant_value());
        return r;
    }
    if (contains_primitive())
        throw std::domain_error("cannot invert a scalar containing a primitive symbol");

    // 1/num = N / Dbase with N reduced and Dbase in the base variables only.
    Poly cur = num_;
    Poly N = Poly::constant(1);
    for (int g : {(int)VAR_S, (int)VAR_Q, (int)VAR_W}) {
        if (!cur.depends_on(g)) continue;
        Poly A = cur.coeff_of(g, 0);
        Poly B = cur.coeff_of(g, 1);
        Poly conj = A - B * Poly::variable(g);
        N = ctx_->reduce(N * conj);
        cur = ctx_->reduce(cur * conj);
        if (cur.depends_on(g)) throw std::logic_error("radical conjugation failed");
    }
    Poly dbase;
    if (cur.depends_on(VAR_LAM0)) {
        // multiplication-by-cur matrix on the basis {1, lam0, lam0^2}
        std::array<std::array<Poly, 3>, 3> M;
        Poly L = Poly::variable(VAR_LAM0);
        for (int j = 0; j < 3; ++j) {
            Poly col = ctx_->reduce(cur * L.pow(j));
            for (int i = 0; i < 3; ++i) M[i][j] = col.coeff_of(VAR_LAM0, i);
        }
        std::array<Poly, 3> u;
        adjugate_col0(M, u, dbase);
        Poly ulam = u[0] + u[1] * Poly::variable(VAR_LAM0) + u[2] * Poly::variable(VAR_LAM0, 2);
        N = ctx_->reduce(N * ulam);
    } else {
        dbase = cur;
    }
    if (dbase.max_var() >= VAR_LAM0)
        throw std::logic_error("denominator rationalization left non-base variables");

    Rational content;
    std::map<int, int> dfac = ctx_->factor_into_atoms(dbase, content);
    AlgebraicScalar r(ctx_, N.scaled(Rational(1) / content), std::move(dfac));
    // restore the original factored denominator into the numerator
    for (auto& [id, e] : den_)
        for (int i = 0; i < e; ++i) r.num_ *= ctx_->atom(id);
    r.normalize();
    return r;
}

AlgebraicScalar AlgebraicScalar::pow_int(int n) const {
    if (n < 0) return invert().pow_int(-n);
    AlgebraicScalar r = ctx_->integer(1);
    AlgebraicScalar base = *this;
    unsigned m = (unsigned)n;
    while (m) {
        if (m & 1u) r = r * base;
        base = base * base;
        m >>= 1u;
    }
    return r;
}

AlgebraicScalar AlgebraicScalar::differentiate(int basevar) const {
    if (basevar < 0 || basevar > VAR_X)
        throw std::invalid_argument("differentiate: base variable must be t, c, or x");
    if (!ctx_) return *this;
    std::vector<AlgebraicScalar> parts;
    int top = num_.max_var();
    for (int u = 0; u <= top; ++u) {
        if (!num_.depends_on(u)) continue;
        Poly pu = num_.partial(u);
        if (u < VAR_LAM0) {
            if (u == basevar) parts.emplace_back(ctx_, std::move(pu), den_);
            continue;
        }
        const AlgebraicScalar& du = ctx_->gen_derivative(u, basevar);
        if (du.is_zero()) continue;
        parts.push_back(AlgebraicScalar(ctx_, std::move(pu), den_) * du);
    }
    for (auto& [id, e] : den_) {
        Poly pa = ctx_->atom(id).partial(basevar);
        if (pa.is_zero()) continue;
        std::map<int, int> den2 = den_;
        den2[id] += 1;
        parts.push_back(AlgebraicScalar(ctx_, num_ * pa, std::move(den2)).scaled(Rational(-e)));
    }
    if (parts.empty()) return ctx_->zero();
    return sum_scalars(parts);
}

bool AlgebraicScalar::depends_on(int var) const {
    if (num_.depends_on(var)) return true;
    if (var <= VAR_X)
        for (auto& [id, e] : den_)
            if (ctx_->atom(id).depends_on(var)) return true;
    return false;
}

bool AlgebraicScalar::contains_primitive() const {
    return num_.max_var() >= VAR_FIRST_PRIMITIVE;
}

std::optional<Rational> AlgebraicScalar::homogeneity_degree() const {
    if (!ctx_ || num_.is_zero()) return std::nullopt;
    auto poly_degree = [&](const Poly& p) -> std::optional<Rational> {
        std::optional<Rational> deg;
        for (auto& [e, c] : p.terms()) {
            Rational d = 0;
            for (std::size_t v = 0; v < e.size(); ++v)
                if (e[v] != 0) d += Rational((long)e[v]) * ctx_->gen((int)v).weight;
            if (!deg)
                deg = d;
            else if (*deg != d)
                return std::nullopt;
        }
        return deg;
    };
    auto nd = poly_degree(num_);
    if (!nd) return std::nullopt;
    Rational total = *nd;
    for (auto& [id, e] : den_) {
        auto ad = poly_degree(ctx_->atom(id));
        if (!ad) return std::nullopt;
        total -= Rational((long)e) * (*ad);
    }
    return total;
}

std::complex<double> AlgebraicScalar::eval(const BranchPoint& p) const {
    if (!ctx_) return 0.0;
    std::vector<std::complex<double>> vals(ctx_->num_gens());
    vals[VAR_T] = p.t;
    vals[VAR_C] = p.c;
    vals[VAR_X] = p.x;
    vals[VAR_LAM0] = p.lam0;
    vals[VAR_W] = p.w;
    vals[VAR_Q] = p.q;
    vals[VAR_S] = p.s;
    for (int v = VAR_FIRST_PRIMITIVE; v < ctx_->num_gens(); ++v) {
        auto it = p.primitives.find(v);
        if (it != p.primitives.end())
            vals[v] = it->second;
        else if (num_.depends_on(v))
            throw std::domain_error("missing value for primitive symbol " + ctx_->gen(v).name);
    }
    std::complex<double> r = num_.eval(vals);
    for (auto& [id, e] : den_) {
        std::complex<double> a = ctx_->atom(id).eval(vals);
        for (int i = 0; i < e; ++i) r /= a;
    }
    return r;
}

AlgebraicScalar sum_scalars(const std::vector<AlgebraicScalar>& xs) {
    ContextPtr ctx;
    for (auto& x : xs)
        if (x.ctx()) { ctx = x.ctx(); break; }
    if (!ctx) return AlgebraicScalar();
    std::map<int, int> den;
    for (auto& x : xs)
        for (auto& [id, e] : x.den()) den[id] = std::max(den[id], e);
    Poly total;
    for (auto& x : xs) {
        if (x.is_zero()) continue;
        Poly n = x.num();
        for (auto& [id, e] : den) {
            auto it = x.den().find(id);
            int missing = e - (it == x.den().end() ? 0 : it->second);
            for (int i = 0; i < missing; ++i) n *= ctx->atom(id);
        }
        total += n;
    }
    return AlgebraicScalar(ctx, std::move(total), std::move(den));
}

namespace {
nlohmann::json poly_to_json(const Poly& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (auto& [e, c] : p.terms())
        terms.push_back({{"exp", e}, {"coef", rat_to_string(c)}});
    return terms;
}
} // namespace

nlohmann::json AlgebraicScalar::serialize() const {
    nlohmann::json j;
    j["num"] = poly_to_json(num_);
    j["den"] = nlohmann::json::array();
    for (auto& [id, e] : den_)
        j["den"].push_back({{"atom", poly_to_json(ctx_->atom(id))}, {"pow", e}});
    return j;
}

} // namespace pwkb
