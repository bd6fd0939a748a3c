#pragma once
// Exact scalar field for the Painlevé II tower.
//
// The field is Q(t, c, x) extended by the algebraic generators
//   lam0 : 2*lam0^3 + t*lam0 + c = 0          (the leading Painlevé root)
//   w    : w^2 = 6*lam0^2 + t  (= Delta)
//   q    : q^2 = w             (so q = Delta^{1/4})
//   s    : s^2 = x^2 + 2*lam0*x + 3*lam0^2 + t
// and, lazily, by "primitive symbols": formal antiderivatives (d/dt known,
// treated as transcendental).  Elements are kept in reduced form — numerator a
// relation-reduced polynomial, denominator a factored product of registered
// polynomial atoms in the base variables (t, c, x) only — so reduced-zero is
// genuinely zero and is_zero() is a decision procedure.

#include "pwkb/poly.hpp"

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pwkb {

enum BaseVar : int {
    VAR_T = 0,
    VAR_C = 1,
    VAR_X = 2,
    VAR_LAM0 = 3,
    VAR_W = 4,
    VAR_Q = 5,
    VAR_S = 6,
    VAR_FIRST_PRIMITIVE = 7,
};

class AlgebraicScalar;
class Context;
using ContextPtr = std::shared_ptr<Context>;

struct GeneratorSpec {
    std::string name;
    bool algebraic = false; // reduced modulo a relation
    int red_degree = 0;     // reduce exponents >= red_degree (algebraic only)
    Poly red_rhs;           // g^red_degree == red_rhs
    Poly relation;          // defining relation p(g, earlier gens) = 0
    Rational weight;        // homogeneity degree under (x,t,c) -> (r^-1/3 x, r^-2/3 t, r^-1 c)
    bool is_primitive = false;
    std::string basepoint;  // primitive symbols: integration basepoint tag
};

struct PrimitiveSymbol {
    int var = -1;
    std::string name;
    std::string basepoint;
};

/// Values of every generator at a point on the Riemann surface; used by the
/// numerics layer to evaluate scalars along branch-tracked paths.
struct BranchPoint {
    std::complex<double> t{}, c{}, x{};
    std::complex<double> lam0{}, w{}, q{}, s{};
    std::map<int, std::complex<double>> primitives; // var id -> value
};

class Context : public std::enable_shared_from_this<Context> {
public:
    static ContextPtr make();

    const GeneratorSpec& gen(int var) const { return gens_.at(var); }
    int num_gens() const { return (int)gens_.size(); }

    /// Adjoin a formal antiderivative with d/dt = integrand.
    PrimitiveSymbol add_primitive(const std::string& name, const AlgebraicScalar& integrand,
                                  const std::string& basepoint, const Rational& weight);
    const AlgebraicScalar& primitive_integrand(int var) const;

    /// Relation-reduce a polynomial (exponent bounds lam0^3, w^2, q^2, s^2).
    Poly reduce(Poly p) const;

    /// d(gen)/d(base var) as a field element; derived by implicit
    /// differentiation for algebraic generators, cached.
    const AlgebraicScalar& gen_derivative(int gvar, int basevar);

    // --- denominator atom registry ---
    const Poly& atom(int id) const { return atoms_.at(id); }
    int num_atoms() const { return (int)atoms_.size(); }
    /// Factor a base-variable polynomial over the registered atoms,
    /// registering whatever remains; returns atom id -> exponent.
    std::map<int, int> factor_into_atoms(const Poly& base_poly, Rational& content_out);
    /// Cheap necessary condition for atom(id) | p: p must vanish at a cached
    /// numeric point on the atom's zero set.  May return a false positive,
    /// never a false negative (errs towards true on overflow).
    bool atom_may_divide(int id, const Poly& p);

    // --- element constructors ---
    AlgebraicScalar zero();
    AlgebraicScalar constant(const Rational& r);
    AlgebraicScalar integer(long n);
    AlgebraicScalar var(int v);
    AlgebraicScalar t();
    AlgebraicScalar c();
    AlgebraicScalar x();
    AlgebraicScalar lam0();
    AlgebraicScalar w();
    AlgebraicScalar q();
    AlgebraicScalar s();
    AlgebraicScalar delta();     // 6 lam0^2 + t
    AlgebraicScalar inv_delta(); // 1/Delta
    AlgebraicScalar from_poly(Poly p);

private:
    Context() = default;
    void init();
    std::vector<GeneratorSpec> gens_;
    std::vector<Poly> atoms_;
    std::map<std::pair<int, int>, AlgebraicScalar> deriv_cache_;
    std::map<int, AlgebraicScalar> prim_integrands_;
    // numeric divisibility filter: per-atom point on its zero set
    struct AtomPoint {
        int pivot = -1;
        std::complex<double> root{};
        bool usable = false;
    };
    std::vector<AtomPoint> atom_points_;
    std::vector<std::complex<double>> filter_vals_;
    void ensure_filter_vals(int n);
    friend class AlgebraicScalar;
};

class AlgebraicScalar {
public:
    AlgebraicScalar() = default;
    AlgebraicScalar(ContextPtr ctx, Poly num, std::map<int, int> den = {});

    const ContextPtr& ctx() const { return ctx_; }
    const Poly& num() const { return num_; }
    const std::map<int, int>& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_rational() const;        // constant element of Q
    Rational rational_value() const; // throws unless is_rational()

    AlgebraicScalar operator-() const;
    friend AlgebraicScalar operator+(const AlgebraicScalar& a, const AlgebraicScalar& b);
    friend AlgebraicScalar operator-(const AlgebraicScalar& a, const AlgebraicScalar& b);
    friend AlgebraicScalar operator*(const AlgebraicScalar& a, const AlgebraicScalar& b);
    friend AlgebraicScalar operator/(const AlgebraicScalar& a, const AlgebraicScalar& b);
    AlgebraicScalar& operator+=(const AlgebraicScalar& o) { return *this = *this + o; }
    AlgebraicScalar& operator-=(const AlgebraicScalar& o) { return *this = *this - o; }
    AlgebraicScalar& operator*=(const AlgebraicScalar& o) { return *this = *this * o; }

    AlgebraicScalar scaled(const Rational& r) const;
    AlgebraicScalar invert() const;
    AlgebraicScalar pow_int(int n) const;

    /// d/d(base var), base var in {VAR_T, VAR_C, VAR_X}.
    AlgebraicScalar differentiate(int basevar) const;

    bool depends_on(int var) const;
    bool contains_primitive() const;

    /// Homogeneity degree under the Appendix-A scaling group, if homogeneous.
    std::optional<Rational> homogeneity_degree() const;

    std::complex<double> eval(const BranchPoint& p) const;

    nlohmann::json serialize() const;

    bool equals(const AlgebraicScalar& o) const { return (*this - o).is_zero(); }

private:
    void normalize();
    ContextPtr ctx_;
    Poly num_;
    std::map<int, int> den_;
    friend class Context;
};

/// Sum many scalars over the common (lcm) denominator with a single
/// reduction; equivalent to folding operator+ but avoids re-normalizing every
/// partial sum.
AlgebraicScalar sum_scalars(const std::vector<AlgebraicScalar>& xs);

/// Spec-level entry point.
ContextPtr make_context();
inline bool is_zero(const AlgebraicScalar& a) { return a.is_zero(); }
inline AlgebraicScalar normalize(const AlgebraicScalar& a) { return a; } // always normal
inline AlgebraicScalar differentiate(const AlgebraicScalar& a, int basevar) {
    return a.differentiate(basevar);
}

} // namespace pwkb
