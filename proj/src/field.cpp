#include "meanking/field.hpp"

#include <stdexcept>
#include <string>

namespace meanking {

namespace {

// Polynomials over GF(p): coefficient vectors, low degree first, no trailing
// zero guarantee (normalize() trims).
using Poly = std::vector<unsigned>;

void normalize(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

unsigned eval_mod_p(const Poly& poly, unsigned x, unsigned p) {
    unsigned v = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
        v = (v * x + *it) % p;
    }
    return v;
}

unsigned scalar_inv_mod_p(unsigned a, unsigned p) {
    // p is prime and a != 0; Fermat.
    unsigned result = 1;
    unsigned base = a % p;
    unsigned e = p - 2;
    while (e) {
        if (e & 1u) result = (result * base) % p;
        base = (base * base) % p;
        e >>= 1u;
    }
    return result;
}

// Remainder of a modulo d over GF(p); d must be nonzero.
Poly poly_mod(Poly a, const Poly& d, unsigned p) {
    normalize(a);
    const unsigned lead_inv = scalar_inv_mod_p(d.back(), p);
    while (a.size() >= d.size() && !a.empty()) {
        const unsigned f = (a.back() * lead_inv) % p;
        const std::size_t off = a.size() - d.size();
        for (std::size_t i = 0; i < d.size(); ++i) {
            a[off + i] = (a[off + i] + p * d[i] - (f * d[i]) % p) % p;
        }
        // The leading coefficient cancels exactly, so the degree drops.
        normalize(a);
    }
    return a;
}

Poly poly_mul(const Poly& a, const Poly& b, unsigned p) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] = (out[i + j] + a[i] * b[j]) % p;
        }
    }
    normalize(out);
    return out;
}

Poly poly_sub(Poly a, const Poly& b, unsigned p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) {
        a[i] = (a[i] + p - b[i]) % p;
    }
    normalize(a);
    return a;
}

// Quotient of a / d over GF(p).
Poly poly_div(Poly a, const Poly& d, unsigned p) {
    normalize(a);
    if (a.size() < d.size()) return {};
    const unsigned lead_inv = scalar_inv_mod_p(d.back(), p);
    Poly quot(a.size() - d.size() + 1, 0);
    while (a.size() >= d.size() && !a.empty()) {
        const unsigned f = (a.back() * lead_inv) % p;
        const std::size_t off = a.size() - d.size();
        quot[off] = f;
        for (std::size_t i = 0; i < d.size(); ++i) {
            a[off + i] = (a[off + i] + p * d[i] - (f * d[i]) % p) % p;
        }
        normalize(a);
    }
    normalize(quot);
    return quot;
}

bool divides(const Poly& d, const Poly& a, unsigned p) {
    return poly_mod(a, d, p).empty();
}

// Irreducibility over GF(p) for degree m <= 4: no roots rules out linear
// factors (sufficient for m = 2, 3); for m = 4 also rule out quadratic
// divisors by trial division.
bool irreducible(const Poly& poly, unsigned p, unsigned m) {
    for (unsigned x = 0; x < p; ++x) {
        if (eval_mod_p(poly, x, p) == 0) return false;
    }
    if (m == 4) {
        for (unsigned c1 = 0; c1 < p; ++c1) {
            for (unsigned c0 = 0; c0 < p; ++c0) {
                const Poly quad{c0, c1, 1};
                if (divides(quad, poly, p)) return false;
            }
        }
    }
    return true;
}

}  // namespace

bool is_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned f = 2; f * f <= n; ++f) {
        if (n % f == 0) return false;
    }
    return true;
}

std::optional<std::pair<unsigned, unsigned>> factor_prime_power(unsigned q) {
    if (q < 2) return std::nullopt;
    unsigned p = q;  // smallest prime factor; q itself when q is prime
    for (unsigned f = 2; f * f <= q; ++f) {
        if (q % f == 0) {
            p = f;
            break;
        }
    }
    unsigned m = 0;
    unsigned t = q;
    while (t > 1) {
        if (t % p != 0) return std::nullopt;
        t /= p;
        ++m;
    }
    return std::make_pair(p, m);
}

FieldSpec::FieldSpec(unsigned p, unsigned m, std::vector<unsigned> modulus)
    : p_(p), m_(m), q_(1), modulus_(std::move(modulus)) {
    for (unsigned i = 0; i < m; ++i) q_ *= p;
}

FieldSpec FieldSpec::make(unsigned p, unsigned m) {
    if (!is_prime(p)) {
        throw std::invalid_argument("field_make: " + std::to_string(p) + " is not prime");
    }
    if (m < 1 || m > 4) {
        throw std::invalid_argument("field_make: extension degree m = " + std::to_string(m) +
                                    " out of supported range 1..4");
    }
    if (m == 1) {
        return FieldSpec(p, m, {0, 1});  // modulus x
    }
    unsigned count = 1;
    for (unsigned i = 0; i < m; ++i) count *= p;
    for (unsigned c = 0; c < count; ++c) {
        Poly poly(m + 1, 0);
        unsigned t = c;
        for (unsigned i = 0; i < m; ++i) {
            poly[i] = t % p;
            t /= p;
        }
        poly[m] = 1;
        if (irreducible(poly, p, m)) {
            return FieldSpec(p, m, poly);
        }
    }
    throw std::logic_error("field_make: no irreducible polynomial found");  // unreachable
}

void FieldSpec::check_element(unsigned a) const {
    if (a >= q_) {
        throw std::invalid_argument("field element " + std::to_string(a) +
                                    " out of range for GF(" + std::to_string(q_) + ")");
    }
}

std::vector<unsigned> FieldSpec::coeffs(unsigned a) const {
    check_element(a);
    std::vector<unsigned> c(m_, 0);
    for (unsigned t = 0; t < m_; ++t) {
        c[t] = a % p_;
        a /= p_;
    }
    return c;
}

unsigned FieldSpec::encode(const std::vector<unsigned>& coeffs) const {
    unsigned e = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        if (*it >= p_) {
            throw std::invalid_argument("coefficient " + std::to_string(*it) +
                                        " out of range mod " + std::to_string(p_));
        }
        e = e * p_ + *it;
    }
    return e;
}

unsigned FieldSpec::add(unsigned a, unsigned b) const {
    check_element(a);
    check_element(b);
    unsigned out = 0;
    unsigned place = 1;
    for (unsigned t = 0; t < m_; ++t) {
        out += ((a % p_ + b % p_) % p_) * place;
        a /= p_;
        b /= p_;
        place *= p_;
    }
    return out;
}

unsigned FieldSpec::neg(unsigned a) const {
    check_element(a);
    unsigned out = 0;
    unsigned place = 1;
    for (unsigned t = 0; t < m_; ++t) {
        out += ((p_ - a % p_) % p_) * place;
        a /= p_;
        place *= p_;
    }
    return out;
}

unsigned FieldSpec::sub(unsigned a, unsigned b) const { return add(a, neg(b)); }

unsigned FieldSpec::mul(unsigned a, unsigned b) const {
    check_element(a);
    check_element(b);
    Poly pa = coeffs(a);
    Poly pb = coeffs(b);
    normalize(pa);
    normalize(pb);
    Poly prod = poly_mul(pa, pb, p_);
    Poly rem = poly_mod(prod, modulus_, p_);
    rem.resize(m_, 0);
    return encode(rem);
}

unsigned FieldSpec::inv(unsigned a) const {
    check_element(a);
    if (a == 0) {
        throw std::domain_error("division by zero in GF(" + std::to_string(q_) + ")");
    }
    // Extended Euclid over GF(p)[x]: r0 = modulus, r1 = a.
    Poly r0 = modulus_;
    Poly r1 = coeffs(a);
    normalize(r1);
    Poly t0{};        // coefficient of a in r0
    Poly t1{1};       // coefficient of a in r1
    while (!r1.empty()) {
        Poly q = poly_div(r0, r1, p_);
        Poly r2 = poly_sub(r0, poly_mul(q, r1, p_), p_);
        Poly t2 = poly_sub(t0, poly_mul(q, t1, p_), p_);
        r0 = std::move(r1);
        r1 = std::move(r2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    // r0 = gcd, a unit since the modulus is irreducible and a != 0.
    const unsigned scale = scalar_inv_mod_p(r0.back(), p_);
    Poly inv_poly = poly_mul(t0, Poly{scale}, p_);
    inv_poly = poly_mod(inv_poly, modulus_, p_);
    inv_poly.resize(m_, 0);
    return encode(inv_poly);
}

unsigned FieldSpec::pow(unsigned a, std::uint64_t e) const {
    check_element(a);
    unsigned result = 1;
    unsigned base = a;
    while (e) {
        if (e & 1u) result = mul(result, base);
        base = mul(base, base);
        e >>= 1u;
    }
    return result;
}

unsigned FieldSpec::trace(unsigned a) const {
    check_element(a);
    unsigned sum = 0;
    unsigned b = a;
    for (unsigned t = 0; t < m_; ++t) {
        sum = add(sum, b);
        b = pow(b, p_);
    }
    const auto c = coeffs(sum);
    for (unsigned t = 1; t < m_; ++t) {
        if (c[t] != 0) {
            throw std::logic_error("trace landed outside the prime field");
        }
    }
    return c[0];
}

}  // namespace meanking
