#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace meanking {

bool is_prime(unsigned n);

// Factors q as p^m with p prime, if possible.
std::optional<std::pair<unsigned, unsigned>> factor_prime_power(unsigned q);

// Arithmetic in GF(p^m), m <= 4. Elements are canonical integers
// sum(coeffs[t] * p^t) in {0..q-1}; coefficient tuples are residues mod p,
// low degree first. The modulus is the lexicographically smallest monic
// irreducible polynomial of degree m (searched in ascending canonical
// encoding of the non-leading coefficients); for m = 1 it is x.
class FieldSpec {
  public:
    static FieldSpec make(unsigned p, unsigned m);

    unsigned p() const { return p_; }
    unsigned m() const { return m_; }
    unsigned q() const { return q_; }

    // Modulus coefficients, low degree first, size m+1, leading coefficient 1.
    const std::vector<unsigned>& modulus() const { return modulus_; }

    unsigned add(unsigned a, unsigned b) const;
    unsigned sub(unsigned a, unsigned b) const;
    unsigned neg(unsigned a) const;
    unsigned mul(unsigned a, unsigned b) const;
    unsigned inv(unsigned a) const;  // throws std::domain_error on a = 0
    unsigned pow(unsigned a, std::uint64_t e) const;

    // Absolute trace sum_{t<m} a^(p^t), an element of the prime field {0..p-1}.
    unsigned trace(unsigned a) const;

    std::vector<unsigned> coeffs(unsigned a) const;
    unsigned encode(const std::vector<unsigned>& coeffs) const;

  private:
    FieldSpec(unsigned p, unsigned m, std::vector<unsigned> modulus);
    void check_element(unsigned a) const;

    unsigned p_ = 0;
    unsigned m_ = 0;
    unsigned q_ = 0;
    std::vector<unsigned> modulus_;
};

}  // namespace meanking
