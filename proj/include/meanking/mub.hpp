#pragma once

#include <cstddef>
#include <vector>

#include "meanking/linalg.hpp"
#include "meanking/report.hpp"

namespace meanking {

// k mutually unbiased orthonormal bases of C^d: any two vectors from
// different bases have squared overlap 1/d. bases[A][a][i] is the i-th
// component of vector a of basis A in the reference basis.
struct MubSet {
    std::size_t d = 0;
    std::size_t k = 0;
    std::vector<std::vector<CVector>> bases;
};

// Throws std::invalid_argument on ragged data or k outside 2..d+1.
void check_shape(const MubSet& m);

// The universal two-basis set: standard basis plus the Fourier basis with
// components omega^(i*a)/sqrt(d), omega = exp(2*pi*i/d). Works for every
// d >= 2, prime power or not.
MubSet standard_fourier_mubs(std::size_t d);

// Maximal set of q+1 MUBs for q = 2 (Pauli Z/X/Y eigenbases) or q an odd
// prime power with extension degree <= 4, built from the absolute trace of
// A*i^2 + a*i over GF(q). Even prime powers q >= 4 are refused (import such
// sets from file instead).
MubSet prime_power_mubs(unsigned q);

// Max residual of |<A,a|A',a'>|^2 against the unbiasedness target over all
// quadruples; the A = A' part is exactly per-basis orthonormality.
VerificationReport verify_mubs(const MubSet& m, Tolerance tol = {});

}  // namespace meanking
