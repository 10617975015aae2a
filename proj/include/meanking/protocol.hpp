#pragma once

#include <cstdint>
#include <vector>

#include "meanking/linalg.hpp"
#include "meanking/mub.hpp"
#include "meanking/oa.hpp"
#include "meanking/report.hpp"

namespace meanking {

// The assembled retrodiction protocol on C^{d'} (x) C^d with d' = n*d.
// Flat index convention: extended-side index i and system-side index j map
// to i*d + j. All members are immutable after assembly; alice_basis starts
// empty and is assigned from one of the alice_basis_* constructions.
struct ProtocolInstance {
    MubSet mubs;
    OrthogonalArray oa;
    Tolerance tol;

    std::size_t d = 0;        // system level
    std::size_t k = 0;        // number of bases
    std::size_t n = 0;        // array index
    std::size_t d_prime = 0;  // extended-side level n*d

    CVector phi;                                 // maximally entangled start state
    std::vector<std::vector<CVector>> phi_post;  // [k][d] post-measurement states
    std::vector<std::vector<CVector>> phi_hat;   // [k][d] Fourier combinations; [A][0] = phi
    std::vector<CVector> b_basis;                // orthonormal basis of the leftover subspace B
    std::vector<CVector> alice_basis;            // filled by an alice_basis_* construction

    std::size_t dim() const { return d * d_prime; }
    // dim B = n*d^2 - k*(d-1) - 1
    std::size_t b_dim() const { return dim() - k * (d - 1) - 1; }
};

// The dd' x kd certificate matrix: rows indexed by outcome I, columns by the
// flattened pair (A,a) = A*d + a. A valid H vanishes wherever the estimation
// says a different symbol, and H^dagger H reproduces the unbiasedness Gram
// matrix.
struct HMatrix {
    CMatrix mat;
    std::size_t d = 0;
    std::size_t k = 0;
    std::size_t d_prime = 0;
};

struct SimulationReport {
    enum class Mode { exact, sampled };

    Mode mode = Mode::exact;
    std::vector<std::vector<double>> success;  // [k][d] success probabilities
    double worst = 0.0;                        // min over the matrix
    int guess_shift = 0;                       // estimation used: (s(I,A)+shift) mod d

    std::uint64_t rounds = 0;  // sampled mode only
    std::uint64_t seed = 0;
    std::uint64_t total_wins = 0;
    std::vector<std::vector<std::uint64_t>> trials;  // per (A,a) round counts
    std::vector<std::vector<std::uint64_t>> wins;

    VerificationReport checks;
};

// Builds the entangled state, the post-measurement family, its Fourier
// (hat) family, and the orthonormal basis of B (completion tail of the hat
// family in the fixed order: phi, then A ascending with j = 1..d-1).
// Verifies every state-level invariant and throws VerificationError on
// failure. mubs and oa must agree on (d, k).
ProtocolInstance build_states(MubSet mubs, OrthogonalArray oa, Tolerance tol = {},
                              std::size_t row_cap = kDefaultRowCap);

// The state-level invariant checks run by build_states.
VerificationReport verify_instance(const ProtocolInstance& inst, Tolerance tol);

// H(I;A,a) = delta(a, s(I,A)) / sqrt(n*d).
HMatrix h_from_oa(const OrthogonalArray& oa);

// Checks the zero pattern against the estimation table and the Gram
// condition on H^dagger H, both within tol.
VerificationReport verify_h(const HMatrix& h, const OrthogonalArray& estimation,
                            Tolerance tol = {});

// Unitary-extension construction: pairs the hat family of H's columns with
// the hat family of the post-measurement states in the shared fixed order,
// completes both sides deterministically, and pulls the standard outcome
// basis back. Postconditions (orthonormality, <I|Phi_{A,a}> = H, survival)
// are verified; failure throws VerificationError.
std::vector<CVector> alice_basis_general(const ProtocolInstance& inst, const HMatrix& h);

// Closed-form route: |I> = (1/sqrt(n))|I'> + sum_b c_{I,b} |Xi_b> with
// |I'> = (1/sqrt(d)) sum_A |Phi_{A,s(I,A)}> - ((k-1)/d)|Phi> and the free
// coefficients c_{I,b} taken from the general construction. Verified to
// agree with alice_basis_general entrywise within tol.
std::vector<CVector> alice_basis_formula(const ProtocolInstance& inst);

// Fully explicit route for the all-tuples array: s(I,A) = digit A of I,
// the extension maps B onto the Fourier vectors indexed by J with at least
// two nonzero digits (ascending J), and the coefficients are pure phases.
// For k = d+1 the B basis is the standard-vector block i >= d (checked for
// consistency against the hat-family span); otherwise the instance's
// completion basis is used.
std::vector<CVector> alice_basis_trivial_oa(const ProtocolInstance& inst);

// Postcondition checks shared by the alice_basis_* routes.
VerificationReport verify_alice_basis(const ProtocolInstance& inst, const HMatrix& h);

// POVM elements M_I on C^d (x) C^d obtained by compressing the projectors
// |I><I| through the natural embedding: the extended-side coordinates above
// d are cut. Completeness and positivity are verified (VerificationError on
// failure).
std::vector<CMatrix> povm_compress(const ProtocolInstance& inst);
VerificationReport verify_povm(const ProtocolInstance& inst, const std::vector<CMatrix>& povm,
                               Tolerance tol);

// Exact per-(A,a) success probabilities of guessing with
// (s(I,A) + guess_shift) mod d.
SimulationReport success_exact(const ProtocolInstance& inst, int guess_shift = 0);

// Monte Carlo protocol rounds, deterministic for a fixed seed: draw the
// basis uniformly, the outcome by inverse-CDF over the exact probabilities
// in index order, collapse, measure the outcome basis, guess.
SimulationReport simulate_rounds(const ProtocolInstance& inst, std::uint64_t rounds,
                                 std::uint64_t seed, int guess_shift = 0);

}  // namespace meanking
