#include "meanking/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace meanking {

namespace {

std::string idx3(std::size_t I, std::size_t A, std::size_t a) {
    return "(I=" + std::to_string(I) + ",A=" + std::to_string(A) + ",a=" + std::to_string(a) + ")";
}

// Hat family of any [k][d] vector family: out[A][j] = (1/sqrt(d)) *
// sum_a omega^(a*j) family[A][a], omega = exp(2*pi*i/d).
std::vector<std::vector<CVector>> hat_family(const std::vector<std::vector<CVector>>& family,
                                             std::size_t d) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<std::vector<CVector>> out(family.size());
    for (std::size_t A = 0; A < family.size(); ++A) {
        out[A].reserve(d);
        for (std::size_t j = 0; j < d; ++j) {
            CVector acc(family[A][0].dim());
            for (std::size_t a = 0; a < d; ++a) {
                acc += unit_root_pow(d, static_cast<long long>(a * j)) * family[A][a];
            }
            out[A].push_back(scale * acc);
        }
    }
    return out;
}

// Fixed ordering of the hat family used for every unitary pairing:
// the common j = 0 vector first, then A ascending with j = 1..d-1.
std::vector<CVector> hat_list(const std::vector<std::vector<CVector>>& hats, const CVector& first,
                              std::size_t d) {
    std::vector<CVector> out;
    out.push_back(first);
    for (const auto& per_basis : hats) {
        for (std::size_t j = 1; j < d; ++j) {
            out.push_back(per_basis[j]);
        }
    }
    return out;
}

std::size_t shifted_guess(const OrthogonalArray& oa, std::size_t I, std::size_t A, int shift) {
    const long long d = static_cast<long long>(oa.d);
    long long g = (static_cast<long long>(oa.at(I, A)) + shift) % d;
    if (g < 0) g += d;
    return static_cast<std::size_t>(g);
}

// Inverse-CDF draw over a probability vector in index order.
std::size_t sample_index(const std::vector<double>& probs, double u) {
    double acc = 0.0;
    std::size_t last_positive = 0;
    bool seen = false;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 0.0) {
            last_positive = i;
            seen = true;
        }
        acc += probs[i];
        if (u < acc) return i;
    }
    if (!seen) throw std::invalid_argument("sample_index: all probabilities vanish");
    return last_positive;
}

double uniform_unit(std::mt19937_64& rng) {
    // 53-bit mantissa double in [0,1); bit-identical across platforms.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void require_basis(const ProtocolInstance& inst, const char* op) {
    if (inst.alice_basis.empty()) {
        throw std::invalid_argument(std::string(op) + ": alice_basis has not been built");
    }
    if (inst.alice_basis.size() != inst.dim()) {
        throw std::invalid_argument(std::string(op) + ": alice_basis has " +
                                    std::to_string(inst.alice_basis.size()) +
                                    " vectors, expected " + std::to_string(inst.dim()));
    }
}

// State-level invariants that do not involve the completed B basis.
VerificationReport verify_states(const ProtocolInstance& inst, Tolerance tol) {
    VerificationReport report;
    const std::size_t d = inst.d;
    const std::size_t k = inst.k;
    const double inv_d = 1.0 / static_cast<double>(d);

    report.add("state.phi_norm", std::abs(norm(inst.phi) - 1.0), tol.eps);

    // <Phi_{A,a}|Phi_{A',a'}> mirrors the unbiasedness relation.
    double worst = 0.0;
    std::string where;
    for (std::size_t A = 0; A < k; ++A) {
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t B = A; B < k; ++B) {
                for (std::size_t b = 0; b < d; ++b) {
                    const cplx value = inner(inst.phi_post[A][a], inst.phi_post[B][b]);
                    const double target = (A == B) ? ((a == b) ? 1.0 : 0.0) : inv_d;
                    const double r = std::abs(value - target);
                    if (r > worst) {
                        worst = r;
                        where = "worst at (A=" + std::to_string(A) + ",a=" + std::to_string(a) +
                                ",A'=" + std::to_string(B) + ",a'=" + std::to_string(b) + ")";
                    }
                }
            }
        }
    }
    report.add("state.post_gram", worst, tol.eps, where);

    // Hat-state orthogonality: identity blocks per basis, shared j = 0 ray.
    worst = 0.0;
    where.clear();
    for (std::size_t A = 0; A < k; ++A) {
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t B = A; B < k; ++B) {
                for (std::size_t j2 = 0; j2 < d; ++j2) {
                    const cplx value = inner(inst.phi_hat[A][j], inst.phi_hat[B][j2]);
                    double target = 0.0;
                    if (A == B && j == j2) target = 1.0;
                    if (A != B && j == 0 && j2 == 0) target = 1.0;
                    const double r = std::abs(value - target);
                    if (r > worst) {
                        worst = r;
                        where = "worst at (A=" + std::to_string(A) + ",j=" + std::to_string(j) +
                                ",A'=" + std::to_string(B) + ",j'=" + std::to_string(j2) + ")";
                    }
                }
            }
        }
    }
    report.add("state.hat_gram", worst, tol.eps, where);

    worst = 0.0;
    for (std::size_t A = 0; A < k; ++A) {
        worst = std::max(worst, norm(inst.phi_hat[A][0] - inst.phi));
    }
    report.add("state.hat_zero_is_phi", worst, tol.eps);

    std::vector<CVector> states;
    states.reserve(k * d);
    for (const auto& per_basis : inst.phi_post) {
        for (const auto& s : per_basis) states.push_back(s);
    }
    const std::size_t rank = span_rank(states);
    const std::size_t rank_expected = k * (d - 1) + 1;
    report.add("state.span_rank",
               rank >= rank_expected ? static_cast<double>(rank - rank_expected)
                                     : static_cast<double>(rank_expected - rank),
               0.0, std::to_string(rank) + " vs k*(d-1)+1 = " + std::to_string(rank_expected));
    return report;
}

}  // namespace

ProtocolInstance build_states(MubSet mubs, OrthogonalArray oa, Tolerance tol,
                              std::size_t row_cap) {
    require_valid(tol);
    check_shape(mubs);
    if (oa.d != mubs.d || oa.k != mubs.k) {
        throw std::invalid_argument("build_states: OA is (k=" + std::to_string(oa.k) + ",d=" +
                                    std::to_string(oa.d) + ") but MUB set is (k=" +
                                    std::to_string(mubs.k) + ",d=" + std::to_string(mubs.d) + ")");
    }
    if (oa.rows.size() != oa.expected_rows()) {
        throw std::invalid_argument("build_states: OA has " + std::to_string(oa.rows.size()) +
                                    " rows, expected n*d^2 = " +
                                    std::to_string(oa.expected_rows()));
    }
    if (oa.expected_rows() > row_cap) {
        throw std::invalid_argument("build_states: n*d^2 = " + std::to_string(oa.expected_rows()) +
                                    " exceeds row cap " + std::to_string(row_cap));
    }

    ProtocolInstance inst;
    inst.d = mubs.d;
    inst.k = mubs.k;
    inst.n = oa.n;
    inst.d_prime = oa.n * oa.d;
    inst.tol = tol;

    const std::size_t d = inst.d;
    const std::size_t N = inst.dim();

    inst.phi = CVector(N);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i) {
        inst.phi[i * d + i] = scale;
    }

    // Post-measurement states conj(|A,a>) (x) |A,a>, supported on the first
    // d extended-side coordinates.
    inst.phi_post.resize(inst.k);
    for (std::size_t A = 0; A < inst.k; ++A) {
        inst.phi_post[A].reserve(d);
        for (std::size_t a = 0; a < d; ++a) {
            const CVector& v = mubs.bases[A][a];
            CVector state(N);
            for (std::size_t i = 0; i < d; ++i) {
                const cplx ci = std::conj(v[i]);
                for (std::size_t j = 0; j < d; ++j) {
                    state[i * d + j] = ci * v[j];
                }
            }
            inst.phi_post[A].push_back(std::move(state));
        }
    }

    inst.phi_hat = hat_family(inst.phi_post, d);
    inst.mubs = std::move(mubs);
    inst.oa = std::move(oa);

    // Check the state-level invariants before completing the basis, so a bad
    // MUB set surfaces as a report instead of a completion error.
    auto pre_report = verify_states(inst, tol);
    if (!pre_report.pass()) {
        throw VerificationError("build_states: state invariants failed\n" + pre_report.summary());
    }

    const auto seeds = hat_list(inst.phi_hat, inst.phi, d);
    std::vector<CVector> full;
    try {
        full = gram_schmidt_complete(seeds, N, tol);
    } catch (const std::invalid_argument& e) {
        throw VerificationError(std::string("build_states: completion failed: ") + e.what());
    }
    inst.b_basis.assign(full.begin() + static_cast<std::ptrdiff_t>(seeds.size()), full.end());

    auto report = verify_instance(inst, tol);
    if (!report.pass()) {
        throw VerificationError("build_states: state invariants failed\n" + report.summary());
    }
    return inst;
}

VerificationReport verify_instance(const ProtocolInstance& inst, Tolerance tol) {
    require_valid(tol);
    VerificationReport report = verify_states(inst, tol);

    const double e_expected = static_cast<double>(inst.b_dim());
    report.add("state.b_dim",
               std::abs(static_cast<double>(inst.b_basis.size()) - e_expected), 0.0,
               std::to_string(inst.b_basis.size()) + " vs n*d^2-k*(d-1)-1 = " +
                   std::to_string(inst.b_dim()));

    auto b_on = is_orthonormal(inst.b_basis, tol);
    report.add("state.b_orthonormal", b_on.residual, tol.eps, b_on.detail);

    double worst = 0.0;
    for (const auto& xi : inst.b_basis) {
        for (std::size_t A = 0; A < inst.k; ++A) {
            for (std::size_t a = 0; a < inst.d; ++a) {
                worst = std::max(worst, std::abs(inner(xi, inst.phi_post[A][a])));
            }
        }
    }
    report.add("state.b_perp_states", worst, tol.eps);
    return report;
}

HMatrix h_from_oa(const OrthogonalArray& oa) {
    if (oa.rows.size() != oa.expected_rows()) {
        throw std::invalid_argument("h_from_oa: OA has " + std::to_string(oa.rows.size()) +
                                    " rows, expected " + std::to_string(oa.expected_rows()));
    }
    HMatrix h;
    h.d = oa.d;
    h.k = oa.k;
    h.d_prime = oa.n * oa.d;
    h.mat = CMatrix(oa.expected_rows(), oa.k * oa.d);
    const double value = 1.0 / std::sqrt(static_cast<double>(oa.n * oa.d));
    for (std::size_t I = 0; I < oa.expected_rows(); ++I) {
        for (std::size_t A = 0; A < oa.k; ++A) {
            h.mat.at(I, A * oa.d + static_cast<std::size_t>(oa.at(I, A))) = value;
        }
    }
    return h;
}

VerificationReport verify_h(const HMatrix& h, const OrthogonalArray& estimation, Tolerance tol) {
    require_valid(tol);
    const std::size_t N = h.d * h.d_prime;
    if (h.mat.rows() != N || h.mat.cols() != h.k * h.d) {
        throw std::invalid_argument("verify_h: H is " + std::to_string(h.mat.rows()) + "x" +
                                    std::to_string(h.mat.cols()) + ", expected " +
                                    std::to_string(N) + "x" + std::to_string(h.k * h.d));
    }
    if (estimation.rows.size() != N || estimation.k != h.k || estimation.d != h.d) {
        throw std::invalid_argument("verify_h: estimation table shape mismatch");
    }

    VerificationReport report;

    // Zero pattern: H(I;A,a) must vanish wherever s(I,A) != a.
    double worst = 0.0;
    std::string where;
    for (std::size_t I = 0; I < N; ++I) {
        for (std::size_t A = 0; A < h.k; ++A) {
            const auto s = static_cast<std::size_t>(estimation.at(I, A));
            for (std::size_t a = 0; a < h.d; ++a) {
                if (a == s) continue;
                const double r = std::abs(h.mat.at(I, A * h.d + a));
                if (r > worst) {
                    worst = r;
                    where = "worst at " + idx3(I, A, a);
                }
            }
        }
    }
    report.add("h.zero_pattern", worst, tol.eps, where);

    // Gram condition on the columns.
    const CMatrix g = matmul(adjoint(h.mat), h.mat);
    const double inv_d = 1.0 / static_cast<double>(h.d);
    worst = 0.0;
    where.clear();
    for (std::size_t A = 0; A < h.k; ++A) {
        for (std::size_t a = 0; a < h.d; ++a) {
            for (std::size_t B = 0; B < h.k; ++B) {
                for (std::size_t b = 0; b < h.d; ++b) {
                    const double target = (A == B) ? ((a == b) ? 1.0 : 0.0) : inv_d;
                    const double r = std::abs(g.at(A * h.d + a, B * h.d + b) - target);
                    if (r > worst) {
                        worst = r;
                        where = "worst at (A=" + std::to_string(A) + ",a=" + std::to_string(a) +
                                ",A'=" + std::to_string(B) + ",a'=" + std::to_string(b) + ")";
                    }
                }
            }
        }
    }
    report.add("h.gram", worst, tol.eps, where);
    return report;
}

std::vector<CVector> alice_basis_general(const ProtocolInstance& inst, const HMatrix& h) {
    auto h_report = verify_h(h, inst.oa, inst.tol);
    if (!h_report.pass()) {
        throw VerificationError("alice_basis_general: H certificate invalid\n" +
                                h_report.summary());
    }
    const std::size_t d = inst.d;
    const std::size_t N = inst.dim();

    // Column vectors of H as a [k][d] family living in the outcome space.
    std::vector<std::vector<CVector>> columns(inst.k);
    for (std::size_t A = 0; A < inst.k; ++A) {
        for (std::size_t a = 0; a < d; ++a) {
            CVector col(N);
            for (std::size_t I = 0; I < N; ++I) {
                col[I] = h.mat.at(I, A * d + a);
            }
            columns[A].push_back(std::move(col));
        }
    }
    const auto column_hats = hat_family(columns, d);
    const auto psi_seeds = hat_list(column_hats, column_hats[0][0], d);
    const auto psi_full = gram_schmidt_complete(psi_seeds, N, inst.tol);
    const auto phi_full_seeds = hat_list(inst.phi_hat, inst.phi, d);

    // phi side: seeds then the instance's B basis, in completion order.
    std::vector<CVector> phi_full = phi_full_seeds;
    phi_full.insert(phi_full.end(), inst.b_basis.begin(), inst.b_basis.end());
    if (phi_full.size() != N) {
        throw VerificationError("alice_basis_general: domain basis has " +
                                std::to_string(phi_full.size()) + " vectors, expected " +
                                std::to_string(N));
    }

    // |I> = U^dagger |I>> = sum_t conj(psi_t[I]) phi_t.
    std::vector<CVector> basis;
    basis.reserve(N);
    for (std::size_t I = 0; I < N; ++I) {
        CVector v(N);
        for (std::size_t t = 0; t < N; ++t) {
            v += std::conj(psi_full[t][I]) * phi_full[t];
        }
        basis.push_back(std::move(v));
    }

    ProtocolInstance with_basis = inst;
    with_basis.alice_basis = basis;
    auto report = verify_alice_basis(with_basis, h);
    if (!report.pass()) {
        throw VerificationError("alice_basis_general: postconditions failed\n" +
                                report.summary());
    }
    return basis;
}

std::vector<CVector> alice_basis_formula(const ProtocolInstance& inst) {
    const HMatrix h = h_from_oa(inst.oa);
    const auto general = alice_basis_general(inst, h);

    const std::size_t d = inst.d;
    const std::size_t N = inst.dim();
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(inst.n));
    const double phi_coeff = static_cast<double>(inst.k - 1) / static_cast<double>(d);

    std::vector<CVector> basis;
    basis.reserve(N);
    double worst = 0.0;
    for (std::size_t I = 0; I < N; ++I) {
        CVector i_prime(N);
        for (std::size_t A = 0; A < inst.k; ++A) {
            i_prime += inst.phi_post[A][static_cast<std::size_t>(inst.oa.at(I, A))];
        }
        i_prime *= inv_sqrt_d;
        i_prime -= phi_coeff * inst.phi;

        CVector v = inv_sqrt_n * i_prime;
        for (const auto& xi : inst.b_basis) {
            v += inner(xi, general[I]) * xi;
        }
        for (std::size_t x = 0; x < N; ++x) {
            worst = std::max(worst, std::abs(v[x] - general[I][x]));
        }
        basis.push_back(std::move(v));
    }
    if (worst > inst.tol.eps) {
        throw VerificationError(
            "alice_basis_formula: explicit formula disagrees with the general construction, "
            "max entry deviation " + std::to_string(worst));
    }
    return basis;
}

std::vector<CVector> alice_basis_trivial_oa(const ProtocolInstance& inst) {
    const std::size_t d = inst.d;
    const std::size_t k = inst.k;
    const std::size_t N = inst.dim();

    // Demand the all-tuples array: digit A of I in column A.
    {
        std::size_t expect_n = 1;
        for (std::size_t i = 0; i + 2 < k; ++i) expect_n *= d;
        if (inst.n != expect_n) {
            throw std::invalid_argument("alice_basis_trivial_oa: OA index n = " +
                                        std::to_string(inst.n) + " is not d^(k-2)");
        }
        for (std::size_t I = 0; I < N; ++I) {
            std::size_t t = I;
            for (std::size_t A = 0; A < k; ++A) {
                if (static_cast<std::size_t>(inst.oa.at(I, A)) != t % d) {
                    throw std::invalid_argument(
                        "alice_basis_trivial_oa: OA is not the all-tuples array at " +
                        idx3(I, A, t % d));
                }
                t /= d;
            }
        }
    }

    // B basis: for k = d+1 the leftover subspace is exactly the extended-side
    // block i >= d; verify that against the hat-family span instead of
    // assuming it. Otherwise reuse the instance's completion basis.
    std::vector<CVector> xi;
    if (k == d + 1) {
        for (std::size_t i = d; i < inst.d_prime; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                xi.push_back(CVector::basis(N, i * d + j));
            }
        }
        if (xi.size() != inst.b_dim()) {
            throw VerificationError("alice_basis_trivial_oa: block basis size " +
                                    std::to_string(xi.size()) + " != dim B = " +
                                    std::to_string(inst.b_dim()));
        }
        double worst = 0.0;
        for (const auto& v : xi) {
            worst = std::max(worst, std::abs(inner(v, inst.phi)));
            for (std::size_t A = 0; A < k; ++A) {
                for (std::size_t j = 1; j < d; ++j) {
                    worst = std::max(worst, std::abs(inner(v, inst.phi_hat[A][j])));
                }
            }
        }
        if (worst > inst.tol.eps) {
            throw VerificationError(
                "alice_basis_trivial_oa: standard block not orthogonal to the hat span, "
                "residual " + std::to_string(worst));
        }
    } else {
        xi = inst.b_basis;
    }
    const std::size_t e = xi.size();

    // Theta: ascending enumeration of {J : at least two nonzero digits}.
    std::vector<std::size_t> theta;
    theta.reserve(e);
    for (std::size_t J = 0; J < N; ++J) {
        std::size_t nonzero = 0;
        std::size_t t = J;
        for (std::size_t A = 0; A < k; ++A) {
            if (t % d != 0) ++nonzero;
            t /= d;
        }
        if (nonzero >= 2) theta.push_back(J);
    }
    if (theta.size() != e) {
        throw VerificationError("alice_basis_trivial_oa: " + std::to_string(theta.size()) +
                                " multi-digit indices vs dim B = " + std::to_string(e));
    }

    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    const double lead = 1.0 / std::sqrt(static_cast<double>(inst.n));  // n = d^(k-2)
    const double tail = 1.0 / std::sqrt(static_cast<double>(N));
    const double phi_coeff = static_cast<double>(k - 1) / static_cast<double>(d);

    std::vector<CVector> basis;
    basis.reserve(N);
    std::vector<std::size_t> digits(k);
    for (std::size_t I = 0; I < N; ++I) {
        std::size_t t = I;
        for (std::size_t A = 0; A < k; ++A) {
            digits[A] = t % d;
            t /= d;
        }
        CVector i_prime(N);
        for (std::size_t A = 0; A < k; ++A) {
            i_prime += inst.phi_post[A][digits[A]];
        }
        i_prime *= inv_sqrt_d;
        i_prime -= phi_coeff * inst.phi;

        CVector v = lead * i_prime;
        for (std::size_t b = 0; b < e; ++b) {
            long long phase = 0;
            std::size_t J = theta[b];
            for (std::size_t A = 0; A < k; ++A) {
                phase -= static_cast<long long>(digits[A]) * static_cast<long long>(J % d);
                J /= d;
            }
            v += (tail * unit_root_pow(d, phase)) * xi[b];
        }
        basis.push_back(std::move(v));
    }

    ProtocolInstance with_basis = inst;
    with_basis.alice_basis = basis;
    auto report = verify_alice_basis(with_basis, h_from_oa(inst.oa));
    if (!report.pass()) {
        throw VerificationError("alice_basis_trivial_oa: postconditions failed\n" +
                                report.summary());
    }
    return basis;
}

VerificationReport verify_alice_basis(const ProtocolInstance& inst, const HMatrix& h) {
    require_basis(inst, "verify_alice_basis");
    const Tolerance tol = inst.tol;
    VerificationReport report;

    report.add("alice.count",
               static_cast<double>(inst.alice_basis.size() > inst.dim()
                                       ? inst.alice_basis.size() - inst.dim()
                                       : inst.dim() - inst.alice_basis.size()),
               0.0);

    auto on = is_orthonormal(inst.alice_basis, tol);
    report.add("alice.orthonormal", on.residual, tol.eps, on.detail);

    double worst_h = 0.0;
    double worst_survival = 0.0;
    std::string where_h, where_survival;
    for (std::size_t I = 0; I < inst.dim(); ++I) {
        for (std::size_t A = 0; A < inst.k; ++A) {
            const auto s = static_cast<std::size_t>(inst.oa.at(I, A));
            for (std::size_t a = 0; a < inst.d; ++a) {
                const cplx overlap = inner(inst.alice_basis[I], inst.phi_post[A][a]);
                const double rh = std::abs(overlap - h.mat.at(I, A * inst.d + a));
                if (rh > worst_h) {
                    worst_h = rh;
                    where_h = "worst at " + idx3(I, A, a);
                }
                if (a != s) {
                    const double rs = std::abs(overlap);
                    if (rs > worst_survival) {
                        worst_survival = rs;
                        where_survival = "worst at " + idx3(I, A, a);
                    }
                }
            }
        }
    }
    report.add("alice.h_match", worst_h, tol.eps, where_h);
    report.add("alice.survival", worst_survival, tol.eps, where_survival);
    return report;
}

std::vector<CMatrix> povm_compress(const ProtocolInstance& inst) {
    require_basis(inst, "povm_compress");
    const std::size_t dd = inst.d * inst.d;
    std::vector<CMatrix> povm;
    povm.reserve(inst.dim());
    for (const auto& v : inst.alice_basis) {
        // Compression through the natural embedding keeps the extended-side
        // coordinates below d, i.e. the first d^2 flat components.
        CVector w(dd);
        for (std::size_t x = 0; x < dd; ++x) w[x] = v[x];
        povm.push_back(outer(w, w));
    }
    auto report = verify_povm(inst, povm, inst.tol);
    if (!report.pass()) {
        throw VerificationError("povm_compress: POVM invalid\n" + report.summary());
    }
    return povm;
}

VerificationReport verify_povm(const ProtocolInstance& inst, const std::vector<CMatrix>& povm,
                               Tolerance tol) {
    require_valid(tol);
    const std::size_t dd = inst.d * inst.d;
    VerificationReport report;

    CMatrix sum(dd, dd);
    for (const auto& m : povm) {
        if (m.rows() != dd || m.cols() != dd) {
            throw std::invalid_argument("verify_povm: element is " + std::to_string(m.rows()) +
                                        "x" + std::to_string(m.cols()) + ", expected " +
                                        std::to_string(dd) + "x" + std::to_string(dd));
        }
        for (std::size_t r = 0; r < dd; ++r) {
            for (std::size_t c = 0; c < dd; ++c) {
                sum.at(r, c) += m.at(r, c);
            }
        }
    }
    double completeness = 0.0;
    for (std::size_t r = 0; r < dd; ++r) {
        for (std::size_t c = 0; c < dd; ++c) {
            const cplx target = (r == c) ? cplx{1.0} : cplx{};
            completeness = std::max(completeness, std::abs(sum.at(r, c) - target));
        }
    }
    report.add("povm.completeness", completeness, tol.eps);

    double worst_neg = 0.0;
    std::string where;
    for (std::size_t i = 0; i < povm.size(); ++i) {
        const auto psd = is_psd(povm[i], tol);
        if (psd.residual > worst_neg) {
            worst_neg = psd.residual;
            where = "element " + std::to_string(i) + ", " + psd.detail;
        }
    }
    report.add("povm.positivity", worst_neg, tol.eps, where);
    return report;
}

SimulationReport success_exact(const ProtocolInstance& inst, int guess_shift) {
    require_basis(inst, "success_exact");
    SimulationReport out;
    out.mode = SimulationReport::Mode::exact;
    out.guess_shift = guess_shift;
    out.success.assign(inst.k, std::vector<double>(inst.d, 0.0));
    for (std::size_t A = 0; A < inst.k; ++A) {
        for (std::size_t I = 0; I < inst.dim(); ++I) {
            const std::size_t guess = shifted_guess(inst.oa, I, A, guess_shift);
            out.success[A][guess] += std::norm(inner(inst.alice_basis[I], inst.phi_post[A][guess]));
        }
    }
    out.worst = 1.0;
    double range_residual = 0.0;
    for (const auto& row : out.success) {
        for (double p : row) {
            out.worst = std::min(out.worst, p);
            range_residual = std::max(range_residual, std::max(-p, p - 1.0));
        }
    }
    out.checks.add("success.range", std::max(0.0, range_residual), inst.tol.eps,
                   "probabilities within [0,1]");
    return out;
}

SimulationReport simulate_rounds(const ProtocolInstance& inst, std::uint64_t rounds,
                                 std::uint64_t seed, int guess_shift) {
    require_basis(inst, "simulate_rounds");
    if (rounds < 1) {
        throw std::invalid_argument("simulate_rounds: rounds must be >= 1");
    }
    const std::size_t N = inst.dim();

    // Outcome distributions are round-independent; precompute them all.
    // p(a | A) = |(1 (x) P_{A,a}) Phi|^2, evaluated from the components.
    std::vector<std::vector<double>> a_probs(inst.k, std::vector<double>(inst.d, 0.0));
    for (std::size_t A = 0; A < inst.k; ++A) {
        for (std::size_t a = 0; a < inst.d; ++a) {
            double p = 0.0;
            for (std::size_t i = 0; i < inst.d_prime; ++i) {
                cplx amp = 0.0;
                for (std::size_t j = 0; j < inst.d; ++j) {
                    amp += std::conj(inst.mubs.bases[A][a][j]) * inst.phi[i * inst.d + j];
                }
                p += std::norm(amp);
            }
            a_probs[A][a] = p;
        }
    }
    // p(I | A,a) = |<I|Phi_{A,a}>|^2 after the collapse.
    std::vector<std::vector<std::vector<double>>> i_probs(
        inst.k, std::vector<std::vector<double>>(inst.d, std::vector<double>(N, 0.0)));
    for (std::size_t A = 0; A < inst.k; ++A) {
        for (std::size_t a = 0; a < inst.d; ++a) {
            for (std::size_t I = 0; I < N; ++I) {
                i_probs[A][a][I] = std::norm(inner(inst.alice_basis[I], inst.phi_post[A][a]));
            }
        }
    }
    const std::vector<double> basis_probs(inst.k, 1.0 / static_cast<double>(inst.k));

    SimulationReport out;
    out.mode = SimulationReport::Mode::sampled;
    out.guess_shift = guess_shift;
    out.rounds = rounds;
    out.seed = seed;
    out.trials.assign(inst.k, std::vector<std::uint64_t>(inst.d, 0));
    out.wins.assign(inst.k, std::vector<std::uint64_t>(inst.d, 0));

    std::mt19937_64 rng(seed);
    for (std::uint64_t round = 0; round < rounds; ++round) {
        const std::size_t A = sample_index(basis_probs, uniform_unit(rng));
        const std::size_t a = sample_index(a_probs[A], uniform_unit(rng));
        const std::size_t I = sample_index(i_probs[A][a], uniform_unit(rng));
        const std::size_t guess = shifted_guess(inst.oa, I, A, guess_shift);
        ++out.trials[A][a];
        if (guess == a) {
            ++out.wins[A][a];
            ++out.total_wins;
        }
    }

    // Empirical rates; cells that never came up carry no evidence and are
    // reported as 1 with a zero trial count.
    out.success.assign(inst.k, std::vector<double>(inst.d, 1.0));
    out.worst = 1.0;
    for (std::size_t A = 0; A < inst.k; ++A) {
        for (std::size_t a = 0; a < inst.d; ++a) {
            if (out.trials[A][a] > 0) {
                out.success[A][a] = static_cast<double>(out.wins[A][a]) /
                                    static_cast<double>(out.trials[A][a]);
                out.worst = std::min(out.worst, out.success[A][a]);
            }
        }
    }
    out.checks.add("sample.rounds", 0.0, 0.0, std::to_string(rounds) + " rounds, seed " +
                                                  std::to_string(seed));
    return out;
}

}  // namespace meanking
