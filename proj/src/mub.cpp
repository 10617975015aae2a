#include "meanking/mub.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "meanking/field.hpp"

namespace meanking {

void check_shape(const MubSet& m) {
    if (m.d < 2) {
        throw std::invalid_argument("MubSet: level d must be >= 2, got " + std::to_string(m.d));
    }
    if (m.k < 2 || m.k > m.d + 1) {
        throw std::invalid_argument("MubSet: number of bases k = " + std::to_string(m.k) +
                                    " outside 2..d+1 for d = " + std::to_string(m.d));
    }
    if (m.bases.size() != m.k) {
        throw std::invalid_argument("MubSet: ragged data, " + std::to_string(m.bases.size()) +
                                    " bases present but k = " + std::to_string(m.k));
    }
    for (std::size_t A = 0; A < m.k; ++A) {
        if (m.bases[A].size() != m.d) {
            throw std::invalid_argument("MubSet: basis " + std::to_string(A) + " has " +
                                        std::to_string(m.bases[A].size()) + " vectors, expected " +
                                        std::to_string(m.d));
        }
        for (std::size_t a = 0; a < m.d; ++a) {
            if (m.bases[A][a].dim() != m.d) {
                throw std::invalid_argument("MubSet: vector (" + std::to_string(A) + "," +
                                            std::to_string(a) + ") has dim " +
                                            std::to_string(m.bases[A][a].dim()) + ", expected " +
                                            std::to_string(m.d));
            }
            if (!m.bases[A][a].all_finite()) {
                throw std::invalid_argument("MubSet: vector (" + std::to_string(A) + "," +
                                            std::to_string(a) + ") has non-finite entries");
            }
        }
    }
}

MubSet standard_fourier_mubs(std::size_t d) {
    if (d < 2) {
        throw std::invalid_argument("standard_fourier_mubs: d must be >= 2, got " +
                                    std::to_string(d));
    }
    MubSet m;
    m.d = d;
    m.k = 2;
    m.bases.resize(2);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t a = 0; a < d; ++a) {
        m.bases[0].push_back(CVector::basis(d, a));
        CVector v(d);
        for (std::size_t i = 0; i < d; ++i) {
            v[i] = scale * unit_root_pow(d, static_cast<long long>(i * a));
        }
        m.bases[1].push_back(v);
    }
    return m;
}

MubSet prime_power_mubs(unsigned q) {
    const auto pm = factor_prime_power(q);
    if (!pm) {
        throw std::invalid_argument("prime_power_mubs: " + std::to_string(q) +
                                    " is not a prime power");
    }
    const auto [p, m_deg] = *pm;

    MubSet out;
    out.d = q;

    if (q == 2) {
        // Z, X, Y eigenbases.
        const double s = 1.0 / std::sqrt(2.0);
        out.k = 3;
        out.bases = {
            {CVector{1.0, 0.0}, CVector{0.0, 1.0}},
            {CVector{s, s}, CVector{s, -s}},
            {CVector{s, cplx(0.0, s)}, CVector{s, cplx(0.0, -s)}},
        };
        return out;
    }
    if (p == 2) {
        throw std::invalid_argument("prime_power_mubs: even prime power q = " + std::to_string(q) +
                                    " unsupported; import a MUB set from file instead");
    }

    const FieldSpec field = FieldSpec::make(p, m_deg);
    const double scale = 1.0 / std::sqrt(static_cast<double>(q));
    out.k = q + 1;
    out.bases.resize(out.k);
    for (unsigned a = 0; a < q; ++a) {
        out.bases[0].push_back(CVector::basis(q, a));
    }
    // Basis A (an element of GF(q)) has components
    // omega_p^trace(A*i^2 + a*i) / sqrt(q) over i in GF(q).
    for (unsigned A = 0; A < q; ++A) {
        for (unsigned a = 0; a < q; ++a) {
            CVector v(q);
            for (unsigned i = 0; i < q; ++i) {
                const unsigned arg = field.add(field.mul(A, field.mul(i, i)), field.mul(a, i));
                v[i] = scale * unit_root_pow(p, field.trace(arg));
            }
            out.bases[1 + A].push_back(v);
        }
    }
    return out;
}

VerificationReport verify_mubs(const MubSet& m, Tolerance tol) {
    require_valid(tol);
    check_shape(m);
    const double inv_d = 1.0 / static_cast<double>(m.d);
    double worst = 0.0;
    std::string where;
    for (std::size_t A = 0; A < m.k; ++A) {
        for (std::size_t a = 0; a < m.d; ++a) {
            for (std::size_t B = A; B < m.k; ++B) {
                for (std::size_t b = 0; b < m.d; ++b) {
                    const double overlap = std::norm(inner(m.bases[A][a], m.bases[B][b]));
                    const double target =
                        (A == B) ? ((a == b) ? 1.0 : 0.0) : inv_d;
                    const double r = std::abs(overlap - target);
                    if (r > worst) {
                        worst = r;
                        where = "worst quadruple (A=" + std::to_string(A) + ",a=" +
                                std::to_string(a) + ",A'=" + std::to_string(B) + ",a'=" +
                                std::to_string(b) + ")";
                    }
                }
            }
        }
    }
    VerificationReport report;
    report.add("mub.unbiasedness", worst, tol.eps, where);
    return report;
}

}  // namespace meanking
