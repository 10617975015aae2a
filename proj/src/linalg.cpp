#include "meanking/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace meanking {

namespace {

std::string dim_pair(std::size_t a, std::size_t b) {
    return "(" + std::to_string(a) + " vs " + std::to_string(b) + ")";
}

void require_same_dim(const CVector& u, const CVector& v, const char* op) {
    if (u.dim() != v.dim()) {
        throw std::invalid_argument(std::string(op) + ": dimension mismatch " +
                                    dim_pair(u.dim(), v.dim()));
    }
}

using EigenMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

EigenMatrix hermitize(const CMatrix& m) {
    Eigen::Map<const EigenMatrix> view(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                                       static_cast<Eigen::Index>(m.cols()));
    return 0.5 * (view + view.adjoint());
}

}  // namespace

CVector CVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw std::invalid_argument("basis index " + std::to_string(index) +
                                    " out of range for dim " + std::to_string(dim));
    }
    CVector v(dim);
    v[index] = 1.0;
    return v;
}

bool CVector::all_finite() const {
    for (const auto& z : entries_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

CVector& CVector::operator+=(const CVector& rhs) {
    require_same_dim(*this, rhs, "add");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs[i];
    return *this;
}

CVector& CVector::operator-=(const CVector& rhs) {
    require_same_dim(*this, rhs, "subtract");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs[i];
    return *this;
}

CVector& CVector::operator*=(cplx scale) {
    for (auto& z : entries_) z *= scale;
    return *this;
}

CVector operator+(CVector lhs, const CVector& rhs) { return lhs += rhs; }
CVector operator-(CVector lhs, const CVector& rhs) { return lhs -= rhs; }
CVector operator*(cplx scale, CVector v) { return v *= scale; }

cplx inner(const CVector& u, const CVector& v) {
    require_same_dim(u, v, "inner");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) acc += std::conj(u[i]) * v[i];
    return acc;
}

double norm(const CVector& u) {
    double acc = 0.0;
    for (const auto& z : u) acc += std::norm(z);
    return std::sqrt(acc);
}

CVector tensor(const CVector& u, const CVector& v) {
    if (u.dim() == 0 || v.dim() == 0) {
        throw std::invalid_argument("tensor: factors must have dim >= 1");
    }
    CVector out(u.dim() * v.dim());
    for (std::size_t i = 0; i < u.dim(); ++i) {
        for (std::size_t j = 0; j < v.dim(); ++j) {
            out[i * v.dim() + j] = u[i] * v[j];
        }
    }
    return out;
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

bool CMatrix::all_finite() const {
    for (const auto& z : a_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

CMatrix adjoint(const CMatrix& m) {
    CMatrix out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out.at(c, r) = std::conj(m.at(r, c));
        }
    }
    return out;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: inner dimension mismatch " +
                                    dim_pair(a.cols(), b.rows()));
    }
    CMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx f = a.at(r, k);
            if (f == cplx{}) continue;
            for (std::size_t c = 0; c < b.cols(); ++c) {
                out.at(r, c) += f * b.at(k, c);
            }
        }
    }
    return out;
}

CMatrix outer(const CVector& u, const CVector& v) {
    CMatrix out(u.dim(), v.dim());
    for (std::size_t r = 0; r < u.dim(); ++r) {
        for (std::size_t c = 0; c < v.dim(); ++c) {
            out.at(r, c) = u[r] * std::conj(v[c]);
        }
    }
    return out;
}

CMatrix gram(const std::vector<CVector>& vs) {
    CMatrix g(vs.size(), vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = 0; j < vs.size(); ++j) {
            g.at(i, j) = inner(vs[i], vs[j]);
        }
    }
    return g;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("hermitian_eigenvalues: matrix not square " +
                                    dim_pair(m.rows(), m.cols()));
    }
    if (m.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<EigenMatrix> solver(hermitize(m),
                                                      Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

double min_hermitian_eigenvalue(const CMatrix& m) {
    auto ev = hermitian_eigenvalues(m);
    if (ev.empty()) throw std::invalid_argument("min_hermitian_eigenvalue: empty matrix");
    return ev.front();
}

std::size_t span_rank(const std::vector<CVector>& vs) {
    if (vs.empty()) return 0;
    auto ev = hermitian_eigenvalues(gram(vs));
    const double scale = std::max(1.0, ev.back());
    std::size_t rank = 0;
    for (double v : ev) {
        if (v > 1e-7 * scale) ++rank;
    }
    return rank;
}

std::vector<CVector> gram_schmidt_complete(const std::vector<CVector>& given,
                                           std::size_t ambient_dim, Tolerance tol) {
    require_valid(tol);
    if (given.size() > ambient_dim) {
        throw std::invalid_argument("gram_schmidt_complete: " + std::to_string(given.size()) +
                                    " seed vectors exceed ambient dim " +
                                    std::to_string(ambient_dim));
    }
    for (const auto& v : given) {
        if (v.dim() != ambient_dim) {
            throw std::invalid_argument("gram_schmidt_complete: seed dim mismatch " +
                                        dim_pair(v.dim(), ambient_dim));
        }
    }
    for (std::size_t i = 0; i < given.size(); ++i) {
        for (std::size_t j = i; j < given.size(); ++j) {
            const double target = (i == j) ? 1.0 : 0.0;
            const double residual = std::abs(inner(given[i], given[j]) - target);
            if (residual > tol.eps) {
                throw std::invalid_argument(
                    "gram_schmidt_complete: seeds not orthonormal at pair (" +
                    std::to_string(i) + "," + std::to_string(j) + "), residual " +
                    std::to_string(residual));
            }
        }
    }

    const double keep_threshold = std::max(tol.eps, 1e-8);
    std::vector<CVector> out = given;
    for (std::size_t seed = 0; seed < ambient_dim && out.size() < ambient_dim; ++seed) {
        CVector r = CVector::basis(ambient_dim, seed);
        // Two projection passes keep the completion orthogonal to fp accuracy.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& v : out) {
                r -= inner(v, r) * v;
            }
        }
        const double nr = norm(r);
        if (nr > keep_threshold) {
            out.push_back((1.0 / nr) * r);
        }
    }
    if (out.size() != ambient_dim) {
        throw VerificationError("gram_schmidt_complete: could not complete basis, got " +
                                std::to_string(out.size()) + " of " +
                                std::to_string(ambient_dim));
    }
    return out;
}

CheckResult is_orthonormal(const std::vector<CVector>& vs, Tolerance tol) {
    require_valid(tol);
    for (std::size_t i = 1; i < vs.size(); ++i) {
        if (vs[i].dim() != vs[0].dim()) {
            throw std::invalid_argument("is_orthonormal: vector dim mismatch " +
                                        dim_pair(vs[i].dim(), vs[0].dim()));
        }
    }
    CheckResult res{"orthonormal", 0.0, tol.eps, true, ""};
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i; j < vs.size(); ++j) {
            const double target = (i == j) ? 1.0 : 0.0;
            const double r = std::abs(inner(vs[i], vs[j]) - target);
            if (r > res.residual) {
                res.residual = r;
                res.detail = "worst pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
            }
        }
    }
    res.pass = res.residual <= tol.eps;
    return res;
}

CheckResult is_unitary(const CMatrix& m, Tolerance tol) {
    require_valid(tol);
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("is_unitary: matrix not square " +
                                    dim_pair(m.rows(), m.cols()));
    }
    const CMatrix g = matmul(adjoint(m), m);
    CheckResult res{"unitary", 0.0, tol.eps, true, ""};
    for (std::size_t r = 0; r < g.rows(); ++r) {
        for (std::size_t c = 0; c < g.cols(); ++c) {
            const cplx target = (r == c) ? cplx{1.0} : cplx{};
            const double v = std::abs(g.at(r, c) - target);
            if (v > res.residual) {
                res.residual = v;
                res.detail = "worst entry (" + std::to_string(r) + "," + std::to_string(c) + ")";
            }
        }
    }
    res.pass = res.residual <= tol.eps;
    return res;
}

CheckResult is_psd(const CMatrix& m, Tolerance tol) {
    require_valid(tol);
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("is_psd: matrix not square " + dim_pair(m.rows(), m.cols()));
    }
    double herm_residual = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            herm_residual = std::max(herm_residual, std::abs(m.at(r, c) - std::conj(m.at(c, r))));
        }
    }
    if (herm_residual > std::max(tol.eps, 1e-8)) {
        throw std::invalid_argument("is_psd: input not Hermitian within tol, residual " +
                                    std::to_string(herm_residual));
    }
    const double min_eig = min_hermitian_eigenvalue(m);
    CheckResult res;
    res.name = "psd";
    res.residual = std::max(0.0, -min_eig);
    res.tolerance = tol.eps;
    res.pass = min_eig >= -tol.eps;
    res.detail = "min eigenvalue " + std::to_string(min_eig);
    return res;
}

cplx unit_root_pow(std::size_t order, long long exponent) {
    if (order == 0) throw std::invalid_argument("unit_root_pow: order must be positive");
    const long long n = static_cast<long long>(order);
    long long r = exponent % n;
    if (r < 0) r += n;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
    return {std::cos(angle), std::sin(angle)};
}

}  // namespace meanking
