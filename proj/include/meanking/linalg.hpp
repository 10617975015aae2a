#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "meanking/report.hpp"

namespace meanking {

using cplx = std::complex<double>;

// Dense complex vector with value semantics. Entries are unitless amplitudes.
class CVector {
  public:
    CVector() = default;
    explicit CVector(std::size_t dim) : entries_(dim) {}
    CVector(std::initializer_list<cplx> entries) : entries_(entries) {}
    explicit CVector(std::vector<cplx> entries) : entries_(std::move(entries)) {}

    // Standard basis vector e_index in C^dim.
    static CVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return entries_.size(); }
    cplx& operator[](std::size_t i) { return entries_[i]; }
    const cplx& operator[](std::size_t i) const { return entries_[i]; }

    auto begin() { return entries_.begin(); }
    auto end() { return entries_.end(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    bool all_finite() const;

    CVector& operator+=(const CVector& rhs);
    CVector& operator-=(const CVector& rhs);
    CVector& operator*=(cplx scale);

  private:
    std::vector<cplx> entries_;
};

CVector operator+(CVector lhs, const CVector& rhs);
CVector operator-(CVector lhs, const CVector& rhs);
CVector operator*(cplx scale, CVector v);

// Inner product, conjugate-linear in the first argument.
cplx inner(const CVector& u, const CVector& v);

double norm(const CVector& u);

// Kronecker product; entry (i * v.dim + j) = u_i * v_j.  The flat-index
// convention everywhere in this project is (extended-system index, system
// index) -> extended * dim + index.
CVector tensor(const CVector& u, const CVector& v);

// Dense complex matrix, row-major storage.
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static CMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const cplx& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    const std::vector<cplx>& data() const { return a_; }
    bool all_finite() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> a_;
};

CMatrix adjoint(const CMatrix& m);
CMatrix matmul(const CMatrix& a, const CMatrix& b);

// |u><v| as a dim(u) x dim(v) matrix.
CMatrix outer(const CVector& u, const CVector& v);

// Gram matrix G(i,j) = <v_i|v_j>.
CMatrix gram(const std::vector<CVector>& vs);

// Eigenvalues of a Hermitian matrix, ascending. The input is Hermitized
// ((M + M^dagger)/2) before solving.
std::vector<double> hermitian_eigenvalues(const CMatrix& m);
double min_hermitian_eigenvalue(const CMatrix& m);

// Number of eigenvalues of gram(vs) above a relative threshold; the dimension
// of span{vs}.
std::size_t span_rank(const std::vector<CVector>& vs);

// Extends `given` (pairwise orthonormal within tol) to a full orthonormal
// basis of C^ambient_dim. The first vectors of the result are exactly
// `given`; completion vectors come from projecting standard basis vectors
// e_0, e_1, ... in index order and keeping residuals with norm above
// max(tol.eps, 1e-8), normalized. Deterministic by construction.
std::vector<CVector> gram_schmidt_complete(const std::vector<CVector>& given,
                                           std::size_t ambient_dim, Tolerance tol = {});

// Residual checks. is_psd requires a square, Hermitian-within-tol input and
// reports the min eigenvalue in its detail (residual = max(0, -min_eig)).
CheckResult is_orthonormal(const std::vector<CVector>& vs, Tolerance tol = {});
CheckResult is_unitary(const CMatrix& m, Tolerance tol = {});
CheckResult is_psd(const CMatrix& m, Tolerance tol = {});

// exp(2*pi*i * (exponent mod order) / order); exponent may be negative.
cplx unit_root_pow(std::size_t order, long long exponent);

}  // namespace meanking
