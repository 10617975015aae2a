#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "meanking/report.hpp"

namespace meanking {

// Generation and verification refuse arrays larger than this many rows
// unless the caller raises the cap (the CLI honors MEANKING_ROW_CAP).
inline constexpr std::size_t kDefaultRowCap = 100'000;

// An OA_n(k,d): n*d^2 rows over symbols {0..d-1} such that every ordered
// symbol pair appears exactly n times in every ordered pair of distinct
// columns. Row index I is the measurement-outcome label; entry at(I,A)
// doubles as the estimation function s(I,A).
struct OrthogonalArray {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t d = 0;
    std::vector<std::vector<int>> rows;

    std::size_t expected_rows() const { return n * d * d; }
    int at(std::size_t I, std::size_t A) const { return rows[I][A]; }
};

// All k-tuples over {0..d-1}: row I has entry I_A in column A, where
// I = sum_A I_A d^A. Index n = d^(k-2).
OrthogonalArray trivial_oa(std::size_t k, std::size_t d, std::size_t row_cap = kDefaultRowCap);

// OA_1(d+1, d) for prime-power d from the classical complete MOLS family:
// rows enumerate (i,j) in GF(d)^2 lexicographically (canonical encoding) and
// read (i, j, L_1(i,j), ..., L_{d-1}(i,j)) with L_A(i,j) = A*i + j in GF(d).
// Columns 2..d of the result are d-1 mutually orthogonal Latin squares.
OrthogonalArray mols_oa(unsigned d);

// Exact integer verification of the pair-counting property and of the
// per-column symbol counts (n*d each). Entries outside {0..d-1} throw.
VerificationReport verify_oa(const OrthogonalArray& oa, std::size_t row_cap = kDefaultRowCap);

// Text format: first line "OA <n> <k> <d>", then one line per row of k
// space-separated symbols, LF endings, no trailing whitespace.
std::string oa_to_text(const OrthogonalArray& oa);
OrthogonalArray oa_from_text(const std::string& text, std::size_t row_cap = kDefaultRowCap);

void save_oa(const std::string& path, const OrthogonalArray& oa);
OrthogonalArray load_oa(const std::string& path, std::size_t row_cap = kDefaultRowCap);

}  // namespace meanking
