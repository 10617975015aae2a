#pragma once

#include <cmath>
#include <string>

#include "meanking/linalg.hpp"

namespace meanking::test {

inline std::string fixture_path(const std::string& name) {
    return std::string(MEANKING_FIXTURE_DIR) + "/" + name;
}

inline bool close(cplx a, cplx b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

inline double max_entry_diff(const CVector& a, const CVector& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

}  // namespace meanking::test
