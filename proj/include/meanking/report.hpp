#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace meanking {

// Numerical tolerance used by all verifiers. eps must be >= 0.
struct Tolerance {
    double eps = 1e-9;
};

inline void require_valid(const Tolerance& tol) {
    if (!(tol.eps >= 0.0)) {
        throw std::invalid_argument("tolerance eps must be nonnegative, got " +
                                    std::to_string(tol.eps));
    }
}

// One named invariant check: the worst residual observed, the tolerance it
// was held against, and where the worst case happened.
struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

// Machine-readable record of every invariant check run on an object.
class VerificationReport {
  public:
    void add(CheckResult check) { checks_.push_back(std::move(check)); }

    void add(std::string name, double residual, double tolerance, std::string detail = {}) {
        checks_.push_back(CheckResult{std::move(name), residual, tolerance,
                                      residual <= tolerance, std::move(detail)});
    }

    bool pass() const {
        for (const auto& c : checks_) {
            if (!c.pass) return false;
        }
        return true;
    }

    double max_residual() const {
        double r = 0.0;
        for (const auto& c : checks_) r = std::max(r, c.residual);
        return r;
    }

    const CheckResult* find(std::string_view name) const {
        for (const auto& c : checks_) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }

    const std::vector<CheckResult>& checks() const { return checks_; }

    std::string summary() const {
        std::string out;
        char buf[64];
        for (const auto& c : checks_) {
            out += (c.pass ? "[pass] " : "[FAIL] ");
            std::snprintf(buf, sizeof(buf), ": residual %.3g (tol %.3g)", c.residual, c.tolerance);
            out += c.name + buf;
            if (!c.detail.empty()) out += " " + c.detail;
            out += '\n';
        }
        return out;
    }

  private:
    std::vector<CheckResult> checks_;
};

// Thrown when a construction's postcondition or an invariant check fails.
// Input/usage problems throw std::invalid_argument instead.
class VerificationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace meanking
