#include "meanking/oa.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "meanking/field.hpp"

namespace meanking {

namespace {

// d^e with an overflow/row-cap guard; throws when the count exceeds cap.
std::size_t checked_power(std::size_t d, std::size_t e, std::size_t cap) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < e; ++i) {
        if (out > cap / d) {
            throw std::invalid_argument("row cap exceeded: " + std::to_string(d) + "^" +
                                        std::to_string(e) + " rows > cap " + std::to_string(cap));
        }
        out *= d;
    }
    return out;
}

void check_entries(const OrthogonalArray& oa) {
    for (std::size_t I = 0; I < oa.rows.size(); ++I) {
        if (oa.rows[I].size() != oa.k) {
            throw std::invalid_argument("OA row " + std::to_string(I) + " has " +
                                        std::to_string(oa.rows[I].size()) + " entries, expected " +
                                        std::to_string(oa.k));
        }
        for (std::size_t A = 0; A < oa.k; ++A) {
            const int v = oa.rows[I][A];
            if (v < 0 || static_cast<std::size_t>(v) >= oa.d) {
                throw std::invalid_argument("OA entry out of range at row " + std::to_string(I) +
                                            ", column " + std::to_string(A) + ": " +
                                            std::to_string(v) + " not in 0.." +
                                            std::to_string(oa.d - 1));
            }
        }
    }
}

}  // namespace

OrthogonalArray trivial_oa(std::size_t k, std::size_t d, std::size_t row_cap) {
    if (k < 2) throw std::invalid_argument("trivial_oa: degree k must be >= 2");
    if (d < 2) throw std::invalid_argument("trivial_oa: order d must be >= 2");
    const std::size_t count = checked_power(d, k, row_cap);

    OrthogonalArray oa;
    oa.d = d;
    oa.k = k;
    oa.n = count / (d * d);
    oa.rows.reserve(count);
    for (std::size_t I = 0; I < count; ++I) {
        std::vector<int> row(k);
        std::size_t t = I;
        for (std::size_t A = 0; A < k; ++A) {
            row[A] = static_cast<int>(t % d);
            t /= d;
        }
        oa.rows.push_back(std::move(row));
    }
    return oa;
}

OrthogonalArray mols_oa(unsigned d) {
    const auto pm = factor_prime_power(d);
    if (!pm) {
        throw std::invalid_argument("mols_oa: " + std::to_string(d) + " is not a prime power");
    }
    const FieldSpec field = FieldSpec::make(pm->first, pm->second);

    OrthogonalArray oa;
    oa.d = d;
    oa.k = d + 1;
    oa.n = 1;
    oa.rows.reserve(static_cast<std::size_t>(d) * d);
    for (unsigned i = 0; i < d; ++i) {
        for (unsigned j = 0; j < d; ++j) {
            std::vector<int> row;
            row.reserve(oa.k);
            row.push_back(static_cast<int>(i));
            row.push_back(static_cast<int>(j));
            for (unsigned A = 1; A < d; ++A) {
                row.push_back(static_cast<int>(field.add(field.mul(A, i), j)));
            }
            oa.rows.push_back(std::move(row));
        }
    }
    return oa;
}

VerificationReport verify_oa(const OrthogonalArray& oa, std::size_t row_cap) {
    if (oa.d < 2 || oa.k < 2) {
        throw std::invalid_argument("verify_oa: need d >= 2 and k >= 2, got d = " +
                                    std::to_string(oa.d) + ", k = " + std::to_string(oa.k));
    }
    if (oa.rows.size() > row_cap) {
        throw std::invalid_argument("verify_oa: " + std::to_string(oa.rows.size()) +
                                    " rows exceed cap " + std::to_string(row_cap));
    }
    check_entries(oa);

    VerificationReport report;
    {
        const double shape_residual = oa.rows.size() >= oa.expected_rows()
                                          ? static_cast<double>(oa.rows.size() - oa.expected_rows())
                                          : static_cast<double>(oa.expected_rows() - oa.rows.size());
        report.add("oa.shape", shape_residual, 0.0,
                   std::to_string(oa.rows.size()) + " rows, expected n*d^2 = " +
                       std::to_string(oa.expected_rows()));
    }

    // Pair counting, exact integer form: every ordered symbol pair exactly
    // n times in every pair of distinct columns. The detail names the first
    // violation; the residual is the worst |count - n| overall.
    double worst_pair = 0.0;
    std::string pair_detail;
    std::vector<std::size_t> counts(oa.d * oa.d);
    for (std::size_t A = 0; A < oa.k; ++A) {
        for (std::size_t B = A + 1; B < oa.k; ++B) {
            counts.assign(oa.d * oa.d, 0);
            for (const auto& row : oa.rows) {
                ++counts[static_cast<std::size_t>(row[A]) * oa.d +
                         static_cast<std::size_t>(row[B])];
            }
            for (std::size_t a = 0; a < oa.d; ++a) {
                for (std::size_t b = 0; b < oa.d; ++b) {
                    const std::size_t c = counts[a * oa.d + b];
                    const double r = c >= oa.n ? static_cast<double>(c - oa.n)
                                               : static_cast<double>(oa.n - c);
                    worst_pair = std::max(worst_pair, r);
                    if (r > 0.0 && pair_detail.empty()) {
                        pair_detail = "(A=" + std::to_string(A) + ",A'=" + std::to_string(B) +
                                      ",a=" + std::to_string(a) + ",a'=" + std::to_string(b) +
                                      "): count " + std::to_string(c) + " != " +
                                      std::to_string(oa.n);
                    }
                }
            }
        }
    }
    report.add("oa.pair_counts", worst_pair, 0.0, pair_detail);

    // Each symbol occurs exactly n*d times in every column.
    double worst_col = 0.0;
    std::string col_detail;
    const std::size_t per_symbol = oa.n * oa.d;
    std::vector<std::size_t> col_counts(oa.d);
    for (std::size_t A = 0; A < oa.k; ++A) {
        col_counts.assign(oa.d, 0);
        for (const auto& row : oa.rows) {
            ++col_counts[static_cast<std::size_t>(row[A])];
        }
        for (std::size_t a = 0; a < oa.d; ++a) {
            const std::size_t c = col_counts[a];
            const double r = c >= per_symbol ? static_cast<double>(c - per_symbol)
                                             : static_cast<double>(per_symbol - c);
            worst_col = std::max(worst_col, r);
            if (r > 0.0 && col_detail.empty()) {
                col_detail = "column " + std::to_string(A) + ", symbol " + std::to_string(a) +
                             ": count " + std::to_string(c) + " != " + std::to_string(per_symbol);
            }
        }
    }
    report.add("oa.column_counts", worst_col, 0.0, col_detail);
    return report;
}

std::string oa_to_text(const OrthogonalArray& oa) {
    std::ostringstream out;
    out << "OA " << oa.n << ' ' << oa.k << ' ' << oa.d << '\n';
    for (const auto& row : oa.rows) {
        for (std::size_t A = 0; A < row.size(); ++A) {
            if (A) out << ' ';
            out << row[A];
        }
        out << '\n';
    }
    return out.str();
}

OrthogonalArray oa_from_text(const std::string& text, std::size_t row_cap) {
    std::istringstream in(text);
    std::string magic;
    if (!(in >> magic) || magic != "OA") {
        throw std::invalid_argument("OA parse error: expected header line \"OA <n> <k> <d>\"");
    }
    long long n = 0, k = 0, d = 0;
    if (!(in >> n >> k >> d) || n < 1 || k < 2 || d < 2) {
        throw std::invalid_argument("OA parse error: bad header values (need n >= 1, k >= 2, d >= 2)");
    }
    OrthogonalArray oa;
    oa.n = static_cast<std::size_t>(n);
    oa.k = static_cast<std::size_t>(k);
    oa.d = static_cast<std::size_t>(d);
    if (oa.expected_rows() > row_cap) {
        throw std::invalid_argument("OA parse error: n*d^2 = " + std::to_string(oa.expected_rows()) +
                                    " rows exceed cap " + std::to_string(row_cap));
    }

    // Read every remaining symbol; the row count is checked by verify_oa so
    // that a truncated file is reported as a counting violation, not a parse
    // failure.
    std::vector<int> symbols;
    long long v = 0;
    while (in >> v) {
        symbols.push_back(static_cast<int>(v));
        if (symbols.size() > row_cap * oa.k) {
            throw std::invalid_argument("OA parse error: symbol count exceeds row cap");
        }
    }
    if (!in.eof()) {
        throw std::invalid_argument("OA parse error: non-numeric token in array body");
    }
    if (symbols.size() % oa.k != 0) {
        throw std::invalid_argument("OA parse error: symbol count " +
                                    std::to_string(symbols.size()) +
                                    " is not a multiple of k = " + std::to_string(oa.k));
    }
    for (std::size_t off = 0; off < symbols.size(); off += oa.k) {
        oa.rows.emplace_back(symbols.begin() + static_cast<std::ptrdiff_t>(off),
                             symbols.begin() + static_cast<std::ptrdiff_t>(off + oa.k));
    }
    check_entries(oa);
    return oa;
}

void save_oa(const std::string& path, const OrthogonalArray& oa) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open for writing: " + path);
    out << oa_to_text(oa);
    if (!out) throw std::invalid_argument("write failed: " + path);
}

OrthogonalArray load_oa(const std::string& path, std::size_t row_cap) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return oa_from_text(buf.str(), row_cap);
}

}  // namespace meanking
