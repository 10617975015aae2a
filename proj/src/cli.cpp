#include "meanking/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "meanking/field.hpp"
#include "meanking/io.hpp"
#include "meanking/protocol.hpp"

namespace meanking {

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::size_t row_cap_from_env() {
    if (const char* raw = std::getenv("MEANKING_ROW_CAP")) {
        try {
            const unsigned long long v = std::stoull(raw);
            if (v == 0) throw std::invalid_argument("zero");
            return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            throw std::invalid_argument("MEANKING_ROW_CAP is not a positive integer: " +
                                        std::string(raw));
        }
    }
    return kDefaultRowCap;
}

MubSet take_first_bases(MubSet m, std::size_t k) {
    if (k > m.k) {
        throw std::invalid_argument("requested k = " + std::to_string(k) + " bases but only " +
                                    std::to_string(m.k) + " are available for d = " +
                                    std::to_string(m.d));
    }
    m.k = k;
    m.bases.resize(k);
    check_shape(m);
    return m;
}

// "auto" picks the Fourier pair for k = 2, otherwise the maximal prime-power
// set truncated to k bases; non-keyword values are file paths.
MubSet resolve_mubs(const std::string& method, std::size_t d, std::optional<std::size_t> k) {
    if (method == "fourier-pair" || (method == "auto" && k && *k == 2)) {
        auto m = standard_fourier_mubs(d);
        if (k && *k != 2) {
            throw std::invalid_argument("fourier-pair provides exactly 2 bases, requested k = " +
                                        std::to_string(*k));
        }
        return m;
    }
    if (method == "prime-power" || method == "auto") {
        if (method == "auto" && !factor_prime_power(static_cast<unsigned>(d))) {
            if (!k) return standard_fourier_mubs(d);
            throw std::invalid_argument(
                "no generator for d = " + std::to_string(d) + ", k = " + std::to_string(*k) +
                "; supply a MUB file via --mub <path>");
        }
        auto m = prime_power_mubs(static_cast<unsigned>(d));  // refuses even prime powers >= 4
        return k ? take_first_bases(std::move(m), *k) : m;
    }
    auto m = load_mub(method);
    if (m.d != d) {
        throw std::invalid_argument("MUB file " + method + " has d = " + std::to_string(m.d) +
                                    ", expected " + std::to_string(d));
    }
    if (k && m.k != *k) {
        throw std::invalid_argument("MUB file " + method + " has k = " + std::to_string(m.k) +
                                    ", expected " + std::to_string(*k));
    }
    return m;
}

OrthogonalArray resolve_oa(const std::string& method, std::size_t d, std::size_t k,
                           std::optional<std::size_t> n, std::size_t row_cap) {
    OrthogonalArray oa;
    if (method == "trivial") {
        oa = trivial_oa(k, d, row_cap);
    } else if (method == "mols") {
        oa = mols_oa(static_cast<unsigned>(d));
        if (oa.k != k) {
            throw std::invalid_argument("mols array for d = " + std::to_string(d) + " has k = " +
                                        std::to_string(oa.k) + ", requested k = " +
                                        std::to_string(k));
        }
    } else {
        oa = load_oa(method, row_cap);
        if (oa.d != d || oa.k != k) {
            throw std::invalid_argument("OA file " + method + " is (k=" + std::to_string(oa.k) +
                                        ",d=" + std::to_string(oa.d) + "), expected (k=" +
                                        std::to_string(k) + ",d=" + std::to_string(d) + ")");
        }
    }
    if (n && oa.n != *n) {
        throw std::invalid_argument("OA has index n = " + std::to_string(oa.n) +
                                    ", requested n = " + std::to_string(*n));
    }
    return oa;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open for writing: " + out_path);
    out << text;
    if (!out) throw std::invalid_argument("write failed: " + out_path);
}

int report_outcome(const VerificationReport& report) {
    std::cout << report.summary();
    std::cout << (report.pass() ? "PASS" : "FAIL") << '\n';
    return report.pass() ? kExitPass : kExitCheckFailed;
}

struct RunConfig {
    std::size_t d = 0;
    std::size_t k = 0;
    std::optional<std::size_t> n;
    std::string oa_method = "trivial";
    std::string mub_method = "auto";
    std::string mode = "exact";
    std::uint64_t rounds = 10000;
    std::uint64_t seed = 0;
    double tol_eps = 1e-9;
    std::string out_path;
};

int cmd_run(const RunConfig& cfg) {
    const Tolerance tol{cfg.tol_eps};
    require_valid(tol);
    if (cfg.mode == "sample" && cfg.rounds < 1) {
        throw std::invalid_argument("sample mode needs rounds >= 1");
    }
    const std::size_t row_cap = row_cap_from_env();
    const auto t0 = std::chrono::steady_clock::now();

    json report;
    report["parameters"] = json{{"d", cfg.d},
                                {"k", cfg.k},
                                {"oa", cfg.oa_method},
                                {"mub", cfg.mub_method},
                                {"mode", cfg.mode},
                                {"rounds", cfg.mode == "sample" ? json(cfg.rounds) : json()},
                                {"seed", cfg.mode == "sample" ? json(cfg.seed) : json()},
                                {"tol", cfg.tol_eps},
                                {"row_cap", row_cap}};

    VerificationReport all_checks;
    auto collect = [&all_checks](const std::string& prefix, const VerificationReport& r) {
        for (auto c : r.checks()) {
            c.name = prefix + c.name;
            all_checks.add(std::move(c));
        }
    };

    MubSet mubs = resolve_mubs(cfg.mub_method, cfg.d, cfg.k);
    OrthogonalArray oa = resolve_oa(cfg.oa_method, cfg.d, cfg.k, cfg.n, row_cap);
    report["parameters"]["n"] = oa.n;
    report["parameters"]["d_prime"] = oa.n * oa.d;

    collect("", verify_mubs(mubs, tol));
    collect("", verify_oa(oa, row_cap));

    bool worst_ok = false;
    double worst = 0.0;
    if (all_checks.pass()) {
        ProtocolInstance inst = build_states(std::move(mubs), std::move(oa), tol, row_cap);
        collect("", verify_instance(inst, tol));

        const HMatrix h = h_from_oa(inst.oa);
        collect("", verify_h(h, inst.oa, tol));

        inst.alice_basis = alice_basis_general(inst, h);
        collect("", verify_alice_basis(inst, h));

        const auto povm = povm_compress(inst);
        collect("", verify_povm(inst, povm, tol));

        const auto exact = success_exact(inst);
        collect("exact.", exact.checks);
        report["success_exact"] = simulation_to_json(exact);
        worst = exact.worst;
        worst_ok = exact.worst >= 1.0 - tol.eps;

        if (cfg.mode == "sample") {
            const auto sampled = simulate_rounds(inst, cfg.rounds, cfg.seed);
            collect("sampled.", sampled.checks);
            report["success_sampled"] = simulation_to_json(sampled);
            worst = std::min(worst, sampled.worst);
            worst_ok = worst_ok && sampled.worst >= 1.0 - tol.eps;
        }
    }

    const bool pass = all_checks.pass() && worst_ok;
    json checks = json::array();
    for (const auto& c : all_checks.checks()) {
        checks.push_back(json{{"name", c.name},
                              {"residual", c.residual},
                              {"tolerance", c.tolerance},
                              {"pass", c.pass},
                              {"detail", c.detail}});
    }
    report["checks"] = std::move(checks);
    report["worst_success"] = worst;
    report["pass"] = pass;
    const auto t1 = std::chrono::steady_clock::now();
    report["timing"] = json{{"timestamp", utc_timestamp()},
                            {"wall_seconds", std::chrono::duration<double>(t1 - t0).count()}};

    emit(report.dump(2) + "\n", cfg.out_path);
    if (!cfg.out_path.empty()) {
        std::cout << "report written to " << cfg.out_path << ": " << (pass ? "PASS" : "FAIL")
                  << " (worst success " << worst << ")\n";
    }
    return pass ? kExitPass : kExitCheckFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Mean King retrodiction toolkit: mutually unbiased bases, orthogonal arrays, "
                 "and certified measurement constructions"};
    app.require_subcommand(1);

    // --- mub ---
    auto* mub_cmd = app.add_subcommand("mub", "generate or verify MUB sets (JSON)");
    mub_cmd->require_subcommand(1);

    struct {
        std::size_t d = 0;
        std::optional<std::size_t> k;
        std::string method = "auto";
        std::string out_path;
        double tol_eps = 1e-9;
    } mub_gen_cfg;
    auto* mub_gen = mub_cmd->add_subcommand("gen", "generate a MUB set");
    mub_gen->add_option("--d", mub_gen_cfg.d, "system level")->required();
    mub_gen->add_option("--k", mub_gen_cfg.k, "number of bases (default: maximal available)");
    mub_gen->add_option("--method,--mub", mub_gen_cfg.method,
                        "auto | fourier-pair | prime-power (default auto)");
    mub_gen->add_option("--out", mub_gen_cfg.out_path, "output path (default stdout)");
    mub_gen->add_option("--tol", mub_gen_cfg.tol_eps, "verification tolerance");

    struct {
        std::string in_path;
        double tol_eps = 1e-9;
    } mub_verify_cfg;
    auto* mub_verify = mub_cmd->add_subcommand("verify", "verify a MUB JSON file");
    mub_verify->add_option("--in", mub_verify_cfg.in_path, "MUB JSON path")->required();
    mub_verify->add_option("--tol", mub_verify_cfg.tol_eps, "verification tolerance");

    // --- oa ---
    auto* oa_cmd = app.add_subcommand("oa", "generate or verify orthogonal arrays (text)");
    oa_cmd->require_subcommand(1);

    struct {
        std::string method;
        std::size_t d = 0;
        std::optional<std::size_t> k;
        std::string out_path;
    } oa_gen_cfg;
    auto* oa_gen = oa_cmd->add_subcommand("gen", "generate an orthogonal array");
    oa_gen->add_option("--method", oa_gen_cfg.method, "trivial | mols")->required();
    oa_gen->add_option("--d", oa_gen_cfg.d, "order (number of symbols)")->required();
    oa_gen->add_option("--k", oa_gen_cfg.k, "degree (columns); required for trivial");
    oa_gen->add_option("--out", oa_gen_cfg.out_path, "output path (default stdout)");

    struct {
        std::string in_path;
    } oa_verify_cfg;
    auto* oa_verify = oa_cmd->add_subcommand("verify", "verify an OA text file");
    oa_verify->add_option("--in", oa_verify_cfg.in_path, "OA text path")->required();

    // --- run ---
    RunConfig run_cfg;
    auto* run_cmd = app.add_subcommand(
        "run", "assemble the full protocol, verify every invariant, compute success");
    run_cmd->add_option("--d", run_cfg.d, "system level")->required();
    run_cmd->add_option("--k", run_cfg.k, "number of bases")->required();
    run_cmd->add_option("--n", run_cfg.n, "required OA index (consistency check)");
    run_cmd->add_option("--oa", run_cfg.oa_method, "trivial | mols | <path to OA file>");
    run_cmd->add_option("--mub", run_cfg.mub_method,
                        "auto | fourier-pair | prime-power | <path to MUB JSON>");
    run_cmd->add_option("--mode", run_cfg.mode, "exact | sample (default exact)")
        ->check(CLI::IsMember({"exact", "sample"}));
    run_cmd->add_option("--rounds", run_cfg.rounds, "rounds for sample mode (default 10000)");
    run_cmd->add_option("--seed", run_cfg.seed, "RNG seed for sample mode");
    run_cmd->add_option("--tol", run_cfg.tol_eps, "tolerance for all checks (default 1e-9)");
    run_cmd->add_option("--out", run_cfg.out_path, "report JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*mub_gen) {
            const Tolerance tol{mub_gen_cfg.tol_eps};
            auto m = resolve_mubs(mub_gen_cfg.method, mub_gen_cfg.d, mub_gen_cfg.k);
            auto report = verify_mubs(m, tol);
            if (!report.pass()) {
                std::cerr << "generated set failed verification\n" << report.summary();
                return kExitCheckFailed;
            }
            emit(mub_to_json(m).dump(2) + "\n", mub_gen_cfg.out_path);
            if (!mub_gen_cfg.out_path.empty()) {
                std::cout << "wrote MUB set (d=" << m.d << ", k=" << m.k << ") to "
                          << mub_gen_cfg.out_path << '\n';
            }
            return kExitPass;
        }
        if (*mub_verify) {
            const Tolerance tol{mub_verify_cfg.tol_eps};
            const auto m = load_mub(mub_verify_cfg.in_path);
            return report_outcome(verify_mubs(m, tol));
        }
        if (*oa_gen) {
            const std::size_t row_cap = row_cap_from_env();
            OrthogonalArray oa;
            if (oa_gen_cfg.method == "trivial") {
                if (!oa_gen_cfg.k) {
                    throw std::invalid_argument("oa gen --method trivial requires --k");
                }
                oa = trivial_oa(*oa_gen_cfg.k, oa_gen_cfg.d, row_cap);
            } else if (oa_gen_cfg.method == "mols") {
                oa = mols_oa(static_cast<unsigned>(oa_gen_cfg.d));
                if (oa_gen_cfg.k && *oa_gen_cfg.k != oa.k) {
                    throw std::invalid_argument("mols array for d = " +
                                                std::to_string(oa_gen_cfg.d) + " has k = " +
                                                std::to_string(oa.k));
                }
            } else {
                throw std::invalid_argument("unknown oa method: " + oa_gen_cfg.method);
            }
            emit(oa_to_text(oa), oa_gen_cfg.out_path);
            if (!oa_gen_cfg.out_path.empty()) {
                std::cout << "wrote OA_" << oa.n << "(" << oa.k << "," << oa.d << ") to "
                          << oa_gen_cfg.out_path << '\n';
            }
            return kExitPass;
        }
        if (*oa_verify) {
            const std::size_t row_cap = row_cap_from_env();
            const auto oa = load_oa(oa_verify_cfg.in_path, row_cap);
            return report_outcome(verify_oa(oa, row_cap));
        }
        if (*run_cmd) {
            return cmd_run(run_cfg);
        }
    } catch (const VerificationError& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return kExitCheckFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("meanking");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace meanking
