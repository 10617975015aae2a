#include "meanking/io.hpp"

#include <cmath>
#include <fstream>

namespace meanking {

json mub_to_json(const MubSet& m) {
    check_shape(m);
    json bases = json::array();
    for (const auto& basis : m.bases) {
        json jbasis = json::array();
        for (const auto& v : basis) {
            json jvec = json::array();
            for (const auto& z : v) {
                jvec.push_back(json::array({z.real(), z.imag()}));
            }
            jbasis.push_back(std::move(jvec));
        }
        bases.push_back(std::move(jbasis));
    }
    return json{{"d", m.d}, {"k", m.k}, {"bases", std::move(bases)}};
}

MubSet mub_from_json(const json& j) {
    if (!j.is_object() || !j.contains("d") || !j.contains("k") || !j.contains("bases")) {
        throw std::invalid_argument("MUB JSON: expected object with keys d, k, bases");
    }
    if (!j["d"].is_number_unsigned() || !j["k"].is_number_unsigned()) {
        throw std::invalid_argument("MUB JSON: d and k must be nonnegative integers");
    }
    MubSet m;
    m.d = j["d"].get<std::size_t>();
    m.k = j["k"].get<std::size_t>();
    const auto& bases = j["bases"];
    if (!bases.is_array()) throw std::invalid_argument("MUB JSON: bases must be an array");
    for (const auto& jbasis : bases) {
        if (!jbasis.is_array()) throw std::invalid_argument("MUB JSON: each basis must be an array");
        std::vector<CVector> basis;
        for (const auto& jvec : jbasis) {
            if (!jvec.is_array()) {
                throw std::invalid_argument("MUB JSON: each basis vector must be an array");
            }
            CVector v(jvec.size());
            std::size_t i = 0;
            for (const auto& jz : jvec) {
                if (!jz.is_array() || jz.size() != 2 || !jz[0].is_number() || !jz[1].is_number()) {
                    throw std::invalid_argument("MUB JSON: components must be [re, im] pairs");
                }
                v[i++] = cplx(jz[0].get<double>(), jz[1].get<double>());
            }
            basis.push_back(std::move(v));
        }
        m.bases.push_back(std::move(basis));
    }
    check_shape(m);  // rejects ragged data and k outside 2..d+1
    return m;
}

void save_mub(const std::string& path, const MubSet& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open for writing: " + path);
    out << mub_to_json(m).dump(2) << '\n';
    if (!out) throw std::invalid_argument("write failed: " + path);
}

MubSet load_mub(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument("MUB JSON parse error in " + path + ": " + err.what());
    }
    return mub_from_json(j);
}

json report_to_json(const VerificationReport& report) {
    json checks = json::array();
    for (const auto& c : report.checks()) {
        checks.push_back(json{{"name", c.name},
                              {"residual", c.residual},
                              {"tolerance", c.tolerance},
                              {"pass", c.pass},
                              {"detail", c.detail}});
    }
    return json{{"pass", report.pass()}, {"checks", std::move(checks)}};
}

json simulation_to_json(const SimulationReport& sim) {
    json out;
    out["mode"] = sim.mode == SimulationReport::Mode::exact ? "exact" : "sampled";
    out["guess_shift"] = sim.guess_shift;
    out["success"] = sim.success;
    out["worst"] = sim.worst;
    if (sim.mode == SimulationReport::Mode::sampled) {
        out["rounds"] = sim.rounds;
        out["seed"] = sim.seed;
        out["total_wins"] = sim.total_wins;
        out["trials"] = sim.trials;
        out["wins"] = sim.wins;
    }
    out["checks"] = report_to_json(sim.checks);
    return out;
}

}  // namespace meanking
