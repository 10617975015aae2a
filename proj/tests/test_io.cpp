#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "meanking/io.hpp"
#include "test_util.hpp"

using namespace meanking;

namespace {

std::string io_temp_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("meanking_io_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("MUB JSON round trip is bit exact") {
    const auto m = prime_power_mubs(5);
    const auto j = mub_to_json(m);
    CHECK(j["d"] == 5);
    CHECK(j["k"] == 6);
    const auto back = mub_from_json(j);
    CHECK(back.d == m.d);
    CHECK(back.k == m.k);
    for (std::size_t A = 0; A < m.k; ++A) {
        for (std::size_t a = 0; a < m.d; ++a) {
            for (std::size_t i = 0; i < m.d; ++i) {
                CHECK(back.bases[A][a][i] == m.bases[A][a][i]);
            }
        }
    }
}

TEST_CASE("MUB JSON file round trip") {
    const auto path = io_temp_file("roundtrip.json");
    const auto m = standard_fourier_mubs(7);
    save_mub(path, m);
    const auto back = load_mub(path);
    CHECK(verify_mubs(back, Tolerance{1e-12}).pass());
    CHECK(back.bases[1][3][2] == m.bases[1][3][2]);
}

TEST_CASE("MUB JSON rejects malformed documents") {
    CHECK_THROWS_AS((void)mub_from_json(json::parse(R"({"d": 2, "k": 2})")),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)mub_from_json(json::parse(R"({"d": 2, "k": 2, "bases": 5})")),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)mub_from_json(json::parse(R"({"d": -2, "k": 2, "bases": []})")),
                    std::invalid_argument);
    // components must be [re, im] pairs
    CHECK_THROWS_AS(
        (void)mub_from_json(json::parse(
            R"({"d": 2, "k": 2, "bases": [[[1, 0], [0, 1]], [[1, 0], [0, 1]]]})")),
        std::invalid_argument);
    // k larger than d+1
    const auto m = mub_to_json(standard_fourier_mubs(2));
    auto too_many = m;
    too_many["bases"].push_back(m["bases"][0]);
    too_many["bases"].push_back(m["bases"][1]);
    too_many["k"] = 4;
    CHECK_THROWS_AS((void)mub_from_json(too_many), std::invalid_argument);
}

TEST_CASE("simulation report serialization carries the sampling fields") {
    auto mubs = prime_power_mubs(3);
    auto inst = build_states(std::move(mubs), mols_oa(3));
    inst.alice_basis = alice_basis_general(inst, h_from_oa(inst.oa));
    const auto sim = simulate_rounds(inst, 500, 99);
    const auto j = simulation_to_json(sim);
    CHECK(j["mode"] == "sampled");
    CHECK(j["rounds"] == 500);
    CHECK(j["seed"] == 99);
    CHECK(j["total_wins"] == 500);
    const auto exact_j = simulation_to_json(success_exact(inst));
    CHECK(exact_j["mode"] == "exact");
    CHECK_FALSE(exact_j.contains("rounds"));
}

}  // TEST_SUITE
