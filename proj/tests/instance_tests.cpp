#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

#include <asfm/instances.hpp>
#include <asfm/io.hpp>
#include <asfm/oracle.hpp>
#include <asfm/perturb.hpp>

#include "test_oracles.hpp"

using asfm::Instance;
using asfm::InstanceType;
using asfm::Subset;

namespace {

Instance seeded(InstanceType type, int n, int m, int k, std::uint64_t seed) {
    Instance inst;
    inst.type = type;
    inst.n = n;
    inst.m = m;
    inst.k = k;
    inst.seed = seed;
    switch (type) {
        case InstanceType::Loc: inst.data = asfm::generate_loc(n, m, seed); break;
        case InstanceType::Cov: inst.data = asfm::generate_cov(n, m, seed); break;
        case InstanceType::Inf: inst.data = asfm::generate_inf(n, m, seed); break;
        case InstanceType::Ca: throw std::logic_error("not generated");
    }
    return inst;
}

}  // namespace

TEST_CASE("facility-location generator ranges and determinism") {
    asfm::LocInstance a = asfm::generate_loc(20, 21, 4);
    REQUIRE(a.g.size() == 21);
    REQUIRE(a.g[0].size() == 20);
    for (const auto& row : a.g)
        for (double v : row) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    asfm::LocInstance b = asfm::generate_loc(20, 21, 4);
    CHECK(a.g == b.g);
    CHECK(asfm::generate_loc(20, 21, 5).g != a.g);
    CHECK_THROWS(asfm::generate_loc(0, 1, 1));
}

TEST_CASE("single-cell facility location") {
    asfm::LocInstance a = asfm::generate_loc(1, 1, 9);
    CHECK(a.value(Subset::of(1, {0})) == a.g[0][0]);
}

TEST_CASE("coverage generator density") {
    asfm::CovInstance c = asfm::generate_cov(40, 41, 2);
    int ones = 0;
    for (const auto& row : c.a)
        for (int v : row) ones += v;
    double total = 40.0 * 41.0;
    double sigma = std::sqrt(total * 0.15 * 0.85);
    CHECK(std::abs(ones - 0.15 * total) <= 3.0 * sigma);
}

TEST_CASE("a sensor covering nothing has zero marginal everywhere") {
    asfm::CovInstance c;
    c.n = 3;
    c.m = 2;
    c.a = {{1, 0, 0}, {1, 0, 1}};  // sensor 2 covers nothing
    c.w = {0.4, 0.7};
    Instance inst;
    inst.type = InstanceType::Cov;
    inst.n = 3;
    inst.m = 2;
    inst.k = 3;
    inst.data = c;
    asfm::EvaluatedFunction f = inst.make_function();
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
        if (mask >> 1 & 1) continue;
        CHECK(f.marginal(1, Subset::from_mask(3, mask)) == 0.0);
    }
}

TEST_CASE("influence values match the direct product formula") {
    Instance inst = seeded(InstanceType::Inf, 5, 6, 3, 13);
    asfm::EvaluatedFunction f = inst.make_function();
    for (std::uint64_t mask = 0; mask < 32; ++mask)
        CHECK(f.value(Subset::from_mask(5, mask)) ==
              Catch::Approx(testref::instance_value(inst, mask)).margin(1e-12));

    // single item: the product collapses to a sum of p_j over its edges
    const auto& d = std::get<asfm::InfInstance>(inst.data);
    for (int j = 0; j < 5; ++j) {
        double expect = 0.0;
        for (int i = 0; i < d.m; ++i)
            if (d.edge[i][j]) expect += d.p[j];
        CHECK(f.value(Subset::of(5, {j})) == Catch::Approx(expect).margin(1e-12));
    }

    // monotone: adding an item never decreases the value
    for (std::uint64_t mask = 0; mask < 32; ++mask)
        for (int j = 0; j < 5; ++j) {
            if (mask >> j & 1) continue;
            CHECK(f.marginal(j, Subset::from_mask(5, mask)) >= -1e-12);
        }
}

TEST_CASE("auction ingestion maps co-occurrence counts affinely") {
    // both transactions pair items 0 and 1: their count is the maximum
    asfm::CaInstance both = asfm::ingest_ca({{0, 1}, {0, 1}, {2}}, 3, 1);
    CHECK(both.r[0][1] == Catch::Approx(0.01));
    CHECK(both.r[0][2] == Catch::Approx(-0.09));  // never co-purchased
    CHECK(both.r[1][2] == Catch::Approx(-0.09));
    for (int i = 0; i < 3; ++i) {
        CHECK(both.r[i][i] == 0.0);
        for (int j = 0; j < 3; ++j) {
            CHECK(both.r[i][j] == both.r[j][i]);
            CHECK(both.r[i][j] >= -0.09);
            CHECK(both.r[i][j] <= 0.01);
        }
    }
    for (double w : both.w) {
        CHECK(w >= 1.0);
        CHECK(w <= 2.0);
    }
    CHECK(both.value(Subset::of(3, {2})) == both.w[2]);  // singleton = own utility

    CHECK_THROWS(asfm::ingest_ca({}, 3, 1));
    CHECK_THROWS(asfm::ingest_ca({{0, 5}}, 3, 1));
}

TEST_CASE("auction ratio bound formula") {
    asfm::CaInstance zero;
    zero.n = 3;
    zero.w = {1.5, 1.2, 1.9};
    zero.r.assign(3, std::vector<double>(3, 0.0));
    CHECK(asfm::ca_gamma_lower(zero, 2) == 1.0);  // no interactions

    asfm::CaInstance pair;
    pair.n = 2;
    pair.w = {1.0, 1.0};
    pair.r = {{0.0, -0.05}, {-0.05, 0.0}};
    CHECK(asfm::ca_gamma_lower(pair, 2) == Catch::Approx(0.95));

    CHECK_THROWS(asfm::ca_gamma_lower(pair, 1));

    asfm::CaInstance bad;
    bad.n = 2;
    bad.w = {0.03, 0.03};
    bad.r = {{0.0, -0.05}, {-0.05, 0.0}};
    CHECK_THROWS_WITH(asfm::ca_gamma_lower(bad, 2),
                      Catch::Matchers::ContainsSubstring("positivity"));
}

TEST_CASE("auction ratio bound is a valid lower bound on small data") {
    asfm::CaInstance ca = asfm::ingest_ca({{0, 1, 2}, {1, 3}, {0, 2}, {3, 4}, {2, 4}},
                                          5, 21);
    int k = 3;
    double declared = asfm::ca_gamma_lower(ca, k);
    Instance inst;
    inst.type = InstanceType::Ca;
    inst.n = 5;
    inst.k = k;
    inst.gamma_lower = declared;
    inst.data = ca;
    auto [gamma, gamma_bar] = asfm::ratio_bounds_bruteforce(inst.make_function());
    CHECK(declared <= gamma + 1e-12);
    CHECK(gamma <= gamma_bar + 1e-12);
}

TEST_CASE("perturbation basics") {
    Instance inst = seeded(InstanceType::Loc, 8, 9, 3, 2);
    CHECK(asfm::perturb(inst, 0, 0.8, 2).count() == 0);
    CHECK_THROWS(asfm::perturb(inst, 10, 1.5, 2));
    CHECK_THROWS(asfm::perturb(inst, 10, 0.0, 2));

    asfm::RewardOverlay overlay = asfm::perturb(inst, 50, 0.8, 2);
    CHECK(overlay.count() <= 50);
    CHECK(overlay.count() > 0);
    for (const auto& [s, r] : overlay.rewards) {
        CHECK(!s.empty());  // empty set never perturbed, f(emptyset) stays 0
        CHECK(s.cardinality() <= inst.k);
        CHECK(r > 0.0);
    }
}

TEST_CASE("perturbation count is capped by the number of feasible subsets") {
    Instance inst = seeded(InstanceType::Cov, 5, 6, 2, 3);
    asfm::RewardOverlay overlay = asfm::perturb(inst, 1000, 0.8, 3);
    CHECK(overlay.count() <= 15);  // C(5,1) + C(5,2)
}

TEST_CASE("perturbed instances respect the declared ratio bound") {
    for (std::uint64_t seed : {1, 2, 3}) {
        Instance inst = seeded(InstanceType::Loc, 8, 9, 3, seed);
        asfm::perturb_in_place(inst, 60, 0.8, seed);
        asfm::EvaluatedFunction f = inst.make_function();
        auto [gamma, gamma_bar] = asfm::ratio_bounds_bruteforce(f);
        CHECK(gamma >= 0.8 - 1e-12);
        CHECK(gamma_bar >= gamma - 1e-12);
        // full (ii*) enumeration with the declared bound
        auto violations = asfm::check_prop2(f, inst.ground(), 0.8, gamma_bar);
        CHECK(violations.empty());
    }
}

TEST_CASE("unperturbed generator families are exactly submodular") {
    for (InstanceType type :
         {InstanceType::Loc, InstanceType::Cov, InstanceType::Inf}) {
        Instance inst = seeded(type, 8, 9, 3, 6);
        auto [gamma, gamma_bar] = asfm::ratio_bounds_bruteforce(inst.make_function());
        CHECK(gamma == Catch::Approx(1.0).margin(1e-12));
        CHECK(gamma_bar == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("ratio bounds on modular functions") {
    asfm::CaInstance modular;
    modular.n = 4;
    modular.w = {1.0, 1.3, 1.7, 1.1};
    modular.r.assign(4, std::vector<double>(4, 0.0));
    Instance inst;
    inst.type = InstanceType::Ca;
    inst.n = 4;
    inst.k = 2;
    inst.data = modular;
    auto [gamma, gamma_bar] = asfm::ratio_bounds_bruteforce(inst.make_function());
    CHECK(gamma == Catch::Approx(1.0).margin(1e-12));
    CHECK(gamma_bar == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("instance files round-trip exactly") {
    for (InstanceType type :
         {InstanceType::Loc, InstanceType::Cov, InstanceType::Inf}) {
        Instance inst = seeded(type, 7, 8, 3, 17);
        asfm::perturb_in_place(inst, 25, 0.8, 17);
        nlohmann::json j = asfm::instance_to_json(inst);
        Instance back = asfm::instance_from_json(j);
        CHECK(back.id() == inst.id());
        CHECK(back.gamma_lower == inst.gamma_lower);
        CHECK(back.overlay.count() == inst.overlay.count());
        for (std::uint64_t mask = 0; mask < 128; ++mask) {
            Subset s = Subset::from_mask(7, mask);
            CHECK(back.value(s) == inst.value(s));
        }
    }
}

TEST_CASE("auction instance files round-trip") {
    asfm::TransactionData data;
    std::istringstream in(
        "\"whole milk\",bread\n"
        "bread, eggs \n"
        "whole milk,eggs,bread\n");
    data = asfm::read_transactions(in);
    REQUIRE(data.items.size() == 3);
    CHECK(data.items[0] == "whole milk");
    CHECK(data.items[1] == "bread");
    CHECK(data.items[2] == "eggs");
    REQUIRE(data.transactions.size() == 3);
    CHECK(data.transactions[2] == std::vector<int>{0, 2, 1});

    Instance inst = asfm::make_ca_instance(data, 0, 2, 5);
    CHECK(inst.n == 3);
    nlohmann::json j = asfm::instance_to_json(inst);
    Instance back = asfm::instance_from_json(j);
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
        Subset s = Subset::from_mask(3, mask);
        CHECK(back.value(s) == inst.value(s));
    }

    CHECK_THROWS(asfm::make_ca_instance(data, 2, 2, 5));  // more items than n
    std::istringstream empty("\n ,\n");
    CHECK_THROWS(asfm::read_transactions(empty));
}
