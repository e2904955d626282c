#include <cmath>
#include <limits>

#include "doctest.h"

#include "sinrcap/expectations.hpp"
#include "sinrcap/network.hpp"
#include "sinrcap/rng.hpp"

using namespace sinrcap;

namespace {

NetworkInstance manual_instance(std::vector<TorusPoint> pts, std::vector<double> powers,
                                PathLossModel loss, SinrParams sinr,
                                PowerMode mode = PowerMode::UniformContinuous) {
    NetworkInstance inst;
    inst.points = std::move(pts);
    inst.powers.model.mode = mode;
    inst.powers.model.p_min = 1e-6; // wide support; samples below are manual anyway
    inst.powers.model.p_max = 1.0;
    inst.powers.values = std::move(powers);
    inst.loss = loss;
    inst.sinr = sinr;
    return inst;
}

} // namespace

TEST_CASE("interference totals on tiny hand-built layouts") {
    PathLossModel loss(1.0, 2.0, 1e-3);
    SinrParams sinr;

    SUBCASE("two nodes: the only other node is the whole total") {
        auto inst = manual_instance({{0.0, 0.0}, {0.25, 0.0}}, {0.5, 2.0}, loss, sinr);
        double L = loss(0.25); // 16
        CHECK(interference_J(inst, 0) == doctest::Approx(L).epsilon(1e-15));
        CHECK(interference_I(inst, 0) == doctest::Approx(2.0 * L).epsilon(1e-15));
        CHECK(interference_J(inst, 1) == doctest::Approx(L).epsilon(1e-15));
        CHECK(interference_I(inst, 1) == doctest::Approx(0.5 * L).epsilon(1e-15));
    }

    SUBCASE("three collinear nodes") {
        auto inst = manual_instance({{0.0, 0.0}, {0.1, 0.0}, {0.3, 0.0}}, {1.0, 2.0, 4.0},
                                    loss, sinr);
        double expect_J = loss(0.1) + loss(0.3);
        double expect_I = 2.0 * loss(0.1) + 4.0 * loss(0.3);
        CHECK(interference_J(inst, 0) == doctest::Approx(expect_J).epsilon(1e-15));
        CHECK(interference_I(inst, 0) == doctest::Approx(expect_I).epsilon(1e-15));
    }
}

TEST_CASE("interference totals match the long-double reference") {
    PathLossModel loss; // defaults
    PowerModel power;
    power.mode = PowerMode::UniformContinuous;
    SinrParams sinr;
    NetworkInstance inst = make_instance(300, loss, power, sinr, 5150);
    for (int j = 0; j < inst.n(); j += 7) {
        double J = interference_J(inst, j);
        double I = interference_I(inst, j);
        double refJ = reference::interference_J(inst, j);
        double refI = reference::interference_I(inst, j);
        CHECK(J == doctest::Approx(refJ).epsilon(1e-12));
        CHECK(I == doctest::Approx(refI).epsilon(1e-12));
    }
}

TEST_CASE("single-pass dual totals are bit-identical to the single totals") {
    PathLossModel loss;
    PowerModel power;
    power.mode = PowerMode::TwoPointMixture;
    SinrParams sinr;
    NetworkInstance inst = make_instance(250, loss, power, sinr, 777);
    std::vector<double> J, I;
    interference_all_both(inst, J, I, /*parallel=*/true);
    auto J_single = interference_all_J(inst, /*parallel=*/false);
    auto I_single = interference_all_I(inst, /*parallel=*/false);
    REQUIRE(J.size() == static_cast<std::size_t>(inst.n()));
    for (int j = 0; j < inst.n(); ++j) {
        CHECK(J[static_cast<std::size_t>(j)] == J_single[static_cast<std::size_t>(j)]);
        CHECK(I[static_cast<std::size_t>(j)] == I_single[static_cast<std::size_t>(j)]);
        InterferencePair pair = interference_both(inst, j);
        CHECK(pair.J == J_single[static_cast<std::size_t>(j)]);
        CHECK(pair.I == I_single[static_cast<std::size_t>(j)]);
    }
}

TEST_CASE("SINR rewrite equals the direct sum to 1e-12") {
    SinrParams sinr;
    PathLossModel loss;
    for (bool heterogeneous : {false, true}) {
        PowerModel power;
        power.mode = heterogeneous ? PowerMode::UniformContinuous : PowerMode::Constant;
        NetworkInstance inst = make_instance(120, loss, power, sinr, heterogeneous ? 11 : 12);
        double worst = 0.0;
        for (int j = 0; j < inst.n(); ++j)
            for (int i = 0; i < inst.n(); ++i) {
                if (i == j) continue;
                double a = sinr_value(inst, i, j);
                double b = sinr_direct(inst, i, j);
                double rel = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
                worst = std::max(worst, rel);
            }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("SINR rewrite stays exact with adversarial near-coincident pairs") {
    // A cluster of nearly coincident nodes makes the interference total
    // spike-dominated, the regime where naive cancellation would lose
    // digits.
    PathLossModel loss; // near-field gain 15625
    SinrParams sinr;
    std::vector<TorusPoint> pts;
    std::vector<double> powers;
    Rng rng(31337);
    for (int i = 0; i < 40; ++i) {
        // half the nodes inside one near-field ball, half spread out
        if (i % 2 == 0)
            pts.push_back({0.5 + 1e-5 * rng.uniform01(), 0.5 + 1e-5 * rng.uniform01()});
        else
            pts.push_back({rng.uniform01(), rng.uniform01()});
        powers.push_back(rng.uniform(0.01, 0.02));
    }
    auto inst = manual_instance(std::move(pts), std::move(powers), loss, sinr);
    double worst = 0.0;
    for (int j = 0; j < inst.n(); ++j)
        for (int i = 0; i < inst.n(); ++i) {
            if (i == j) continue;
            double a = sinr_value(inst, i, j);
            double b = sinr_direct(inst, i, j);
            double rel = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
            worst = std::max(worst, rel);
        }
    CHECK(worst <= 1e-12);
}

TEST_CASE("zero interference weight gives the noise-only SINR") {
    PathLossModel loss;
    PowerModel power; // constant 0.01
    SinrParams sinr;
    sinr.gamma = 0.0;
    NetworkInstance inst = make_instance(50, loss, power, sinr, 2);
    // Pick the pair at distance closest to 0.5 and check against L/(N0/p0).
    for (int i = 1; i < inst.n(); ++i) {
        double L = inst.gain(0, i);
        CHECK(sinr_value(inst, i, 0) == L / (sinr.N0 / power.p0));
    }
    // Hand value: at d = 0.5 the gain is 1.25e-4, so the SINR is 6.25e-5.
    auto two = manual_instance({{0.0, 0.0}, {0.5, 0.0}}, {0.01, 0.01}, loss, sinr,
                               PowerMode::UniformContinuous);
    two.powers.model.mode = PowerMode::Constant;
    CHECK(sinr_value(two, 1, 0) == 6.25e-5);
}

TEST_CASE("heterogeneous SINR is asymmetric in general") {
    PathLossModel loss(1.0, 3.0, 1e-3);
    SinrParams sinr;
    auto inst = manual_instance({{0.0, 0.0}, {0.2, 0.0}, {0.45, 0.3}}, {0.01, 0.08, 0.02},
                                loss, sinr);
    CHECK(sinr_value(inst, 0, 1) != sinr_value(inst, 1, 0));
}

TEST_CASE("coupled channels order correctly and collapse at zero deviation") {
    PathLossModel loss;
    PowerModel power;
    power.mode = PowerMode::UniformContinuous;
    SinrParams sinr;
    NetworkInstance inst = make_instance(80, loss, power, sinr, 99);
    ExpectationTable table = ExpectationTable::from_factors(
        inst.n(), expected_path_loss(loss), power.mean());

    EpsilonSchedule eps;
    eps.eps1 = eps.eps2 = 0.3;
    eps.eps1_prime = eps.eps2_prime = 0.4;
    for (int j = 0; j < inst.n(); ++j)
        for (int i = 0; i < inst.n(); ++i) {
            if (i == j) continue;
            double lo = sinr_coupled(inst, i, j, SinrModel::LowerCoupled, eps, table);
            double hi = sinr_coupled(inst, i, j, SinrModel::UpperCoupled, eps, table);
            CHECK(lo <= hi);
        }

    EpsilonSchedule zero; // all deviations zero: both coupled channels agree
    for (int i = 1; i < 20; ++i) {
        double lo = sinr_coupled(inst, i, 0, SinrModel::LowerCoupled, zero, table);
        double hi = sinr_coupled(inst, i, 0, SinrModel::UpperCoupled, zero, table);
        CHECK(lo == hi);
    }

    CHECK(sinr_coupled(inst, 1, 0, SinrModel::Actual, eps, table) == sinr_value(inst, 1, 0));
    CHECK_THROWS_AS((void)coupled_interference_level(SinrModel::Actual, eps, table, true),
                    std::logic_error);
}

TEST_CASE("capacity thresholds are inclusive and Gaussian rates follow Shannon") {
    SinrParams thr;
    CHECK(capacity_from_sinr(0.2, thr) == thr.R);          // exactly at the threshold
    CHECK(capacity_from_sinr(0.2 - 1e-15, thr) == 0.0);    // just below
    CHECK(capacity_from_sinr(std::numeric_limits<double>::infinity(), thr) == thr.R);
    CHECK(capacity_from_sinr(std::numeric_limits<double>::quiet_NaN(), thr) == 0.0);

    SinrParams gauss;
    gauss.mode = CapacityMode::GaussianRate;
    CHECK(capacity_from_sinr(1.0, gauss) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(capacity_from_sinr(3.0, gauss) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(capacity_from_sinr(0.1, gauss) == 0.0); // below the threshold
}

TEST_CASE("coupled link state equals disk membership at the coupled radius") {
    PathLossModel loss(0.02, 3.0, 0.02);
    SinrParams sinr;
    sinr.gamma = 0.002;
    PowerModel power;
    power.mode = PowerMode::UniformContinuous;
    NetworkInstance inst = make_instance(60, loss, power, sinr, 2718);
    ExpectationTable table = ExpectationTable::from_factors(
        inst.n(), expected_path_loss(loss), power.mean());
    EpsilonSchedule eps = compute_epsilons(inst.n(), table.E_L, table.E_P);

    for (SinrModel model : {SinrModel::LowerCoupled, SinrModel::UpperCoupled}) {
        double level = coupled_interference_level(model, eps, table, true);
        for (int i = 0; i < inst.n(); ++i) {
            auto radius = try_coupled_connection_radius(
                loss, sinr, sinr.N0, level, inst.powers.values[static_cast<std::size_t>(i)]);
            for (int j = 0; j < inst.n(); ++j) {
                if (i == j) continue;
                bool on = capacity_from_sinr(sinr_coupled(inst, i, j, model, eps, table),
                                             sinr) > 0.0;
                double d = torus_distance(inst.points[static_cast<std::size_t>(i)],
                                          inst.points[static_cast<std::size_t>(j)]);
                bool inside = radius.has_value() && d <= *radius;
                CHECK(on == inside);
            }
        }
    }
}

TEST_CASE("annulus counting is half-open at the inner edge") {
    PathLossModel loss;
    SinrParams sinr;
    auto inst = manual_instance(
        {{0.0, 0.0}, {0.1, 0.0}, {0.2, 0.0}, {0.25, 0.0}, {0.4, 0.0}},
        {0.01, 0.01, 0.01, 0.01, 0.01}, loss, sinr);
    CHECK(annulus_count(inst, 0, 0.05, 0.25) == 3);  // 0.1, 0.2 and the boundary 0.25
    CHECK(annulus_count(inst, 0, 0.25, 0.5) == 1);   // 0.4 only; 0.25 is excluded
    CHECK(annulus_count(inst, 0, 0.1, 0.2) == 1);    // 0.1 excluded, 0.2 included
    CHECK(annulus_count(inst, 0, 0.0, 0.7071) == 4); // everything
    CHECK(annulus_count(inst, 0, 0.0, 0.0) == 0);
    CHECK_THROWS_AS((void)annulus_count(inst, 0, 0.3, 0.2), std::invalid_argument);

    auto counts = annulus_counts_all(inst, 0.05, 0.25, false);
    CHECK(counts[0] == 3);
}

TEST_CASE("epsilon schedule relations") {
    double E_L = 0.147;
    EpsilonSchedule a = compute_epsilons(2000, E_L, 1.0);
    // Same mean, so the heterogeneous pair coincides with the constant one.
    CHECK(a.eps2 == doctest::Approx(a.eps1).epsilon(1e-15));
    // Upper deviations carry the 3/2 factor inside the square root.
    CHECK(a.eps1_prime / a.eps1 == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
    CHECK(a.eps2_prime / a.eps2 == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));

    // Scaling the mean power by 1/4 doubles the heterogeneous deviations.
    EpsilonSchedule b = compute_epsilons(2000, E_L, 0.25);
    CHECK(b.eps2 == doctest::Approx(2.0 * a.eps2).epsilon(1e-12));

    // More nodes concentrate the sums: deviations shrink.
    EpsilonSchedule c = compute_epsilons(4000, E_L, 1.0);
    CHECK(c.eps1 < a.eps1);
    CHECK(c.eps2_prime < a.eps2_prime);
}

TEST_CASE("instances are pure functions of the seed") {
    PathLossModel loss;
    PowerModel power;
    power.mode = PowerMode::TwoPointMixture;
    SinrParams sinr;
    NetworkInstance a = make_instance(64, loss, power, sinr, 31);
    NetworkInstance b = make_instance(64, loss, power, sinr, 31);
    NetworkInstance c = make_instance(64, loss, power, sinr, 32);
    bool identical = true;
    bool different = false;
    for (int i = 0; i < 64; ++i) {
        identical = identical && a.points[i].x == b.points[i].x &&
                    a.points[i].y == b.points[i].y &&
                    a.powers.values[i] == b.powers.values[i];
        different = different || a.points[i].x != c.points[i].x;
    }
    CHECK(identical);
    CHECK(different);
    CHECK_THROWS_AS((void)make_instance(1, loss, power, sinr, 1), std::invalid_argument);
}
