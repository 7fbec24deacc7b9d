#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dlec/model.hpp"

using namespace dlec;
namespace m = dlec::model;

namespace {
double rel_err(double actual, double expected) {
    if (expected == 0.0) return std::fabs(actual);
    return std::fabs(actual - expected) / std::fabs(expected);
}
}  // namespace

TEST_CASE("total_power") {
    CHECK(m::total_power(0, PowerDraw(123.0)).kilowatts() == 0.0);
    CHECK(m::total_power(1, PowerDraw(1000.0)).kilowatts() == 1.0);
    CHECK(m::total_power(100, PowerDraw(57.0)).kilowatts() == doctest::Approx(5.7).epsilon(1e-12));
}

TEST_CASE("per_tx_consumption") {
    // 1 validator at 3600 W serving 1 tx/s: 3600 J/tx = 0.001 kWh/tx
    CHECK(m::per_tx_consumption(1, PowerDraw(3600.0), Throughput(1.0)).kwh_per_tx() ==
          doctest::Approx(0.001).epsilon(1e-12));
    CHECK(m::per_tx_consumption(0, PowerDraw(50.0), Throughput(3.0)).kwh_per_tx() == 0.0);

    // doubling throughput halves per-tx consumption
    const double at_l = m::per_tx_consumption(7, PowerDraw(42.0), Throughput(5.0)).kwh_per_tx();
    const double at_2l = m::per_tx_consumption(7, PowerDraw(42.0), Throughput(10.0)).kwh_per_tx();
    CHECK(rel_err(2.0 * at_2l, at_l) < 1e-12);

    CHECK_THROWS_AS(Throughput(0.0), DomainError);
    CHECK_THROWS_AS(Throughput(-1.0), DomainError);
    CHECK_THROWS_AS(Throughput(std::nan("")), DomainError);
}

TEST_CASE("projected_per_tx") {
    SUBCASE("kappa=0 collapses to the constant lambda*p") {
        AffineValidatorModel model{.kappa = 0.0, .lambda = 1.0, .method = FitMethod::two_point,
                                   .domain = ThroughputDomain(1.0, 1000.0)};
        for (double l : {1.0, 10.0, 500.0})
            CHECK(m::projected_per_tx(model, PowerDraw(3600.0), Throughput(l)).kwh_per_tx() ==
                  doctest::Approx(0.001).epsilon(1e-12));
    }

    SUBCASE("constant validator count") {
        // 10 validators at 1 W over 10 tx/s: 1 J/tx
        AffineValidatorModel model{.kappa = 10.0, .lambda = 0.0, .method = FitMethod::two_point,
                                   .domain = ThroughputDomain(100.0)};
        CHECK(m::projected_per_tx(model, PowerDraw(1.0), Throughput(10.0)).kwh_per_tx() ==
              doctest::Approx(1.0 / 3.6e6).epsilon(1e-12));
    }

    SUBCASE("domain and degeneracy errors") {
        AffineValidatorModel model{.kappa = 10.0, .lambda = -1.0, .method = FitMethod::two_point,
                                   .domain = ThroughputDomain(9.0)};
        CHECK_THROWS_AS(m::projected_per_tx(model, PowerDraw(1.0), Throughput(100.0)),
                        DomainError);
        // at l = 9.5 the model predicts 0.5 validators; domain deliberately
        // left untruncated to reach the degenerate branch
        AffineValidatorModel untruncated{.kappa = 10.0, .lambda = -1.0,
                                         .method = FitMethod::two_point,
                                         .domain = ThroughputDomain(20.0)};
        CHECK_THROWS_AS(m::projected_per_tx(untruncated, PowerDraw(1.0), Throughput(9.5)),
                        ModelDegenerateError);
    }

    SUBCASE("approaches lambda*p from above as l grows") {
        AffineValidatorModel model{.kappa = 5.0, .lambda = 2.0, .method = FitMethod::two_point,
                                   .domain = ThroughputDomain(1e9)};
        const double limit = 2.0 * 100.0 / 3.6e6;  // lambda * p in kWh/tx
        const double far = m::projected_per_tx(model, PowerDraw(100.0), Throughput(1e8))
                               .kwh_per_tx();
        CHECK(far > limit);
        CHECK(rel_err(far, limit) < 1e-6);
    }
}

TEST_CASE("scenario_range") {
    SUBCASE("degenerate band") {
        const auto band = m::scenario_range(10, PowerDraw(50.0), PowerDraw(50.0), Throughput(2.0));
        CHECK(band.global.optimistic == band.global.pessimistic);
        CHECK(band.per_tx.optimistic == band.per_tx.pessimistic);
    }
    SUBCASE("hand-computed band") {
        const auto band = m::scenario_range(100, PowerDraw(10.0), PowerDraw(100.0),
                                            Throughput(1.0));
        CHECK(band.global.optimistic.kilowatts() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(band.global.pessimistic.kilowatts() == doctest::Approx(10.0).epsilon(1e-12));
        // per-tx values preserve the power ratio
        CHECK(rel_err(band.per_tx.pessimistic.kwh_per_tx(),
                      10.0 * band.per_tx.optimistic.kwh_per_tx()) < 1e-12);
    }
    SUBCASE("band order enforced") {
        CHECK_THROWS_AS(m::scenario_range(1, PowerDraw(100.0), PowerDraw(10.0), Throughput(1.0)),
                        BandOrderError);
    }
}

TEST_CASE("bounded_projection") {
    CHECK_THROWS_AS(m::bounded_projection(10, PowerDraw(1.0), PowerDraw(2.0), Throughput(5.0),
                                          Throughput(5.0)),
                    BoundsError);

    const auto [at_low, at_high] = m::bounded_projection(1000, PowerDraw(10.0), PowerDraw(100.0),
                                                         Throughput(15.0), Throughput(3000.0));
    // global power is load-independent
    CHECK(at_low.global.optimistic.kilowatts() == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(at_low.global.pessimistic.kilowatts() == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(at_low.global.optimistic == at_high.global.optimistic);
    CHECK(at_low.global.pessimistic == at_high.global.pessimistic);
    // per-tx scales with the throughput ratio
    CHECK(rel_err(at_low.per_tx.optimistic.kwh_per_tx(),
                  at_high.per_tx.optimistic.kwh_per_tx() * 3000.0 / 15.0) < 1e-12);
}

TEST_CASE("reference_global_power") {
    CHECK(m::reference_global_power({8760.0, AnnualEnergy::Unit::kwh_per_year}).kilowatts() ==
          doctest::Approx(1.0).epsilon(1e-12));
    // 1 GJ over a year: 1e9 J / 31,536,000 s = 31.7098 W
    CHECK(m::reference_global_power({1.0, AnnualEnergy::Unit::gj_per_year}).kilowatts() * 1000.0 ==
          doctest::Approx(31.7098).epsilon(1e-5));
    CHECK(m::reference_global_power({0.0, AnnualEnergy::Unit::kwh_per_year}).kilowatts() == 0.0);
    CHECK_THROWS_AS(m::reference_global_power({-1.0, AnnualEnergy::Unit::kwh_per_year}),
                    DomainError);

    // the annualization constant is overridable
    CHECK(m::reference_global_power({8784.0, AnnualEnergy::Unit::kwh_per_year}, 8784.0)
              .kilowatts() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reference_per_tx") {
    // VisaNet: published yearly energy over 150M tx/day
    const auto visanet = m::reference_per_tx(GlobalPower(22387.1131),
                                             m::tx_per_day_to_tps(150000000.0));
    CHECK(rel_err(visanet.kwh_per_tx(), 0.0035819381) < 1e-7);

    CHECK(m::reference_per_tx(GlobalPower(3600.0), Throughput(1.0)).kwh_per_tx() ==
          doctest::Approx(1.0).epsilon(1e-12));

    // back-solved throughput reproduces the published per-tx figure
    const double l_star = 3373287.671 / (3600.0 * 360.393);
    CHECK(rel_err(m::reference_per_tx(GlobalPower(3373287.671), Throughput(l_star)).kwh_per_tx(),
                  360.393) < 1e-9);
}

TEST_CASE("tx_per_day_to_tps") {
    CHECK(m::tx_per_day_to_tps(86400.0).tps() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m::tx_per_day_to_tps(150000000.0).tps() == doctest::Approx(1736.1111).epsilon(1e-7));
    CHECK(m::tx_per_day_to_tps(1.0).tps() == doctest::Approx(1.157407e-5).epsilon(1e-6));
    CHECK_THROWS_AS(m::tx_per_day_to_tps(0.0), DomainError);
    CHECK_THROWS_AS(m::tx_per_day_to_tps(-5.0), DomainError);
}

TEST_CASE("equation properties over randomized inputs") {
    std::mt19937 rng(20210813);
    std::uniform_int_distribution<std::uint64_t> n_dist(0, 1'000'000);
    std::uniform_real_distribution<double> p_dist(0.1, 1000.0);
    std::uniform_real_distribution<double> l_dist(1e-3, 1e4);
    std::uniform_real_distribution<double> scale_dist(0.1, 10.0);

    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t n = n_dist(rng);
        const PowerDraw p(p_dist(rng));
        const Throughput l(l_dist(rng));

        // conservation: per-tx * tps * 3600 recovers global power
        const double per_tx = m::per_tx_consumption(n, p, l).kwh_per_tx();
        const double global = m::total_power(n, p).kilowatts();
        CHECK(rel_err(per_tx * l.tps() * kSecondsPerHour, global) < 1e-12);

        // inverse proportionality
        const double c = scale_dist(rng);
        const double scaled = m::per_tx_consumption(n, p, Throughput(c * l.tps())).kwh_per_tx();
        CHECK(rel_err(scaled * c, per_tx) < 1e-12);

        // linearity in p
        const double doubled =
            m::per_tx_consumption(n, PowerDraw(2.0 * p.watts()), l).kwh_per_tx();
        CHECK(rel_err(doubled, 2.0 * per_tx) < 1e-12);
    }
}

TEST_CASE("Eq.(2)/(3) consistency and asymptote bound") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> k_dist(0.0, 5000.0);
    std::uniform_real_distribution<double> lam_dist(0.0, 100.0);
    std::uniform_real_distribution<double> p_dist(0.1, 1000.0);
    std::uniform_real_distribution<double> l_dist(0.5, 1e4);

    for (int i = 0; i < 2000; ++i) {
        const double kappa = 1.0 + k_dist(rng);
        const double lambda = lam_dist(rng);
        const PowerDraw p(p_dist(rng));
        const Throughput l(l_dist(rng));
        AffineValidatorModel model{.kappa = kappa, .lambda = lambda,
                                   .method = FitMethod::two_point,
                                   .domain = ThroughputDomain(1e-6, 1e9)};

        const double projected = m::projected_per_tx(model, p, l).kwh_per_tx();

        // integer counts: exact agreement with the fixed-count path
        const double n_exact = std::floor(kappa + lambda * l.tps());
        AffineValidatorModel integer_model{.kappa = n_exact, .lambda = 0.0,
                                           .method = FitMethod::two_point,
                                           .domain = model.domain};
        CHECK(m::projected_per_tx(integer_model, p, l).kwh_per_tx() ==
              m::per_tx_consumption(static_cast<std::uint64_t>(n_exact), p, l).kwh_per_tx());

        // |f(l) - lambda*p| <= kappa*p / (l * 3.6e6); the subtraction loses a
        // few ulps of `projected`, so allow that much absolute slack
        const double asymptote = lambda * p.watts() / 3.6e6;
        const double bound = kappa * p.watts() / (l.tps() * 3.6e6);
        CHECK(std::fabs(projected - asymptote) <= bound + 1e-12 * projected);
    }
}

TEST_CASE("per_tx monotone decreasing in throughput") {
    AffineValidatorModel model{.kappa = 3.0, .lambda = 0.5, .method = FitMethod::two_point,
                               .domain = ThroughputDomain(1e-6, 1e6)};
    double prev = m::projected_per_tx(model, PowerDraw(10.0), Throughput(0.01)).kwh_per_tx();
    for (double l = 0.1; l < 1e5; l *= 10.0) {
        const double cur = m::projected_per_tx(model, PowerDraw(10.0), Throughput(l)).kwh_per_tx();
        CHECK(cur < prev);
        prev = cur;
    }
}
