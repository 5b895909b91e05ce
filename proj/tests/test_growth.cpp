#include <catch_amalgamated.hpp>

#include <cmath>

#include "supbound/growth.hpp"
#include "supbound/reports.hpp"

using namespace supbound;

namespace {

EquationSpec airy() { return EquationSpec(1, {-1.0}, EquationSpec::Kappa::Cos); }

SpectralMeasure four_atoms() {
    return SpectralMeasure::from_atoms(
        {{1.0, 0.25}, {-1.0, 0.25}, {2.0, 0.25}, {-2.0, 0.25}});
}

BoundCore log_core() {
    return BoundCore(NFunction::gaussian(), AdmissibleFunction::log_power(1.0), four_atoms(),
                     airy(), 1.0);
}

} // namespace

TEST_CASE("segmentation") {
    const auto seg = Segmentation::geometric(0.5, 1.0, 100);
    CHECK(seg.b(0) == 0.0);
    CHECK(seg.b(3) == Catch::Approx(std::exp(3.0)).epsilon(1e-14));  // ~20.0855
    CHECK(seg.gap(0) == Catch::Approx(std::exp(1.0)).epsilon(1e-14));
    CHECK(seg.gap(2) == Catch::Approx(std::exp(2.0) * (std::exp(1.0) - 1.0)).epsilon(1e-14));
    CHECK(seg.log_b(50) == Catch::Approx(50.0).epsilon(1e-14));

    // first gap L e below 2A is rejected
    CHECK_THROWS_AS(Segmentation::geometric(2.0, 1.0, 10), InvalidParameter);

    const auto exp_seg = Segmentation::from_points(0.5, {0.0, 2.0, 5.0, 9.0});
    CHECK(exp_seg.segment_count() == 3);
    CHECK(exp_seg.gap(1) == 3.0);
    CHECK_THROWS_AS(Segmentation::from_points(0.5, {0.0, 0.5}), InvalidParameter);
    CHECK_THROWS_AS(Segmentation::from_points(0.5, {1.0, 4.0}), InvalidParameter);
}

TEST_CASE("example weights") {
    // D = 2 eps sqrt(2(1+delta)) / (s (1-theta)) = 8 at these parameters
    const auto w = example_weights(1.0, 0.5, 1.0, 1.0, 0.5, 1.0);
    CHECK(w.d_scale() == Catch::Approx(8.0).epsilon(1e-14));

    CHECK_THROWS_AS(example_weights(0.1, 0.5, 1.0, 1.0, 0.5, 1.0), InvalidParameter);

    const auto seg = Segmentation::geometric(0.5, 1.0, 100);
    CHECK(w.c_k(seg, 0) == 0.0);  // weight undefined before L e
    CHECK(w.c_k(seg, 1) == 0.0);  // ln ln(b_1/L) = 0
    CHECK(w.c_k(seg, 2) == Catch::Approx(8.0 * std::sqrt(std::log(2.0))).epsilon(1e-12));
    CHECK(w.at_time(std::exp(std::exp(1.0)) * 1.0) == Catch::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("eps_k majorant and refinement") {
    GrowthEngine engine(log_core(), Segmentation::geometric(0.5, 1.0, 100),
                        example_weights(1.0, 0.5, 1.0, 1.0, 0.5, 1.0));
    CHECK(engine.eps_majorant() == Catch::Approx(1.0).epsilon(1e-12));

    // refinement never exceeds the majorant
    const double refined = engine.eps_k_refined(1, 8, 8);
    CHECK(refined <= engine.eps_majorant() + 1e-15);

    // a zero-frequency unit atom has constant variance: refinement = majorant
    BoundCore flat(NFunction::gaussian(), AdmissibleFunction::log_power(1.0),
                   SpectralMeasure::from_atoms({{0.0, 1.0}}), airy(), 1.0);
    GrowthEngine flat_engine(std::move(flat), Segmentation::geometric(0.5, 1.0, 100),
                             example_weights(1.0, 0.5, 1.0, 1.0, 0.5, 1.0));
    CHECK(flat_engine.eps_k_refined(1, 4, 4) ==
          Catch::Approx(flat_engine.eps_majorant()).epsilon(1e-12));
}

TEST_CASE("segment entropy integral") {
    GrowthEngine engine(log_core(), Segmentation::geometric(0.5, 1.0, 100),
                        example_weights(1.0, 0.5, 1.0, 1.0, 0.5, 1.0));
    // vanishes with delta
    CHECK(engine.i_phi_k(1, 1e-12) < 1e-3);
    // wider segments cost more entropy
    CHECK(engine.i_phi_k(2, 0.5) >= engine.i_phi_k(1, 0.5));
    CHECK(engine.i_phi_k(10, 0.5) > engine.i_phi_k(2, 0.5));
}

TEST_CASE("refined eps_k under a density measure stays below the majorant") {
    BoundCore core(NFunction::gaussian(), AdmissibleFunction::log_power(1.0),
                   SpectralMeasure::from_density(
                       SpectralDensity(SpectralDensity::Name::Gaussian, 1.0, 1.0, 8.0)),
                   airy(), 1.0);
    GrowthEngine engine(std::move(core), Segmentation::geometric(0.5, 1.0, 100),
                        example_weights(1.0, 0.5, 1.0, 1.0, 0.5, 1.0));
    for (std::int64_t k : {0, 1, 2}) {
        const double refined = engine.eps_k_refined(k, 6, 6);
        CHECK(refined > 0.0);
        CHECK(refined <= engine.eps_majorant() + 1e-12);
    }
}

TEST_CASE("iterated-log terms follow the tuned decay law") {
    // with the scale D of the canonical weights, term_k = (ln b_k)^-(1+delta)
    const auto seg = Segmentation::geometric(0.5, 1.0, 1 << 20);
    const double s = 1.0, theta = 0.5, delta = 0.5;
    GrowthEngine engine(log_core(), seg, example_weights(1.0, 0.5, delta, s, theta, 1.0));
    const auto& phi = engine.core().phi();
    for (std::int64_t k : {4, 10, 100, 5000}) {
        const double x = s * engine.c_k(k) * (1.0 - theta) / (2.0 * engine.eps_majorant());
        const double term = std::exp(-phi.conjugate(x));
        CHECK(term == Catch::Approx(std::pow(static_cast<double>(k), -(1.0 + delta)))
                          .epsilon(1e-10));
    }
}

TEST_CASE("series convergence verdicts") {
    const auto seg = Segmentation::geometric(0.5, 1.0, 1 << 30);

    // delta = 3 makes the terms (ln b_k)^-4: converges quickly
    GrowthEngine fast(log_core(), seg, example_weights(1.0, 0.5, 3.0, 1.0, 0.5, 1.0));
    const auto conv = fast.series_sum(1.0, 0.5, SeriesOptions{1 << 30, 50, 1e-16});
    CHECK(conv.converged);
    CHECK(conv.value > 2.0);

    // same weights, small budget: not converged
    const auto trunc = fast.series_sum(1.0, 0.5, SeriesOptions{1000, 50, 1e-16});
    CHECK_FALSE(trunc.converged);

    // constant weights give constant terms: never converges
    const auto seg4 = Segmentation::from_points(0.5, {0.0, 2.0, 4.0, 6.0, 8.0});
    GrowthEngine flat(log_core(), seg4, WeightFunction::custom({3.0, 3.0, 3.0, 3.0}));
    const auto bad = flat.series_sum(8.0, 0.5, SeriesOptions{4, 50, 1e-16});
    CHECK_FALSE(bad.converged);

    // a finite custom list can converge once enough trailing terms are
    // negligible: c_k = k+1 makes the terms gaussian in k
    {
        std::vector<double> b(121), c(120);
        for (int k = 0; k <= 120; ++k) b[k] = 2.0 * k;
        for (int k = 0; k < 120; ++k) c[k] = k + 1.0;
        GrowthEngine ramp(log_core(), Segmentation::from_points(0.5, b),
                          WeightFunction::custom(c));
        const auto ok = ramp.series_sum(1.0, 0.5, SeriesOptions{120, 50, 1e-16});
        CHECK(ok.converged);
        CHECK(ok.k_used < 120);
    }

    // raising s never raises any term
    const auto lo = fast.series_sum(1.0, 0.5, SeriesOptions{100000, 50, 1e-16});
    const auto hi = fast.series_sum(2.0, 0.5, SeriesOptions{100000, 50, 1e-16});
    CHECK(hi.value <= lo.value + 1e-12);
}

TEST_CASE("growth bound on the geometric iterated-log configuration") {
    const auto seg = Segmentation::geometric(0.5, 1.0, 1 << 30);
    GrowthEngine engine(log_core(), seg, example_weights(1.0, 0.5, 3.0, 1.0, 0.5, 1.0), 16);
    const SeriesOptions opts{1 << 30, 50, 1e-16};

    const double thr = engine.threshold_u(1.0, 0.5);
    REQUIRE(std::isfinite(thr));

    const auto v1 = engine.growth_bound(thr * 1.2, 1.0, 0.5, opts);
    CHECK(v1.bound > 0.0);
    CHECK(v1.bound <= 1.0);
    CHECK(v1.covered_from >= 2);

    // gaussian tail factor in closed form: bound = 2 exp(-u^2 / (2 s^2)) * series
    const double u1 = thr * 1.2;
    CHECK(v1.bound ==
          Catch::Approx(std::min(1.0, 2.0 * std::exp(-0.5 * u1 * u1) * v1.series))
              .epsilon(1e-12));

    // nonincreasing in u
    const auto v2 = engine.growth_bound(thr * 1.5, 1.0, 0.5, opts);
    CHECK(v2.bound <= v1.bound);

    CHECK_THROWS_AS(engine.growth_bound(thr * 0.9, 1.0, 0.5, opts), BelowThreshold);
    // s >= u/2 violates the window
    CHECK_THROWS_AS(engine.growth_bound(thr * 1.2, thr, 0.5, opts), SWindowEmpty);
}

TEST_CASE("weights too flat for any segment window") {
    // all series arguments s c_k (1-theta) / (2 eps) stay below 2
    const auto seg4 = Segmentation::from_points(0.5, {0.0, 2.0, 4.0, 6.0, 8.0});
    GrowthEngine engine(log_core(), seg4, WeightFunction::custom({0.1, 0.1, 0.1, 0.1}));
    CHECK_THROWS_AS(engine.growth_bound(100.0, 1.0, 0.5, SeriesOptions{4, 50, 1e-16}),
                    SWindowEmpty);
}

TEST_CASE("growth report") {
    const auto seg = Segmentation::geometric(0.5, 1.0, 1 << 30);
    GrowthEngine engine(log_core(), seg, example_weights(1.0, 0.5, 3.0, 1.0, 0.5, 1.0), 12);
    const double thr = engine.threshold_u(1.0, 0.5);

    const auto rep = growth_report(engine, linspace(thr * 0.9, thr * 2.0, 8), 1.0, 0.5,
                                   SeriesOptions{1 << 30, 50, 1e-16});
    REQUIRE(rep.rows.size() == 8);
    CHECK(rep.segments.size() == 12);
    CHECK_FALSE(rep.rows.front().feasible);
    double prev = 2.0;
    for (const auto& row : rep.rows) {
        if (!row.feasible) continue;
        CHECK(row.bound <= prev);
        prev = row.bound;
    }
}
