#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "nlpf/harness.hpp"
#include "nlpf/snapshot.hpp"
#include "support/oracles.hpp"

using namespace nlpf;

TEST_CASE("initial sinusoid") {
    const GridSpec g = GridSpec::make(1.0, 1.0, 64, 64, -0.5, -0.5);
    const Field phi = initial_sinusoid(g);

    double raw_sum = 0.0;
    for (double x : phi.values()) raw_sum += x;
    CHECK(std::abs(g.h * g.h * raw_sum) <= 1e-13);
    CHECK(norm_inf(phi) <= 0.5 + 1e-15);

    // value at the cell nearest (0.125, 0)
    int bi = 0, bj = 0;
    double best = 1e300;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.m; ++i) {
            const double d = std::hypot(g.cell_x(i) - 0.125, g.cell_y(j));
            if (d < best) {
                best = d;
                bi = i;
                bj = j;
            }
        }
    CHECK(std::abs(phi(bi, bj) - 0.5 * std::sin(3.14159265358979323846 / 4.0)) <=
          2.0 * 3.1416 * g.h);
}

TEST_CASE("initial random") {
    const GridSpec g = GridSpec::make(1.0, 1.0, 32, 32, -0.5, -0.5);
    const Field a = initial_random(g, 0.1, 0.05, 12345);
    const Field b = initial_random(g, 0.1, 0.05, 12345);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.data()[i] == b.data()[i]);

    const Field c = initial_random(g, 0.1, 0.05, 54321);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) differs |= a.data()[i] != c.data()[i];
    CHECK(differs);

    double raw_sum = 0.0;
    for (double x : a.values()) raw_sum += x;
    CHECK(std::abs(g.h * g.h * raw_sum - 0.1 * g.area()) <= 1e-13);

    for (double x : a.values()) CHECK(std::abs(x - 0.1) <= 2.0 * 0.05);
    CHECK_THROWS_AS((void)initial_random(g, 0.0, 0.0, 1), Error);
}

TEST_CASE("restriction and prolongation") {
    const GridSpec gf = GridSpec::make(1.0, 1.0, 16, 16, -0.5, -0.5);

    const Field c_fine(gf, 2.5);
    const Field c_coarse = restrict_field(c_fine);
    CHECK(c_coarse.m() == 8);
    for (double x : c_coarse.values()) CHECK(x == 2.5);

    oracles::Rng rng(31);
    const Field fine = rng.field(gf);
    const Field coarse = restrict_field(fine);
    double sum_f = 0.0, sum_c = 0.0;
    for (double x : fine.values()) sum_f += x;
    for (double x : coarse.values()) sum_c += x;
    const double hf2 = gf.h * gf.h, hc2 = 4.0 * hf2;
    CHECK(hc2 * sum_c == doctest::Approx(hf2 * sum_f).epsilon(1e-14));

    Field spike(gf, 0.0);
    spike(5, 7) = 1.0;
    const Field rs = restrict_field(spike);
    for (int j = 0; j < rs.n(); ++j)
        for (int i = 0; i < rs.m(); ++i)
            CHECK(rs(i, j) == (i == 2 && j == 3 ? 0.25 : 0.0));

    // restrict(prolongate(phi)) is the identity on coarse fields
    const Field coarse0 = rng.field(GridSpec::make(1.0, 1.0, 8, 8, -0.5, -0.5));
    const Field back = restrict_field(prolongate_field(coarse0));
    for (std::size_t i = 0; i < coarse0.size(); ++i)
        CHECK(back.data()[i] == coarse0.data()[i]);
}

TEST_CASE("cauchy error") {
    const GridSpec gc = GridSpec::make(1.0, 1.0, 8, 8, -0.5, -0.5);
    oracles::Rng rng(32);
    const Field coarse = rng.field(gc);
    CHECK(cauchy_error(coarse, prolongate_field(coarse)) == 0.0);

    const Field wrong(GridSpec::make(1.0, 1.0, 24, 24, -0.5, -0.5));
    CHECK_THROWS_AS((void)cauchy_error(coarse, wrong), GridMismatchError);
}

TEST_CASE("convergence study machinery") {
    StudySpec spec;
    spec.equation = Equation::nac;
    spec.kernel = {KernelSpec::Type::gaussian, 100.0, 0.1, 0.0, 0.0, 0};
    spec.gamma_c = 0.0;
    spec.gamma_e = 0.0;
    spec.levels = {32, 64, 128};
    spec.refinement_c = 0.1;
    spec.T = 0.0125;
    spec.init.type = InitSpec::Type::sinusoid;

    const StudyResult result = convergence_study(spec);
    REQUIRE(result.rows.size() == 2);
    CHECK(result.rows[0].coarse_m == 32);
    CHECK(result.rows[0].fine_m == 64);
    CHECK_FALSE(result.rows[0].rate.has_value());
    CHECK(result.rows[0].error > 0.0);
    REQUIRE(result.rows[1].rate.has_value());
    CHECK(*result.rows[1].rate ==
          doctest::Approx(std::log2(result.rows[0].error / result.rows[1].error))
              .epsilon(1e-14));

    // levels run concurrently give identical numbers
    StudySpec threaded = spec;
    threaded.threads = 2;
    const StudyResult r2 = convergence_study(threaded);
    for (std::size_t i = 0; i < result.rows.size(); ++i)
        CHECK(r2.rows[i].error == result.rows[i].error);

    StudySpec bad = spec;
    bad.levels = {32, 96};
    CHECK_THROWS_AS((void)convergence_study(bad), Error);

    // a single level runs fine and yields an empty error table
    StudySpec single = spec;
    single.levels = {32};
    const StudyResult r1 = convergence_study(single);
    CHECK(r1.rows.empty());
    CHECK(r1.runs.size() == 1);
}

TEST_CASE("level-128 run is backend independent") {
    const GridSpec g = GridSpec::make(1.0, 1.0, 128, 128, -0.5, -0.5);
    const KernelGrid kernel = KernelGrid::gaussian(400.0, 0.05, g);
    const ModelParams params = ModelParams::create(Equation::nch, 1.0, 0.0, 1.0, kernel);
    const Field phi0 = initial_sinusoid(g);
    RunOptions opts;
    opts.track_energy = false;

    Field finals[2];
    int slot = 0;
    for (ConvBackend backend : {ConvBackend::fft, ConvBackend::direct}) {
        SolverConfig cfg;
        cfg.backend = backend;
        finals[slot++] = run(phi0, 0.015625, 0.1 * g.h, kernel, params, cfg, opts)
                             .state.phi_curr;
    }
    Field diff(g);
    for (std::size_t i = 0; i < diff.size(); ++i)
        diff.data()[i] = finals[0].data()[i] - finals[1].data()[i];
    CHECK(norm_p(diff, 2.0) <= 1e-10);
}

TEST_CASE("energy decay experiment") {
    DecayConfig cfg;
    cfg.kernel = {KernelSpec::Type::dog, 0.1 / (0.16 * 0.16), 0.16, 0.08 / (0.4 * 0.4), 0.4, 0};
    cfg.m = cfg.n = 32;
    cfg.s = 0.01;
    cfg.T = 0.2;
    cfg.init.type = InitSpec::Type::random;
    cfg.init.amplitude = 0.05;
    cfg.init.seed = 9;

    const DiagnosticsSeries series = energy_decay_experiment(cfg);
    REQUIRE(series.size() == 21);
    for (std::size_t k = 1; k < series.size(); ++k)
        CHECK(series[k].F <= series[0].F + 1e-9);

    // single-step run degenerates to the step-level inequality
    DecayConfig one = cfg;
    one.T = 0.01;
    CHECK(energy_decay_experiment(one).size() == 2);

    // zero initial data gives an identically zero energy series
    const GridSpec g = make_grid(cfg.domain, cfg.m, cfg.n);
    const std::string path = "zero_init.nlpf";
    write_snapshot(path, Field(g, 0.0), 0.0);
    DecayConfig zero = cfg;
    zero.init.type = InitSpec::Type::file;
    zero.init.path = path;
    for (const DiagnosticsRow& row : energy_decay_experiment(zero)) {
        CHECK(row.F == 0.0);
        CHECK(row.pseudo_E == 0.0);
    }
    std::remove(path.c_str());
}
