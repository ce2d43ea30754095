#include <doctest.h>

#include <cmath>
#include <random>

#include "qcorr/measures.hpp"
#include "qcorr/povm_opt.hpp"
#include "qcorr/qstate.hpp"

using namespace qcorr;

namespace {

std::vector<double> gaussian_params(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<double> p(n);
    for (double& v : p) v = g(rng);
    return p;
}

}  // namespace

TEST_CASE("rank-1 parameterization always yields a valid povm") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const int d = 2 + static_cast<int>(s % 3);
        const int k = d * d;
        Povm p = parameterize_rank1(gaussian_params(2 * k * d, s), d, k);
        p.validate();
        CHECK(static_cast<int>(p.n_outcomes()) == k);
        for (const Matrix& e : p.effects)  // rank-1: E^2 = tr(E) E
            CHECK((e * e - e.trace() * e).norm() < 1e-10);
    }
    // rank-deficient raw input is perturbed into a valid povm
    std::vector<double> zeros(2 * 4 * 2, 0.0);
    zeros[0] = 1.0;  // only one nonzero row
    Povm p = parameterize_rank1(zeros, 2, 4);
    p.validate();
}

TEST_CASE("general parameterization yields a valid povm") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<Matrix> mats;
    for (int i = 0; i < 5; ++i) {
        Matrix b(3, 3);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) b(r, c) = Complex(g(rng), g(rng));
        mats.push_back(b);
    }
    Povm p = parameterize_general(mats);
    p.validate();
    CHECK(p.n_outcomes() == 5);
}

TEST_CASE("rank1 params round-trip a projective povm") {
    Povm comp = Povm::computational_projective(3);
    std::vector<double> params = rank1_params_from_povm(comp, 3);
    Povm back = parameterize_rank1(params, 3, 3);
    for (int i = 0; i < 3; ++i) CHECK((back.effects[i] - comp.effects[i]).norm() < 1e-10);
}

TEST_CASE("certificate soundness: reported value is reproduced by the certificate") {
    DensityMatrix rho = random_density(DimSpec({2, 2}), 4, 17);
    OptConfig cfg;
    cfg.restarts = 4;
    cfg.max_iters = 300;
    cfg.seed = 5;
    OptResult r = maximize_single(rho, Side::A, cfg);
    ConditionalEnsemble ens = measure_side(rho, Side::A, r.certificate);
    CHECK(holevo_quantity(ens) == doctest::Approx(r.value).epsilon(1e-8));
    CHECK(r.restarts_used >= cfg.restarts);
    CHECK(!r.best_restart_trace.empty());
}

TEST_CASE("more restarts never lower the result at a fixed seed") {
    DensityMatrix rho = random_density(DimSpec({2, 3}), 3, 23);
    OptConfig lo, hi;
    lo.restarts = 1;
    hi.restarts = 5;
    lo.max_iters = hi.max_iters = 200;
    lo.seed = hi.seed = 11;
    const double v_lo = maximize_single(rho, Side::A, lo).value;
    const double v_hi = maximize_single(rho, Side::A, hi).value;
    CHECK(v_hi >= v_lo - 1e-12);  // the low-restart starts are a prefix of the high-restart ones
}

TEST_CASE("seeded rank-1 search dominates its projective seed") {
    DensityMatrix rho = random_density(DimSpec({2, 2}), 4, 29);
    OptConfig proj;
    proj.mode = OptMode::Projective;
    proj.restarts = 3;
    proj.max_iters = 200;
    proj.seed = 2;
    OptResult rp = maximize_single(rho, Side::A, proj);
    OptConfig r1;
    r1.restarts = 3;
    r1.max_iters = 200;
    r1.seed = 2;
    r1.seeds_in = {rp.certificate};
    OptResult rr = maximize_single(rho, Side::A, r1);
    CHECK(rr.value >= rp.value - 1e-9);
}

TEST_CASE("single-side search recovers exact values on canonical states") {
    OptConfig cfg;
    cfg.restarts = 2;
    cfg.max_iters = 200;
    SUBCASE("epr") {
        OptResult r = maximize_single(epr_state().to_density(), Side::A, cfg);
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("cc") {
        OptResult r = maximize_single(cc_state(), Side::B, cfg);
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("product state has zero correlation") {
        DensityMatrix prod = tensor(random_density(DimSpec({2}), 2, 1), random_density(DimSpec({2}), 2, 2));
        OptResult r = maximize_single(prod, Side::A, cfg);
        CHECK(r.value == doctest::Approx(0.0).epsilon(1e-8));
    }
}

TEST_CASE("product search recovers the cc state's symmetric correlation") {
    OptConfig cfg;
    cfg.restarts = 2;
    cfg.max_iters = 200;
    OptResult r = maximize_product(cc_state(), cfg, cfg, 3);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
    REQUIRE(r.certificate_b.has_value());
    r.certificate.validate();
    r.certificate_b->validate();
}

TEST_CASE("config validation") {
    OptConfig cfg;
    cfg.restarts = -1;
    CHECK_THROWS_AS(cfg.validate(2), ArgumentError);
    cfg.restarts = 1;
    cfg.mode = OptMode::Projective;
    cfg.n_outcomes = 5;
    CHECK_THROWS_AS(cfg.validate(2), ArgumentError);
    cfg.n_outcomes = 0;
    CHECK(cfg.outcomes_for(3) == 3);
    cfg.mode = OptMode::Rank1Stiefel;
    CHECK(cfg.outcomes_for(3) == 9);
}

TEST_CASE("thread cap is settable and harmless on results") {
    DensityMatrix rho = random_density(DimSpec({2, 2}), 2, 99);
    OptConfig cfg;
    cfg.restarts = 3;
    cfg.max_iters = 150;
    set_max_threads(1);
    const double v1 = maximize_single(rho, Side::A, cfg).value;
    set_max_threads(4);
    const double v4 = maximize_single(rho, Side::A, cfg).value;
    set_max_threads(1);
    CHECK(v1 == doctest::Approx(v4).epsilon(1e-12));
}
