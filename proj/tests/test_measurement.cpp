#include <doctest.h>

#include <cmath>

#include "qcorr/measurement.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/qstate.hpp"

using namespace qcorr;

TEST_CASE("povm validation") {
    Povm comp = Povm::computational_projective(3);
    CHECK(comp.n_outcomes() == 3);
    comp.validate();

    Matrix h(2, 2);
    h << 0.5, 0.5, 0.5, 0.5;
    Matrix m(2, 2);
    m << 0.5, -0.5, -0.5, 0.5;
    Povm pm(2, {h, m});
    pm.validate();

    CHECK_THROWS_AS(Povm(2, {h, h}), ArgumentError);             // sums to 2|+><+|
    Matrix nonherm(2, 2);
    nonherm << 1.0, Complex(0, 1), Complex(0, 2), 0.0;
    CHECK_THROWS_AS(Povm(2, {nonherm, Matrix::Identity(2, 2) - nonherm}), ArgumentError);
}

TEST_CASE("projective_from_unitary builds a valid projective povm") {
    Matrix u(2, 2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    Povm p = Povm::projective_from_unitary(u);
    p.validate();
    CHECK((p.effects[0] * p.effects[0] - p.effects[0]).norm() < 1e-12);
}

TEST_CASE("known classical table mutual information") {
    RealMatrix t(2, 2);
    t << 1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0;
    JointDistribution jd(t);
    CHECK(jd.marginal_a(0) == doctest::Approx(0.5));
    CHECK(classical_mutual_information(jd) == doctest::Approx(0.0817041659).epsilon(1e-7));
}

TEST_CASE("shannon entropy basics") {
    RealVector p(2);
    p << 0.5, 0.5;
    CHECK(shannon_entropy(p) == doctest::Approx(1.0));
    RealVector q(3);
    q << 1.0, 0.0, 0.0;
    CHECK(shannon_entropy(q) == doctest::Approx(0.0));
}

TEST_CASE("measuring a side is non-selectively consistent with the marginal") {
    DensityMatrix rho = random_density(DimSpec({2, 3}), 4, 31);
    Povm povm = Povm::computational_projective(2);
    ConditionalEnsemble ens = measure_side(rho, Side::A, povm);
    Matrix avg = Matrix::Zero(3, 3);
    for (int i = 0; i < ens.probs.size(); ++i) avg += ens.probs[i] * ens.states[i].entries();
    CHECK((avg - partial_trace(rho, {1}).entries()).norm() < 1e-10);
    CHECK(ens.probs.sum() == doctest::Approx(1.0));
}

TEST_CASE("joint distribution marginals match single-side measurements") {
    DensityMatrix rho = random_density(DimSpec({2, 2}), 3, 55);
    Povm pa = Povm::computational_projective(2);
    Matrix u(2, 2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    Povm pb = Povm::projective_from_unitary(u);
    JointDistribution jd = joint_distribution(rho, pa, pb);
    ConditionalEnsemble ea = measure_side(rho, Side::A, pa);
    for (int i = 0; i < 2; ++i) CHECK(jd.marginal_a(i) == doctest::Approx(ea.probs(i)).epsilon(1e-9));
    ConditionalEnsemble eb = measure_side(rho, Side::B, pb);
    for (int j = 0; j < 2; ++j) CHECK(jd.marginal_b(j) == doctest::Approx(eb.probs(j)).epsilon(1e-9));
}

TEST_CASE("data processing: measured correlations never exceed quantum mutual information") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        DensityMatrix rho = random_density(DimSpec({2, 2}), 4, derive_seed(71, s));
        const double qmi = mutual_information(rho).value;
        Povm pa = Povm::computational_projective(2);
        Povm pb = Povm::computational_projective(2);
        const double cmi = classical_mutual_information(joint_distribution(rho, pa, pb));
        CHECK(cmi <= qmi + 1e-9);
    }
}

TEST_CASE("holevo quantity is nonnegative and bounded by ensemble entropy") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        DensityMatrix rho = random_density(DimSpec({2, 3}), 5, derive_seed(81, s));
        ConditionalEnsemble ens = measure_side(rho, Side::A, Povm::computational_projective(2));
        const double chi = holevo_quantity(ens);
        CHECK(chi >= -1e-10);
        Matrix avg = Matrix::Zero(3, 3);
        for (int i = 0; i < ens.probs.size(); ++i) avg += ens.probs[i] * ens.states[i].entries();
        CHECK(chi <= von_neumann_entropy(DensityMatrix(DimSpec({3}), avg)) + 1e-9);
    }
}

TEST_CASE("trine state measured in its classical basis") {
    DensityMatrix trine = make_trine();
    ConditionalEnsemble ens = measure_side(trine, Side::A, Povm::computational_projective(3));
    REQUIRE(ens.probs.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(ens.probs(i) == doctest::Approx(1.0 / 3.0));
        // conditionals are the pure trine qubits
        CHECK(von_neumann_entropy(ens.states[i]) == doctest::Approx(0.0).epsilon(1e-9));
    }
    CHECK(holevo_quantity(ens) == doctest::Approx(1.0).epsilon(1e-9));
}
