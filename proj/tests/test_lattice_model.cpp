#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mcasim/errors.hpp"
#include "mcasim/model.hpp"
#include "mcasim/statevector.hpp"
#include "test_util.hpp"

using namespace mcasim;
using testutil::uniform01;

namespace {

// Zero-field ground state: sites 1,2 along +b and sites 3,4 along -b.
AnsatzParams chain_state() {
    AnsatzParams a;
    a.theta = {M_PI / 2, M_PI / 2, M_PI / 2, M_PI / 2};
    a.phi = {M_PI / 2, M_PI / 2, -M_PI / 2, -M_PI / 2};
    return a;
}

AnsatzParams random_angles(std::mt19937_64& gen) {
    AnsatzParams a;
    for (int n = 0; n < 4; ++n) {
        auto [t, p] = testutil::random_direction(gen);
        a.theta[n] = t;
        a.phi[n] = p;
    }
    return a;
}

FieldSpec bc_field(double tesla, double alpha_rad) {
    return {tesla, alpha_rad, FieldPlane::bc};
}

// The tied 8-qubit product state the solver module prepares; duplicated here
// so the model tests do not depend on the solver.
StateVector tied_state(const AnsatzParams& a) {
    StateVector s = init_state(8);
    for (int n = 0; n < 4; ++n) {
        apply_ry(s, n, a.theta[n]);
        apply_rz(s, n, a.phi[n]);
        apply_ry(s, n + 4, a.theta[n]);
        apply_rz(s, n + 4, a.phi[n]);
    }
    return s;
}

int count_axis_terms(const WeightedPauliSum& h, Axis axis) {
    int count = 0;
    for (const auto& t : h.terms) {
        int non_identity = 0;
        bool match = true;
        for (Axis a : t.string.axes) {
            if (a == Axis::I) continue;
            ++non_identity;
            if (a != axis) match = false;
        }
        if (non_identity == 1 && match) ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("hamiltonian term counts and coefficients") {
    const auto params = ModelParams::defaults();

    auto h0 = build_hamiltonian(params, bc_field(0.0, 0.0));
    CHECK(h0.size() == 30);

    auto hb = build_hamiltonian(params, bc_field(1.0, 0.0));
    CHECK(hb.size() == 34);
    CHECK(count_axis_terms(hb, Axis::Y) == 4);
    for (const auto& t : hb.terms) {
        int weight = 0;
        for (Axis a : t.string.axes) weight += (a != Axis::I);
        if (weight == 1) CHECK(t.coeff == doctest::Approx(-0.05788381806).epsilon(1e-12));
    }

    auto hc = build_hamiltonian(params, bc_field(1.0, M_PI / 2));
    CHECK(hc.size() == 34);
    CHECK(count_axis_terms(hc, Axis::Z) == 4);
    CHECK(count_axis_terms(hc, Axis::Y) == 0);

    auto hbc = build_hamiltonian(params, bc_field(1.0, M_PI / 6));
    CHECK(hbc.size() == 38);

    auto ha = build_hamiltonian(params, FieldSpec{1.0, 0.0, FieldPlane::fixed_a});
    CHECK(ha.size() == 34);
    CHECK(count_axis_terms(ha, Axis::X) == 4);

    // J1 chain bond: XX on qubits 0,1 with coefficient j1 * s^2 / 2.
    bool found = false;
    for (const auto& t : h0.terms) {
        if (t.string.axes[0] == Axis::X && t.string.axes[1] == Axis::X &&
            t.string.axes[2] == Axis::I && t.string.axes[4] == Axis::I) {
            CHECK(t.coeff == doctest::Approx(-13.03750).epsilon(1e-12));
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("all emitted coefficients are real and finite") {
    auto h = build_hamiltonian(ModelParams::defaults(), bc_field(2.0, 0.7));
    for (const auto& t : h.terms) CHECK(std::isfinite(t.coeff));
}

TEST_CASE("zero-field chain state energies") {
    const auto params = ModelParams::defaults();
    const auto b = energy_breakdown(params, bc_field(0.0, 0.0), chain_state());

    CHECK(b.e_j1 == doctest::Approx(-26.075).epsilon(1e-12));
    CHECK(b.e_j1p == doctest::Approx(25.7825).epsilon(1e-12));
    CHECK(b.e_j2 == doctest::Approx(-21.795).epsilon(1e-12));
    CHECK(b.e_j2p == doctest::Approx(-16.2175).epsilon(1e-12));
    CHECK(b.exchange() == doctest::Approx(-38.3050).epsilon(1e-12));
    CHECK(b.e_zeeman == 0.0);
    CHECK(b.e_mca == doctest::Approx(-0.00092).epsilon(1e-12));
    CHECK(b.per_site().e_mca == doctest::Approx(-0.00023).epsilon(1e-12));
    CHECK(b.total == doctest::Approx(-38.30592).epsilon(1e-12));
}

TEST_CASE("all spins along +c") {
    const auto params = ModelParams::defaults();
    AnsatzParams up;  // theta = 0 everywhere
    const auto b = energy_breakdown(params, bc_field(0.0, 0.0), up);
    CHECK(b.exchange() == doctest::Approx(-13.845).epsilon(1e-12));
    CHECK(b.e_mca == doctest::Approx(0.00040).epsilon(1e-12));
    CHECK(b.e_zeeman == 0.0);
}

TEST_CASE("pure Zeeman alignment") {
    ModelParams p = ModelParams::defaults();
    p.j1 = p.j1p = p.j2 = p.j2p = 0.0;
    p.ka = p.kb = p.kc = 0.0;
    AnsatzParams along_b;
    along_b.theta = {M_PI / 2, M_PI / 2, M_PI / 2, M_PI / 2};
    along_b.phi = {M_PI / 2, M_PI / 2, M_PI / 2, M_PI / 2};
    const double e = classical_energy(p, bc_field(1.0, 0.0), along_b);
    CHECK(e == doctest::Approx(-4.0 * 0.05788381806).epsilon(1e-12));
}

TEST_CASE("zeroed parameters give zero breakdown") {
    ModelParams p = ModelParams::defaults();
    p.j1 = p.j1p = p.j2 = p.j2p = p.ka = p.kb = p.kc = 0.0;
    std::mt19937_64 gen(2);
    const auto b = energy_breakdown(p, bc_field(0.0, 0.0), random_angles(gen));
    CHECK(b.e_j1 == 0.0);
    CHECK(b.e_j1p == 0.0);
    CHECK(b.e_j2 == 0.0);
    CHECK(b.e_j2p == 0.0);
    CHECK(b.e_zeeman == 0.0);
    CHECK(b.e_mca == 0.0);
    CHECK(b.total == 0.0);
}

TEST_CASE("breakdown components sum to the total") {
    std::mt19937_64 gen(8);
    const auto params = ModelParams::defaults();
    for (int trial = 0; trial < 100; ++trial) {
        const auto f = bc_field(10.0 * uniform01(gen), M_PI * uniform01(gen));
        const auto b = energy_breakdown(params, f, random_angles(gen));
        const double sum = b.e_j1 + b.e_j1p + b.e_j2 + b.e_j2p + b.e_zeeman + b.e_mca;
        CHECK(std::abs(sum - b.total) < 1e-12);
    }
}

TEST_CASE("quantum and classical energies agree") {
    std::mt19937_64 gen(13);
    const auto params = ModelParams::defaults();
    for (int trial = 0; trial < 200; ++trial) {
        const auto angles = random_angles(gen);
        FieldSpec f;
        switch (gen() % 4) {
            case 0: f = bc_field(5.0 * uniform01(gen), M_PI * uniform01(gen)); break;
            case 1: f = FieldSpec{5.0 * uniform01(gen), 0.0, FieldPlane::fixed_b}; break;
            case 2: f = FieldSpec{5.0 * uniform01(gen), 0.0, FieldPlane::fixed_a}; break;
            default: f = FieldSpec{5.0 * uniform01(gen), 0.0, FieldPlane::fixed_c}; break;
        }
        const double e_classical = classical_energy(params, f, angles);
        const double e_quantum = expectation(tied_state(angles), build_hamiltonian(params, f));
        CHECK(std::abs(e_quantum - e_classical) <= 1e-10 * std::max(1.0, std::abs(e_classical)));
    }
}

TEST_CASE("expectation is term-order independent") {
    std::mt19937_64 gen(21);
    const auto params = ModelParams::defaults();
    auto h = build_hamiltonian(params, bc_field(1.5, 0.4));
    const auto s = tied_state(random_angles(gen));
    const double before = expectation(s, h);
    std::shuffle(h.terms.begin(), h.terms.end(), gen);
    const double after = expectation(s, h);
    CHECK(std::abs(after - before) <= 1e-12 * std::max(1.0, std::abs(before)));
}

TEST_CASE("gradient vanishes at the chain minimum") {
    const auto g = classical_gradient(ModelParams::defaults(), bc_field(0.0, 0.0), chain_state());
    double norm = 0.0;
    for (double v : g) norm += v * v;
    CHECK(std::sqrt(norm) < 1e-9);
}

TEST_CASE("gradient matches central finite differences") {
    std::mt19937_64 gen(31);
    const auto params = ModelParams::defaults();
    const double h = 1e-6;
    for (int trial = 0; trial < 25; ++trial) {
        const auto f = bc_field(1.0 + 3.0 * uniform01(gen), M_PI * uniform01(gen));
        const auto angles = random_angles(gen);
        const auto grad = classical_gradient(params, f, angles);
        auto x = angles.flat();
        for (int d = 0; d < 8; ++d) {
            auto xp = x, xm = x;
            xp[d] += h;
            xm[d] -= h;
            const double fd = (classical_energy(params, f, AnsatzParams::from_flat(xp)) -
                               classical_energy(params, f, AnsatzParams::from_flat(xm))) /
                              (2.0 * h);
            const double scale = std::max({1.0, std::abs(fd), std::abs(grad[d])});
            CHECK(std::abs(grad[d] - fd) <= 1e-6 * scale);
        }
    }
}

TEST_CASE("single free spin in a pure b field") {
    ModelParams p = ModelParams::defaults();
    p.j1 = p.j1p = p.j2 = p.j2p = p.ka = p.kb = p.kc = 0.0;
    AnsatzParams a;
    a.theta = {M_PI / 2, M_PI / 2, M_PI / 2, M_PI / 2};
    a.phi = {0.0, 0.0, 0.0, 0.0};
    const auto g = classical_gradient(p, bc_field(1.0, 0.0), a);
    // dE/dphi_1 of -g mu_B H s sin(theta) sin(phi) at theta = pi/2, phi = 0.
    CHECK(g[4] == doctest::Approx(-2.0 * 0.05788381806 * 0.5).epsilon(1e-12));
}

TEST_CASE("exchange is rotation invariant, MCA is not") {
    std::mt19937_64 gen(41);
    const auto params = ModelParams::defaults();
    const auto f = bc_field(0.0, 0.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto angles = random_angles(gen);
        const auto rot = testutil::random_rotation(gen);
        AnsatzParams rotated;
        for (int n = 0; n < 4; ++n) {
            const auto v = testutil::apply_rotation(rot, angles.bloch(n));
            auto [t, ph] = testutil::vector_to_angles(v);
            rotated.theta[n] = t;
            rotated.phi[n] = ph;
        }
        const auto b0 = energy_breakdown(params, f, angles);
        const auto b1 = energy_breakdown(params, f, rotated);
        CHECK(std::abs(b0.exchange() - b1.exchange()) <= 1e-10);
    }

    // A quarter turn about c moves weight between the a and b easy directions.
    AnsatzParams along_b = chain_state();
    AnsatzParams along_a = chain_state();
    for (int n = 0; n < 4; ++n) along_a.phi[n] -= M_PI / 2;
    const double mca_b = energy_breakdown(params, f, along_b).e_mca;
    const double mca_a = energy_breakdown(params, f, along_a).e_mca;
    CHECK(std::abs(mca_b - mca_a) > 1e-5);

    // A half turn about c is an MCA symmetry.
    AnsatzParams flipped = chain_state();
    for (int n = 0; n < 4; ++n) flipped.phi[n] += M_PI;
    CHECK(energy_breakdown(params, f, flipped).e_mca == doctest::Approx(mca_b).epsilon(1e-12));
}

TEST_CASE("single-site anisotropy ordering: easy b, intermediate a, hard c") {
    const auto params = ModelParams::defaults();
    auto mca_of = [&](double theta, double phi) {
        AnsatzParams a;
        a.theta = {theta, theta, theta, theta};
        a.phi = {phi, phi, phi, phi};
        return energy_breakdown(params, bc_field(0.0, 0.0), a).per_site().e_mca;
    };
    const double eb = mca_of(M_PI / 2, M_PI / 2);
    const double ea = mca_of(M_PI / 2, 0.0);
    const double ec = mca_of(0.0, 0.0);
    CHECK(eb == doctest::Approx(-params.kb).epsilon(1e-12));
    CHECK(ea == doctest::Approx(-params.ka).epsilon(1e-12));
    CHECK(ec == doctest::Approx(params.kc).epsilon(1e-12));
    CHECK(eb < ea);
    CHECK(ea < ec);
}

TEST_CASE("default anisotropy-to-exchange ratio") {
    const auto p = ModelParams::defaults();
    CHECK(std::abs(p.kb / std::abs(p.j1) - 2.205e-6) < 5e-10);
}

TEST_CASE("invalid parameters and angles are rejected") {
    ModelParams bad = ModelParams::defaults();
    bad.s = 0.0;
    CHECK_THROWS_AS(bad.validate(), config_error);
    bad = ModelParams::defaults();
    bad.twin_fraction = 1.5;
    CHECK_THROWS_AS(bad.validate(), config_error);

    AnsatzParams nan_angles;
    nan_angles.theta[2] = NAN;
    CHECK_THROWS_AS(
        classical_energy(ModelParams::defaults(), bc_field(0.0, 0.0), nan_angles),
        usage_error);

    FieldSpec f{-1.0, 0.0, FieldPlane::fixed_b};
    CHECK_THROWS_AS(f.validate(), config_error);
}

TEST_CASE("shot sampling hides the MCA subtotal inside the exchange noise floor") {
    // Sample the exchange-only and MCA-only pieces of the Hamiltonian at the
    // zero-field ground state with 1e4 shots per term. The MCA piece
    // (-0.00092 meV) sits far below the shot noise of the full energy
    // estimate, while the exchange piece is resolved cleanly.
    const auto params = ModelParams::defaults();
    const auto f = bc_field(0.0, 0.0);
    const auto state = tied_state(chain_state());

    ModelParams exch_only = params;
    exch_only.ka = exch_only.kb = exch_only.kc = 0.0;
    ModelParams mca_only = params;
    mca_only.j1 = mca_only.j1p = mca_only.j2 = mca_only.j2p = 0.0;
    const auto h_exch = build_hamiltonian(exch_only, f);
    const auto h_mca = build_hamiltonian(mca_only, f);

    const long shots = 10000;
    // Analytic shot noise of the full energy estimate.
    double var = 0.0;
    for (const auto* h : {&h_exch, &h_mca})
        for (const auto& t : h->terms) {
            const double e = expectation(state, t.string);
            var += t.coeff * t.coeff * (1.0 - e * e) / static_cast<double>(shots);
        }
    const double sigma = std::sqrt(var);
    CHECK(sigma == doctest::Approx(0.531).epsilon(0.01));

    const double mca_est = sample_expectation(state, h_mca, shots, 901);
    const double exch_est = sample_expectation(state, h_exch, shots, 902);
    CHECK(std::abs(mca_est) < 3.0 * sigma);
    CHECK(std::abs(exch_est - (-38.305)) < 3.0 * sigma);
}
