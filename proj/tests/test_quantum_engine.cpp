#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "mcasim/errors.hpp"
#include "mcasim/statevector.hpp"
#include "test_util.hpp"

using namespace mcasim;
using testutil::uniform01;

namespace {

// Brute-force reference: build the full 2^n x 2^n matrix of a Pauli string by
// Kronecker products and evaluate <psi|M|psi> directly. Independent of the
// engine's bit-mask traversal.
using cd = std::complex<double>;

std::vector<cd> dense_pauli(const PauliString& p) {
    static const cd mats[4][4] = {
        {1, 0, 0, 1},          // I
        {0, 1, 1, 0},          // X
        {0, cd(0, -1), cd(0, 1), 0},  // Y
        {1, 0, 0, -1},         // Z
    };
    const std::size_t n = p.size();
    std::vector<cd> m = {1.0};
    std::size_t dim = 1;
    // Qubit k is bit k of the index, so qubit n-1 is the leftmost kron factor:
    // M = P_{n-1} (x) ... (x) P_0, accumulated high-to-low.
    for (std::size_t q = n; q-- > 0;) {
        const cd* a = mats[static_cast<int>(p.axes[q])];
        std::vector<cd> out(4 * dim * dim);
        for (std::size_t i = 0; i < 2 * dim; ++i)
            for (std::size_t j = 0; j < 2 * dim; ++j)
                out[i * 2 * dim + j] = m[(i / 2) * dim + (j / 2)] * a[(i % 2) * 2 + (j % 2)];
        m = std::move(out);
        dim *= 2;
    }
    return m;
}

double dense_expectation(const StateVector& s, const PauliString& p) {
    const auto m = dense_pauli(p);
    const std::size_t dim = s.dim();
    cd acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        cd row = 0.0;
        for (std::size_t j = 0; j < dim; ++j) row += m[i * dim + j] * s.amps[j];
        acc += std::conj(s.amps[i]) * row;
    }
    return acc.real();
}

StateVector random_product_state(int n, std::mt19937_64& gen) {
    StateVector s = init_state(n);
    for (int q = 0; q < n; ++q) {
        auto [theta, phi] = testutil::random_direction(gen);
        apply_ry(s, q, theta);
        apply_rz(s, q, phi);
    }
    return s;
}

}  // namespace

TEST_CASE("init_state basis states") {
    auto s1 = init_state(1);
    REQUIRE(s1.amps.size() == 2);
    CHECK(s1.amps[0] == cd(1.0));
    CHECK(s1.amps[1] == cd(0.0));

    auto s2 = init_state(2);
    REQUIRE(s2.amps.size() == 4);
    CHECK(s2.amps[0] == cd(1.0));
    for (int i = 1; i < 4; ++i) CHECK(s2.amps[i] == cd(0.0));

    auto s8 = init_state(8);
    REQUIRE(s8.amps.size() == 256);
    CHECK(std::abs(s8.amps[0] - 1.0) == 0.0);
    CHECK(norm_sq(s8) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("init_state rejects out-of-range register sizes") {
    CHECK_THROWS_AS(init_state(0), config_error);
    CHECK_THROWS_AS(init_state(-3), config_error);
    CHECK_THROWS_AS(init_state(25), config_error);
}

TEST_CASE("apply_ry basics") {
    auto s = init_state(1);
    apply_ry(s, 0, 0.0);
    CHECK(s.amps[0].real() == doctest::Approx(1.0).epsilon(1e-15));

    s = init_state(1);
    apply_ry(s, 0, M_PI);
    CHECK(std::abs(s.amps[1]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(s.amps[0]) < 1e-12);

    s = init_state(1);
    apply_ry(s, 0, M_PI / 2);
    CHECK(expectation(s, PauliString::parse("X")) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(apply_ry(s, 1, 0.1), usage_error);
    CHECK_THROWS_AS(apply_ry(s, -1, 0.1), usage_error);
    CHECK_THROWS_AS(apply_ry(s, 0, NAN), usage_error);
}

TEST_CASE("apply_rz basics") {
    auto s = init_state(1);
    apply_rz(s, 0, 1.234);
    CHECK(expectation(s, PauliString::parse("Z")) == doctest::Approx(1.0).epsilon(1e-12));

    s = init_state(1);
    apply_ry(s, 0, M_PI / 2);
    apply_rz(s, 0, M_PI / 2);
    CHECK(expectation(s, PauliString::parse("Y")) == doctest::Approx(1.0).epsilon(1e-12));

    s = init_state(1);
    apply_ry(s, 0, M_PI / 2);
    apply_rz(s, 0, M_PI);
    CHECK(expectation(s, PauliString::parse("X")) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("expectation on eigenstates and product states") {
    auto s = init_state(2);
    WeightedPauliSum z0;
    z0.add(1.0, PauliString::parse("ZI"));
    CHECK(expectation(s, z0) == doctest::Approx(1.0).epsilon(1e-15));

    apply_ry(s, 0, M_PI / 2);
    apply_ry(s, 1, M_PI / 2);
    WeightedPauliSum xx;
    xx.add(1.0, PauliString::parse("XX"));
    CHECK(expectation(s, xx) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identity string evaluates to exactly 1") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 5; ++trial) {
        auto s = random_product_state(4, gen);
        CHECK(expectation(s, PauliString::identity(4)) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("expectation matches dense brute force on random product states") {
    std::mt19937_64 gen(42);
    const char axes[] = {'I', 'X', 'Y', 'Z'};
    for (int trial = 0; trial < 20; ++trial) {
        auto s = random_product_state(3, gen);
        std::string label(3, 'I');
        for (auto& ch : label) ch = axes[gen() % 4];
        const auto p = PauliString::parse(label);
        CHECK(expectation(s, p) == doctest::Approx(dense_expectation(s, p)).epsilon(1e-12));
    }
}

TEST_CASE("expectation input validation") {
    auto s = init_state(2);
    WeightedPauliSum wrong;
    wrong.add(1.0, PauliString::parse("ZZZ"));
    CHECK_THROWS_AS(expectation(s, wrong), usage_error);

    s.amps[0] = 2.0;  // denormalized on purpose
    CHECK_THROWS_AS(expectation(s, PauliString::parse("ZI")), invariant_error);
}

TEST_CASE("norm preserved across long random gate sequences") {
    std::mt19937_64 gen(7);
    auto s = init_state(8);
    for (int k = 0; k < 10000; ++k) {
        const int q = static_cast<int>(gen() % 8);
        const double ang = 2.0 * M_PI * uniform01(gen);
        if (gen() & 1)
            apply_ry(s, q, ang);
        else
            apply_rz(s, q, ang);
    }
    CHECK(std::abs(norm_sq(s) - 1.0) < 1e-10);
}

TEST_CASE("single-qubit Bloch identities") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 200; ++trial) {
        const double theta = 2.0 * M_PI * (uniform01(gen) - 0.5);
        const double phi = 2.0 * M_PI * (uniform01(gen) - 0.5);
        auto s = init_state(1);
        apply_ry(s, 0, theta);
        apply_rz(s, 0, phi);
        CHECK(expectation(s, PauliString::parse("X")) ==
              doctest::Approx(std::sin(theta) * std::cos(phi)).epsilon(1e-12));
        CHECK(expectation(s, PauliString::parse("Y")) ==
              doctest::Approx(std::sin(theta) * std::sin(phi)).epsilon(1e-12));
        CHECK(expectation(s, PauliString::parse("Z")) ==
              doctest::Approx(std::cos(theta)).epsilon(1e-12));
    }
}

TEST_CASE("Pauli expectations stay inside [-1, 1]") {
    std::mt19937_64 gen(5);
    const char axes[] = {'I', 'X', 'Y', 'Z'};
    for (int trial = 0; trial < 50; ++trial) {
        auto s = random_product_state(5, gen);
        std::string label(5, 'I');
        for (auto& ch : label) ch = axes[gen() % 4];
        const double e = expectation(s, PauliString::parse(label));
        CHECK(e >= -1.0 - 1e-12);
        CHECK(e <= 1.0 + 1e-12);
    }
}

TEST_CASE("product factorization of Pauli-string expectations") {
    std::mt19937_64 gen(19);
    const char axes[] = {'I', 'X', 'Y', 'Z'};
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 6;
        std::vector<std::pair<double, double>> angles;
        auto s = init_state(n);
        for (int q = 0; q < n; ++q) {
            auto a = testutil::random_direction(gen);
            angles.push_back(a);
            apply_ry(s, q, a.first);
            apply_rz(s, q, a.second);
        }
        std::string label(n, 'I');
        for (auto& ch : label) ch = axes[gen() % 4];

        double product = 1.0;
        for (int q = 0; q < n; ++q) {
            if (label[q] == 'I') continue;
            auto s1 = init_state(1);
            apply_ry(s1, 0, angles[q].first);
            apply_rz(s1, 0, angles[q].second);
            product *= expectation(s1, PauliString::parse(std::string(1, label[q])));
        }
        CHECK(expectation(s, PauliString::parse(label)) ==
              doctest::Approx(product).epsilon(1e-12));
    }
}

TEST_CASE("sample_expectation degenerate and generic distributions") {
    auto s = init_state(1);
    WeightedPauliSum z;
    z.add(1.0, PauliString::parse("Z"));
    for (long shots : {1L, 10L, 1000L})
        CHECK(sample_expectation(s, z, shots, 123) == 1.0);

    CHECK_THROWS_AS(sample_expectation(s, z, 0, 1), usage_error);

    // Equatorial state: <Z> = 0, binomial standard error 1/sqrt(shots) = 0.01.
    apply_ry(s, 0, M_PI / 2);
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const double est = sample_expectation(s, z, 10000, seed);
        CHECK(std::abs(est) < 0.035);  // 3.5 standard errors
    }
}

TEST_CASE("sample_expectation converges to the exact expectation") {
    std::mt19937_64 gen(77);
    const long shots = 1000000;
    const double bound = 5.0 / std::sqrt(static_cast<double>(shots));
    int failures = 0;
    for (int trial = 0; trial < 30; ++trial) {
        auto s = random_product_state(2, gen);
        WeightedPauliSum op;
        op.add(1.0, PauliString::parse(gen() & 1 ? "XY" : "ZX"));
        const double exact = expectation(s, op);
        const double est = sample_expectation(s, op, shots, gen());
        if (std::abs(est - exact) >= bound) ++failures;
    }
    CHECK(failures <= 1);
}
