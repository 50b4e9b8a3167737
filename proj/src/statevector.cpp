#include "mcasim/statevector.hpp"

#include <bit>
#include <cmath>
#include <random>

#include "mcasim/errors.hpp"

namespace mcasim {

namespace {

constexpr double kNormTol = 1e-9;
constexpr double kImagTol = 1e-12;

void check_qubit(const StateVector& state, int qubit, const char* who) {
    if (qubit < 0 || qubit >= state.qubit_count)
        throw usage_error(std::string(who) + ": qubit index out of range");
}

// Uniform double in [0, 1) from the top 53 bits of the generator output.
// Used instead of std::uniform_real_distribution so that sampled results are
// bit-identical across standard library implementations.
double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// <state|P|state> without the norm check (callers check once per entry point).
double string_expectation(const StateVector& state, const PauliString& p) {
    std::uint64_t xmask = 0, yz_sign_mask = 0;
    int y_count = 0;
    for (std::size_t k = 0; k < p.axes.size(); ++k) {
        switch (p.axes[k]) {
            case Axis::I: break;
            case Axis::X: xmask |= 1ull << k; break;
            case Axis::Y:
                xmask |= 1ull << k;
                yz_sign_mask |= 1ull << k;
                ++y_count;
                break;
            case Axis::Z: yz_sign_mask |= 1ull << k; break;
        }
    }

    // P|z> = prefactor * (-1)^{popcount(z & yz_sign_mask)} |z ^ xmask>
    // with prefactor = i^{#Y}.
    static const std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::complex<double> prefactor = kIPow[y_count & 3];

    std::complex<double> acc = 0.0;
    const std::size_t dim = state.dim();
    for (std::size_t z = 0; z < dim; ++z) {
        const double sign = (std::popcount(z & yz_sign_mask) & 1) ? -1.0 : 1.0;
        acc += std::conj(state.amps[z ^ xmask]) * (sign * state.amps[z]);
    }
    acc *= prefactor;

    if (std::abs(acc.imag()) >= kImagTol)
        throw invariant_error("expectation: imaginary residue " +
                              std::to_string(acc.imag()) + " for string " + p.str());
    return acc.real();
}

void check_state(const StateVector& state, const char* who) {
    if (std::abs(norm_sq(state) - 1.0) > kNormTol)
        throw invariant_error(std::string(who) + ": state norm drifted from 1");
}

void check_length(const StateVector& state, std::size_t len, const char* who) {
    if (len != static_cast<std::size_t>(state.qubit_count))
        throw usage_error(std::string(who) + ": operator/register size mismatch");
}

}  // namespace

StateVector init_state(int qubit_count) {
    if (qubit_count < 1 || qubit_count > 24)
        throw config_error("init_state: qubit_count must be in [1, 24]");
    StateVector s;
    s.qubit_count = qubit_count;
    s.amps.assign(std::size_t{1} << qubit_count, 0.0);
    s.amps[0] = 1.0;
    return s;
}

void apply_ry(StateVector& state, int qubit, double theta) {
    check_qubit(state, qubit, "apply_ry");
    if (!std::isfinite(theta)) throw usage_error("apply_ry: theta not finite");

    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const std::size_t bit = std::size_t{1} << qubit;
    const std::size_t dim = state.dim();
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & bit) continue;
        auto& a0 = state.amps[base];
        auto& a1 = state.amps[base | bit];
        const auto t0 = c * a0 - s * a1;
        const auto t1 = s * a0 + c * a1;
        a0 = t0;
        a1 = t1;
    }
}

void apply_rz(StateVector& state, int qubit, double phi) {
    check_qubit(state, qubit, "apply_rz");
    if (!std::isfinite(phi)) throw usage_error("apply_rz: phi not finite");

    const std::complex<double> e0 = std::polar(1.0, -phi / 2.0);
    const std::complex<double> e1 = std::polar(1.0, phi / 2.0);
    const std::size_t bit = std::size_t{1} << qubit;
    const std::size_t dim = state.dim();
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & bit) continue;
        state.amps[base] *= e0;
        state.amps[base | bit] *= e1;
    }
}

double norm_sq(const StateVector& state) {
    double n = 0.0;
    for (const auto& a : state.amps) n += std::norm(a);
    return n;
}

double expectation(const StateVector& state, const PauliString& p) {
    check_length(state, p.size(), "expectation");
    check_state(state, "expectation");
    return string_expectation(state, p);
}

double expectation(const StateVector& state, const WeightedPauliSum& op) {
    check_length(state, op.qubit_count(), "expectation");
    check_state(state, "expectation");
    double e = 0.0;
    for (const auto& t : op.terms) e += t.coeff * string_expectation(state, t.string);
    return e;
}

double sample_expectation(const StateVector& state, const WeightedPauliSum& op,
                          long shots, std::uint64_t seed) {
    if (shots < 1) throw usage_error("sample_expectation: shots must be >= 1");
    check_length(state, op.qubit_count(), "sample_expectation");
    check_state(state, "sample_expectation");

    std::mt19937_64 gen(seed);
    double estimate = 0.0;
    for (const auto& t : op.terms) {
        const double exact = string_expectation(state, t.string);
        double p_plus = 0.5 * (1.0 + exact);
        p_plus = std::min(1.0, std::max(0.0, p_plus));
        long plus = 0;
        for (long k = 0; k < shots; ++k)
            if (uniform01(gen) < p_plus) ++plus;
        const double mean = (2.0 * static_cast<double>(plus) - static_cast<double>(shots)) /
                            static_cast<double>(shots);
        estimate += t.coeff * mean;
    }
    return estimate;
}

}  // namespace mcasim
