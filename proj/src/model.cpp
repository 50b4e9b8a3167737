#include "mcasim/model.hpp"

#include <cmath>

#include "mcasim/errors.hpp"

namespace mcasim {

namespace {

constexpr int kSystemSites = 4;
constexpr int kQubits = 8;

// Bond list shared by the Pauli builder and the closed-form energy. Sites are
// 0-based here. The J1 chains are the bonds (1,2) and (3,4) of the paper's
// 1-based numbering; the J1p sum wraps so that site 4 pairs with site 1.
struct Bond {
    int i, j;
    enum Group { J1, J1P, J2, J2P } group;
};

constexpr Bond kBonds[] = {
    {0, 1, Bond::J1}, {2, 3, Bond::J1},
    {1, 2, Bond::J1P}, {3, 0, Bond::J1P},
    {0, 2, Bond::J2}, {1, 3, Bond::J2P},
};

double bond_coeff(const Bond& b, const ModelParams& p) {
    const double s2 = p.s * p.s;
    switch (b.group) {
        case Bond::J1: return p.j1 * s2 / 2.0;
        case Bond::J1P: return p.j1p * s2 / 2.0;
        case Bond::J2: return p.j2 * s2;
        case Bond::J2P: return p.j2p * s2;
    }
    return 0.0;
}

// Zeeman vector multiplying each site's Bloch vector: -g mu_B H s * u.
std::array<double, 3> zeeman_vector(const ModelParams& p, const AppliedField& f) {
    const double c = -p.g * kMuB * f.tesla * p.s;
    return {c * f.u[0], c * f.u[1], c * f.u[2]};
}

void check_angles(const AnsatzParams& a) {
    for (int n = 0; n < 4; ++n)
        if (!std::isfinite(a.theta[n]) || !std::isfinite(a.phi[n]))
            throw usage_error("ansatz angles must be finite");
}

}  // namespace

void ModelParams::validate() const {
    if (s <= 0.0) throw config_error("ModelParams: s must be > 0");
    if (g <= 0.0) throw config_error("ModelParams: g must be > 0");
    if (ka < 0.0 || kb < 0.0 || kc < 0.0)
        throw config_error("ModelParams: anisotropy constants must be >= 0");
    if (twin_fraction < 0.0 || twin_fraction > 1.0)
        throw config_error("ModelParams: twin_fraction must lie in [0, 1]");
}

void FieldSpec::validate() const {
    if (magnitude < 0.0) throw config_error("FieldSpec: magnitude must be >= 0");
    if (!std::isfinite(alpha_h)) throw config_error("FieldSpec: alpha_h not finite");
}

std::array<double, 3> FieldSpec::unit_vector() const {
    switch (plane) {
        case FieldPlane::bc: {
            // Snap the rounding dust of cos(pi/2) etc. to exact zero so that
            // right-angle fields drop their vanishing Zeeman components.
            double cb = std::cos(alpha_h), cc = std::sin(alpha_h);
            if (std::abs(cb) < 1e-15) cb = 0.0;
            if (std::abs(cc) < 1e-15) cc = 0.0;
            return {0.0, cb, cc};
        }
        case FieldPlane::fixed_b: return {0.0, 1.0, 0.0};
        case FieldPlane::fixed_a: return {1.0, 0.0, 0.0};
        case FieldPlane::fixed_c: return {0.0, 0.0, 1.0};
    }
    return {0.0, 1.0, 0.0};
}

std::array<double, 3> AnsatzParams::bloch(std::size_t n) const {
    const double st = std::sin(theta[n]), ct = std::cos(theta[n]);
    return {st * std::cos(phi[n]), st * std::sin(phi[n]), ct};
}

std::array<double, 8> AnsatzParams::flat() const {
    return {theta[0], theta[1], theta[2], theta[3], phi[0], phi[1], phi[2], phi[3]};
}

AnsatzParams AnsatzParams::from_flat(const std::array<double, 8>& x) {
    AnsatzParams a;
    for (int n = 0; n < 4; ++n) {
        a.theta[n] = x[n];
        a.phi[n] = x[4 + n];
    }
    return a;
}

AnsatzParams AnsatzParams::canonical() const {
    const double two_pi = 2.0 * M_PI;
    AnsatzParams a = *this;
    for (int n = 0; n < 4; ++n) {
        double t = std::fmod(a.theta[n], two_pi);
        if (t < 0) t += two_pi;             // [0, 2pi)
        double p = a.phi[n];
        if (t > M_PI) {                     // reflect through the pole
            t = two_pi - t;
            p += M_PI;
        }
        p = std::fmod(p, two_pi);
        if (p <= -M_PI) p += two_pi;
        if (p > M_PI) p -= two_pi;
        a.theta[n] = t;
        a.phi[n] = p;
    }
    return a;
}

EnergyBreakdown EnergyBreakdown::per_site() const {
    EnergyBreakdown b = *this;
    b.e_j1 /= 4.0;
    b.e_j1p /= 4.0;
    b.e_j2 /= 4.0;
    b.e_j2p /= 4.0;
    b.e_zeeman /= 4.0;
    b.e_mca /= 4.0;
    b.total /= 4.0;
    return b;
}

WeightedPauliSum build_hamiltonian(const ModelParams& params, const AppliedField& field) {
    params.validate();
    WeightedPauliSum h;

    // Exchange: isotropic XX + YY + ZZ on each system bond.
    for (const Bond& b : kBonds) {
        const double c = bond_coeff(b, params);
        for (Axis ax : {Axis::X, Axis::Y, Axis::Z})
            h.add(c, PauliString::pair(kQubits, b.i, b.j, ax));
    }

    // Zeeman: -g mu_B H s along the field direction, per system site.
    // Components that are exactly zero are omitted.
    const auto zv = zeeman_vector(params, field);
    const Axis comp_axis[3] = {Axis::X, Axis::Y, Axis::Z};
    for (int c = 0; c < 3; ++c) {
        if (zv[c] == 0.0) continue;
        for (int n = 0; n < kSystemSites; ++n)
            h.add(zv[c], PauliString::single(kQubits, n, comp_axis[c]));
    }

    // MCA through the ancilla pairing: qubit n is tied to qubit n+4, so the
    // two-qubit products evaluate to squared Bloch components.
    for (int n = 0; n < kSystemSites; ++n) {
        h.add(-params.ka, PauliString::pair(kQubits, n, n + 4, Axis::X));
        h.add(-params.kb, PauliString::pair(kQubits, n, n + 4, Axis::Y));
        h.add(params.kc, PauliString::pair(kQubits, n, n + 4, Axis::Z));
    }
    return h;
}

WeightedPauliSum build_hamiltonian(const ModelParams& params, const FieldSpec& field) {
    field.validate();
    return build_hamiltonian(params, AppliedField::from(field));
}

double classical_energy(const ModelParams& params, const AppliedField& field,
                        const AnsatzParams& angles) {
    return energy_breakdown(params, field, angles).total;
}

double classical_energy(const ModelParams& params, const FieldSpec& field,
                        const AnsatzParams& angles) {
    field.validate();
    return classical_energy(params, AppliedField::from(field), angles);
}

EnergyBreakdown energy_breakdown(const ModelParams& params, const AppliedField& field,
                                 const AnsatzParams& angles) {
    params.validate();
    check_angles(angles);

    std::array<std::array<double, 3>, 4> m;
    for (int n = 0; n < kSystemSites; ++n) m[n] = angles.bloch(n);

    EnergyBreakdown out;
    for (const Bond& b : kBonds) {
        const double dot = m[b.i][0] * m[b.j][0] + m[b.i][1] * m[b.j][1] + m[b.i][2] * m[b.j][2];
        const double e = bond_coeff(b, params) * dot;
        switch (b.group) {
            case Bond::J1: out.e_j1 += e; break;
            case Bond::J1P: out.e_j1p += e; break;
            case Bond::J2: out.e_j2 += e; break;
            case Bond::J2P: out.e_j2p += e; break;
        }
    }

    const auto zv = zeeman_vector(params, field);
    for (int n = 0; n < kSystemSites; ++n) {
        out.e_zeeman += zv[0] * m[n][0] + zv[1] * m[n][1] + zv[2] * m[n][2];
        out.e_mca += -params.ka * m[n][0] * m[n][0] - params.kb * m[n][1] * m[n][1] +
                     params.kc * m[n][2] * m[n][2];
    }

    out.total = out.e_j1 + out.e_j1p + out.e_j2 + out.e_j2p + out.e_zeeman + out.e_mca;
    return out;
}

EnergyBreakdown energy_breakdown(const ModelParams& params, const FieldSpec& field,
                                 const AnsatzParams& angles) {
    field.validate();
    return energy_breakdown(params, AppliedField::from(field), angles);
}

std::array<double, 8> classical_gradient(const ModelParams& params, const AppliedField& field,
                                         const AnsatzParams& angles) {
    params.validate();
    check_angles(angles);

    std::array<std::array<double, 3>, 4> m;
    for (int n = 0; n < kSystemSites; ++n) m[n] = angles.bloch(n);

    // Local field on each site: dE/dm_n. Bonds contribute the partner vector,
    // the Zeeman term its constant vector, and the MCA term 2 K m componentwise.
    const auto zv = zeeman_vector(params, field);
    std::array<std::array<double, 3>, 4> f;
    for (int n = 0; n < kSystemSites; ++n) {
        f[n] = {zv[0] - 2.0 * params.ka * m[n][0],
                zv[1] - 2.0 * params.kb * m[n][1],
                zv[2] + 2.0 * params.kc * m[n][2]};
    }
    for (const Bond& b : kBonds) {
        const double c = bond_coeff(b, params);
        for (int d = 0; d < 3; ++d) {
            f[b.i][d] += c * m[b.j][d];
            f[b.j][d] += c * m[b.i][d];
        }
    }

    std::array<double, 8> grad{};
    for (int n = 0; n < kSystemSites; ++n) {
        const double st = std::sin(angles.theta[n]), ct = std::cos(angles.theta[n]);
        const double sp = std::sin(angles.phi[n]), cp = std::cos(angles.phi[n]);
        // dm/dtheta and dm/dphi in crystal coordinates.
        grad[n] = f[n][0] * ct * cp + f[n][1] * ct * sp - f[n][2] * st;
        grad[4 + n] = -f[n][0] * st * sp + f[n][1] * st * cp;
    }
    return grad;
}

std::array<double, 8> classical_gradient(const ModelParams& params, const FieldSpec& field,
                                         const AnsatzParams& angles) {
    field.validate();
    return classical_gradient(params, AppliedField::from(field), angles);
}

}  // namespace mcasim
