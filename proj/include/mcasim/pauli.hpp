#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcasim/errors.hpp"

namespace mcasim {

enum class Axis : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

// A tensor product of single-qubit Pauli operators, one per qubit.
// Qubit k corresponds to bit k of the amplitude index (little-endian).
struct PauliString {
    std::vector<Axis> axes;

    PauliString() = default;
    explicit PauliString(std::size_t n) : axes(n, Axis::I) {}

    // Parse from a label like "XIYZ"; character 0 acts on qubit 0.
    static PauliString parse(const std::string& label);

    static PauliString identity(std::size_t n) { return PauliString(n); }

    // Single-axis string: `axis` on `qubit`, identity elsewhere.
    static PauliString single(std::size_t n, std::size_t qubit, Axis axis);

    // Two-axis string: same `axis` on both qubits, identity elsewhere.
    static PauliString pair(std::size_t n, std::size_t q1, std::size_t q2, Axis axis);

    std::size_t size() const { return axes.size(); }
    bool is_identity() const;
    std::string str() const;
};

struct PauliTerm {
    double coeff = 0.0;  // meV
    PauliString string;
};

// Hermitian operator as a real-weighted sum of Pauli strings.
struct WeightedPauliSum {
    std::vector<PauliTerm> terms;

    void add(double coeff, PauliString s) { terms.push_back({coeff, std::move(s)}); }
    std::size_t size() const { return terms.size(); }

    // All strings must share one length; throws usage_error on mixed sizes.
    std::size_t qubit_count() const;
};

inline PauliString PauliString::parse(const std::string& label) {
    PauliString p(label.size());
    for (std::size_t i = 0; i < label.size(); ++i) {
        switch (label[i]) {
            case 'I': p.axes[i] = Axis::I; break;
            case 'X': p.axes[i] = Axis::X; break;
            case 'Y': p.axes[i] = Axis::Y; break;
            case 'Z': p.axes[i] = Axis::Z; break;
            default:
                throw usage_error("PauliString::parse: bad axis character '" +
                                  std::string(1, label[i]) + "'");
        }
    }
    return p;
}

inline PauliString PauliString::single(std::size_t n, std::size_t qubit, Axis axis) {
    if (qubit >= n) throw usage_error("PauliString::single: qubit index out of range");
    PauliString p(n);
    p.axes[qubit] = axis;
    return p;
}

inline PauliString PauliString::pair(std::size_t n, std::size_t q1, std::size_t q2, Axis axis) {
    if (q1 >= n || q2 >= n || q1 == q2)
        throw usage_error("PauliString::pair: bad qubit indices");
    PauliString p(n);
    p.axes[q1] = axis;
    p.axes[q2] = axis;
    return p;
}

inline bool PauliString::is_identity() const {
    for (Axis a : axes)
        if (a != Axis::I) return false;
    return true;
}

inline std::string PauliString::str() const {
    static const char names[] = {'I', 'X', 'Y', 'Z'};
    std::string s;
    s.reserve(axes.size());
    for (Axis a : axes) s.push_back(names[static_cast<int>(a)]);
    return s;
}

inline std::size_t WeightedPauliSum::qubit_count() const {
    if (terms.empty()) throw usage_error("WeightedPauliSum: empty operator has no size");
    std::size_t n = terms.front().string.size();
    for (const auto& t : terms)
        if (t.string.size() != n)
            throw usage_error("WeightedPauliSum: mixed string lengths");
    return n;
}

}  // namespace mcasim
