/// @file grid.hpp
/// @brief Uniform periodic grid on the unit torus [0,1]^3 and its field carriers.
///
/// Physical fields are stored x-fastest: index = i1 + n*(i2 + n*i3).
/// Fourier coefficients use the real-to-complex half layout, with the x1
/// wavenumber halved: index = k1 + (n/2+1)*(j2 + n*j3), k1 in [0, n/2].
/// Coefficients are normalized so that the k=0 entry equals the grid mean.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace npb {

/// Real values per grid point in physical space.
struct ScalarField {
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(std::size_t size, double fill = 0.0) : values(size, fill) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    bool operator==(const ScalarField&) const = default;
};

/// Velocity-like field, three Cartesian components.
using VectorField = std::array<ScalarField, 3>;

/// Half-complex Fourier coefficients of one real field.
using SpectralField = std::vector<std::complex<double>>;
using SpectralVector = std::array<SpectralField, 3>;

class Grid {
public:
    /// @param n points per dimension; must be even and >= 8.
    explicit Grid(int n);

    int n() const { return n_; }
    double spacing() const { return 1.0 / n_; }
    /// Number of physical points, n^3.
    std::size_t size() const { return size_; }
    /// Number of stored half-complex coefficients, n*n*(n/2+1).
    std::size_t spectral_size() const { return spectral_size_; }
    int half() const { return n_ / 2 + 1; }

    /// Signed integer wavenumber triple of a stored coefficient, each in [-n/2, n/2].
    std::array<int, 3> wavenumber(std::size_t s) const;
    /// Stored index of a wavenumber triple with k1 >= 0.
    std::size_t spectral_index(int k1, int k2, int k3) const;

    /// |k|^2 per stored coefficient.
    std::span<const double> k_squared() const { return k2_; }
    /// Wavenumber used by first derivatives along axis j; zero on that axis' Nyquist plane.
    std::span<const double> derivative_wavenumber(int axis) const { return kd_[axis]; }
    /// True iff |k_j| <= n/3 for all j.
    std::span<const std::uint8_t> dealias_mask() const { return mask_; }
    /// Multiplicity of a stored coefficient in the full spectrum (1 or 2).
    std::span<const double> hermitian_weight() const { return weight_; }

    ScalarField zeros() const { return ScalarField(size_); }
    ScalarField constant(double value) const { return ScalarField(size_, value); }
    VectorField zero_vector() const { return {zeros(), zeros(), zeros()}; }
    SpectralField zero_spectrum() const { return SpectralField(spectral_size_); }

    /// Physical coordinate of a grid point along each axis.
    std::array<double, 3> coordinate(std::size_t i) const;

    SpectralField forward(const ScalarField& f) const;
    ScalarField inverse(const SpectralField& f_hat) const;

    void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
    /// @p in is left untouched.
    void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

private:
    struct Plans;

    int n_;
    std::size_t size_;
    std::size_t spectral_size_;
    std::vector<double> k2_;
    std::array<std::vector<double>, 3> kd_;
    std::vector<std::uint8_t> mask_;
    std::vector<double> weight_;
    std::shared_ptr<const Plans> plans_;
};

} // namespace npb
