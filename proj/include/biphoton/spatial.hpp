#ifndef BIPHOTON_SPATIAL_HPP
#define BIPHOTON_SPATIAL_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/units.hpp"

namespace biphoton {

inline constexpr std::size_t kDefaultSpatialPoints = 257;
inline constexpr double kDefaultSpatialHalfWidth = 3.0 * kMillimetre;
inline constexpr double kDefaultPumpWaist = 1.0 * kMillimetre;

/// Uniform transverse grid (m), symmetric about x = 0. The flip x -> -x is
/// the index reversal i -> size()-1-i.
class SpatialGrid {
public:
    SpatialGrid(double half_width, std::size_t point_count);

    static SpatialGrid default_grid() { return {kDefaultSpatialHalfWidth, kDefaultSpatialPoints}; }

    double half_width() const { return half_width_; }
    std::size_t size() const { return point_count_; }
    double spacing() const { return spacing_; }
    std::size_t center() const { return point_count_ / 2; }
    std::size_t mirror(std::size_t i) const { return point_count_ - 1 - i; }

    double position(std::size_t i) const
    {
        return (static_cast<double>(i) - static_cast<double>(center())) * spacing_;
    }

    bool operator==(const SpatialGrid&) const = default;

private:
    double half_width_;
    std::size_t point_count_;
    double spacing_;
};

/// Transverse amplitude phi(x) sampled on a grid, with sum |phi_i|^2 dx = 1.
class SpatialAmplitude {
public:
    /// Validates normalization to 1e-9.
    SpatialAmplitude(SpatialGrid grid, std::vector<Complex> values);

    /// Rescales arbitrary samples to unit norm. Throws ZeroDensity on a null profile.
    static SpatialAmplitude normalized(SpatialGrid grid, std::vector<Complex> values);

    const SpatialGrid& grid() const { return grid_; }
    const std::vector<Complex>& values() const { return values_; }
    Complex operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

private:
    SpatialGrid grid_;
    std::vector<Complex> values_;
};

/// Gaussian beam profile exp(-(x-offset)^2 / waist^2).
SpatialAmplitude gaussian_profile(const SpatialGrid& grid, double waist, double offset = 0.0);

/// First Hermite-Gauss mode x exp(-x^2 / waist^2), odd under x -> -x.
SpatialAmplitude hermite_gauss1_profile(const SpatialGrid& grid, double waist);

/// Linear interpolation of (x, amplitude) samples onto the grid, then normalization.
SpatialAmplitude tabulated_profile(const SpatialGrid& grid,
                                   const std::vector<std::pair<double, Complex>>& samples);

/// Sum_i conj(u_i) v_i dx.
Complex inner_product(const SpatialAmplitude& u, const SpatialAmplitude& v);

/**
 * One-photon transverse density operator stored as the unit-trace matrix
 * rho(x_i, x_j) dx. Hermitian, unit trace and positive semidefinite.
 */
class SpatialDensityOperator {
public:
    static SpatialDensityOperator coherent(const SpatialAmplitude& phi);
    static SpatialDensityOperator incoherent(const SpatialAmplitude& phi);
    /// Validates the invariants; throws NotPositive or InvalidState.
    static SpatialDensityOperator general(SpatialGrid grid, Eigen::MatrixXcd matrix);

    const SpatialGrid& grid() const { return grid_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    Complex trace() const { return matrix_.trace(); }

private:
    SpatialDensityOperator(SpatialGrid grid, Eigen::MatrixXcd matrix)
        : grid_(grid), matrix_(std::move(matrix))
    {
    }

    SpatialGrid grid_;
    Eigen::MatrixXcd matrix_;
};

/// Loads a density matrix from CSV: one matrix row per line, each entry a
/// `re,im` pair. The matrix must match the grid size and satisfy the invariants.
SpatialDensityOperator load_density_csv(const std::string& path, const SpatialGrid& grid);

/// A complex overlap written in polar form.
struct ParityOverlap {
    double magnitude;
    double phase; // rad, in (-pi, pi]

    static ParityOverlap from_value(Complex value);
    Complex value() const { return std::polar(magnitude, phase); }
};

/// alpha = sum_i rho[N-1-i, i]: overlap of the field with its mirror image.
ParityOverlap flip_overlap(const SpatialDensityOperator& rho);

/// beta = sum_i conj(phi_i) phi_{N-1-i} dx.
ParityOverlap pump_parity_overlap(const SpatialAmplitude& phi);

struct ParityParts {
    SpatialGrid grid;
    std::vector<Complex> even;
    std::vector<Complex> odd;

    double even_norm() const; // sum |even_i|^2 dx
    double odd_norm() const;
};

ParityParts parity_decompose(const SpatialAmplitude& phi);

struct CoherentMode {
    double weight;
    SpatialAmplitude mode;
};

/// Coherent-mode (eigen) decomposition, weights descending. Eigenvalues in
/// [-1e-10, 1e-13] are dropped as numerical zeros; anything below -1e-10
/// raises NotPositive.
std::vector<CoherentMode> eigendecompose(const SpatialDensityOperator& rho);

} // namespace biphoton

#endif
