#include "biphoton/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "biphoton/errors.hpp"

namespace biphoton {

SpatialGrid::SpatialGrid(double half_width, std::size_t point_count)
    : half_width_(half_width), point_count_(point_count)
{
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("SpatialGrid: half_width must be positive");
    if (point_count < 3 || point_count % 2 == 0)
        throw std::invalid_argument("SpatialGrid: point_count must be odd and >= 3");
    spacing_ = 2.0 * half_width / static_cast<double>(point_count - 1);
}

namespace {

double squared_norm(const std::vector<Complex>& v, double dx)
{
    double s = 0.0;
    for (const auto& z : v)
        s += std::norm(z);
    return s * dx;
}

} // namespace

SpatialAmplitude::SpatialAmplitude(SpatialGrid grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.size())
        throw std::invalid_argument("SpatialAmplitude: sample count does not match grid");
    const double n = squared_norm(values_, grid_.spacing());
    if (std::abs(n - 1.0) > 1e-9)
        throw InvalidState("SpatialAmplitude: not normalized (sum |phi|^2 dx = " +
                           std::to_string(n) + ")");
}

SpatialAmplitude SpatialAmplitude::normalized(SpatialGrid grid, std::vector<Complex> values)
{
    if (values.size() != grid.size())
        throw std::invalid_argument("SpatialAmplitude: sample count does not match grid");
    const double n = squared_norm(values, grid.spacing());
    if (!(n > 1e-300))
        throw ZeroDensity("SpatialAmplitude: profile vanishes on the grid");
    const double s = 1.0 / std::sqrt(n);
    for (auto& z : values)
        z *= s;
    return SpatialAmplitude(grid, std::move(values));
}

SpatialAmplitude gaussian_profile(const SpatialGrid& grid, double waist, double offset)
{
    if (!(waist > 0.0))
        throw std::invalid_argument("gaussian_profile: waist must be positive");
    std::vector<Complex> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double u = (grid.position(i) - offset) / waist;
        v[i] = std::exp(-u * u);
    }
    return SpatialAmplitude::normalized(grid, std::move(v));
}

SpatialAmplitude hermite_gauss1_profile(const SpatialGrid& grid, double waist)
{
    if (!(waist > 0.0))
        throw std::invalid_argument("hermite_gauss1_profile: waist must be positive");
    std::vector<Complex> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double u = grid.position(i) / waist;
        v[i] = u * std::exp(-u * u);
    }
    return SpatialAmplitude::normalized(grid, std::move(v));
}

SpatialAmplitude tabulated_profile(const SpatialGrid& grid,
                                   const std::vector<std::pair<double, Complex>>& samples)
{
    if (samples.size() < 2)
        throw std::invalid_argument("tabulated_profile: need at least two samples");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].first > samples[i - 1].first))
            throw std::invalid_argument("tabulated_profile: positions must be strictly increasing");
    std::vector<Complex> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = grid.position(i);
        if (x < samples.front().first || x > samples.back().first)
            continue;
        auto hi = std::upper_bound(samples.begin(), samples.end(), x,
                                   [](double p, const auto& s) { return p < s.first; });
        if (hi == samples.end()) {
            v[i] = samples.back().second;
            continue;
        }
        auto lo = hi - 1;
        const double t = (x - lo->first) / (hi->first - lo->first);
        v[i] = lo->second + t * (hi->second - lo->second);
    }
    return SpatialAmplitude::normalized(grid, std::move(v));
}

Complex inner_product(const SpatialAmplitude& u, const SpatialAmplitude& v)
{
    if (!(u.grid() == v.grid()))
        throw std::invalid_argument("inner_product: grids differ");
    Complex s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        s += std::conj(u[i]) * v[i];
    return s * u.grid().spacing();
}

SpatialDensityOperator SpatialDensityOperator::coherent(const SpatialAmplitude& phi)
{
    const std::size_t n = phi.size();
    Eigen::VectorXcd v(n);
    for (std::size_t i = 0; i < n; ++i)
        v(static_cast<Eigen::Index>(i)) = phi[i];
    return SpatialDensityOperator(phi.grid(), phi.grid().spacing() * (v * v.adjoint()));
}

SpatialDensityOperator SpatialDensityOperator::incoherent(const SpatialAmplitude& phi)
{
    const auto n = static_cast<Eigen::Index>(phi.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        m(i, i) = std::norm(phi[static_cast<std::size_t>(i)]) * phi.grid().spacing();
    return SpatialDensityOperator(phi.grid(), std::move(m));
}

SpatialDensityOperator SpatialDensityOperator::general(SpatialGrid grid, Eigen::MatrixXcd matrix)
{
    const auto n = static_cast<Eigen::Index>(grid.size());
    if (matrix.rows() != n || matrix.cols() != n)
        throw std::invalid_argument("SpatialDensityOperator: matrix size does not match grid");
    const double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12)
        throw InvalidState("SpatialDensityOperator: matrix is not Hermitian");
    const Complex tr = matrix.trace();
    if (std::abs(tr - 1.0) > 1e-9)
        throw InvalidState("SpatialDensityOperator: trace differs from one");
    // symmetrize away round-off before the spectral check
    Eigen::MatrixXcd h = 0.5 * (matrix + matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10)
        throw NotPositive("SpatialDensityOperator: negative eigenvalue");
    return SpatialDensityOperator(grid, std::move(h));
}

SpatialDensityOperator load_density_csv(const std::string& path, const SpatialGrid& grid)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_density_csv: cannot open " + path);
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXcd m(n, n);
    std::string line;
    Eigen::Index row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        if (row >= n)
            throw std::runtime_error("load_density_csv: more rows than grid points");
        std::vector<double> fields;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            fields.push_back(std::stod(cell));
        if (static_cast<Eigen::Index>(fields.size()) != 2 * n)
            throw std::runtime_error("load_density_csv: row " + std::to_string(row) +
                                     " has " + std::to_string(fields.size()) +
                                     " fields, expected " + std::to_string(2 * n));
        for (Eigen::Index j = 0; j < n; ++j)
            m(row, j) = Complex(fields[2 * j], fields[2 * j + 1]);
        ++row;
    }
    if (row != n)
        throw std::runtime_error("load_density_csv: expected " + std::to_string(n) + " rows");
    return SpatialDensityOperator::general(grid, std::move(m));
}

ParityOverlap ParityOverlap::from_value(Complex value)
{
    return {std::abs(value), std::abs(value) > 0.0 ? std::arg(value) : 0.0};
}

ParityOverlap flip_overlap(const SpatialDensityOperator& rho)
{
    const auto& m = rho.matrix();
    const auto n = m.rows();
    Complex s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        s += m(n - 1 - i, i);
    return ParityOverlap::from_value(s);
}

ParityOverlap pump_parity_overlap(const SpatialAmplitude& phi)
{
    const std::size_t n = phi.size();
    Complex s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += std::conj(phi[i]) * phi[n - 1 - i];
    return ParityOverlap::from_value(s * phi.grid().spacing());
}

double ParityParts::even_norm() const { return squared_norm(even, grid.spacing()); }
double ParityParts::odd_norm() const { return squared_norm(odd, grid.spacing()); }

ParityParts parity_decompose(const SpatialAmplitude& phi)
{
    const std::size_t n = phi.size();
    ParityParts parts{phi.grid(), std::vector<Complex>(n), std::vector<Complex>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = phi[i];
        const Complex b = phi[n - 1 - i];
        parts.even[i] = 0.5 * (a + b);
        parts.odd[i] = 0.5 * (a - b);
    }
    return parts;
}

std::vector<CoherentMode> eigendecompose(const SpatialDensityOperator& rho)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix());
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecompose: eigen solver failed");
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();
    if (values.minCoeff() < -1e-10)
        throw NotPositive("eigendecompose: negative eigenvalue " + std::to_string(values.minCoeff()));

    const double dx = rho.grid().spacing();
    const double inv_sqrt_dx = 1.0 / std::sqrt(dx);
    std::vector<CoherentMode> modes;
    for (Eigen::Index j = values.size() - 1; j >= 0; --j) {
        if (values(j) <= 1e-13)
            continue;
        // fix the global phase: largest component real and positive
        Eigen::Index peak = 0;
        vectors.col(j).cwiseAbs().maxCoeff(&peak);
        const Complex phase = std::polar(1.0, -std::arg(vectors(peak, j)));
        std::vector<Complex> u(static_cast<std::size_t>(vectors.rows()));
        for (Eigen::Index i = 0; i < vectors.rows(); ++i)
            u[static_cast<std::size_t>(i)] = vectors(i, j) * phase * inv_sqrt_dx;
        modes.push_back({values(j), SpatialAmplitude::normalized(rho.grid(), std::move(u))});
    }
    return modes;
}

} // namespace biphoton
