#include "biphoton/oracle.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "biphoton/errors.hpp"
#include "biphoton/parallel.hpp"

namespace biphoton::oracle {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr int index_of(Arm a) { return static_cast<int>(a); }
constexpr Arm other(Arm a) { return a == Arm::A ? Arm::B : Arm::A; }

std::vector<Complex> reversed(std::vector<Complex> v)
{
    std::reverse(v.begin(), v.end());
    return v;
}

} // namespace

// ---------------------------------------------------------------- Factor

Factor Factor::diagonal(std::vector<Complex> v)
{
    Factor f(Layout::Diagonal, v.size());
    f.vec_ = std::move(v);
    return f;
}

Factor Factor::anti_diagonal(std::vector<Complex> v)
{
    Factor f(Layout::AntiDiagonal, v.size());
    f.vec_ = std::move(v);
    return f;
}

Factor Factor::full(Eigen::MatrixXcd m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("Factor: full matrix must be square");
    Factor f(Layout::Full, static_cast<std::size_t>(m.rows()));
    f.mat_ = std::move(m);
    return f;
}

Complex Factor::at(std::size_t i, std::size_t j) const
{
    switch (layout_) {
    case Layout::Diagonal:
        return i == j ? vec_[i] : Complex{};
    case Layout::AntiDiagonal:
        return j == n_ - 1 - i ? vec_[i] : Complex{};
    case Layout::Full:
        return mat_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    return {};
}

Eigen::MatrixXcd Factor::dense() const
{
    if (layout_ == Layout::Full)
        return mat_;
    const auto n = static_cast<Eigen::Index>(n_);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto j = layout_ == Layout::Diagonal ? i : n - 1 - i;
        m(i, j) = vec_[static_cast<std::size_t>(i)];
    }
    return m;
}

void Factor::scale_first(const std::vector<Complex>& d)
{
    if (layout_ == Layout::Full) {
        for (Eigen::Index i = 0; i < mat_.rows(); ++i)
            mat_.row(i) *= d[static_cast<std::size_t>(i)];
        return;
    }
    for (std::size_t i = 0; i < n_; ++i)
        vec_[i] *= d[i];
}

void Factor::scale_second(const std::vector<Complex>& d)
{
    switch (layout_) {
    case Layout::Diagonal:
        for (std::size_t i = 0; i < n_; ++i)
            vec_[i] *= d[i];
        break;
    case Layout::AntiDiagonal:
        for (std::size_t i = 0; i < n_; ++i)
            vec_[i] *= d[n_ - 1 - i];
        break;
    case Layout::Full:
        for (Eigen::Index j = 0; j < mat_.cols(); ++j)
            mat_.col(j) *= d[static_cast<std::size_t>(j)];
        break;
    }
}

void Factor::flip_first()
{
    switch (layout_) {
    case Layout::Diagonal:
        layout_ = Layout::AntiDiagonal;
        std::reverse(vec_.begin(), vec_.end());
        break;
    case Layout::AntiDiagonal:
        layout_ = Layout::Diagonal;
        std::reverse(vec_.begin(), vec_.end());
        break;
    case Layout::Full:
        mat_ = mat_.colwise().reverse().eval();
        break;
    }
}

void Factor::flip_second()
{
    switch (layout_) {
    case Layout::Diagonal:
        layout_ = Layout::AntiDiagonal;
        break;
    case Layout::AntiDiagonal:
        layout_ = Layout::Diagonal;
        break;
    case Layout::Full:
        mat_ = mat_.rowwise().reverse().eval();
        break;
    }
}

Factor Factor::transposed() const
{
    switch (layout_) {
    case Layout::Diagonal:
        return *this;
    case Layout::AntiDiagonal:
        return anti_diagonal(reversed(vec_));
    case Layout::Full:
        return full(mat_.transpose());
    }
    return *this;
}

Complex Factor::inner(const Factor& other) const
{
    if (n_ != other.n_)
        throw std::invalid_argument("Factor::inner: size mismatch");
    if (layout_ == Layout::Full && other.layout_ == Layout::Full)
        return (mat_.conjugate().cwiseProduct(other.mat_)).sum();
    if (layout_ == Layout::Full || other.layout_ == Layout::Full) {
        const Factor& f = layout_ == Layout::Full ? *this : other;
        const Factor& s = layout_ == Layout::Full ? other : *this;
        Complex acc = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t j = s.layout_ == Layout::Diagonal ? i : n_ - 1 - i;
            acc += std::conj(f.mat_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) *
                   s.vec_[i];
        }
        return layout_ == Layout::Full ? acc : std::conj(acc);
    }
    if (layout_ == other.layout_) {
        Complex acc = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            acc += std::conj(vec_[i]) * other.vec_[i];
        return acc;
    }
    // diagonal and anti-diagonal meet only at the centre entry
    const std::size_t c = n_ / 2;
    return std::conj(vec_[c]) * other.vec_[c];
}

bool Factor::operator==(const Factor& other) const
{
    if (layout_ != other.layout_ || n_ != other.n_)
        return false;
    if (layout_ == Layout::Full)
        return mat_ == other.mat_;
    return vec_ == other.vec_;
}

// -------------------------------------------------------- BranchSumState

BranchSumState::BranchSumState(SpatialGrid space, FrequencyGrid freq, double pump_frequency,
                               std::vector<Branch> branches)
    : space_(space), freq_(freq), pump_frequency_(pump_frequency), branches_(std::move(branches))
{
    for (const auto& b : branches_)
        if (b.spatial.size() != space_.size() || b.spectral.size() != freq_.size())
            throw std::invalid_argument("BranchSumState: factor size does not match grid");
}

double BranchSumState::block_norm(Arm p1, Arm p2) const
{
    double acc = 0.0;
    for (std::size_t x = 0; x < branches_.size(); ++x) {
        const auto& bx = branches_[x];
        if (bx.path1 != p1 || bx.path2 != p2)
            continue;
        acc += std::norm(bx.weight) * bx.spatial.squared_norm() * bx.spectral.squared_norm();
        for (std::size_t y = x + 1; y < branches_.size(); ++y) {
            const auto& by = branches_[y];
            if (by.path1 != p1 || by.path2 != p2)
                continue;
            const Complex cross = std::conj(bx.weight) * by.weight * bx.spatial.inner(by.spatial) *
                                  bx.spectral.inner(by.spectral);
            acc += 2.0 * cross.real();
        }
    }
    return acc;
}

double BranchSumState::norm() const
{
    double acc = 0.0;
    for (Arm p1 : {Arm::A, Arm::B})
        for (Arm p2 : {Arm::A, Arm::B})
            acc += block_norm(p1, p2);
    return std::sqrt(std::max(acc, 0.0));
}

double BranchSumState::exchange_asymmetry() const
{
    // A - swap(A) as a branch sum; exact cancellations vanish in coalesce().
    std::vector<Branch> diff = branches_;
    for (const auto& b : branches_)
        diff.push_back({b.path2, b.path1, -b.weight, b.spatial.transposed(), b.spectral.transposed()});
    BranchSumState d(space_, freq_, pump_frequency_, std::move(diff));
    d.coalesce();
    return d.norm();
}

void BranchSumState::coalesce()
{
    std::vector<Branch> merged;
    merged.reserve(branches_.size());
    for (auto& b : branches_) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const Branch& m) {
            return m.path1 == b.path1 && m.path2 == b.path2 && m.spatial == b.spatial &&
                   m.spectral == b.spectral;
        });
        if (it != merged.end())
            it->weight += b.weight;
        else
            merged.push_back(std::move(b));
    }
    std::erase_if(merged, [](const Branch& m) { return std::abs(m.weight) <= 1e-14; });
    branches_ = std::move(merged);
}

// -------------------------------------------------------------- elements

ElementPipeline make_pipeline(const PipelineOptions& options, double tau)
{
    ElementPipeline p;
    p.push_back(BeamSplitter{options.convention});
    p.push_back(Delay{options.delay_arm, tau});
    if (options.kind == InterferometerKind::Mzim)
        p.push_back(SpatialFlip{options.flip_arm});
    p.push_back(BeamSplitter{options.convention});
    p.push_back(RelabelOutputs{});
    return p;
}

namespace {

/// coefficient[q][p]: amplitude for input path p to leave on output path q.
std::array<std::array<Complex, 2>, 2> splitter_matrix(BeamSplitterConvention c)
{
    const double s = 1.0 / std::sqrt(2.0);
    const Complex r = c == BeamSplitterConvention::Symmetric ? Complex(0.0, s) : Complex(0.0, -s);
    return {{{Complex(s, 0.0), r}, {r, Complex(s, 0.0)}}};
}

std::vector<Complex> delay_phases(const FrequencyGrid& freq, double pump_frequency, double tau)
{
    std::vector<Complex> d(freq.size());
    for (std::size_t k = 0; k < d.size(); ++k)
        d[k] = std::polar(1.0, -(0.5 * pump_frequency + freq.node(k)) * tau);
    return d;
}

void check_grid_symmetry(const SpatialGrid& space, const FrequencyGrid& freq)
{
    if (space.size() % 2 == 0 || freq.size() % 2 == 0)
        throw GridAsymmetry("grids need an odd point count");
    for (std::size_t i = 0; i < space.size(); ++i)
        if (space.position(space.mirror(i)) != -space.position(i))
            throw GridAsymmetry("spatial grid is not mirror symmetric");
    for (std::size_t k = 0; k < freq.size(); ++k)
        if (freq.node(freq.mirror(k)) != -freq.node(k))
            throw GridAsymmetry("frequency grid is not mirror symmetric");
}

Factor spatial_factor(const TwoPhotonState& state)
{
    return std::visit(overloaded{
                          [](const CorrelatedPump& c) {
                              const double root_dx = std::sqrt(c.pump.grid().spacing());
                              std::vector<Complex> v(c.pump.values());
                              for (auto& z : v)
                                  z *= root_dx;
                              return Factor::diagonal(std::move(v));
                          },
                          [](const GeneralSpatial& g) { return Factor::full(g.amplitude); },
                      },
                      state.spatial());
}

Factor spectral_factor(const TwoPhotonState& state)
{
    return std::visit(overloaded{
                          [](const AntiCorrelated& a) {
                              const DiscreteSpectrum d(a.density, a.grid);
                              std::vector<Complex> v(d.masses().size());
                              for (std::size_t k = 0; k < v.size(); ++k)
                                  v[k] = std::sqrt(d.masses()[k]);
                              return Factor::anti_diagonal(std::move(v));
                          },
                          [](const GeneralSpectral& g) { return Factor::full(g.amplitude); },
                      },
                      state.spectral());
}

} // namespace

BranchSumState build_initial_state(const TwoPhotonState& state)
{
    check_grid_symmetry(state.spatial_grid(), state.frequency_grid());
    Factor s = spatial_factor(state);
    Factor f = spectral_factor(state);
    std::vector<Branch> branches;
    branches.push_back({Arm::A, Arm::A, 0.5, s.transposed(), f.transposed()});
    branches.push_back({Arm::A, Arm::A, 0.5, std::move(s), std::move(f)});
    BranchSumState out(state.spatial_grid(), state.frequency_grid(), state.pump_frequency(),
                       std::move(branches));
    out.coalesce();
    const double n = out.norm();
    if (!(n > 1e-12))
        throw InvalidState("state has no exchange-symmetric component");
    for (auto& b : out.mutable_branches())
        b.weight /= n;
    return out;
}

BranchSumState apply_element(BranchSumState state, const Element& element)
{
    if (state.outputs_labeled())
        throw InvalidElement("no element may follow RelabelOutputs");
    std::visit(
        overloaded{
            [&](const BeamSplitter& bs) {
                const auto u = splitter_matrix(bs.convention);
                std::vector<Branch> next;
                next.reserve(4 * state.branch_count());
                for (const auto& b : state.branches())
                    for (Arm q1 : {Arm::A, Arm::B})
                        for (Arm q2 : {Arm::A, Arm::B}) {
                            const Complex w = b.weight * u[index_of(q1)][index_of(b.path1)] *
                                              u[index_of(q2)][index_of(b.path2)];
                            next.push_back({q1, q2, w, b.spatial, b.spectral});
                        }
                state.mutable_branches() = std::move(next);
                state.coalesce();
            },
            [&](const Delay& d) {
                const auto phases = delay_phases(state.frequency_grid(), state.pump_frequency(), d.tau);
                for (auto& b : state.mutable_branches()) {
                    if (b.path1 == d.arm)
                        b.spectral.scale_first(phases);
                    if (b.path2 == d.arm)
                        b.spectral.scale_second(phases);
                }
                state.coalesce();
            },
            [&](const SpatialFlip& f) {
                for (auto& b : state.mutable_branches()) {
                    if (b.path1 == f.arm)
                        b.spatial.flip_first();
                    if (b.path2 == f.arm)
                        b.spatial.flip_second();
                }
                state.coalesce();
            },
            [&](const RelabelOutputs&) { state.mark_outputs_labeled(); },
        },
        element);
    return state;
}

BranchSumState run_pipeline(BranchSumState state, const ElementPipeline& pipeline)
{
    for (const auto& e : pipeline)
        state = apply_element(std::move(state), e);
    return state;
}

double coincidence_rate(const BranchSumState& state)
{
    if (!state.outputs_labeled())
        throw IncompletePipeline("coincidence_rate needs a completed pipeline");
    return 2.0 * (state.block_norm(Arm::A, Arm::B) + state.block_norm(Arm::B, Arm::A));
}

double singles_rate(const BranchSumState& state, Port port)
{
    if (!state.outputs_labeled())
        throw IncompletePipeline("singles_rate needs a completed pipeline");
    const Arm p = static_cast<Arm>(port);
    const Arm q = other(p);
    return 2.0 * state.block_norm(p, p) + state.block_norm(p, q) + state.block_norm(q, p);
}

// ------------------------------------------------------ DenseTensorState

namespace {

void check_budget(std::size_t n, std::size_t m, std::size_t budget)
{
    const double modes = 2.0 * static_cast<double>(n) * static_cast<double>(m);
    const double bytes = modes * modes * static_cast<double>(sizeof(Complex));
    if (bytes > static_cast<double>(budget))
        throw BudgetExceeded("dense two-photon tensor needs " + std::to_string(bytes) +
                             " bytes, budget is " + std::to_string(budget));
}

} // namespace

DenseTensorState::DenseTensorState(SpatialGrid space, FrequencyGrid freq, double pump_frequency,
                                   Eigen::MatrixXcd amplitude, bool outputs_labeled)
    : space_(space), freq_(freq), pump_frequency_(pump_frequency),
      amplitude_(std::move(amplitude)), outputs_labeled_(outputs_labeled)
{
    const auto d = static_cast<Eigen::Index>(2 * space_.size() * freq_.size());
    if (amplitude_.rows() != d || amplitude_.cols() != d)
        throw std::invalid_argument("DenseTensorState: amplitude has the wrong shape");
}

std::size_t DenseTensorState::mode_index(Arm path, std::size_t i, std::size_t k) const
{
    return (static_cast<std::size_t>(index_of(path)) * space_.size() + i) * freq_.size() + k;
}

DenseTensorState DenseTensorState::from_state(const TwoPhotonState& state, std::size_t budget)
{
    const auto& space = state.spatial_grid();
    const auto& freq = state.frequency_grid();
    check_grid_symmetry(space, freq);
    const std::size_t n = space.size();
    const std::size_t m = freq.size();
    check_budget(n, m, budget);

    // sector amplitudes evaluated straight from the state
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    if (const auto* c = std::get_if<CorrelatedPump>(&state.spatial())) {
        for (std::size_t i = 0; i < n; ++i)
            s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
                c->pump[i] * std::sqrt(space.spacing());
    } else {
        s = std::get<GeneralSpatial>(state.spatial()).amplitude;
    }
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    if (const auto* a = std::get_if<AntiCorrelated>(&state.spectral())) {
        const auto w = freq.trapezoid_weights();
        for (std::size_t k = 0; k < m; ++k)
            f(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m - 1 - k)) =
                std::sqrt(a->density(freq.node(k)) * w[k]);
    } else {
        f = std::get<GeneralSpectral>(state.spectral()).amplitude;
    }

    const auto d = static_cast<Eigen::Index>(2 * n * m);
    Eigen::MatrixXcd amp = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = 0; l < m; ++l) {
                    const Complex v = s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                                      f(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
                    if (v != Complex{})
                        amp(static_cast<Eigen::Index>((i * m) + k), static_cast<Eigen::Index>((j * m) + l)) = v;
                }
    amp = 0.5 * (amp + amp.transpose()).eval();
    const double norm = amp.norm();
    if (!(norm > 1e-12))
        throw InvalidState("state has no exchange-symmetric component");
    amp /= norm;
    return DenseTensorState(space, freq, state.pump_frequency(), std::move(amp), false);
}

void DenseTensorState::apply(const Element& element)
{
    if (outputs_labeled_)
        throw InvalidElement("no element may follow RelabelOutputs");
    const auto half = static_cast<Eigen::Index>(space_.size() * freq_.size());
    const std::size_t n = space_.size();
    const std::size_t m = freq_.size();
    std::visit(
        overloaded{
            [&](const BeamSplitter& bs) {
                const auto u = splitter_matrix(bs.convention);
                Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(amplitude_.rows(), amplitude_.cols());
                for (int q1 = 0; q1 < 2; ++q1)
                    for (int q2 = 0; q2 < 2; ++q2)
                        for (int p1 = 0; p1 < 2; ++p1)
                            for (int p2 = 0; p2 < 2; ++p2)
                                next.block(q1 * half, q2 * half, half, half) +=
                                    u[q1][p1] * u[q2][p2] * amplitude_.block(p1 * half, p2 * half, half, half);
                amplitude_ = std::move(next);
            },
            [&](const Delay& d) {
                const auto phases = delay_phases(freq_, pump_frequency_, d.tau);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t k = 0; k < m; ++k) {
                        const auto idx = static_cast<Eigen::Index>(mode_index(d.arm, i, k));
                        amplitude_.row(idx) *= phases[k];
                        amplitude_.col(idx) *= phases[k];
                    }
            },
            [&](const SpatialFlip& f) {
                std::vector<Eigen::Index> perm(static_cast<std::size_t>(amplitude_.rows()));
                for (std::size_t x = 0; x < perm.size(); ++x)
                    perm[x] = static_cast<Eigen::Index>(x);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t k = 0; k < m; ++k)
                        perm[mode_index(f.arm, i, k)] =
                            static_cast<Eigen::Index>(mode_index(f.arm, n - 1 - i, k));
                Eigen::MatrixXcd next(amplitude_.rows(), amplitude_.cols());
                for (std::size_t r = 0; r < perm.size(); ++r)
                    for (std::size_t c = 0; c < perm.size(); ++c)
                        next(perm[r], perm[c]) =
                            amplitude_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                amplitude_ = std::move(next);
            },
            [&](const RelabelOutputs&) { outputs_labeled_ = true; },
        },
        element);
}

double DenseTensorState::block_norm(Arm p1, Arm p2) const
{
    const auto half = static_cast<Eigen::Index>(space_.size() * freq_.size());
    return amplitude_.block(index_of(p1) * half, index_of(p2) * half, half, half).squaredNorm();
}

double DenseTensorState::coincidence_rate() const
{
    if (!outputs_labeled_)
        throw IncompletePipeline("coincidence_rate needs a completed pipeline");
    return 2.0 * (block_norm(Arm::A, Arm::B) + block_norm(Arm::B, Arm::A));
}

double DenseTensorState::singles_rate(Port port) const
{
    if (!outputs_labeled_)
        throw IncompletePipeline("singles_rate needs a completed pipeline");
    const Arm p = static_cast<Arm>(port);
    const Arm q = other(p);
    return 2.0 * block_norm(p, p) + block_norm(p, q) + block_norm(q, p);
}

DenseTensorState to_dense(const BranchSumState& state, std::size_t budget)
{
    const std::size_t n = state.spatial_grid().size();
    const std::size_t m = state.frequency_grid().size();
    check_budget(n, m, budget);
    const auto half = static_cast<Eigen::Index>(n * m);
    Eigen::MatrixXcd amp = Eigen::MatrixXcd::Zero(2 * half, 2 * half);
    for (const auto& b : state.branches()) {
        const Eigen::MatrixXcd s = b.spatial.dense();
        const Eigen::MatrixXcd f = b.spectral.dense();
        // Kronecker product s (x) f placed in the (path1, path2) block
        auto block = amp.block(index_of(b.path1) * half, index_of(b.path2) * half, half, half);
        for (Eigen::Index i = 0; i < s.rows(); ++i)
            for (Eigen::Index j = 0; j < s.cols(); ++j) {
                if (s(i, j) == Complex{})
                    continue;
                block.block(i * static_cast<Eigen::Index>(m), j * static_cast<Eigen::Index>(m),
                            static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)) +=
                    (b.weight * s(i, j)) * f;
            }
    }
    return DenseTensorState(state.spatial_grid(), state.frequency_grid(), state.pump_frequency(),
                            std::move(amp), state.outputs_labeled());
}

// ------------------------------------------------------ MixtureSimulator

namespace {

struct OnePhotonBranch {
    Arm path;
    Complex weight;
    bool flipped;
    std::vector<Complex> spectral;
};

std::vector<OnePhotonBranch> propagate_one_photon(const ElementPipeline& pipeline,
                                                  const FrequencyGrid& freq, double pump_frequency,
                                                  const std::vector<Complex>& spectral)
{
    std::vector<OnePhotonBranch> branches{{Arm::A, 1.0, false, spectral}};
    for (const auto& e : pipeline) {
        std::visit(overloaded{
                       [&](const BeamSplitter& bs) {
                           const auto u = splitter_matrix(bs.convention);
                           std::vector<OnePhotonBranch> next;
                           for (const auto& b : branches)
                               for (Arm q : {Arm::A, Arm::B})
                                   next.push_back({q, b.weight * u[index_of(q)][index_of(b.path)],
                                                   b.flipped, b.spectral});
                           branches = std::move(next);
                       },
                       [&](const Delay& d) {
                           const auto phases = delay_phases(freq, pump_frequency, d.tau);
                           for (auto& b : branches)
                               if (b.path == d.arm)
                                   for (std::size_t k = 0; k < phases.size(); ++k)
                                       b.spectral[k] *= phases[k];
                       },
                       [&](const SpatialFlip& f) {
                           for (auto& b : branches)
                               if (b.path == f.arm)
                                   b.flipped = !b.flipped;
                       },
                       [](const RelabelOutputs&) {},
                   },
                   e);
    }
    return branches;
}

Complex dot(const std::vector<Complex>& u, const std::vector<Complex>& v)
{
    Complex acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        acc += std::conj(u[i]) * v[i];
    return acc;
}

} // namespace

MixtureSimulator::MixtureSimulator(const TwoPhotonState& state, PipelineOptions options)
    : options_(options), pump_frequency_(state.pump_frequency()), freq_(state.frequency_grid()),
      initial_(build_initial_state(state))
{
    const auto reduced = reduce_to_one_photon(state);
    spatial_modes_ = eigendecompose(reduced.spatial);
    std::visit(overloaded{
                   // Every element is diagonal in frequency, so distinct frequency
                   // components never interfere at the detector; the mixture acts
                   // like the coherent vector sqrt(m_k).
                   [&](const DiagonalDensity& d) {
                       std::vector<Complex> v(d.masses.size());
                       for (std::size_t k = 0; k < v.size(); ++k)
                           v[k] = std::sqrt(d.masses[k]);
                       spectral_weights_.push_back(1.0);
                       spectral_modes_.push_back(std::move(v));
                   },
                   [&](const GeneralDensity& g) {
                       Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(g.matrix);
                       for (Eigen::Index j = 0; j < solver.eigenvalues().size(); ++j) {
                           const double w = solver.eigenvalues()(j);
                           if (w < -1e-10)
                               throw NotPositive("spectral density operator has a negative eigenvalue");
                           if (w <= 1e-13)
                               continue;
                           const auto col = solver.eigenvectors().col(j);
                           spectral_weights_.push_back(w);
                           spectral_modes_.emplace_back(col.data(), col.data() + col.size());
                       }
                   },
               },
               reduced.spectral);
}

double MixtureSimulator::single_photon_port_probability(double tau, Port port) const
{
    const auto pipeline = make_pipeline(options_, tau);
    const Arm p = static_cast<Arm>(port);

    // flip overlaps <u, F u> per spatial mode
    std::vector<Complex> flip(spatial_modes_.size());
    for (std::size_t j = 0; j < spatial_modes_.size(); ++j) {
        const auto& u = spatial_modes_[j].mode;
        Complex acc = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            acc += std::conj(u[i]) * u[u.size() - 1 - i];
        flip[j] = acc * u.grid().spacing();
    }

    double total = 0.0;
    for (std::size_t s = 0; s < spectral_modes_.size(); ++s) {
        const auto branches = propagate_one_photon(pipeline, freq_, pump_frequency_, spectral_modes_[s]);
        for (std::size_t j = 0; j < spatial_modes_.size(); ++j) {
            Complex acc = 0.0;
            for (const auto& bx : branches) {
                if (bx.path != p)
                    continue;
                for (const auto& by : branches) {
                    if (by.path != p)
                        continue;
                    const Complex spatial = bx.flipped == by.flipped
                                                ? Complex(1.0)
                                                : (bx.flipped ? std::conj(flip[j]) : flip[j]);
                    acc += std::conj(bx.weight) * by.weight * spatial * dot(bx.spectral, by.spectral);
                }
            }
            total += spectral_weights_[s] * spatial_modes_[j].weight * acc.real();
        }
    }
    return total;
}

Rates MixtureSimulator::at(double tau) const
{
    const auto out = run_pipeline(initial_, make_pipeline(options_, tau));
    return {2.0 * single_photon_port_probability(tau, Port::C),
            2.0 * single_photon_port_probability(tau, Port::D), coincidence_rate(out)};
}

Rates simulate_mixture(const TwoPhotonState& state, const PipelineOptions& options, double tau)
{
    return MixtureSimulator(state, options).at(tau);
}

Interferogram scan(const TwoPhotonState& state, const PipelineOptions& options,
                   const std::vector<double>& taus)
{
    const BranchSumState initial = build_initial_state(state);
    Interferogram out;
    out.tau = taus;
    out.singles_port1.resize(taus.size());
    out.singles_port2.resize(taus.size());
    out.coincidence.resize(taus.size());
    out.kind = options.kind;
    out.pump_frequency = state.pump_frequency();
    out.state_label = state.label();
    out.engine = "oracle";
    parallel_for(taus.size(), [&](std::size_t i) {
        const auto s = run_pipeline(initial, make_pipeline(options, taus[i]));
        out.singles_port1[i] = singles_rate(s, Port::C);
        out.singles_port2[i] = singles_rate(s, Port::D);
        out.coincidence[i] = coincidence_rate(s);
    });
    return out;
}

} // namespace biphoton::oracle
