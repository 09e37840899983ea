#ifndef BIPHOTON_ORACLE_HPP
#define BIPHOTON_ORACLE_HPP

// Discrete-mode two-photon linear-optics simulator. Every photon mode is a
// (path, position index, frequency index) triple; elements act on each photon
// with the same single-particle unitary, and detectors sum over position and
// frequency. It is an independent check on the closed forms.

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/interferometer.hpp"
#include "biphoton/spatial.hpp"
#include "biphoton/spectral.hpp"
#include "biphoton/state.hpp"

namespace biphoton::oracle {

/// Interferometer arm / path. Before RelabelOutputs paths are {a, b}; after it
/// the same indices denote output ports {c, d}.
enum class Arm : std::uint8_t { A = 0, B = 1 };
enum class Port : std::uint8_t { C = 0, D = 1 };

/// Single-sector factor of a branch amplitude, a matrix over (photon 1 index,
/// photon 2 index). Diagonal and anti-diagonal layouts store only a vector.
class Factor {
public:
    enum class Layout { Diagonal, AntiDiagonal, Full };

    static Factor diagonal(std::vector<Complex> v);
    /// Entry (i, n-1-i) holds v[i].
    static Factor anti_diagonal(std::vector<Complex> v);
    static Factor full(Eigen::MatrixXcd m);

    Layout layout() const { return layout_; }
    std::size_t size() const { return n_; }

    Complex at(std::size_t i, std::size_t j) const;
    Eigen::MatrixXcd dense() const;

    /// Multiply photon 1's index by d (rows), or photon 2's (columns).
    void scale_first(const std::vector<Complex>& d);
    void scale_second(const std::vector<Complex>& d);
    /// Reverse photon 1's (or photon 2's) index.
    void flip_first();
    void flip_second();
    Factor transposed() const;

    /// sum_ij conj(this_ij) other_ij
    Complex inner(const Factor& other) const;
    double squared_norm() const { return inner(*this).real(); }

    bool operator==(const Factor& other) const;

private:
    Factor(Layout layout, std::size_t n) : layout_(layout), n_(n) {}

    Layout layout_;
    std::size_t n_;
    std::vector<Complex> vec_;
    Eigen::MatrixXcd mat_;
};

/// weight * spatial(i, i') * spectral(k, k') on paths (path1, path2).
struct Branch {
    Arm path1;
    Arm path2;
    Complex weight;
    Factor spatial;
    Factor spectral;
};

/**
 * Two-photon amplitude as a short sum of separable branches. The amplitude is
 * the first-quantized, exchange-symmetric wavefunction with unit norm.
 */
class BranchSumState {
public:
    BranchSumState(SpatialGrid space, FrequencyGrid freq, double pump_frequency,
                   std::vector<Branch> branches);

    const std::vector<Branch>& branches() const { return branches_; }
    std::size_t branch_count() const { return branches_.size(); }
    const SpatialGrid& spatial_grid() const { return space_; }
    const FrequencyGrid& frequency_grid() const { return freq_; }
    double pump_frequency() const { return pump_frequency_; }
    bool outputs_labeled() const { return outputs_labeled_; }

    double norm() const;
    /// || A - swap(A) ||, zero for an exchange-symmetric state.
    double exchange_asymmetry() const;
    /// Squared norm of the block with photon 1 on path p1 and photon 2 on p2.
    double block_norm(Arm p1, Arm p2) const;

    // used by apply_element
    std::vector<Branch>& mutable_branches() { return branches_; }
    void mark_outputs_labeled() { outputs_labeled_ = true; }
    void coalesce();

private:
    SpatialGrid space_;
    FrequencyGrid freq_;
    double pump_frequency_;
    std::vector<Branch> branches_;
    bool outputs_labeled_ = false;
};

enum class BeamSplitterConvention {
    Symmetric,          // a -> (a + i b)/sqrt2, b -> (i a + b)/sqrt2
    SymmetricConjugate, // a -> (a - i b)/sqrt2, b -> (-i a + b)/sqrt2
};

struct BeamSplitter {
    BeamSplitterConvention convention = BeamSplitterConvention::Symmetric;
};
/// Photon at omega_p/2 + Omega in `arm` picks up exp(-i (omega_p/2 + Omega) tau).
struct Delay {
    Arm arm;
    double tau;
};
/// x -> -x for photons in `arm`.
struct SpatialFlip {
    Arm arm;
};
struct RelabelOutputs {};

using Element = std::variant<BeamSplitter, Delay, SpatialFlip, RelabelOutputs>;
using ElementPipeline = std::vector<Element>;

struct PipelineOptions {
    InterferometerKind kind = InterferometerKind::Mzi;
    Arm delay_arm = Arm::B;
    Arm flip_arm = Arm::B;
    BeamSplitterConvention convention = BeamSplitterConvention::Symmetric;
};

/// [BS, Delay, BS, Relabel] for an MZI; [BS, Delay, Flip, BS, Relabel] for an MZIM.
ElementPipeline make_pipeline(const PipelineOptions& options, double tau);

/// Both photons on path a; spatial and spectral factors taken from the state
/// and symmetrized under photon exchange. Throws GridAsymmetry for even
/// point counts (no flip / negation bijection).
BranchSumState build_initial_state(const TwoPhotonState& state);

BranchSumState apply_element(BranchSumState state, const Element& element);
BranchSumState run_pipeline(BranchSumState state, const ElementPipeline& pipeline);

/// 2 * P(one photon in c, one in d): unit incoherent background.
/// Throws IncompletePipeline before RelabelOutputs.
double coincidence_rate(const BranchSumState& state);
/// Expected photon number at `port` (the two ports sum to 2).
double singles_rate(const BranchSumState& state, Port port);

inline constexpr std::size_t kDefaultDenseBudget = std::size_t{1} << 30; // bytes

/**
 * Full (2NM) x (2NM) two-photon amplitude. Mode index m = (path N + i) M + k.
 * Elements are applied as A -> U A U^T with the dense single-particle U.
 */
class DenseTensorState {
public:
    /// Built directly from the state's sector functions, independent of the branch sum.
    static DenseTensorState from_state(const TwoPhotonState& state,
                                       std::size_t budget = kDefaultDenseBudget);

    DenseTensorState(SpatialGrid space, FrequencyGrid freq, double pump_frequency,
                     Eigen::MatrixXcd amplitude, bool outputs_labeled);

    const Eigen::MatrixXcd& amplitude() const { return amplitude_; }
    bool outputs_labeled() const { return outputs_labeled_; }
    std::size_t mode_count() const { return static_cast<std::size_t>(amplitude_.rows()); }
    std::size_t mode_index(Arm path, std::size_t i, std::size_t k) const;

    double norm() const { return amplitude_.norm(); }
    double exchange_asymmetry() const { return (amplitude_ - amplitude_.transpose()).norm(); }

    void apply(const Element& element);
    double coincidence_rate() const;
    double singles_rate(Port port) const;

private:
    double block_norm(Arm p1, Arm p2) const;

    SpatialGrid space_;
    FrequencyGrid freq_;
    double pump_frequency_;
    Eigen::MatrixXcd amplitude_;
    bool outputs_labeled_;
};

/// Throws BudgetExceeded when (2NM)^2 complex amplitudes exceed `budget` bytes.
DenseTensorState to_dense(const BranchSumState& state, std::size_t budget = kDefaultDenseBudget);

struct Rates {
    double singles_port1;
    double singles_port2;
    double coincidence;
};

/**
 * Coincidences from the pure two-photon state; singles as the weighted average
 * over the coherent modes of the reduced one-photon state.
 */
class MixtureSimulator {
public:
    MixtureSimulator(const TwoPhotonState& state, PipelineOptions options);

    Rates at(double tau) const;
    const std::vector<CoherentMode>& spatial_modes() const { return spatial_modes_; }

private:
    double single_photon_port_probability(double tau, Port port) const;

    PipelineOptions options_;
    double pump_frequency_;
    FrequencyGrid freq_;
    BranchSumState initial_;
    std::vector<CoherentMode> spatial_modes_;
    std::vector<double> spectral_weights_;
    std::vector<std::vector<Complex>> spectral_modes_;
};

Rates simulate_mixture(const TwoPhotonState& state, const PipelineOptions& options, double tau);

/// Oracle scan using the branch-sum state for both singles and coincidences.
Interferogram scan(const TwoPhotonState& state, const PipelineOptions& options,
                   const std::vector<double>& taus);

} // namespace biphoton::oracle

#endif
