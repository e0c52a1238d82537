// Copyright 2026 The Vampire Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VAMPIRE_FOCK_H
#define VAMPIRE_FOCK_H

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace vampire {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr int kDefaultNmax = 40;
inline constexpr double kDefaultTailTolerance = 1e-8;
/// Below this weight a conditional operation is considered to have no support.
inline constexpr double kVacuumWeightFloor = 1e-14;

inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;

/// Single-mode state truncated to Fock levels 0..nmax.
///
/// Instances always satisfy the state invariants (Hermitian, unit trace,
/// positive semidefinite, all within the tolerances above); the only way to
/// obtain one is through a validating factory.
class DensityMatrix {
   public:
    /// Validates `elements` and stores its Hermitian part. Throws
    /// Error(kInvalidState) if any invariant is violated beyond tolerance.
    static DensityMatrix from_matrix(ComplexMatrix elements, double tail_mass = 0.0);

    /// Pure state |psi><psi| from a (normalized) ket.
    static DensityMatrix from_ket(const ComplexVector &ket, double tail_mass = 0.0);

    int dim() const {
        return static_cast<int>(elements_.rows());
    }
    int nmax() const {
        return dim() - 1;
    }
    const ComplexMatrix &elements() const {
        return elements_;
    }
    /// Probability that was above the truncation when the state was built.
    double tail_mass() const {
        return tail_mass_;
    }
    double population(int n) const {
        return elements_(n, n).real();
    }
    Eigen::VectorXd populations() const {
        return elements_.diagonal().real();
    }

   private:
    DensityMatrix(ComplexMatrix elements, double tail_mass)
        : elements_(std::move(elements)), tail_mass_(tail_mass) {
    }

    ComplexMatrix elements_;
    double tail_mass_;
};

struct StateStats {
    double mean_n;
    double g2;
};

DensityMatrix make_thermal(double nbar, int nmax, double tail_tolerance = kDefaultTailTolerance);
DensityMatrix make_coherent(Complex alpha, int nmax, double tail_tolerance = kDefaultTailTolerance);
DensityMatrix make_fock(int n, int nmax);

/// weight * a + (1 - weight) * b.
DensityMatrix mix(const DensityMatrix &a, const DensityMatrix &b, double weight);

/// Lowering operator on levels 0..nmax: a(n-1, n) = sqrt(n).
ComplexMatrix annihilation_matrix(int nmax);

struct Subtraction {
    DensityMatrix state;
    /// Tr(a rho a^dagger), which equals the input's mean photon number.
    double success_weight;
};

Subtraction subtract_photon(const DensityMatrix &rho);

/// k successive heralded subtractions, renormalized after each one.
DensityMatrix subtract_k(const DensityMatrix &rho, int k, double tail_tolerance = kDefaultTailTolerance);

double mean_photon_number(const DensityMatrix &rho);

/// Throws Error(kUndefinedG2) for states with no photons.
StateStats stats(const DensityMatrix &rho);

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2, in [0, 1].
double fidelity(const DensityMatrix &a, const DensityMatrix &b);

/// Matrix square root of a density matrix through its eigendecomposition.
/// Eigenvalues below `floor` are treated as exactly zero.
ComplexMatrix psd_sqrt(const ComplexMatrix &rho, double floor = 1e-14);

/// Exact action of a lossless two-mode beamsplitter on a pair of truncated
/// modes, U = exp(theta (a_i^dagger a_j - a_i a_j^dagger)) with t = cos(theta),
/// r = sin(theta). In the Heisenberg picture U a_i^dagger U^dagger =
/// t a_i^dagger - r a_j^dagger.
///
/// U conserves n_i + n_j, so it is stored block-by-block in total photon
/// number. Blocks whose total exceeds the smaller truncation are only partly
/// representable; those are kept as the exact restricted matrix elements and
/// are not unitary.
class PairTransform {
   public:
    PairTransform(int dim_i, int dim_j, double t, double r);

    int dim_i() const {
        return dim_i_;
    }
    int dim_j() const {
        return dim_j_;
    }
    double t() const {
        return t_;
    }
    double r() const {
        return r_;
    }

    /// Applies U to a pair amplitude vector laid out as [m * dim_j + n].
    void apply(std::span<const Complex> in, std::span<Complex> out) const;

    /// Total |amplitude|^2 carried by basis states in partly representable blocks.
    double incomplete_weight(std::span<const Complex> pair_amplitudes) const;

    /// Whether the pair state (m, n) lives in a block that U maps inside the truncation.
    bool complete(int m, int n) const {
        return m + n < complete_limit_;
    }

    /// Dense (dim_i*dim_j)^2 matrix; for tests and small problems.
    Eigen::MatrixXd dense() const;

   private:
    struct Block {
        int total;
        int m_lo;
        int m_hi;
        Eigen::MatrixXd matrix;
    };

    int dim_i_;
    int dim_j_;
    double t_;
    double r_;
    int complete_limit_;
    std::vector<Block> blocks_;
};

/// Applies `transform` to modes (mode_i, mode_j) of a ket over the tensor product
/// space with per-mode dimensions `dims` (row-major, last mode fastest).
ComplexVector apply_pair(const PairTransform &transform, const std::vector<int> &dims, int mode_i, int mode_j,
                         const ComplexVector &ket);

/// Weight of a multi-mode ket in basis states that `transform` cannot map exactly.
double incomplete_pair_weight(const PairTransform &transform, const std::vector<int> &dims, int mode_i, int mode_j,
                              const ComplexVector &ket);

/// Density matrix over the tensor product of a few labelled truncated modes.
class MultiModeState {
   public:
    static MultiModeState from_matrix(std::vector<std::string> labels, std::vector<int> dims,
                                      ComplexMatrix elements);
    static MultiModeState product(const std::vector<std::pair<std::string, DensityMatrix>> &modes);

    const std::vector<std::string> &labels() const {
        return labels_;
    }
    const std::vector<int> &dims() const {
        return dims_;
    }
    const ComplexMatrix &elements() const {
        return elements_;
    }
    int total_dim() const {
        return static_cast<int>(elements_.rows());
    }
    /// Throws Error(kInvalidArgument) for unknown labels.
    int mode_index(std::string_view label) const;

    /// Reduced single-mode state (partial trace over every other mode).
    DensityMatrix reduced(std::string_view label) const;
    double mean_photon_number(std::string_view label) const;
    double purity() const;

   private:
    MultiModeState(std::vector<std::string> labels, std::vector<int> dims, ComplexMatrix elements)
        : labels_(std::move(labels)), dims_(std::move(dims)), elements_(std::move(elements)) {
    }

    std::vector<std::string> labels_;
    std::vector<int> dims_;
    ComplexMatrix elements_;
};

/// Beamsplitter between two labelled modes. Throws kNonUnitaryParams unless
/// t^2 + r^2 = 1 within 1e-12, and kTruncationDegraded if more than the tail
/// tolerance of the state sits where the truncated map is not exact.
MultiModeState beamsplitter_apply(const MultiModeState &state, std::string_view mode_i, std::string_view mode_j,
                                  double t, double r, double tail_tolerance = kDefaultTailTolerance);

}  // namespace vampire

#endif  // VAMPIRE_FOCK_H
