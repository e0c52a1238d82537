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

#include "vampire/fock.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "vampire/error.h"

namespace vampire {
namespace {

void require(bool condition, ErrorCode code, const std::string &message) {
    if (!condition) {
        throw Error(code, message);
    }
}

// Hermiticity, trace and PSD checks shared by single- and multi-mode states.
// Small matrices get an exact eigenvalue check; large multi-mode ones use a
// Cholesky factorization of rho + tol*I, which succeeds iff the smallest
// eigenvalue exceeds -tol (up to rounding).
ComplexMatrix validated_hermitian(const ComplexMatrix &m, const char *what) {
    require(m.rows() == m.cols() && m.rows() > 0, ErrorCode::kInvalidState,
            std::string(what) + " must be a non-empty square matrix");
    require(m.allFinite(), ErrorCode::kInvalidState, std::string(what) + " has non-finite elements");
    double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermiticityTolerance) {
        std::ostringstream os;
        os << what << " is not Hermitian (max |rho - rho^dagger| = " << asym << ")";
        throw Error(ErrorCode::kInvalidState, os.str());
    }
    ComplexMatrix h = 0.5 * (m + m.adjoint());
    double trace = h.trace().real();
    if (std::abs(trace - 1.0) > kTraceTolerance) {
        std::ostringstream os;
        os << what << " trace " << trace << " differs from 1";
        throw Error(ErrorCode::kInvalidState, os.str());
    }
    if (h.rows() <= 256) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
        double lowest = solver.eigenvalues().minCoeff();
        if (lowest < -kPsdTolerance) {
            std::ostringstream os;
            os << what << " is not positive semidefinite (eigenvalue " << lowest << ")";
            throw Error(ErrorCode::kInvalidState, os.str());
        }
    } else {
        ComplexMatrix shifted = h;
        shifted.diagonal().array() += kPsdTolerance;
        Eigen::LLT<ComplexMatrix> llt(shifted);
        if (llt.info() != Eigen::Success) {
            throw Error(ErrorCode::kInvalidState, std::string(what) + " is not positive semidefinite");
        }
    }
    return h;
}

void require_nmax(int nmax) {
    require(nmax >= 1, ErrorCode::kInvalidArgument, "nmax must be at least 1");
}

// Estimated probability that a truncated output would have placed above its
// highest populated-capable level, by geometric extrapolation of the top two
// levels. `top` is the highest level the output can occupy.
double extrapolated_tail(const Eigen::VectorXd &populations, int top) {
    if (top < 1) {
        return 0.0;
    }
    double p_top = populations(top);
    if (p_top <= 0.0) {
        return 0.0;
    }
    double p_below = populations(top - 1);
    if (p_below <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    double ratio = p_top / p_below;
    if (ratio >= 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    return p_top * ratio / (1.0 - ratio);
}

}  // namespace

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix elements, double tail_mass) {
    return DensityMatrix(validated_hermitian(elements, "density matrix"), tail_mass);
}

DensityMatrix DensityMatrix::from_ket(const ComplexVector &ket, double tail_mass) {
    return from_matrix(ket * ket.adjoint(), tail_mass);
}

DensityMatrix make_thermal(double nbar, int nmax, double tail_tolerance) {
    require(std::isfinite(nbar) && nbar >= 0.0, ErrorCode::kInvalidArgument, "nbar must be finite and >= 0");
    require_nmax(nmax);
    const double q = nbar / (1.0 + nbar);
    const double tail = std::pow(q, nmax + 1);
    if (tail > tail_tolerance) {
        std::ostringstream os;
        os << "thermal nbar=" << nbar << " leaves tail mass " << tail << " above nmax=" << nmax;
        throw Error(ErrorCode::kTailMassExceeded, os.str());
    }
    ComplexMatrix rho = ComplexMatrix::Zero(nmax + 1, nmax + 1);
    double p = 1.0 - q;
    for (int n = 0; n <= nmax; ++n) {
        rho(n, n) = p / (1.0 - tail);
        p *= q;
    }
    return DensityMatrix::from_matrix(std::move(rho), tail);
}

DensityMatrix make_coherent(Complex alpha, int nmax, double tail_tolerance) {
    require(std::isfinite(alpha.real()) && std::isfinite(alpha.imag()), ErrorCode::kInvalidArgument,
            "alpha must be finite");
    require_nmax(nmax);
    const double mod2 = std::norm(alpha);
    const double phase = std::arg(alpha);
    ComplexVector ket = ComplexVector::Zero(nmax + 1);
    if (mod2 == 0.0) {
        ket(0) = 1.0;
        return DensityMatrix::from_ket(ket, 0.0);
    }
    const double log_mod = 0.5 * std::log(mod2);
    auto log_weight = [&](int n) { return -mod2 + 2.0 * n * log_mod - std::lgamma(n + 1.0); };
    for (int n = 0; n <= nmax; ++n) {
        ket(n) = std::polar(std::exp(0.5 * log_weight(n)), n * phase);
    }
    // Poisson tail summed directly; terms decrease monotonically once n > |alpha|^2.
    double tail = 0.0;
    for (int n = nmax + 1;; ++n) {
        double term = std::exp(log_weight(n));
        tail += term;
        if (n > mod2 && term < 1e-30 * std::max(tail, 1e-300)) {
            break;
        }
        if (n > nmax + 100000) {
            break;
        }
    }
    if (tail > tail_tolerance) {
        std::ostringstream os;
        os << "coherent |alpha|^2=" << mod2 << " leaves tail mass " << tail << " above nmax=" << nmax;
        throw Error(ErrorCode::kTailMassExceeded, os.str());
    }
    ket /= ket.norm();
    return DensityMatrix::from_ket(ket, tail);
}

DensityMatrix make_fock(int n, int nmax) {
    require_nmax(nmax);
    require(n >= 0, ErrorCode::kInvalidArgument, "photon number must be >= 0");
    if (n > nmax) {
        throw Error(ErrorCode::kOutOfTruncation,
                    "Fock level " + std::to_string(n) + " exceeds nmax=" + std::to_string(nmax));
    }
    ComplexMatrix rho = ComplexMatrix::Zero(nmax + 1, nmax + 1);
    rho(n, n) = 1.0;
    return DensityMatrix::from_matrix(std::move(rho), 0.0);
}

DensityMatrix mix(const DensityMatrix &a, const DensityMatrix &b, double weight) {
    require(a.dim() == b.dim(), ErrorCode::kDimensionMismatch, "mixture of states with different truncation");
    require(weight >= 0.0 && weight <= 1.0, ErrorCode::kInvalidArgument, "mixture weight must lie in [0, 1]");
    return DensityMatrix::from_matrix(weight * a.elements() + (1.0 - weight) * b.elements(),
                                      weight * a.tail_mass() + (1.0 - weight) * b.tail_mass());
}

ComplexMatrix annihilation_matrix(int nmax) {
    require_nmax(nmax);
    ComplexMatrix a = ComplexMatrix::Zero(nmax + 1, nmax + 1);
    for (int n = 1; n <= nmax; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

Subtraction subtract_photon(const DensityMatrix &rho) {
    const ComplexMatrix a = annihilation_matrix(rho.nmax());
    ComplexMatrix out = a * rho.elements() * a.adjoint();
    const double weight = out.trace().real();
    if (weight < kVacuumWeightFloor) {
        throw Error(ErrorCode::kVacuumSubtraction, "no photons to subtract (weight " + std::to_string(weight) + ")");
    }
    out /= weight;
    Eigen::VectorXd pops = out.diagonal().real();
    double tail = std::max(rho.tail_mass(), extrapolated_tail(pops, rho.dim() - 2));
    return {DensityMatrix::from_matrix(std::move(out), tail), weight};
}

DensityMatrix subtract_k(const DensityMatrix &rho, int k, double tail_tolerance) {
    require(k >= 0, ErrorCode::kInvalidArgument, "subtraction count must be >= 0");
    DensityMatrix current = rho;
    for (int step = 1; step <= k; ++step) {
        current = subtract_photon(current).state;
        const int top = rho.nmax() - step;
        double estimate = extrapolated_tail(current.populations(), top);
        if (estimate > tail_tolerance) {
            std::ostringstream os;
            os << "after " << step << " subtractions the truncated tail is estimated at " << estimate;
            throw Error(ErrorCode::kTruncationDegraded, os.str());
        }
    }
    return current;
}

double mean_photon_number(const DensityMatrix &rho) {
    const Eigen::VectorXd pops = rho.populations();
    double mean = 0.0;
    for (int n = 1; n < rho.dim(); ++n) {
        mean += n * pops(n);
    }
    return mean;
}

StateStats stats(const DensityMatrix &rho) {
    const Eigen::VectorXd pops = rho.populations();
    double mean = 0.0;
    double factorial_moment = 0.0;
    for (int n = 1; n < rho.dim(); ++n) {
        mean += n * pops(n);
        factorial_moment += static_cast<double>(n) * (n - 1) * pops(n);
    }
    if (mean < kVacuumWeightFloor) {
        throw Error(ErrorCode::kUndefinedG2, "g2 is undefined for a state without photons");
    }
    return {mean, factorial_moment / (mean * mean)};
}

ComplexMatrix psd_sqrt(const ComplexMatrix &rho, double floor) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho);
    Eigen::VectorXd roots = solver.eigenvalues().unaryExpr([floor](double v) { return v < floor ? 0.0 : std::sqrt(v); });
    const ComplexMatrix &v = solver.eigenvectors();
    return v * roots.asDiagonal() * v.adjoint();
}

double fidelity(const DensityMatrix &a, const DensityMatrix &b) {
    require(a.dim() == b.dim(), ErrorCode::kDimensionMismatch,
            "fidelity between states of dimension " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
    // Nuclear norm of sqrt(a) sqrt(b) equals Tr sqrt(sqrt(a) b sqrt(a)); the SVD
    // keeps eigenvalue noise near zero from being amplified by a square root.
    const ComplexMatrix product = psd_sqrt(a.elements()) * psd_sqrt(b.elements());
    Eigen::JacobiSVD<ComplexMatrix> svd(product);
    const double root = svd.singularValues().sum();
    return std::clamp(root * root, 0.0, 1.0);
}

PairTransform::PairTransform(int dim_i, int dim_j, double t, double r)
    : dim_i_(dim_i), dim_j_(dim_j), t_(t), r_(r), complete_limit_(std::min(dim_i, dim_j)) {
    require(dim_i >= 1 && dim_j >= 1, ErrorCode::kInvalidArgument, "mode dimensions must be positive");
    if (!std::isfinite(t) || !std::isfinite(r) || std::abs(t * t + r * r - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "t^2 + r^2 = " << t * t + r * r << " for t=" << t << ", r=" << r;
        throw Error(ErrorCode::kNonUnitaryParams, os.str());
    }
    const double theta = std::atan2(r, t);
    const int max_total = dim_i + dim_j - 2;
    blocks_.reserve(max_total + 1);
    for (int total = 0; total <= max_total; ++total) {
        // In the basis |m, total - m>, the generator is D^-1 (i S) D with
        // D = diag(i^m) and S real symmetric tridiagonal, so
        // U = D^-1 exp(i theta S) D.
        const int size = total + 1;
        Eigen::MatrixXd u(size, size);
        if (size == 1) {
            u(0, 0) = 1.0;
        } else {
            Eigen::VectorXd diag = Eigen::VectorXd::Zero(size);
            Eigen::VectorXd sub(size - 1);
            for (int m = 0; m + 1 < size; ++m) {
                sub(m) = std::sqrt(static_cast<double>(m + 1) * (total - m));
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
            solver.computeFromTridiagonal(diag, sub);
            const Eigen::MatrixXd &w = solver.eigenvectors();
            const Eigen::VectorXd angles = theta * solver.eigenvalues();
            const Eigen::MatrixXd cos_part = w * angles.array().cos().matrix().asDiagonal() * w.transpose();
            const Eigen::MatrixXd sin_part = w * angles.array().sin().matrix().asDiagonal() * w.transpose();
            for (int row = 0; row < size; ++row) {
                for (int col = 0; col < size; ++col) {
                    // Real part of i^(col - row) (cos_part + i sin_part).
                    switch (((col - row) % 4 + 4) % 4) {
                        case 0:
                            u(row, col) = cos_part(row, col);
                            break;
                        case 1:
                            u(row, col) = -sin_part(row, col);
                            break;
                        case 2:
                            u(row, col) = -cos_part(row, col);
                            break;
                        default:
                            u(row, col) = sin_part(row, col);
                            break;
                    }
                }
            }
        }
        const int m_lo = std::max(0, total - (dim_j - 1));
        const int m_hi = std::min(total, dim_i - 1);
        const int kept = m_hi - m_lo + 1;
        blocks_.push_back({total, m_lo, m_hi, u.block(m_lo, m_lo, kept, kept)});
    }
}

void PairTransform::apply(std::span<const Complex> in, std::span<Complex> out) const {
    const std::size_t size = static_cast<std::size_t>(dim_i_) * dim_j_;
    require(in.size() == size && out.size() == size, ErrorCode::kDimensionMismatch, "pair vector size mismatch");
    for (const Block &block : blocks_) {
        const int kept = block.m_hi - block.m_lo + 1;
        for (int row = 0; row < kept; ++row) {
            Complex acc = 0.0;
            for (int col = 0; col < kept; ++col) {
                const int m = block.m_lo + col;
                acc += block.matrix(row, col) * in[static_cast<std::size_t>(m) * dim_j_ + (block.total - m)];
            }
            const int m = block.m_lo + row;
            out[static_cast<std::size_t>(m) * dim_j_ + (block.total - m)] = acc;
        }
    }
}

double PairTransform::incomplete_weight(std::span<const Complex> pair_amplitudes) const {
    double weight = 0.0;
    for (int m = 0; m < dim_i_; ++m) {
        for (int n = 0; n < dim_j_; ++n) {
            if (!complete(m, n)) {
                weight += std::norm(pair_amplitudes[static_cast<std::size_t>(m) * dim_j_ + n]);
            }
        }
    }
    return weight;
}

Eigen::MatrixXd PairTransform::dense() const {
    const int size = dim_i_ * dim_j_;
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(size, size);
    for (const Block &block : blocks_) {
        const int kept = block.m_hi - block.m_lo + 1;
        for (int row = 0; row < kept; ++row) {
            for (int col = 0; col < kept; ++col) {
                const int m_out = block.m_lo + row;
                const int m_in = block.m_lo + col;
                u(m_out * dim_j_ + (block.total - m_out), m_in * dim_j_ + (block.total - m_in)) =
                    block.matrix(row, col);
            }
        }
    }
    return u;
}

namespace {

struct PairLayout {
    std::vector<long> bases;
    long stride_i;
    long stride_j;
};

PairLayout pair_layout(const std::vector<int> &dims, int mode_i, int mode_j) {
    const int modes = static_cast<int>(dims.size());
    require(mode_i >= 0 && mode_i < modes && mode_j >= 0 && mode_j < modes && mode_i != mode_j,
            ErrorCode::kInvalidArgument, "beamsplitter needs two distinct existing modes");
    std::vector<long> strides(modes, 1);
    for (int k = modes - 2; k >= 0; --k) {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    const long total = strides[0] * dims[0];
    PairLayout layout{{}, strides[mode_i], strides[mode_j]};
    for (long idx = 0; idx < total; ++idx) {
        if ((idx / layout.stride_i) % dims[mode_i] == 0 && (idx / layout.stride_j) % dims[mode_j] == 0) {
            layout.bases.push_back(idx);
        }
    }
    return layout;
}

}  // namespace

ComplexVector apply_pair(const PairTransform &transform, const std::vector<int> &dims, int mode_i, int mode_j,
                         const ComplexVector &ket) {
    require(transform.dim_i() == dims.at(mode_i) && transform.dim_j() == dims.at(mode_j),
            ErrorCode::kDimensionMismatch, "beamsplitter dimensions do not match the state");
    const PairLayout layout = pair_layout(dims, mode_i, mode_j);
    const int di = transform.dim_i();
    const int dj = transform.dim_j();
    std::vector<Complex> in(static_cast<std::size_t>(di) * dj);
    std::vector<Complex> out(in.size());
    ComplexVector result(ket.size());
    for (long base : layout.bases) {
        for (int m = 0; m < di; ++m) {
            for (int n = 0; n < dj; ++n) {
                in[static_cast<std::size_t>(m) * dj + n] = ket(base + m * layout.stride_i + n * layout.stride_j);
            }
        }
        transform.apply(in, out);
        for (int m = 0; m < di; ++m) {
            for (int n = 0; n < dj; ++n) {
                result(base + m * layout.stride_i + n * layout.stride_j) = out[static_cast<std::size_t>(m) * dj + n];
            }
        }
    }
    return result;
}

double incomplete_pair_weight(const PairTransform &transform, const std::vector<int> &dims, int mode_i, int mode_j,
                              const ComplexVector &ket) {
    const PairLayout layout = pair_layout(dims, mode_i, mode_j);
    double weight = 0.0;
    for (long base : layout.bases) {
        for (int m = 0; m < transform.dim_i(); ++m) {
            for (int n = 0; n < transform.dim_j(); ++n) {
                if (!transform.complete(m, n)) {
                    weight += std::norm(ket(base + m * layout.stride_i + n * layout.stride_j));
                }
            }
        }
    }
    return weight;
}

MultiModeState MultiModeState::from_matrix(std::vector<std::string> labels, std::vector<int> dims,
                                           ComplexMatrix elements) {
    require(!labels.empty() && labels.size() == dims.size(), ErrorCode::kInvalidArgument,
            "one dimension per mode label is required");
    require(std::set<std::string>(labels.begin(), labels.end()).size() == labels.size(), ErrorCode::kInvalidArgument,
            "mode labels must be unique");
    long total = 1;
    for (int d : dims) {
        require(d >= 1, ErrorCode::kInvalidArgument, "mode dimensions must be positive");
        total *= d;
    }
    require(elements.rows() == total, ErrorCode::kDimensionMismatch,
            "matrix size does not match the product of mode dimensions");
    return MultiModeState(std::move(labels), std::move(dims), validated_hermitian(elements, "multi-mode state"));
}

MultiModeState MultiModeState::product(const std::vector<std::pair<std::string, DensityMatrix>> &modes) {
    require(!modes.empty(), ErrorCode::kInvalidArgument, "product of zero modes");
    std::vector<std::string> labels;
    std::vector<int> dims;
    ComplexMatrix acc = ComplexMatrix::Ones(1, 1);
    for (const auto &[label, rho] : modes) {
        labels.push_back(label);
        dims.push_back(rho.dim());
        const ComplexMatrix &m = rho.elements();
        ComplexMatrix next(acc.rows() * m.rows(), acc.cols() * m.cols());
        for (Eigen::Index i = 0; i < acc.rows(); ++i) {
            for (Eigen::Index j = 0; j < acc.cols(); ++j) {
                next.block(i * m.rows(), j * m.cols(), m.rows(), m.cols()) = acc(i, j) * m;
            }
        }
        acc = std::move(next);
    }
    require(std::set<std::string>(labels.begin(), labels.end()).size() == labels.size(), ErrorCode::kInvalidArgument,
            "mode labels must be unique");
    // Products of valid states are valid.
    return MultiModeState(std::move(labels), std::move(dims), std::move(acc));
}

int MultiModeState::mode_index(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    require(it != labels_.end(), ErrorCode::kInvalidArgument, "unknown mode '" + std::string(label) + "'");
    return static_cast<int>(it - labels_.begin());
}

DensityMatrix MultiModeState::reduced(std::string_view label) const {
    const int k = mode_index(label);
    long stride = 1;
    for (std::size_t l = k + 1; l < dims_.size(); ++l) {
        stride *= dims_[l];
    }
    const int d = dims_[k];
    ComplexMatrix red = ComplexMatrix::Zero(d, d);
    for (long row = 0; row < total_dim(); ++row) {
        const int a = static_cast<int>((row / stride) % d);
        const long rest = row - a * stride;
        for (int b = 0; b < d; ++b) {
            red(a, b) += elements_(row, rest + b * stride);
        }
    }
    return DensityMatrix::from_matrix(std::move(red));
}

double MultiModeState::mean_photon_number(std::string_view label) const {
    return vampire::mean_photon_number(reduced(label));
}

double MultiModeState::purity() const {
    return elements_.squaredNorm();
}

MultiModeState beamsplitter_apply(const MultiModeState &state, std::string_view mode_i, std::string_view mode_j,
                                  double t, double r, double tail_tolerance) {
    const int i = state.mode_index(mode_i);
    const int j = state.mode_index(mode_j);
    require(i != j, ErrorCode::kInvalidArgument, "beamsplitter needs two distinct modes");
    const PairTransform transform(state.dims()[i], state.dims()[j], t, r);
    const ComplexMatrix &rho = state.elements();

    const PairLayout layout = pair_layout(state.dims(), i, j);
    double leak = 0.0;
    for (long base : layout.bases) {
        for (int m = 0; m < transform.dim_i(); ++m) {
            for (int n = 0; n < transform.dim_j(); ++n) {
                if (!transform.complete(m, n)) {
                    const long idx = base + m * layout.stride_i + n * layout.stride_j;
                    leak += rho(idx, idx).real();
                }
            }
        }
    }
    if (leak > tail_tolerance) {
        std::ostringstream os;
        os << "population " << leak << " lies where the truncated beamsplitter is not exact";
        throw Error(ErrorCode::kTruncationDegraded, os.str());
    }

    ComplexMatrix left(rho.rows(), rho.cols());
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
        left.col(c) = apply_pair(transform, state.dims(), i, j, rho.col(c));
    }
    const ComplexMatrix left_adj = left.adjoint();
    ComplexMatrix both(rho.rows(), rho.cols());
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
        both.col(c) = apply_pair(transform, state.dims(), i, j, left_adj.col(c));
    }
    ComplexMatrix out = both.adjoint();
    // Anything that left the truncation is bounded by `leak` above.
    out /= out.trace().real();
    return MultiModeState::from_matrix(state.labels(), state.dims(), std::move(out));
}

}  // namespace vampire
