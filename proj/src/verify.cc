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


#include "vampire/verify.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "vampire/error.h"

namespace vampire {

namespace {

using RowMajorComplex = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Eigencomponents lighter than this carry no measurable weight.
constexpr double kComponentFloor = 1e-15;

void check_unit_interval(double value, const char *name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        std::ostringstream os;
        os << name << " = " << value << " is outside [0, 1]";
        throw Error(ErrorCode::kInvalidArgument, os.str());
    }
}

// log C(n, k) through lgamma keeps the binomial weights finite for large n.
double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double power_or_one(double base, int exponent) {
    return exponent == 0 ? 1.0 : std::pow(base, exponent);
}

// Lowers the last mode of a ket in place: |..., j> -> sqrt(j) |..., j-1>.
void lower_last_mode(ComplexVector &ket, int last_dim) {
    const Eigen::Index outer = ket.size() / last_dim;
    for (Eigen::Index o = 0; o < outer; ++o) {
        Complex *slice = ket.data() + o * last_dim;
        for (int j = 0; j + 1 < last_dim; ++j) {
            slice[j] = std::sqrt(static_cast<double>(j + 1)) * slice[j + 1];
        }
        slice[last_dim - 1] = 0.0;
    }
}

void clear_last_mode_vacuum(ComplexVector &ket, int last_dim) {
    for (Eigen::Index o = 0; o < ket.size(); o += last_dim) {
        ket[o] = 0.0;
    }
}

void check_exact(const PairTransform &transform, const std::vector<int> &dims, int i, int j,
                 const ComplexVector &ket, double weight, double tail_tolerance) {
    const double leak = weight * incomplete_pair_weight(transform, dims, i, j, ket);
    if (leak > tail_tolerance) {
        std::ostringstream os;
        os << "population " << leak << " lies where the truncated beamsplitter is not exact";
        throw Error(ErrorCode::kTruncationDegraded, os.str());
    }
}

struct Unchecked {
    ComplexMatrix whole_beam;  // unnormalized
    double herald_weight;
    double complement_weight;
};

Unchecked regional_unchecked(const DensityMatrix &rho, const SplitConfig &cfg, double tail_tolerance) {
    check_unit_interval(cfg.c_a, "c_A");
    check_unit_interval(cfg.r, "r");
    const int d = rho.dim();
    const std::vector<int> dims{d, d, d};
    const double t_tap = std::sqrt(std::max(0.0, 1.0 - cfg.r * cfg.r));
    const PairTransform tap(d, d, t_tap, cfg.r);
    const PairTransform untap(d, d, t_tap, -cfg.r);
    // The split is a beamsplitter with r = -c_b acting on (beam, vacuum); its
    // inverse recombines A and B into (beam, complement).
    const PairTransform recombine(d, d, cfg.c_a, cfg.c_b());

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho.elements());
    Unchecked out{ComplexMatrix::Zero(d, d), 0.0, 0.0};
    for (int k = 0; k < d; ++k) {
        const double weight = eig.eigenvalues()(k);
        if (weight < kComponentFloor) {
            continue;
        }
        const ComplexVector ab = split_ket(eig.eigenvectors().col(k), cfg.c_a);
        ComplexVector abr = ComplexVector::Zero(static_cast<Eigen::Index>(d) * d * d);
        for (Eigen::Index idx = 0; idx < ab.size(); ++idx) {
            abr[idx * d] = ab[idx];
        }
        check_exact(tap, dims, 0, 2, abr, weight, tail_tolerance);
        abr = apply_pair(tap, dims, 0, 2, abr);
        if (cfg.herald_model == HeraldModel::kOperator) {
            lower_last_mode(abr, d);
            check_exact(untap, dims, 0, 2, abr, weight, tail_tolerance);
            abr = apply_pair(untap, dims, 0, 2, abr);
        } else {
            clear_last_mode_vacuum(abr, d);
        }
        check_exact(recombine, dims, 0, 1, abr, weight, tail_tolerance);
        abr = apply_pair(recombine, dims, 0, 1, abr);

        // Rows: whole-beam level. Columns: (complement, R) pairs.
        Eigen::Map<const RowMajorComplex> m(abr.data(), d, static_cast<Eigen::Index>(d) * d);
        out.whole_beam.noalias() += weight * (m * m.adjoint());
        out.complement_weight += weight * m.rightCols(static_cast<Eigen::Index>(d) * (d - 1)).squaredNorm();
    }
    out.herald_weight = out.whole_beam.trace().real();
    return out;
}

RegionalResult finish(const DensityMatrix &rho, const Unchecked &raw) {
    if (!(raw.herald_weight >= kHeraldWeightFloor)) {
        std::ostringstream os;
        os << "herald weight " << raw.herald_weight << " is below " << kHeraldWeightFloor;
        throw Error(ErrorCode::kHeraldImpossible, os.str());
    }
    const double tail = rho.tail_mass() > 0.0 ? subtract_photon(rho).state.tail_mass() : 0.0;
    return RegionalResult{DensityMatrix::from_matrix(raw.whole_beam / raw.herald_weight, tail), raw.herald_weight,
                          raw.complement_weight / raw.herald_weight};
}

}  // namespace

std::string_view herald_model_name(HeraldModel model) {
    return model == HeraldModel::kOperator ? "operator" : "click_povm";
}

HeraldModel parse_herald_model(std::string_view name) {
    if (name == "operator") {
        return HeraldModel::kOperator;
    }
    if (name == "click_povm" || name == "click") {
        return HeraldModel::kClick;
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown herald model '" + std::string(name) + "'");
}

double SplitConfig::c_b() const {
    return std::sqrt(std::max(0.0, 1.0 - c_a * c_a));
}

ComplexVector split_ket(const ComplexVector &ket, double c_a) {
    check_unit_interval(c_a, "c_A");
    const double c_b = std::sqrt(std::max(0.0, 1.0 - c_a * c_a));
    const int d = static_cast<int>(ket.size());
    ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(d) * d);
    for (int n = 0; n < d; ++n) {
        if (ket[n] == Complex(0.0)) {
            continue;
        }
        for (int k = 0; k <= n; ++k) {
            const double binom = std::exp(0.5 * log_binomial(n, k));
            out[static_cast<Eigen::Index>(k) * d + (n - k)] =
                ket[n] * binom * power_or_one(c_a, k) * power_or_one(c_b, n - k);
        }
    }
    return out;
}

MultiModeState mode_split(const DensityMatrix &rho, double c_a) {
    const int d = rho.dim();
    ComplexMatrix isometry(static_cast<Eigen::Index>(d) * d, d);
    for (int n = 0; n < d; ++n) {
        isometry.col(n) = split_ket(ComplexVector::Unit(d, n), c_a);
    }
    return MultiModeState::from_matrix({"A", "B"}, {d, d}, isometry * rho.elements() * isometry.adjoint());
}

RegionalResult regional_subtraction(const DensityMatrix &rho, const SplitConfig &cfg, double tail_tolerance) {
    RegionalResult result = finish(rho, regional_unchecked(rho, cfg, tail_tolerance));
    if (cfg.herald_model == HeraldModel::kOperator && result.complement_population > kComplementTolerance) {
        std::ostringstream os;
        os << "complement mode holds " << result.complement_population << " after operator-model heralding";
        throw Error(ErrorCode::kResidualOrthogonalPopulation, os.str());
    }
    return result;
}

std::vector<GapPoint> herald_model_gap(const DensityMatrix &rho, double c_a, const std::vector<double> &r_values) {
    const DensityMatrix ideal = subtract_photon(rho).state;
    std::vector<GapPoint> points;
    points.reserve(r_values.size());
    for (double r : r_values) {
        RegionalResult click = regional_subtraction(rho, SplitConfig{c_a, r, HeraldModel::kClick});
        const double f = fidelity(ideal, click.state);
        points.push_back(GapPoint{r, f, std::sqrt(std::max(0.0, 1.0 - f))});
    }
    return points;
}

double log_log_slope(const std::vector<GapPoint> &points) {
    if (points.size() < 2) {
        throw Error(ErrorCode::kInvalidArgument, "slope needs at least two points");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const GapPoint &p : points) {
        if (!(p.r > 0.0 && p.deviation > 0.0)) {
            throw Error(ErrorCode::kInvalidArgument, "log-log slope needs positive r and deviation");
        }
        const double x = std::log(p.r);
        const double y = std::log(p.deviation);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(points.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<NamedState> default_verify_states(int nmax) {
    return {
        {"thermal:0.5", make_thermal(0.5, nmax)}, {"thermal:1", make_thermal(1.0, nmax)},
        {"coherent:1", make_coherent(1.0, nmax)}, {"fock:1", make_fock(1, nmax)},
        {"fock:2", make_fock(2, nmax)},           {"fock:3", make_fock(3, nmax)},
    };
}

std::vector<VerifyRow> run_verify_sweep(const VerifySweep &sweep, int threads) {
    struct Case {
        const NamedState *state;
        double c_a;
        double r;
        HeraldModel model;
    };
    std::vector<Case> cases;
    for (const NamedState &s : sweep.states) {
        for (double c_a : sweep.c_a_values) {
            for (double r : sweep.r_values) {
                for (HeraldModel model : sweep.models) {
                    cases.push_back(Case{&s, c_a, r, model});
                }
            }
        }
    }
    std::vector<DensityMatrix> ideal;
    ideal.reserve(sweep.states.size());
    for (const NamedState &s : sweep.states) {
        ideal.push_back(subtract_photon(s.rho).state);
    }

    std::vector<VerifyRow> rows(cases.size());
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (size_t i = next++; i < cases.size() && !failed; i = next++) {
            const Case &c = cases[i];
            try {
                RegionalResult res = finish(c.state->rho, regional_unchecked(c.state->rho, {c.c_a, c.r, c.model},
                                                                             kDefaultTailTolerance));
                const size_t s = static_cast<size_t>(c.state - sweep.states.data());
                rows[i] = VerifyRow{c.state->name, c.c_a, c.r, c.model, fidelity(ideal[s], res.state),
                                    res.herald_prob, res.complement_population};
            } catch (...) {
                if (!failed.exchange(true)) {
                    failure = std::current_exception();
                }
            }
        }
    };
    const int n_threads = std::clamp(threads, 1, static_cast<int>(std::max<size_t>(cases.size(), 1)));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (std::thread &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return rows;
}

}  // namespace vampire
