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

#include <cmath>
#include <functional>
#include <random>

#include "gtest/gtest.h"
#include "vampire/error.h"

using namespace vampire;

namespace {

ErrorCode code_of(const std::function<void()> &fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "expected vampire::Error";
    return ErrorCode::kInvalidArgument;
}

DensityMatrix random_state(int dim, int rank, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    ComplexMatrix cols(dim, rank);
    for (Eigen::Index i = 0; i < cols.size(); ++i) {
        cols(i) = Complex(g(rng), g(rng));
    }
    ComplexMatrix m = cols * cols.adjoint();
    return DensityMatrix::from_matrix(m / m.trace().real());
}

// Embeds a two-mode operator acting on modes (i, j) of three modes of size d.
ComplexMatrix embed_pair(const Eigen::MatrixXd &pair, int d, int i, int j) {
    const int total = d * d * d;
    ComplexMatrix out = ComplexMatrix::Zero(total, total);
    const int other = 3 - i - j;
    auto index = [&](int vi, int vj, int vo) {
        int v[3];
        v[i] = vi;
        v[j] = vj;
        v[other] = vo;
        return (v[0] * d + v[1]) * d + v[2];
    };
    for (int o = 0; o < d; ++o) {
        for (int a = 0; a < d * d; ++a) {
            for (int b = 0; b < d * d; ++b) {
                if (pair(a, b) != 0.0) {
                    out(index(a / d, a % d, o), index(b / d, b % d, o)) = pair(a, b);
                }
            }
        }
    }
    return out;
}

// Same pipeline as regional_subtraction, with dense operators on the full
// three-mode density matrix.
DensityMatrix dense_pipeline(const DensityMatrix &rho, const SplitConfig &cfg) {
    const int d = rho.dim();
    const int total = d * d * d;
    ComplexMatrix vac = ComplexMatrix::Zero(d, d);
    vac(0, 0) = 1.0;
    const ComplexMatrix ab = mode_split(rho, cfg.c_a).elements();
    ComplexMatrix state = ComplexMatrix::Zero(total, total);
    for (int x = 0; x < d * d; ++x) {
        for (int y = 0; y < d * d; ++y) {
            state(x * d, y * d) = ab(x, y);
        }
    }
    const double t = std::sqrt(1.0 - cfg.r * cfg.r);
    const ComplexMatrix tap = embed_pair(PairTransform(d, d, t, cfg.r).dense(), d, 0, 2);
    ComplexMatrix a_r = ComplexMatrix::Zero(total, total);
    ComplexMatrix not_vac = ComplexMatrix::Identity(total, total);
    for (int x = 0; x < d * d; ++x) {
        for (int j = 1; j < d; ++j) {
            a_r(x * d + j - 1, x * d + j) = std::sqrt(double(j));
        }
        not_vac(x * d, x * d) = 0.0;
    }
    const ComplexMatrix herald =
        cfg.herald_model == HeraldModel::kOperator ? ComplexMatrix(tap.adjoint() * a_r * tap) : ComplexMatrix(not_vac * tap);
    const ComplexMatrix recombine = embed_pair(PairTransform(d, d, cfg.c_a, cfg.c_b()).dense(), d, 0, 1);
    const ComplexMatrix k = recombine * herald;
    ComplexMatrix out = k * state * k.adjoint();
    out /= out.trace().real();
    return MultiModeState::from_matrix({"A", "B", "R"}, {d, d, d}, out).reduced("A");
}

}  // namespace

TEST(ModeSplit, full_fraction_leaves_b_empty) {
    MultiModeState ab = mode_split(make_thermal(0.5, 10, 1e-4), 1.0);
    EXPECT_NEAR(ab.mean_photon_number("B"), 0.0, 1e-15);
    EXPECT_LE((ab.reduced("A").elements() - make_thermal(0.5, 10, 1e-4).elements()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ModeSplit, single_photon) {
    const double c_a = 0.3;
    ComplexVector ket = split_ket(make_fock(1, 3).elements().col(1), c_a);
    const int d = 4;
    EXPECT_NEAR(ket[1 * d + 0].real(), c_a, 1e-15);
    EXPECT_NEAR(ket[0 * d + 1].real(), std::sqrt(1 - c_a * c_a), 1e-15);
    EXPECT_NEAR(ket.squaredNorm(), 1.0, 1e-15);
}

TEST(ModeSplit, two_photon_binomial_weights) {
    const int d = 3;
    ComplexVector ket = split_ket(ComplexVector::Unit(d, 2), 0.6);
    // c_a^4, 2 c_a^2 c_b^2, c_b^4 with c_a^2 = 0.36.
    EXPECT_NEAR(std::norm(ket[2 * d + 0]), 0.1296, 1e-15);
    EXPECT_NEAR(std::norm(ket[1 * d + 1]), 0.4608, 1e-15);
    EXPECT_NEAR(std::norm(ket[0 * d + 2]), 0.4096, 1e-15);
}

TEST(ModeSplit, preserves_total_photon_distribution) {
    std::mt19937_64 rng(3);
    const int d = 9;
    for (double c_a : {0.0, 0.2, 0.77, 1.0}) {
        DensityMatrix rho = random_state(d, 3, rng);
        MultiModeState ab = mode_split(rho, c_a);
        Eigen::VectorXd total = Eigen::VectorXd::Zero(2 * d);
        for (int k = 0; k < d; ++k) {
            for (int m = 0; m < d; ++m) {
                total[k + m] += ab.elements()(k * d + m, k * d + m).real();
            }
        }
        for (int n = 0; n < 2 * d; ++n) {
            EXPECT_NEAR(total[n], n < d ? rho.population(n) : 0.0, 1e-14);
        }
    }
}

TEST(ModeSplit, agrees_with_beamsplitter_route) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    const int d = 12;
    ComplexVector psi(d);
    for (int n = 0; n < d; ++n) {
        psi[n] = Complex(g(rng), g(rng));
    }
    psi.normalize();
    const double c_a = 0.45;
    ComplexVector padded = ComplexVector::Zero(d * d);
    for (int n = 0; n < d; ++n) {
        padded[n * d] = psi[n];
    }
    ComplexVector via_bs = apply_pair(PairTransform(d, d, c_a, -std::sqrt(1 - c_a * c_a)), {d, d}, 0, 1, padded);
    EXPECT_LE((via_bs - split_ket(psi, c_a)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(RegionalSubtraction, thermal_operator_model_matches_whole_beam) {
    DensityMatrix rho = make_thermal(1.0, kVerifyNmax);
    RegionalResult res = regional_subtraction(rho, {std::sqrt(0.3), 0.1, HeraldModel::kOperator});
    EXPECT_GE(fidelity(res.state, subtract_photon(rho).state), 1 - 1e-9);
    EXPECT_LE(res.complement_population, 1e-10);
    EXPECT_NEAR(res.herald_prob, 0.01 * 0.3 * mean_photon_number(rho), 1e-10);
}

TEST(RegionalSubtraction, coherent_state_unchanged) {
    DensityMatrix rho = make_coherent(1.0, kVerifyNmax);
    for (double c_a : {0.05, 0.5, 0.95, 1.0}) {
        for (double r : {0.01, 0.25, 0.5}) {
            RegionalResult res = regional_subtraction(rho, {c_a, r, HeraldModel::kOperator});
            EXPECT_GE(fidelity(res.state, rho), 1 - 1e-9) << c_a << " " << r;
        }
    }
}

TEST(RegionalSubtraction, single_photon_becomes_vacuum) {
    for (HeraldModel model : {HeraldModel::kOperator, HeraldModel::kClick}) {
        RegionalResult res = regional_subtraction(make_fock(1, 5), {0.5, 0.1, model});
        EXPECT_NEAR(res.state.population(0), 1.0, 1e-13);
        EXPECT_NEAR(res.complement_population, 0.0, 1e-13);
    }
}

TEST(RegionalSubtraction, matches_dense_three_mode_pipeline) {
    std::mt19937_64 rng(8);
    DensityMatrix rho = random_state(6, 2, rng);
    for (HeraldModel model : {HeraldModel::kOperator, HeraldModel::kClick}) {
        const SplitConfig cfg{0.6, 0.3, model};
        const DensityMatrix dense = dense_pipeline(rho, cfg);
        const RegionalResult res = regional_subtraction(rho, cfg, 1.0);
        EXPECT_LE((dense.elements() - res.state.elements()).cwiseAbs().maxCoeff(), 1e-12)
            << herald_model_name(model);
    }
}

TEST(RegionalSubtraction, click_model_leaves_the_mode_at_large_r) {
    RegionalResult res = regional_subtraction(make_thermal(1.0, kVerifyNmax), {std::sqrt(0.3), 0.5, HeraldModel::kClick});
    EXPECT_GT(res.complement_population, 1e-4);
    EXPECT_LT(fidelity(res.state, subtract_photon(make_thermal(1.0, kVerifyNmax)).state), 0.999);
}

TEST(RegionalSubtraction, errors) {
    DensityMatrix rho = make_thermal(1.0, 20, 1e-6);
    EXPECT_EQ(code_of([&] { regional_subtraction(rho, {0.5, 0.0, HeraldModel::kClick}); }),
              ErrorCode::kHeraldImpossible);
    EXPECT_EQ(code_of([&] { regional_subtraction(rho, {0.5, 0.0, HeraldModel::kOperator}); }),
              ErrorCode::kHeraldImpossible);
    EXPECT_EQ(code_of([&] { regional_subtraction(rho, {0.0, 0.2, HeraldModel::kOperator}); }),
              ErrorCode::kHeraldImpossible);
    EXPECT_EQ(code_of([&] { regional_subtraction(make_fock(0, 4), {0.5, 0.2, HeraldModel::kOperator}); }),
              ErrorCode::kHeraldImpossible);
    EXPECT_EQ(code_of([&] { regional_subtraction(rho, {1.2, 0.2, HeraldModel::kOperator}); }),
              ErrorCode::kInvalidArgument);
    EXPECT_EQ(code_of([&] { regional_subtraction(rho, {0.5, -0.1, HeraldModel::kOperator}); }),
              ErrorCode::kInvalidArgument);
    EXPECT_EQ(code_of([] { parse_herald_model("photon_counting"); }), ErrorCode::kInvalidArgument);
    EXPECT_EQ(parse_herald_model(herald_model_name(HeraldModel::kClick)), HeraldModel::kClick);
}

TEST(HeraldModelGap, vanishes_quadratically) {
    const DensityMatrix rho = make_thermal(1.0, kVerifyNmax);
    const double c_a = std::sqrt(0.3);
    auto points = herald_model_gap(rho, c_a, {0.02, 0.05, 0.1, 0.2});
    for (size_t i = 1; i < points.size(); ++i) {
        EXPECT_GT(points[i].deviation, points[i - 1].deviation);
    }
    EXPECT_GT(points.front().fidelity, 1 - 1e-7);
    EXPECT_NEAR(log_log_slope(points), 2.0, 0.3);
    const double ratio = points[2].deviation / points[1].deviation;
    EXPECT_NEAR(ratio, 4.0, 4.0 * 0.3);
    EXPECT_EQ(code_of([&] { herald_model_gap(rho, c_a, {0.0}); }), ErrorCode::kHeraldImpossible);
}

TEST(VerifySweep, operator_model_theorem_holds_everywhere) {
    VerifySweep sweep;
    sweep.states = default_verify_states();
    const auto rows = run_verify_sweep(sweep, 2);
    ASSERT_EQ(rows.size(), 6u * 3 * 3 * 2);
    int operator_rows = 0;
    for (size_t s = 0; s < sweep.states.size(); ++s) {
        const double mean = mean_photon_number(sweep.states[s].rho);
        for (size_t i = s * 18; i < (s + 1) * 18; ++i) {
            const VerifyRow &row = rows[i];
            EXPECT_EQ(row.state, sweep.states[s].name);
            if (row.herald_model != HeraldModel::kOperator) {
                EXPECT_GT(row.fidelity, 0.95);
                continue;
            }
            ++operator_rows;
            EXPECT_GE(row.fidelity, 1 - 1e-9) << row.state << " " << row.c_a << " " << row.r;
            EXPECT_LE(row.complement_population, 1e-10);
            EXPECT_NEAR(row.herald_prob, row.r * row.r * row.c_a * row.c_a * mean, 1e-10);
        }
    }
    EXPECT_EQ(operator_rows, 54);
}

TEST(VerifySweep, row_order_independent_of_threads) {
    VerifySweep sweep;
    sweep.states = {{"thermal:0.5", make_thermal(0.5, 20)}, {"fock:2", make_fock(2, 6)}};
    sweep.c_a_values = {0.3, 0.8};
    const auto one = run_verify_sweep(sweep, 1);
    const auto four = run_verify_sweep(sweep, 4);
    ASSERT_EQ(one.size(), four.size());
    for (size_t i = 0; i < one.size(); ++i) {
        EXPECT_EQ(one[i].state, four[i].state);
        EXPECT_EQ(one[i].r, four[i].r);
        EXPECT_EQ(one[i].herald_model, four[i].herald_model);
        EXPECT_EQ(one[i].fidelity, four[i].fidelity);
        EXPECT_EQ(one[i].herald_prob, four[i].herald_prob);
    }
}
