// Copyright 2026 The netqalign Authors
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

#include "netqalign/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"

#include "netqalign/errors.hpp"
#include "netqalign/random.hpp"
#include "oracles.hpp"

using namespace netqalign;

namespace {

/// Fidelity of the code-0 vector when only mu_N and mu_{N-1} carry equal
/// weight: 1 / sqrt(1 + |D(gap)|^2), D the normalized Dirichlet kernel.
double two_level_fidelity(double gap, std::size_t kappa) {
    const double t = static_cast<double>(std::size_t{1} << kappa);
    const double num = std::sin(std::numbers::pi * t * gap);
    const double den = t * std::sin(std::numbers::pi * gap);
    const double d2 = (num * num) / (den * den);
    return 1.0 / std::sqrt(1.0 + d2);
}

std::string csv(const std::vector<ExperimentRecord> &records) {
    std::ostringstream out;
    write_experiment_csv(out, records);
    return out.str();
}

}  // namespace

TEST(counter_rng, deterministic_and_in_range) {
    CounterRng a(42);
    CounterRng b(42);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        EXPECT_EQ(u, b.uniform());
        EXPECT_GT(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
    EXPECT_NE(derive_seed(1, 8, 0), derive_seed(1, 8, 1));
    EXPECT_NE(derive_seed(1, 8, 0), derive_seed(1, 16, 0));
    EXPECT_NE(derive_seed(1, 8, 0), derive_seed(2, 8, 0));
}

TEST(counter_rng, normal_moments) {
    CounterRng rng(7);
    double sum = 0.0;
    double sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sq / n, 1.0, 0.01);
}

TEST(wishart, symmetric_with_unit_spectral_radius) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix a = wishart(8, seed);
        EXPECT_LE(symmetry_defect(a), 1e-12);
        auto d = spectral_decompose(a);
        EXPECT_NEAR(d.eigenvalues(7), 1.0, 1e-10);
        EXPECT_GT(a.minCoeff(), 0.0);
    }
}

TEST(wishart, deterministic_per_seed) {
    const Matrix a = wishart(16, 99);
    const Matrix b = wishart(16, 99);
    EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * std::size_t(a.size())), 0);
    EXPECT_NE(wishart(16, 100), a);
}

TEST(wishart, size_two_is_positive) {
    const Matrix a = wishart(2, 5);
    EXPECT_GT(a.minCoeff(), 0.0);
    EXPECT_THROW(wishart(1, 5), ValidationError);
}

TEST(success_experiment, records_and_bounds) {
    const std::vector<std::size_t> sizes{8, 12};
    auto records = success_experiment(sizes, 10, 6, 3, 2);
    ASSERT_EQ(records.size(), 20u);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto &r = records[i];
        EXPECT_EQ(r.size, sizes[i / 10]);
        EXPECT_EQ(r.trial, i % 10);
        EXPECT_EQ(r.kappa, 6u);
        EXPECT_EQ(r.experiment, "wishart");
        const double n = static_cast<double>(r.size);
        EXPECT_GT(r.beta_n_sq, 1.0 / n);
        EXPECT_LE(r.beta_n_sq, 1.0 + 1e-12);
        EXPECT_GE(r.beta_n_sq, r.max_other_beta_abs * r.max_other_beta_abs);
        EXPECT_GT(r.gap, 0.0);
        // Exact Dirichlet prediction.
        EXPECT_NEAR(r.qpe_success, r.predicted_code0, 1e-10);
        // Code 0 always holds at least the principal weight times |D(0)|^2 = 1.
        EXPECT_GE(r.qpe_success, r.beta_n_sq - 1e-10);
    }
}

TEST(success_experiment, deterministic_across_thread_counts) {
    const std::vector<std::size_t> sizes{8, 16};
    const auto one = csv(success_experiment(sizes, 6, 5, 11, 1));
    const auto many = csv(success_experiment(sizes, 6, 5, 11, 4));
    EXPECT_EQ(one, many);
    EXPECT_EQ(one, csv(success_experiment(sizes, 6, 5, 11, 3)));
    EXPECT_NE(one, csv(success_experiment(sizes, 6, 5, 12, 1)));
}

TEST(success_experiment, trials_independent_of_grid) {
    // Trial (16, 2) does not depend on which other sizes or trials ran.
    const std::vector<std::size_t> a{16};
    const std::vector<std::size_t> b{8, 16};
    auto ra = success_experiment(a, 3, 4, 21, 1);
    auto rb = success_experiment(b, 5, 4, 21, 1);
    EXPECT_EQ(ra[2].beta_n_sq, rb[5 + 2].beta_n_sq);
    EXPECT_EQ(ra[2].qpe_success, rb[5 + 2].qpe_success);
}

TEST(success_experiment, validation) {
    const std::vector<std::size_t> bad{1};
    EXPECT_THROW(success_experiment(bad, 2, 6, 1), ValidationError);
    const std::vector<std::size_t> ok{4};
    EXPECT_THROW(success_experiment(ok, 0, 6, 1), ValidationError);
}

TEST(gap_instance, spectrum_and_uniform_split) {
    for (double gap : {0.5, 0.25, 0.01}) {
        auto inst = gap_instance(8, gap, 17);
        EXPECT_LE(symmetry_defect(inst.matrix), 1e-15);
        auto d = spectral_decompose(inst.matrix);
        EXPECT_NEAR(d.eigenvalues(7), 1.0, 1e-12);
        EXPECT_NEAR(d.eigenvalues(6), 1.0 - gap, 1e-12);
        EXPECT_NEAR(d.eigenvalues(0), 0.5, 1e-12);
        const Vector u = Vector::Constant(8, 1.0 / std::sqrt(8.0));
        EXPECT_NEAR(inst.principal.dot(u), 1.0 / std::sqrt(2.0), 1e-12);
        EXPECT_NEAR(inst.second.dot(u), 1.0 / std::sqrt(2.0), 1e-12);
        EXPECT_LE((inst.matrix * inst.principal - inst.principal).norm(), 1e-12);
        EXPECT_LE((inst.matrix * inst.second - (1 - gap) * inst.second).norm(), 1e-12);
    }
    EXPECT_THROW(gap_instance(2, 0.5, 1), ValidationError);
    EXPECT_THROW(gap_instance(8, 0.0, 1), ValidationError);
    EXPECT_THROW(gap_instance(8, 1.0, 1), ValidationError);
}

TEST(gap_precision, examples) {
    const std::vector<double> gaps{0.25, 0.00390625, 0.5};
    const std::vector<std::size_t> k6{6};
    auto r = gap_precision_experiment(gaps, k6, 5);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_GE(r[0].fidelity, 1.0 - 1e-6);
    EXPECT_LT(r[1].fidelity, 0.99);
    EXPECT_NEAR(r[1].fidelity, two_level_fidelity(0.00390625, 6), 1e-9);

    const std::vector<double> half{0.5};
    const std::vector<std::size_t> k1{1};
    auto h = gap_precision_experiment(half, k1, 5);
    EXPECT_GE(h[0].fidelity, 1.0 - 1e-9);
    auto inst = gap_instance(kDefaultGapSize, 0.5, 5);
    auto qpe = phase_estimate(inst.matrix, 1);
    EXPECT_NEAR(qpe.phase_distribution(0), 0.5, 1e-10);
    EXPECT_NEAR(qpe.phase_distribution(1), 0.5, 1e-10);
}

TEST(gap_precision, matches_two_level_formula_and_is_monotone_in_kappa) {
    const std::vector<double> gaps{0.5, 0.25, 0.0625, 0.015625, 0.00390625};
    const std::vector<std::size_t> kappas{1, 2, 3, 4, 5, 6, 7, 8};
    auto records = gap_precision_experiment(gaps, kappas, 9);
    ASSERT_EQ(records.size(), gaps.size() * kappas.size());
    for (std::size_t g = 0; g < gaps.size(); ++g) {
        double previous = 0.0;
        for (std::size_t k = 0; k < kappas.size(); ++k) {
            const auto &r = records[g * kappas.size() + k];
            EXPECT_EQ(r.trial, g);
            EXPECT_EQ(r.kappa, kappas[k]);
            EXPECT_EQ(r.gap, gaps[g]);
            EXPECT_NEAR(r.fidelity, two_level_fidelity(gaps[g], kappas[k]), 1e-9);
            EXPECT_GE(r.fidelity, previous - 1e-12);
            previous = r.fidelity;
        }
    }
}

TEST(experiment_csv, header_and_rows) {
    const std::vector<std::size_t> sizes{4};
    const auto text = csv(success_experiment(sizes, 2, 3, 1, 1));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "experiment,size,trial,kappa,gap,beta_n_sq,qpe_success,fidelity");
    int rows = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(line.rfind("wishart,4,", 0), 0u);
        ++rows;
    }
    EXPECT_EQ(rows, 2);
}

TEST(experiment_metadata, json_lines) {
    ExperimentMetadata meta;
    meta.experiment = "gap";
    meta.gaps = {0.5, 0.25};
    meta.kappas = {1, 2};
    meta.seed = 12345678901234567890ULL;
    std::ostringstream out;
    write_experiment_metadata(out, meta);
    const std::string text = out.str();
    ASSERT_FALSE(text.empty());
    EXPECT_EQ(text.back(), '\n');
    EXPECT_EQ(text.find('\n'), text.size() - 1);
    const auto j = nlohmann::json::parse(text);
    EXPECT_EQ(j.at("experiment"), "gap");
    EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 12345678901234567890ULL);
    EXPECT_EQ(j.at("gaps").size(), 2u);
}

TEST(thread_count, environment_override) {
    ::setenv("NETQALIGN_THREADS", "3", 1);
    EXPECT_EQ(default_thread_count(), 3u);
    ::setenv("NETQALIGN_THREADS", "junk", 1);
    EXPECT_GE(default_thread_count(), 1u);
    ::unsetenv("NETQALIGN_THREADS");
    EXPECT_GE(default_thread_count(), 1u);
}

TEST(align_pipeline, identical_edges) {
    const Graph edge(2, {{0, 1}}, false);
    std::vector<Graph> gs{edge, edge};
    auto r = align_pipeline(gs);
    EXPECT_GE(r.report.cosine, 1.0 - 1e-6);
    EXPECT_FALSE(r.report.flagged);
    EXPECT_EQ(r.report.mode, PropagatorMode::strict);
    EXPECT_LE(r.report.unitarity_defect, 1e-8);
}

TEST(align_pipeline, identical_triangles_give_bijection) {
    const Graph tri(3, {{0, 1}, {1, 2}, {0, 2}}, false);
    std::vector<Graph> gs{tri, tri};
    auto r = align_pipeline(gs);
    ASSERT_EQ(r.alignment.size(), 3u);
    std::set<std::size_t> left;
    std::set<std::size_t> right;
    for (const auto &p : r.alignment) {
        left.insert(p.tuple[0]);
        right.insert(p.tuple[1]);
    }
    EXPECT_EQ(left.size(), 3u);
    EXPECT_EQ(right.size(), 3u);
}

TEST(align_pipeline, self_alignment_cosine_and_identity) {
    std::mt19937_64 rng(191);
    int checked = 0;
    while (checked < 5) {
        const auto g = oracle::random_connected_graph(rng, 5, 3, true);
        if (oracle::is_bipartite(adjacency(g))) continue;
        auto d = spectral_decompose(symmetric_factor(g));
        if (1.0 - d.eigenvalues(3) < 0.1) continue;
        std::vector<Graph> gs{g, g};
        auto r = align_pipeline(gs);
        EXPECT_GE(r.report.cosine, 0.999);
        EXPECT_TRUE(r.report.classical_converged);
        for (const auto &p : r.alignment) EXPECT_EQ(p.tuple[0], p.tuple[1]);
        ++checked;
    }
}

TEST(align_pipeline, notes_and_modes) {
    const Graph tri(3, {{0, 1}, {1, 2}, {0, 2}}, false);
    std::vector<Graph> gs{tri, tri};
    AlignOptions opts;
    opts.alpha = 0.5;
    auto sym = align_pipeline(gs, opts);
    EXPECT_EQ(sym.report.alpha_used, 1.0);
    EXPECT_FALSE(sym.report.notes.empty());

    opts.symmetrize = false;
    opts.top = 2;
    auto ideal = align_pipeline(gs, opts);
    EXPECT_EQ(ideal.report.mode, PropagatorMode::idealized);
    EXPECT_EQ(ideal.report.alpha_used, 0.5);
    EXPECT_EQ(ideal.alignment.size(), 2u);
    EXPECT_GT(ideal.report.cosine, 0.0);

    opts.spectral_shift = 1.0;
    EXPECT_THROW(align_pipeline(gs, opts), ValidationError);
}
