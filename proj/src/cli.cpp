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

#include "netqalign/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "netqalign/classical_rank.hpp"
#include "netqalign/errors.hpp"
#include "netqalign/experiments.hpp"
#include "netqalign/graphs.hpp"
#include "netqalign/qpe.hpp"

namespace netqalign {

namespace {

struct RankArgs {
    std::string method;
    std::string graph;
    double alpha = 0.85;
    bool undirected = false;
    bool redistribute = false;
};

struct AlignArgs {
    std::string method;
    std::vector<std::string> graphs;
    double alpha = 0.8;
    std::string prior;
    std::size_t kappa = kDefaultKappa;
    std::size_t top = SIZE_MAX;
    std::size_t iterations = 20;
    bool idealized = false;
    double shift = 0.75;
};

struct QpeArgs {
    std::string matrix;
    std::size_t kappa = kDefaultKappa;
    std::string init = "uniform";
    std::string mode = "strict";
    std::string vector_out;
};

struct ExperimentArgs {
    std::string kind;
    std::vector<std::size_t> sizes;
    std::size_t trials = 100;
    std::size_t kappa = kDefaultKappa;
    std::vector<std::size_t> kappas;
    std::vector<double> gaps;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
};

struct Common {
    std::string out;
    double tol = 1e-10;
    std::size_t max_iter = 10000;
};

/// One output file (or stdout) buffered until every computation succeeded.
struct PendingOutput {
    std::string path;
    std::string content;
};

void require_file(const std::string &path) {
    if (!std::filesystem::is_regular_file(path)) throw ValidationError("file not found: " + path);
}

IterationOptions iteration_options(const Common &common) { return {common.tol, common.max_iter}; }

std::vector<PendingOutput> run_rank(const RankArgs &args, const Common &common) {
    require_file(args.graph);
    const Graph g = load_edge_list_file(args.graph, !args.undirected);
    const Matrix a = adjacency(g);
    const auto n = a.rows();
    std::ostringstream csv;
    if (args.method == "pagerank") {
        const auto p_hat = normalize(a, Axis::row, DanglingPolicy::uniform(n));
        const auto p_tilde = google_matrix(p_hat, args.alpha, Vector::Constant(n, 1.0 / static_cast<double>(n)));
        const auto result = pagerank(p_tilde, iteration_options(common));
        csv << "node,score\n";
        for (Eigen::Index i = 0; i < n; ++i) csv << i << ',' << format_double(result.rank.values(i)) << '\n';
    } else {
        const auto result = args.method == "hits"
                                ? hits(a, iteration_options(common))
                                : stochastic_hits(a, iteration_options(common),
                                                  args.redistribute ? DanglingPolicy::uniform(n)
                                                                    : DanglingPolicy::error());
        csv << "node,authority,hub\n";
        for (Eigen::Index i = 0; i < n; ++i) {
            csv << i << ',' << format_double(result.authority.values(i)) << ','
                << format_double(result.hub.values(i)) << '\n';
        }
    }
    return {{common.out, csv.str()}};
}

std::vector<PendingOutput> run_align(const AlignArgs &args, const Common &common) {
    std::vector<Graph> graphs;
    for (const auto &path : args.graphs) {
        require_file(path);
        graphs.push_back(load_edge_list_file(path, false));
    }
    std::vector<std::size_t> dims;
    for (const auto &g : graphs) dims.push_back(g.node_count());
    std::optional<PriorMatrix> prior;
    if (!args.prior.empty()) {
        require_file(args.prior);
        prior = PriorMatrix::from_matrix(read_matrix_file(args.prior));
    }

    std::vector<AlignmentPair> pairs;
    if (args.method == "isorank") {
        if (args.alpha < 1.0 && !prior) {
            std::size_t total = 1;
            for (auto d : dims) total *= d;
            prior = PriorMatrix::uniform(total);
        }
        const auto result = isorank(graphs, args.alpha, prior, iteration_options(common));
        pairs = extract_alignment(result.rank.values, dims, args.top);
    } else if (args.method == "blondel") {
        if (graphs.size() != 2) throw ValidationError("blondel alignment takes exactly two graphs");
        const Matrix s = blondel_similarity(graphs[0], graphs[1], args.iterations);
        Vector flat(s.size());
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
            for (Eigen::Index j = 0; j < s.cols(); ++j) flat(i * s.cols() + j) = s(i, j);
        }
        pairs = extract_alignment(flat, dims, args.top);
    } else {
        AlignOptions options;
        options.alpha = args.alpha;
        options.prior = prior;
        options.kappa = args.kappa;
        options.symmetrize = !args.idealized;
        options.spectral_shift = args.shift;
        options.top = args.top;
        options.iteration = iteration_options(common);
        auto result = align_pipeline(graphs, options);
        pairs = std::move(result.alignment);
    }
    std::ostringstream csv;
    write_alignment_csv(csv, pairs, graphs.size());
    return {{common.out, csv.str()}};
}

std::string default_vector_path(const std::string &out) {
    std::filesystem::path p(out);
    const auto stem = p.stem().string();
    return (p.parent_path() / (stem + "_vector.csv")).string();
}

std::vector<PendingOutput> run_qpe(const QpeArgs &args, const Common &common) {
    if (common.out.empty()) throw ValidationError("qpe requires --out");
    require_file(args.matrix);
    const Matrix a = read_matrix_file(args.matrix);
    Reg2Init init = Reg2Init::uniform();
    if (args.init != "uniform") {
        require_file(args.init);
        const Matrix v = read_matrix_file(args.init);
        if (v.rows() != 1 && v.cols() != 1) throw ValidationError("--init file must hold a vector");
        init = Reg2Init::vector(Eigen::Map<const Vector>(v.data(), v.size()));
    }
    const auto mode = args.mode == "strict" ? PropagatorMode::strict : PropagatorMode::idealized;
    const auto result = phase_estimate(a, args.kappa, init, mode);
    std::ostringstream phases;
    std::ostringstream vec;
    write_phase_distribution_csv(phases, result);
    write_conditional_vector_csv(vec, result, 0);
    const auto vector_path = args.vector_out.empty() ? default_vector_path(common.out) : args.vector_out;
    return {{common.out, phases.str()}, {vector_path, vec.str()}};
}

std::vector<PendingOutput> run_experiment(const ExperimentArgs &args, const Common &common) {
    if (common.out.empty()) throw ValidationError("experiment requires --out");
    std::vector<ExperimentRecord> records;
    ExperimentMetadata meta;
    meta.experiment = args.kind;
    meta.seed = args.seed;
    meta.trials = args.trials;
    if (args.kind == "wishart") {
        meta.sizes = args.sizes.empty() ? std::vector<std::size_t>{32} : args.sizes;
        meta.kappas = {args.kappa};
        records = success_experiment(meta.sizes, args.trials, args.kappa, args.seed, args.threads);
    } else {
        meta.sizes = {args.sizes.empty() ? kDefaultGapSize : args.sizes.front()};
        meta.kappas = args.kappas.empty() ? std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7, 8} : args.kappas;
        meta.gaps = args.gaps.empty() ? std::vector<double>{0.5, 0.25, 0.0625, 0.015625, 0.00390625}
                                      : args.gaps;
        meta.trials = 1;
        records = gap_precision_experiment(meta.gaps, meta.kappas, args.seed, meta.sizes.front());
    }
    std::ostringstream csv;
    std::ostringstream jsonl;
    write_experiment_csv(csv, records);
    write_experiment_metadata(jsonl, meta);
    return {{common.out, csv.str()}, {common.out + ".meta.jsonl", jsonl.str()}};
}

void flush(const std::vector<PendingOutput> &outputs, std::ostream &out) {
    for (const auto &o : outputs) {
        if (o.path.empty()) {
            out << o.content;
            continue;
        }
        std::ofstream file(o.path, std::ios::binary);
        if (!file) throw ValidationError("cannot write " + o.path);
        file << o.content;
    }
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Network alignment by principal-eigenvector ranking of Kronecker product graphs"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--out", common.out, "Output CSV path (stdout when omitted)");
        cmd->add_option("--tol", common.tol, "Convergence tolerance")->check(CLI::PositiveNumber);
        cmd->add_option("--max-iter", common.max_iter, "Iteration cap")->check(CLI::Range(1, 100000000));
    };

    RankArgs rank_args;
    auto *rank = app.add_subcommand("rank", "Rank the nodes of one graph");
    rank->add_option("method", rank_args.method, "pagerank | hits | shits")
        ->required()
        ->check(CLI::IsMember({"pagerank", "hits", "shits"}));
    rank->add_option("--graph", rank_args.graph, "Edge-list file")->required();
    rank->add_option("--alpha", rank_args.alpha, "PageRank damping")->check(CLI::Range(0.0, 1.0));
    rank->add_flag("--undirected", rank_args.undirected, "Treat edges as undirected");
    rank->add_flag("--redistribute", rank_args.redistribute,
                   "shits: replace zero rows/columns with the uniform distribution");
    add_common(rank);

    AlignArgs align_args;
    auto *align = app.add_subcommand("align", "Align two or more undirected graphs");
    align->add_option("method", align_args.method, "isorank | blondel | qpe")
        ->required()
        ->check(CLI::IsMember({"isorank", "blondel", "qpe"}));
    align->add_option("--graphs", align_args.graphs, "Edge-list files")->required()->expected(2, -1);
    align->add_option("--alpha", align_args.alpha, "Weight of topology against the prior")
        ->check(CLI::Range(0.0, 1.0));
    align->add_option("--prior", align_args.prior, "Prior matrix file");
    align->add_option("--kappa", align_args.kappa, "Phase register qubits")
        ->check(CLI::Range(std::size_t{1}, kMaxKappa));
    align->add_option("--top", align_args.top, "Maximum number of aligned tuples")->check(CLI::PositiveNumber);
    align->add_option("--iterations", align_args.iterations, "blondel: even iteration count");
    align->add_flag("--idealized", align_args.idealized,
                    "qpe: use the column-stochastic operator with a non-unitary propagator");
    align->add_option("--shift", align_args.shift, "qpe: spectral shift c in (1-c)A + cI")
        ->check(CLI::Range(0.0, 0.999999));
    add_common(align);

    QpeArgs qpe_args;
    auto *qpe = app.add_subcommand("qpe", "Simulate phase estimation on a matrix");
    qpe->add_option("--matrix", qpe_args.matrix, "Matrix file")->required();
    qpe->add_option("--kappa", qpe_args.kappa, "Phase register qubits")
        ->check(CLI::Range(std::size_t{1}, kMaxKappa));
    qpe->add_option("--init", qpe_args.init, "uniform or a vector file");
    qpe->add_option("--mode", qpe_args.mode, "strict | idealized")
        ->check(CLI::IsMember({"strict", "idealized"}));
    qpe->add_option("--vector-out", qpe_args.vector_out, "Code-0 conditional vector CSV");
    add_common(qpe);

    ExperimentArgs exp_args;
    auto *experiment = app.add_subcommand("experiment", "Run a seeded numerical study");
    experiment->add_option("kind", exp_args.kind, "wishart | gap")
        ->required()
        ->check(CLI::IsMember({"wishart", "gap"}));
    experiment->add_option("--sizes", exp_args.sizes, "Matrix sizes")->delimiter(',')
        ->check(CLI::Range(std::size_t{2}, std::size_t{4096}));
    experiment->add_option("--trials", exp_args.trials, "Trials per size")->check(CLI::PositiveNumber);
    experiment->add_option("--kappa", exp_args.kappa, "Phase register qubits")
        ->check(CLI::Range(std::size_t{1}, kMaxKappa));
    experiment->add_option("--kappas", exp_args.kappas, "gap: phase register sizes")->delimiter(',')
        ->check(CLI::Range(std::size_t{1}, kMaxKappa));
    experiment->add_option("--gaps", exp_args.gaps, "gap: eigenvalue gaps in (0, 1)")->delimiter(',');
    experiment->add_option("--seed", exp_args.seed, "Base seed");
    experiment->add_option("--threads", exp_args.threads, "Worker threads (default NETQALIGN_THREADS)");
    add_common(experiment);

    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitValidation;
    }

    try {
        std::vector<PendingOutput> outputs;
        if (rank->parsed()) {
            outputs = run_rank(rank_args, common);
        } else if (align->parsed()) {
            outputs = run_align(align_args, common);
        } else if (qpe->parsed()) {
            outputs = run_qpe(qpe_args, common);
        } else {
            outputs = run_experiment(exp_args, common);
        }
        flush(outputs, out);
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError &e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace netqalign
