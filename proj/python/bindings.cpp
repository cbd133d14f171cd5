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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "netqalign/classical_rank.hpp"
#include "netqalign/errors.hpp"
#include "netqalign/experiments.hpp"
#include "netqalign/graphs.hpp"
#include "netqalign/qpe.hpp"

namespace py = pybind11;
using namespace netqalign;

namespace {

IterationOptions opts(double tol, std::size_t max_iter) { return {tol, max_iter}; }

Graph graph_from_text(const std::string &text, bool directed) {
    std::istringstream in(text);
    return load_edge_list(in, directed);
}

PropagatorMode parse_mode(const std::string &mode) {
    if (mode == "strict") return PropagatorMode::strict;
    if (mode == "idealized") return PropagatorMode::idealized;
    throw ValidationError("mode must be 'strict' or 'idealized'");
}

Axis parse_axis(const std::string &axis) {
    if (axis == "row") return Axis::row;
    if (axis == "column") return Axis::column;
    throw ValidationError("axis must be 'row' or 'column'");
}

std::vector<std::pair<std::vector<std::size_t>, double>> pairs_to_py(
    const std::vector<AlignmentPair> &pairs) {
    std::vector<std::pair<std::vector<std::size_t>, double>> out;
    out.reserve(pairs.size());
    for (const auto &p : pairs) out.emplace_back(p.tuple, p.score);
    return out;
}

py::dict report_to_py(const IterationReport &r) {
    py::dict d;
    d["iterations"] = r.iterations;
    d["residual"] = r.residual;
    d["converged"] = r.converged;
    return d;
}

}  // namespace

PYBIND11_MODULE(_netqalign, m) {
    m.doc() = "Kronecker-product network ranking, alignment and phase-estimation simulation";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", validation.ptr());
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", validation.ptr());
    py::register_exception<SizeError>(m, "SizeError", validation.ptr());
    auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<BreakdownError>(m, "BreakdownError", numerical.ptr());
    py::register_exception<ConditioningError>(m, "ConditioningError", numerical.ptr());
    (void)base;

    // graphs
    py::class_<Graph>(m, "Graph")
        .def(py::init([](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>> &edges,
                         bool directed) {
                 std::vector<Edge> es;
                 for (const auto &[s, d, w] : edges) es.push_back({s, d, w});
                 return Graph(n, std::move(es), directed);
             }),
             py::arg("node_count"), py::arg("edges"), py::arg("directed") = false)
        .def_property_readonly("node_count", &Graph::node_count)
        .def_property_readonly("directed", &Graph::directed)
        .def_property_readonly("edges", [](const Graph &g) {
            std::vector<std::tuple<std::size_t, std::size_t, double>> out;
            for (const auto &e : g.edges()) out.emplace_back(e.src, e.dst, e.weight);
            return out;
        });

    m.def("load_edge_list", &load_edge_list_file, py::arg("path"), py::arg("directed") = true);
    m.def("parse_edge_list", &graph_from_text, py::arg("text"), py::arg("directed") = true);
    m.def("adjacency", &adjacency);
    m.def("degrees", &degrees);
    m.def(
        "normalize",
        [](const Matrix &a, const std::string &axis, bool redistribute) {
            const auto policy = redistribute ? DanglingPolicy::uniform(a.rows()) : DanglingPolicy::error();
            return normalize(a, parse_axis(axis), policy).matrix();
        },
        py::arg("matrix"), py::arg("axis") = "row", py::arg("redistribute") = false);
    m.def(
        "google_matrix",
        [](const Matrix &p_hat, double alpha, const Vector &v) {
            return google_matrix(StochasticMatrix(p_hat, Convention::row), alpha, v).matrix();
        },
        py::arg("p_hat"), py::arg("alpha"), py::arg("v"));
    m.def(
        "kronecker", [](const std::vector<Matrix> &factors) { return kronecker(factors); },
        py::arg("factors"));
    m.def(
        "kron_apply",
        [](const std::vector<Matrix> &factors, const Vector &x) {
            return kron_apply(KroneckerOperator(factors), x);
        },
        py::arg("factors"), py::arg("x"));
    m.def("isorank_factor", [](const Graph &g) { return isorank_factor(g); });
    m.def("symmetric_factor", &symmetric_factor);

    // classical ranking
    m.def(
        "pagerank",
        [](const Matrix &p_tilde, double tol, std::size_t max_iter) {
            auto r = pagerank(StochasticMatrix(p_tilde, Convention::row), opts(tol, max_iter));
            return py::make_tuple(r.rank.values, report_to_py(r.report), r.warnings);
        },
        py::arg("p_tilde"), py::arg("tol") = 1e-10, py::arg("max_iter") = 10000);
    m.def(
        "isorank",
        [](const std::vector<Graph> &graphs, double alpha, std::optional<Vector> prior, double tol,
           std::size_t max_iter) {
            std::optional<PriorMatrix> h;
            if (prior) h = PriorMatrix(*prior);
            auto r = isorank(graphs, alpha, h, opts(tol, max_iter));
            return py::make_tuple(r.rank.values, report_to_py(r.report));
        },
        py::arg("graphs"), py::arg("alpha") = 1.0, py::arg("prior") = py::none(), py::arg("tol") = 1e-10,
        py::arg("max_iter") = 10000);
    m.def(
        "isorank_series",
        [](const std::vector<Graph> &graphs, double alpha, const Vector &prior, std::size_t terms) {
            return isorank_series(graphs, alpha, PriorMatrix(prior), terms).values;
        },
        py::arg("graphs"), py::arg("alpha"), py::arg("prior"), py::arg("terms"));
    m.def(
        "molecular_similarity",
        [](const Graph &g1, const Graph &g2, double tol, std::size_t max_iter) {
            return molecular_similarity(g1, g2, opts(tol, max_iter)).rank.values;
        },
        py::arg("g1"), py::arg("g2"), py::arg("tol") = 1e-10, py::arg("max_iter") = 10000);
    m.def(
        "hits",
        [](const Matrix &a, double tol, std::size_t max_iter) {
            auto r = hits(a, opts(tol, max_iter));
            return py::make_tuple(r.authority.values, r.hub.values);
        },
        py::arg("a"), py::arg("tol") = 1e-10, py::arg("max_iter") = 10000);
    m.def(
        "stochastic_hits",
        [](const Matrix &a, double tol, std::size_t max_iter, bool redistribute) {
            const auto policy = redistribute ? DanglingPolicy::uniform(a.rows()) : DanglingPolicy::error();
            auto r = stochastic_hits(a, opts(tol, max_iter), policy);
            return py::make_tuple(r.authority.values, r.hub.values);
        },
        py::arg("a"), py::arg("tol") = 1e-10, py::arg("max_iter") = 10000, py::arg("redistribute") = false);
    m.def("blondel_similarity", [](const Graph &g1, const Graph &g2, std::size_t iterations) {
        return blondel_similarity(g1, g2, iterations);
    });
    m.def(
        "extract_alignment",
        [](const Vector &scores, const std::vector<std::size_t> &dims, std::optional<std::size_t> top) {
            return pairs_to_py(extract_alignment(scores, dims, top.value_or(SIZE_MAX)));
        },
        py::arg("scores"), py::arg("dims"), py::arg("top") = py::none());

    // phase estimation
    py::class_<SpectralDecomposition>(m, "SpectralDecomposition")
        .def_readonly("eigenvalues", &SpectralDecomposition::eigenvalues)
        .def_readonly("eigenvectors", &SpectralDecomposition::eigenvectors)
        .def("residual", &SpectralDecomposition::residual);
    m.def("spectral_decompose", &spectral_decompose, py::arg("a"), py::arg("symmetric") = true);
    m.def(
        "propagator",
        [](const Matrix &a, const std::string &mode) {
            auto p = propagator(a, parse_mode(mode));
            return py::make_tuple(p.matrix, p.unitarity_defect);
        },
        py::arg("a"), py::arg("mode") = "strict");

    py::class_<PhaseEstimationResult>(m, "PhaseEstimationResult")
        .def_readonly("kappa", &PhaseEstimationResult::kappa)
        .def_readonly("dimension", &PhaseEstimationResult::dimension)
        .def_readonly("phase_distribution", &PhaseEstimationResult::phase_distribution)
        .def_readonly("success_probability", &PhaseEstimationResult::success_probability)
        .def_readonly("beta", &PhaseEstimationResult::beta)
        .def_readonly("eigenvalues", &PhaseEstimationResult::eigenvalues)
        .def_readonly("unitarity_defect", &PhaseEstimationResult::unitarity_defect)
        .def_readonly("norm_defect", &PhaseEstimationResult::norm_defect)
        .def("conditional_vector", &conditional_eigenvector, py::arg("phase_code") = 0)
        .def(
            "principal_vector",
            [](const PhaseEstimationResult &r) { return real_from_global_phase(conditional_eigenvector(r, 0)); });
    m.def(
        "phase_estimate",
        [](const Matrix &a, std::size_t kappa, std::optional<Vector> init, const std::string &mode) {
            const auto reg2 = init ? Reg2Init::vector(*init) : Reg2Init::uniform();
            return phase_estimate(a, kappa, reg2, parse_mode(mode));
        },
        py::arg("a"), py::arg("kappa") = kDefaultKappa, py::arg("init") = py::none(),
        py::arg("mode") = "strict");
    m.def(
        "verify_stochastic_success",
        [](const Matrix &a, const std::string &convention) {
            const Convention c = convention == "row"      ? Convention::row
                                 : convention == "column" ? Convention::column
                                                          : Convention::doubly;
            const auto r = verify_stochastic_success(StochasticMatrix(a, c));
            py::dict d;
            d["holds"] = r.holds;
            d["defective"] = r.defective;
            d["max_violation"] = r.max_violation;
            d["eigenvalues"] = r.eigenvalues;
            d["component_sums"] = r.component_sums;
            return d;
        },
        py::arg("a"), py::arg("convention") = "column");
    m.def(
        "cost_model",
        [](const std::vector<std::size_t> &sizes, std::size_t kappa) {
            const auto c = cost_model(sizes, kappa);
            py::dict d;
            d["reg2_qubits"] = c.reg2_qubits;
            d["reg1_qubits"] = c.reg1_qubits;
            d["gate_bound_dense"] = c.gate_bound_dense;
            d["gate_bound_sparse"] = c.gate_bound_sparse;
            return d;
        },
        py::arg("sizes"), py::arg("kappa") = kDefaultKappa);

    // experiments
    m.def("wishart", &wishart, py::arg("size"), py::arg("seed"));
    py::class_<ExperimentRecord>(m, "ExperimentRecord")
        .def_readonly("experiment", &ExperimentRecord::experiment)
        .def_readonly("size", &ExperimentRecord::size)
        .def_readonly("trial", &ExperimentRecord::trial)
        .def_readonly("kappa", &ExperimentRecord::kappa)
        .def_readonly("gap", &ExperimentRecord::gap)
        .def_readonly("beta_n_sq", &ExperimentRecord::beta_n_sq)
        .def_readonly("qpe_success", &ExperimentRecord::qpe_success)
        .def_readonly("fidelity", &ExperimentRecord::fidelity);
    m.def(
        "success_experiment",
        [](const std::vector<std::size_t> &sizes, std::size_t trials, std::size_t kappa, std::uint64_t seed,
           std::size_t threads) {
            py::gil_scoped_release release;
            return success_experiment(sizes, trials, kappa, seed, threads);
        },
        py::arg("sizes"), py::arg("trials") = 100, py::arg("kappa") = kDefaultKappa, py::arg("seed") = 1,
        py::arg("threads") = 0);
    m.def(
        "gap_precision_experiment",
        [](const std::vector<double> &gaps, const std::vector<std::size_t> &kappas, std::uint64_t seed,
           std::size_t size) { return gap_precision_experiment(gaps, kappas, seed, size); },
        py::arg("gaps"), py::arg("kappas"), py::arg("seed") = 1, py::arg("size") = kDefaultGapSize);
    m.def(
        "align",
        [](const std::vector<Graph> &graphs, std::size_t kappa, bool symmetrize, double alpha,
           double shift, std::optional<std::size_t> top) {
            AlignOptions o;
            o.kappa = kappa;
            o.symmetrize = symmetrize;
            o.alpha = alpha;
            o.spectral_shift = shift;
            o.top = top.value_or(SIZE_MAX);
            const auto r = align_pipeline(graphs, o);
            py::dict report;
            report["cosine"] = r.report.cosine;
            report["flagged"] = r.report.flagged;
            report["success_probability"] = r.report.success_probability;
            report["unitarity_defect"] = r.report.unitarity_defect;
            report["quantum_scores"] = r.report.quantum_scores;
            report["classical_scores"] = r.report.classical_scores;
            report["notes"] = r.report.notes;
            return py::make_tuple(pairs_to_py(r.alignment), report);
        },
        py::arg("graphs"), py::arg("kappa") = kDefaultKappa, py::arg("symmetrize") = true,
        py::arg("alpha") = 0.8, py::arg("shift") = 0.75, py::arg("top") = py::none());
}
