#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dylp/cli.hpp"
#include "dylp/error.hpp"
#include "dylp/geodesics.hpp"
#include "dylp/harness.hpp"
#include "dylp/ingest.hpp"
#include "dylp/metrics.hpp"
#include "dylp/network_io.hpp"
#include "dylp/synth.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

// JSON crosses the boundary as text; the Python side decodes it.
json parse(const std::string& text) { return text.empty() ? json::object() : json::parse(text); }

dylp::metrics::LabeledScores labeled(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) throw py::value_error("scores and labels differ in length");
    dylp::metrics::LabeledScores ls;
    for (std::size_t i = 0; i < scores.size(); ++i) ls.add(scores[i], labels[i] != 0);
    return ls;
}

std::vector<dylp::predictors::PredictorConfig> configs_from(const std::string& text) {
    std::vector<dylp::predictors::PredictorConfig> out;
    for (const auto& j : parse(text)) out.push_back(dylp::predictors::PredictorConfig::from_json(j));
    return out;
}

}  // namespace

PYBIND11_MODULE(_dylp, m) {
    m.doc() = "Dynamic link prediction evaluation core";
    m.attr("__version__") = std::string(dylp::cli::kVersion);

    static py::exception<dylp::Error> base(m, "DylpError", PyExc_RuntimeError);
    py::register_exception<dylp::ConfigError>(m, "ConfigError", base);
    py::register_exception<dylp::StructuralError>(m, "StructuralError", base);
    py::register_exception<dylp::UndefinedMetricError>(m, "UndefinedMetricError", base);
    py::register_exception<dylp::RangeError>(m, "RangeError", base);
    py::register_exception<dylp::IoError>(m, "IoError", base);
    py::register_exception<dylp::InsufficientHistoryError>(m, "InsufficientHistoryError", base);
    py::register_exception<dylp::EmptyNetworkError>(m, "EmptyNetworkError", base);

    py::class_<dylp::DynamicNetwork>(m, "DynamicNetwork")
        .def_property_readonly("num_nodes", &dylp::DynamicNetwork::num_nodes)
        .def_property_readonly("num_steps", &dylp::DynamicNetwork::num_steps)
        .def_property_readonly("directed", &dylp::DynamicNetwork::directed)
        .def_property_readonly("total_edges", &dylp::DynamicNetwork::total_edges)
        .def_property_readonly("labels", &dylp::DynamicNetwork::labels)
        .def("edges",
             [](const dylp::DynamicNetwork& n, int t) {
                 std::vector<std::pair<dylp::NodeId, dylp::NodeId>> out;
                 for (const auto& e : n.snapshot(t).edges()) out.emplace_back(e.u, e.v);
                 return out;
             },
             py::arg("t"))
        .def("fingerprint", [](const dylp::DynamicNetwork& n) { return dylp::io::network_fingerprint(n); })
        .def("__repr__", [](const dylp::DynamicNetwork& n) {
            std::ostringstream s;
            s << "<DynamicNetwork " << (n.directed() ? "directed" : "undirected") << " nodes=" << n.num_nodes()
              << " steps=" << n.num_steps() << " edges=" << n.total_edges() << ">";
            return s.str();
        });

    m.def(
        "build_network",
        [](const std::vector<std::vector<std::pair<dylp::NodeId, dylp::NodeId>>>& steps, bool directed,
           std::optional<dylp::NodeId> num_nodes) {
            std::vector<dylp::SnapshotSpec> specs;
            int t = 1;
            for (const auto& edges : steps) {
                dylp::SnapshotSpec s;
                s.time_step = t++;
                for (auto [u, v] : edges) s.edges.push_back({u, v});
                specs.push_back(std::move(s));
            }
            return std::move(dylp::build_network(std::move(specs), directed, num_nodes).network);
        },
        py::arg("steps"), py::arg("directed") = false, py::arg("num_nodes") = std::nullopt);

    m.def("load_network", &dylp::io::load_network, py::arg("path"));
    m.def("save_network", &dylp::io::save_network, py::arg("path"), py::arg("network"));

    m.def(
        "_ingest",
        [](const std::string& events, const std::string& config) {
            const auto cfg = dylp::ingest::IngestConfig::from_json(parse(config));
            const auto parsed = dylp::ingest::parse_events_file(events);
            const auto binned = dylp::ingest::bin_events(parsed.events, cfg);
            return dylp::ingest::filter_nodes(binned.network, cfg);
        },
        py::arg("events"), py::arg("config") = "");
    m.def("_summarize", [](const dylp::DynamicNetwork& n) { return dylp::ingest::to_json(dylp::ingest::summarize(n)).dump(); });

    m.def("_generate", [](const std::string& config) {
        return dylp::synth::generate(dylp::synth::SynthConfig::from_json(parse(config)));
    });

    m.def(
        "_evaluate",
        [](const dylp::DynamicNetwork& n, const std::string& predictor, std::optional<std::uint64_t> k,
           unsigned threads) {
            dylp::harness::EvaluationOptions options;
            options.k = k;
            options.threads = threads;
            py::gil_scoped_release release;
            const auto run = dylp::harness::run_evaluation(
                n, dylp::predictors::PredictorConfig::from_json(parse(predictor)), options);
            return dylp::harness::to_json(run, n).dump();
        },
        py::arg("network"), py::arg("predictor"), py::arg("k") = std::nullopt, py::arg("threads") = 1);

    m.def(
        "_compare",
        [](const dylp::DynamicNetwork& n, const std::string& predictors, std::optional<std::uint64_t> k) {
            dylp::harness::EvaluationOptions options;
            options.k = k;
            const auto configs = configs_from(predictors);
            py::gil_scoped_release release;
            json rows = json::array();
            for (const auto& r : dylp::harness::compare_predictors(n, configs, options)) {
                json j = dylp::harness::to_json(r.run, n);
                j["name"] = r.name;
                j["rank"] = r.rank;
                rows.push_back(std::move(j));
            }
            return rows.dump();
        },
        py::arg("network"), py::arg("predictors"), py::arg("k") = std::nullopt);

    m.def(
        "_distances",
        [](const dylp::DynamicNetwork& n, int d_max) {
            return dylp::geodesics::to_json(dylp::geodesics::distance_stratified_stats(n, d_max)).dump();
        },
        py::arg("network"), py::arg("d_max") = 6);

    m.def(
        "roc_auc", [](const std::vector<double>& s, const std::vector<int>& l) { return dylp::metrics::roc_auc(labeled(s, l)); },
        py::arg("scores"), py::arg("labels"));
    m.def(
        "pr_auc", [](const std::vector<double>& s, const std::vector<int>& l) { return dylp::metrics::pr_auc(labeled(s, l)); },
        py::arg("scores"), py::arg("labels"));
    m.def(
        "max_f1",
        [](const std::vector<double>& s, const std::vector<int>& l) {
            return dylp::metrics::max_f1(dylp::metrics::pr_curve(dylp::metrics::RankedScores::from(labeled(s, l))));
        },
        py::arg("scores"), py::arg("labels"));
    m.def(
        "precision_at_k",
        [](const std::vector<double>& s, const std::vector<int>& l, std::uint64_t k) {
            return dylp::metrics::precision_at_k(labeled(s, l), k);
        },
        py::arg("scores"), py::arg("labels"), py::arg("k"));
    m.def(
        "ndcg_at_k",
        [](const std::vector<double>& s, const std::vector<int>& l, std::uint64_t k) {
            return dylp::metrics::ndcg_at_k(labeled(s, l), k);
        },
        py::arg("scores"), py::arg("labels"), py::arg("k"));
    m.def(
        "gmauc",
        [](double prauc_new, double auc_prev, std::uint64_t p, std::uint64_t n) {
            return dylp::metrics::gmauc({prauc_new, auc_prev, p, n});
        },
        py::arg("prauc_new"), py::arg("auc_prev"), py::arg("positives_new"), py::arg("negatives_new"));

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "dylp");
            return dylp::cli::run(args, std::cout, std::cerr);
        },
        py::arg("args"));
}
