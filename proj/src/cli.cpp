#include "dylp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "dylp/error.hpp"
#include "dylp/geodesics.hpp"
#include "dylp/harness.hpp"
#include "dylp/ingest.hpp"
#include "dylp/metrics.hpp"
#include "dylp/network_io.hpp"
#include "dylp/parallel.hpp"
#include "dylp/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace dylp::cli {

namespace {

// <dir>/<stem><suffix>, e.g. fb.net -> fb_summary.csv
fs::path sibling(const fs::path& p, std::string_view suffix) {
    return p.parent_path() / (p.stem().string() + std::string(suffix));
}

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot write '{}'", p.string()));
    return out;
}

void write_json(const fs::path& p, const json& j) {
    auto out = open_out(p);
    out << j.dump(2) << '\n';
    if (!out) throw IoError(fmt::format("error writing '{}'", p.string()));
}

std::string cell(const std::optional<double>& v) { return v ? fmt::format("{:.4f}", *v) : std::string("-"); }
std::string csv_cell(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); }

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// ---------------------------------------------------------------------------
// ingest

struct IngestArgs {
    std::string events;
    std::string config;
    std::string out;
    std::string summary;
    bool prebinned = false;
};

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
    json cfg_json = json::object();
    if (!a.config.empty()) {
        cfg_json = load_config(a.config);
        if (cfg_json.contains("ingest")) cfg_json = cfg_json.at("ingest");
    }
    auto config = ingest::IngestConfig::from_json(cfg_json);
    if (a.prebinned) config.prebinned = true;

    const auto parsed = ingest::parse_events_file(a.events);
    auto binned = ingest::bin_events(parsed.events, config);
    auto network = ingest::filter_nodes(binned.network, config);
    if (network.num_nodes() == 0) throw EmptyNetworkError("no node survives the degree filter");

    const fs::path net_path = a.out;
    io::save_network(net_path, network);

    const fs::path summary_path = a.summary.empty() ? sibling(net_path, "_summary.csv") : fs::path(a.summary);
    const auto summary = ingest::summarize(network);
    {
        auto s = open_out(summary_path);
        ingest::write_summary_csv(s, summary);
    }

    json report{{"manifest", make_manifest(config.to_json(), &network).to_json()},
                {"config", config.to_json()},
                {"events_read", parsed.events.size()},
                {"malformed_lines", parsed.malformed_lines},
                {"events_dropped", binned.events_dropped},
                {"self_loops_dropped", binned.self_loops_dropped},
                {"nodes_before_filter", binned.network.num_nodes()},
                {"summary", ingest::to_json(summary)}};
    write_json(sibling(net_path, "_ingest.json"), report);

    fmt::print(out, "{} nodes, {} steps, {} edges ({} malformed lines, {} events dropped)\n", network.num_nodes(),
               network.num_steps(), network.total_edges(), parsed.malformed_lines, binned.events_dropped);
    fmt::print(out, "{:>6} {:>9} {:>11} {:>13} {:>14} {:>13}\n", "step", "edges", "edge_prob", "new_edge_prob",
               "prev_edge_prob", "deletion_rate");
    for (const auto& s : summary.steps) {
        fmt::print(out, "{:>6} {:>9} {:>11.3e} {:>13} {:>14} {:>13}\n", s.step, s.edges, s.edge_prob,
                   s.new_edge_prob ? fmt::format("{:.3e}", *s.new_edge_prob) : "-",
                   s.prev_edge_prob ? fmt::format("{:.3e}", *s.prev_edge_prob) : "-", cell(s.deletion_rate));
    }
    return ExitCode::ok;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
    std::string network;
    std::string predictors;
    std::string config;
    std::optional<std::uint64_t> k;
    std::string report;
    std::string curves;
    std::string dump;
    std::string categories;
    std::size_t max_curve_points = 5000;
    unsigned threads = 0;
};

std::vector<predictors::PredictorConfig> predictor_configs(const EvaluateArgs& a, const json& cfg) {
    const json shared = cfg.contains("predictor") ? cfg.at("predictor") : json::object();
    if (!shared.is_object()) throw ConfigError("'predictor' must be an object");
    std::vector<predictors::PredictorConfig> configs;
    if (!a.predictors.empty()) {
        for (const auto& name : split_list(a.predictors)) {
            json j = shared;
            j["kind"] = name;
            j.erase("label");
            configs.push_back(predictors::PredictorConfig::from_json(j));
        }
    } else if (cfg.contains("predictors")) {
        for (const auto& item : cfg.at("predictors")) {
            json j = shared;
            j.erase("label");
            if (item.is_string()) {
                j["kind"] = item;
            } else if (item.is_object()) {
                j.update(item);
            } else {
                throw ConfigError("'predictors' entries must be names or objects");
            }
            configs.push_back(predictors::PredictorConfig::from_json(j));
        }
    } else if (shared.contains("kind")) {
        configs.push_back(predictors::PredictorConfig::from_json(shared));
    }
    if (configs.empty()) throw ConfigError("no predictor named (use --predictors or the config's predictor.kind)");
    return configs;
}

std::vector<harness::Population> requested_categories(const std::string& list) {
    if (list.empty()) return {harness::kPopulations.begin(), harness::kPopulations.end()};
    std::vector<harness::Population> out;
    for (const auto& name : split_list(list)) {
        bool found = false;
        for (auto pop : harness::kPopulations) {
            if (harness::to_string(pop) == name) {
                out.push_back(pop);
                found = true;
            }
        }
        if (!found) throw ConfigError(fmt::format("unknown category '{}' (expected all, new, prev)", name));
    }
    return out;
}

fs::path dump_path(const fs::path& base, const std::string& name, bool several) {
    if (!several) return base;
    return base.parent_path() / (base.stem().string() + "_" + name + base.extension().string());
}

int cmd_evaluate(EvaluateArgs a, std::ostream& out, std::ostream& err) {
    json cfg = a.config.empty() ? json::object() : load_config(a.config);
    if (!a.k && cfg.contains("k")) a.k = cfg.at("k").get<std::uint64_t>();
    if (a.categories.empty() && cfg.contains("categories")) {
        std::string joined;
        for (const auto& c : cfg.at("categories")) joined += c.get<std::string>() + ",";
        a.categories = joined;
    }
    const auto configs = predictor_configs(a, cfg);
    const auto categories = requested_categories(a.categories);
    if (a.k && *a.k == 0) throw ConfigError("--k must be >= 1");

    const auto network = io::load_network(a.network);
    harness::EvaluationOptions options;
    options.k = a.k;
    options.threads = resolve_threads(effective_threads(a.threads));

    json effective{{"k", a.k ? json(*a.k) : json(nullptr)}, {"predictors", json::array()}};
    for (const auto& c : configs) effective["predictors"].push_back(c.to_json());

    std::vector<harness::ComparisonRow> rows;
    if (a.dump.empty()) {
        rows = harness::compare_predictors(network, configs, options);
    } else {
        for (const auto& c : configs) {
            auto f = open_out(dump_path(a.dump, c.name(), configs.size() > 1));
            rows.push_back({c.name(), 0, harness::run_evaluation(network, c, options, &f)});
        }
        std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
            const auto& gx = x.run.report.gmauc;
            const auto& gy = y.run.report.gmauc;
            if (gx.has_value() != gy.has_value()) return gx.has_value();
            if (gx && gy && *gx != *gy) return *gx > *gy;
            return x.name < y.name;
        });
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = static_cast<int>(i) + 1;
    }

    json results = json::array();
    for (const auto& r : rows) {
        json j = harness::to_json(r.run, network);
        j.erase("dataset");
        j["name"] = r.name;
        j["rank"] = r.rank;
        results.push_back(std::move(j));
    }
    const fs::path report_path = a.report.empty() ? sibling(a.network, "_report.json") : fs::path(a.report);
    write_json(report_path, {{"manifest", make_manifest(effective, &network).to_json()},
                             {"dataset", harness::dataset_json(network)},
                             {"config", effective},
                             {"results", results}});

    using harness::Population;
    auto at = [](const harness::ComparisonRow& r, Population p) -> const metrics::MetricBundle& {
        return r.run.report.at(p);
    };

    // Human-readable table plus its CSV twin.
    auto table_csv = open_out(sibling(report_path, "_table.csv"));
    table_csv << "rank,predictor,auc,prauc,max_f1,new_auc,new_prauc,prev_auc,prev_prauc,gmauc";
    std::string header = fmt::format("{:>4}  {:<16} {:>7} {:>7} {:>7} {:>8} {:>9} {:>8} {:>9} {:>7}", "rank",
                                     "predictor", "AUC", "PRAUC", "maxF1", "new AUC", "new PRAUC", "prev AUC",
                                     "prev PRAUC", "GMAUC");
    if (a.k) {
        table_csv << fmt::format(",precision_at_{0},ndcg_at_{0}", *a.k);
        header += fmt::format(" {:>9} {:>9}", fmt::format("P@{}", *a.k), fmt::format("NDCG@{}", *a.k));
    }
    table_csv << '\n';
    out << header << '\n';
    for (const auto& r : rows) {
        const auto& all = at(r, Population::all);
        const auto& fresh = at(r, Population::new_links);
        const auto& prev = at(r, Population::prev_links);
        std::string line = fmt::format("{:>4}  {:<16} {:>7} {:>7} {:>7} {:>8} {:>9} {:>8} {:>9} {:>7}", r.rank,
                                       r.name, cell(all.auc), cell(all.prauc), cell(all.max_f1), cell(fresh.auc),
                                       cell(fresh.prauc), cell(prev.auc), cell(prev.prauc), cell(r.run.report.gmauc));
        table_csv << fmt::format("{},{},{},{},{},{},{},{},{},{}", r.rank, r.name, csv_cell(all.auc),
                                 csv_cell(all.prauc), csv_cell(all.max_f1), csv_cell(fresh.auc),
                                 csv_cell(fresh.prauc), csv_cell(prev.auc), csv_cell(prev.prauc),
                                 csv_cell(r.run.report.gmauc));
        if (a.k) {
            line += fmt::format(" {:>9} {:>9}", cell(all.precision_at_k), cell(all.ndcg_at_k));
            table_csv << fmt::format(",{},{}", csv_cell(all.precision_at_k), csv_cell(all.ndcg_at_k));
        }
        out << line << '\n';
        table_csv << '\n';
        for (const auto& w : r.run.warnings) fmt::print(err, "warning: {}: {}\n", r.name, w);
    }
    if (!table_csv) throw IoError("error writing table CSV");
    table_csv.close();

    if (!a.curves.empty()) {
        const fs::path dir = a.curves;
        for (const auto& r : rows) {
            for (Population pop : harness::kPopulations) {
                const auto& rs = r.run.pooled[static_cast<std::size_t>(pop)];
                const std::string stem = fmt::format("{}_{}", r.name, harness::to_string(pop));
                if (rs.positives() > 0 && rs.negatives() > 0) {
                    auto f = open_out(dir / (stem + "_roc.csv"));
                    metrics::write_curve_csv(f, metrics::roc_curve(rs), a.max_curve_points);
                }
                if (rs.positives() > 0) {
                    auto f = open_out(dir / (stem + "_pr.csv"));
                    metrics::write_curve_csv(f, metrics::pr_curve(rs), a.max_curve_points);
                }
            }
        }
    }

    for (Population pop : categories) {
        bool any_defined = false;
        for (const auto& r : rows) {
            const auto& b = at(r, pop);
            any_defined = any_defined || b.auc || b.prauc || b.max_f1 || b.precision_at_k || b.ndcg_at_k;
        }
        if (!any_defined) {
            fmt::print(err, "every metric in category '{}' is undefined\n", harness::to_string(pop));
            return ExitCode::undefined_metrics;
        }
    }
    return ExitCode::ok;
}

// ---------------------------------------------------------------------------
// distances

struct DistancesArgs {
    std::string network;
    int d_max = 6;
    std::string out;
    unsigned threads = 0;
};

int cmd_distances(const DistancesArgs& a, std::ostream& out) {
    const auto network = io::load_network(a.network);
    const auto hist =
        geodesics::distance_stratified_stats(network, a.d_max, resolve_threads(effective_threads(a.threads)));
    const fs::path path = a.out.empty() ? sibling(a.network, "_distances.csv") : fs::path(a.out);
    {
        auto f = open_out(path);
        geodesics::write_histogram_csv(f, hist);
        if (!f) throw IoError(fmt::format("error writing '{}'", path.string()));
    }
    fmt::print(out, "{:>8} {:>12} {:>12} {:>10} {:>12}\n", "distance", "pairs", "edges", "fraction", "edge_prob");
    for (std::size_t i = 0; i < hist.buckets.size(); ++i) {
        const auto& b = hist.buckets[i];
        fmt::print(out, "{:>8} {:>12} {:>12} {:>10.4f} {:>12}\n", b.label, b.pairs, b.edges_formed,
                   hist.fraction_of_edges(i),
                   hist.edge_probability(i) ? fmt::format("{:.3e}", *hist.edge_probability(i)) : "-");
    }
    return ExitCode::ok;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
    std::string config;
    std::string out;
    std::string network;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
    json cfg = load_config(a.config);
    if (cfg.contains("synth")) cfg = cfg.at("synth");
    const auto config = synth::SynthConfig::from_json(cfg);
    const auto network = synth::generate(config);
    {
        auto f = open_out(a.out);
        io::write_prebinned_edges(f, network);
        if (!f) throw IoError(fmt::format("error writing '{}'", a.out));
    }
    if (!a.network.empty()) io::save_network(a.network, network);
    fmt::print(out, "{} nodes, {} steps, {} edges\n", network.num_nodes(), network.num_steps(),
               network.total_edges());
    return ExitCode::ok;
}

}  // namespace

// ---------------------------------------------------------------------------

json RunManifest::to_json() const {
    return {{"tool_version", tool_version}, {"config_hash", config_hash}, {"dataset", dataset},
            {"created_at", created_at}};
}

std::string config_hash(const json& config) { return fmt::format("{:016x}", io::fnv1a64(config.dump())); }

std::string timestamp_now() {
    std::time_t t = 0;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
        t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
    } else {
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunManifest make_manifest(const json& config, const DynamicNetwork* network) {
    RunManifest m;
    m.config_hash = config_hash(config);
    m.dataset = network ? harness::dataset_json(*network) : json(nullptr);
    m.created_at = timestamp_now();
    return m;
}

json unflatten_keys(const json& j) {
    if (!j.is_object()) return j;
    json out = json::object();
    for (const auto& [key, value] : j.items()) {
        json* node = &out;
        std::size_t start = 0;
        for (std::size_t dot = key.find('.'); dot != std::string::npos; dot = key.find('.', start)) {
            node = &(*node)[key.substr(start, dot - start)];
            if (!node->is_object()) {
                if (!node->is_null()) throw ConfigError(fmt::format("config key '{}' clashes with a value", key));
                *node = json::object();
            }
            start = dot + 1;
        }
        json& leaf = (*node)[key.substr(start)];
        if (leaf.is_object() && value.is_object()) {
            leaf.update(unflatten_keys(value));
        } else {
            leaf = unflatten_keys(value);
        }
    }
    return out;
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open config '{}'", path));
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config '{}': {}", path, e.what()));
    }
    if (!j.is_object()) throw ConfigError(fmt::format("config '{}' must be a JSON object", path));
    return unflatten_keys(j);
}

unsigned effective_threads(unsigned requested) {
    if (const char* env = std::getenv("DYLP_THREADS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 0) return static_cast<unsigned>(v);
    }
    return requested;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dynamic link prediction evaluation toolkit", "dylp"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "Bin timestamped events into a dynamic network");
    ingest->add_option("--events", ingest_args.events, "Event file (src dst timestamp)")->required();
    ingest->add_option("--config", ingest_args.config, "JSON ingest config");
    ingest->add_option("--out", ingest_args.out, "Network file to write")->required();
    ingest->add_option("--summary", ingest_args.summary, "Summary CSV (default <out stem>_summary.csv)");
    ingest->add_flag("--prebinned", ingest_args.prebinned, "Third column is the time step");

    EvaluateArgs eval_args;
    auto* evaluate = app.add_subcommand("evaluate", "Rolling one-step-forward evaluation of predictors");
    evaluate->add_option("--network", eval_args.network, "Network file")->required();
    evaluate->add_option("--predictors", eval_args.predictors, "Comma-separated predictor kinds");
    evaluate->add_option("--config", eval_args.config, "JSON config (predictor.* keys)");
    evaluate->add_option("--k", eval_args.k, "Add precision@k and NDCG@k");
    evaluate->add_option("--out,--report", eval_args.report, "Report JSON (default <network stem>_report.json)");
    evaluate->add_option("--curves", eval_args.curves, "Directory for ROC/PR curve CSVs");
    evaluate->add_option("--dump", eval_args.dump, "Per-pair score dump CSV");
    evaluate->add_option("--categories", eval_args.categories, "Categories that must be defined (all,new,prev)");
    evaluate->add_option("--max-curve-points", eval_args.max_curve_points, "Thin curves to this many points (0 = all)");
    evaluate->add_option("--threads", eval_args.threads, "Worker threads (0 = all cores)");

    DistancesArgs dist_args;
    auto* distances = app.add_subcommand("distances", "Edge formation by geodesic distance");
    distances->add_option("--network", dist_args.network, "Network file")->required();
    distances->add_option("--dmax", dist_args.d_max, "Largest separate distance bucket")->check(CLI::Range(2, 1 << 20));
    distances->add_option("--out", dist_args.out, "Histogram CSV (default <network stem>_distances.csv)");
    distances->add_option("--threads", dist_args.threads, "Worker threads (0 = all cores)");

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dynamic network");
    synth->add_option("--config", synth_args.config, "JSON generator config")->required();
    synth->add_option("--out", synth_args.out, "Pre-binned edge list to write")->required();
    synth->add_option("--network", synth_args.network, "Also write the network file");

    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ExitCode::ok;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return ExitCode::ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::usage_error;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(ingest_args, out);
        if (evaluate->parsed()) return cmd_evaluate(eval_args, out, err);
        if (distances->parsed()) return cmd_distances(dist_args, out);
        if (synth->parsed()) return cmd_synth(synth_args, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return ExitCode::usage_error;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return ExitCode::usage_error;
    } catch (const StructuralError& e) {
        err << "input error: " << e.what() << '\n';
        return ExitCode::usage_error;
    } catch (const EmptyNetworkError& e) {
        err << "input error: " << e.what() << '\n';
        return ExitCode::usage_error;
    } catch (const InsufficientHistoryError& e) {
        err << "input error: " << e.what() << '\n';
        return ExitCode::usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::failure;
    }
    return ExitCode::usage_error;
}

int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr); }

}  // namespace dylp::cli
