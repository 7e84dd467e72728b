// Command-line driver: lineage reconstruction, simulation, evaluation and
// bundle serving.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lichee/evaluation.hpp"
#include "lichee/io.hpp"
#include "lichee/pipeline.hpp"
#include "lichee/serve.hpp"
#include "lichee/simulator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitNoTree = 3;

// Long options that are also accepted with a single dash.
const std::set<std::string> kSingleDashLong{
    "maxVAFAbsent", "minVAFPresent", "minClusterSize", "minPrivateClusterSize", "maxClusterDist",
    "maxTrees",     "maxGrowCalls",  "numSave",        "cp",                    "clustersFile",
    "dot",          "json",          "minNodeSupport", "minRobustPeers",        "seed",
    "timestamp",    "noPrivateConstraint", "rootVAF", "rootEdges"};

std::vector<std::string> normalize_args(int argc, char** argv) {
    std::vector<std::string> out;
    for (int i = 0; i < argc; ++i) {
        std::string a = argv[i];
        if (i > 0 && a.size() > 2 && a[0] == '-' && a[1] != '-') {
            const std::string name = a.substr(1, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 1);
            if (kSingleDashLong.count(name)) a = "-" + a;
        }
        out.push_back(std::move(a));
    }
    return out;
}

struct SimOptions {
    std::size_t samples = 5;
    std::string scheme = "localized";
    std::uint64_t coverage = 0;
    double p_ssnv = 0.15;
    double p_cnv = 0.0;
    double p_death = 0.06;
    int iterations = 50;
    std::uint64_t cells = 1000;
    std::string sizes = "uniform";
    int ssnvs_per_event = 1;
    int chromosomes = 22;
    std::uint64_t seed = 1;

    lichee::ExperimentConfig config() const {
        lichee::ExperimentConfig c;
        c.sim.p_ssnv = p_ssnv;
        c.sim.p_cnv = p_cnv;
        c.sim.p_death = p_death;
        c.sim.iterations = iterations;
        c.sim.ssnvs_per_event = ssnvs_per_event;
        c.sim.chromosomes = chromosomes;
        c.sim.seed = seed;
        c.sim.size_law = sizes == "uniform" ? lichee::SizeLaw::Uniform : lichee::SizeLaw::LogUniform;
        c.sampling.samples = samples;
        c.sampling.cells_per_sample = cells;
        c.scheme = scheme == "randomized" ? lichee::SamplingScheme::Randomized : lichee::SamplingScheme::Localized;
        if (coverage > 0) c.noise.coverage = coverage;
        c.sim.validate();
        return c;
    }
};

void add_sim_options(CLI::App* app, SimOptions& o) {
    app->add_option("--samples", o.samples, "Tumour samples to draw")->check(CLI::PositiveNumber);
    app->add_option("--scheme", o.scheme, "Sampling scheme")->check(CLI::IsMember({"localized", "randomized"}));
    app->add_option("--coverage", o.coverage, "Read coverage; 0 keeps the true VAFs");
    app->add_option("--p-ssnv", o.p_ssnv, "Per-iteration SSNV event probability");
    app->add_option("--p-cnv", o.p_cnv, "Per-iteration CNV event probability");
    app->add_option("--p-death", o.p_death, "Per-iteration death probability");
    app->add_option("--iterations", o.iterations, "Growth iterations");
    app->add_option("--cells", o.cells, "Cells drawn per sample")->check(CLI::PositiveNumber);
    app->add_option("--sizes", o.sizes, "Population size law")->check(CLI::IsMember({"log-uniform", "uniform"}));
    app->add_option("--ssnvs-per-event", o.ssnvs_per_event, "SSNVs acquired by each SSNV event");
    app->add_option("--chromosomes", o.chromosomes, "Autosomes in the genome model");
    app->add_option("--sim-seed", o.seed, "Simulation seed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-sample cancer lineage reconstruction"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    lichee::RunConfig run;
    std::string input, output, clusters_file;
    bool cp = false, json = false, dot = false, no_private = false, root_edges = false;
    std::size_t normal = 0;
    double eps = 0.1;
    int min_cluster = run.clustering.min_cluster_size;
    app.add_option("-i,--input", input, "SSNV table (tab-separated)");
    app.add_option("-o,--output", output, "Output file prefix");
    app.add_flag("--json", json, "Write <prefix>.json result bundle");
    app.add_flag("--dot", dot, "Write <prefix>.dot graph of the top tree");
    app.add_flag("--cp", cp, "Input values are cell prevalences");
    app.add_option("--clustersFile", clusters_file, "Pre-computed clusters; skips calling and clustering");
    app.add_option("-n,--normal", normal, "Column index of the normal sample");
    app.add_option("-e,--epsilon", eps, "VAF error margin");
    app.add_option("--maxTrees", run.search.max_trees, "Stop the search after this many trees");
    app.add_option("--maxGrowCalls", run.search.max_grow_calls, "Stop the search after this many steps");
    app.add_option("-s,--numSave", run.num_save, "Ranked trees kept in the output");
    app.add_option("--minVAFPresent", run.calling.t_present, "VAF at or above which an SSNV is present");
    app.add_option("--maxVAFAbsent", run.calling.t_absent, "VAF at or below which an SSNV is absent");
    app.add_option("--minRobustPeers", run.calling.min_robust_peers, "Peers needed for a robust group");
    app.add_option("--minClusterSize", min_cluster, "Smallest cluster kept before merging");
    app.add_option("--minPrivateClusterSize", run.clustering.min_private_cluster_size,
                   "Smallest private cluster kept before merging");
    app.add_option("--maxClusterDist", run.clustering.collapse_distance, "Merge clusters closer than this");
    app.add_option("--minNodeSupport", run.network.min_node_support, "Fewest SSNVs per network node");
    app.add_option("--rootVAF", run.network.root_vaf, "VAF of the germline root");
    app.add_flag("--noPrivateConstraint", no_private, "Allow private nodes under any compatible parent");
    app.add_flag("--rootEdges", root_edges, "Offer the germline root as a parent to every node");
    app.add_option("--seed", run.clustering.seed, "Clustering seed");
    app.add_flag("--timestamp", run.timestamp, "Record the run time in the bundle");

    auto* sim_cmd = app.add_subcommand("simulate", "Simulate a lineage tree and write its SSNV table");
    SimOptions sim;
    std::string sim_out;
    add_sim_options(sim_cmd, sim);
    sim_cmd->add_option("-o,--output", sim_out, "Output prefix (<prefix>.txt, <prefix>.truth.tsv)")->required();

    auto* eval_cmd = app.add_subcommand("evaluate", "Score reconstructions against simulated truth");
    SimOptions eval_sim;
    std::string truth_path, bundle_path, table_path, label = "experiment";
    std::size_t replicates = 0;
    add_sim_options(eval_cmd, eval_sim);
    eval_cmd->add_option("--truth", truth_path, "Ground-truth file from 'simulate'");
    eval_cmd->add_option("--bundle", bundle_path, "Result bundle to score");
    eval_cmd->add_option("--replicates", replicates, "Simulate and reconstruct this many datasets");
    eval_cmd->add_option("--table", table_path, "Append the metrics row to this TSV");
    eval_cmd->add_option("--label", label, "Row label");

    auto* serve_cmd = app.add_subcommand("serve", "Serve a result bundle and viewer assets over local HTTP");
    lichee::ServeConfig serve;
    serve_cmd->add_option("bundle", serve.bundle, "Result bundle")->required();
    serve_cmd->add_option("--assets", serve.assets, "Viewer asset directory");
    serve_cmd->add_option("--host", serve.host, "Listen address");
    serve_cmd->add_option("--port", serve.port, "Listen port; 0 picks one");

    const auto args = normalize_args(argc, argv);
    std::vector<char*> cargs;
    for (const auto& a : args) cargs.push_back(const_cast<char*>(a.c_str()));
    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*sim_cmd) {
            const auto data = lichee::simulate_dataset(sim.config());
            std::ofstream table(sim_out + ".txt");
            std::ofstream truth(sim_out + ".truth.tsv");
            if (!table || !truth) throw std::runtime_error(sim_out + ": cannot open output files");
            lichee::write_snv_table(table, {data.truth.samples, data.table});
            lichee::write_truth(truth, data.truth);
            std::cout << data.table.size() << " SSNVs collected from " << data.truth.tree.populations.size()
                      << " populations\n";
            return kExitOk;
        }
        if (*serve_cmd) {
            if (serve.assets.empty()) {
                if (const char* env = std::getenv("LICHEE_VIEWER_DIR")) serve.assets = env;
            }
            lichee::BundleServer server(serve);
            const int port = server.bind();
            std::cout << "serving " << serve.bundle.string() << " at http://" << serve.host << ":" << port << "/\n"
                      << std::flush;
            server.listen();
            return kExitOk;
        }

        run.set_epsilon(eps);
        run.clustering.min_cluster_size = min_cluster;
        run.network.constrain_private = !no_private;
        run.network.root_to_all = root_edges;
        run.calling.normal_index = normal;
        run.mode = !clusters_file.empty() ? lichee::InputMode::Clusters : cp ? lichee::InputMode::Cp
                                                                              : lichee::InputMode::Vaf;
        try {
            run.validate();
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitUsage;
        }

        if (*eval_cmd) {
            lichee::MetricReport report;
            if (replicates > 0) {
                lichee::ExperimentSpec spec;
                spec.data = eval_sim.config();
                spec.run = run;
                spec.replicates = replicates;
                spec.seed = eval_sim.seed;
                report = lichee::average_reports(lichee::run_experiment(spec));
            } else {
                if (truth_path.empty() || bundle_path.empty()) {
                    std::cerr << "error: evaluate needs --truth and --bundle, or --replicates\n";
                    return kExitUsage;
                }
                std::ifstream tin(truth_path);
                if (!tin) throw lichee::InputError(truth_path + ": cannot open");
                const auto truth = lichee::read_truth(tin, truth_path);
                lichee::ResultBundle bundle;
                try {
                    bundle = lichee::parse_bundle(lichee::read_file(bundle_path));
                } catch (const std::invalid_argument& e) {
                    throw lichee::InputError(bundle_path + ": " + e.what());
                }
                report = lichee::compare_tree(truth, bundle);
            }
            if (!table_path.empty()) {
                const bool fresh = !std::filesystem::exists(table_path) || std::filesystem::file_size(table_path) == 0;
                std::ofstream out(table_path, std::ios::app);
                if (!out) throw std::runtime_error(table_path + ": cannot open for writing");
                if (fresh) lichee::write_metrics_header(out);
                lichee::write_metrics_row(out, label, report);
            }
            lichee::write_metrics_header(std::cout);
            lichee::write_metrics_row(std::cout, label, report);
            return kExitOk;
        }

        if (input.empty()) {
            std::cerr << "error: an input table (-i) or a subcommand is required\n" << app.help();
            return kExitUsage;
        }
        if ((json || dot) && output.empty()) {
            std::cerr << "error: -json and -dot need an output prefix (-o)\n";
            return kExitUsage;
        }
        const auto table = lichee::parse_snv_table(input, run.mode == lichee::InputMode::Cp, normal);
        std::optional<std::vector<lichee::Cluster>> clusters;
        if (!clusters_file.empty()) clusters = lichee::parse_cluster_file(clusters_file, table);
        const auto bundle = lichee::run_pipeline(run, table, clusters);

        lichee::OutputPaths paths;
        if (!output.empty()) {
            paths.summary = output + ".txt";
            if (json) paths.json = output + ".json";
            if (dot) paths.dot = output + ".dot";
        }
        lichee::write_outputs(bundle, paths);
        std::cout << lichee::summary_text(bundle);
        return bundle.trees.empty() ? kExitNoTree : kExitOk;
    } catch (const lichee::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
