#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>

#include "lichee/calling.hpp"
#include "lichee/evaluation.hpp"
#include "lichee/io.hpp"
#include "lichee/pipeline.hpp"
#include "lichee/qp.hpp"

namespace py = pybind11;
using namespace lichee;

namespace {

// Applies recognised keyword overrides on top of a base configuration.
RunConfig make_config(bool simulation, const py::kwargs& kw) {
    RunConfig cfg = simulation ? simulation_run_config() : RunConfig{};
    for (const auto& [key, value] : kw) {
        const auto k = key.cast<std::string>();
        if (k == "epsilon") cfg.set_epsilon(value.cast<double>());
        else if (k == "t_present") cfg.calling.t_present = value.cast<double>();
        else if (k == "t_absent") cfg.calling.t_absent = value.cast<double>();
        else if (k == "min_robust_peers") cfg.calling.min_robust_peers = value.cast<int>();
        else if (k == "min_cluster_size") cfg.clustering.min_cluster_size = value.cast<int>();
        else if (k == "min_private_cluster_size") cfg.clustering.min_private_cluster_size = value.cast<int>();
        else if (k == "collapse_distance") cfg.clustering.collapse_distance = value.cast<double>();
        else if (k == "seed") cfg.clustering.seed = value.cast<std::uint64_t>();
        else if (k == "min_node_support") cfg.network.min_node_support = value.cast<std::size_t>();
        else if (k == "root_vaf") cfg.network.root_vaf = value.cast<double>();
        else if (k == "root_to_all") cfg.network.root_to_all = value.cast<bool>();
        else if (k == "constrain_private") cfg.network.constrain_private = value.cast<bool>();
        else if (k == "max_trees") cfg.search.max_trees = value.cast<std::size_t>();
        else if (k == "max_grow_calls") cfg.search.max_grow_calls = value.cast<std::uint64_t>();
        else if (k == "num_save") cfg.num_save = value.cast<std::size_t>();
        else throw py::value_error("unknown option: " + k);
    }
    cfg.validate();
    return cfg;
}

py::object json_to_py(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

py::dict metrics_to_dict(const MetricReport& r) {
    py::dict d;
    d["pct_snvs_assigned_correctly"] = r.pct_snvs_assigned_correctly;
    d["pct_snvs_in_tree"] = r.pct_snvs_in_tree;
    d["pct_ad_correct"] = r.pct_ad_correct;
    d["pct_ad_to_sib"] = r.pct_ad_to_sib;
    d["pct_sib_correct"] = r.pct_sib_correct;
    d["pct_sib_to_ad"] = r.pct_sib_to_ad;
    d["trees_reconstructed"] = r.trees_reconstructed;
    d["simulated_snvs"] = r.simulated_snvs;
    return d;
}

}  // namespace

PYBIND11_MODULE(_lichee, m) {
    m.doc() = "Multi-sample cancer lineage reconstruction";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

    m.def(
        "reconstruct",
        [](const std::string& table, bool cp, std::size_t normal, bool simulation, const py::kwargs& kw) {
            const RunConfig cfg = make_config(simulation, kw);
            std::istringstream in(table);
            const SnvTable t = read_snv_table(in, cp, normal);
            std::string text;
            {
                py::gil_scoped_release release;
                text = dump_bundle(run_pipeline(cfg, t));
            }
            return json_to_py(text);
        },
        py::arg("table"), py::kw_only(), py::arg("cp") = false, py::arg("normal") = 0,
        py::arg("simulation") = false,
        "Runs the pipeline on SSNV table text and returns the result bundle as a dict.");

    m.def(
        "group_snvs",
        [](const std::vector<std::vector<double>>& vafs, double t_present, double t_absent) {
            CallingConfig cfg;
            cfg.t_present = t_present;
            cfg.t_absent = t_absent;
            std::vector<SnvRecord> snvs;
            for (const auto& row : vafs) snvs.push_back({"", 0, "", row});
            const auto g = group_snvs(snvs, cfg);
            py::list groups;
            for (const auto& grp : g.groups) groups.append(py::make_tuple(grp.profile.to_string(), grp.members, grp.robust));
            py::list dropped;
            for (const auto& d : g.dropped) dropped.append(py::make_tuple(d.index, d.reason));
            return py::make_tuple(groups, dropped);
        },
        py::arg("vafs"), py::arg("t_present") = 0.005, py::arg("t_absent") = 0.005,
        "Calling stage on rows of VAFs (normal first): ([(profile, members, robust)], [(row, reason)]).");

    m.def(
        "solve_min_norm",
        [](const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
            const auto r = solve_min_norm(A, b);
            return py::make_tuple(r.feasible, r.x);
        },
        py::arg("A"), py::arg("b"), "Minimizes |x|^2 / 2 subject to A x >= b; returns (feasible, x).");

    m.def(
        "simulate",
        [](std::uint64_t seed, std::size_t samples, std::optional<std::uint64_t> coverage, double p_cnv,
           const std::string& scheme) {
            ExperimentConfig cfg;
            cfg.sim.seed = seed;
            cfg.sim.p_cnv = p_cnv;
            cfg.sampling.samples = samples;
            cfg.noise.coverage = coverage;
            if (scheme == "randomized") cfg.scheme = SamplingScheme::Randomized;
            else if (scheme != "localized") throw py::value_error("scheme must be 'localized' or 'randomized'");
            const auto data = simulate_dataset(cfg);
            std::ostringstream table, truth;
            write_snv_table(table, {data.truth.samples, data.table});
            write_truth(truth, data.truth);
            return py::make_tuple(table.str(), truth.str());
        },
        py::arg("seed") = 1, py::arg("samples") = 5, py::arg("coverage") = py::none(), py::arg("p_cnv") = 0.0,
        py::arg("scheme") = "localized", "Simulates a dataset; returns (table text, truth text).");

    m.def(
        "evaluate",
        [](const std::string& truth_text, const py::object& bundle) {
            std::istringstream in(truth_text);
            const auto truth = read_truth(in);
            const std::string doc = py::module_::import("json").attr("dumps")(bundle).cast<std::string>();
            return metrics_to_dict(compare_tree(truth, parse_bundle(doc)));
        },
        py::arg("truth"), py::arg("bundle"), "Scores a bundle dict against simulation truth text.");
}
