// Python bindings. Data crosses the boundary as CSV text and reports as JSON text; the
// package's __init__ decodes the JSON.

#include "causalmix/citest.hpp"
#include "causalmix/error.hpp"
#include "causalmix/experiment.hpp"
#include "causalmix/io.hpp"
#include "causalmix/merge.hpp"
#include "causalmix/metrics.hpp"
#include "causalmix/pc.hpp"
#include "causalmix/pool.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace causalmix;

namespace {

std::vector<SampleTable> tables_of(const std::vector<std::string>& csvs, const DiscreteBayesNet* net,
                                   std::vector<std::string>& vertices) {
    if (csvs.empty()) throw ModelError("no data sets given");
    std::vector<std::vector<std::string>> states;
    if (net) {
        vertices = net->names();
        states = net->all_states();
    } else {
        InferredSchema schema = infer_schema(csvs);
        vertices = std::move(schema.variables);
        states = std::move(schema.states);
    }
    std::vector<SampleTable> out;
    for (const auto& text : csvs) out.push_back(read_samples(text, vertices, states));
    return out;
}

CiTestOptions test_options(double alpha, const std::string& statistic) {
    if (statistic != "pearson" && statistic != "g2") throw ModelError("statistic must be pearson or g2");
    return {alpha, statistic == "g2" ? CiStatistic::g_squared : CiStatistic::pearson};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Structure learning from mixtures of interventional data";
    py::register_exception<Error>(m, "Error", PyExc_ValueError);

    py::class_<DiscreteBayesNet>(m, "Network")
        .def_static("load", [](const std::string& path) { return load_bif(path); }, py::arg("path"))
        .def_static("parse", [](const std::string& text) { return parse_bif(text); }, py::arg("text"))
        .def_property_readonly("names", &DiscreteBayesNet::names)
        .def_property_readonly("states", &DiscreteBayesNet::all_states)
        .def_property_readonly("edges",
                               [](const DiscreteBayesNet& net) {
                                   std::vector<std::pair<std::string, std::string>> out;
                                   for (const auto& a : net.dag().edges())
                                       out.emplace_back(net.names()[a.from], net.names()[a.to]);
                                   return out;
                               })
        .def(
            "sample_csv",
            [](const DiscreteBayesNet& net, std::size_t n, std::uint64_t seed, int label) {
                Rng rng = child_rng(seed, 0);
                return write_samples(sample(net, n, rng, label), net);
            },
            py::arg("n"), py::arg("seed"), py::arg("label") = -1,
            "Forward-sample n records as CSV; a label >= 0 adds an intervention column.")
        .def("__len__", &DiscreteBayesNet::size);

    m.def(
        "learn_pc",
        [](const std::string& csv, const DiscreteBayesNet* net, double alpha, const std::string& statistic,
           std::size_t max_cond) {
            Report r;
            const auto tables = tables_of({csv}, net, r.vertices);
            r.pattern = pc_learn(tables.front(), test_options(alpha, statistic), PcOptions{max_cond}).pattern;
            return write_report(r);
        },
        py::arg("csv"), py::arg("network") = nullptr, py::arg("alpha") = 0.01, py::arg("statistic") = "pearson",
        py::arg("max_cond") = 5);

    m.def(
        "learn_merge",
        [](const std::vector<std::string>& csvs, const DiscreteBayesNet* net, double alpha,
           const std::string& statistic, std::size_t max_cond) {
            Report r;
            const auto tables = tables_of(csvs, net, r.vertices);
            r.pattern = merge_learn(tables, test_options(alpha, statistic), PcOptions{max_cond}).merged;
            return write_report(r);
        },
        py::arg("csvs"), py::arg("network") = nullptr, py::arg("alpha") = 0.01, py::arg("statistic") = "pearson",
        py::arg("max_cond") = 5);

    m.def(
        "learn_pool",
        [](const std::vector<std::string>& csvs, const DiscreteBayesNet* net, double alpha,
           const std::string& statistic, std::size_t max_cond, std::size_t resample_k, std::size_t subset,
           double theta, std::uint64_t seed) {
            Report r;
            const auto tables = tables_of(csvs, net, r.vertices);
            const CiTestOptions test = test_options(alpha, statistic);
            const PcOptions pc{max_cond};
            const OrientedPattern meta = pool_learn_meta(tables, test, pc);
            ResampleOptions ro;
            ro.k_runs = resample_k;
            ro.subset_size = subset;
            ro.seed = seed;
            r.frequencies = resample_frequencies(tables, meta.pattern.skeleton(), ro, test, pc);
            r.pattern = augment(meta.pattern, *r.frequencies, theta);
            r.seed = seed;
            return write_report(r);
        },
        py::arg("csvs"), py::arg("network") = nullptr, py::arg("alpha") = 0.01, py::arg("statistic") = "pearson",
        py::arg("max_cond") = 5, py::arg("resample_k") = 100, py::arg("subset") = 0, py::arg("theta") = 20.0,
        py::arg("seed") = 0);

    m.def(
        "score",
        [](const std::string& report_json, const DiscreteBayesNet& truth) {
            Report r = read_report(report_json);
            if (!r.pattern) throw ParseError("report holds no pattern");
            if (r.vertices != truth.names()) throw ParseError("report vertices do not match the network");
            r.metrics = score(*r.pattern, truth.dag());
            r.frequencies.reset();
            return write_report(r);
        },
        py::arg("report"), py::arg("truth"));

    m.def("chi_square_sf", &chi_square_sf, py::arg("statistic"), py::arg("dof"));

    m.def(
        "run_study",
        [](const std::string& config_path, const std::string& out_dir, std::size_t jobs) {
            StudyConfig config = load_study_config(config_path);
            if (jobs > 0) config.jobs = jobs;
            std::vector<std::string> files;
            {
                py::gil_scoped_release release;
                for (const auto& p : write_study_outputs(run_study(config), out_dir)) files.push_back(p.string());
            }
            return files;
        },
        py::arg("config"), py::arg("out_dir"), py::arg("jobs") = 0);
}
