#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "opmax/centrality.hpp"
#include "opmax/config.hpp"
#include "opmax/dynamics.hpp"
#include "opmax/engine.hpp"
#include "opmax/error.hpp"
#include "opmax/graph.hpp"
#include "opmax/io.hpp"
#include "opmax/toy.hpp"

namespace py = pybind11;
using namespace opmax;

namespace {

SimConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    return config_from_json(j);
}

std::vector<std::vector<double>> matrix_rows(const BeliefMatrix& m) {
    std::vector<std::vector<double>> out(m.nodes());
    for (NodeId v = 0; v < m.nodes(); ++v) out[v].assign(m.row(v).begin(), m.row(v).end());
    return out;
}

py::dict trace_dict(const Trace& t) {
    py::dict d;
    d["totals"] = t.totals;
    d["final_alpha"] = matrix_rows(t.final_alpha);
    d["mean_alpha"] = t.mean_alpha;
    py::dict snaps;
    for (const auto& [time, m] : t.snapshots) snaps[py::int_(time)] = matrix_rows(m);
    d["snapshots"] = snaps;
    d["smart_source"] = t.roles.smart_source;
    d["random_sources"] = t.roles.random_sources;
    d["seed"] = t.seed;
    d["replication"] = t.replication;
    d["config_hash"] = t.config_hash;
    d["csv"] = trace_csv(t);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Opinion maximization simulator core";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<DisconnectedGraph>(m, "DisconnectedGraph", PyExc_RuntimeError);
    py::register_exception<UndefinedCorrelation>(m, "UndefinedCorrelation", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ParseError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<Graph>(m, "Graph")
        .def_static("from_edges",
                    [](std::size_t n, const std::vector<Edge>& edges) { return Graph::from_edges(n, edges); },
                    py::arg("node_count"), py::arg("edges"))
        .def_property_readonly("node_count", &Graph::node_count)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def("degree", &Graph::degree)
        .def("neighbors", [](const Graph& g, NodeId v) {
            if (v >= g.node_count()) throw InvalidArgument("node out of range");
            auto nb = g.neighbors(v);
            return std::vector<NodeId>(nb.begin(), nb.end());
        })
        .def("edges", &Graph::edges)
        .def("is_connected", &Graph::is_connected);

    m.def("generate_pa", &generate_pa, py::arg("n"), py::arg("m"), py::arg("seed"));
    m.def("load_edge_list", [](const std::string& path) { return load_edge_list_file(path).graph; },
          py::arg("path"));
    m.def("centrality",
          [](const Graph& g, const std::string& kind) { return centrality(g, centrality_from_string(kind)); },
          py::arg("graph"), py::arg("kind") = "current_flow_closeness");
    m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); });

    m.def("opinion", [](const std::vector<double>& a) { return opinion(a); }, py::arg("alpha"));
    m.def("belief_update",
          [](const std::vector<double>& a, double beta, double zeta, const std::vector<int>& n) {
              if (a.size() != n.size()) throw InvalidArgument("alpha and counts differ in length");
              return belief_update(a, beta, zeta, n);
          },
          py::arg("alpha"), py::arg("beta"), py::arg("zeta"), py::arg("counts"));
    m.def("myopic_reward",
          [](const std::vector<double>& a, double beta, double zeta, int cls) {
              if (cls < 0 || static_cast<std::size_t>(cls) >= a.size()) throw InvalidArgument("class out of range");
              return myopic_reward(a, beta, zeta, MessageClass{cls});
          },
          py::arg("alpha"), py::arg("beta"), py::arg("zeta"), py::arg("cls"));

    auto toy_m = m.def_submodule("toy", "Two-sender, two-receiver game");
    py::class_<toy::Receiver>(toy_m, "Receiver")
        .def(py::init([](double a1, double a2, double beta, double zeta) { return toy::Receiver{a1, a2, beta, zeta}; }),
             py::arg("alpha1") = 1.0, py::arg("alpha2") = 1.0, py::arg("beta") = 1.0, py::arg("zeta") = 1.0)
        .def_readwrite("alpha1", &toy::Receiver::alpha1)
        .def_readwrite("alpha2", &toy::Receiver::alpha2)
        .def_readwrite("beta", &toy::Receiver::beta)
        .def_readwrite("zeta", &toy::Receiver::zeta);
    py::class_<toy::Instance>(toy_m, "Instance")
        .def(py::init([](const toy::Receiver& c, const toy::Receiver& d) {
                 toy::Instance inst{c, d};
                 inst.validate();
                 return inst;
             }),
             py::arg("c") = toy::Receiver{}, py::arg("d") = toy::Receiver{})
        .def_readonly("c", &toy::Instance::c)
        .def_readonly("d", &toy::Instance::d);
    py::class_<toy::JointRewards>(toy_m, "JointRewards")
        .def(py::init([](double cc, double cd, double dd) { return toy::JointRewards{cc, cd, dd}; }), py::arg("cc"),
             py::arg("cd"), py::arg("dd"))
        .def_readonly("cc", &toy::JointRewards::cc)
        .def_readonly("cd", &toy::JointRewards::cd)
        .def_readonly("dd", &toy::JointRewards::dd);
    toy_m.def("individual_reward", &toy::individual_reward);
    toy_m.def("joint_rewards", &toy::joint_rewards);
    toy_m.def("proposition1_condition",
              [](const toy::Instance& inst, bool statement_bound) {
                  return toy::proposition1_condition(
                      inst, statement_bound ? toy::LowerBound::Statement : toy::LowerBound::Proof);
              },
              py::arg("instance"), py::arg("statement_bound") = false);
    toy_m.def("optimal_p", [](const toy::JointRewards& r) { return toy::optimal_p(r); });
    toy_m.def("expected_reward", &toy::expected_reward, py::arg("p"), py::arg("rewards"));
    toy_m.def("optimal_expected_reward", &toy::optimal_expected_reward);
    toy_m.def("brute_force_expected_reward", &toy::brute_force_expected_reward, py::arg("p"), py::arg("rewards"));
    toy_m.def("expected_sampled_reward", &toy::expected_sampled_reward, py::arg("p"), py::arg("rewards"),
              py::arg("n_samples"));
    toy_m.def("sampled_reward_monte_carlo", &toy::sampled_reward_monte_carlo, py::arg("p"), py::arg("rewards"),
              py::arg("max_samples"), py::arg("trials"), py::arg("seed"),
              py::call_guard<py::gil_scoped_release>());

    // Configs cross the boundary as JSON text; the Python wrapper converts dicts.
    m.def("preset", [](const std::string& name) { return config_to_json(preset(name)).dump(); });
    m.def("normalize_config", [](const std::string& text) { return config_to_json(parse_config(text)).dump(); });
    m.def("config_hash", [](const std::string& text) { return config_hash(parse_config(text)); });

    py::class_<Simulation>(m, "Simulation")
        .def(py::init([](const std::string& text) { return Simulation(parse_config(text)); }), py::arg("config"),
             py::call_guard<py::gil_scoped_release>())
        .def_property_readonly("config_hash", &Simulation::config_hash)
        .def_property_readonly("smart_source", [](const Simulation& s) { return s.roles().smart_source; })
        .def_property_readonly("random_sources", [](const Simulation& s) { return s.roles().random_sources; })
        .def_property_readonly("node_count", [](const Simulation& s) { return s.graph().node_count(); })
        .def("run",
             [](const Simulation& s, std::size_t rep) {
                 Trace t;
                 {
                     py::gil_scoped_release release;
                     t = s.run(rep);
                 }
                 return trace_dict(t);
             },
             py::arg("replication") = 0)
        .def("run_all",
             [](const Simulation& s, std::size_t threads, const std::string& out_dir) {
                 std::vector<Trace> traces;
                 Summary summary;
                 {
                     py::gil_scoped_release release;
                     traces = s.run_all(threads);
                     summary = aggregate(traces);
                     if (!out_dir.empty()) write_run_outputs(out_dir, s.config(), traces, 0.0);
                 }
                 py::dict d;
                 d["config_hash"] = summary.config_hash;
                 d["mean"] = summary.mean;
                 d["stddev"] = summary.stddev;
                 d["final_mean"] = summary.final_mean;
                 d["final_std"] = summary.final_std;
                 py::list list;
                 for (const auto& t : traces) list.append(trace_dict(t));
                 d["traces"] = list;
                 return d;
             },
             py::arg("threads") = 1, py::arg("out_dir") = "");
}
