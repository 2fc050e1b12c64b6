// Python bindings for the main operations: config loading, channel
// generation, single-cell runs, metric evaluation, and grid sweeps.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "secbeam/channel.hpp"
#include "secbeam/config.hpp"
#include "secbeam/harness.hpp"
#include "secbeam/metrics.hpp"
#include "secbeam/optimizer.hpp"
#include "secbeam/rng.hpp"
#include "secbeam/zf.hpp"

namespace py = pybind11;
using namespace secbeam;

namespace {

BeamformerSet beamformers_from_list(const std::vector<Eigen::MatrixXcd>& vs) {
  BeamformerSet V;
  V.V = vs;
  return V;
}

py::dict outcome_to_dict(const RunOutcome& out) {
  py::dict d;
  d["method"] = method_name(out.method);
  d["status"] = to_string(out.reason);
  d["objective_nats"] = out.objective_nats;
  d["see_bits_per_joule"] = out.see_bits();
  d["outer_iters"] = out.outer_iters;
  d["t"] = out.t;
  d["note"] = out.note;
  d["V"] = out.V.V;
  py::list trace;
  for (const auto& r : out.trace) {
    py::dict rec;
    rec["iter"] = r.iter;
    rec["objective"] = r.objective;
    rec["surrogate_objective"] = r.surrogate_objective;
    rec["min_power_slack"] = r.min_power_slack;
    rec["min_qos_slack"] = r.min_qos_slack;
    rec["solver_status"] = r.solver_status;
    rec["solver_iters"] = r.solver_iters;
    trace.append(rec);
  }
  d["trace"] = trace;
  return d;
}

}  // namespace

PYBIND11_MODULE(_secbeam, m) {
  m.doc() = "secrecy energy-efficient beamformer design";
  m.attr("rng_algorithm") = kRngAlgorithm;
  m.attr("__version__") = "0.1.0";

  py::class_<SystemConfig>(m, "SystemConfig")
      .def_readonly("D", &SystemConfig::D)
      .def_readonly("N", &SystemConfig::N)
      .def_readonly("N_r", &SystemConfig::N_r)
      .def_readonly("N_e", &SystemConfig::N_e)
      .def_readonly("d_1", &SystemConfig::d_1)
      .def_readonly("sigma_u", &SystemConfig::sigma_u)
      .def_readonly("sigma_e", &SystemConfig::sigma_e)
      .def_readonly("r_nats", &SystemConfig::r_nats)
      .def_readonly("zeta", &SystemConfig::zeta)
      .def_readonly("P_c", &SystemConfig::P_c)
      .def_readonly("P_max", &SystemConfig::P_max)
      .def_readonly("eps_secrecy_nats", &SystemConfig::eps_secrecy_nats)
      .def_readonly("eps_stop", &SystemConfig::eps_stop)
      .def_readonly("max_outer_iters", &SystemConfig::max_outer_iters)
      .def_readonly("P_max_dB_list", &SystemConfig::P_max_dB_list)
      .def_readonly("seeds", &SystemConfig::seeds)
      .def("with_pmax_db", &SystemConfig::with_pmax_db)
      .def("hash", [](const SystemConfig& c) { return config_hash(c); })
      .def("__repr__", [](const SystemConfig& c) {
        return "<SystemConfig D=" + std::to_string(c.D) +
               " N=" + std::to_string(c.N) + " N_r=" + std::to_string(c.N_r) +
               " N_e=" + std::to_string(c.N_e) +
               " d_1=" + std::to_string(c.d_1) + ">";
      });

  py::class_<ChannelSet>(m, "ChannelSet")
      .def_readonly("seed", &ChannelSet::seed)
      .def_readonly("rng_algorithm", &ChannelSet::rng_algorithm)
      .def("content_hash", &ChannelSet::content_hash)
      .def("user", &ChannelSet::user, py::arg("l"), py::arg("j"))
      .def("eve", &ChannelSet::eve, py::arg("l"));

  m.def("load_config", &load_config_file, py::arg("path"));
  m.def(
      "config_from_json",
      [](const std::string& text) {
        return load_config(nlohmann::json::parse(text));
      },
      py::arg("text"));
  m.def("generate_channels", &generate_channels, py::arg("cfg"),
        py::arg("seed"));

  m.def(
      "run",
      [](const ChannelSet& ch, const SystemConfig& cfg,
         const std::string& method) {
        return outcome_to_dict(run_method(ch, cfg, parse_method(method), {}));
      },
      py::arg("channels"), py::arg("cfg"), py::arg("method") = "see");

  m.def(
      "metrics",
      [](const ChannelSet& ch, const SystemConfig& cfg,
         const std::vector<Eigen::MatrixXcd>& V) {
        const MetricsReport rep =
            evaluate_metrics(ch, beamformers_from_list(V), cfg);
        py::dict d;
        d["f"] = rep.f;
        d["f_e"] = rep.f_e;
        d["f_s"] = rep.f_s;
        d["power"] = rep.power;
        d["sum_secrecy"] = rep.sum_secrecy;
        d["see_nats_per_joule"] = rep.see;
        d["see_bits_per_joule"] = rep.see_bits();
        return d;
      },
      py::arg("channels"), py::arg("cfg"), py::arg("V"));

  m.def(
      "sweep",
      [](const SystemConfig& cfg, const std::vector<std::string>& methods,
         const std::vector<double>& pmax_db,
         const std::vector<std::uint64_t>& seeds, int jobs, bool wall_timing,
         const std::string& out_dir) {
        SweepSpec spec;
        spec.base = cfg;
        for (const auto& name : methods)
          spec.methods.push_back(parse_method(name));
        spec.pmax_db = pmax_db;
        spec.seeds = seeds;
        spec.jobs = jobs;
        spec.timing = wall_timing ? TimingMode::kWall : TimingMode::kNone;
        const SweepResult res = run_sweep(spec);
        if (!out_dir.empty()) emit_results(res, out_dir);
        py::list rows;
        for (const auto& r : res.rows) {
          py::dict d;
          d["method"] = method_name(r.method);
          d["P_max_dB"] = r.pmax_db;
          d["seed"] = r.seed;
          d["objective_bits_per_joule"] = r.objective_bits_per_joule;
          d["iterations"] = r.iterations;
          d["status"] = r.status;
          d["wall_ms"] = r.wall_ms;
          rows.append(d);
        }
        return rows;
      },
      py::arg("cfg"), py::arg("methods"),
      py::arg("pmax_db") = std::vector<double>{},
      py::arg("seeds") = std::vector<std::uint64_t>{}, py::arg("jobs") = 1,
      py::arg("wall_timing") = true, py::arg("out_dir") = "");
}
