#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "excitran/commands.hpp"
#include "excitran/config.hpp"
#include "excitran/error.hpp"
#include "excitran/observables.hpp"
#include "excitran/transport.hpp"

namespace py = pybind11;
using namespace excitran;

namespace {

DensityMatrix to_density(const ComplexMatrix& m) { return DensityMatrix(m); }

TrapSpec make_trap(const std::string& mode, std::vector<std::string> sites, std::vector<int> excitons, double rate) {
  switch (parse_trap_mode(mode)) {
    case TrapMode::none:
      return TrapSpec::none();
    case TrapMode::site_based:
      return TrapSpec::at_sites(std::move(sites), rate);
    case TrapMode::exciton_based:
      return TrapSpec::at_excitons(std::move(excitons), rate);
  }
  return TrapSpec::none();
}

py::dict transport_dict(const TransportResult& r) {
  py::dict d;
  d["eta"] = r.eta;
  d["tau_ps"] = r.tau;
  d["method"] = std::string(to_string(r.method));
  d["recombined"] = r.recombined;
  d["residual_trace"] = r.residual_trace;
  d["tail_eta"] = r.tail_eta;
  d["tail_bound"] = r.tail_bound;
  d["horizon_ps"] = r.horizon;
  d["solve_residual"] = r.solve_residual;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exciton transport under Haken-Strobl dephasing";
  m.attr("__version__") = EXCITRAN_VERSION;

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<SiteGraph>(m, "SiteGraph")
      .def_property_readonly("n_sites", &SiteGraph::n_sites)
      .def_property_readonly("n_monomers", &SiteGraph::n_monomers)
      .def_property_readonly("energies_cm1", &SiteGraph::energies)
      .def_property_readonly("couplings_cm1", &SiteGraph::couplings)
      .def_property_readonly("hamiltonian_cm1", &SiteGraph::hamiltonian)
      .def_property_readonly("labels",
                             [](const SiteGraph& g) {
                               std::vector<std::string> out;
                               for (const auto& meta : g.meta()) out.push_back(meta.label);
                               return out;
                             })
      .def("index_of", &SiteGraph::index_of)
      .def("to_json", [](const SiteGraph& g) { return site_graph_to_json(g); })
      .def("__repr__", [](const SiteGraph& g) { return "<SiteGraph n_sites=" + std::to_string(g.n_sites()) + ">"; });

  m.def("load_site_graph", [](const std::filesystem::path& p) { return load_site_graph(p); }, py::arg("path"));
  m.def("parse_site_graph", [](const std::string& text) { return parse_site_graph(text); }, py::arg("json_text"));
  m.def(
      "assemble_oligomer",
      [](const SiteGraph& g, int n, const std::string& topology,
         const std::vector<std::tuple<std::string, std::string, double>>& links) {
        OligomerSpec spec{n, parse_topology(topology), {}};
        for (const auto& [donor, acceptor, strength] : links) spec.links.push_back({donor, acceptor, strength});
        return assemble_oligomer(g, spec);
      },
      py::arg("monomer"), py::arg("n_monomers"), py::arg("topology") = "ring",
      py::arg("links") = std::vector<std::tuple<std::string, std::string, double>>{});
  m.def(
      "spectrum",
      [](const SiteGraph& g) {
        const Spectrum s = spectrum(g);
        return py::make_tuple(s.energies, s.vectors);
      },
      py::arg("graph"), "Ascending energies (cm^-1) and eigenvectors as columns.");

  py::class_<TrapSpec>(m, "TrapSpec")
      .def(py::init(&make_trap), py::arg("mode") = "none", py::arg("sites") = std::vector<std::string>{},
           py::arg("excitons") = std::vector<int>{}, py::arg("rate_ps") = 0.0)
      .def_property_readonly("mode", [](const TrapSpec& t) { return std::string(to_string(t.mode)); })
      .def_readonly("sites", &TrapSpec::sites)
      .def_readonly("excitons", &TrapSpec::excitons)
      .def_readonly("rate_ps", &TrapSpec::rate);

  py::class_<LindbladModel>(m, "LindbladModel")
      .def(py::init<SiteGraph, double, double, TrapSpec>(), py::arg("graph"), py::arg("gamma_phi_ps"),
           py::arg("gamma_recomb_ps"), py::arg("trap") = TrapSpec::none())
      .def_property_readonly("dim", &LindbladModel::dim)
      .def_property_readonly("gamma_phi_ps", &LindbladModel::gamma_phi)
      .def_property_readonly("gamma_recomb_ps", &LindbladModel::gamma_recomb)
      .def_property_readonly("graph", &LindbladModel::graph)
      .def_property_readonly("hamiltonian_rad_ps", &LindbladModel::hamiltonian)
      .def_property_readonly("trap_operator", &LindbladModel::trap_operator)
      .def("generator", [](const LindbladModel& model, const ComplexMatrix& rho) { return apply_generator(model, rho); })
      .def("superoperator", [](const LindbladModel& model) { return build_superoperator(model).matrix(); });

  m.def("localized", [](int n, int site) { return DensityMatrix::localized(n, site).matrix(); }, py::arg("n"),
        py::arg("site"));

  m.def(
      "propagate",
      [](const LindbladModel& model, const ComplexMatrix& rho0, const std::vector<double>& times, double atol) {
        PropagateOptions opts;
        opts.integrator.atol = atol;
        std::vector<ComplexMatrix> out;
        {
          py::gil_scoped_release release;
          for (auto& rho : propagate(model, to_density(rho0), times, opts)) out.push_back(rho.matrix());
        }
        return out;
      },
      py::arg("model"), py::arg("rho0"), py::arg("times_ps"), py::arg("atol") = 1e-9);

  m.def(
      "efficiency",
      [](const LindbladModel& model, const ComplexMatrix& rho0, const std::string& method) {
        TransportResult r;
        {
          py::gil_scoped_release release;
          if (method == "auto")
            r = efficiency(model, to_density(rho0));
          else if (method == "resolvent")
            r = efficiency_resolvent(model, to_density(rho0));
          else if (method == "quadrature")
            r = efficiency_quadrature(model, to_density(rho0));
          else
            throw ValidationError("method must be auto, resolvent or quadrature", "/method");
        }
        return transport_dict(r);
      },
      py::arg("model"), py::arg("rho0"), py::arg("method") = "auto");

  m.def(
      "dephasing_from_temperature",
      [](double t, double er, double wc) { return dephasing_from_temperature(t, BathSpec{er, wc}); },
      py::arg("temperature_k"), py::arg("reorganization_energy_cm1") = 35.0, py::arg("cutoff_cm1") = 150.0);

  m.def("populations", [](const ComplexMatrix& rho) { return populations(to_density(rho)); });
  m.def("delocalization", [](const ComplexMatrix& rho) { return delocalization(to_density(rho)); });
  m.def("concurrence", [](const ComplexMatrix& rho, int i, int j) { return concurrence(to_density(rho), i, j); });
  m.def("negativity", [](const ComplexMatrix& rho, const std::vector<int>& a, const std::vector<int>& b) {
    return negativity(to_density(rho), {"A", a}, {"B", b});
  });
  m.def("mutual_information", [](const ComplexMatrix& rho, const std::vector<int>& a, const std::vector<int>& b) {
    return mutual_information(to_density(rho), {"A", a}, {"B", b});
  });

  m.def(
      "fit_timescales",
      [](const std::vector<double>& t, const std::vector<double>& d) {
        const TimescaleFit f = fit_timescales(t, d);
        py::dict out;
        out["y0"] = f.y0;
        out["a1"] = f.a1;
        out["t1_ps"] = f.t1;
        out["a2"] = f.a2;
        out["t2_ps"] = f.t2;
        out["residual_rms"] = f.residual_rms;
        out["iterations"] = f.iterations;
        out["identifiable"] = f.identifiable;
        out["well_sampled"] = f.well_sampled;
        return out;
      },
      py::arg("times_ps"), py::arg("values"));

  m.def(
      "run_command",
      [](const std::string& name, const std::filesystem::path& config, std::optional<std::filesystem::path> out,
         int threads, std::optional<std::uint64_t> seed) {
        CommandResult r;
        {
          py::gil_scoped_release release;
          r = run_command(name, load_config(config), CommandOptions{threads, seed, std::move(out)});
        }
        return py::module_::import("json").attr("loads")(r.summary);
      },
      py::arg("command"), py::arg("config"), py::arg("out") = py::none(), py::arg("threads") = 0,
      py::arg("seed") = py::none(), "Run a CLI subcommand in-process and return its summary.");
  m.attr("commands") = command_names();
}
