#include "mfgrid/meanfield.hpp"
#include "mfgrid/model.hpp"
#include "mfgrid/riccati.hpp"
#include "mfgrid/simulate.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace mfgrid;

namespace {

py::array_t<double> arr(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<double> times(const TimeGrid& g) {
  std::vector<double> t(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) t[k] = g.t(k);
  return arr(t);
}

py::dict nash_dict(const NashMeanField& mf) {
  py::dict d;
  d["t"] = times(mf.grid);
  d["b0"] = mf.b0;
  d["xbar0"] = mf.xbar0;
  d["B1_terminal"] = mf.B1_terminal;
  d["a"] = arr(mf.a);
  d["B"] = arr(mf.B);
  d["xbar"] = arr(mf.xbar);
  d["Pbar"] = arr(mf.Pbar);
  d["Qbar"] = arr(mf.Qbar);
  d["population_in_bounds"] = mf.population_in_bounds;
  return d;
}

py::dict social_dict(const SocialMeanField& mf) {
  py::dict d;
  d["t"] = times(mf.grid);
  d["b0"] = mf.b0;
  d["l0"] = mf.l0;
  d["xbar0"] = mf.xbar0;
  d["shoot_det"] = mf.shoot_det;
  d["a"] = arr(mf.a);
  d["pbar"] = arr(mf.pbar);
  d["xbar"] = arr(mf.xbar);
  d["b"] = arr(mf.b);
  d["l"] = arr(mf.l);
  d["qbar"] = arr(mf.qbar);
  d["population_in_bounds"] = mf.population_in_bounds;
  d["coercive"] = mf.coercive;
  return d;
}

py::dict result_dict(const SimulationResult& r) {
  py::dict d;
  d["t"] = times(r.grid);
  d["replications"] = r.replications;
  d["P_mean"] = arr(r.P_mean);
  d["P_std"] = arr(r.P_std);
  d["Q_mean"] = arr(r.Q_mean);
  d["Q_std"] = arr(r.Q_std);
  d["Xbar_mean"] = arr(r.Xbar_mean);
  d["P_ref"] = arr(r.P_ref);
  d["Q_ref"] = arr(r.Q_ref);
  d["J_hat"] = arr(r.J_hat);
  d["J_se"] = arr(r.J_se);
  d["J_soc_hat"] = r.J_soc_hat;
  d["J_soc_se"] = r.J_soc_se;
  d["err_P"] = r.err_P;
  d["err_P_se"] = r.err_P_se;
  d["err_Q"] = r.err_Q;
  d["err_Q_se"] = r.err_Q_se;
  d["moment_bound"] = r.moment_bound;
  d["xbar_gap"] = r.xbar_gap;
  py::list controls;
  for (const auto& c : r.controls) controls.append(arr(c));
  d["controls"] = controls;
  return d;
}

SimConfig make_config(std::size_t replications, std::uint64_t seed, unsigned threads,
                      std::uint32_t stream, std::size_t record_agents) {
  SimConfig c;
  c.replications = replications;
  c.seed = seed;
  c.threads = threads;
  c.stream = stream;
  c.record_agents = record_agents;
  return c;
}

}  // namespace

PYBIND11_MODULE(_mfgrid, m) {
  m.doc() = "Mean-field charging game with sticky prices.";

  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<A1Violated>(m, "A1Violated", PyExc_RuntimeError);
  py::register_exception<A3Violated>(m, "A3Violated", PyExc_RuntimeError);
  py::register_exception<SimulationError>(m, "SimulationError", PyExc_RuntimeError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double alpha, double beta, double eta, double kappa, double gamma,
                       double zeta, double c, double p0, double T) {
             ModelParams p{alpha, beta, eta, kappa, gamma, zeta, c, p0, T};
             p.validate();
             return p;
           }),
           py::arg("alpha") = 1.0, py::arg("beta") = 4.0, py::arg("eta") = 1.0,
           py::arg("kappa") = 4.0, py::arg("gamma") = 2.0, py::arg("zeta") = 9.0,
           py::arg("c") = 4.0, py::arg("p0") = 3.0, py::arg("T") = 2.0)
      .def_readwrite("alpha", &ModelParams::alpha)
      .def_readwrite("beta", &ModelParams::beta)
      .def_readwrite("eta", &ModelParams::eta)
      .def_readwrite("kappa", &ModelParams::kappa)
      .def_readwrite("gamma", &ModelParams::gamma)
      .def_readwrite("zeta", &ModelParams::zeta)
      .def_readwrite("c", &ModelParams::c)
      .def_readwrite("p0", &ModelParams::p0)
      .def_readwrite("T", &ModelParams::T)
      .def("validate", &ModelParams::validate);

  py::class_<TimeGrid>(m, "TimeGrid")
      .def(py::init<double, std::size_t>(), py::arg("horizon"), py::arg("n_steps"))
      .def_property_readonly("horizon", &TimeGrid::horizon)
      .def_property_readonly("n_steps", &TimeGrid::n_steps)
      .def_property_readonly("step", &TimeGrid::step)
      .def("t", &TimeGrid::t)
      .def("times", &times);

  py::class_<Population>(m, "Population")
      .def(py::init([](std::vector<double> x0, std::vector<double> sigma,
                       std::pair<double, double> x0_bounds,
                       std::pair<double, double> sigma_bounds) {
             Population p{std::move(x0), std::move(sigma),
                          {x0_bounds.first, x0_bounds.second},
                          {sigma_bounds.first, sigma_bounds.second}};
             p.validate();
             return p;
           }),
           py::arg("x0"), py::arg("sigma"), py::arg("x0_bounds") = std::pair{2.0, 2.5},
           py::arg("sigma_bounds") = std::pair{1.0, 1.5})
      .def_property_readonly("x0", [](const Population& p) { return arr(p.x0); })
      .def_property_readonly("sigma", [](const Population& p) { return arr(p.sigma); })
      .def("__len__", &Population::size)
      .def("mean_x0", &Population::mean_x0)
      .def("within_bounds", &population_within_bounds);

  m.def("draw_population",
        [](std::size_t n, std::uint64_t seed, std::pair<double, double> x0_range,
           std::pair<double, double> sigma_range) {
          PopulationTemplate tpl{{x0_range.first, x0_range.second},
                                 {sigma_range.first, sigma_range.second}};
          return draw_population(tpl, n, seed);
        },
        py::arg("n"), py::arg("seed"), py::arg("x0_range") = std::pair{2.0, 2.5},
        py::arg("sigma_range") = std::pair{1.0, 1.5});

  m.def("social_coercivity_holds", &social_coercivity_holds);

  m.def("riccati",
        [](const ModelParams& p, const TimeGrid& g) {
          const RiccatiSolution a = solve_riccati(p);
          return py::make_tuple(std::string(to_string(a.branch())), arr(a.sample(g)));
        },
        "Branch name and a(t) sampled on the grid.");
  m.def("verify_riccati", [](const ModelParams& p, const TimeGrid& g) {
    return verify_riccati(solve_riccati(p), g);
  });

  m.def("nash_diagnostics", [](const ModelParams& p, const TimeGrid& g) {
    const NashDiagnostics d = nash_diagnostics(p, g);
    return py::make_tuple(d.b1_terminal, d.holds);
  });
  m.def("social_diagnostics", [](const ModelParams& p, const TimeGrid& g) {
    const SocialDiagnostics d = social_diagnostics(p, g);
    py::dict out;
    out["b1"] = d.shoot_matrix(0, 0);
    out["l1"] = d.shoot_matrix(1, 0);
    out["b2"] = d.shoot_matrix(0, 1);
    out["l2"] = d.shoot_matrix(1, 1);
    out["det"] = d.det;
    out["holds"] = d.holds;
    return out;
  });

  m.def("solve_nash", [](const ModelParams& p, const Population& pop, const TimeGrid& g) {
    return nash_dict(solve_nash(p, pop, g));
  });
  m.def("solve_social", [](const ModelParams& p, const Population& pop, const TimeGrid& g) {
    return social_dict(solve_social(p, pop, g));
  });

  m.def("lmi_nash",
        [](double eps1, double eps2, long n, double alpha) {
          const LmiCheck c = lmi_nash(eps1, eps2, n, alpha);
          return py::make_tuple(c.feasible, c.test_eigenvalues(0), c.test_eigenvalues(1),
                                c.test_eigenvalues(2));
        },
        py::arg("eps1"), py::arg("eps2"), py::arg("n"), py::arg("alpha") = 1.0);
  m.def("lmi_nash_threshold", &lmi_nash_threshold);
  m.def("lmi_social", [](double alpha) {
    const LmiCheck c = lmi_social(alpha);
    return py::make_tuple(c.feasible, c.test_eigenvalues(0), c.test_eigenvalues(1),
                          c.test_eigenvalues(2));
  }, py::arg("alpha") = 1.0);

  m.def("simulate",
        [](const ModelParams& p, const Population& pop, const TimeGrid& g,
           const std::string& mode, std::size_t replications, std::uint64_t seed,
           unsigned threads, std::uint32_t stream, std::size_t record_agents) {
          const Equilibrium eq = solve_equilibrium(parse_game_mode(mode), p, pop, g);
          py::gil_scoped_release release;
          SimulationResult r =
              simulate(p, pop, eq, make_config(replications, seed, threads, stream,
                                               record_agents));
          py::gil_scoped_acquire acquire;
          return result_dict(r);
        },
        py::arg("params"), py::arg("population"), py::arg("grid"), py::arg("mode") = "nash",
        py::arg("replications") = 64, py::arg("seed") = 0, py::arg("threads") = 0,
        py::arg("stream") = 0, py::arg("record_agents") = 0);

  m.def("deviate",
        [](const ModelParams& p, const Population& pop, const TimeGrid& g,
           const std::string& mode, const std::vector<std::pair<std::string, double>>& specs,
           std::size_t agent, std::size_t replications, std::uint64_t seed, unsigned threads) {
          const Equilibrium eq = solve_equilibrium(parse_game_mode(mode), p, pop, g);
          std::vector<DeviationSpec> s;
          for (const auto& [fam, delta] : specs) {
            s.push_back({agent, parse_deviation_family(fam), delta});
          }
          const auto out = deviate(p, pop, eq, make_config(replications, seed, threads, 0, 0), s);
          py::list rows;
          for (const auto& o : out) {
            py::dict d;
            d["family"] = std::string(to_string(o.spec.family));
            d["delta"] = o.spec.delta;
            d["J_dev"] = o.J_dev;
            d["J_eq"] = o.J_eq;
            d["diff"] = o.diff;
            d["stderr"] = o.std_error;
            rows.append(d);
          }
          return rows;
        },
        py::arg("params"), py::arg("population"), py::arg("grid"), py::arg("mode"),
        py::arg("specs"), py::arg("agent") = 0, py::arg("replications") = 64,
        py::arg("seed") = 0, py::arg("threads") = 0);

  m.def("converge",
        [](const ModelParams& p, std::size_t n_steps, std::vector<std::size_t> n_list,
           std::size_t replications, std::uint64_t seed, const std::string& mode,
           unsigned threads) {
          ConvergenceOptions o;
          o.n_list = std::move(n_list);
          o.replications = replications;
          o.seed = seed;
          o.mode = parse_game_mode(mode);
          o.threads = threads;
          const auto rows = converge(p, PopulationTemplate{}, n_steps, o);
          py::list out;
          for (const auto& r : rows) {
            py::dict d;
            d["N"] = r.n;
            d["err_P"] = r.err_P;
            d["err_Q"] = r.err_Q;
            d["slope_so_far"] = r.slope_so_far;
            out.append(d);
          }
          return out;
        },
        py::arg("params"), py::arg("n_steps"), py::arg("n_list"), py::arg("replications") = 64,
        py::arg("seed") = 0, py::arg("mode") = "nash", py::arg("threads") = 0);
}
