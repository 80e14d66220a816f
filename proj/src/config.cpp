#include "mfgrid/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace mfgrid {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& field,
                         const std::string& what) const {
    std::ostringstream os;
    os << source_;
    if (node.Mark().line >= 0) os << ':' << node.Mark().line + 1;
    os << ": " << field << ": " << what;
    throw ConfigError(os.str());
  }

  template <class T>
  T scalar(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::BadConversion&) {
      fail(node, field, "cannot convert '" + node.Scalar() + "'");
    }
  }

  double real(const YAML::Node& node, const std::string& field) const {
    const double v = scalar<double>(node, field);
    if (!std::isfinite(v)) fail(node, field, "must be finite");
    return v;
  }

  std::size_t count(const YAML::Node& node, const std::string& field) const {
    if (node.IsScalar() && !node.Scalar().empty() && node.Scalar()[0] == '-') {
      fail(node, field, "must be non-negative");
    }
    return scalar<std::size_t>(node, field);
  }

  template <class T, class F>
  std::vector<T> list(const YAML::Node& node, const std::string& field, F item) const {
    if (!node.IsSequence()) fail(node, field, "expected a list");
    std::vector<T> out;
    out.reserve(node.size());
    for (std::size_t i = 0; i < node.size(); ++i) {
      out.push_back(item(node[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  Interval interval(const YAML::Node& node, const std::string& field) const {
    if (!node.IsSequence() || node.size() != 2) {
      fail(node, field, "expected [lo, hi]");
    }
    Interval iv{real(node[0], field + "[0]"), real(node[1], field + "[1]")};
    if (iv.lo > iv.hi) fail(node, field, "lo must not exceed hi");
    return iv;
  }

  using Handler = std::function<void(const YAML::Node&, const std::string&)>;

  // Dispatches every key of a mapping; unknown keys are errors.
  void section(const YAML::Node& node, const std::string& name,
               const std::map<std::string, Handler>& handlers) const {
    if (!node.IsMap()) fail(node, name, "expected a mapping");
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      const std::string field = name.empty() ? key : name + "." + key;
      const auto it = handlers.find(key);
      if (it == handlers.end()) fail(kv.first, field, "unknown key");
      it->second(kv.second, field);
    }
  }

 private:
  std::string source_;
};

}  // namespace

RunConfig parse_config(std::string_view text, std::string_view source) {
  const Reader rd{std::string(source)};
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << source << ':' << e.mark.line + 1 << ": " << e.msg;
    throw ConfigError(os.str());
  }
  RunConfig cfg;
  if (root.IsNull()) return cfg;

  auto real_into = [&](double& dst) {
    return [&rd, &dst](const YAML::Node& n, const std::string& f) { dst = rd.real(n, f); };
  };
  auto count_into = [&](std::size_t& dst) {
    return [&rd, &dst](const YAML::Node& n, const std::string& f) { dst = rd.count(n, f); };
  };

  ModelParams& p = cfg.params;
  PopulationConfig& pop = cfg.population;
  SimSection& sim = cfg.sim;
  bool explicit_x0 = false;

  rd.section(root, "", {
    {"params", [&](const YAML::Node& n, const std::string& f) {
       rd.section(n, f, {{"alpha", real_into(p.alpha)}, {"beta", real_into(p.beta)},
                         {"eta", real_into(p.eta)}, {"kappa", real_into(p.kappa)},
                         {"gamma", real_into(p.gamma)}, {"zeta", real_into(p.zeta)},
                         {"c", real_into(p.c)}, {"p0", real_into(p.p0)},
                         {"T", real_into(p.T)}});
     }},
    {"population", [&](const YAML::Node& n, const std::string& f) {
       rd.section(n, f, {
         {"distribution", [&](const YAML::Node& v, const std::string& g) {
            const auto s = rd.scalar<std::string>(v, g);
            if (s == "uniform") pop.kind = PopulationKind::uniform;
            else if (s == "explicit") pop.kind = PopulationKind::explicit_arrays;
            else rd.fail(v, g, "expected uniform or explicit, got '" + s + "'");
          }},
         {"n", count_into(pop.n)},
         {"x0_range", [&](const YAML::Node& v, const std::string& g) {
            pop.ranges.x0_range = rd.interval(v, g);
          }},
         {"sigma_range", [&](const YAML::Node& v, const std::string& g) {
            pop.ranges.sigma_range = rd.interval(v, g);
          }},
         {"x0", [&](const YAML::Node& v, const std::string& g) {
            pop.x0 = rd.list<double>(v, g, [&](const YAML::Node& e, const std::string& h) {
              return rd.real(e, h);
            });
            explicit_x0 = true;
          }},
         {"sigma", [&](const YAML::Node& v, const std::string& g) {
            pop.sigma = rd.list<double>(v, g, [&](const YAML::Node& e, const std::string& h) {
              return rd.real(e, h);
            });
          }},
       });
       if (pop.kind == PopulationKind::explicit_arrays) {
         if (pop.x0.size() != pop.sigma.size()) {
           rd.fail(n, f, "x0 and sigma must have the same length");
         }
         if (!n["n"]) pop.n = pop.x0.size();
         if (pop.n != pop.x0.size()) rd.fail(n, f + ".n", "does not match len(x0)");
       } else if (explicit_x0 || !pop.sigma.empty()) {
         rd.fail(n, f, "x0/sigma arrays require distribution: explicit");
       }
     }},
    {"grid", [&](const YAML::Node& n, const std::string& f) {
       rd.section(n, f, {{"n_steps", count_into(cfg.n_steps)}});
     }},
    {"sim", [&](const YAML::Node& n, const std::string& f) {
       rd.section(n, f, {
         {"mode", [&](const YAML::Node& v, const std::string& g) {
            try {
              sim.mode = parse_game_mode(rd.scalar<std::string>(v, g));
            } catch (const ModelError& e) {
              rd.fail(v, g, e.what());
            }
          }},
         {"replications", count_into(sim.replications)},
         {"seed", [&](const YAML::Node& v, const std::string& g) {
            if (v.IsScalar() && !v.Scalar().empty() && v.Scalar()[0] == '-') {
              rd.fail(v, g, "must be non-negative");
            }
            sim.seed = rd.scalar<std::uint64_t>(v, g);
          }},
         {"threads", [&](const YAML::Node& v, const std::string& g) {
            const std::size_t t = rd.count(v, g);
            if (t > std::numeric_limits<unsigned>::max()) rd.fail(v, g, "too large");
            sim.threads = static_cast<unsigned>(t);
          }},
         {"converge_n", [&](const YAML::Node& v, const std::string& g) {
            sim.converge_n = rd.list<std::size_t>(
                v, g, [&](const YAML::Node& e, const std::string& h) { return rd.count(e, h); });
          }},
         {"deviation_agent", count_into(sim.deviation_agent)},
         {"deviation_families", [&](const YAML::Node& v, const std::string& g) {
            sim.deviation_families = rd.list<DeviationFamily>(
                v, g, [&](const YAML::Node& e, const std::string& h) {
                  try {
                    return parse_deviation_family(rd.scalar<std::string>(e, h));
                  } catch (const ModelError& err) {
                    rd.fail(e, h, err.what());
                  }
                });
          }},
         {"deviation_deltas", [&](const YAML::Node& v, const std::string& g) {
            sim.deviation_deltas = rd.list<double>(
                v, g, [&](const YAML::Node& e, const std::string& h) { return rd.real(e, h); });
          }},
         {"record_agents", count_into(sim.record_agents)},
       });
     }},
    {"output", [&](const YAML::Node& n, const std::string& f) {
       rd.section(n, f, {{"dir", [&](const YAML::Node& v, const std::string& g) {
                           cfg.output_dir = rd.scalar<std::string>(v, g);
                         }}});
     }},
  });

  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

void validate_config(const RunConfig& cfg) {
  auto wrap = [](const std::function<void()>& f) {
    try {
      f();
    } catch (const ModelError& e) {
      throw ConfigError(e.what());
    }
  };
  wrap([&] { cfg.params.validate(); });
  if (cfg.n_steps < 2) throw ConfigError("grid.n_steps must be >= 2");
  const PopulationConfig& pop = cfg.population;
  if (pop.n < 1) throw ConfigError("population.n must be >= 1");
  if (pop.ranges.x0_range.lo > pop.ranges.x0_range.hi ||
      pop.ranges.sigma_range.lo > pop.ranges.sigma_range.hi) {
    throw ConfigError("population ranges need lo <= hi");
  }
  if (pop.ranges.sigma_range.lo < 0.0) {
    throw ConfigError("population.sigma_range must be non-negative");
  }
  if (pop.kind == PopulationKind::explicit_arrays) {
    if (pop.x0.size() != pop.n || pop.sigma.size() != pop.n) {
      throw ConfigError("population.x0 and population.sigma need n entries");
    }
    for (double s : pop.sigma) {
      if (s < 0.0) throw ConfigError("population.sigma entries must be >= 0");
    }
  }
  const SimSection& sim = cfg.sim;
  if (sim.replications < 1) throw ConfigError("sim.replications must be >= 1");
  if (sim.converge_n.empty()) throw ConfigError("sim.converge_n must not be empty");
  for (std::size_t i = 0; i < sim.converge_n.size(); ++i) {
    if (sim.converge_n[i] < 1) throw ConfigError("sim.converge_n entries must be >= 1");
    if (i > 0 && sim.converge_n[i] <= sim.converge_n[i - 1]) {
      throw ConfigError("sim.converge_n must be strictly increasing");
    }
  }
  if (sim.deviation_agent >= pop.n) {
    throw ConfigError("sim.deviation_agent must be < population.n");
  }
  if (sim.deviation_agent >= sim.converge_n.front()) {
    throw ConfigError("sim.deviation_agent must be < every sim.converge_n entry");
  }
}

std::string dump_config(const RunConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  const ModelParams& p = cfg.params;
  const PopulationConfig& pop = cfg.population;
  const SimSection& sim = cfg.sim;
  auto range = [&out](const Interval& iv) {
    out << YAML::Flow << YAML::BeginSeq << iv.lo << iv.hi << YAML::EndSeq;
  };
  out << YAML::BeginMap;
  out << YAML::Key << "params" << YAML::Value << YAML::BeginMap
      << YAML::Key << "alpha" << YAML::Value << p.alpha
      << YAML::Key << "beta" << YAML::Value << p.beta
      << YAML::Key << "eta" << YAML::Value << p.eta
      << YAML::Key << "kappa" << YAML::Value << p.kappa
      << YAML::Key << "gamma" << YAML::Value << p.gamma
      << YAML::Key << "zeta" << YAML::Value << p.zeta
      << YAML::Key << "c" << YAML::Value << p.c
      << YAML::Key << "p0" << YAML::Value << p.p0
      << YAML::Key << "T" << YAML::Value << p.T << YAML::EndMap;

  out << YAML::Key << "population" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "distribution" << YAML::Value
      << (pop.kind == PopulationKind::uniform ? "uniform" : "explicit");
  out << YAML::Key << "n" << YAML::Value << pop.n;
  out << YAML::Key << "x0_range" << YAML::Value;
  range(pop.ranges.x0_range);
  out << YAML::Key << "sigma_range" << YAML::Value;
  range(pop.ranges.sigma_range);
  if (pop.kind == PopulationKind::explicit_arrays) {
    out << YAML::Key << "x0" << YAML::Value << YAML::Flow << pop.x0;
    out << YAML::Key << "sigma" << YAML::Value << YAML::Flow << pop.sigma;
  }
  out << YAML::EndMap;

  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap
      << YAML::Key << "n_steps" << YAML::Value << cfg.n_steps << YAML::EndMap;

  out << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << std::string(to_string(sim.mode));
  out << YAML::Key << "replications" << YAML::Value << sim.replications;
  out << YAML::Key << "seed" << YAML::Value << sim.seed;
  out << YAML::Key << "threads" << YAML::Value << sim.threads;
  out << YAML::Key << "converge_n" << YAML::Value << YAML::Flow << sim.converge_n;
  out << YAML::Key << "deviation_agent" << YAML::Value << sim.deviation_agent;
  out << YAML::Key << "deviation_families" << YAML::Value << YAML::Flow
      << YAML::BeginSeq;
  for (DeviationFamily f : sim.deviation_families) out << std::string(to_string(f));
  out << YAML::EndSeq;
  out << YAML::Key << "deviation_deltas" << YAML::Value << YAML::Flow
      << sim.deviation_deltas;
  out << YAML::Key << "record_agents" << YAML::Value << sim.record_agents;
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap
      << YAML::Key << "dir" << YAML::Value << cfg.output_dir << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

Population make_population(const RunConfig& cfg) {
  const PopulationConfig& pc = cfg.population;
  if (pc.kind == PopulationKind::uniform) {
    return draw_population(pc.ranges, pc.n, cfg.sim.seed);
  }
  Population pop;
  pop.x0 = pc.x0;
  pop.sigma = pc.sigma;
  pop.x0_bounds = pc.ranges.x0_range;
  pop.sigma_bounds = pc.ranges.sigma_range;
  pop.validate();
  return pop;
}

std::vector<DeviationSpec> deviation_specs(const RunConfig& cfg) {
  std::vector<DeviationSpec> specs;
  for (DeviationFamily f : cfg.sim.deviation_families) {
    for (double d : cfg.sim.deviation_deltas) {
      specs.push_back({cfg.sim.deviation_agent, f, d});
    }
  }
  return specs;
}

}  // namespace mfgrid
