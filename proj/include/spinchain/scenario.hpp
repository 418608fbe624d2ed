#pragma once

// Scenario configuration and the simulate / spectrum / analytic / blocks
// pipelines behind the command-line front end.
//
// A scenario file is YAML:
//
//   name: fig6c
//   model: xy              # xy | aliphatic
//   n: 4
//   couplings: {J: 5}      # aliphatic: J_gem with J_gauche/J_anti or delta_J/sigma_J
//   initial: {flips: [1]}  # aliphatic: T0 site of each term, plus signs
//   observe: [1]           # site indices, product labels, or "all"
//   dt: 0.005
//   horizon: 20
//   tau: 5
//   zero_pad: 4
//   engine: restricted     # aliphatic only: full | restricted
//   order: 2               # aliphatic prediction order: 0 | 2
//   peak_threshold: 0.05
//   match_tol: 0.0125      # default: one padded grid bin

#include "spinchain/analytic.hpp"
#include "spinchain/dynamics.hpp"
#include "spinchain/hamiltonian.hpp"
#include "spinchain/io.hpp"
#include "spinchain/spectro.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace spinchain {

/// Invalid scenario input. The message names the offending field and, when
/// the value came from a file, its location.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Model { XY, Aliphatic };
enum class Engine { Full, Restricted };

inline constexpr int kMaxFullDim = 4096;
inline constexpr int kMaxRestrictedDim = 16384;

/// One observable: a site index or an explicit product label.
using ObserveSpec = std::variant<int, std::string>;

struct ScenarioConfig {
  std::string name = "scenario";
  Model model = Model::XY;
  int n = 4;
  double J = 5.0;
  double j_gem = -14.0;
  double j_gauche = 7.5;
  double j_anti = 2.5;
  std::vector<int> flips{1};
  std::vector<int> signs;
  bool observe_all = false;
  std::vector<ObserveSpec> observe{1};
  double dt = 0.005;
  double horizon = 20.0;
  double tau = 5.0;
  int zero_pad = 4;
  Engine engine = Engine::Restricted;
  int order = 2;
  double peak_threshold = 0.05;
  std::optional<double> match_tol;

  /// Where each field was set ("file.yaml:7" or "--flag"); used in errors.
  std::map<std::string, std::string> origin;

  AliphaticParams aliphatic() const { return AliphaticParams(n, j_gem, j_gauche, j_anti); }
  std::size_t steps() const { return steps_for(horizon, dt); }
};

namespace detail {

[[noreturn]] inline void config_fail(const ScenarioConfig& c, const std::string& field, const std::string& what) {
  const auto it = c.origin.find(field);
  const std::string where = it == c.origin.end() ? std::string("config") : it->second;
  throw ConfigError(fmt::format("{}: field '{}': {}", where, field, what));
}

inline std::string mark(const std::string& file, const YAML::Node& node) {
  return fmt::format("{}:{}", file, node.Mark().line + 1);
}

template <class T>
T scalar(const YAML::Node& node, const std::string& file, const std::string& field) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(fmt::format("{}: field '{}': cannot parse value '{}'", mark(file, node), field,
                                  node.IsScalar() ? node.Scalar() : std::string("<non-scalar>")));
  }
}

inline std::vector<int> int_list(const YAML::Node& node, const std::string& file, const std::string& field) {
  std::vector<int> out;
  if (node.IsScalar()) {
    out.push_back(scalar<int>(node, file, field));
  } else if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(scalar<int>(item, file, field));
  } else if (!node.IsNull()) {
    throw ConfigError(fmt::format("{}: field '{}': expected an integer list", mark(file, node), field));
  }
  return out;
}

}  // namespace detail

inline Model parse_model(const std::string& s) {
  if (s == "xy") return Model::XY;
  if (s == "aliphatic") return Model::Aliphatic;
  throw ConfigError("field 'model': expected xy or aliphatic, got '" + s + "'");
}

inline Engine parse_engine(const std::string& s) {
  if (s == "full") return Engine::Full;
  if (s == "restricted") return Engine::Restricted;
  throw ConfigError("field 'engine': expected full or restricted, got '" + s + "'");
}

/// Parses observables given as "all", "1,3", or labels such as "SSST".
inline void set_observe(ScenarioConfig& c, const std::vector<std::string>& items) {
  c.observe.clear();
  c.observe_all = false;
  for (const auto& raw : items) {
    if (raw == "all") {
      c.observe_all = true;
      continue;
    }
    if (!raw.empty() && std::all_of(raw.begin(), raw.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) || ch == '-'; })) {
      try {
        c.observe.emplace_back(std::stoi(raw));
      } catch (const std::exception&) {
        detail::config_fail(c, "observe", "cannot parse '" + raw + "'");
      }
    } else {
      c.observe.emplace_back(raw);
    }
  }
}

/// Applies a YAML document on top of `c`.
inline void apply_yaml(ScenarioConfig& c, const YAML::Node& root, const std::string& file) {
  using detail::mark;
  using detail::scalar;
  if (!root.IsMap()) throw ConfigError(file + ": scenario file must be a mapping of keys to values");
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    const std::string where = mark(file, v.IsNull() ? kv.first : v);
    if (key == "name") {
      c.name = scalar<std::string>(v, file, key);
    } else if (key == "model") {
      c.origin["model"] = where;
      try {
        c.model = parse_model(scalar<std::string>(v, file, key));
      } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
      }
    } else if (key == "n") {
      c.n = scalar<int>(v, file, key);
    } else if (key == "couplings") {
      if (!v.IsMap()) throw ConfigError(where + ": field 'couplings': expected a mapping");
      std::optional<double> sigma, delta;
      for (const auto& ckv : v) {
        const std::string ck = ckv.first.as<std::string>();
        const std::string cwhere = mark(file, ckv.second);
        const double val = scalar<double>(ckv.second, file, "couplings." + ck);
        c.origin["couplings." + ck] = cwhere;
        if (ck == "J") c.J = val;
        else if (ck == "J_gem") c.j_gem = val;
        else if (ck == "J_gauche") c.j_gauche = val;
        else if (ck == "J_anti") c.j_anti = val;
        else if (ck == "sigma_J") sigma = val;
        else if (ck == "delta_J") delta = val;
        else throw ConfigError(cwhere + ": unknown field 'couplings." + ck + "'");
      }
      if (sigma || delta) {
        const double s = sigma.value_or(c.j_gauche + c.j_anti);
        const double d = delta.value_or(c.j_gauche - c.j_anti);
        c.j_gauche = 0.5 * (s + d);
        c.j_anti = 0.5 * (s - d);
      }
      c.origin["couplings"] = where;
      continue;
    } else if (key == "initial") {
      if (!v.IsMap()) throw ConfigError(where + ": field 'initial': expected a mapping");
      for (const auto& ikv : v) {
        const std::string ik = ikv.first.as<std::string>();
        const std::string field = "initial." + ik;
        c.origin[field] = mark(file, ikv.second);
        if (ik == "flips") c.flips = detail::int_list(ikv.second, file, field);
        else if (ik == "signs") c.signs = detail::int_list(ikv.second, file, field);
        else throw ConfigError(mark(file, ikv.second) + ": unknown field '" + field + "'");
      }
      continue;
    } else if (key == "observe") {
      std::vector<std::string> items;
      if (v.IsSequence()) {
        for (const auto& item : v) items.push_back(scalar<std::string>(item, file, key));
      } else {
        items.push_back(scalar<std::string>(v, file, key));
      }
      c.origin["observe"] = where;
      set_observe(c, items);
    } else if (key == "dt") {
      c.dt = scalar<double>(v, file, key);
    } else if (key == "horizon") {
      c.horizon = scalar<double>(v, file, key);
    } else if (key == "tau") {
      c.tau = scalar<double>(v, file, key);
    } else if (key == "zero_pad") {
      c.zero_pad = scalar<int>(v, file, key);
    } else if (key == "engine") {
      c.origin["engine"] = where;
      try {
        c.engine = parse_engine(scalar<std::string>(v, file, key));
      } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
      }
    } else if (key == "order") {
      c.order = scalar<int>(v, file, key);
    } else if (key == "peak_threshold") {
      c.peak_threshold = scalar<double>(v, file, key);
    } else if (key == "match_tol") {
      c.match_tol = scalar<double>(v, file, key);
    } else {
      throw ConfigError(where + ": unknown field '" + key + "'");
    }
    c.origin[key] = where;
  }
}

inline ScenarioConfig load_config(const std::string& path) {
  ScenarioConfig c;
  c.name = std::filesystem::path(path).stem().string();
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot read config file " + path);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(fmt::format("{}:{}: {}", path, e.mark.line + 1, e.msg));
  }
  apply_yaml(c, root, path);
  return c;
}

inline ScenarioConfig parse_config(const std::string& text, const std::string& source = "<string>") {
  ScenarioConfig c;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(fmt::format("{}:{}: {}", source, e.mark.line + 1, e.msg));
  }
  apply_yaml(c, root, source);
  return c;
}

/// Dimension of the Hilbert space the configured engine works in.
inline long long working_dim(const ScenarioConfig& c) {
  const int bits = c.model == Model::XY ? c.n : (c.engine == Engine::Full ? 2 * c.n : c.n);
  return bits >= 62 ? std::numeric_limits<long long>::max() : (1LL << bits);
}

/// Checks every field; throws ConfigError naming the first offending one.
inline void validate(const ScenarioConfig& c) {
  using detail::config_fail;
  if (c.n < 2) config_fail(c, "n", fmt::format("chain length must be >= 2, got {}", c.n));
  if (c.model == Model::XY) {
    if (working_dim(c) > kMaxFullDim) {
      config_fail(c, "n", fmt::format("xy chain of {} spins needs a {}-dim space; the limit is {} (n <= 12)", c.n,
                                      working_dim(c), kMaxFullDim));
    }
    if (!std::isfinite(c.J)) config_fail(c, "couplings.J", "must be finite");
  } else {
    if (c.engine == Engine::Full && working_dim(c) > kMaxFullDim) {
      config_fail(c, "n", fmt::format("engine=full with n={} needs a {}-dim space; the limit is {} (n <= 6); "
                                      "use engine=restricted", c.n, working_dim(c), kMaxFullDim));
    }
    if (c.engine == Engine::Restricted && working_dim(c) > kMaxRestrictedDim) {
      config_fail(c, "n", fmt::format("engine=restricted with n={} needs a {}-dim space; the limit is {} (n <= 14)",
                                      c.n, working_dim(c), kMaxRestrictedDim));
    }
    for (const char* f : {"couplings.J_gem", "couplings.J_gauche", "couplings.J_anti"}) {
      const double v = std::string(f) == "couplings.J_gem" ? c.j_gem : std::string(f) == "couplings.J_gauche" ? c.j_gauche : c.j_anti;
      if (!std::isfinite(v)) config_fail(c, f, "must be finite");
    }
    if (c.flips.empty()) config_fail(c, "initial.flips", "aliphatic initial state needs at least one term");
    if (!c.signs.empty() && c.signs.size() != c.flips.size()) {
      config_fail(c, "initial.signs", fmt::format("expected {} signs (one per term), got {}", c.flips.size(), c.signs.size()));
    }
    for (int s : c.signs) {
      if (s != 1 && s != -1) config_fail(c, "initial.signs", fmt::format("signs must be +1 or -1, got {}", s));
    }
    if (c.order != 0 && c.order != 2) config_fail(c, "order", fmt::format("must be 0 or 2, got {}", c.order));
  }
  std::vector<int> seen;
  for (int f : c.flips) {
    if (f < 1 || f > c.n) config_fail(c, "initial.flips", fmt::format("site {} out of range 1..{}", f, c.n));
    if (std::find(seen.begin(), seen.end(), f) != seen.end()) config_fail(c, "initial.flips", fmt::format("duplicate site {}", f));
    seen.push_back(f);
  }
  if (!c.observe_all && c.observe.empty()) config_fail(c, "observe", "no observable given");
  for (const auto& o : c.observe) {
    if (const int* site = std::get_if<int>(&o)) {
      if (*site < 1 || *site > c.n) config_fail(c, "observe", fmt::format("site index {} out of range 1..{}", *site, c.n));
    } else {
      const auto& text = std::get<std::string>(o);
      const Alphabet a = c.model == Model::XY ? Alphabet::AlphaBeta : Alphabet::ST2;
      try {
        const auto label = ProductLabel::parse(text, a);
        if (static_cast<int>(label.size()) != c.n) {
          config_fail(c, "observe", fmt::format("label '{}' has {} sites, chain has {}", text, label.size(), c.n));
        }
      } catch (const std::invalid_argument& e) {
        config_fail(c, "observe", fmt::format("bad label '{}': {}", text, e.what()));
      }
    }
  }
  if (!(c.dt > 0.0)) config_fail(c, "dt", fmt::format("must be positive, got {}", c.dt));
  if (!(c.horizon >= c.dt)) config_fail(c, "horizon", fmt::format("must be at least dt, got {}", c.horizon));
  if (!(c.tau > 0.0)) config_fail(c, "tau", fmt::format("must be positive, got {}", c.tau));
  if (c.zero_pad < 1 || c.zero_pad > 64) config_fail(c, "zero_pad", fmt::format("must lie in 1..64, got {}", c.zero_pad));
  if (!(c.peak_threshold > 0.0 && c.peak_threshold < 1.0)) {
    config_fail(c, "peak_threshold", fmt::format("must lie in (0, 1), got {}", c.peak_threshold));
  }
  if (c.match_tol && !(*c.match_tol > 0.0)) config_fail(c, "match_tol", fmt::format("must be positive, got {}", *c.match_tol));
}

/// Hamiltonian, initial state and observables for a validated scenario.
struct Setup {
  Operator hamiltonian;
  Operator rho0;
  std::vector<Operator> observables;
  std::vector<std::string> ids;
  Operator conserved;  // total Iz (normalized like the site observables)
};

inline std::vector<ObserveSpec> expanded_observables(const ScenarioConfig& c) {
  std::vector<ObserveSpec> obs;
  if (c.observe_all) {
    for (int i = 1; i <= c.n; ++i) obs.emplace_back(i);
  }
  for (const auto& o : c.observe) {
    if (std::find(obs.begin(), obs.end(), o) == obs.end()) obs.push_back(o);
  }
  return obs;
}

inline Setup build_setup(const ScenarioConfig& c) {
  validate(c);
  const InitialPattern pattern{c.n, c.flips};
  const auto obs = expanded_observables(c);
  if (c.model == Model::XY) {
    Setup s{build_xy({c.n, c.J}), initial_xy(pattern), {}, {}, total_iz(c.n) * cplx(std::ldexp(1.0, 1 - c.n))};
    for (const auto& o : obs) {
      if (const int* site = std::get_if<int>(&o)) {
        s.observables.push_back(site_polarization_op(*site, c.n));
        s.ids.push_back(fmt::format("I{}z", *site));
      } else {
        const auto label = ProductLabel::parse(std::get<std::string>(o), Alphabet::AlphaBeta);
        s.observables.push_back(population_op(label));
        s.ids.push_back("P_" + label.str());
      }
    }
    return s;
  }
  const AliphaticParams p = c.aliphatic();
  const Operator rho_restricted = initial_aliphatic(pattern, c.signs);
  const bool full = c.engine == Engine::Full;
  Setup s{full ? build_aliphatic_full(p) : build_aliphatic_restricted(p),
          full ? embed_restricted(rho_restricted) : rho_restricted, {}, {},
          full ? total_iz(2 * c.n) : zero_op(st2_basis(c.n))};
  for (const auto& o : obs) {
    const ProductLabel label = std::holds_alternative<int>(o) ? single_triplet_label(std::get<int>(o), c.n)
                                                              : ProductLabel::parse(std::get<std::string>(o), Alphabet::ST2);
    s.observables.push_back(full ? population_op_full(label) : population_op(label));
    s.ids.push_back("P_" + label.str());
  }
  return s;
}

struct SimulationResult {
  std::vector<Trajectory> trajectories;
  double conserved_deviation = 0.0;  // max |<Iz>(t) - <Iz>(0)|
  double energy_deviation = 0.0;     // max |<H>(t) - <H>(0)|
  double conserved_value = 0.0;
  double energy_value = 0.0;
};

namespace detail {

inline double max_deviation(const Trajectory& t) {
  double d = 0.0;
  for (double v : t.values) d = std::max(d, std::abs(v - t.values.front()));
  return d;
}

}  // namespace detail

inline SimulationResult run_simulation(const ScenarioConfig& c, unsigned threads = 1) {
  const Setup s = build_setup(c);
  const Propagator prop(s.hamiltonian);
  SimulationResult r;
  std::vector<Operator> obs = s.observables;
  std::vector<std::string> ids = s.ids;
  obs.push_back(s.conserved);
  ids.push_back("total_Iz");
  obs.push_back(s.hamiltonian);
  ids.push_back("energy");
  auto trajs = prop.observe_many(s.rho0, obs, ids, c.dt, c.steps(), threads);
  const Trajectory energy = std::move(trajs.back());
  trajs.pop_back();
  const Trajectory iz = std::move(trajs.back());
  trajs.pop_back();
  r.trajectories = std::move(trajs);
  r.conserved_deviation = detail::max_deviation(iz);
  r.conserved_value = iz.values.front();
  r.energy_deviation = detail::max_deviation(energy);
  r.energy_value = energy.values.front();
  return r;
}

/// Spectrum pipeline for one trajectory: DC removal on the raw series,
/// exponential apodization, zero-filled magnitude DFT.
inline Spectrum process_trajectory(const Trajectory& t, double tau, int zero_pad) {
  return magnitude_spectrum(apodize(remove_dc(t), tau), zero_pad);
}

inline TransitionTable predicted_table(const ScenarioConfig& c) {
  if (c.model == Model::XY) return xy_predicted_spectrum(c.n, c.J);
  return aliphatic_predicted_spectrum(c.aliphatic(), c.order);
}

struct SpectrumResult {
  std::string id;
  Spectrum spectrum;
  PeakMatchReport report;
};

inline std::vector<SpectrumResult> spectra_from(const ScenarioConfig& c, const SimulationResult& sim) {
  const TransitionTable table = predicted_table(c);
  std::vector<SpectrumResult> out;
  for (const auto& t : sim.trajectories) {
    SpectrumResult r{t.observable_id, process_trajectory(t, c.tau, c.zero_pad), {}};
    const double tol = c.match_tol.value_or(r.spectrum.bin_width());
    r.report = match_peaks(pick_peaks(r.spectrum, c.peak_threshold), table, tol);
    out.push_back(std::move(r));
  }
  return out;
}

/// Lines that coincide at order 0 and how far apart they are at order 2.
struct Splitting {
  std::string pair;
  double first, second, separation;
};

inline std::vector<Splitting> degenerate_splittings(const AliphaticParams& p) {
  const auto t0 = aliphatic_predicted_spectrum(p, 0);
  const auto t2 = aliphatic_predicted_spectrum(p, 2);
  std::vector<Splitting> out;
  for (const auto& g : distinct_lines(t0)) {
    for (std::size_t i = 0; i < g.members.size(); ++i) {
      for (std::size_t j = i + 1; j < g.members.size(); ++j) {
        const auto [k1, l1] = g.members[i];
        const auto [k2, l2] = g.members[j];
        const double a = t2.nu(k1, l1), b = t2.nu(k2, l2);
        out.push_back({fmt::format("nu{}{}/nu{}{}", k1, l1, k2, l2), a, b, std::abs(a - b)});
      }
    }
  }
  return out;
}

/// An order-0 degenerate pair as seen in a simulated spectrum: the peaks
/// matched to its two order-2 components.
struct ObservedSplitting {
  std::string pair;
  std::optional<double> first, second;

  bool resolved() const { return first && second && *first != *second; }
  double separation() const { return resolved() ? std::abs(*first - *second) : 0.0; }
};

inline std::vector<ObservedSplitting> observed_splittings(const PeakMatchReport& r, const AliphaticParams& p) {
  const auto t0 = aliphatic_predicted_spectrum(p, 0);
  std::vector<ObservedSplitting> out;
  for (const auto& g : distinct_lines(t0)) {
    for (std::size_t i = 0; i < g.members.size(); ++i) {
      for (std::size_t j = i + 1; j < g.members.size(); ++j) {
        const auto [k1, l1] = g.members[i];
        const auto [k2, l2] = g.members[j];
        out.push_back({fmt::format("nu{}{}/nu{}{}", k1, l1, k2, l2), r.matched_frequency(k1, l1), r.matched_frequency(k2, l2)});
      }
    }
  }
  return out;
}

inline std::string observed_splittings_text(const std::vector<ObservedSplitting>& v) {
  if (v.empty()) return "observed_splittings: []\n";
  std::string out = "observed_splittings:\n";
  auto f = [](const std::optional<double>& x) { return x ? io::detail::hz(*x) : std::string("null"); };
  for (const auto& s : v) {
    out += fmt::format("  - {{pair: {}, first: {}, second: {}, separation: {}, resolved: {}}}\n", s.pair, f(s.first), f(s.second),
                       io::detail::hz(s.separation()), s.resolved() ? "true" : "false");
  }
  return out;
}

inline std::string scenario_header(const ScenarioConfig& c) {
  std::string h = fmt::format("name: {}\nmodel: {}\nn: {}\n", c.name, c.model == Model::XY ? "xy" : "aliphatic", c.n);
  if (c.model == Model::XY) {
    h += fmt::format("couplings: {{J: {}}}\n", io::detail::hz(c.J));
  } else {
    const auto p = c.aliphatic();
    h += fmt::format("couplings: {{J_gem: {}, J_gauche: {}, J_anti: {}, sigma_J: {}, delta_J: {}}}\n", io::detail::hz(p.j_gem()),
                     io::detail::hz(p.j_gauche()), io::detail::hz(p.j_anti()), io::detail::hz(p.sigma_j()),
                     io::detail::hz(p.delta_j()));
  }
  return h;
}

inline std::string splitting_text(const AliphaticParams& p) {
  std::string out = fmt::format("pt2_splitting_estimate_hz: {}\n", io::detail::hz(pt2_splitting_estimate(p.delta_j(), p.j_gem())));
  const auto splits = degenerate_splittings(p);
  if (splits.empty()) return out + "splittings: []\n";
  out += "splittings:\n";
  for (const auto& s : splits) {
    out += fmt::format("  - {{pair: {}, first: {}, second: {}, separation: {}, split: {}}}\n", s.pair, io::detail::hz(s.first),
                       io::detail::hz(s.second), io::detail::hz(s.separation), s.separation > kDegeneracyTolerance ? "true" : "false");
  }
  return out;
}

inline std::string analytic_text(const ScenarioConfig& c) {
  if (c.model == Model::XY) {
    if (c.n < 2) detail::config_fail(c, "n", "chain length must be >= 2");
    return io::transition_table_text(xy_predicted_spectrum(c.n, c.J), scenario_header(c) + "order: 0\n");
  }
  if (c.order != 0 && c.order != 2) detail::config_fail(c, "order", "must be 0 or 2");
  const auto p = c.aliphatic();
  std::string out = io::transition_table_text(aliphatic_predicted_spectrum(p, c.order), scenario_header(c) + fmt::format("order: {}\n", c.order));
  if (c.order == 2 && p.j_gem() != 0.0) out += splitting_text(p);
  return out;
}

inline std::string blocks_text(const ScenarioConfig& c) {
  if (c.n < 2) detail::config_fail(c, "n", "chain length must be >= 2");
  const int spins = c.model == Model::XY ? c.n : 2 * c.n;
  if ((1LL << spins) > kMaxFullDim) {
    detail::config_fail(c, "n", fmt::format("block dump needs the full {}-dim matrix; the limit is {}", 1LL << spins, kMaxFullDim));
  }
  std::string out = scenario_header(c);
  if (c.model == Model::XY) {
    const Operator h = build_xy({c.n, c.J});
    return io::block_dump_text(extract_blocks(h, basis_labels(h.basis())), out + "basis: ab\n");
  }
  const auto p = c.aliphatic();
  const Operator hr = build_aliphatic_restricted(p);
  const auto labels = basis_labels(hr.basis());
  out = io::block_dump_text(extract_blocks(hr, labels), out + "basis: st2\n");

  const STBasis st = st_basis(c.n);
  const Operator hst = basis_change(build_aliphatic_full(p), st.unitary, st4_basis(c.n));
  out += "full_st_matrix:\n  basis: st4\n  diagonal_hz:\n";
  for (Index i = 0; i < hst.dim(); ++i) {
    out += fmt::format("    - {{label: \"{}\", value: {}}}\n", st.labels[static_cast<std::size_t>(i)].str(), io::detail::hz(hst(i, i).real()));
  }
  std::string couplings = io::couplings_text(classified_couplings(hst, st.labels), "off_diagonal");
  out += "  ";
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    out += couplings[i];
    if (couplings[i] == '\n' && i + 1 < couplings.size()) out += "  ";
  }
  return out;
}

inline std::string simulation_summary(const ScenarioConfig& c, const SimulationResult& r) {
  return fmt::format("{}: {} trajectories, {} samples each; <total Iz> = {:.6g} (max deviation {:.3e}); "
                     "<H> = {:.6g} Hz (max deviation {:.3e})\n",
                     c.name, r.trajectories.size(), c.steps() + 1, r.conserved_value, r.conserved_deviation, r.energy_value,
                     r.energy_deviation);
}

/// Writes `<name>.<observable>.traj.csv` files into `out_dir`.
inline std::vector<std::string> write_trajectories(const ScenarioConfig& c, const SimulationResult& r, const std::string& out_dir) {
  std::vector<std::string> files;
  for (const auto& t : r.trajectories) {
    const std::string path = (std::filesystem::path(out_dir) / (c.name + "." + t.observable_id + ".traj.csv")).string();
    io::write_file(path, io::trajectory_csv(t));
    files.push_back(path);
  }
  return files;
}

inline std::vector<std::string> write_spectra(const ScenarioConfig& c, const std::vector<SpectrumResult>& spectra,
                                              const std::string& out_dir) {
  std::vector<std::string> files;
  std::string header = scenario_header(c);
  if (c.model == Model::Aliphatic) {
    header += fmt::format("prediction_order: {}\n", c.order);
    if (c.aliphatic().j_gem() != 0.0) header += splitting_text(c.aliphatic());
  }
  for (const auto& s : spectra) {
    const auto base = std::filesystem::path(out_dir) / (c.name + "." + s.id);
    io::write_file(base.string() + ".spec.csv", io::spectrum_csv(s.spectrum));
    std::string report = io::match_report_text(s.report, header + "observable: " + s.id + "\n");
    if (c.model == Model::Aliphatic && c.order == 2) report += observed_splittings_text(observed_splittings(s.report, c.aliphatic()));
    io::write_file(base.string() + ".report.txt", report);
    files.push_back(base.string() + ".spec.csv");
    files.push_back(base.string() + ".report.txt");
  }
  return files;
}

// ---------------------------------------------------------------------------
// Presets

inline ScenarioConfig xy_preset(const std::string& name, int n, std::vector<int> flips, std::vector<ObserveSpec> observe, bool all = false) {
  ScenarioConfig c;
  c.name = name;
  c.model = Model::XY;
  c.n = n;
  c.J = 5.0;
  c.flips = std::move(flips);
  c.observe = std::move(observe);
  c.observe_all = all;
  return c;
}

/// Delta J = 5 Hz, J_gem = -14 Hz; Sigma J is not needed by the restricted
/// engine and is set to 10 Hz for the full one.
inline ScenarioConfig aliphatic_preset(const std::string& name, int n, std::vector<int> flips, std::vector<int> signs,
                                       std::vector<ObserveSpec> observe) {
  ScenarioConfig c;
  c.name = name;
  c.model = Model::Aliphatic;
  c.n = n;
  c.j_gem = -14.0;
  c.j_gauche = 7.5;
  c.j_anti = 2.5;
  c.flips = std::move(flips);
  c.signs = std::move(signs);
  c.observe = std::move(observe);
  c.engine = Engine::Restricted;
  c.order = 2;
  return c;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig1",  "fig6a",       "fig6b",       "fig6c",         "fig6d",
                                              "fig7",  "blocks-fig3", "blocks-fig5", "dss-additivity"};
  return names;
}

/// Published DSS zero-quantum lines (Hz) and the model used to label them:
/// n = 3, Delta J chosen so that sqrt(2) * Delta J equals the nu13 line,
/// J_gem = -14 Hz.
inline const std::vector<double> kDssPeaksHz{3.70, 4.67, 8.37};

inline PeakMatchReport dss_additivity_report() {
  const double delta_j = kDssPeaksHz[2] / std::sqrt(2.0);
  const auto p = AliphaticParams::from_sum_diff(3, -14.0, 10.0, delta_j);
  return match_peaks(peaks_from_frequencies(kDssPeaksHz), aliphatic_predicted_spectrum(p, 2), 0.3);
}

/// fig7: XY chains n = 2..5 with the first spin inverted, all sites observed.
inline std::vector<ScenarioConfig> fig7_sweep() {
  std::vector<ScenarioConfig> out;
  for (int n = 2; n <= 5; ++n) out.push_back(xy_preset(fmt::format("fig7_n{}", n), n, {1}, {}, true));
  return out;
}

}  // namespace spinchain
