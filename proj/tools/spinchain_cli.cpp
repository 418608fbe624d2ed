// spinchain: command-line front end.
//
//   spinchain simulate --config scenario.yaml --out results/
//   spinchain spectrum --model xy --n 4 --J 5 --flips 1 --observe 1
//   spinchain analytic --model aliphatic --n 4 --delta_J 5 --J_gem -14 --order 2
//   spinchain blocks   --model xy --n 4
//   spinchain preset fig6a --out results/
//
// Flags mirror the scenario file keys and override values read from --config.

#include "spinchain/scenario.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace spinchain;

struct Overrides {
  std::optional<std::string> name, model, engine;
  std::optional<int> n, zero_pad, order;
  std::optional<double> J, J_gem, J_gauche, J_anti, delta_J, sigma_J;
  std::optional<double> dt, horizon, tau, peak_threshold, match_tol;
  std::optional<std::vector<int>> flips, signs;
  std::optional<std::vector<std::string>> observe;
  std::string config;
};

struct Globals {
  std::string out = ".";
  unsigned threads = 1;
  bool seedless = false;
};

void add_scenario_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Scenario file (YAML)")->check(CLI::ExistingFile);
  cmd->add_option("--name", o.name, "Output file stem");
  cmd->add_option("--model", o.model, "xy | aliphatic");
  cmd->add_option("--n", o.n, "Chain length");
  cmd->add_option("--J", o.J, "XY coupling (Hz)");
  cmd->add_option("--J_gem", o.J_gem, "Geminal coupling (Hz)");
  cmd->add_option("--J_gauche", o.J_gauche, "Vicinal gauche coupling (Hz)");
  cmd->add_option("--J_anti", o.J_anti, "Vicinal anti coupling (Hz)");
  cmd->add_option("--delta_J", o.delta_J, "J_gauche - J_anti (Hz)");
  cmd->add_option("--sigma_J", o.sigma_J, "J_gauche + J_anti (Hz)");
  cmd->add_option("--flips", o.flips, "Inverted sites / T0 sites of the initial state")->delimiter(',');
  cmd->add_option("--signs", o.signs, "Per-term signs of the aliphatic initial state")->delimiter(',');
  cmd->add_option("--observe", o.observe, "Site indices, product labels or 'all'")->delimiter(',');
  cmd->add_option("--dt", o.dt, "Sampling interval (s)");
  cmd->add_option("--horizon", o.horizon, "Simulated time (s)");
  cmd->add_option("--tau", o.tau, "Apodization time constant (s)");
  cmd->add_option("--zero_pad", o.zero_pad, "Zero-filling factor");
  cmd->add_option("--engine", o.engine, "full | restricted (aliphatic)");
  cmd->add_option("--order", o.order, "Aliphatic prediction order: 0 | 2");
  cmd->add_option("--peak_threshold", o.peak_threshold, "Relative peak threshold");
  cmd->add_option("--match_tol", o.match_tol, "Peak match tolerance (Hz)");
}

ScenarioConfig resolve(const Overrides& o) {
  ScenarioConfig c = o.config.empty() ? ScenarioConfig{} : load_config(o.config);
  auto set = [&](const char* field, const auto& opt, auto& target) {
    if (opt) {
      target = *opt;
      c.origin[field] = std::string("--") + field;
    }
  };
  if (o.name) c.name = *o.name;
  if (o.model) {
    c.origin["model"] = "--model";
    c.model = parse_model(*o.model);
  }
  if (o.engine) {
    c.origin["engine"] = "--engine";
    c.engine = parse_engine(*o.engine);
  }
  set("n", o.n, c.n);
  c.origin["couplings.J"] = o.J ? "--J" : c.origin["couplings.J"];
  if (o.J) c.J = *o.J;
  if (o.J_gem) {
    c.j_gem = *o.J_gem;
    c.origin["couplings.J_gem"] = "--J_gem";
  }
  if (o.J_gauche) {
    c.j_gauche = *o.J_gauche;
    c.origin["couplings.J_gauche"] = "--J_gauche";
  }
  if (o.J_anti) {
    c.j_anti = *o.J_anti;
    c.origin["couplings.J_anti"] = "--J_anti";
  }
  if (o.delta_J || o.sigma_J) {
    const double s = o.sigma_J.value_or(c.j_gauche + c.j_anti);
    const double d = o.delta_J.value_or(c.j_gauche - c.j_anti);
    c.j_gauche = 0.5 * (s + d);
    c.j_anti = 0.5 * (s - d);
    c.origin["couplings.J_gauche"] = c.origin["couplings.J_anti"] = o.delta_J ? "--delta_J" : "--sigma_J";
  }
  set("initial.flips", o.flips, c.flips);
  set("initial.signs", o.signs, c.signs);
  if (o.observe) {
    c.origin["observe"] = "--observe";
    set_observe(c, *o.observe);
  }
  set("dt", o.dt, c.dt);
  set("horizon", o.horizon, c.horizon);
  set("tau", o.tau, c.tau);
  set("zero_pad", o.zero_pad, c.zero_pad);
  set("order", o.order, c.order);
  set("peak_threshold", o.peak_threshold, c.peak_threshold);
  if (o.match_tol) {
    c.match_tol = *o.match_tol;
    c.origin["match_tol"] = "--match_tol";
  }
  if (c.origin["couplings.J"].empty()) c.origin.erase("couplings.J");
  return c;
}

void announce(const std::vector<std::string>& files) {
  for (const auto& f : files) fmt::print("wrote {}\n", f);
}

std::string out_path(const Globals& g, const std::string& file) {
  return (std::filesystem::path(g.out) / file).string();
}

void cmd_simulate(const ScenarioConfig& c, const Globals& g) {
  const auto sim = run_simulation(c, g.threads);
  announce(write_trajectories(c, sim, g.out));
  fmt::print("{}", simulation_summary(c, sim));
}

void cmd_spectrum(const ScenarioConfig& c, const Globals& g) {
  const auto sim = run_simulation(c, g.threads);
  const auto spectra = spectra_from(c, sim);
  announce(write_trajectories(c, sim, g.out));
  announce(write_spectra(c, spectra, g.out));
  fmt::print("{}", simulation_summary(c, sim));
  for (const auto& s : spectra) {
    fmt::print("{}.{}: {} peaks, {} of {} predicted lines matched, {} unmatched peaks\n", c.name, s.id, s.report.peaks.size(),
               s.report.matches.size() - s.report.unmatched_predictions.size(), s.report.matches.size(),
               s.report.unmatched_peaks.size());
  }
}

void cmd_analytic(const ScenarioConfig& c, const Globals& g) {
  const std::string path = out_path(g, c.name + ".analytic.txt");
  const std::string text = analytic_text(c);
  io::write_file(path, text);
  fmt::print("{}wrote {}\n", text, path);
}

void cmd_blocks(const ScenarioConfig& c, const Globals& g) {
  const std::string path = out_path(g, c.name + ".blocks.txt");
  io::write_file(path, blocks_text(c));
  fmt::print("wrote {}\n", path);
}

void run_preset(const std::string& name, const Globals& g) {
  if (name == "fig1") {
    cmd_simulate(xy_preset("fig1", 8, {1}, {}, true), g);
  } else if (name == "fig6a") {
    cmd_spectrum(aliphatic_preset("fig6a", 4, {1, 2, 3, 4}, {1, 1, 1, -1}, {std::string("SSST")}), g);
  } else if (name == "fig6b") {
    cmd_spectrum(aliphatic_preset("fig6b", 4, {3, 4}, {1, 1}, {std::string("SSST")}), g);
  } else if (name == "fig6c") {
    cmd_spectrum(xy_preset("fig6c", 4, {1}, {1}), g);
  } else if (name == "fig6d") {
    cmd_spectrum(xy_preset("fig6d", 4, {1, 2}, {1}), g);
  } else if (name == "fig7") {
    // One scenario per worker; each writes its own files.
    const auto sweep = fig7_sweep();
    std::vector<std::string> logs(sweep.size());
    std::mutex err_mutex;
    std::exception_ptr err;
    const std::size_t workers = std::clamp<std::size_t>(g.threads, 1, sweep.size());
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t i = w; i < sweep.size(); i += workers) {
            try {
              const auto sim = run_simulation(sweep[i], 1);
              const auto spectra = spectra_from(sweep[i], sim);
              auto files = write_trajectories(sweep[i], sim, g.out);
              const auto spec_files = write_spectra(sweep[i], spectra, g.out);
              files.insert(files.end(), spec_files.begin(), spec_files.end());
              for (const auto& f : files) logs[i] += "wrote " + f + "\n";
              logs[i] += simulation_summary(sweep[i], sim);
            } catch (...) {
              std::lock_guard lock(err_mutex);
              if (!err) err = std::current_exception();
            }
          }
        });
      }
    }
    if (err) std::rethrow_exception(err);
    for (const auto& l : logs) fmt::print("{}", l);
  } else if (name == "blocks-fig3") {
    ScenarioConfig xy = xy_preset("blocks-fig3.xy_n4", 4, {1}, {1});
    cmd_blocks(xy, g);
    ScenarioConfig a4 = aliphatic_preset("blocks-fig3.aliphatic_n4", 4, {1}, {}, {1});
    cmd_blocks(a4, g);
    ScenarioConfig a2 = aliphatic_preset("blocks-fig3.aliphatic_n2", 2, {1}, {}, {1});
    cmd_blocks(a2, g);
  } else if (name == "blocks-fig5") {
    const ScenarioConfig c = aliphatic_preset("blocks-fig5", 4, {1}, {}, {1});
    const Operator h = build_aliphatic_restricted(c.aliphatic());
    const auto [labels, m] = manifold_submatrix(h, basis_labels(h.basis()), {0, 2, 4});
    const std::string path = out_path(g, "blocks-fig5.manifolds_0_2_4.txt");
    io::write_file(path, scenario_header(c) + "basis: st2\nsinglet_counts: [0, 2, 4]\n" + io::matrix_text("submatrix", labels, m));
    fmt::print("wrote {}\n", path);
  } else if (name == "dss-additivity") {
    const auto report = dss_additivity_report();
    const std::string path = out_path(g, "dss-additivity.report.txt");
    const std::string header = fmt::format("name: dss-additivity\nmodel: aliphatic\nn: 3\ncouplings: {{J_gem: -14.0000, delta_J: {}}}\n",
                                           io::detail::hz(kDssPeaksHz[2] / std::sqrt(2.0)));
    io::write_file(path, io::match_report_text(report, header));
    fmt::print("wrote {}\nmax additivity residual: {} Hz\n", path, io::detail::hz(report.max_additivity_residual()));
  } else {
    std::string known;
    for (const auto& p : preset_names()) known += (known.empty() ? "" : ", ") + p;
    throw ConfigError("unknown preset '" + name + "'; available: " + known);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-chain dynamics and zero-quantum spectra"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
  app.add_flag("--seedless", g.seedless, "Accepted for scripting; all computation is deterministic");

  Overrides o;
  struct Sub {
    CLI::App* app;
    void (*run)(const ScenarioConfig&, const Globals&);
  };
  std::vector<Sub> subs{{app.add_subcommand("simulate", "Write trajectories for the requested observables"), cmd_simulate},
                        {app.add_subcommand("spectrum", "Trajectories, spectra and peak-match reports"), cmd_spectrum},
                        {app.add_subcommand("analytic", "Predicted energy levels and transitions"), cmd_analytic},
                        {app.add_subcommand("blocks", "Block structure of the Hamiltonian"), cmd_blocks}};
  for (auto& s : subs) add_scenario_flags(s.app, o);

  std::string preset;
  CLI::App* preset_cmd = app.add_subcommand("preset", "Regenerate the data behind a figure");
  preset_cmd->add_option("name", preset, "Preset name")->required();

  // Global options are also accepted after the subcommand.
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(g.out);
    if (preset_cmd->parsed()) {
      run_preset(preset, g);
      return 0;
    }
    for (auto& s : subs) {
      if (s.app->parsed()) s.run(resolve(o), g);
    }
  } catch (const ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
