// wum: command-line front end for the toolkit.
//
// Exit status: 0 success, 1 usage error, 2 data or format error.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "wum/clf.h"
#include "wum/eval.h"
#include "wum/miner.h"
#include "wum/reconstruct.h"
#include "wum/runner.h"
#include "wum/session_io.h"
#include "wum/simulator.h"
#include "wum/topology.h"

namespace {

constexpr int kUsage = 1;
constexpr int kData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to `path`, or stdout when it is empty or "-".
void with_output(const std::string& path,
                 const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  body(out);
}

void report(const std::vector<wum::clf::Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    std::cerr << (d.is_error ? "error" : "skip") << " line " << d.line_no
              << ": " << d.message << '\n';
  }
}

std::vector<wum::VisitStream> load_streams(const std::string& log_path) {
  auto parsed = wum::clf::parse_file(log_path);
  report(parsed.diagnostics);
  std::vector<wum::clf::Diagnostic> unresolved;
  std::vector<wum::VisitStream> streams;
  for (const auto& stream : wum::clf::group_by_user(std::move(parsed.entries))) {
    streams.push_back(wum::clf::to_visit_stream(stream, &unresolved));
  }
  report(unresolved);
  return streams;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Session reconstruction and navigation pattern mining"};
  app.require_subcommand(1);

  // gen-topology
  wum::TopologyGenParams tp;
  std::string topo_out;
  auto* gen = app.add_subcommand("gen-topology", "Generate a random site topology");
  gen->add_option("--pages", tp.n_pages, "Number of pages")->capture_default_str();
  gen->add_option("--outdegree", tp.avg_outdegree, "Average out-degree")->capture_default_str();
  gen->add_option("--entry-fraction", tp.entry_fraction, "Fraction of entry pages")
      ->capture_default_str();
  gen->add_option("--seed", tp.seed, "RNG seed")->capture_default_str();
  gen->add_option("-o,--output", topo_out, "Output file (default stdout)");

  // simulate
  wum::sim::SimulationParams sp;
  std::string sim_topology, sim_log, sim_sessions;
  unsigned sim_jobs = 1;
  auto* simulate = app.add_subcommand("simulate", "Simulate agents on a topology");
  simulate->add_option("--topology", sim_topology, "Topology file")->required();
  simulate->add_option("--agents", sp.n_agents)->capture_default_str();
  simulate->add_option("--stp", sp.stp)->capture_default_str();
  simulate->add_option("--lpp", sp.lpp)->capture_default_str();
  simulate->add_option("--nip", sp.nip)->capture_default_str();
  simulate->add_option("--mean-stay", sp.mean_stay, "Seconds")->capture_default_str();
  simulate->add_option("--sd-stay", sp.sd_stay, "Seconds")->capture_default_str();
  simulate->add_option("--max-gap", sp.max_gap, "Seconds")->capture_default_str();
  simulate->add_option("--seed", sp.seed)->capture_default_str();
  simulate->add_option("--jobs", sim_jobs)->capture_default_str();
  simulate->add_option("--log", sim_log, "Server log output")->required();
  simulate->add_option("--sessions", sim_sessions, "Real sessions output")->required();

  // reconstruct
  wum::recon::ReconstructionParams rp;
  std::string rec_log, rec_topology, rec_out, rec_heuristic = "ssra";
  unsigned rec_jobs = 1;
  auto* reconstruct = app.add_subcommand("reconstruct", "Reconstruct sessions from a log");
  reconstruct->add_option("--log", rec_log, "CLF access log (plain or gzip)")->required();
  reconstruct->add_option("--topology", rec_topology, "Topology file")->required();
  reconstruct->add_option("--heuristic", rec_heuristic)
      ->check(CLI::IsMember({"to1", "to2", "no", "ssra"}))
      ->capture_default_str();
  reconstruct->add_option("--rho", rp.page_stay_rho, "Seconds")->capture_default_str();
  reconstruct->add_option("--delta", rp.session_duration_delta, "Seconds")
      ->capture_default_str();
  reconstruct->add_option("--jobs", rec_jobs)->capture_default_str();
  reconstruct->add_option("-o,--output", rec_out, "Session file (default stdout)");

  // mine
  wum::mine::MiningParams mp;
  std::string mine_sessions, mine_topology, mine_out;
  auto* mine = app.add_subcommand("mine", "Mine maximal frequent patterns");
  mine->add_option("--sessions", mine_sessions, "Session file")->required();
  mine->add_option("--topology", mine_topology, "Topology file")->required();
  mine->add_option("--min-support", mp.min_support, "Fraction of sessions")
      ->capture_default_str();
  mine->add_option("--max-length", mp.max_length, "0 = longest session")
      ->capture_default_str();
  mine->add_flag("--strict", mp.strict_threshold, "Require support > min-support");
  mine->add_option("--min-pattern-length", mp.min_maximal_length,
                   "Shortest maximal pattern reported")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  mine->add_option("-o,--output", mine_out, "Pattern file (default stdout)");

  // evaluate
  std::string ev_real, ev_sessions, ev_topology, ev_label = "?";
  std::optional<double> ev_support;
  auto* evaluate = app.add_subcommand("evaluate", "Score sessions against ground truth");
  evaluate->add_option("--real", ev_real, "Real session file")->required();
  evaluate->add_option("--sessions", ev_sessions, "Reconstructed session file")->required();
  evaluate->add_option("--heuristic", ev_label, "Label for the CSV row");
  auto* ev_topo_opt = evaluate->add_option("--topology", ev_topology,
                                           "Topology file (pattern accuracy)");
  evaluate->add_option("--min-support", ev_support, "Also compute pattern accuracy")
      ->needs(ev_topo_opt);

  // experiment
  std::string ex_config, ex_out, ex_summary, ex_artifacts;
  std::optional<unsigned> ex_jobs;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment grid");
  experiment->add_option("--config", ex_config, "key=value config file")->required();
  experiment->add_option("-o,--output", ex_out, "Result CSV (default stdout)");
  experiment->add_option("--summary", ex_summary, "Mean/sd summary CSV");
  experiment->add_option("--artifacts", ex_artifacts, "Artifact directory override");
  experiment->add_option("--jobs", ex_jobs, "Parallel grid cells");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*gen) {
      auto t = wum::generate_random_topology(tp);
      with_output(topo_out, [&](std::ostream& out) { wum::write_topology(out, t); });
    } else if (*simulate) {
      sp.validate();
      auto topology = wum::load_topology(sim_topology);
      auto result = wum::sim::simulate(topology, sp, sim_jobs);
      with_output(sim_log, [&](std::ostream& out) {
        wum::sim::write_server_log(out, result.log);
      });
      wum::save_sessions(result.real_sessions, sim_sessions);
      std::cerr << result.log.size() << " requests, "
                << result.real_sessions.size() << " real sessions\n";
    } else if (*reconstruct) {
      rp.heuristic = *wum::recon::parse_heuristic(rec_heuristic);
      rp.validate();
      auto topology = wum::load_topology(rec_topology);
      auto streams = load_streams(rec_log);
      auto sessions = wum::recon::reconstruct_all(streams, topology, rp, rec_jobs);
      with_output(rec_out, [&](std::ostream& out) { wum::write_sessions(out, sessions); });
    } else if (*mine) {
      mp.validate();
      auto topology = wum::load_topology(mine_topology);
      auto sessions = wum::load_sessions(mine_sessions);
      if (sessions.empty()) {
        throw wum::FormatError(0, "session file is empty");
      }
      auto result = wum::mine::sequential_apriori(mp, sessions, topology);
      with_output(mine_out, [&](std::ostream& out) {
        wum::mine::write_patterns(out, result.maximal);
      });
    } else if (*evaluate) {
      auto real = wum::load_sessions(ev_real);
      auto found = wum::load_sessions(ev_sessions);
      if (real.empty()) {
        throw wum::FormatError(0, "real session file is empty");
      }
      wum::eval::AccuracyReport r;
      r.heuristic = ev_label;
      r.session_accuracy = wum::eval::session_accuracy(real, found);
      r.n_real_sessions = real.size();
      r.n_reconstructed = found.size();
      r.params = "real=" + ev_real + ";sessions=" + ev_sessions;
      if (ev_support) {
        wum::mine::MiningParams m;
        m.min_support = *ev_support;
        m.validate();
        auto topology = wum::load_topology(ev_topology);
        auto truth = wum::mine::sequential_apriori(m, real, topology).maximal;
        std::vector<wum::mine::Pattern> mined;
        if (!found.empty()) {
          mined = wum::mine::sequential_apriori(m, found, topology).maximal;
        }
        r.n_true_patterns = truth.size();
        r.n_found_patterns = mined.size();
        if (!truth.empty()) {
          r.pattern_accuracy = wum::eval::pattern_accuracy(truth, mined);
        }
        char buf[32];
        std::snprintf(buf, sizeof(buf), ";min_support=%g", *ev_support);
        r.params += buf;
      }
      std::cout << wum::eval::csv_header() << '\n'
                << wum::eval::to_csv_row(r) << '\n';
    } else if (*experiment) {
      auto config = wum::runner::load_config(ex_config);
      if (!ex_artifacts.empty()) {
        config.artifacts_dir = ex_artifacts;
      }
      if (ex_jobs) {
        config.jobs = *ex_jobs;
      }
      auto rows = wum::runner::run_experiment(config);
      with_output(ex_out, [&](std::ostream& out) { wum::runner::write_results(out, rows); });
      if (!ex_summary.empty()) {
        with_output(ex_summary, [&](std::ostream& out) {
          wum::runner::write_summary(out, wum::runner::summarize(rows));
        });
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "wum: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "wum: " << e.what() << '\n';
    return kData;
  }
  return 0;
}
