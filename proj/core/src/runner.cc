#include "wum/runner.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "wum/clf.h"
#include "wum/eval.h"
#include "wum/session_io.h"

namespace wum::runner {
namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return mix(mix(mix(base) ^ a) ^ b);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h = (h ^ c) * 1099511628211ULL;
  }
  return h;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string_view trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view text, std::size_t line) {
  text = trim(text);
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw FormatError(line, "bad number '" + std::string(text) + "'");
  }
  return v;
}

template <typename Int>
Int parse_integer(std::string_view text, std::size_t line) {
  text = trim(text);
  Int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw FormatError(line, "bad integer '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view text, std::size_t line) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    out.push_back(parse_double(
        text.substr(start, comma == std::string_view::npos
                               ? std::string_view::npos
                               : comma - start),
        line));
    if (comma == std::string_view::npos) {
      return out;
    }
    start = comma + 1;
  }
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos
                                         ? std::string_view::npos
                                         : comma - start));
    if (comma == std::string_view::npos) {
      return out;
    }
    start = comma + 1;
  }
}

ExperimentConfig with_value(const ExperimentConfig& config, double value) {
  ExperimentConfig c = config;
  switch (config.swept) {
    case SweptVar::kStp:
      c.simulation.stp = value;
      break;
    case SweptVar::kLpp:
      c.simulation.lpp = value;
      break;
    case SweptVar::kNip:
      c.simulation.nip = value;
      break;
    case SweptVar::kMinSupport:
      c.mining.min_support = value;
      break;
  }
  return c;
}

// One simulated data set plus the per-user streams the heuristics consume.
struct Dataset {
  WebTopology topology;
  sim::SimulationResult simulation;
  std::vector<VisitStream> streams;
};

Dataset make_dataset(const ExperimentConfig& c, std::uint32_t replication,
                     std::uint64_t value_key) {
  TopologyGenParams tp = c.topology;
  tp.seed = derive_seed(c.seed, replication, 0);
  sim::SimulationParams sp = c.simulation;
  sp.seed = derive_seed(c.seed, replication, value_key + 1);
  Dataset d{generate_random_topology(tp), {}, {}};
  d.simulation = sim::simulate(d.topology, sp);
  for (const auto& stream : clf::group_by_user(d.simulation.log)) {
    d.streams.push_back(clf::to_visit_stream(stream));
  }
  return d;
}

void write_text(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  body(out);
}

void persist_dataset(const std::filesystem::path& dir, const Dataset& d) {
  save_topology(d.topology, dir / "topology.txt");
  write_text(dir / "access.log", [&](std::ostream& out) {
    sim::write_server_log(out, d.simulation.log);
  });
  save_sessions(d.simulation.real_sessions, dir / "real_sessions.txt");
}

void persist_rows(const std::filesystem::path& dir,
                  const std::vector<ResultRow>& rows) {
  auto tmp = dir / "rows.csv.tmp";
  write_text(tmp, [&](std::ostream& out) { write_results(out, rows); });
  std::filesystem::rename(tmp, dir / "rows.csv");
}

std::optional<std::vector<ResultRow>> cached_rows(
    const std::filesystem::path& dir) {
  std::ifstream in(dir / "rows.csv");
  if (!in) {
    return std::nullopt;
  }
  return read_results(in);
}

std::filesystem::path cell_dir(const ExperimentConfig& config,
                               const std::string& cell) {
  if (config.artifacts_dir.empty()) {
    return {};
  }
  char name[17];
  std::snprintf(name, sizeof(name), "%016llx",
                static_cast<unsigned long long>(
                    fnv1a(config.canonical() + "|" + cell)));
  auto dir = config.artifacts_dir / name;
  std::filesystem::create_directories(dir);
  return dir;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - since)
      .count();
}

template <typename Job>
void run_jobs(std::size_t n, unsigned jobs, Job&& job) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      job(i);
    }
  };
  jobs = static_cast<unsigned>(std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1)));
  if (jobs == 1) {
    work();
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < jobs; ++w) {
    pool.emplace_back(work);
  }
}

std::size_t heuristic_rank(recon::Heuristic h) {
  return static_cast<std::size_t>(
      std::find(std::begin(recon::kAllHeuristics),
                std::end(recon::kAllHeuristics), h) -
      std::begin(recon::kAllHeuristics));
}

}  // namespace

std::string_view to_string(SweptVar v) {
  switch (v) {
    case SweptVar::kStp:
      return "stp";
    case SweptVar::kLpp:
      return "lpp";
    case SweptVar::kNip:
      return "nip";
    case SweptVar::kMinSupport:
      return "min_support";
  }
  return "?";
}

std::optional<SweptVar> parse_swept_var(std::string_view text) {
  for (SweptVar v : {SweptVar::kStp, SweptVar::kLpp, SweptVar::kNip,
                     SweptVar::kMinSupport}) {
    if (text == to_string(v)) {
      return v;
    }
  }
  return std::nullopt;
}

BehaviourSetting pattern_experiment(int id) {
  static constexpr BehaviourSetting kTable[] = {
      {0.10, 0.20, 0.20}, {0.10, 0.20, 0.40}, {0.10, 0.40, 0.20},
      {0.10, 0.40, 0.40}, {0.20, 0.20, 0.20}, {0.20, 0.20, 0.40},
      {0.20, 0.40, 0.20}, {0.20, 0.40, 0.40}};
  if (id < 1 || id > 8) {
    throw std::invalid_argument("experiment id must be 1..8");
  }
  return kTable[id - 1];
}

void ExperimentConfig::validate() const {
  if (values.empty()) {
    throw std::invalid_argument("swept value list is empty");
  }
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("swept values must lie in [0, 1]");
    }
  }
  if (replications == 0) {
    throw std::invalid_argument("replications must be positive");
  }
  for (double v : values) {
    ExperimentConfig c = with_value(*this, v);
    c.simulation.validate();
    c.reconstruction.validate();
    if (swept == SweptVar::kMinSupport) {
      c.mining.validate();
    }
  }
  if (topology.n_pages == 0 || !(topology.avg_outdegree > 0) ||
      topology.avg_outdegree >= topology.n_pages ||
      !(topology.entry_fraction > 0 && topology.entry_fraction <= 1)) {
    throw std::invalid_argument("invalid topology parameters");
  }
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream s;
  s << "pages=" << topology.n_pages << ";outdegree=" << fmt("%.17g", topology.avg_outdegree)
    << ";entry_fraction=" << fmt("%.17g", topology.entry_fraction)
    << ";stp=" << fmt("%.17g", simulation.stp) << ";lpp=" << fmt("%.17g", simulation.lpp)
    << ";nip=" << fmt("%.17g", simulation.nip)
    << ";mean_stay=" << fmt("%.17g", simulation.mean_stay)
    << ";sd_stay=" << fmt("%.17g", simulation.sd_stay)
    << ";max_gap=" << fmt("%.17g", simulation.max_gap)
    << ";agents=" << simulation.n_agents << ";start_time=" << simulation.start_time
    << ";start_spread=" << simulation.start_spread
    << ";rho=" << reconstruction.page_stay_rho
    << ";delta=" << reconstruction.session_duration_delta
    << ";min_support=" << fmt("%.17g", mining.min_support)
    << ";max_length=" << mining.max_length
    << ";strict_support=" << (mining.strict_threshold ? 1 : 0)
    << ";sweep=" << to_string(swept) << ";values=";
  for (std::size_t i = 0; i < values.size(); ++i) {
    s << (i ? "," : "") << fmt("%.17g", values[i]);
  }
  s << ";replications=" << replications << ";seed=" << seed;
  return s.str();
}

std::vector<ResultRow> run_session_sweep(const ExperimentConfig& config) {
  config.validate();
  if (config.swept == SweptVar::kMinSupport) {
    throw std::invalid_argument("session sweep needs stp, lpp or nip swept");
  }
  const std::size_t n_values = config.values.size();
  const std::size_t n_h = std::size(recon::kAllHeuristics);
  std::vector<std::vector<ResultRow>> cells(n_values * config.replications);

  run_jobs(cells.size(), config.jobs, [&](std::size_t cell) {
    const std::size_t vi = cell / config.replications;
    const auto rep = static_cast<std::uint32_t>(cell % config.replications);
    const double value = config.values[vi];
    const ExperimentConfig c = with_value(config, value);

    auto dir = cell_dir(config, "session|value=" + fmt("%.17g", value) +
                                    "|rep=" + std::to_string(rep));
    if (!dir.empty()) {
      if (auto rows = cached_rows(dir)) {
        cells[cell] = std::move(*rows);
        return;
      }
    }

    Dataset data = make_dataset(c, rep, fnv1a(fmt("%.17g", value)));
    if (!dir.empty()) {
      persist_dataset(dir, data);
    }
    std::vector<ResultRow> rows;
    for (recon::Heuristic h : recon::kAllHeuristics) {
      auto started = std::chrono::steady_clock::now();
      recon::ReconstructionParams rp = c.reconstruction;
      rp.heuristic = h;
      auto sessions = recon::reconstruct_all(data.streams, data.topology, rp);
      double acc = data.simulation.real_sessions.empty()
                       ? 0.0
                       : eval::session_accuracy(data.simulation.real_sessions,
                                                sessions);
      rows.push_back({config.swept, value, h, rep, acc, std::nullopt,
                      elapsed_ms(started)});
      if (!dir.empty()) {
        save_sessions(sessions, dir / ("sessions_" + std::string(recon::to_string(h)) + ".txt"));
      }
    }
    if (!dir.empty()) {
      persist_rows(dir, rows);
    }
    cells[cell] = std::move(rows);
  });

  std::vector<ResultRow> out;
  out.reserve(cells.size() * n_h);
  for (std::size_t vi = 0; vi < n_values; ++vi) {
    for (std::size_t hi = 0; hi < n_h; ++hi) {
      for (std::uint32_t rep = 0; rep < config.replications; ++rep) {
        out.push_back(cells[vi * config.replications + rep][hi]);
      }
    }
  }
  return out;
}

std::vector<ResultRow> run_pattern_sweep(const ExperimentConfig& config) {
  config.validate();
  if (config.swept != SweptVar::kMinSupport) {
    throw std::invalid_argument("pattern sweep needs min_support swept");
  }
  const std::size_t n_values = config.values.size();
  const std::size_t n_h = std::size(recon::kAllHeuristics);
  // cells[rep] holds rows ordered by (value, heuristic).
  std::vector<std::vector<ResultRow>> cells(config.replications);

  run_jobs(cells.size(), config.jobs, [&](std::size_t cell) {
    const auto rep = static_cast<std::uint32_t>(cell);
    auto dir = cell_dir(config, "pattern|rep=" + std::to_string(rep));
    if (!dir.empty()) {
      if (auto rows = cached_rows(dir)) {
        cells[cell] = std::move(*rows);
        return;
      }
    }

    Dataset data = make_dataset(config, rep, 0);
    if (!dir.empty()) {
      persist_dataset(dir, data);
    }
    const auto& real = data.simulation.real_sessions;

    struct PerHeuristic {
      std::vector<Session> sessions;
      double accuracy = 0.0;
      double recon_ms = 0.0;
    };
    std::vector<PerHeuristic> recon_out(n_h);
    for (std::size_t hi = 0; hi < n_h; ++hi) {
      auto started = std::chrono::steady_clock::now();
      recon::ReconstructionParams rp = config.reconstruction;
      rp.heuristic = recon::kAllHeuristics[hi];
      recon_out[hi].sessions =
          recon::reconstruct_all(data.streams, data.topology, rp);
      recon_out[hi].accuracy =
          real.empty() ? 0.0
                       : eval::session_accuracy(real, recon_out[hi].sessions);
      recon_out[hi].recon_ms = elapsed_ms(started);
      if (!dir.empty()) {
        save_sessions(recon_out[hi].sessions,
                      dir / ("sessions_" +
                             std::string(recon::to_string(rp.heuristic)) + ".txt"));
      }
    }

    std::vector<ResultRow> rows;
    for (double value : config.values) {
      mine::MiningParams mp = config.mining;
      mp.min_support = value;
      std::vector<mine::Pattern> truth;
      if (!real.empty()) {
        truth = mine::sequential_apriori(mp, real, data.topology).maximal;
      }
      const std::string tag = fmt("%.6f", value);
      if (!dir.empty()) {
        write_text(dir / ("patterns_real_" + tag + ".txt"),
                   [&](std::ostream& out) { mine::write_patterns(out, truth); });
      }
      for (std::size_t hi = 0; hi < n_h; ++hi) {
        auto started = std::chrono::steady_clock::now();
        std::vector<mine::Pattern> found;
        if (!recon_out[hi].sessions.empty()) {
          found = mine::sequential_apriori(mp, recon_out[hi].sessions,
                                           data.topology)
                      .maximal;
        }
        std::optional<double> accuracy;
        if (!truth.empty()) {
          accuracy = eval::pattern_accuracy(truth, found);
        }
        const recon::Heuristic h = recon::kAllHeuristics[hi];
        rows.push_back({config.swept, value, h, rep, recon_out[hi].accuracy,
                        accuracy, recon_out[hi].recon_ms + elapsed_ms(started)});
        if (!dir.empty()) {
          write_text(dir / ("patterns_" + std::string(recon::to_string(h)) +
                            "_" + tag + ".txt"),
                     [&](std::ostream& out) { mine::write_patterns(out, found); });
        }
      }
    }
    if (!dir.empty()) {
      persist_rows(dir, rows);
    }
    cells[cell] = std::move(rows);
  });

  std::vector<ResultRow> out;
  out.reserve(n_values * n_h * config.replications);
  for (std::size_t vi = 0; vi < n_values; ++vi) {
    for (std::size_t hi = 0; hi < n_h; ++hi) {
      for (std::uint32_t rep = 0; rep < config.replications; ++rep) {
        out.push_back(cells[rep][vi * n_h + hi]);
      }
    }
  }
  return out;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  return config.swept == SweptVar::kMinSupport ? run_pattern_sweep(config)
                                               : run_session_sweep(config);
}

std::string csv_header() {
  return "swept_var,value,heuristic,replication,session_accuracy,"
         "pattern_accuracy,runtime_ms";
}

std::string to_csv(const ResultRow& row) {
  std::string out(to_string(row.swept));
  out += ',' + fmt("%.6g", row.value);
  out += ',' + std::string(recon::to_string(row.heuristic));
  out += ',' + std::to_string(row.replication);
  out += ',' + fmt("%.6f", row.session_accuracy);
  out += ',' + (row.pattern_accuracy ? fmt("%.6f", *row.pattern_accuracy) : "");
  out += ',' + fmt("%.3f", row.runtime_ms);
  return out;
}

void write_results(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << csv_header() << '\n';
  for (const auto& row : rows) {
    out << to_csv(row) << '\n';
  }
}

std::vector<ResultRow> read_results(std::istream& in) {
  std::vector<ResultRow> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line_no == 1 && line == csv_header())) {
      continue;
    }
    auto f = split_csv(line);
    if (f.size() != 7) {
      throw FormatError(line_no, "expected 7 CSV fields");
    }
    ResultRow row;
    auto swept = parse_swept_var(f[0]);
    auto h = recon::parse_heuristic(f[2]);
    if (!swept || !h) {
      throw FormatError(line_no, "bad swept variable or heuristic");
    }
    row.swept = *swept;
    row.value = parse_double(f[1], line_no);
    row.heuristic = *h;
    row.replication = parse_integer<std::uint32_t>(f[3], line_no);
    row.session_accuracy = parse_double(f[4], line_no);
    if (!f[5].empty()) {
      row.pattern_accuracy = parse_double(f[5], line_no);
    }
    row.runtime_ms = parse_double(f[6], line_no);
    out.push_back(row);
  }
  return out;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  struct Acc {
    std::vector<double> session, pattern;
  };
  // Keyed by first appearance so the summary follows the result order.
  std::vector<std::tuple<SweptVar, double, recon::Heuristic>> keys;
  std::map<std::tuple<int, double, std::size_t>, std::pair<std::size_t, Acc>> acc;
  for (const auto& r : rows) {
    auto key = std::make_tuple(static_cast<int>(r.swept), r.value,
                               heuristic_rank(r.heuristic));
    auto [it, inserted] = acc.try_emplace(key, keys.size(), Acc{});
    if (inserted) {
      keys.emplace_back(r.swept, r.value, r.heuristic);
    }
    it->second.second.session.push_back(r.session_accuracy);
    if (r.pattern_accuracy) {
      it->second.second.pattern.push_back(*r.pattern_accuracy);
    }
  }
  auto mean_sd = [](const std::vector<double>& v) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    return std::make_pair(mean, sd);
  };
  std::vector<SummaryRow> out(keys.size());
  for (const auto& [key, entry] : acc) {
    const auto& [index, a] = entry;
    SummaryRow& s = out[index];
    std::tie(s.swept, s.value, s.heuristic) = keys[index];
    s.n = a.session.size();
    std::tie(s.session_mean, s.session_sd) = mean_sd(a.session);
    if (!a.pattern.empty()) {
      auto [m, sd] = mean_sd(a.pattern);
      s.pattern_mean = m;
      s.pattern_sd = sd;
    }
  }
  return out;
}

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "swept_var,value,heuristic,n,session_accuracy_mean,"
         "session_accuracy_sd,pattern_accuracy_mean,pattern_accuracy_sd\n";
  for (const auto& s : rows) {
    out << to_string(s.swept) << ',' << fmt("%.6g", s.value) << ','
        << recon::to_string(s.heuristic) << ',' << s.n << ','
        << fmt("%.6f", s.session_mean) << ',' << fmt("%.6f", s.session_sd)
        << ',' << (s.pattern_mean ? fmt("%.6f", *s.pattern_mean) : "") << ','
        << (s.pattern_sd ? fmt("%.6f", *s.pattern_sd) : "") << '\n';
  }
}

double parse_duration(std::string_view text) {
  text = trim(text);
  double scale = 1.0;
  if (!text.empty()) {
    switch (text.back()) {
      case 's':
        text.remove_suffix(1);
        break;
      case 'm':
        scale = 60.0;
        text.remove_suffix(1);
        break;
      case 'h':
        scale = 3600.0;
        text.remove_suffix(1);
        break;
      default:
        break;
    }
  }
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() ||
      !(v >= 0)) {
    throw std::invalid_argument("bad duration '" + std::string(text) + "'");
  }
  return v * scale;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::optional<SweptVar> swept;
  std::optional<int> experiment;
  bool have_values = false;
  std::string preset;
  std::string raw;
  std::size_t line_no = 0;

  auto duration = [&](std::string_view v) {
    try {
      return parse_duration(v);
    } catch (const std::invalid_argument& e) {
      throw FormatError(line_no, e.what());
    }
  };
  auto boolean = [&](std::string_view v) {
    v = trim(v);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw FormatError(line_no, "bad boolean '" + std::string(v) + "'");
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError(line_no, "expected key=value");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));

    if (key == "sweep") {
      if (swept) {
        throw FormatError(line_no, "only one swept variable is allowed");
      }
      swept = parse_swept_var(value);
      if (!swept) {
        throw FormatError(line_no, "sweep must be stp, lpp, nip or min_support");
      }
    } else if (key == "values") {
      c.values = parse_list(value, line_no);
      have_values = true;
    } else if (key == "experiment") {
      experiment = parse_integer<int>(value, line_no);
    } else if (key == "support_preset") {
      preset = std::string(value);
      if (preset != "literal" && preset != "fraction") {
        throw FormatError(line_no, "support_preset must be literal or fraction");
      }
    } else if (key == "pages") {
      c.topology.n_pages = parse_integer<std::uint32_t>(value, line_no);
    } else if (key == "outdegree") {
      c.topology.avg_outdegree = parse_double(value, line_no);
    } else if (key == "entry_fraction") {
      c.topology.entry_fraction = parse_double(value, line_no);
    } else if (key == "stp") {
      c.simulation.stp = parse_double(value, line_no);
    } else if (key == "lpp") {
      c.simulation.lpp = parse_double(value, line_no);
    } else if (key == "nip") {
      c.simulation.nip = parse_double(value, line_no);
    } else if (key == "mean_stay") {
      c.simulation.mean_stay = duration(value);
    } else if (key == "sd_stay") {
      c.simulation.sd_stay = duration(value);
    } else if (key == "max_gap") {
      c.simulation.max_gap = duration(value);
    } else if (key == "agents") {
      c.simulation.n_agents = parse_integer<std::uint32_t>(value, line_no);
    } else if (key == "rho") {
      c.reconstruction.page_stay_rho = std::llround(duration(value));
    } else if (key == "delta") {
      c.reconstruction.session_duration_delta = std::llround(duration(value));
    } else if (key == "min_support") {
      c.mining.min_support = parse_double(value, line_no);
    } else if (key == "max_length") {
      c.mining.max_length = parse_integer<std::uint32_t>(value, line_no);
    } else if (key == "strict_support") {
      c.mining.strict_threshold = boolean(value);
    } else if (key == "replications") {
      c.replications = parse_integer<std::uint32_t>(value, line_no);
    } else if (key == "seed") {
      c.seed = parse_integer<std::uint64_t>(value, line_no);
    } else if (key == "jobs") {
      c.jobs = parse_integer<unsigned>(value, line_no);
    } else if (key == "artifacts") {
      c.artifacts_dir = std::string(value);
    } else {
      throw FormatError(line_no, "unknown key '" + key + "'");
    }
  }

  if (experiment) {
    BehaviourSetting b;
    try {
      b = pattern_experiment(*experiment);
    } catch (const std::invalid_argument& e) {
      throw FormatError(0, e.what());
    }
    c.simulation.stp = b.stp;
    c.simulation.lpp = b.lpp;
    c.simulation.nip = b.nip;
    if (swept && *swept != SweptVar::kMinSupport) {
      throw FormatError(0, "experiment presets sweep min_support");
    }
    swept = SweptVar::kMinSupport;
  }
  if (!swept) {
    throw FormatError(0, "missing 'sweep' key");
  }
  c.swept = *swept;
  if (!have_values && c.swept == SweptVar::kMinSupport) {
    c.values = preset == "fraction" ? kFractionSupportSweep : kLiteralSupportSweep;
    have_values = true;
  }
  if (!have_values) {
    throw FormatError(0, "missing 'values' key");
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(0, e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return parse_config(in);
}

}  // namespace wum::runner
