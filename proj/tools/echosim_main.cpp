#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "echosim/experiments.hpp"
#include "echosim/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read " + path);
  std::ostringstream oss;
  oss << in.rdbuf();
  if (in.bad()) throw std::ios_base::failure("read failure on " + path);
  return oss.str();
}

void print_summary(std::ostream& out, const echosim::RunResult& r) {
  const echosim::Metrics& m = r.metrics;
  out << "seed " << r.config.seed << ": " << r.trace.size() << " records";
  if (m.accepts || m.rejects() || m.aborts)
    out << ", accept " << m.accepts << ", reject " << m.rejects() << ", abort " << m.aborts;
  if (m.processed || m.dropped || m.rejected_hash || m.expired_windows)
    out << ", processed " << m.processed << ", dropped " << m.dropped + m.expired_windows
        << ", hash-rejected " << m.rejected_hash;
  if (m.grants_prover || m.grants_adversary || m.denies)
    out << ", grants " << m.grants_prover << "+" << m.grants_adversary << " (adv), denies "
        << m.denies;
  out << "\n";
  for (const echosim::VerdictEntry& e : r.verdicts)
    out << "  " << echosim::render_verdict(e) << "\n";
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            const std::string& out_path, bool quiet) {
  const echosim::ScenarioConfig parsed = [&] {
    echosim::ScenarioConfig c = echosim::parse_scenario(read_file(scenario_path));
    if (seed) c.seed = *seed;
    return c;
  }();

  const echosim::RunResult result = echosim::run_scenario(parsed);

  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open " + out_path);
    echosim::write_trace(out, result.config, result.trace);
    out.flush();
    if (!out) throw std::ios_base::failure("write failure on " + out_path);
  } else if (!quiet) {
    echosim::write_trace(std::cout, result.config, result.trace);
  }
  if (!quiet) print_summary(std::cerr, result);
  return kExitOk;
}

int cmd_sweep(const std::string& scenario_path, std::size_t seeds,
              std::optional<std::uint64_t> base, const std::string& out_dir, bool serial,
              bool quiet) {
  const echosim::ScenarioConfig cfg = echosim::parse_scenario(read_file(scenario_path));
  const std::uint64_t base_seed = base ? *base : cfg.seed;
  const auto entries = echosim::run_sweep(cfg, base_seed, seeds, !serial);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    // Per-seed trace files; the sweep itself keeps only metrics.
    for (const echosim::SweepEntry& e : entries) {
      echosim::ScenarioConfig c = cfg;
      c.seed = e.seed;
      const echosim::RunResult r = echosim::run_scenario(c);
      const std::string path = out_dir + "/seed_" + std::to_string(e.seed) + ".jsonl";
      std::ofstream out(path, std::ios::binary);
      if (!out) throw std::ios_base::failure("cannot open " + path);
      echosim::write_trace(out, r.config, r.trace);
      if (!out) throw std::ios_base::failure("write failure on " + path);
    }
  }

  echosim::Metrics total;
  for (const echosim::SweepEntry& e : entries) {
    if (!quiet) {
      std::cout << "seed " << e.seed << ":";
      for (const std::string& v : e.verdicts) std::cout << " " << v;
      std::cout << "\n";
    }
    total.accepts += e.metrics.accepts;
    total.rejects_nonce += e.metrics.rejects_nonce;
    total.rejects_too_slow += e.metrics.rejects_too_slow;
    total.rejects_timeout += e.metrics.rejects_timeout;
    total.aborts += e.metrics.aborts;
    total.processed += e.metrics.processed;
    total.dropped += e.metrics.dropped;
    total.rejected_hash += e.metrics.rejected_hash;
    total.expired_windows += e.metrics.expired_windows;
    total.grants_prover += e.metrics.grants_prover;
    total.grants_adversary += e.metrics.grants_adversary;
    total.denies += e.metrics.denies;
  }
  std::cout << "sweep of " << seeds << " seeds from " << base_seed << ": accepts "
            << total.accepts << ", rejects " << total.rejects() << ", aborts " << total.aborts
            << ", processed " << total.processed << ", dropped "
            << total.dropped + total.expired_windows << ", hash-rejected " << total.rejected_hash
            << ", grants " << total.grants_prover << "+" << total.grants_adversary
            << " (adv), denies " << total.denies << "\n";
  return kExitOk;
}

int cmd_matrix(int runs, const std::string& out_path, bool quiet) {
  const auto cells = echosim::attack_matrix(runs, true);
  const std::string table = echosim::render_matrix(cells);
  if (!quiet) std::cout << table;
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open " + out_path);
    out << table;
    if (!out) throw std::ios_base::failure("write failure on " + out_path);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator of ultrasound time-of-flight location verification,\n"
               "its one-way variant, and impersonation attacks against the access-control flow"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::size_t seeds = 1;
  std::optional<std::uint64_t> base_seed;
  bool quiet = false, serial = false;
  int runs = 100;

  CLI::App* run = app.add_subcommand("run", "run one scenario and emit its trace");
  run->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--out", out_path, "write the trace here instead of stdout");
  run->add_flag("--quiet", quiet, "suppress the summary (and stdout trace)");

  CLI::App* sweep = app.add_subcommand("sweep", "run a scenario across many seeds");
  sweep->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
  sweep->add_option("--seeds", seeds, "number of seeds")->required();
  sweep->add_option("--seed-base", base_seed, "first seed (default: scenario seed)");
  sweep->add_option("--out-dir", out_dir, "write per-seed trace files here");
  sweep->add_flag("--serial", serial, "disable the parallel sweep path");
  sweep->add_flag("--quiet", quiet, "only print the aggregate line");

  CLI::App* matrix = app.add_subcommand("matrix", "attack-success grid over the scenario families");
  matrix->add_option("--runs", runs, "seeded runs per cell")->check(CLI::PositiveNumber);
  matrix->add_option("--out", out_path, "also write the table here");
  matrix->add_flag("--quiet", quiet, "suppress stdout table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(scenario_path, seed, out_path, quiet);
    if (sweep->parsed()) return cmd_sweep(scenario_path, seeds, base_seed, out_dir, serial, quiet);
    if (matrix->parsed()) return cmd_matrix(runs, out_path, quiet);
  } catch (const echosim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
