// tandemsim: command-line front end for the max-plus tandem queue toolkit.
//
// Exit codes: 0 success, 1 validation mismatch, 2 configuration error,
// 3 I/O error, 4 internal invariant violation.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "maxtandem/cli_io.hpp"
#include "maxtandem/errors.hpp"

namespace mt = maxtandem;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kConfig = 2, kIo = 3, kInternal = 4 };

mt::RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw mt::IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  mt::RunConfig cfg = mt::parse_config(ss.str());
  // Trace paths are relative to the config file.
  if (cfg.source.kind == mt::SourceKind::trace && cfg.source.path.is_relative()) {
    cfg.source.path = std::filesystem::path(path).parent_path() / cfg.source.path;
  }
  return cfg;
}

mt::Strategy strategy_from(const std::string& s) {
  if (s == "serial") return mt::Strategy::serial;
  if (s == "sparse-closed") return mt::Strategy::sparse_closed;
  if (s == "vector") return mt::Strategy::vector;
  if (s == "batched") return mt::Strategy::batched;
  if (s == "oracle") return mt::Strategy::oracle;
  throw mt::ConfigError("--strategy: unknown strategy '" + s + "'");
}

template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const mt::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const mt::ConsistencyError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const mt::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-plus simulation of tandem queueing systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string strategy;
  std::size_t processors = 0;
  std::vector<std::string> measures;
  bool count_ops = false;
  auto* sim = app.add_subcommand("simulate", "Simulate departures and write CSV results");
  sim->add_option("--config", config_path, "JSON run configuration")->required();
  sim->add_option("--out", out_path, "Departures CSV path (overrides config)");
  sim->add_option("--strategy", strategy, "serial | sparse-closed | vector | batched | oracle");
  sim->add_option("--processors", processors, "Processor count P for the batched strategy");
  sim->add_option("--measures", measures, "Any of departures, sojourn, waiting")
      ->delimiter(',');
  sim->add_flag("--count-ops", count_ops, "Write the operation-count report");

  std::size_t trials = 1;
  auto* val = app.add_subcommand("validate", "Compare the matrix recursion with the oracle");
  val->add_option("--config", config_path, "JSON run configuration")->required();
  val->add_option("--trials", trials, "Number of seeds for random sources")
      ->check(CLI::PositiveNumber);

  std::vector<std::size_t> n_list;
  std::vector<std::size_t> k_list;
  std::vector<std::size_t> p_list;
  auto* bench = app.add_subcommand("bench", "Sweep operation counts of the open tandem model");
  bench->add_option("--n-list", n_list, "Station counts")->required()->delimiter(',');
  bench->add_option("--k-list", k_list, "Horizons K")->required()->delimiter(',');
  bench->add_option("--p-list", p_list, "Processor counts P")->required()->delimiter(',');
  bench->add_option("--out", out_path, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  if (*sim) {
    return guarded([&] {
      mt::RunConfig cfg = load_config(config_path);
      if (!out_path.empty()) cfg.output = out_path;
      if (!strategy.empty()) {
        cfg.strategy = strategy_from(strategy);
        if (cfg.strategy != mt::Strategy::batched) cfg.processors = 0;
      }
      if (processors != 0) cfg.processors = processors;
      if (!measures.empty()) {
        cfg.measures = mt::MeasureSet{false, false, false};
        for (const auto& m : measures) {
          if (m == "departures") {
            cfg.measures.departures = true;
          } else if (m == "sojourn") {
            cfg.measures.sojourn = true;
          } else if (m == "waiting") {
            cfg.measures.waiting = true;
          } else {
            throw mt::ConfigError("--measures: unknown measure '" + m + "'");
          }
        }
      }
      if (count_ops) cfg.count_ops = true;
      mt::validate_config(cfg);
      const mt::RunArtifacts art = mt::run(cfg);
      for (const auto& p : art.written) std::cout << "wrote " << p.string() << "\n";
      if (!art.ops_report.empty()) std::cout << art.ops_report;
      return static_cast<int>(kOk);
    });
  }

  if (*val) {
    return guarded([&] {
      const mt::RunConfig cfg = load_config(config_path);
      const mt::ValidationOutcome res = mt::validate_run(cfg, trials);
      if (res.mismatch) {
        const auto& m = *res.mismatch;
        std::cout << "MISMATCH seed=" << res.failing_seed << " k=" << m.k << " i=" << m.station
                  << " matrix=" << mt::format_scalar(m.lhs)
                  << " oracle=" << mt::format_scalar(m.rhs) << "\n";
        return static_cast<int>(kMismatch);
      }
      std::cout << "OK " << res.trials << " trial(s): matrix recursion matches oracle\n";
      return static_cast<int>(kOk);
    });
  }

  return guarded([&] {
    for (auto v : {&n_list, &k_list, &p_list})
      for (std::size_t x : *v)
        if (x == 0) throw mt::ConfigError("bench: list entries must be >= 1");
    const std::string table = mt::format_bench_csv(mt::bench(n_list, k_list, p_list));
    if (out_path.empty()) {
      std::cout << table;
    } else {
      std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
      if (!f) throw mt::IoError("cannot open '" + out_path + "' for writing");
      f << table;
      if (!f) throw mt::IoError("failed writing '" + out_path + "'");
    }
    return static_cast<int>(kOk);
  });
}
