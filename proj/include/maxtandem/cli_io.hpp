#pragma once

/**
 * @file cli_io.hpp
 * @brief Run configuration, service-time sources, traces and result files.
 *
 * Service times drawn from a random source are a pure function of
 * (seed, station i, customer k):
 *
 *     z = mix(seed XOR mix((k << 32) | i))        i, k 1-based
 *     u = (z >> 11) * 2^-53                       u in [0, 1)
 *
 * where mix is the SplitMix64 finaliser
 *
 *     z += 0x9E3779B97F4A7C15
 *     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
 *     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
 *     z =  z ^ (z >> 31)
 *
 * uniform(lower, upper) yields lower + (upper - lower) * u and
 * exponential(rate) yields -log1p(-u) / rate. With integer_times the
 * sample is rounded to the nearest integer, halves away from zero.
 */

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maxtandem/sim_engine.hpp"
#include "maxtandem/tandem_models.hpp"

namespace maxtandem {

enum class SourceKind { trace, constant, uniform, exponential };
enum class Strategy { serial, sparse_closed, vector, batched, oracle };

std::string to_string(Strategy s);

struct ServiceTimeSource {
  SourceKind kind = SourceKind::constant;
  std::filesystem::path path;  // trace
  std::vector<double> value;   // constant: one entry, or one per station
  double lower = 0.0;          // uniform
  double upper = 1.0;
  double rate = 1.0;  // exponential
  std::uint64_t seed = 0;
  bool integer_times = false;
};

struct MeasureSet {
  bool departures = true;
  bool sojourn = false;
  bool waiting = false;
};

struct RunConfig {
  TandemSpec spec;
  ServiceTimeSource source;
  Strategy strategy = Strategy::serial;
  std::size_t processors = 0;  // batched only
  MeasureSet measures;
  bool count_ops = false;
  std::filesystem::path output = "departures.csv";
};

// Parses and validates a JSON configuration document. Throws ConfigError
// naming the offending key path.
RunConfig parse_config(std::string_view document);
// Cross-field checks; parse_config calls this, callers that modify a config
// afterwards should call it again.
void validate_config(const RunConfig& config);

std::uint64_t mix64(std::uint64_t z);
// Uniform variate in [0, 1) for (seed, station, customer).
double unit_draw(std::uint64_t seed, std::size_t station, std::size_t customer);

// Materialises the source for n stations and K customers. Trace sources
// are loaded from disk and must match (n, K).
ServiceTimes generate_service_times(const ServiceTimeSource& source, std::size_t n,
                                    std::size_t customers);

// CSV with header `k,i,tau`. Without expected dimensions they are inferred
// from the largest indices present. Throws IoError when unreadable and
// DomainError for malformed content.
ServiceTimes load_trace(const std::filesystem::path& path,
                        std::optional<std::size_t> stations = std::nullopt,
                        std::optional<std::size_t> customers = std::nullopt);
ServiceTimes parse_trace(std::string_view text,
                         std::optional<std::size_t> stations = std::nullopt,
                         std::optional<std::size_t> customers = std::nullopt);
std::string format_trace(const ServiceTimes& tau);
void write_trace(const std::filesystem::path& path, const ServiceTimes& tau);

Trajectory simulate(const RunConfig& config, const ServiceTimes& tau);

// `k,d_1,...,d_n` for k = 1..K; augmented history is omitted.
std::string format_departures_csv(const Trajectory& traj);
// `k,<prefix>_1,...` for k = 1..K from rows indexed k - 1.
std::string format_vectors_csv(const std::vector<Vector>& rows, std::string_view prefix);
std::string format_ops_report(const Trajectory& traj, Strategy strategy,
                              std::size_t processors);

struct RunArtifacts {
  std::vector<std::filesystem::path> written;
  std::string ops_report;
};

// Simulates and writes the departures CSV plus any requested measure CSVs
// (`<stem>.sojourn.csv`, `<stem>.waiting.csv`) and, with count_ops, the
// operation report (`<stem>.ops.txt`). Throws IoError on write failure.
RunArtifacts run(const RunConfig& config);

struct ValidationOutcome {
  std::size_t trials = 0;
  std::optional<Mismatch> mismatch;
  std::uint64_t failing_seed = 0;
};

// Compares the configured matrix strategy against the scalar oracle. Random
// sources use seeds seed, seed+1, ...; deterministic sources run once.
ValidationOutcome validate_run(const RunConfig& config, std::size_t trials);

struct BenchRow {
  std::size_t n = 0;
  std::size_t horizon = 0;
  std::size_t processors = 0;
  std::uint64_t serial_ops = 0;
  std::uint64_t serial_formula = 0;  // K (n(n+1)/2 + n^2)
  std::uint64_t vector_ops = 0;
  std::uint64_t vector_build = 0;
  std::uint64_t vector_reduce = 0;
  double vector_reduce_ideal = 0.0;  // K (n + log2 n!)
  std::uint64_t batches = 0;
  std::uint64_t parallel_ops = 0;
  std::uint64_t parallel_formula = 0;  // L (n(n+1)/2 + 2Pn)
  double speedup_vector = 0.0;        // n(3n+1) / (log2(n!)/2 + n)
  double speedup_parallel = 0.0;      // 3P/5
};

// Open-infinite operation counts for every (n, K, P) combination.
std::vector<BenchRow> bench(const std::vector<std::size_t>& n_list,
                            const std::vector<std::size_t>& k_list,
                            const std::vector<std::size_t>& p_list);
std::string format_bench_csv(const std::vector<BenchRow>& rows);

// log2(n!) via lgamma.
double log2_factorial(std::size_t n);

}  // namespace maxtandem
