#include "maxtandem/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "json.hpp"
#include "maxtandem/errors.hpp"
#include "maxtandem/performance_measures.hpp"

namespace maxtandem {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

void reject_unknown(const json& obj, const std::string& prefix,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(prefix + key, "unknown key");
    }
  }
}

std::size_t get_count(const json& v, const std::string& key, std::size_t min) {
  if (!v.is_number_integer()) fail(key, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < static_cast<std::int64_t>(min)) fail(key, "must be >= " + std::to_string(min));
  return static_cast<std::size_t>(x);
}

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(key, "must be finite");
  return x;
}

bool get_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) fail(key, "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}

// Integer or array of integers, expanded to `count` entries.
std::vector<std::size_t> get_uniform_or_list(const json& v, const std::string& key,
                                             std::size_t count, std::size_t min) {
  if (v.is_array()) {
    if (v.size() != count) {
      fail(key, "expected " + std::to_string(count) + " entries, got " +
                    std::to_string(v.size()));
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i)
      out.push_back(get_count(v[i], key + "[" + std::to_string(i) + "]", min));
    return out;
  }
  return std::vector<std::size_t>(count, get_count(v, key, min));
}

ServiceTimeSource parse_source(const json& v, std::size_t n) {
  if (!v.is_object()) fail("source", "expected an object");
  if (!v.contains("kind")) fail("source.kind", "missing");
  const std::string kind = get_string(v["kind"], "source.kind");
  ServiceTimeSource src;
  auto seed = [&] {
    if (!v.contains("seed")) return std::uint64_t{0};
    if (!v["seed"].is_number_unsigned() && !v["seed"].is_number_integer())
      fail("source.seed", "expected a nonnegative integer");
    if (v["seed"].is_number_integer() && v["seed"].get<std::int64_t>() < 0)
      fail("source.seed", "expected a nonnegative integer");
    return v["seed"].get<std::uint64_t>();
  };
  if (kind == "trace") {
    reject_unknown(v, "source.", {"kind", "path"});
    src.kind = SourceKind::trace;
    if (!v.contains("path")) fail("source.path", "missing");
    src.path = get_string(v["path"], "source.path");
  } else if (kind == "constant") {
    reject_unknown(v, "source.", {"kind", "value"});
    src.kind = SourceKind::constant;
    if (!v.contains("value")) fail("source.value", "missing");
    const json& val = v["value"];
    if (val.is_array()) {
      if (val.size() != n) {
        fail("source.value", "expected " + std::to_string(n) + " entries, got " +
                                 std::to_string(val.size()));
      }
      for (std::size_t i = 0; i < val.size(); ++i)
        src.value.push_back(get_number(val[i], "source.value[" + std::to_string(i) + "]"));
    } else {
      src.value.push_back(get_number(val, "source.value"));
    }
    for (double x : src.value)
      if (x < 0.0) fail("source.value", "service times must be >= 0");
  } else if (kind == "uniform") {
    reject_unknown(v, "source.", {"kind", "lower", "upper", "seed"});
    src.kind = SourceKind::uniform;
    if (!v.contains("lower")) fail("source.lower", "missing");
    if (!v.contains("upper")) fail("source.upper", "missing");
    src.lower = get_number(v["lower"], "source.lower");
    src.upper = get_number(v["upper"], "source.upper");
    if (src.lower < 0.0) fail("source.lower", "must be >= 0");
    if (src.upper < src.lower) fail("source.upper", "must be >= source.lower");
    src.seed = seed();
  } else if (kind == "exponential") {
    reject_unknown(v, "source.", {"kind", "rate", "seed"});
    src.kind = SourceKind::exponential;
    if (!v.contains("rate")) fail("source.rate", "missing");
    src.rate = get_number(v["rate"], "source.rate");
    if (src.rate <= 0.0) fail("source.rate", "must be > 0");
    src.seed = seed();
  } else {
    fail("source.kind", "unknown kind '" + kind + "'");
  }
  return src;
}

Variant parse_variant(const std::string& s) {
  if (s == "closed") return Variant::closed;
  if (s == "open_infinite") return Variant::open_infinite;
  if (s == "open_mfg") return Variant::open_manufacturing;
  if (s == "open_comm") return Variant::open_communication;
  fail("variant", "unknown variant '" + s + "'");
}

Strategy parse_strategy(const std::string& s) {
  if (s == "serial") return Strategy::serial;
  if (s == "sparse-closed") return Strategy::sparse_closed;
  if (s == "vector") return Strategy::vector;
  if (s == "batched") return Strategy::batched;
  if (s == "oracle") return Strategy::oracle;
  fail("strategy", "unknown strategy '" + s + "'");
}

bool uniform_values(const std::vector<std::size_t>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

std::filesystem::path sibling(const std::filesystem::path& out, std::string_view suffix) {
  std::filesystem::path p = out;
  p.replace_filename(out.stem().string() + std::string(suffix));
  return p;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

double round_half_away(double x) { return std::round(x); }

}  // namespace

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::serial: return "serial";
    case Strategy::sparse_closed: return "sparse-closed";
    case Strategy::vector: return "vector";
    case Strategy::batched: return "batched";
    case Strategy::oracle: return "oracle";
  }
  return "unknown";
}

RunConfig parse_config(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  reject_unknown(doc, "", {"variant", "n", "K", "c", "b", "initial_state", "source",
                           "integer_times", "strategy", "processors", "measures",
                           "count_ops", "output"});

  RunConfig cfg;
  TandemSpec& spec = cfg.spec;
  if (!doc.contains("variant")) fail("variant", "missing");
  if (!doc.contains("n")) fail("n", "missing");
  if (!doc.contains("K")) fail("K", "missing");
  if (!doc.contains("source")) fail("source", "missing");
  spec.variant = parse_variant(get_string(doc["variant"], "variant"));
  spec.n = get_count(doc["n"], "n", 1);
  spec.horizon = get_count(doc["K"], "K", 1);

  if (spec.variant == Variant::closed) {
    if (doc.contains("b")) fail("b", "buffer capacities apply to open_mfg/open_comm only");
    spec.population = doc.contains("c") ? get_uniform_or_list(doc["c"], "c", spec.n, 1)
                                        : std::vector<std::size_t>(spec.n, 1);
  } else {
    if (doc.contains("c")) fail("c", "populations apply to the closed variant only");
    if (spec.is_blocking()) {
      const std::size_t slots = spec.n - 1;
      spec.capacity = doc.contains("b") ? get_uniform_or_list(doc["b"], "b", slots, 0)
                                        : std::vector<std::size_t>(slots, 0);
    } else if (doc.contains("b")) {
      fail("b", "buffer capacities apply to open_mfg/open_comm only");
    }
  }

  if (doc.contains("initial_state")) {
    const std::string s = get_string(doc["initial_state"], "initial_state");
    if (s == "e" || s == "unit") {
      spec.initial_state = InitialState::unit;
    } else if (s == "epsilon" || s == "eps") {
      spec.initial_state = InitialState::epsilon;
    } else {
      fail("initial_state", "expected \"e\" or \"epsilon\"");
    }
  }

  cfg.source = parse_source(doc["source"], spec.n);
  if (doc.contains("integer_times"))
    cfg.source.integer_times = get_bool(doc["integer_times"], "integer_times");

  if (doc.contains("strategy"))
    cfg.strategy = parse_strategy(get_string(doc["strategy"], "strategy"));
  if (doc.contains("processors")) cfg.processors = get_count(doc["processors"], "processors", 1);

  if (doc.contains("measures")) {
    const json& m = doc["measures"];
    if (!m.is_array()) fail("measures", "expected an array of names");
    cfg.measures = MeasureSet{false, false, false};
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::string key = "measures[" + std::to_string(i) + "]";
      const std::string name = get_string(m[i], key);
      if (name == "departures") {
        cfg.measures.departures = true;
      } else if (name == "sojourn") {
        cfg.measures.sojourn = true;
      } else if (name == "waiting") {
        cfg.measures.waiting = true;
      } else {
        fail(key, "unknown measure '" + name + "'");
      }
    }
  }
  if (doc.contains("count_ops")) cfg.count_ops = get_bool(doc["count_ops"], "count_ops");
  if (doc.contains("output")) cfg.output = get_string(doc["output"], "output");

  validate_config(cfg);
  return cfg;
}

void validate_config(const RunConfig& cfg) {
  const TandemSpec& spec = cfg.spec;
  spec.validate();
  if (cfg.strategy != Strategy::oracle) {
    if (spec.variant == Variant::closed && !uniform_values(spec.population))
      fail("c", "heterogeneous populations need strategy \"oracle\"");
    if (spec.is_blocking() && !uniform_values(spec.capacity))
      fail("b", "heterogeneous capacities need strategy \"oracle\"");
    if (spec.n < 2 && spec.variant != Variant::open_infinite)
      fail("n", "n = 1 is supported for open_infinite only");
  }
  if (cfg.strategy == Strategy::sparse_closed &&
      !(spec.variant == Variant::closed &&
        std::all_of(spec.population.begin(), spec.population.end(),
                    [](std::size_t c) { return c == 1; }))) {
    fail("strategy", "sparse-closed requires variant \"closed\" with c = 1");
  }
  if (cfg.strategy == Strategy::batched) {
    if (cfg.processors < 1) fail("processors", "batched strategy requires processors >= 1");
  } else if (cfg.processors != 0) {
    fail("processors", "applies to the batched strategy only");
  }
  if (cfg.measures.sojourn || cfg.measures.waiting) {
    if (!spec.is_open()) fail("measures", "sojourn/waiting require an open variant");
    if (spec.initial_state != InitialState::unit)
      fail("measures", "sojourn/waiting require initial_state \"e\"");
  }
  if (cfg.source.kind == SourceKind::constant && cfg.source.value.size() != 1 &&
      cfg.source.value.size() != spec.n) {
    fail("source.value", "expected one value or one per station");
  }
}

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit_draw(std::uint64_t seed, std::size_t station, std::size_t customer) {
  const std::uint64_t counter =
      (static_cast<std::uint64_t>(customer) << 32) | static_cast<std::uint64_t>(station);
  const std::uint64_t z = mix64(seed ^ mix64(counter));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

ServiceTimes generate_service_times(const ServiceTimeSource& source, std::size_t n,
                                    std::size_t customers) {
  if (source.kind == SourceKind::trace) {
    ServiceTimes tau = load_trace(source.path, n, customers);
    if (source.integer_times) {
      for (std::size_t k = 1; k <= customers; ++k)
        for (std::size_t i = 1; i <= n; ++i)
          tau.set(i, k, round_half_away(tau.at(i, k).value()));
    }
    return tau;
  }
  ServiceTimes tau(n, customers);
  for (std::size_t k = 1; k <= customers; ++k) {
    for (std::size_t i = 1; i <= n; ++i) {
      double x = 0.0;
      switch (source.kind) {
        case SourceKind::constant:
          x = source.value.size() == 1 ? source.value[0] : source.value.at(i - 1);
          break;
        case SourceKind::uniform:
          x = source.lower + (source.upper - source.lower) * unit_draw(source.seed, i, k);
          break;
        case SourceKind::exponential:
          x = -std::log1p(-unit_draw(source.seed, i, k)) / source.rate;
          break;
        case SourceKind::trace:
          break;
      }
      if (source.integer_times) x = round_half_away(x);
      tau.set(i, k, x);
    }
  }
  return tau;
}

ServiceTimes parse_trace(std::string_view text, std::optional<std::size_t> stations,
                         std::optional<std::size_t> customers) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::map<std::pair<std::size_t, std::size_t>, double> cells;  // (k, i)
  std::size_t max_i = 0;
  std::size_t max_k = 0;
  auto parse_index = [&](const std::string& tok, const char* name) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != tok.size() || v < 1) {
      throw DomainError("trace line " + std::to_string(line_no) + ": " + name + " '" + tok +
                        "' is not a positive integer");
    }
    return static_cast<std::size_t>(v);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "k,i,tau")
        throw DomainError("trace: expected header 'k,i,tau', got '" + line + "'");
      header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (fields.size() != 3) {
      throw DomainError("trace line " + std::to_string(line_no) + ": expected 3 fields");
    }
    const std::size_t k = parse_index(fields[0], "k");
    const std::size_t i = parse_index(fields[1], "i");
    Scalar tau;
    try {
      tau = parse_scalar(fields[2]);
    } catch (const DomainError&) {
      throw DomainError("trace line " + std::to_string(line_no) + ": malformed tau '" +
                        fields[2] + "'");
    }
    if (tau.is_epsilon() || tau.value() < 0.0) {
      throw DomainError("trace line " + std::to_string(line_no) + ": tau = " + fields[2] +
                        " is not a finite nonnegative time");
    }
    if (!cells.emplace(std::pair{k, i}, tau.value()).second) {
      throw DomainError("trace line " + std::to_string(line_no) + ": duplicate row (k=" +
                        std::to_string(k) + ", i=" + std::to_string(i) + ")");
    }
    max_i = std::max(max_i, i);
    max_k = std::max(max_k, k);
  }
  if (!header) throw DomainError("trace: missing header 'k,i,tau'");
  const std::size_t n = stations.value_or(max_i);
  const std::size_t horizon = customers.value_or(max_k);
  if (max_i > n || max_k > horizon) {
    throw DomainError("trace: rows extend beyond " + std::to_string(n) + " stations x " +
                      std::to_string(horizon) + " customers");
  }
  ServiceTimes out(n, horizon);
  for (std::size_t k = 1; k <= horizon; ++k) {
    for (std::size_t i = 1; i <= n; ++i) {
      const auto it = cells.find({k, i});
      if (it == cells.end()) {
        throw DomainError("trace: missing row (k=" + std::to_string(k) +
                          ", i=" + std::to_string(i) + ")");
      }
      out.set(i, k, it->second);
    }
  }
  return out;
}

ServiceTimes load_trace(const std::filesystem::path& path,
                        std::optional<std::size_t> stations,
                        std::optional<std::size_t> customers) {
  return parse_trace(read_file(path), stations, customers);
}

std::string format_trace(const ServiceTimes& tau) {
  std::string out = "k,i,tau\n";
  for (std::size_t k = 1; k <= tau.customers(); ++k) {
    for (std::size_t i = 1; i <= tau.stations(); ++i) {
      out += std::to_string(k) + "," + std::to_string(i) + "," +
             format_scalar(tau.at(i, k)) + "\n";
    }
  }
  return out;
}

void write_trace(const std::filesystem::path& path, const ServiceTimes& tau) {
  write_file(path, format_trace(tau));
}

Trajectory simulate(const RunConfig& config, const ServiceTimes& tau) {
  switch (config.strategy) {
    case Strategy::serial: return simulate_serial(config.spec, tau);
    case Strategy::sparse_closed: return simulate_closed_sparse(config.spec, tau);
    case Strategy::vector: return simulate_vectorized(config.spec, tau);
    case Strategy::batched: return simulate_batched(config.spec, tau, config.processors);
    case Strategy::oracle: return oracle_lindley(config.spec, tau);
  }
  throw ConfigError("unknown strategy");
}

std::string format_departures_csv(const Trajectory& traj) {
  std::vector<Vector> rows;
  for (std::size_t k = 1; k <= traj.horizon(); ++k) {
    const auto d = traj.departures(k);
    rows.emplace_back(d.begin(), d.end());
  }
  return format_vectors_csv(rows, "d");
}

std::string format_vectors_csv(const std::vector<Vector>& rows, std::string_view prefix) {
  std::string out = "k";
  const std::size_t width = rows.empty() ? 0 : rows.front().size();
  for (std::size_t i = 1; i <= width; ++i) {
    out += ",";
    out += prefix;
    out += "_" + std::to_string(i);
  }
  out += "\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out += std::to_string(k + 1);
    for (Scalar x : rows[k]) out += "," + format_scalar(x);
    out += "\n";
  }
  return out;
}

double log2_factorial(std::size_t n) {
  return std::lgamma(static_cast<double>(n) + 1.0) / std::log(2.0);
}

std::string format_ops_report(const Trajectory& traj, Strategy strategy,
                              std::size_t processors) {
  const OpLedger& l = traj.ledger();
  const TandemSpec& spec = traj.spec();
  const std::uint64_t n = spec.n;
  const std::uint64_t horizon = spec.horizon;
  std::ostringstream out;
  out << "variant: " << to_string(spec.variant) << "\n"
      << "strategy: " << to_string(strategy) << "\n"
      << "n: " << n << "\n"
      << "K: " << horizon << "\n"
      << "steps: " << l.steps << "\n"
      << "scalar_oplus: " << l.scalar_oplus << "\n"
      << "scalar_otimes: " << l.scalar_otimes << "\n"
      << "vector_ops: " << l.vector_ops << "\n"
      << "parallel_ops: " << l.parallel_ops << "\n"
      << "memory_cells: " << l.memory_cells << "\n";
  const bool open_inf = spec.variant == Variant::open_infinite;
  switch (strategy) {
    case Strategy::serial:
      if (open_inf) {
        out << "formula N = K(n(n+1)/2 + n^2): " << horizon * (n * (n + 1) / 2 + n * n)
            << " (measured " << l.scalar_ops() << ")\n"
            << "formula M = n(n+5)/2: " << n * (n + 5) / 2 << "\n";
      }
      break;
    case Strategy::sparse_closed:
      out << "formula N = 2Kn: " << 2 * horizon * n << " (measured " << l.scalar_ops()
          << ")\n"
          << "formula M = 3n: " << 3 * n << "\n";
      break;
    case Strategy::vector:
      out << "vector_build_ops: " << l.vector_build_ops << "\n"
          << "vector_add_ops: " << l.vector_add_ops << "\n"
          << "vector_reduce_stages: " << l.vector_reduce_stages << "\n";
      if (open_inf) {
        const double ideal = static_cast<double>(horizon) *
                             (static_cast<double>(n) + log2_factorial(n));
        const double sv = static_cast<double>(n * (3 * n + 1)) /
                          (log2_factorial(n) / 2.0 + static_cast<double>(n));
        out << "formula N1 = Kn: " << horizon * n << "\n"
            << "formula N2 = K(n + log2(n!)): " << format_scalar(ideal)
            << " (measured " << l.vector_add_ops + l.vector_reduce_stages << ")\n"
            << "derived S_v = n(3n+1)/(log2(n!)/2+n): " << format_scalar(sv) << "\n";
      }
      break;
    case Strategy::batched: {
      const std::uint64_t batches = (horizon + processors - 1) / processors;
      out << "batches: " << l.batches << " (formula L = ceil(K/P) = " << batches << ")\n";
      if (open_inf) {
        out << "formula N = L(n(n+1)/2 + 2Pn): "
            << batches * (n * (n + 1) / 2 + 2 * processors * n) << " (measured "
            << l.parallel_ops << ")\n"
            << "derived S_P = 3P/5: " << format_scalar(3.0 * processors / 5.0) << "\n";
      }
      break;
    }
    case Strategy::oracle:
      break;
  }
  return out.str();
}

RunArtifacts run(const RunConfig& config) {
  validate_config(config);
  const ServiceTimes tau =
      generate_service_times(config.source, config.spec.n, config.spec.horizon);
  const Trajectory traj = simulate(config, tau);
  RunArtifacts art;

  if (!config.output.parent_path().empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config.output.parent_path(), ec);
    if (ec) throw IoError("cannot create '" + config.output.parent_path().string() + "'");
  }
  if (config.measures.departures) {
    write_file(config.output, format_departures_csv(traj));
    art.written.push_back(config.output);
  }
  if (config.measures.sojourn || config.measures.waiting) {
    double scale = 1.0;
    for (Scalar x : traj.departures(traj.horizon()))
      if (x.is_finite()) scale = std::max(scale, std::abs(x.value()));
    const double tolerance = config.source.integer_times ? 0.0 : 1e-9 * scale;
    const MeasureTrajectory m = measures_direct(traj, tau, tolerance);
    if (config.measures.sojourn) {
      const auto p = sibling(config.output, ".sojourn.csv");
      write_file(p, format_vectors_csv(m.sojourn, "s"));
      art.written.push_back(p);
    }
    if (config.measures.waiting) {
      const auto p = sibling(config.output, ".waiting.csv");
      write_file(p, format_vectors_csv(m.waiting, m.includes_blocking ? "wb" : "w"));
      art.written.push_back(p);
    }
  }
  if (config.count_ops) {
    art.ops_report = format_ops_report(traj, config.strategy, config.processors);
    const auto p = sibling(config.output, ".ops.txt");
    write_file(p, art.ops_report);
    art.written.push_back(p);
  }
  return art;
}

ValidationOutcome validate_run(const RunConfig& config, std::size_t trials) {
  validate_config(config);
  const bool random = config.source.kind == SourceKind::uniform ||
                      config.source.kind == SourceKind::exponential;
  const std::size_t runs = random ? std::max<std::size_t>(trials, 1) : 1;
  RunConfig matrix = config;
  if (matrix.strategy == Strategy::oracle) matrix.strategy = Strategy::serial;
  ValidationOutcome out;
  for (std::size_t t = 0; t < runs; ++t) {
    ServiceTimeSource src = config.source;
    src.seed = config.source.seed + t;
    const ServiceTimes tau = generate_service_times(src, config.spec.n, config.spec.horizon);
    const Trajectory lhs = simulate(matrix, tau);
    const Trajectory rhs = oracle_lindley(config.spec, tau);
    ++out.trials;
    if (auto mm = first_mismatch(lhs, rhs)) {
      out.mismatch = mm;
      out.failing_seed = src.seed;
      break;
    }
  }
  return out;
}

std::vector<BenchRow> bench(const std::vector<std::size_t>& n_list,
                            const std::vector<std::size_t>& k_list,
                            const std::vector<std::size_t>& p_list) {
  std::vector<BenchRow> rows;
  for (std::size_t n : n_list) {
    for (std::size_t horizon : k_list) {
      const TandemSpec spec = TandemSpec::open_infinite(n, horizon);
      ServiceTimeSource src;
      src.kind = SourceKind::uniform;
      src.lower = 0.0;
      src.upper = 10.0;
      src.integer_times = true;
      const ServiceTimes tau = generate_service_times(src, n, horizon);
      const Trajectory serial = simulate_serial(spec, tau);
      const Trajectory vec = simulate_vectorized(spec, tau);
      for (std::size_t p : p_list) {
        const Trajectory batched = simulate_batched(spec, tau, p);
        if (!identical_states(serial, batched) || !identical_states(serial, vec)) {
          throw ConsistencyError("bench: strategies disagree for n=" + std::to_string(n) +
                                 " K=" + std::to_string(horizon) + " P=" + std::to_string(p));
        }
        BenchRow r;
        r.n = n;
        r.horizon = horizon;
        r.processors = p;
        r.serial_ops = serial.ledger().scalar_ops();
        r.serial_formula = horizon * (n * (n + 1) / 2 + n * n);
        r.vector_ops = vec.ledger().vector_ops;
        r.vector_build = vec.ledger().vector_build_ops;
        r.vector_reduce = vec.ledger().vector_add_ops + vec.ledger().vector_reduce_stages;
        r.vector_reduce_ideal =
            static_cast<double>(horizon) * (static_cast<double>(n) + log2_factorial(n));
        r.batches = batched.ledger().batches;
        r.parallel_ops = batched.ledger().parallel_ops;
        const std::uint64_t l = (horizon + p - 1) / p;
        r.parallel_formula = l * (n * (n + 1) / 2 + 2 * p * n);
        r.speedup_vector = static_cast<double>(n * (3 * n + 1)) /
                           (log2_factorial(n) / 2.0 + static_cast<double>(n));
        r.speedup_parallel = 3.0 * static_cast<double>(p) / 5.0;
        rows.push_back(r);
      }
    }
  }
  return rows;
}

std::string format_bench_csv(const std::vector<BenchRow>& rows) {
  std::string out =
      "n,K,P,serial_ops,serial_formula,vector_ops,vector_build,vector_reduce,"
      "vector_reduce_ideal,batches,parallel_ops,parallel_formula,S_v,S_P\n";
  for (const BenchRow& r : rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.horizon) + "," +
           std::to_string(r.processors) + "," + std::to_string(r.serial_ops) + "," +
           std::to_string(r.serial_formula) + "," + std::to_string(r.vector_ops) + "," +
           std::to_string(r.vector_build) + "," + std::to_string(r.vector_reduce) + "," +
           format_scalar(r.vector_reduce_ideal) + "," + std::to_string(r.batches) + "," +
           std::to_string(r.parallel_ops) + "," + std::to_string(r.parallel_formula) + "," +
           format_scalar(r.speedup_vector) + "," + format_scalar(r.speedup_parallel) + "\n";
  }
  return out;
}

}  // namespace maxtandem
