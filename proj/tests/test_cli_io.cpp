#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "maxtandem/cli_io.hpp"
#include "maxtandem/errors.hpp"
#include "test_support.hpp"

using namespace maxtandem;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("maxtandem_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("minimal configuration and defaults", "[cli]") {
  const RunConfig cfg = parse_config(
      R"({"variant":"open_infinite","n":3,"K":10,"source":{"kind":"constant","value":1.0}})");
  CHECK(cfg.spec.variant == Variant::open_infinite);
  CHECK(cfg.spec.n == 3);
  CHECK(cfg.spec.horizon == 10);
  CHECK(cfg.spec.initial_state == InitialState::unit);
  CHECK(cfg.strategy == Strategy::serial);
  CHECK(cfg.source.kind == SourceKind::constant);
  CHECK(cfg.source.value == std::vector<double>{1.0});
  CHECK(cfg.measures.departures);
  CHECK_FALSE(cfg.measures.sojourn);
  CHECK_FALSE(cfg.count_ops);
  CHECK(cfg.output == fs::path("departures.csv"));
}

TEST_CASE("configuration fields", "[cli]") {
  const RunConfig closed = parse_config(
      R"({"variant":"closed","n":2,"c":2,"K":5,"source":{"kind":"constant","value":[1,2]}})");
  CHECK(closed.spec.population == std::vector<std::size_t>{2, 2});
  CHECK(closed.spec.arity() == 4);

  const RunConfig comm = parse_config(
      R"({"variant":"open_comm","n":4,"b":[1,1,1],"K":5,"strategy":"batched","processors":3,
          "measures":["departures","waiting"],"count_ops":true,"output":"out/x.csv",
          "initial_state":"e","integer_times":true,
          "source":{"kind":"uniform","lower":0,"upper":9,"seed":42}})");
  CHECK(comm.spec.rule() == BlockingRule::communication);
  CHECK(comm.spec.capacity == std::vector<std::size_t>{1, 1, 1});
  CHECK(comm.strategy == Strategy::batched);
  CHECK(comm.processors == 3);
  CHECK(comm.measures.waiting);
  CHECK_FALSE(comm.measures.sojourn);
  CHECK(comm.source.seed == 42);
  CHECK(comm.source.integer_times);

  const RunConfig mixed = parse_config(
      R"({"variant":"open_mfg","n":3,"b":[0,2],"K":5,"strategy":"oracle",
          "source":{"kind":"exponential","rate":0.5}})");
  CHECK(mixed.spec.capacity == std::vector<std::size_t>{0, 2});

  const RunConfig eps0 = parse_config(
      R"({"variant":"closed","n":3,"K":4,"initial_state":"epsilon",
          "source":{"kind":"trace","path":"t.csv"}})");
  CHECK(eps0.spec.initial_state == InitialState::epsilon);
  CHECK(eps0.source.path == fs::path("t.csv"));
}

TEST_CASE("configuration errors name the key", "[cli]") {
  auto error_of = [](const std::string& doc) -> std::string {
    try {
      parse_config(doc);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "no error";
  };
  const std::string src = R"("source":{"kind":"constant","value":1})";
  CHECK_THAT(error_of(R"({"variant":"open_mfg","n":3,"K":5,"b":0,"strategy":"sparse-closed",)" + src + "}"),
             Catch::Matchers::StartsWith("strategy"));
  CHECK_THAT(error_of(R"({"variant":"open_infinite","n":3,"K":5,"colour":1,)" + src + "}"),
             Catch::Matchers::StartsWith("colour: unknown key"));
  CHECK_THAT(error_of(R"({"variant":"open_infinite","n":"3","K":5,)" + src + "}"),
             Catch::Matchers::StartsWith("n: expected an integer"));
  CHECK_THAT(error_of(R"({"variant":"loop","n":3,"K":5,)" + src + "}"),
             Catch::Matchers::StartsWith("variant"));
  CHECK_THAT(error_of(R"({"variant":"open_infinite","n":3,"K":5,"source":{"kind":"constant","value":1,"seed":2}})"),
             Catch::Matchers::StartsWith("source.seed: unknown key"));
  CHECK_THAT(error_of(R"({"variant":"open_infinite","n":3,"K":5,"source":{"kind":"uniform","lower":3,"upper":1}})"),
             Catch::Matchers::StartsWith("source.upper"));
  CHECK_THAT(error_of(R"({"variant":"open_infinite","n":3,"K":5,"source":{"kind":"constant","value":[1,2]}})"),
             Catch::Matchers::StartsWith("source.value"));
  CHECK_THAT(error_of(R"({"variant":"open_infinite","n":3,"K":5,"strategy":"batched",)" + src + "}"),
             Catch::Matchers::StartsWith("processors"));
  CHECK_THAT(error_of(R"({"variant":"open_infinite","n":3,"K":5,"processors":2,)" + src + "}"),
             Catch::Matchers::StartsWith("processors"));
  CHECK_THAT(error_of(R"({"variant":"closed","n":3,"K":5,"measures":["sojourn"],)" + src + "}"),
             Catch::Matchers::StartsWith("measures"));
  CHECK_THAT(error_of(R"({"variant":"closed","n":3,"K":5,"c":[1,2,1],)" + src + "}"),
             Catch::Matchers::StartsWith("c: heterogeneous"));
  CHECK_THAT(error_of(R"({"variant":"open_infinite","n":3,"K":5,"b":1,)" + src + "}"),
             Catch::Matchers::StartsWith("b:"));
  CHECK_THAT(error_of(R"({"variant":"open_mfg","n":3,"K":5,"b":[1],)" + src + "}"),
             Catch::Matchers::StartsWith("b:"));
  CHECK_THAT(error_of(R"({"variant":"open_infinite","n":3,"K":0,)" + src + "}"),
             Catch::Matchers::StartsWith("K:"));
  CHECK_THAT(error_of(R"({"variant":"open_infinite","n":3,"K":5,"measures":["cost"],)" + src + "}"),
             Catch::Matchers::StartsWith("measures[0]"));
  CHECK_THAT(error_of("{not json"), Catch::Matchers::StartsWith("config: malformed JSON"));
  CHECK_THAT(error_of(R"({"variant":"open_infinite","K":5,)" + src + "}"),
             Catch::Matchers::StartsWith("n: missing"));
}

TEST_CASE("portable generator", "[cli]") {
  // Reference values of the SplitMix64 finaliser.
  CHECK(mix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(mix64(1) == 0x910A2DEC89025CC1ULL);

  const double u = unit_draw(7, 3, 11);
  CHECK(u >= 0.0);
  CHECK(u < 1.0);
  CHECK(u == 0.1012093140660415);  // independent reference implementation
  CHECK(unit_draw(7, 3, 11) == u);
  CHECK(unit_draw(8, 3, 11) != u);
  CHECK(unit_draw(7, 11, 3) != u);

  ServiceTimeSource src;
  src.kind = SourceKind::uniform;
  src.lower = 2.0;
  src.upper = 5.0;
  src.seed = 99;
  const ServiceTimes a = generate_service_times(src, 4, 30);
  CHECK(a == generate_service_times(src, 4, 30));
  // Counter-based: a prefix of a longer horizon is the shorter horizon.
  const ServiceTimes longer = generate_service_times(src, 4, 60);
  for (std::size_t k = 1; k <= 30; ++k)
    for (std::size_t i = 1; i <= 4; ++i) REQUIRE(a.at(i, k) == longer.at(i, k));
  for (std::size_t k = 1; k <= 30; ++k)
    for (std::size_t i = 1; i <= 4; ++i) {
      REQUIRE(a.at(i, k).value() >= 2.0);
      REQUIRE(a.at(i, k).value() < 5.0);
      REQUIRE(a.at(i, k).value() == 2.0 + 3.0 * unit_draw(99, i, k));
    }

  src.integer_times = true;
  const ServiceTimes r = generate_service_times(src, 4, 30);
  for (std::size_t k = 1; k <= 30; ++k)
    for (std::size_t i = 1; i <= 4; ++i)
      REQUIRE(r.at(i, k).value() == std::round(a.at(i, k).value()));

  ServiceTimeSource ex;
  ex.kind = SourceKind::exponential;
  ex.rate = 2.0;
  ex.seed = 5;
  const ServiceTimes e = generate_service_times(ex, 2, 10);
  CHECK(e.at(2, 7).value() == -std::log1p(-unit_draw(5, 2, 7)) / 2.0);

  ServiceTimeSource c;
  c.kind = SourceKind::constant;
  c.value = {1.5, 2.5};
  const ServiceTimes ct = generate_service_times(c, 2, 3);
  CHECK(ct.at(1, 3) == Scalar{1.5});
  CHECK(ct.at(2, 1) == Scalar{2.5});
}

TEST_CASE("trace parsing", "[cli]") {
  const ServiceTimes t = parse_trace("k,i,tau\n1,1,0.5\n1,2,2\n2,1,1\n2,2,3\n");
  CHECK(t.stations() == 2);
  CHECK(t.customers() == 2);
  CHECK(t.at(1, 1) == Scalar{0.5});
  CHECK(t.at(2, 2) == Scalar{3});

  auto message = [](const std::string& text) -> std::string {
    try {
      parse_trace(text, 2, 2);
    } catch (const DomainError& e) {
      return e.what();
    }
    return "no error";
  };
  CHECK_THAT(message("k,i,tau\n1,1,1\n1,2,1\n2,2,1\n"),
             Catch::Matchers::ContainsSubstring("(k=2, i=1)"));
  CHECK_THAT(message("k,i,tau\n1,1,1\n1,1,2\n"), Catch::Matchers::ContainsSubstring("duplicate"));
  CHECK_THAT(message("k,i,tau\n1,1,-1\n"), Catch::Matchers::ContainsSubstring("nonnegative"));
  CHECK_THAT(message("k,i,tau\n1,1,abc\n"), Catch::Matchers::ContainsSubstring("malformed"));
  CHECK_THAT(message("k,i,tau\n0,1,1\n"), Catch::Matchers::ContainsSubstring("positive integer"));
  CHECK_THAT(message("k,i,tau\n1,1\n"), Catch::Matchers::ContainsSubstring("3 fields"));
  CHECK_THAT(message("x,y\n"), Catch::Matchers::ContainsSubstring("header"));
  CHECK_THAT(message("k,i,tau\n3,1,1\n"), Catch::Matchers::ContainsSubstring("beyond"));

  CHECK_THROWS_AS(load_trace("/nonexistent/trace.csv"), IoError);
}

TEST_CASE("trace round trip reproduces the trajectory", "[cli]") {
  const fs::path dir = scratch_dir("trace");
  ServiceTimeSource src;
  src.kind = SourceKind::exponential;
  src.rate = 0.7;
  src.seed = 3;
  const ServiceTimes tau = generate_service_times(src, 4, 25);
  write_trace(dir / "tau.csv", tau);
  const ServiceTimes back = load_trace(dir / "tau.csv", 4, 25);
  CHECK(back == tau);
  const TandemSpec spec = TandemSpec::blocking(BlockingRule::manufacturing, 4, 1, 25);
  CHECK(format_departures_csv(simulate_serial(spec, tau)) ==
        format_departures_csv(simulate_serial(spec, back)));
}

TEST_CASE("run writes the departures CSV and measure files", "[cli]") {
  const fs::path dir = scratch_dir("run");
  RunConfig cfg = parse_config(
      R"({"variant":"open_infinite","n":2,"K":3,"source":{"kind":"constant","value":[1,2]},
          "measures":["departures","sojourn","waiting"],"count_ops":true})");
  cfg.output = dir / "hand.csv";
  const RunArtifacts art = run(cfg);
  CHECK(slurp(dir / "hand.csv") == "k,d_1,d_2\n1,1,3\n2,2,5\n3,3,7\n");
  CHECK(slurp(dir / "hand.sojourn.csv") == "k,s_1,s_2\n1,0,2\n2,0,3\n3,0,4\n");
  CHECK(slurp(dir / "hand.waiting.csv") == "k,w_1,w_2\n1,0,0\n2,0,1\n3,0,2\n");
  CHECK(art.written.size() == 4);
  CHECK_THAT(art.ops_report, Catch::Matchers::ContainsSubstring("scalar_otimes: 18"));
  CHECK_THAT(art.ops_report, Catch::Matchers::ContainsSubstring("formula N = K(n(n+1)/2 + n^2): 21 (measured 21)"));
  CHECK(slurp(dir / "hand.ops.txt") == art.ops_report);

  RunConfig blk = parse_config(
      R"({"variant":"open_comm","n":2,"b":1,"K":2,"source":{"kind":"constant","value":1},
          "measures":["waiting"]})");
  blk.output = dir / "blk.csv";
  run(blk);
  CHECK_FALSE(fs::exists(dir / "blk.csv"));
  CHECK(slurp(dir / "blk.waiting.csv").starts_with("k,wb_1,wb_2\n"));

  cfg.output = "/proc/maxtandem/forbidden.csv";
  CHECK_THROWS_AS(run(cfg), IoError);
}

TEST_CASE("CSV numbers use 17 significant digits", "[cli]") {
  const std::vector<Vector> rows{{0.1, 1e-20}, {kEpsilon, 2}};
  CHECK(format_vectors_csv(rows, "x") ==
        "k,x_1,x_2\n1,0.10000000000000001,9.9999999999999995e-21\n2,eps,2\n");
}

TEST_CASE("validate_run compares against the oracle", "[cli]") {
  RunConfig cfg = parse_config(
      R"({"variant":"open_mfg","n":4,"b":2,"K":40,"integer_times":true,"strategy":"vector",
          "source":{"kind":"uniform","lower":0,"upper":9,"seed":10}})");
  const ValidationOutcome ok = validate_run(cfg, 5);
  CHECK(ok.trials == 5);
  CHECK_FALSE(ok.mismatch);

  cfg.source.kind = SourceKind::constant;
  cfg.source.value = {2.0};
  CHECK(validate_run(cfg, 5).trials == 1);
}

TEST_CASE("bench reproduces the count formulas", "[cli]") {
  const auto rows = bench({2, 5}, {12}, {1, 4});
  REQUIRE(rows.size() == 4);
  for (const BenchRow& r : rows) {
    CHECK(r.serial_ops == r.serial_formula);
    CHECK(r.vector_build == r.n * r.horizon);
    CHECK(static_cast<double>(r.vector_reduce) >= r.vector_reduce_ideal);
    CHECK(static_cast<double>(r.vector_reduce) <= r.vector_reduce_ideal + r.n * r.horizon);
    CHECK(r.batches == (r.horizon + r.processors - 1) / r.processors);
    // 12 is a multiple of both P values, so every batch is full.
    CHECK(r.parallel_ops == r.parallel_formula);
  }
  const std::string csv = format_bench_csv(rows);
  CHECK(csv.starts_with("n,K,P,serial_ops"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(log2_factorial(1) == Catch::Approx(0.0));
  CHECK(log2_factorial(4) == Catch::Approx(std::log2(24.0)));
}
