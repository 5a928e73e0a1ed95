#include "maxtandem/sim_engine.hpp"

#include <algorithm>
#include <string>
#include <thread>

#include "maxtandem/errors.hpp"

namespace maxtandem {

namespace {

void check_inputs(const TandemSpec& spec, const ServiceTimes& tau) {
  if (tau.stations() != spec.n) {
    throw ConfigError("service times cover " + std::to_string(tau.stations()) +
                      " stations, model has n = " + std::to_string(spec.n));
  }
  if (tau.customers() < spec.horizon) {
    throw ConfigError("service times cover " + std::to_string(tau.customers()) +
                      " customers, horizon is K = " + std::to_string(spec.horizon));
  }
}

bool is_closed_unit_population(const TandemSpec& spec) {
  return spec.variant == Variant::closed &&
         std::all_of(spec.population.begin(), spec.population.end(),
                     [](std::size_t c) { return c == 1; });
}

// Packed lower triangle: row i holds entries j = 0..i.
std::size_t tri(std::size_t i, std::size_t j) { return i * (i + 1) / 2 + j; }

// Row-extension build of the open-infinite matrix into packed storage:
// t_ii = tau_i, t_ij = t_{i-1,j} tau_i.
void build_open_rows(std::span<const Scalar> tau, std::vector<Scalar>& t, OpCounter& ops) {
  const std::size_t n = tau.size();
  for (std::size_t i = 0; i < n; ++i) {
    t[tri(i, i)] = otimes(kUnit, tau[i]);
    ++ops.otimes;
    for (std::size_t j = 0; j < i; ++j) {
      t[tri(i, j)] = otimes(t[tri(i - 1, j)], tau[i]);
      ++ops.otimes;
    }
  }
}

// Max over v[0..m) by recursive doubling, in place; returns the stage count.
std::size_t reduce_by_doubling(std::span<Scalar> v) {
  std::size_t m = v.size();
  std::size_t stages = 0;
  while (m > 1) {
    const std::size_t half = (m + 1) / 2;
    for (std::size_t j = 0; j + half < m; ++j) v[j] = oplus(v[j], v[j + half]);
    m = half;
    ++stages;
  }
  return stages;
}

}  // namespace

OpLedger& OpLedger::operator+=(const OpLedger& o) {
  scalar_oplus += o.scalar_oplus;
  scalar_otimes += o.scalar_otimes;
  vector_ops += o.vector_ops;
  vector_build_ops += o.vector_build_ops;
  vector_add_ops += o.vector_add_ops;
  vector_reduce_stages += o.vector_reduce_stages;
  parallel_ops += o.parallel_ops;
  batches += o.batches;
  steps += o.steps;
  memory_cells = std::max(memory_cells, o.memory_cells);
  return *this;
}

Trajectory::Trajectory(TandemSpec spec, std::size_t arity)
    : spec_(std::move(spec)), arity_(arity) {}

void Trajectory::push(Vector state) {
  if (state.size() != arity_) {
    throw ShapeError("trajectory state has arity " + std::to_string(state.size()) +
                     ", expected " + std::to_string(arity_));
  }
  states_.push_back(std::move(state));
}

std::size_t doubling_stages(std::size_t m) {
  std::size_t stages = 0;
  for (std::size_t span = 1; span < m; span *= 2) ++stages;
  return stages;
}

Trajectory simulate_serial(const TandemSpec& spec, const ServiceTimes& tau) {
  spec.validate_for_matrix();
  check_inputs(spec, tau);
  Trajectory traj(spec, spec.arity());
  traj.push(initial_state_vector(spec));
  OpLedger& ledger = traj.ledger();
  const std::size_t n = spec.n;

  if (spec.variant == Variant::open_infinite) {
    std::vector<Scalar> t(n * (n + 1) / 2);
    Vector d = initial_state_vector(spec);
    ledger.memory_cells = t.size() + 2 * n;  // triangle, tau_k, d
    for (std::size_t k = 1; k <= spec.horizon; ++k) {
      OpCounter ops;
      build_open_rows(tau.customer(k), t, ops);
      // Row i reads d_j(k-1) for j <= i only, so descending i updates d in
      // place.
      for (std::size_t i = n; i-- > 0;) {
        Scalar acc = otimes(t[tri(i, 0)], d[0]);
        ++ops.otimes;
        for (std::size_t j = 1; j <= i; ++j) {
          acc = oplus(acc, otimes(t[tri(i, j)], d[j]));
          ++ops.oplus;
          ++ops.otimes;
        }
        d[i] = acc;
      }
      ledger.add_scalar(ops);
      ++ledger.steps;
      traj.push(d);
    }
    return traj;
  }

  const std::size_t m = spec.arity();
  ledger.memory_cells = m * m + 2 * m + n;
  Vector d = initial_state_vector(spec);
  for (std::size_t k = 1; k <= spec.horizon; ++k) {
    OpCounter ops;
    const Transition tr = build_transition(spec, tau.customer(k), &ops);
    d = mat_vec(tr.matrix, d, &ops);
    ledger.add_scalar(ops);
    ++ledger.steps;
    traj.push(d);
  }
  return traj;
}

Trajectory simulate_closed_sparse(const TandemSpec& spec, const ServiceTimes& tau) {
  spec.validate();
  if (!is_closed_unit_population(spec)) {
    throw ConfigError("sparse-closed strategy requires the closed variant with c = 1");
  }
  check_inputs(spec, tau);
  const std::size_t n = spec.n;
  Trajectory traj(spec, n);
  Vector prev = initial_state_vector(spec);
  Vector next(n);
  traj.push(prev);
  OpLedger& ledger = traj.ledger();
  ledger.memory_cells = 3 * n;  // d(k-1), d(k), tau_k
  for (std::size_t k = 1; k <= spec.horizon; ++k) {
    const auto t = tau.customer(k);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t pred = i == 0 ? n - 1 : i - 1;
      next[i] = otimes(t[i], oplus(prev[pred], prev[i]));
    }
    ledger.scalar_oplus += n;
    ledger.scalar_otimes += n;
    ++ledger.steps;
    std::swap(prev, next);
    traj.push(prev);
  }
  return traj;
}

Trajectory simulate_vectorized(const TandemSpec& spec, const ServiceTimes& tau) {
  spec.validate_for_matrix();
  check_inputs(spec, tau);
  const std::size_t n = spec.n;
  const std::size_t m = spec.arity();
  Trajectory traj(spec, m);
  traj.push(initial_state_vector(spec));
  OpLedger& ledger = traj.ledger();
  Vector d = initial_state_vector(spec);
  Vector sum(m);

  if (spec.variant == Variant::open_infinite) {
    // Rows are full n-vectors, eps above the diagonal.
    Matrix t(n, n);
    ledger.memory_cells = n * n + 3 * n;
    for (std::size_t k = 1; k <= spec.horizon; ++k) {
      const auto tk = tau.customer(k);
      Vector next(n);
      for (std::size_t i = 0; i < n; ++i) {
        // t_i <- t_{i-1} (x) tau_ik with t_ii <- tau_ik: one shifted row op.
        for (std::size_t j = 0; j < i; ++j) t(i, j) = otimes(t(i - 1, j), tk[i]);
        t(i, i) = tk[i];
        ++ledger.vector_build_ops;
        // Componentwise t_i + d(k-1) over the i+1 live entries, then the
        // max over them.
        const std::size_t live = i + 1;
        for (std::size_t j = 0; j < live; ++j) sum[j] = otimes(t(i, j), d[j]);
        ++ledger.vector_add_ops;
        ledger.vector_reduce_stages += reduce_by_doubling(std::span(sum).first(live));
        next[i] = sum[0];
      }
      d = std::move(next);
      ++ledger.steps;
      traj.push(d);
    }
  } else {
    ledger.memory_cells = m * m + 3 * m;
    for (std::size_t k = 1; k <= spec.horizon; ++k) {
      const Transition tr = build_transition(spec, tau.customer(k));
      ledger.vector_build_ops += m;
      Vector next(m);
      for (std::size_t i = 0; i < m; ++i) {
        const auto row = tr.matrix.row(i);
        for (std::size_t j = 0; j < m; ++j) sum[j] = otimes(row[j], d[j]);
        ++ledger.vector_add_ops;
        ledger.vector_reduce_stages += reduce_by_doubling(sum);
        next[i] = sum[0];
      }
      d = std::move(next);
      ++ledger.steps;
      traj.push(d);
    }
  }
  ledger.vector_ops =
      ledger.vector_build_ops + ledger.vector_add_ops + ledger.vector_reduce_stages;
  return traj;
}

Trajectory simulate_batched(const TandemSpec& spec, const ServiceTimes& tau,
                            std::size_t processors, std::size_t workers) {
  if (processors < 1) throw ConfigError("batched strategy requires P >= 1 processors");
  spec.validate_for_matrix();
  check_inputs(spec, tau);
  const std::size_t m = spec.arity();
  const std::size_t horizon = spec.horizon;
  if (workers == 0) {
    workers = std::min<std::size_t>(
        processors, std::max<std::size_t>(1, std::thread::hardware_concurrency()));
  }

  Trajectory traj(spec, m);
  traj.push(initial_state_vector(spec));
  OpLedger& ledger = traj.ledger();
  ledger.memory_cells = processors * m * m + 2 * m;
  Vector d = initial_state_vector(spec);

  std::vector<Matrix> batch(processors);
  std::vector<OpCounter> build_ops(processors);
  for (std::size_t first = 1; first <= horizon; first += processors) {
    const std::size_t size = std::min(processors, horizon - first + 1);

    // Phase 1: independent construction of T_first .. T_first+size-1.
    auto build = [&](std::size_t worker) {
      for (std::size_t slot = worker; slot < size; slot += workers) {
        build_ops[slot] = OpCounter{};
        batch[slot] = build_transition(spec, tau.customer(first + slot), &build_ops[slot]).matrix;
      }
    };
    const std::size_t active = std::min(workers, size);
    if (active <= 1) {
      build(0);
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(active);
      for (std::size_t w = 0; w < active; ++w) pool.emplace_back(build, w);
    }
    std::uint64_t phase1_depth = 0;
    for (std::size_t slot = 0; slot < size; ++slot) {
      ledger.add_scalar(build_ops[slot]);
      phase1_depth = std::max(phase1_depth, build_ops[slot].total());
    }
    ledger.parallel_ops += phase1_depth;

    // Phase 2: sequential in k; each product has m entries evaluated side
    // by side, m additions and m maximisations deep.
    for (std::size_t slot = 0; slot < size; ++slot) {
      OpCounter ops;
      d = mat_vec(batch[slot], d, &ops);
      ledger.add_scalar(ops);
      ledger.parallel_ops += 2 * m;
      ++ledger.steps;
      traj.push(d);
    }
    ++ledger.batches;
  }
  return traj;
}

Trajectory oracle_lindley(const TandemSpec& spec, const ServiceTimes& tau) {
  spec.validate();
  check_inputs(spec, tau);
  const std::size_t n = spec.n;
  Trajectory traj(spec, n);
  std::vector<Vector> d;
  d.reserve(spec.horizon + 1);
  d.push_back(spec.initial_state == InitialState::unit ? Vector(n, kUnit)
                                                       : Vector(n, kEpsilon));

  // d_i(k) for 0-based station i and any signed k; eps before time zero.
  auto past = [&](std::ptrdiff_t k, std::size_t i) -> Scalar {
    if (k < 0) return kEpsilon;
    return d[static_cast<std::size_t>(k)][i];
  };

  for (std::size_t k = 1; k <= spec.horizon; ++k) {
    const auto sk = static_cast<std::ptrdiff_t>(k);
    const auto t = tau.customer(k);
    Vector cur(n, kEpsilon);
    for (std::size_t i = 0; i < n; ++i) {
      Scalar arrival = kEpsilon;
      if (spec.variant == Variant::closed) {
        const auto c = static_cast<std::ptrdiff_t>(spec.population[i]);
        arrival = past(sk - c, i == 0 ? n - 1 : i - 1);
      } else if (i > 0) {
        arrival = cur[i - 1];
      }
      const Scalar ready = oplus(arrival, d[k - 1][i]);
      Scalar out = otimes(ready, t[i]);
      if (spec.is_blocking() && i + 1 < n) {
        // Station i+1 must have room: its departure of customer k-b-1.
        const auto b = static_cast<std::ptrdiff_t>(spec.capacity[i]);
        const Scalar room = past(sk - b - 1, i + 1);
        if (spec.variant == Variant::open_manufacturing) {
          out = oplus(out, room);
        } else {
          out = otimes(oplus(ready, room), t[i]);
        }
      }
      cur[i] = out;
    }
    d.push_back(std::move(cur));
  }
  for (auto& v : d) traj.push(std::move(v));
  traj.ledger().steps = spec.horizon;
  return traj;
}

std::optional<Mismatch> first_mismatch(const Trajectory& a, const Trajectory& b) {
  if (a.spec().n != b.spec().n || a.horizon() != b.horizon()) {
    throw ShapeError("trajectories differ in station count or horizon");
  }
  for (std::size_t k = 0; k <= a.horizon(); ++k) {
    const auto da = a.departures(k);
    const auto db = b.departures(k);
    for (std::size_t i = 0; i < da.size(); ++i) {
      if (da[i] != db[i]) return Mismatch{k, i + 1, da[i], db[i]};
    }
  }
  return std::nullopt;
}

bool identical_states(const Trajectory& a, const Trajectory& b) {
  if (a.arity() != b.arity() || a.horizon() != b.horizon()) return false;
  for (std::size_t k = 0; k <= a.horizon(); ++k) {
    const auto sa = a.state(k);
    const auto sb = b.state(k);
    if (!std::equal(sa.begin(), sa.end(), sb.begin())) return false;
  }
  return true;
}

}  // namespace maxtandem
