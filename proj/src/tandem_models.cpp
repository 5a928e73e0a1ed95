#include "maxtandem/tandem_models.hpp"

#include <algorithm>
#include <string>

#include "maxtandem/errors.hpp"
#include "maxtandem/linear_solver.hpp"

namespace maxtandem {

namespace {

bool all_equal(const std::vector<std::size_t>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

void check_tau(std::span<const Scalar> tau, const char* who) {
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (!tau[i].is_finite() || tau[i].value() < 0.0) {
      throw DomainError(std::string(who) + ": tau_" + std::to_string(i + 1) +
                        " = " + format_scalar(tau[i]) + " is not a finite nonnegative time");
    }
  }
}

void require_stations(std::span<const Scalar> tau, std::size_t min, const char* who) {
  if (tau.size() < min) {
    throw ConfigError(std::string(who) + ": requires at least " + std::to_string(min) +
                      " stations, got " + std::to_string(tau.size()));
  }
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::closed: return "closed";
    case Variant::open_infinite: return "open_infinite";
    case Variant::open_manufacturing: return "open_mfg";
    case Variant::open_communication: return "open_comm";
  }
  return "unknown";
}

TandemSpec TandemSpec::closed(std::size_t n, std::size_t c, std::size_t horizon) {
  TandemSpec s;
  s.variant = Variant::closed;
  s.n = n;
  s.population.assign(n, c);
  s.horizon = horizon;
  return s;
}

TandemSpec TandemSpec::open_infinite(std::size_t n, std::size_t horizon) {
  TandemSpec s;
  s.variant = Variant::open_infinite;
  s.n = n;
  s.horizon = horizon;
  return s;
}

TandemSpec TandemSpec::blocking(BlockingRule rule, std::size_t n, std::size_t b,
                                std::size_t horizon) {
  TandemSpec s;
  s.variant = rule == BlockingRule::manufacturing ? Variant::open_manufacturing
                                                  : Variant::open_communication;
  s.n = n;
  s.capacity.assign(n > 0 ? n - 1 : 0, b);
  s.horizon = horizon;
  return s;
}

BlockingRule TandemSpec::rule() const {
  if (variant == Variant::open_manufacturing) return BlockingRule::manufacturing;
  if (variant == Variant::open_communication) return BlockingRule::communication;
  throw ConfigError("variant " + to_string(variant) + " has no blocking rule");
}

void TandemSpec::validate() const {
  if (n < 1) throw ConfigError("n must be >= 1");
  if (horizon < 1) throw ConfigError("K must be >= 1");
  if (variant == Variant::closed) {
    if (n < 2) throw ConfigError("closed tandem requires n >= 2");
    if (population.size() != n) {
      throw ConfigError("closed tandem needs " + std::to_string(n) +
                        " population entries, got " + std::to_string(population.size()));
    }
    for (std::size_t c : population)
      if (c < 1) throw ConfigError("closed tandem population c_i must be >= 1");
    if (!capacity.empty()) throw ConfigError("buffer capacities apply to blocking variants only");
  } else {
    if (!population.empty()) throw ConfigError("population applies to the closed variant only");
    if (is_blocking()) {
      if (n < 2) throw ConfigError("blocking requires n >= 2");
      if (capacity.size() != n - 1) {
        throw ConfigError("blocking tandem needs " + std::to_string(n - 1) +
                          " capacities (stations 2..n), got " +
                          std::to_string(capacity.size()));
      }
    } else if (!capacity.empty()) {
      throw ConfigError("buffer capacities apply to blocking variants only");
    }
  }
}

void TandemSpec::validate_for_matrix() const {
  validate();
  if (variant == Variant::closed && !all_equal(population))
    throw ConfigError("heterogeneous populations c_i are not supported in matrix form");
  if (is_blocking() && !all_equal(capacity))
    throw ConfigError("heterogeneous capacities b_i are not supported in matrix form");
}

std::size_t TandemSpec::augmentation_order() const {
  switch (variant) {
    case Variant::closed:
      return population.empty() ? 1 : population.front();
    case Variant::open_infinite:
      return 1;
    case Variant::open_manufacturing:
    case Variant::open_communication:
      return capacity.empty() ? 1 : capacity.front() + 1;
  }
  return 1;
}

std::size_t TandemSpec::history_depth() const {
  switch (variant) {
    case Variant::closed:
      return population.empty() ? 1 : *std::max_element(population.begin(), population.end());
    case Variant::open_infinite:
      return 1;
    case Variant::open_manufacturing:
    case Variant::open_communication:
      return capacity.empty() ? 1 : *std::max_element(capacity.begin(), capacity.end()) + 1;
  }
  return 1;
}

ServiceTimes::ServiceTimes(std::size_t stations, std::size_t customers)
    : stations_(stations), customers_(customers), data_(stations * customers, kUnit) {}

Scalar ServiceTimes::at(std::size_t station, std::size_t customer) const {
  if (station < 1 || station > stations_ || customer < 1 || customer > customers_)
    throw ShapeError("service time index out of range");
  return data_[(customer - 1) * stations_ + (station - 1)];
}

void ServiceTimes::set(std::size_t station, std::size_t customer, double tau) {
  if (station < 1 || station > stations_ || customer < 1 || customer > customers_)
    throw ShapeError("service time index out of range");
  const Scalar v{tau};
  if (!v.is_finite() || tau < 0.0) {
    throw DomainError("service time tau_" + std::to_string(station) + "," +
                      std::to_string(customer) + " = " + format_scalar(v) +
                      " is not a finite nonnegative time");
  }
  data_[(customer - 1) * stations_ + (station - 1)] = v;
}

std::span<const Scalar> ServiceTimes::customer(std::size_t k) const {
  if (k < 1 || k > customers_) throw ShapeError("customer index out of range");
  return {data_.data() + (k - 1) * stations_, stations_};
}

Matrix shift_matrix(ShiftKind kind, std::size_t n) {
  if (n < 1) throw ShapeError("shift_matrix: n must be >= 1");
  Matrix m(n, n);
  for (std::size_t i = 1; i < n; ++i) {
    if (kind == ShiftKind::G_transpose) {
      m(i - 1, i) = kUnit;
    } else {
      m(i, i - 1) = kUnit;
    }
  }
  if (kind == ShiftKind::F) m(0, n - 1) = kUnit;
  return m;
}

Matrix service_diag(std::span<const Scalar> tau) {
  check_tau(tau, "service_diag");
  return diag(tau);
}

Matrix transition_closed(std::span<const Scalar> tau) {
  require_stations(tau, 2, "transition_closed");
  check_tau(tau, "transition_closed");
  const std::size_t n = tau.size();
  Matrix t(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    t(i, i) = tau[i];
    t(i, i == 0 ? n - 1 : i - 1) = tau[i];
  }
  return t;
}

Matrix transition_closed_c2(std::span<const Scalar> tau) {
  require_stations(tau, 2, "transition_closed_c2");
  check_tau(tau, "transition_closed_c2");
  const std::size_t n = tau.size();
  Matrix t(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    t(i, i) = tau[i];
    // diag(tau) F: row i picks its predecessor around the ring
    t(i, n + (i == 0 ? n - 1 : i - 1)) = tau[i];
    t(n + i, i) = kUnit;
  }
  return t;
}

Matrix transition_closed_augmented(std::span<const Scalar> tau, std::size_t c) {
  require_stations(tau, 2, "transition_closed_augmented");
  check_tau(tau, "transition_closed_augmented");
  if (c < 1) throw ConfigError("closed population c must be >= 1");
  const std::size_t n = tau.size();
  const Matrix d = diag(tau);
  Matrix t(c * n, c * n);
  t.set_block(0, 0, d);
  const Matrix df = mat_mul(d, shift_matrix(ShiftKind::F, n));
  t.set_block(0, (c - 1) * n, mat_add(t.block(0, (c - 1) * n, n, n), df));
  for (std::size_t r = 1; r < c; ++r) t.set_block(r * n, (r - 1) * n, Matrix::identity(n));
  return t;
}

Matrix transition_open_infinite(std::span<const Scalar> tau, OpCounter* ops) {
  require_stations(tau, 1, "transition_open_infinite");
  check_tau(tau, "transition_open_infinite");
  const std::size_t n = tau.size();
  Matrix t(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    t(i, i) = otimes(kUnit, tau[i]);
    for (std::size_t j = 0; j < i; ++j) t(i, j) = otimes(t(i - 1, j), tau[i]);
  }
  if (ops != nullptr) ops->otimes += n * (n + 1) / 2;
  return t;
}

Matrix transition_mfg_b0(std::span<const Scalar> tau, OpCounter* ops) {
  require_stations(tau, 2, "transition_mfg_b0");
  Matrix t = transition_open_infinite(tau, ops);
  for (std::size_t i = 0; i + 1 < tau.size(); ++i) t(i, i + 1) = kUnit;
  return t;
}

Matrix transition_comm_b0(std::span<const Scalar> tau, OpCounter* ops) {
  require_stations(tau, 2, "transition_comm_b0");
  const std::size_t n = tau.size();
  const Matrix l = transition_open_infinite(tau, ops);
  // l (E + G^T): column j becomes col j (+) col j-1; only rows i >= j-1
  // carry finite entries.
  Matrix t(n, n);
  std::uint64_t adds = 0;
  for (std::size_t i = 0; i < n; ++i) {
    t(i, 0) = l(i, 0);
    for (std::size_t j = 1; j < n && j <= i + 1; ++j) {
      t(i, j) = oplus(l(i, j), l(i, j - 1));
      ++adds;
    }
  }
  if (ops != nullptr) ops->oplus += adds;
  return t;
}

Matrix open_star(std::span<const Scalar> tau, OpCounter* ops) {
  const std::size_t n = tau.size();
  const Matrix a = mat_mul(diag(tau), shift_matrix(ShiftKind::G, n));
  return star_truncated(a, n, ops);
}

Matrix transition_blocking_b1(std::span<const Scalar> tau, BlockingRule rule,
                              OpCounter* ops) {
  require_stations(tau, 2, "transition_blocking_b1");
  check_tau(tau, "transition_blocking_b1");
  const std::size_t n = tau.size();
  const Matrix s = open_star(tau, ops);
  const Matrix d = diag(tau);
  const Matrix gt = shift_matrix(ShiftKind::G_transpose, n);
  Matrix t(2 * n, 2 * n);
  t.set_block(0, 0, mat_mul(s, d, ops));
  t.set_block(0, n,
              rule == BlockingRule::manufacturing
                  ? mat_mul(s, gt, ops)
                  : mat_mul(mat_mul(s, d, ops), gt, ops));
  t.set_block(n, 0, Matrix::identity(n));
  return t;
}

Matrix transition_blocking_augmented(std::span<const Scalar> tau, BlockingRule rule,
                                     std::size_t b, OpCounter* ops) {
  require_stations(tau, 2, "transition_blocking_augmented");
  check_tau(tau, "transition_blocking_augmented");
  const std::size_t n = tau.size();
  const std::size_t order = b + 1;
  const Matrix s = open_star(tau, ops);
  const Matrix sd = mat_mul(s, diag(tau), ops);
  const Matrix gt = shift_matrix(ShiftKind::G_transpose, n);
  const Matrix blocked = rule == BlockingRule::manufacturing ? mat_mul(s, gt, ops)
                                                             : mat_mul(sd, gt, ops);
  Matrix t(order * n, order * n);
  t.set_block(0, 0, sd);
  // The blocking term refers to d(k-b-1), the last block of d~(k-1); for
  // b = 0 it shares the block with the service term.
  t.set_block(0, b * n, mat_add(t.block(0, b * n, n, n), blocked));
  if (b == 0 && ops != nullptr) ops->oplus += n * n;
  for (std::size_t r = 1; r < order; ++r)
    t.set_block(r * n, (r - 1) * n, Matrix::identity(n));
  return t;
}

Transition build_transition(const TandemSpec& spec, std::span<const Scalar> tau,
                            OpCounter* ops) {
  spec.validate_for_matrix();
  if (tau.size() != spec.n) {
    throw ConfigError("service vector has " + std::to_string(tau.size()) +
                      " entries, model has n = " + std::to_string(spec.n));
  }
  const std::size_t order = spec.augmentation_order();
  Transition out;
  out.arity = spec.arity();
  switch (spec.variant) {
    case Variant::closed:
      out.matrix = order == 1   ? transition_closed(tau)
                   : order == 2 ? transition_closed_c2(tau)
                                : transition_closed_augmented(tau, order);
      break;
    case Variant::open_infinite:
      out.matrix = transition_open_infinite(tau, ops);
      break;
    case Variant::open_manufacturing:
    case Variant::open_communication: {
      const BlockingRule rule = spec.rule();
      const std::size_t b = order - 1;
      if (b == 0) {
        out.matrix = rule == BlockingRule::manufacturing ? transition_mfg_b0(tau, ops)
                                                         : transition_comm_b0(tau, ops);
      } else if (b == 1) {
        out.matrix = transition_blocking_b1(tau, rule, ops);
      } else {
        out.matrix = transition_blocking_augmented(tau, rule, b, ops);
      }
      break;
    }
  }
  return out;
}

Vector initial_state_vector(const TandemSpec& spec) {
  Vector d(spec.arity(), kEpsilon);
  if (spec.initial_state == InitialState::unit) {
    std::fill(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(spec.n), kUnit);
  }
  return d;
}

}  // namespace maxtandem
