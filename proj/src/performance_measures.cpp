#include "maxtandem/performance_measures.hpp"

#include <string>

#include "maxtandem/errors.hpp"
#include "maxtandem/sim_engine.hpp"

namespace maxtandem {

namespace {

void require_finite(std::span<const Scalar> v, const char* who) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_finite()) {
      throw DomainError(std::string(who) + ": entry " + std::to_string(i + 1) +
                        " is not finite");
    }
  }
}

void require_open_infinite_recursion(const TandemSpec& spec, const ServiceTimes& tau) {
  spec.validate();
  if (spec.variant != Variant::open_infinite) {
    throw ConfigError("measure recursions require the open_infinite variant, got " +
                      to_string(spec.variant));
  }
  if (spec.initial_state != InitialState::unit) {
    throw ConfigError("measure recursions require the unit initial state");
  }
  if (tau.stations() != spec.n || tau.customers() < spec.horizon) {
    throw ConfigError("service times do not cover the model");
  }
}

}  // namespace

Vector sojourn_direct(std::span<const Scalar> d) {
  if (d.empty()) throw ShapeError("sojourn_direct: empty state");
  if (d[0].is_epsilon()) {
    throw DomainError("sojourn_direct: reference epoch d_1(k) is eps");
  }
  const Scalar ref = inverse(d[0]);
  Vector s(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) s[i] = otimes(d[i], ref);
  return s;
}

Matrix sojourn_matrix(const Matrix& t, Scalar tau_1k) {
  if (!tau_1k.is_finite()) throw DomainError("sojourn_matrix: tau_1k must be finite");
  return scale(inverse(tau_1k), t);
}

Matrix waiting_scale_matrix(std::span<const Scalar> tau) {
  require_finite(tau, "waiting_scale_matrix");
  Vector prefix(tau.size());
  Scalar acc = kUnit;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    acc = otimes(acc, tau[i]);
    prefix[i] = acc;
  }
  return diag(prefix);
}

Matrix waiting_transition(const Matrix& t, std::span<const Scalar> tau,
                          std::span<const Scalar> tau_prev) {
  if (tau.size() != t.rows() || tau_prev.size() != t.cols() || tau_prev.empty()) {
    throw ShapeError("waiting_transition: service vectors do not match the matrix");
  }
  require_finite(tau, "waiting_transition");
  require_finite(tau_prev, "waiting_transition");
  const Matrix p_inv = diag_inverse(waiting_scale_matrix(tau));
  const Matrix p_prev = waiting_scale_matrix(tau_prev);
  return scale(inverse(tau_prev[0]), mat_mul(mat_mul(p_inv, t), p_prev));
}

Vector waiting_from_sojourn(std::span<const Scalar> s, std::span<const Scalar> tau,
                            double tolerance) {
  if (s.size() != tau.size()) throw ShapeError("waiting_from_sojourn: length mismatch");
  require_finite(s, "waiting_from_sojourn");
  require_finite(tau, "waiting_from_sojourn");
  Vector w(s.size());
  double served = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) served += tau[i].value();
    const double wi = s[i].value() - served;
    if (wi < -tolerance) {
      throw ConsistencyError("waiting time w_" + std::to_string(i + 1) + " = " +
                             format_scalar(Scalar{wi}) + " is negative");
    }
    w[i] = Scalar{wi};
  }
  return w;
}

MeasureTrajectory measures_direct(const Trajectory& traj, const ServiceTimes& tau,
                                  double tolerance) {
  const TandemSpec& spec = traj.spec();
  if (!spec.is_open()) {
    throw ConfigError("sojourn and waiting times are defined for open variants only");
  }
  MeasureTrajectory out;
  out.includes_blocking = spec.is_blocking();
  for (std::size_t k = 1; k <= traj.horizon(); ++k) {
    Vector s = sojourn_direct(traj.departures(k));
    out.waiting.push_back(waiting_from_sojourn(s, tau.customer(k), tolerance));
    out.sojourn.push_back(std::move(s));
  }
  return out;
}

std::vector<Vector> sojourn_by_recursion(const TandemSpec& spec, const ServiceTimes& tau) {
  require_open_infinite_recursion(spec, tau);
  std::vector<Vector> out;
  Vector s(spec.n, kUnit);
  for (std::size_t k = 1; k <= spec.horizon; ++k) {
    const auto tk = tau.customer(k);
    s = mat_vec(sojourn_matrix(transition_open_infinite(tk), tk[0]), s);
    out.push_back(s);
  }
  return out;
}

std::vector<Vector> waiting_by_recursion(const TandemSpec& spec, const ServiceTimes& tau) {
  require_open_infinite_recursion(spec, tau);
  std::vector<Vector> out;
  const auto t1 = tau.customer(1);
  const Vector s1 =
      mat_vec(sojourn_matrix(transition_open_infinite(t1), t1[0]), Vector(spec.n, kUnit));
  Vector w = waiting_from_sojourn(s1, t1);
  out.push_back(w);
  for (std::size_t k = 2; k <= spec.horizon; ++k) {
    const auto tk = tau.customer(k);
    w = mat_vec(waiting_transition(transition_open_infinite(tk), tk, tau.customer(k - 1)), w);
    out.push_back(w);
  }
  return out;
}

}  // namespace maxtandem
