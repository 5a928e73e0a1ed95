#pragma once

// Sojourn (system) times and waiting times of customers in open tandem
// systems, both from their definitions and from linear recursions
//   s(k) = U_k s(k-1),          U_k = tau_1k^-1 T_k
//   w(k) = V_{k,k-1} w(k-1),    V_{k,k-1} = tau_1,k-1^-1 P_k^-1 T_k P_{k-1}
// with P_k = diag of the prefix products tau_1k, tau_1k tau_2k, ...

#include <cstddef>
#include <span>
#include <vector>

#include "maxtandem/maxplus.hpp"
#include "maxtandem/tandem_models.hpp"

namespace maxtandem {

class Trajectory;

// s_i(k) = d_i(k) - d_1(k). Throws DomainError if d_1(k) is eps.
Vector sojourn_direct(std::span<const Scalar> d);

// U_k = tau_1k^-1 (x) T_k.
Matrix sojourn_matrix(const Matrix& t, Scalar tau_1k);

// P_k = diag(tau_1k, tau_1k tau_2k, ..., tau_1k ... tau_nk).
Matrix waiting_scale_matrix(std::span<const Scalar> tau);

Matrix waiting_transition(const Matrix& t, std::span<const Scalar> tau,
                          std::span<const Scalar> tau_prev);

// w_1 = 0, w_i = s_i - (tau_2k + ... + tau_ik). A result below -tolerance
// throws ConsistencyError; tolerance 0 demands exactness (integer times).
Vector waiting_from_sojourn(std::span<const Scalar> s, std::span<const Scalar> tau,
                            double tolerance = 0.0);

struct MeasureTrajectory {
  // Index k - 1 holds customer k.
  std::vector<Vector> sojourn;
  std::vector<Vector> waiting;
  // Set for blocking systems, where "waiting" also contains blocked time.
  bool includes_blocking = false;
};

// Measures from a simulated trajectory via the direct definitions. Uses the
// top n entries of augmented states. Open variants only.
MeasureTrajectory measures_direct(const Trajectory& traj, const ServiceTimes& tau,
                                  double tolerance = 0.0);

// Sojourn times by the U_k recursion seeded with s(0) = 0. The recursion
// assumes d_1(k) = d_1(k-1) tau_1k, which holds for the open-infinite
// model only; other variants throw ConfigError.
std::vector<Vector> sojourn_by_recursion(const TandemSpec& spec, const ServiceTimes& tau);

// Waiting times by the V recursion, seeded at k = 1 from the direct
// relation applied to s(1). Open-infinite model only.
std::vector<Vector> waiting_by_recursion(const TandemSpec& spec, const ServiceTimes& tau);

}  // namespace maxtandem
