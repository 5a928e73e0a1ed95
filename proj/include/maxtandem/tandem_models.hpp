#pragma once

/**
 * @file tandem_models.hpp
 * @brief Per-customer transition matrices of tandem single-server systems.
 *
 * Every model is written as d(k) = T_k d(k-1), where d(k) holds the
 * departure epochs of customer k from stations 1..n and T_k is built from
 * the service-time vector tau_k of that customer. In the open variants
 * station 1 stands for the external arrival stream and tau_1k is the
 * interarrival time.
 *
 * Models whose recursion reaches further back than d(k-1) (closed systems
 * with c >= 2 customers per buffer, blocking systems with buffer capacity
 * b >= 1) are made first-order by stacking past state vectors:
 * (d(k), d(k-1), ..., d(k-q+1)) with q the augmentation order.
 *
 * Station i of the model maps to row/column i-1 of the matrices.
 */

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "maxtandem/maxplus.hpp"

namespace maxtandem {

enum class Variant { closed, open_infinite, open_manufacturing, open_communication };
enum class BlockingRule { manufacturing, communication };
// Departure epochs of the fictitious customer 0: e (time zero) or eps.
enum class InitialState { unit, epsilon };

std::string to_string(Variant v);

struct TandemSpec {
  Variant variant = Variant::open_infinite;
  std::size_t n = 1;
  // c_i for stations 1..n; closed variant only.
  std::vector<std::size_t> population;
  // b_i for stations 2..n (length n-1); blocking variants only. Station 1
  // is the unbounded input buffer.
  std::vector<std::size_t> capacity;
  std::size_t horizon = 1;
  InitialState initial_state = InitialState::unit;

  static TandemSpec closed(std::size_t n, std::size_t c, std::size_t horizon);
  static TandemSpec open_infinite(std::size_t n, std::size_t horizon);
  static TandemSpec blocking(BlockingRule rule, std::size_t n, std::size_t b,
                             std::size_t horizon);

  bool is_open() const { return variant != Variant::closed; }
  bool is_blocking() const {
    return variant == Variant::open_manufacturing ||
           variant == Variant::open_communication;
  }
  BlockingRule rule() const;

  // Checks the fields that every consumer (including the scalar oracle)
  // relies on. Throws ConfigError.
  void validate() const;
  // Additionally rejects what the matrix builders cannot express:
  // heterogeneous c_i / b_i and n = 1 outside the open-infinite variant.
  void validate_for_matrix() const;

  // Number of stacked state vectors in the matrix form (1 when the model
  // is first-order already).
  std::size_t augmentation_order() const;
  std::size_t arity() const { return n * augmentation_order(); }

  // Largest history offset the scalar recursions look back to.
  std::size_t history_depth() const;
};

// tau_ik for stations i = 1..n and customers k = 1..K. Entries are finite
// and nonnegative.
class ServiceTimes {
 public:
  ServiceTimes() = default;
  ServiceTimes(std::size_t stations, std::size_t customers);

  std::size_t stations() const { return stations_; }
  std::size_t customers() const { return customers_; }

  // 1-based station and customer.
  Scalar at(std::size_t station, std::size_t customer) const;
  void set(std::size_t station, std::size_t customer, double tau);

  // tau_k for customer k (1-based) as an n-vector.
  std::span<const Scalar> customer(std::size_t k) const;

  friend bool operator==(const ServiceTimes&, const ServiceTimes&) = default;

 private:
  std::size_t stations_ = 0;
  std::size_t customers_ = 0;
  std::vector<Scalar> data_;  // customer-major
};

enum class ShiftKind { F, G, G_transpose };

// F: circular subdiagonal of e with e at (1, n); G: subdiagonal of e;
// G_transpose: superdiagonal of e.
Matrix shift_matrix(ShiftKind kind, std::size_t n);

// diag(tau_1k, ..., tau_nk); throws DomainError on negative or eps entries.
Matrix service_diag(std::span<const Scalar> tau);

// Closed tandem with one customer per buffer: diag(tau) (F + E).
Matrix transition_closed(std::span<const Scalar> tau);
// Closed tandem with two customers per buffer, acting on (d(k), d(k-1)).
Matrix transition_closed_c2(std::span<const Scalar> tau);
// Closed tandem with c customers per buffer, order-c augmented.
Matrix transition_closed_augmented(std::span<const Scalar> tau, std::size_t c);

// Open tandem with infinite buffers. Lower triangular; entry (i, j) is
// tau_jk + ... + tau_ik. Rows are built by extending row i-1 with tau_ik,
// which costs n(n+1)/2 multiplications (the diagonal load counts as e x tau).
Matrix transition_open_infinite(std::span<const Scalar> tau, OpCounter* ops = nullptr);
// Manufacturing blocking, zero-capacity buffers: the infinite-buffer matrix
// with e on the first superdiagonal.
Matrix transition_mfg_b0(std::span<const Scalar> tau, OpCounter* ops = nullptr);
// Communication blocking, zero-capacity buffers.
Matrix transition_comm_b0(std::span<const Scalar> tau, OpCounter* ops = nullptr);
// Unit-capacity buffers, acting on (d(k), d(k-1)).
Matrix transition_blocking_b1(std::span<const Scalar> tau, BlockingRule rule,
                              OpCounter* ops = nullptr);
// Capacity-b buffers, order-(b+1) augmented. For b = 0 and b = 1 this agrees
// with the closed forms above.
Matrix transition_blocking_augmented(std::span<const Scalar> tau, BlockingRule rule,
                                     std::size_t b, OpCounter* ops = nullptr);

// S_k = E + (diag(tau) G) + ... + (diag(tau) G)^(n-1).
Matrix open_star(std::span<const Scalar> tau, OpCounter* ops = nullptr);

struct Transition {
  Matrix matrix;
  std::size_t arity = 0;
};

// Picks the builder matching a TandemSpec. Throws ConfigError for combinations the
// matrix form does not cover.
Transition build_transition(const TandemSpec& spec, std::span<const Scalar> tau,
                            OpCounter* ops = nullptr);

// Initial state vector d(0) (augmented: history blocks are eps).
Vector initial_state_vector(const TandemSpec& spec);

}  // namespace maxtandem
