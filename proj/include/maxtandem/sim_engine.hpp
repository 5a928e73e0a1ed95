#pragma once

/**
 * @file sim_engine.hpp
 * @brief Trajectory simulation of d(k) = T_k d(k-1) and its scalar oracle.
 *
 * Four strategies produce identical trajectories and differ only in how
 * the work is organised and accounted for:
 *
 *  - serial: one scalar processor. The open-infinite model uses the
 *    row-extension build of its triangular T_k followed by a triangular
 *    matrix-vector product; everything else uses the generic builder and
 *    a dense product.
 *  - closed sparse: the two-entries-per-row structure of the closed c = 1
 *    matrix, 2n scalar operations per customer.
 *  - vectorized: whole-row vector operations, with the max over each row
 *    taken by recursive doubling.
 *  - batched: customers are processed in batches of P; the batch's
 *    matrices are built concurrently, then applied in order.
 *
 * The oracle evaluates the ordinary max/+ recursions directly, one station
 * at a time, and supports heterogeneous populations and capacities.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "maxtandem/maxplus.hpp"
#include "maxtandem/tandem_models.hpp"

namespace maxtandem {

struct OpLedger {
  std::uint64_t scalar_oplus = 0;
  std::uint64_t scalar_otimes = 0;
  // Vector-processor units: whole-row builds, componentwise adds and
  // recursive-doubling stages. vector_ops is their sum.
  std::uint64_t vector_ops = 0;
  std::uint64_t vector_build_ops = 0;
  std::uint64_t vector_add_ops = 0;
  std::uint64_t vector_reduce_stages = 0;
  std::uint64_t parallel_ops = 0;
  std::uint64_t batches = 0;
  std::uint64_t steps = 0;
  // Peak working-set size in scalar cells; merged by max.
  std::uint64_t memory_cells = 0;

  std::uint64_t scalar_ops() const { return scalar_oplus + scalar_otimes; }
  void add_scalar(const OpCounter& c) {
    scalar_oplus += c.oplus;
    scalar_otimes += c.otimes;
  }
  OpLedger& operator+=(const OpLedger& o);
  friend bool operator==(const OpLedger&, const OpLedger&) = default;
};

class Trajectory {
 public:
  Trajectory(TandemSpec spec, std::size_t arity);

  const TandemSpec& spec() const { return spec_; }
  std::size_t arity() const { return arity_; }
  // Customers simulated; states run over k = 0..horizon().
  std::size_t horizon() const { return states_.size() - 1; }

  // Full (possibly augmented) state vector for k = 0..K.
  std::span<const Scalar> state(std::size_t k) const { return states_.at(k); }
  // Departure epochs d_1(k)..d_n(k), the leading block of the state.
  std::span<const Scalar> departures(std::size_t k) const {
    return state(k).first(spec_.n);
  }

  void push(Vector state);

  OpLedger& ledger() { return ledger_; }
  const OpLedger& ledger() const { return ledger_; }

 private:
  TandemSpec spec_;
  std::size_t arity_;
  std::vector<Vector> states_;
  OpLedger ledger_;
};

Trajectory simulate_serial(const TandemSpec& spec, const ServiceTimes& tau);
Trajectory simulate_closed_sparse(const TandemSpec& spec, const ServiceTimes& tau);
Trajectory simulate_vectorized(const TandemSpec& spec, const ServiceTimes& tau);
// workers = 0 picks min(P, hardware threads); any value gives the same
// trajectory.
Trajectory simulate_batched(const TandemSpec& spec, const ServiceTimes& tau,
                            std::size_t processors, std::size_t workers = 0);

Trajectory oracle_lindley(const TandemSpec& spec, const ServiceTimes& tau);

// Number of recursive-doubling stages needed to reduce m values: ceil(log2 m).
std::size_t doubling_stages(std::size_t m);

struct Mismatch {
  std::size_t k = 0;
  std::size_t station = 0;  // 1-based
  Scalar lhs;
  Scalar rhs;
};

// First departure epoch where the two trajectories differ.
std::optional<Mismatch> first_mismatch(const Trajectory& a, const Trajectory& b);
// Full (augmented) states compare equal for every k.
bool identical_states(const Trajectory& a, const Trajectory& b);

}  // namespace maxtandem
