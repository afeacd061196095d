// Independent reference computations the tests check the solvers against.
// Everything here is brute force on purpose and shares no code with the
// implementation paths under test.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "tariff/numerics.hpp"

namespace oracles {

// Scheduler costs in exact integer units: prices in hundredths of a cent,
// energies in tenths of a kWh, cost = sum(price * energy).

// Best cost over every size-`full_slots` subset of the window (plus one
// partial slot carrying `remainder_deci` when nonzero).
std::int64_t best_interruptible_cost(const std::vector<std::int64_t>& price_h, int full_slots,
                                     std::int64_t rated_deci, std::int64_t remainder_deci);

// Best cost over every contiguous start of a length-`run` block.
std::int64_t best_non_interruptible_cost(const std::vector<std::int64_t>& price_h, int run,
                                         std::int64_t rated_deci);

// Best cost over every LP vertex: a subset of slots at the ceiling, one
// optional fractional slot, the rest at the floor, total exactly total_deci.
std::int64_t best_curtailable_cost(const std::vector<std::int64_t>& price_h,
                                   std::int64_t level_min_deci, std::int64_t level_max_deci,
                                   std::int64_t total_deci);

// Integer cost of a returned consumption profile restricted to the window.
std::int64_t profile_cost(const std::vector<std::int64_t>& price_h,
                          const std::vector<double>& kwh, int window_first);

// Exhaustive basic-solution enumeration for small dense LPs. Returns the best
// feasible vertex objective; requires a bounded feasible problem.
double lp_vertex_optimum(const tariff::numerics::LinearProgram& lp, double feas_tol = 1e-7);

// Long-run projected gradient for box-constrained QPs (A = I pattern).
Eigen::VectorXd projected_gradient_qp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& q,
                                      const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                      int max_iter = 2000000, double tol = 1e-10);

}  // namespace oracles
