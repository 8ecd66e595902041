#pragma once

// Parameter-counting for families of k pure states in dimension n: how many
// real degrees of freedom remain after gauge freedoms (nu), and how many
// volume invariants are available to encode them (tau).

#include <stdexcept>
#include <string>
#include <vector>

#include "ensvol/common.hpp"

namespace ensvol {

// Exact binomial coefficient C(k, i) in 64-bit integer arithmetic; exact for
// all i at least through k = 60.
inline long long binomial(int k, int i) {
  if (k < 0) throw std::invalid_argument("binomial: negative k");
  return detail::binomial_ll(k, i);
}

// Real parameter count of a k-state family in dimension n, modulo global
// unitaries and per-state phases: nu = k(2n - 2) - (n^2 - 1).
inline long long nu_parameters(int k, int n) {
  if (n < 1 || k < n) {
    throw std::invalid_argument("nu_parameters: need k >= n >= 1");
  }
  return static_cast<long long>(k) * (2LL * n - 2) -
         (static_cast<long long>(n) * n - 1);
}

// Number of stored volume invariants: tau = sum_{i=2}^{n} C(k, i).
inline long long tau_invariants(int k, int n) {
  if (n < 2 || k < n) {
    throw std::invalid_argument("tau_invariants: need k >= n >= 2");
  }
  long long total = 0;
  for (int i = 2; i <= n; ++i) total += binomial(k, i);
  return total;
}

struct DofRow {
  int k = 0;
  int n = 0;
  long long nu = 0;
  long long tau = 0;
};

// All (k, n) rows with 2 <= n <= k <= k_max.  The invariant count never
// falls short of the parameter count; rows violating that would indicate a
// counting bug and are rejected outright (verified exhaustively in tests for
// k <= 12).
inline std::vector<DofRow> dof_table(int k_max) {
  if (k_max < 2) throw std::invalid_argument("dof_table: need k_max >= 2");
  std::vector<DofRow> rows;
  for (int k = 2; k <= k_max; ++k) {
    for (int n = 2; n <= k; ++n) {
      DofRow row{k, n, nu_parameters(k, n), tau_invariants(k, n)};
      if (row.tau < row.nu) {
        throw std::logic_error("dof_table: invariant count " +
                               std::to_string(row.tau) +
                               " below parameter count " + std::to_string(row.nu) +
                               " at k=" + std::to_string(k) +
                               ", n=" + std::to_string(n));
      }
      rows.push_back(row);
    }
  }
  return rows;
}

// Frozen expected values for the k <= 5 table, used by the self-check mode.
inline std::vector<DofRow> dof_table_reference() {
  return {
      {2, 2, 1, 1},  {3, 2, 3, 3},   {3, 3, 4, 4},   {4, 2, 5, 6},
      {4, 3, 8, 10}, {4, 4, 9, 11},  {5, 2, 7, 10},  {5, 3, 12, 20},
      {5, 4, 15, 25}, {5, 5, 16, 26},
  };
}

}  // namespace ensvol
