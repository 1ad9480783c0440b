#include "oblivmatch/oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oblivmatch {

namespace {

void require_shape(const BipartiteInstance& instance, const BitMatrix& bits) {
  if (bits.rows() != instance.n_left() || bits.cols() != instance.n_right())
    throw std::invalid_argument("edge-bit matrix does not match instance shape");
}

// Square min-cost assignment via shortest augmenting paths with potentials
// (Kuhn-Munkres / Jonker-Volgenant family). Returns the column of each row.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);    // row owning column j
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);  // predecessor column

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (p[static_cast<std::size_t>(j)])
      row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return row_to_col;
}

OptimalResult finish(const BipartiteInstance& instance,
                     std::vector<std::pair<int, int>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  OptimalResult result;
  result.matching.pairs = std::move(pairs);
  result.matching.total_weight = matching_weight(instance, result.matching.pairs);
  result.value = result.matching.total_weight;
  return result;
}

}  // namespace

OptimalResult max_weight_matching(const BipartiteInstance& instance,
                                  const BitMatrix& bits) {
  require_shape(instance, bits);
  const Eigen::Index nl = instance.n_left();
  const Eigen::Index nr = instance.n_right();
  const Eigen::Index n = std::max(nl, nr);

  // Minimize negated profit; absent pairs and padding carry profit 0.
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < nl; ++i)
    for (Eigen::Index j = 0; j < nr; ++j)
      if (bits(i, j)) cost(i, j) = -instance.weights(i, j);

  const std::vector<int> row_to_col = solve_assignment(cost);

  std::vector<std::pair<int, int>> pairs;
  for (Eigen::Index i = 0; i < nl; ++i) {
    const int j = row_to_col[static_cast<std::size_t>(i)];
    if (j >= 0 && j < nr && bits(i, j)) pairs.emplace_back(static_cast<int>(i), j);
  }
  return finish(instance, pairs);
}

OptimalResult brute_force_mwm(const BipartiteInstance& instance,
                              const BitMatrix& bits) {
  require_shape(instance, bits);
  const bool transpose = instance.n_right() > instance.n_left();
  const Eigen::Index big = transpose ? instance.n_right() : instance.n_left();
  const Eigen::Index small = transpose ? instance.n_left() : instance.n_right();
  if (small > 10)
    throw std::invalid_argument("instance too large for brute force (min side > 10)");

  const auto weight_at = [&](Eigen::Index i, Eigen::Index j) {
    return transpose ? instance.weights(j, i) : instance.weights(i, j);
  };
  const auto present_at = [&](Eigen::Index i, Eigen::Index j) {
    return transpose ? bits(j, i) : bits(i, j);
  };

  const std::size_t n_masks = std::size_t{1} << small;
  // dp[mask]: best total over rows seen so far using small-side subset mask.
  std::vector<double> dp(n_masks, 0.0);
  std::vector<double> next(n_masks, 0.0);
  // choice[i][mask]: small-side partner of row i under mask, or -1 for skip.
  std::vector<std::vector<int>> choice(static_cast<std::size_t>(big),
                                       std::vector<int>(n_masks, -1));

  for (Eigen::Index i = 0; i < big; ++i) {
    for (std::size_t mask = 0; mask < n_masks; ++mask) {
      double best = dp[mask];
      int pick = -1;
      for (Eigen::Index j = 0; j < small; ++j) {
        if (!(mask & (std::size_t{1} << j)) || !present_at(i, j)) continue;
        const double cand = dp[mask ^ (std::size_t{1} << j)] + weight_at(i, j);
        if (cand > best) {
          best = cand;
          pick = static_cast<int>(j);
        }
      }
      next[mask] = best;
      choice[static_cast<std::size_t>(i)][mask] = pick;
    }
    dp.swap(next);
  }

  std::vector<std::pair<int, int>> pairs;
  std::size_t mask = n_masks - 1;
  for (Eigen::Index i = big - 1; i >= 0; --i) {
    const int j = choice[static_cast<std::size_t>(i)][mask];
    if (j >= 0) {
      pairs.emplace_back(transpose ? j : static_cast<int>(i),
                         transpose ? static_cast<int>(i) : j);
      mask ^= std::size_t{1} << j;
    }
  }
  return finish(instance, pairs);
}

}  // namespace oblivmatch
