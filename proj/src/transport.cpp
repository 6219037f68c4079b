#include "spinlab/transport.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "spinlab/exact.hpp"

namespace spinlab {

namespace {

struct Cell {
  std::size_t row;
  std::size_t col;
  double flow;
};

void require_pair(const ExplicitDistribution& p, const ExplicitDistribution& q) {
  p.validate();
  q.validate();
  if (p.n != q.n) throw std::invalid_argument("distributions differ in n");
  if (p.n > kTransportCap) {
    throw std::invalid_argument("exact transport needs n <= " + std::to_string(kTransportCap));
  }
}

std::vector<std::uint64_t> support(const ExplicitDistribution& p) {
  std::vector<std::uint64_t> s;
  for (std::size_t k = 0; k < p.probabilities.size(); ++k) {
    if (p.probabilities[k] > 0.0) s.push_back(k);
  }
  return s;
}

}  // namespace

void ExplicitDistribution::validate() const {
  if (n == 0 || n > 62) throw std::invalid_argument("ExplicitDistribution: bad n");
  if (probabilities.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("ExplicitDistribution: expected 2^n probabilities");
  }
  double sum = 0.0;
  for (double v : probabilities) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("ExplicitDistribution: probabilities must be finite and >= 0");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("ExplicitDistribution: must sum to 1");
}

ExplicitDistribution ExplicitDistribution::point_mass(std::size_t n, std::uint64_t bits) {
  ExplicitDistribution d{n, std::vector<double>(std::size_t{1} << n, 0.0)};
  d.probabilities.at(bits) = 1.0;
  return d;
}

ExplicitDistribution ExplicitDistribution::uniform(std::size_t n) {
  const std::size_t size = std::size_t{1} << n;
  return {n, std::vector<double>(size, 1.0 / static_cast<double>(size))};
}

ExplicitDistribution ExplicitDistribution::product(const std::vector<double>& plus) {
  const std::size_t n = plus.size();
  ExplicitDistribution d{n, std::vector<double>(std::size_t{1} << n, 1.0)};
  for (std::size_t k = 0; k < d.probabilities.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) d.probabilities[k] *= ((k >> i) & 1u) ? 1.0 - plus[i] : plus[i];
  }
  return d;
}

double transport_cost(std::uint64_t a, std::uint64_t b, std::size_t n) {
  return 4.0 * std::popcount(a ^ b) / static_cast<double>(n);
}

double optimal_transport_cost(const ExplicitDistribution& p, const ExplicitDistribution& q) {
  require_pair(p, q);
  const std::size_t n = p.n;
  const auto rows = support(p);
  const auto cols = support(q);
  const std::size_t m = rows.size();
  const std::size_t k = cols.size();
  auto cost = [&](std::size_t r, std::size_t c) { return transport_cost(rows[r], cols[c], n); };

  // Northwest-corner start: exactly m + k - 1 basic cells, degenerate ones at 0.
  std::vector<Cell> basis;
  {
    std::vector<double> rs(m), rd(k);
    for (std::size_t r = 0; r < m; ++r) rs[r] = p.probabilities[rows[r]];
    for (std::size_t c = 0; c < k; ++c) rd[c] = q.probabilities[cols[c]];
    std::size_t r = 0, c = 0;
    for (;;) {
      const double x = std::min(rs[r], rd[c]);
      basis.push_back({r, c, x});
      rs[r] -= x;
      rd[c] -= x;
      if (r == m - 1 && c == k - 1) break;
      if (r == m - 1) {
        ++c;
      } else if (c == k - 1 || rs[r] <= rd[c]) {
        ++r;
      } else {
        ++c;
      }
    }
  }

  // Nodes: rows 0..m-1, columns m..m+k-1.
  const std::size_t nodes = m + k;
  std::vector<std::vector<std::size_t>> adj(nodes);
  std::vector<double> potential(nodes);
  std::vector<char> seen(nodes);
  std::vector<std::size_t> parent_cell(nodes), order;
  order.reserve(nodes);

  const std::size_t max_iter = 50 * (m + k) * (m + k) + 1000;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > max_iter) throw std::runtime_error("optimal_transport_cost: simplex did not converge");
    for (auto& a : adj) a.clear();
    for (std::size_t e = 0; e < basis.size(); ++e) {
      adj[basis[e].row].push_back(e);
      adj[m + basis[e].col].push_back(e);
    }
    // Potentials u_r + v_c = cost(r, c) on the basis tree.
    std::fill(seen.begin(), seen.end(), 0);
    order.assign(1, 0);
    seen[0] = 1;
    potential[0] = 0.0;
    for (std::size_t h = 0; h < order.size(); ++h) {
      const std::size_t v = order[h];
      for (std::size_t e : adj[v]) {
        const Cell& cell = basis[e];
        const std::size_t other = v < m ? m + cell.col : cell.row;
        if (seen[other]) continue;
        seen[other] = 1;
        potential[other] = cost(cell.row, cell.col) - potential[v];
        order.push_back(other);
      }
    }
    if (order.size() != nodes) throw std::logic_error("transport basis is not a spanning tree");

    double best = -1e-12;
    std::size_t er = m, ec = k;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        const double reduced = cost(r, c) - potential[r] - potential[m + c];
        if (reduced < best) {
          best = reduced;
          er = r;
          ec = c;
        }
      }
    }
    if (er == m) break;

    // Tree path from row er to column ec.
    std::fill(seen.begin(), seen.end(), 0);
    order.assign(1, er);
    seen[er] = 1;
    for (std::size_t h = 0; h < order.size() && !seen[m + ec]; ++h) {
      const std::size_t v = order[h];
      for (std::size_t e : adj[v]) {
        const Cell& cell = basis[e];
        const std::size_t other = v < m ? m + cell.col : cell.row;
        if (seen[other]) continue;
        seen[other] = 1;
        parent_cell[other] = e;
        order.push_back(other);
      }
    }
    std::vector<std::size_t> path;  // from the column end back to row er
    for (std::size_t v = m + ec; v != er;) {
      const std::size_t e = parent_cell[v];
      path.push_back(e);
      v = (v >= m) ? basis[e].row : m + basis[e].col;
    }
    // path[0] touches column ec and loses flow; signs alternate from there.
    double theta = INFINITY;
    std::size_t leave = path.size();
    for (std::size_t s = 0; s < path.size(); s += 2) {
      if (basis[path[s]].flow < theta) {
        theta = basis[path[s]].flow;
        leave = s;
      }
    }
    for (std::size_t s = 0; s < path.size(); ++s) {
      basis[path[s]].flow += (s % 2 == 0) ? -theta : theta;
    }
    basis[path[leave]] = {er, ec, theta};
  }

  double total = 0.0;
  for (const Cell& cell : basis) total += cell.flow * cost(cell.row, cell.col);
  return std::max(total, 0.0);
}

double exact_w2(const ExplicitDistribution& p, const ExplicitDistribution& q) {
  return std::sqrt(optimal_transport_cost(p, q));
}

double expected_abs_overlap(const ExplicitDistribution& p, const ExplicitDistribution& q) {
  p.validate();
  q.validate();
  if (p.n != q.n) throw std::invalid_argument("distributions differ in n");
  const auto nn = static_cast<double>(p.n);
  const auto sp = support(p);
  const auto sq = support(q);
  double s = 0.0;
  for (std::uint64_t a : sp) {
    double row = 0.0;
    for (std::uint64_t b : sq) {
      row += q.probabilities[b] * std::abs(nn - 2.0 * std::popcount(a ^ b)) / nn;
    }
    s += p.probabilities[a] * row;
  }
  return s;
}

W2BoundReport w2_overlap_bound(const ExplicitDistribution& mu1, const ExplicitDistribution& mu2,
                               const ExplicitDistribution& nu1, const ExplicitDistribution& nu2) {
  W2BoundReport r;
  r.lhs = std::abs(expected_abs_overlap(mu1, nu1) - expected_abs_overlap(mu2, nu2));
  r.rhs = exact_w2(mu1, mu2) + exact_w2(nu1, nu2);
  r.holds = r.lhs <= r.rhs + 1e-9;
  return r;
}

bool w2_overlap_bound_check(const ExplicitDistribution& mu1, const ExplicitDistribution& mu2,
                            const ExplicitDistribution& nu1, const ExplicitDistribution& nu2) {
  return w2_overlap_bound(mu1, mu2, nu1, nu2).holds;
}

}  // namespace spinlab
