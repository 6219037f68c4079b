#include "spinlab/coupling_graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace spinlab {

CouplingGraph::CouplingGraph(const DenseDisorder& x) {
  const std::size_t n = x.size();
  std::vector<std::vector<Neighbor>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    diagonal_ += x(i, i);
    rows[i].reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) rows[i].push_back({static_cast<std::uint32_t>(j), x(i, j) + x(j, i)});
    }
  }
  integral_ = false;
  build(n, std::move(rows));
}

CouplingGraph::CouplingGraph(const SparseDisorder& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<Neighbor>> rows(n);
  for (const Edge& e : a.edges()) {
    const auto m = static_cast<double>(e.multiplicity);
    if (e.i == e.j) {
      diagonal_ += m;
      continue;
    }
    rows[e.i].push_back({e.j, m});
    rows[e.j].push_back({e.i, m});
  }
  for (auto& row : rows) {
    std::sort(row.begin(), row.end(),
              [](const Neighbor& p, const Neighbor& q) { return p.site < q.site; });
    std::vector<Neighbor> merged;
    merged.reserve(row.size());
    for (const Neighbor& nb : row) {
      if (!merged.empty() && merged.back().site == nb.site) {
        merged.back().weight += nb.weight;
      } else {
        merged.push_back(nb);
      }
    }
    row = std::move(merged);
  }
  integral_ = true;
  build(n, std::move(rows));
}

CouplingGraph::CouplingGraph(const Disorder& x)
    : CouplingGraph(std::holds_alternative<DenseDisorder>(x)
                        ? CouplingGraph(std::get<DenseDisorder>(x))
                        : CouplingGraph(std::get<SparseDisorder>(x))) {}

void CouplingGraph::build(std::size_t n, std::vector<std::vector<Neighbor>> rows) {
  n_ = n;
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + rows[i].size();
  adj_.clear();
  adj_.reserve(offsets_[n]);
  for (auto& row : rows) adj_.insert(adj_.end(), row.begin(), row.end());
}

double CouplingGraph::weight(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw std::out_of_range("CouplingGraph::weight index out of range");
  auto row = neighbors(i);
  auto it = std::lower_bound(row.begin(), row.end(), j,
                             [](const Neighbor& nb, std::size_t s) { return nb.site < s; });
  return (it != row.end() && it->site == j) ? it->weight : 0.0;
}

double CouplingGraph::local_field(const SpinConfig& sigma, std::size_t i) const {
  double h = 0.0;
  for (const Neighbor& nb : neighbors(i)) h += nb.weight * sigma.spin(nb.site);
  return h;
}

std::vector<double> CouplingGraph::local_fields(const SpinConfig& sigma) const {
  if (sigma.size() != n_) throw std::invalid_argument("configuration size mismatch");
  std::vector<double> h(n_);
  for (std::size_t i = 0; i < n_; ++i) h[i] = local_field(sigma, i);
  return h;
}

double CouplingGraph::energy(const SpinConfig& sigma) const {
  if (sigma.size() != n_) throw std::invalid_argument("configuration size mismatch");
  double pair = 0.0;
  for (std::size_t i = 0; i < n_; ++i) pair += sigma.spin(i) * local_field(sigma, i);
  return diagonal_ + 0.5 * pair;
}

double CouplingGraph::energy_bits(std::uint64_t bits) const {
  auto s = [bits](std::size_t k) { return ((bits >> k) & 1u) ? -1.0 : 1.0; };
  double pair = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double h = 0.0;
    for (const Neighbor& nb : neighbors(i)) h += nb.weight * s(nb.site);
    pair += s(i) * h;
  }
  return diagonal_ + 0.5 * pair;
}

}  // namespace spinlab
