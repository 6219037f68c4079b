#include "spinlab/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spinlab {

namespace {

void require_config_size(const SpinConfig& sigma, std::size_t n) {
  if (sigma.size() != n) {
    throw std::invalid_argument("dimension mismatch: configuration has " +
                                std::to_string(sigma.size()) + " sites, disorder has " +
                                std::to_string(n));
  }
}

void require_site(std::size_t site, std::size_t n) {
  if (site >= n) {
    throw std::out_of_range("site " + std::to_string(site) + " out of range for n=" +
                            std::to_string(n));
  }
}

}  // namespace

DenseDisorder::DenseDisorder(std::size_t n) : n_(n), entries_(n * n, 0.0) {
  if (n == 0) throw std::invalid_argument("DenseDisorder requires n >= 1");
}

DenseDisorder::DenseDisorder(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n == 0) throw std::invalid_argument("DenseDisorder requires n >= 1");
  if (entries_.size() != n * n) {
    throw std::invalid_argument("DenseDisorder expects n*n entries");
  }
  for (double e : entries_) {
    if (!std::isfinite(e)) throw std::invalid_argument("DenseDisorder entries must be finite");
  }
}

void DenseDisorder::set(std::size_t i, std::size_t j, double value) {
  require_site(i, n_);
  require_site(j, n_);
  if (!std::isfinite(value)) throw std::invalid_argument("DenseDisorder entries must be finite");
  entries_[i * n_ + j] = value;
}

DenseDisorder DenseDisorder::plus_unit(std::size_t i, std::size_t j, double xi) const {
  DenseDisorder out = *this;
  out.set(i, j, (*this)(i, j) + xi);
  return out;
}

SparseDisorder::SparseDisorder(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("SparseDisorder requires n >= 1");
}

SparseDisorder::SparseDisorder(std::size_t n, std::vector<Edge> edges) : n_(n) {
  if (n == 0) throw std::invalid_argument("SparseDisorder requires n >= 1");
  for (const Edge& e : edges) {
    if (e.i >= n || e.j >= n) throw std::out_of_range("edge index out of range");
    if (e.multiplicity == 0) throw std::invalid_argument("edge multiplicity must be >= 1");
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (const Edge& e : edges) {
    if (!edges_.empty() && edges_.back().i == e.i && edges_.back().j == e.j) {
      edges_.back().multiplicity += e.multiplicity;
    } else {
      edges_.push_back(e);
    }
    total_ += e.multiplicity;
  }
}

std::uint64_t SparseDisorder::multiplicity(std::size_t i, std::size_t j) const {
  require_site(i, n_);
  require_site(j, n_);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{i, j},
                             [](const Edge& e, const std::pair<std::size_t, std::size_t>& key) {
                               return e.i != key.first ? e.i < key.first : e.j < key.second;
                             });
  if (it != edges_.end() && it->i == i && it->j == j) return it->multiplicity;
  return 0;
}

std::uint64_t SparseDisorder::self_loop_total() const noexcept {
  std::uint64_t s = 0;
  for (const Edge& e : edges_) {
    if (e.i == e.j) s += e.multiplicity;
  }
  return s;
}

SparseDisorder operator+(const SparseDisorder& a, const SparseDisorder& b) {
  if (a.size() != b.size()) throw std::invalid_argument("cannot add disorders of different n");
  std::vector<Edge> all(a.edges().begin(), a.edges().end());
  all.insert(all.end(), b.edges().begin(), b.edges().end());
  return SparseDisorder(a.size(), std::move(all));
}

DenseDisorder to_dense(const SparseDisorder& a) {
  DenseDisorder out(a.size());
  for (const Edge& e : a.edges()) out.set(e.i, e.j, static_cast<double>(e.multiplicity));
  return out;
}

std::size_t disorder_size(const Disorder& x) {
  return std::visit([](const auto& d) { return d.size(); }, x);
}

double hamiltonian(const SpinConfig& sigma, const DenseDisorder& x) {
  const std::size_t n = x.size();
  require_config_size(sigma, n);
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += x(i, j) * sigma.spin(j);
    h += sigma.spin(i) * row;
  }
  return h;
}

double hamiltonian(const SpinConfig& sigma, const SparseDisorder& a) {
  require_config_size(sigma, a.size());
  long long h = 0;
  for (const Edge& e : a.edges()) {
    h += static_cast<long long>(e.multiplicity) * sigma.spin(e.i) * sigma.spin(e.j);
  }
  return static_cast<double>(h);
}

double hamiltonian(const SpinConfig& sigma, const Disorder& x) {
  return std::visit([&](const auto& d) { return hamiltonian(sigma, d); }, x);
}

double hamiltonian_delta(const SpinConfig& sigma, std::size_t site, const DenseDisorder& x) {
  const std::size_t n = x.size();
  require_config_size(sigma, n);
  require_site(site, n);
  double field = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == site) continue;
    field += (x(site, j) + x(j, site)) * sigma.spin(j);
  }
  return -2.0 * sigma.spin(site) * field;
}

double hamiltonian_delta(const SpinConfig& sigma, std::size_t site, const SparseDisorder& a) {
  require_config_size(sigma, a.size());
  require_site(site, a.size());
  long long field = 0;
  for (const Edge& e : a.edges()) {
    if (e.i == e.j) continue;
    if (e.i == site) field += static_cast<long long>(e.multiplicity) * sigma.spin(e.j);
    if (e.j == site) field += static_cast<long long>(e.multiplicity) * sigma.spin(e.i);
  }
  return static_cast<double>(-2 * sigma.spin(site) * field);
}

double hamiltonian_delta(const SpinConfig& sigma, std::size_t site, const Disorder& x) {
  return std::visit([&](const auto& d) { return hamiltonian_delta(sigma, site, d); }, x);
}

CrossTerms cross_terms(const SpinConfig& sigma, const SpinConfig& tau, const SparseDisorder& a) {
  require_config_size(sigma, a.size());
  require_config_size(tau, a.size());
  if (!is_bisection(tau)) throw std::invalid_argument("cross_terms: tau is not a bisection");
  const std::size_t n = a.size();
  const std::size_t delta = hamming_distance(sigma, tau);
  if (delta != bisection_flip_count(sigma)) {
    throw std::invalid_argument("cross_terms: tau is not a nearest bisection of sigma");
  }
  // Orient so that flipped sites carry tau(i) = +1; H is invariant under global negation.
  int orient = 1;
  bool first = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (sigma.spin(i) == tau.spin(i)) continue;
    if (first) {
      orient = tau.spin(i);
      first = false;
    } else if (tau.spin(i) != orient) {
      throw std::invalid_argument("cross_terms: flipped sites of tau do not share a sign");
    }
  }
  auto flipped = [&](std::size_t i) { return sigma.spin(i) != tau.spin(i); };
  auto plus_side = [&](std::size_t j) { return orient * tau.spin(j) == 1; };

  CrossTerms out;
  out.delta = delta;
  for (const Edge& e : a.edges()) {
    const bool si = flipped(e.i);
    const bool sj = flipped(e.j);
    if (si == sj) continue;
    const std::size_t outside = si ? e.j : e.i;
    const bool directed = si;  // the ordered entry starts in S
    if (plus_side(outside)) {
      out.u += e.multiplicity;
      if (directed) out.u_directed += e.multiplicity;
    } else {
      out.v += e.multiplicity;
      if (directed) out.v_directed += e.multiplicity;
    }
  }
  return out;
}

}  // namespace spinlab
