#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spinlab/mcmc.hpp"

namespace spinlab {

namespace {

SpinConfig random_start(const GibbsSpec& spec, Rng& rng) {
  const std::size_t n = disorder_size(spec.disorder);
  SpinConfig s(n);
  if (spec.variant == Variant::free) {
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.next_u64() >> 63) s.flip(i);
    }
    return s;
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform_index(i)]);
  for (std::size_t k = 0; k < n / 2; ++k) s.flip(perm[k]);
  return s;
}

}  // namespace

ChainState::ChainState(const GibbsSpec& spec, std::uint64_t seed)
    : spec_(spec), graph_(spec.disorder), sigma_(disorder_size(spec.disorder)), rng_(seed) {
  sigma_ = random_start(spec_, rng_);
  init();
}

ChainState::ChainState(const GibbsSpec& spec, SpinConfig start, std::uint64_t seed)
    : spec_(spec), graph_(spec.disorder), sigma_(std::move(start)), rng_(seed) {
  if (sigma_.size() != graph_.size()) throw std::invalid_argument("start configuration size mismatch");
  init();
}

void ChainState::init() {
  if (!std::isfinite(spec_.beta)) throw std::invalid_argument("beta must be finite");
  if (spec_.variant == Variant::bisection && !is_bisection(sigma_)) {
    throw std::invalid_argument("bisection chain must start in A_n");
  }
  const std::size_t n = sigma_.size();
  fields_ = graph_.local_fields(sigma_);
  position_.assign(n, 0);
  plus_.clear();
  minus_.clear();
  for (std::size_t i = 0; i < n; ++i) {
    auto& list = sigma_.spin(i) == 1 ? plus_ : minus_;
    position_[i] = static_cast<std::uint32_t>(list.size());
    list.push_back(static_cast<std::uint32_t>(i));
  }
  plus_table_.clear();
  if (graph_.integral()) {
    double max_field = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double deg = 0.0;
      for (const auto& nb : graph_.neighbors(i)) deg += std::abs(nb.weight);
      max_field = std::max(max_field, deg);
    }
    table_offset_ = std::llround(max_field);
    plus_table_.resize(static_cast<std::size_t>(2 * table_offset_ + 1));
    for (long long h = -table_offset_; h <= table_offset_; ++h) {
      plus_table_[static_cast<std::size_t>(h + table_offset_)] =
          1.0 / (1.0 + std::exp(2.0 * spec_.beta * static_cast<double>(h)));
    }
  }
}

double ChainState::energy() const {
  double pair = 0.0;
  for (std::size_t i = 0; i < sigma_.size(); ++i) pair += sigma_.spin(i) * fields_[i];
  return graph_.diagonal() + 0.5 * pair;
}

double ChainState::field_error() const {
  const auto fresh = graph_.local_fields(sigma_);
  double err = 0.0;
  for (std::size_t i = 0; i < fresh.size(); ++i) err = std::max(err, std::abs(fresh[i] - fields_[i]));
  return err;
}

double ChainState::plus_probability(std::size_t site) const {
  const double h = fields_[site];
  if (!plus_table_.empty()) {
    return plus_table_[static_cast<std::size_t>(std::llround(h) + table_offset_)];
  }
  return 1.0 / (1.0 + std::exp(2.0 * spec_.beta * h));
}

double ChainState::swap_delta(std::size_t plus_site, std::size_t minus_site) const {
  const double si = sigma_.spin(plus_site);
  const double sj = sigma_.spin(minus_site);
  return -2.0 * si * fields_[plus_site] - 2.0 * sj * fields_[minus_site] +
         4.0 * graph_.weight(plus_site, minus_site) * si * sj;
}

double ChainState::swap_acceptance(double delta) const {
  const double x = -spec_.beta * delta;
  return x >= 0.0 ? 1.0 : std::exp(x);
}

void ChainState::flip(std::size_t site) {
  const int before = sigma_.spin(site);
  sigma_.flip(site);
  const double s2 = -2.0 * before;
  for (const auto& nb : graph_.neighbors(site)) fields_[nb.site] += s2 * nb.weight;
  auto& from = before == 1 ? plus_ : minus_;
  auto& to = before == 1 ? minus_ : plus_;
  const std::uint32_t last = from.back();
  from[position_[site]] = last;
  position_[last] = position_[site];
  from.pop_back();
  position_[site] = static_cast<std::uint32_t>(to.size());
  to.push_back(static_cast<std::uint32_t>(site));
}

void ChainState::heat_bath_update(std::size_t site) {
  const int next = rng_.uniform01() < plus_probability(site) ? 1 : -1;
  if (next != sigma_.spin(site)) flip(site);
}

void ChainState::swap_update() {
  if (plus_.empty() || minus_.empty()) return;
  const std::size_t i = plus_[rng_.uniform_index(plus_.size())];
  const std::size_t j = minus_[rng_.uniform_index(minus_.size())];
  const double acc = swap_acceptance(swap_delta(i, j));
  if (acc >= 1.0 || rng_.uniform01() < acc) {
    flip(i);
    flip(j);
  }
}

void ChainState::glauber_sweep() {
  if (spec_.variant != Variant::free) throw std::logic_error("glauber_sweep requires the free variant");
  const std::size_t n = sigma_.size();
  for (std::size_t k = 0; k < n; ++k) heat_bath_update(rng_.uniform_index(n));
  ++sweeps_;
}

void ChainState::swap_sweep() {
  if (spec_.variant != Variant::bisection) {
    throw std::logic_error("swap_sweep requires the bisection variant");
  }
  const std::size_t n = sigma_.size();
  for (std::size_t k = 0; k < n; ++k) swap_update();
  ++sweeps_;
}

void ChainState::sweep() {
  if (spec_.variant == Variant::free) {
    glauber_sweep();
  } else {
    swap_sweep();
  }
}

ChainState& glauber_sweep(ChainState& state) {
  state.glauber_sweep();
  return state;
}

ChainState& swap_sweep(ChainState& state) {
  state.swap_sweep();
  return state;
}

std::vector<std::pair<std::uint64_t, double>> single_update_transitions(const ChainState& state) {
  const std::size_t n = state.size();
  if (n > 62) throw std::invalid_argument("single_update_transitions: n <= 62");
  const std::uint64_t bits = state.sigma().bits();
  std::vector<std::pair<std::uint64_t, double>> out;
  double stay = 0.0;
  if (state.variant() == Variant::free) {
    const double pick = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double p_plus = state.plus_probability(k);
      const double p_flip = state.sigma().spin(k) == 1 ? 1.0 - p_plus : p_plus;
      out.emplace_back(bits ^ (std::uint64_t{1} << k), pick * p_flip);
      stay += pick * (1.0 - p_flip);
    }
  } else {
    const auto plus = state.plus_sites();
    const auto minus = state.minus_sites();
    if (plus.empty() || minus.empty()) return {{bits, 1.0}};
    const double pick = 1.0 / static_cast<double>(plus.size() * minus.size());
    for (std::uint32_t i : plus) {
      for (std::uint32_t j : minus) {
        const double acc = state.swap_acceptance(state.swap_delta(i, j));
        out.emplace_back(bits ^ (std::uint64_t{1} << i) ^ (std::uint64_t{1} << j), pick * acc);
        stay += pick * (1.0 - acc);
      }
    }
  }
  out.emplace_back(bits, stay);
  return out;
}

}  // namespace spinlab
