#include "dispersia/fourier_state.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "dispersia/error.hpp"

namespace dispersia {

FourierState::FourierState(int d) : d_(d) { check_dimension(d); }

FourierState FourierState::from_modes(const FrequencySet& modes, Complex amplitude) {
  FourierState f(modes.dimension);
  for (const auto& k : modes.points) f.set(k, amplitude);
  return f;
}

FourierState FourierState::mode(const LatticePoint& k, Complex amplitude) {
  FourierState f(k.dim());
  f.set(k, amplitude);
  return f;
}

void FourierState::check_point(const LatticePoint& k) const {
  if (k.dim() != d_)
    throw InvalidArgument("lattice point of dimension " + std::to_string(k.dim()) +
                          " used with a state of dimension " + std::to_string(d_));
}

void FourierState::set(const LatticePoint& k, Complex a) {
  check_point(k);
  if (a == Complex{}) {
    entries_.erase(k);
    return;
  }
  entries_[k] = a;
}

void FourierState::add(const LatticePoint& k, Complex a) { set(k, coefficient(k) + a); }

Complex FourierState::coefficient(const LatticePoint& k) const {
  check_point(k);
  auto it = entries_.find(k);
  return it == entries_.end() ? Complex{} : it->second;
}

double FourierState::norm_sq() const {
  double s = 0;
  for (const auto& [k, a] : entries_) s += std::norm(a);
  return s;
}

double FourierState::norm() const { return std::sqrt(norm_sq()); }

std::int64_t FourierState::max_abs_frequency() const {
  std::int64_t m = 0;
  for (const auto& [k, a] : entries_) m = std::max(m, k.max_abs());
  return m;
}

std::int64_t FourierState::max_norm_sq() const {
  std::int64_t m = 0;
  for (const auto& [k, a] : entries_) m = std::max(m, k.norm_sq());
  return m;
}

FourierState& FourierState::operator*=(Complex c) {
  if (c == Complex{}) {
    entries_.clear();
    return *this;
  }
  for (auto& [k, a] : entries_) a *= c;
  return *this;
}

Complex inner_product(const FourierState& f, const FourierState& g) {
  if (f.dimension() != g.dimension()) throw InvalidArgument("inner product of states of different dimension");
  Complex s{};
  const auto& small = f.size() <= g.size() ? f : g;
  const bool f_small = &small == &f;
  for (const auto& [k, a] : small.entries()) {
    const Complex b = (f_small ? g : f).coefficient(k);
    s += f_small ? a * std::conj(b) : b * std::conj(a);
  }
  return s;
}

nlohmann::json to_json(const FourierState& f) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [k, a] : f.entries()) {
    nlohmann::json coords = nlohmann::json::array();
    for (auto c : k.coords()) coords.push_back(c);
    entries.push_back(nlohmann::json::array({coords, a.real(), a.imag()}));
  }
  return {{"d", f.dimension()}, {"entries", entries}};
}

FourierState fourier_state_from_json(const nlohmann::json& j) {
  try {
    const int d = j.at("d").get<int>();
    FourierState f(d);
    for (const auto& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 3) throw InvalidArgument("state entry must be [[k...], re, im]");
      const auto coords = e.at(0).get<std::vector<std::int64_t>>();
      if (static_cast<int>(coords.size()) != d) throw InvalidArgument("state entry has wrong dimension");
      const LatticePoint k(coords);
      if (f.coefficient(k) != Complex{}) throw InvalidArgument("duplicate frequency in state");
      f.set(k, {e.at(1).get<double>(), e.at(2).get<double>()});
    }
    return f;
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("malformed FourierState JSON: ") + ex.what());
  }
}

}  // namespace dispersia
