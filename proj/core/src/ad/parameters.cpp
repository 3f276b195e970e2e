#include "telab/ad/parameters.hpp"

#include <algorithm>
#include <random>

#include "telab/common/checksum.hpp"
#include "telab/common/error.hpp"

namespace telab::ad {

Tensor ParameterSet::add(std::string name, std::string group, Shape shape,
                         std::vector<double> values) {
  if (contains(name)) throw ValidationError("duplicate parameter '" + name + "'");
  Tensor t = Tensor::variable(shape, std::move(values));
  t.set_requires_grad(!is_frozen(group));
  entries_.push_back({std::move(name), std::move(group), t});
  return t;
}

Tensor ParameterSet::add_gaussian(std::string name, std::string group, Shape shape,
                                  double stddev, Rng& rng) {
  std::normal_distribution<double> normal(0.0, stddev);
  std::vector<double> v(shape.size());
  for (double& x : v) x = normal(rng);
  return add(std::move(name), std::move(group), shape, std::move(v));
}

Tensor ParameterSet::add_constant(std::string name, std::string group, Shape shape, double fill) {
  return add(std::move(name), std::move(group), shape, std::vector<double>(shape.size(), fill));
}

const Tensor& ParameterSet::get(const std::string& name) const {
  for (const auto& p : entries_) {
    if (p.name == name) return p.tensor;
  }
  throw ValidationError("unknown parameter '" + name + "'");
}

bool ParameterSet::contains(const std::string& name) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Parameter& p) { return p.name == name; });
}

void ParameterSet::set_frozen(const std::string& group, bool frozen) {
  auto it = std::find(frozen_groups_.begin(), frozen_groups_.end(), group);
  if (frozen && it == frozen_groups_.end()) frozen_groups_.push_back(group);
  if (!frozen && it != frozen_groups_.end()) frozen_groups_.erase(it);
  for (auto& p : entries_) {
    if (p.group == group) p.tensor.set_requires_grad(!frozen);
  }
}

bool ParameterSet::is_frozen(const std::string& group) const {
  return std::find(frozen_groups_.begin(), frozen_groups_.end(), group) != frozen_groups_.end();
}

std::size_t ParameterSet::total_count() const {
  std::size_t n = 0;
  for (const auto& p : entries_) n += p.tensor.size();
  return n;
}

std::size_t ParameterSet::trainable_count() const {
  std::size_t n = 0;
  for (const auto& p : entries_) {
    if (!is_frozen(p.group)) n += p.tensor.size();
  }
  return n;
}

std::size_t ParameterSet::count_in_group(const std::string& group) const {
  std::size_t n = 0;
  for (const auto& p : entries_) {
    if (p.group == group) n += p.tensor.size();
  }
  return n;
}

std::uint64_t ParameterSet::checksum(const std::string& group) const {
  std::uint64_t h = fnv1a64(std::string_view{});
  for (const auto& p : entries_) {
    if (p.group == group) h = fnv1a64(p.tensor.values(), h);
  }
  return h;
}

std::uint64_t ParameterSet::checksum() const {
  std::uint64_t h = fnv1a64(std::string_view{});
  for (const auto& p : entries_) h = fnv1a64(p.tensor.values(), h);
  return h;
}

void ParameterSet::zero_grad() {
  for (auto& p : entries_) p.tensor.zero_grad();
}

std::vector<std::vector<double>> ParameterSet::snapshot() const {
  std::vector<std::vector<double>> out;
  out.reserve(entries_.size());
  for (const auto& p : entries_) out.emplace_back(p.tensor.values().begin(), p.tensor.values().end());
  return out;
}

void ParameterSet::restore(const std::vector<std::vector<double>>& values) {
  if (values.size() != entries_.size()) throw ShapeError("snapshot does not match parameter set");
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto dst = entries_[i].tensor.mutable_values();
    if (values[i].size() != dst.size()) throw ShapeError("snapshot size mismatch for " + entries_[i].name);
    std::copy(values[i].begin(), values[i].end(), dst.begin());
  }
}

}  // namespace telab::ad
