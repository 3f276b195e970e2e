#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "telab/ad/tensor.hpp"
#include "telab/common/rng.hpp"

namespace telab::ad {

struct Parameter {
  std::string name;
  std::string group;
  Tensor tensor;
};

// Named model parameters organized in groups. A frozen group's tensors do
// not require grad, so they enter graphs as constants and the optimizer
// skips them.
class ParameterSet {
 public:
  // Throws ValidationError on a duplicate name.
  Tensor add(std::string name, std::string group, Shape shape, std::vector<double> values);
  // Gaussian init with standard deviation `stddev`.
  Tensor add_gaussian(std::string name, std::string group, Shape shape, double stddev, Rng& rng);
  Tensor add_constant(std::string name, std::string group, Shape shape, double fill);

  const Tensor& get(const std::string& name) const;
  bool contains(const std::string& name) const;
  std::span<const Parameter> entries() const { return entries_; }

  void set_frozen(const std::string& group, bool frozen);
  bool is_frozen(const std::string& group) const;

  // Scalar counts over all parameters or only those not frozen.
  std::size_t total_count() const;
  std::size_t trainable_count() const;
  std::size_t count_in_group(const std::string& group) const;

  // FNV-1a over the raw values of every parameter in `group`, in order.
  std::uint64_t checksum(const std::string& group) const;
  std::uint64_t checksum() const;

  void zero_grad();

  // Values of every parameter, for best-checkpoint retention.
  std::vector<std::vector<double>> snapshot() const;
  void restore(const std::vector<std::vector<double>>& values);

 private:
  std::vector<Parameter> entries_;
  std::vector<std::string> frozen_groups_;
};

}  // namespace telab::ad
