// Copyright 2026 the tsfew authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TSFEW_CORE_TENSOR_HPP
#define TSFEW_CORE_TENSOR_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace tsfew {

namespace detail {

// One node of the define-by-run graph. Construction order is recorded in
// `seq`; backward replays reachable nodes in exact reverse of that order.
struct Node {
  std::vector<int64_t> shape;
  std::vector<double> values;
  std::vector<double> grad;  // empty until backward touches the node
  bool requires_grad = false;
  uint64_t seq = 0;
  std::vector<std::shared_ptr<Node>> parents;
  // Reads this node's grad and accumulates into the parents' grads.
  std::function<void(Node&)> backprop;

  void ensure_grad() {
    if (grad.size() != values.size()) grad.assign(values.size(), 0.0);
  }
};

uint64_t next_seq();

}  // namespace detail

// Value-semantics handle to a graph node. Copies share the node.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(std::vector<int64_t> shape, bool requires_grad = false);
  static Tensor full(std::vector<int64_t> shape, double value,
                     bool requires_grad = false);
  static Tensor from_values(std::vector<int64_t> shape,
                            std::vector<double> values,
                            bool requires_grad = false);
  static Tensor scalar(double v, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const std::vector<int64_t>& shape() const { return node_->shape; }
  size_t ndim() const { return node_->shape.size(); }
  int64_t dim(size_t i) const { return node_->shape[i]; }
  int64_t numel() const {
    return static_cast<int64_t>(node_->values.size());
  }

  std::vector<double>& values() { return node_->values; }
  const std::vector<double>& values() const { return node_->values; }
  const std::vector<double>& grad() const { return node_->grad; }
  bool requires_grad() const { return node_->requires_grad; }
  void zero_grad() { node_->grad.assign(node_->values.size(), 0.0); }

  detail::Node* node() const { return node_.get(); }
  std::shared_ptr<detail::Node> node_ptr() const { return node_; }

  // Internal: wraps the result of an operation.
  static Tensor make_node(std::vector<int64_t> shape, std::vector<double> values,
                          std::vector<Tensor> parents,
                          std::function<void(detail::Node&)> backprop);

 private:
  explicit Tensor(std::shared_ptr<detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<detail::Node> node_;
};

// Elementwise graph operations (same-shape operands).
Tensor add(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor sum(const Tensor& a);  // scalar

// Populates grad on every requires_grad tensor reachable from `loss`,
// which must be scalar. Gradients accumulate additively, both across
// multiple uses of a tensor inside the graph and across calls.
void backward(const Tensor& loss);

int64_t shape_numel(const std::vector<int64_t>& shape);

}  // namespace tsfew

#endif  // TSFEW_CORE_TENSOR_HPP
