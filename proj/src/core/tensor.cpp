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

#include "core/tensor.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "core/errors.hpp"

namespace tsfew {

namespace detail {

uint64_t next_seq() {
  thread_local uint64_t counter = 0;
  return ++counter;
}

}  // namespace detail

int64_t shape_numel(const std::vector<int64_t>& shape) {
  int64_t n = 1;
  for (int64_t d : shape) {
    if (d < 0) raise(ErrorCode::kInvalidArgument, "tensor: negative dimension");
    n *= d;
  }
  return n;
}

Tensor Tensor::zeros(std::vector<int64_t> shape, bool requires_grad) {
  return full(std::move(shape), 0.0, requires_grad);
}

Tensor Tensor::full(std::vector<int64_t> shape, double value, bool requires_grad) {
  auto n = std::make_shared<detail::Node>();
  int64_t count = shape_numel(shape);
  n->shape = std::move(shape);
  n->values.assign(static_cast<size_t>(count), value);
  n->requires_grad = requires_grad;
  n->seq = detail::next_seq();
  return Tensor(std::move(n));
}

Tensor Tensor::from_values(std::vector<int64_t> shape, std::vector<double> values,
                           bool requires_grad) {
  if (shape_numel(shape) != static_cast<int64_t>(values.size()))
    raise(ErrorCode::kInvalidArgument,
          "tensor: values length does not match shape");
  auto n = std::make_shared<detail::Node>();
  n->shape = std::move(shape);
  n->values = std::move(values);
  n->requires_grad = requires_grad;
  n->seq = detail::next_seq();
  return Tensor(std::move(n));
}

Tensor Tensor::scalar(double v, bool requires_grad) {
  return from_values({}, {v}, requires_grad);
}

Tensor Tensor::make_node(std::vector<int64_t> shape, std::vector<double> values,
                         std::vector<Tensor> parents,
                         std::function<void(detail::Node&)> backprop) {
  if (shape_numel(shape) != static_cast<int64_t>(values.size()))
    raise(ErrorCode::kInternal, "tensor: op produced inconsistent shape");
  auto n = std::make_shared<detail::Node>();
  n->shape = std::move(shape);
  n->values = std::move(values);
  n->seq = detail::next_seq();
  bool needs = false;
  for (const Tensor& p : parents) needs = needs || p.requires_grad();
  n->requires_grad = needs;
  if (needs) {
    n->parents.reserve(parents.size());
    for (const Tensor& p : parents) n->parents.push_back(p.node_ptr());
    n->backprop = std::move(backprop);
  }
  return Tensor(std::move(n));
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape())
    raise(ErrorCode::kInvalidArgument, "add: shape mismatch");
  std::vector<double> out(a.values().size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] + b.values()[i];
  return Tensor::make_node(a.shape(), std::move(out), {a, b},
                           [](detail::Node& self) {
                             for (int side = 0; side < 2; ++side) {
                               auto& p = *self.parents[side];
                               if (!p.requires_grad) continue;
                               p.ensure_grad();
                               for (size_t i = 0; i < self.grad.size(); ++i)
                                 p.grad[i] += self.grad[i];
                             }
                           });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape())
    raise(ErrorCode::kInvalidArgument, "mul: shape mismatch");
  std::vector<double> out(a.values().size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] * b.values()[i];
  return Tensor::make_node(a.shape(), std::move(out), {a, b},
                           [](detail::Node& self) {
                             auto& pa = *self.parents[0];
                             auto& pb = *self.parents[1];
                             if (pa.requires_grad) {
                               pa.ensure_grad();
                               for (size_t i = 0; i < self.grad.size(); ++i)
                                 pa.grad[i] += self.grad[i] * pb.values[i];
                             }
                             if (pb.requires_grad) {
                               pb.ensure_grad();
                               for (size_t i = 0; i < self.grad.size(); ++i)
                                 pb.grad[i] += self.grad[i] * pa.values[i];
                             }
                           });
}

Tensor sum(const Tensor& a) {
  double s = 0.0;
  for (double v : a.values()) s += v;
  return Tensor::make_node({}, {s}, {a}, [](detail::Node& self) {
    auto& p = *self.parents[0];
    if (!p.requires_grad) return;
    p.ensure_grad();
    const double g = self.grad[0];
    for (double& pg : p.grad) pg += g;
  });
}

void backward(const Tensor& loss) {
  if (!loss.defined() || loss.numel() != 1)
    raise(ErrorCode::kInvalidArgument, "backward: loss must be a scalar tensor");
  detail::Node* root = loss.node();

  // Collect nodes reachable through parents, then replay in reverse
  // construction order.
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> seen;
  std::vector<detail::Node*> stack{root};
  seen.insert(root);
  while (!stack.empty()) {
    detail::Node* n = stack.back();
    stack.pop_back();
    order.push_back(n);
    for (auto& p : n->parents) {
      if (seen.insert(p.get()).second) stack.push_back(p.get());
    }
  }
  std::sort(order.begin(), order.end(),
            [](const detail::Node* a, const detail::Node* b) {
              return a->seq > b->seq;
            });

  root->ensure_grad();
  root->grad[0] += 1.0;
  for (detail::Node* n : order) {
    if (n->backprop && n->requires_grad && !n->grad.empty()) n->backprop(*n);
  }
}

}  // namespace tsfew
