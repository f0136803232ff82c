// Copyright 2026 The SSPSR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sspsr/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace sspsr {

std::string shape_to_string(const Shape& shape) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << ',';
        os << shape[i];
    }
    os << ']';
    return os.str();
}

std::size_t shape_numel(const Shape& shape) {
    std::size_t n = 1;
    for (auto d : shape) n *= d;
    return n;
}

namespace autograd {

std::vector<double>& Node::ensure_grad() {
    if (grad.empty()) grad.assign(shape_numel(shape), 0.0);
    return grad;
}

void Node::accumulate_into(std::size_t index, std::span<const double> g) {
    if (!parent_attached(index)) return;
    auto& dst = parents[index]->ensure_grad();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += g[i];
}

}  // namespace autograd

Tensor::Tensor(Shape shape) : shape_(std::move(shape)), data_(shape_numel(shape_), 0.0) {}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_numel(shape_) != data_.size()) {
        throw ShapeError("tensor shape " + shape_to_string(shape_) + " does not match " +
                         std::to_string(data_.size()) + " values");
    }
}

Tensor Tensor::full(Shape shape, double value) {
    Tensor t(std::move(shape));
    std::fill(t.data_.begin(), t.data_.end(), value);
    return t;
}

std::size_t Tensor::dim(std::size_t axis) const {
    if (axis >= shape_.size()) {
        throw ShapeError("axis " + std::to_string(axis) + " out of range for shape " +
                         shape_to_string(shape_));
    }
    return shape_[axis];
}

std::size_t Tensor::offset(std::initializer_list<std::size_t> index) const {
    if (index.size() != shape_.size()) {
        throw ShapeError("index rank mismatch for shape " + shape_to_string(shape_));
    }
    std::size_t off = 0;
    std::size_t axis = 0;
    for (auto i : index) {
        if (i >= shape_[axis]) throw ShapeError("index out of range for " + shape_to_string(shape_));
        off = off * shape_[axis] + i;
        ++axis;
    }
    return off;
}

double& Tensor::at(std::initializer_list<std::size_t> index) { return data_[offset(index)]; }
double Tensor::at(std::initializer_list<std::size_t> index) const { return data_[offset(index)]; }

double Tensor::item() const {
    if (data_.size() != 1) {
        throw ShapeError("item() needs a single-element tensor, got " + shape_to_string(shape_));
    }
    return data_[0];
}

Tensor& Tensor::set_requires_grad(bool on) {
    if (!on) {
        node_.reset();
        return *this;
    }
    if (!requires_grad()) {
        node_ = std::make_shared<autograd::Node>();
        node_->shape = shape_;
        node_->leaf = true;
    }
    return *this;
}

Tensor Tensor::grad() const {
    if (!node_ || node_->grad.empty()) return Tensor(shape_);
    return Tensor(shape_, node_->grad);
}

void Tensor::zero_grad() {
    if (node_) node_->grad.clear();
}

Tensor Tensor::reshaped(Shape shape) const {
    if (shape_numel(shape) != data_.size()) {
        throw ShapeError("cannot reshape " + shape_to_string(shape_) + " to " +
                         shape_to_string(shape));
    }
    return Tensor(std::move(shape), data_);
}

namespace {
thread_local bool g_recording = true;
}  // namespace

NoGradGuard::NoGradGuard() : previous_(g_recording) { g_recording = false; }
NoGradGuard::~NoGradGuard() { g_recording = previous_; }
bool NoGradGuard::recording() { return g_recording; }

bool will_record(std::initializer_list<const Tensor*> inputs) {
    return g_recording &&
           std::any_of(inputs.begin(), inputs.end(), [](const Tensor* t) { return t->attached(); });
}

Tensor make_result(Tensor value, const std::vector<const Tensor*>& inputs,
                   std::function<void(autograd::Node&)> backward) {
    if (!g_recording) return value;
    bool any = std::any_of(inputs.begin(), inputs.end(),
                           [](const Tensor* t) { return t->attached(); });
    if (!any) return value;
    auto node = std::make_shared<autograd::Node>();
    node->shape = value.shape();
    node->parents.reserve(inputs.size());
    for (const Tensor* t : inputs) node->parents.push_back(t->node());
    node->backward = std::move(backward);
    value.set_node(std::move(node));
    return value;
}

Tensor make_result(Tensor value, std::initializer_list<const Tensor*> inputs,
                   std::function<void(autograd::Node&)> backward) {
    return make_result(std::move(value), std::vector<const Tensor*>(inputs), std::move(backward));
}

void backward(const Tensor& loss) {
    if (loss.numel() != 1) {
        throw ShapeError("backward() needs a scalar loss, got shape " +
                         shape_to_string(loss.shape()));
    }
    if (!loss.attached()) return;

    // Iterative post-order DFS gives a topological order independent of
    // pointer values, so the sweep is deterministic.
    std::vector<autograd::Node*> order;
    std::unordered_set<autograd::Node*> seen;
    std::vector<std::pair<autograd::Node*, std::size_t>> stack;
    stack.emplace_back(loss.node().get(), 0);
    seen.insert(loss.node().get());
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < node->parents.size()) {
            autograd::Node* p = node->parents[next++].get();
            if (p && seen.insert(p).second) stack.emplace_back(p, 0);
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }

    auto& seed = loss.node()->ensure_grad();
    seed[0] += 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        autograd::Node* node = *it;
        if (node->leaf || !node->backward || node->grad.empty()) continue;
        node->backward(*node);
        // Interior gradients are not needed after propagation.
        std::vector<double>().swap(node->grad);
    }
}

void check_finite(const Tensor& t, const char* where) {
    for (std::size_t i = 0; i < t.numel(); ++i) {
        if (!std::isfinite(t[i])) {
            throw std::runtime_error(std::string("non-finite value in ") + where + " at flat index " +
                                     std::to_string(i));
        }
    }
}

}  // namespace sspsr
