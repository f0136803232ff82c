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

#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sspsr {

using Shape = std::vector<std::size_t>;

std::string shape_to_string(const Shape& shape);
std::size_t shape_numel(const Shape& shape);

/// Raised for any shape or argument contract violation in the numeric core.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace autograd {

struct Node;
using NodePtr = std::shared_ptr<Node>;

/// One vertex of a reverse-mode computation graph.
///
/// Interior nodes are created by operations and hold closures over the
/// forward values they need. Leaf nodes belong to parameters and persist
/// across graph rebuilds; their `grad` accumulates until cleared.
struct Node {
    Shape shape;
    std::vector<double> grad;
    // Entries may be null when the matching input is not attached.
    std::vector<NodePtr> parents;
    std::function<void(Node&)> backward;
    bool leaf = false;

    std::vector<double>& ensure_grad();
    /// Accumulates `g` into parent `index` if that parent is attached.
    void accumulate_into(std::size_t index, std::span<const double> g);
    bool parent_attached(std::size_t index) const {
        return index < parents.size() && parents[index] != nullptr;
    }
};

}  // namespace autograd

/// Row-major N-D array of doubles with value semantics.
///
/// A tensor may carry a handle into a computation graph. Copying a tensor
/// copies its data and shares the handle, so the copy still names the same
/// graph value.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape shape);
    Tensor(Shape shape, std::vector<double> data);

    static Tensor zeros(Shape shape) { return Tensor(std::move(shape)); }
    static Tensor full(Shape shape, double value);
    static Tensor scalar(double value) { return Tensor({1}, {value}); }

    const Shape& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t dim(std::size_t axis) const;
    std::size_t numel() const { return data_.size(); }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }
    const std::vector<double>& values() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    double& at(std::initializer_list<std::size_t> index);
    double at(std::initializer_list<std::size_t> index) const;

    /// Value of a single-element tensor.
    double item() const;

    // Graph handle.
    bool attached() const { return node_ != nullptr; }
    bool requires_grad() const { return node_ != nullptr && node_->leaf; }
    /// Turns this tensor into a graph leaf (or detaches it when false).
    Tensor& set_requires_grad(bool on);
    const autograd::NodePtr& node() const { return node_; }
    void set_node(autograd::NodePtr node) { node_ = std::move(node); }
    Tensor detach() const { return Tensor(shape_, data_); }

    /// Accumulated gradient, or zeros when none has been propagated.
    Tensor grad() const;
    void zero_grad();

    /// Same data viewed with a new shape; not recorded in any graph.
    Tensor reshaped(Shape shape) const;

    bool same_values(const Tensor& other) const {
        return shape_ == other.shape_ && data_ == other.data_;
    }

private:
    std::size_t offset(std::initializer_list<std::size_t> index) const;

    Shape shape_;
    std::vector<double> data_;
    autograd::NodePtr node_;
};

/// Disables graph recording on this thread for the guard's lifetime.
class NoGradGuard {
public:
    NoGradGuard();
    ~NoGradGuard();
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;

    static bool recording();

private:
    bool previous_;
};

/// True when an operation over `inputs` would be recorded in a graph.
bool will_record(std::initializer_list<const Tensor*> inputs);

/// Builds the result of a differentiable operation.
///
/// When recording and any input is attached, the result gets a fresh interior node whose
/// parents are the inputs' nodes (null for detached inputs) and whose
/// backward closure is `backward`. Otherwise the result is detached and
/// `backward` is dropped.
Tensor make_result(Tensor value, std::initializer_list<const Tensor*> inputs,
                   std::function<void(autograd::Node&)> backward);
Tensor make_result(Tensor value, const std::vector<const Tensor*>& inputs,
                   std::function<void(autograd::Node&)> backward);

/// Reverse-mode sweep from a single-element loss. Leaf gradients accumulate.
void backward(const Tensor& loss);

/// Throws std::runtime_error if any element is NaN or infinite.
void check_finite(const Tensor& t, const char* where);

}  // namespace sspsr
