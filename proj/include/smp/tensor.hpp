#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace smp {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_string(const Shape& shape);

namespace detail {

// One record of the reverse-mode tape. Interior nodes own their parents so a
// forward graph stays alive exactly as long as some handle to its output.
struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  // Pushes this node's grad into its parents' grads (accumulating).
  std::function<void(Node&)> backward;

  void ensure_grad();
  bool is_leaf() const { return !backward; }
};

}  // namespace detail

/// Dense row-major array of doubles with an optional gradient and the op
/// record needed for backpropagation. Copies share storage; use `detach()`
/// or `clone_leaf()` for an independent copy.
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, std::vector<double> values, bool requires_grad = false);
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);
  static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows,
                       bool requires_grad = false);
  static Tensor identity(std::size_t n, bool requires_grad = false);

  bool defined() const { return static_cast<bool>(node_); }
  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t numel() const;
  // Matrix views. A rank-0 or rank-1 tensor is treated as a single row.
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<const double> values() const;
  std::span<double> mutable_values();
  double item() const;
  double at(std::size_t row, std::size_t col) const;

  bool requires_grad() const;
  bool has_grad() const;
  // Empty span when no gradient has been accumulated yet.
  std::span<const double> grad() const;
  std::vector<double> grad_or_zeros() const;
  void zero_grad();

  // Leaf copy of the values, no history, no gradient.
  Tensor detach() const;
  Tensor clone_leaf(bool requires_grad) const;

  const std::shared_ptr<detail::Node>& node() const { return node_; }

 private:
  std::shared_ptr<detail::Node> node_;
};

/// Reverse sweep from a scalar loss. Each reachable op record is visited
/// once in reverse topological order; leaf gradients accumulate across calls.
void backprop(const Tensor& loss);

/// Disables op recording on the current thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool grad_enabled();

/// While alive, folds the branch taken at every non-smooth point (ReLU sign,
/// max winner) of forward passes on this thread into a digest. Two passes
/// with equal digests ran through the same smooth piece.
class KinkRecorder {
 public:
  KinkRecorder();
  ~KinkRecorder();
  KinkRecorder(const KinkRecorder&) = delete;
  KinkRecorder& operator=(const KinkRecorder&) = delete;

  std::uint64_t digest() const { return digest_; }
  void record(std::uint64_t value);

 private:
  std::uint64_t digest_ = 0xcbf29ce484222325ULL;
  KinkRecorder* previous_;
};

namespace detail {
KinkRecorder* active_kink_recorder();
}  // namespace detail

namespace detail {

// Builds an op result; records parents and the backward closure only when
// recording is on and some parent needs a gradient.
Tensor make_result(Shape shape, std::vector<double> value,
                   std::vector<Tensor> parents,
                   std::function<void(Node&)> backward);

}  // namespace detail

}  // namespace smp
