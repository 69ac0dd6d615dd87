#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "picardnet/linalg.hpp"

namespace picardnet {

// Layer-width list (k0, ..., k_{H+1}) of a network with H >= 1 hidden
// layers. At least three entries, every entry positive.
class LayerDims {
 public:
  explicit LayerDims(std::vector<int> widths);

  int size() const { return static_cast<int>(w_.size()); }
  int operator[](int i) const { return w_[static_cast<size_t>(i)]; }
  int input() const { return w_.front(); }
  int output() const { return w_.back(); }
  int max_width() const;

  const std::vector<int>& widths() const { return w_; }
  auto begin() const { return w_.begin(); }
  auto end() const { return w_.end(); }

  friend bool operator==(const LayerDims&, const LayerDims&) = default;

 private:
  std::vector<int> w_;
};

struct Layer {
  Matrix w;
  Vector b;
};

// Fully connected ReLU network: hidden layers apply ReLU, the output layer is
// affine. Immutable after construction; construction rejects shape
// mismatches and non-finite parameters.
class Network {
 public:
  explicit Network(std::vector<Layer> layers);

  const std::vector<Layer>& layers() const { return layers_; }
  const Layer& layer(int i) const { return layers_[static_cast<size_t>(i)]; }
  int num_layers() const { return static_cast<int>(layers_.size()); }
  int input_width() const { return layers_.front().w.cols; }
  int output_width() const { return layers_.back().w.rows; }

 private:
  std::vector<Layer> layers_;
};

LayerDims dims(const Network& net);

// Total number of scalar parameters: sum of k_n * (k_{n-1} + 1).
int64_t param_count(const Network& net);
int64_t param_count(const LayerDims& d);

// Forward pass.
Vector realize(const Network& net, const Vector& x);

// JSON round trip. encode writes full round-trip precision so that
// decode(encode(net)) reproduces the parameters bit for bit.
std::string encode(const Network& net);
Network decode(const std::string& text);

}  // namespace picardnet
