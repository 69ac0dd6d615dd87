#include "picardnet/network.hpp"

#include <algorithm>
#include <string>

#include "picardnet/errors.hpp"

namespace picardnet {

LayerDims::LayerDims(std::vector<int> widths) : w_(std::move(widths)) {
  if (w_.size() < 3)
    throw ShapeError("layer dims need at least three entries, got " +
                     std::to_string(w_.size()));
  for (size_t i = 0; i < w_.size(); ++i)
    if (w_[i] < 1)
      throw ShapeError("layer dims entry " + std::to_string(i) +
                       " must be positive, got " + std::to_string(w_[i]));
}

int LayerDims::max_width() const { return *std::max_element(w_.begin(), w_.end()); }

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.size() < 2)
    throw ShapeError("network needs at least two layers (one hidden)");
  for (size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    if (l.w.rows < 1 || l.w.cols < 1)
      throw ShapeError("layer " + std::to_string(i) + " has empty weight matrix");
    if (static_cast<int>(l.b.size()) != l.w.rows)
      throw ShapeError("layer " + std::to_string(i) + " bias length " +
                       std::to_string(l.b.size()) + " does not match rows " +
                       std::to_string(l.w.rows));
    if (i > 0 && l.w.cols != layers_[i - 1].w.rows)
      throw ShapeError("layer " + std::to_string(i) + " input width " +
                       std::to_string(l.w.cols) + " does not match previous output " +
                       std::to_string(layers_[i - 1].w.rows));
    if (!all_finite(l.w.a) || !all_finite(l.b))
      throw ArgumentError("layer " + std::to_string(i) + " contains non-finite values");
  }
}

LayerDims dims(const Network& net) {
  std::vector<int> w;
  w.reserve(net.num_layers() + 1);
  w.push_back(net.input_width());
  for (const Layer& l : net.layers()) w.push_back(l.w.rows);
  return LayerDims(std::move(w));
}

int64_t param_count(const LayerDims& d) {
  int64_t total = 0;
  for (int i = 1; i < d.size(); ++i)
    total += static_cast<int64_t>(d[i]) * (d[i - 1] + 1);
  return total;
}

int64_t param_count(const Network& net) { return param_count(dims(net)); }

Vector realize(const Network& net, const Vector& x) {
  if (static_cast<int>(x.size()) != net.input_width())
    throw ShapeError("realize: input length " + std::to_string(x.size()) +
                     " does not match network input width " +
                     std::to_string(net.input_width()));
  Vector v = x;
  const int last = net.num_layers() - 1;
  for (int i = 0; i <= last; ++i) {
    const Layer& l = net.layer(i);
    Vector y = matvec(l.w, v);
    for (int j = 0; j < l.w.rows; ++j) y[j] += l.b[j];
    if (i < last)
      for (double& e : y) e = e > 0.0 ? e : 0.0;
    v = std::move(y);
  }
  return v;
}

}  // namespace picardnet
