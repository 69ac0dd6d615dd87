#include "picardnet/calculus.hpp"

#include <string>
#include <utility>

#include "picardnet/errors.hpp"

namespace picardnet {

LayerDims compose_dims(const LayerDims& alpha, const LayerDims& beta) {
  std::vector<int> w;
  w.reserve(alpha.size() + beta.size() - 1);
  for (int i = 0; i + 1 < beta.size(); ++i) w.push_back(beta[i]);
  w.push_back(beta.output() + alpha.input());
  for (int i = 1; i < alpha.size(); ++i) w.push_back(alpha[i]);
  return LayerDims(std::move(w));
}

LayerDims sum_dims(const LayerDims& a, const LayerDims& b) {
  if (a.size() != b.size())
    throw ShapeError("sum_dims: lengths differ (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  if (a.input() != b.input() || a.output() != b.output())
    throw ShapeError("sum_dims: endpoint widths differ");
  std::vector<int> w(static_cast<size_t>(a.size()));
  w.front() = a.input();
  w.back() = a.output();
  for (int i = 1; i + 1 < a.size(); ++i) w[static_cast<size_t>(i)] = a[i] + b[i];
  return LayerDims(std::move(w));
}

LayerDims retarget_dims(const LayerDims& a, int n) {
  if (n < 1) throw ShapeError("retarget_dims: output width must be positive");
  std::vector<int> w = a.widths();
  w.back() = n;
  return LayerDims(std::move(w));
}

LayerDims identity_dims(int n) {
  if (n < 3) throw ShapeError("identity_dims: need at least three entries");
  std::vector<int> w(static_cast<size_t>(n), 2);
  w.front() = 1;
  w.back() = 1;
  return LayerDims(std::move(w));
}

Network identity_network(int hidden_layers) {
  if (hidden_layers < 1) throw ArgumentError("identity_network: need at least one hidden layer");
  std::vector<Layer> layers;
  Matrix w0(2, 1);
  w0(0, 0) = 1.0;
  w0(1, 0) = -1.0;
  layers.push_back({w0, Vector(2, 0.0)});
  for (int i = 1; i < hidden_layers; ++i) {
    Matrix w(2, 2);
    w(0, 0) = 1.0;
    w(0, 1) = -1.0;
    w(1, 0) = -1.0;
    w(1, 1) = 1.0;
    layers.push_back({w, Vector(2, 0.0)});
  }
  Matrix wo(1, 2);
  wo(0, 0) = 1.0;
  wo(0, 1) = -1.0;
  layers.push_back({wo, Vector(1, 0.0)});
  return Network(std::move(layers));
}

namespace {

// First-layer input shift: B1 <- B1 + W1 b.
Layer shift_input(const Layer& first, const Vector& b) {
  if (static_cast<int>(b.size()) != first.w.cols)
    throw ShapeError("input shift length does not match network input width");
  Layer out = first;
  for (int i = 0; i < first.w.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < first.w.cols; ++j) s += first.w(i, j) * b[j];
    out.b[static_cast<size_t>(i)] += s;
  }
  return out;
}

}  // namespace

Network affine_wrap(const Network& psi, double lambda, const Vector& b, const Vector& a) {
  if (static_cast<int>(a.size()) != psi.output_width())
    throw ShapeError("affine_wrap: output shift length does not match output width");
  std::vector<Layer> layers(psi.layers());
  layers.front() = shift_input(layers.front(), b);
  Layer& out = layers.back();
  for (double& e : out.w.a) e *= lambda;
  for (int i = 0; i < out.w.rows; ++i)
    out.b[static_cast<size_t>(i)] =
        lambda * (out.b[static_cast<size_t>(i)] + a[static_cast<size_t>(i)]);
  return Network(std::move(layers));
}

Network vector_scale(const Network& psi, const Vector& lambda, const Vector& b, double a) {
  if (psi.output_width() != 1)
    throw ShapeError("vector_scale: network must have scalar output");
  if (lambda.empty()) throw ShapeError("vector_scale: empty coefficient vector");
  std::vector<Layer> layers(psi.layers());
  layers.front() = shift_input(layers.front(), b);
  const Layer& old = layers.back();
  const int m = static_cast<int>(lambda.size());
  Layer out{Matrix(m, old.w.cols), Vector(static_cast<size_t>(m), 0.0)};
  const double shifted = old.b[0] + a;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < old.w.cols; ++j) out.w(i, j) = lambda[static_cast<size_t>(i)] * old.w(0, j);
    out.b[static_cast<size_t>(i)] = lambda[static_cast<size_t>(i)] * shifted;
  }
  layers.back() = std::move(out);
  return Network(std::move(layers));
}

Network compose_networks(const Network& outer, const Network& inner) {
  if (inner.output_width() != outer.input_width())
    throw ShapeError("compose_networks: inner output width " +
                     std::to_string(inner.output_width()) + " does not match outer input width " +
                     std::to_string(outer.input_width()));
  std::vector<Layer> layers;
  layers.reserve(inner.num_layers() + outer.num_layers());
  for (int i = 0; i + 1 < inner.num_layers(); ++i) layers.push_back(inner.layer(i));

  // Merge layer: ReLU of (W_out x + B, -W_out x - B) carries the signed parts.
  const Layer& iout = inner.layers().back();
  const int k = iout.w.rows;
  Layer merge{Matrix(2 * k, iout.w.cols), Vector(static_cast<size_t>(2 * k), 0.0)};
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < iout.w.cols; ++j) {
      merge.w(i, j) = iout.w(i, j);
      merge.w(k + i, j) = -iout.w(i, j);
    }
    merge.b[static_cast<size_t>(i)] = iout.b[static_cast<size_t>(i)];
    merge.b[static_cast<size_t>(k + i)] = -iout.b[static_cast<size_t>(i)];
  }
  layers.push_back(std::move(merge));

  const Layer& ofirst = outer.layers().front();
  Layer bridge{Matrix(ofirst.w.rows, 2 * k), ofirst.b};
  for (int i = 0; i < ofirst.w.rows; ++i)
    for (int j = 0; j < k; ++j) {
      bridge.w(i, j) = ofirst.w(i, j);
      bridge.w(i, k + j) = -ofirst.w(i, j);
    }
  layers.push_back(std::move(bridge));

  for (int i = 1; i < outer.num_layers(); ++i) layers.push_back(outer.layer(i));
  return Network(std::move(layers));
}

Network sum_networks(const std::vector<Network>& nets, const std::vector<double>& coeffs) {
  if (nets.empty()) throw ArgumentError("sum_networks: empty list");
  if (nets.size() != coeffs.size())
    throw ShapeError("sum_networks: coefficient count does not match network count");
  const int L = nets.front().num_layers();
  const int k_in = nets.front().input_width();
  const int k_out = nets.front().output_width();
  for (const Network& n : nets) {
    if (n.num_layers() != L) throw ShapeError("sum_networks: depths differ");
    if (n.input_width() != k_in || n.output_width() != k_out)
      throw ShapeError("sum_networks: endpoint widths differ");
  }
  if (nets.size() == 1) {
    std::vector<Layer> layers(nets.front().layers());
    Layer& out = layers.back();
    for (double& e : out.w.a) e *= coeffs.front();
    for (double& e : out.b) e *= coeffs.front();
    return Network(std::move(layers));
  }

  std::vector<Layer> layers;
  layers.reserve(static_cast<size_t>(L));
  for (int li = 0; li < L; ++li) {
    int rows = 0, cols = 0;
    for (const Network& n : nets) {
      rows += n.layer(li).w.rows;
      cols += n.layer(li).w.cols;
    }
    if (li == 0) cols = k_in;
    const bool last = li == L - 1;
    if (last) rows = k_out;
    Layer l{Matrix(rows, cols), Vector(static_cast<size_t>(rows), 0.0)};
    int r0 = 0, c0 = 0;
    for (size_t s = 0; s < nets.size(); ++s) {
      const Layer& src = nets[s].layer(li);
      const double scale = last ? coeffs[s] : 1.0;
      for (int i = 0; i < src.w.rows; ++i)
        for (int j = 0; j < src.w.cols; ++j)
          l.w(last ? i : r0 + i, (li == 0 ? j : c0 + j)) += scale * src.w(i, j);
      for (int i = 0; i < src.w.rows; ++i)
        l.b[static_cast<size_t>(last ? i : r0 + i)] += scale * src.b[static_cast<size_t>(i)];
      r0 += src.w.rows;
      c0 += src.w.cols;
    }
    layers.push_back(std::move(l));
  }
  return Network(std::move(layers));
}

Network extend_depth(const Network& psi, int target_len) {
  if (psi.output_width() != 1)
    throw ShapeError("extend_depth: network must have scalar output");
  const int cur = dims(psi).size();
  if (target_len < cur) throw ArgumentError("extend_depth: target shorter than current depth");
  if (target_len == cur) return psi;
  if (target_len == cur + 1)
    throw ArgumentError("extend_depth: cannot add exactly one entry, identity tails add at least two");
  return compose_networks(identity_network(target_len - cur - 1), psi);
}

Network mean_network(int d) {
  if (d < 1) throw ArgumentError("mean_network: dimension must be positive");
  Matrix w1(2 * d, d);
  for (int i = 0; i < d; ++i) {
    w1(2 * i, i) = 1.0;
    w1(2 * i + 1, i) = -1.0;
  }
  Matrix w2(1, 2 * d);
  const double inv = 1.0 / d;
  for (int i = 0; i < d; ++i) {
    w2(0, 2 * i) = inv;
    w2(0, 2 * i + 1) = -inv;
  }
  std::vector<Layer> layers;
  layers.push_back({std::move(w1), Vector(static_cast<size_t>(2 * d), 0.0)});
  layers.push_back({std::move(w2), Vector(1, 0.0)});
  return Network(std::move(layers));
}

}  // namespace picardnet
