#pragma once

#include <vector>

#include "picardnet/network.hpp"

namespace picardnet {

// Width list of composing alpha after beta:
// (b0, ..., b_H2, b_{H2+1} + a0, a1, ..., a_{H1+1}).
LayerDims compose_dims(const LayerDims& alpha, const LayerDims& beta);

// Entrywise interior sum; needs equal length and matching endpoint widths.
LayerDims sum_dims(const LayerDims& a, const LayerDims& b);

// Replace the output width by n.
LayerDims retarget_dims(const LayerDims& a, int n);

// (1, 2, 2, ..., 2, 1) with n entries, n >= 3.
LayerDims identity_dims(int n);

// Scalar identity with the given number of hidden layers, built from
// x = max(x,0) - max(-x,0). Exact on all inputs.
Network identity_network(int hidden_layers);

// x -> lambda * (psi(x + b) + a); dims unchanged.
Network affine_wrap(const Network& psi, double lambda, const Vector& b, const Vector& a);

// x -> lambda * (psi(x + b) + a) for scalar-output psi and a vector lambda;
// dims become retarget_dims(dims(psi), len(lambda)).
Network vector_scale(const Network& psi, const Vector& lambda, const Vector& b, double a);

// outer . inner, dims = compose_dims(dims(outer), dims(inner)). The merge
// layer carries (y+, y-) so the realization is reproduced exactly.
Network compose_networks(const Network& outer, const Network& inner);

// Weighted sum of same-depth networks with shared input and output widths.
// Hidden layers are stacked block-diagonally; the coefficients are folded
// into the output layer. dims = fold of sum_dims.
Network sum_networks(const std::vector<Network>& nets, const std::vector<double>& coeffs);

// Pad a scalar-output network with an identity tail so that its width list
// has target_len entries. target_len == current is a no-op; an increase of
// exactly one entry is impossible for this construction and is rejected.
Network extend_depth(const Network& psi, int target_len);

// Arithmetic mean of d inputs, dims (d, 2d, 1). Exact.
Network mean_network(int d);

}  // namespace picardnet
