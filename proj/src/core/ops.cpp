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

#include "core/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace tsfew {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) raise(ErrorCode::kInvalidArgument, msg);
}

std::string shape_str(const std::vector<int64_t>& s) {
  std::string out = "[";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "]";
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Tensor conv1d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              int stride, int padding) {
  require(input.ndim() == 3, "conv1d: input must be [batch, channels, length], got " +
                                 shape_str(input.shape()));
  require(weight.ndim() == 3, "conv1d: weight must be [out, in, k]");
  require(bias.ndim() == 1, "conv1d: bias must be [out]");
  const int64_t B = input.dim(0), Ci = input.dim(1), L = input.dim(2);
  const int64_t Co = weight.dim(0), K = weight.dim(2);
  require(weight.dim(1) == Ci, "conv1d: weight in-channels " +
                                   std::to_string(weight.dim(1)) +
                                   " do not match input channels " +
                                   std::to_string(Ci));
  require(bias.dim(0) == Co, "conv1d: bias size mismatch");
  require(stride >= 1 && padding >= 0, "conv1d: bad stride/padding");
  require(L + 2 * padding >= K,
          "conv1d: input length " + std::to_string(L) + " too small for kernel " +
              std::to_string(K) + " with padding " + std::to_string(padding));
  const int64_t Lo = (L + 2 * padding - K) / stride + 1;

  const auto& in = input.values();
  const auto& w = weight.values();
  const auto& bv = bias.values();
  std::vector<double> out(static_cast<size_t>(B * Co * Lo));
  for (int64_t b = 0; b < B; ++b) {
    for (int64_t o = 0; o < Co; ++o) {
      double* orow = out.data() + (b * Co + o) * Lo;
      std::fill(orow, orow + Lo, bv[o]);
      for (int64_t ci = 0; ci < Ci; ++ci) {
        const double* irow = in.data() + (b * Ci + ci) * L;
        const double* wrow = w.data() + (o * Ci + ci) * K;
        for (int64_t k = 0; k < K; ++k) {
          const double wk = wrow[k];
          // valid t range: 0 <= t*stride + k - padding < L
          int64_t tmin = padding - k <= 0 ? 0 : (padding - k + stride - 1) / stride;
          int64_t tmax = (L - 1 + padding - k) / stride;
          if (L - 1 + padding - k < 0) continue;
          if (tmax > Lo - 1) tmax = Lo - 1;
          const double* ip = irow + tmin * stride + k - padding;
          for (int64_t t = tmin; t <= tmax; ++t, ip += stride)
            orow[t] += *ip * wk;
        }
      }
    }
  }

  const int64_t s = stride, p = padding;
  return Tensor::make_node(
      {B, Co, Lo}, std::move(out), {input, weight, bias},
      [B, Ci, L, Co, K, Lo, s, p](detail::Node& self) {
        auto& nin = *self.parents[0];
        auto& nw = *self.parents[1];
        auto& nb = *self.parents[2];
        const bool gi = nin.requires_grad, gw = nw.requires_grad,
                   gb = nb.requires_grad;
        if (gi) nin.ensure_grad();
        if (gw) nw.ensure_grad();
        if (gb) nb.ensure_grad();
        for (int64_t b = 0; b < B; ++b) {
          for (int64_t o = 0; o < Co; ++o) {
            const double* grow = self.grad.data() + (b * Co + o) * Lo;
            if (gb) {
              double acc = 0.0;
              for (int64_t t = 0; t < Lo; ++t) acc += grow[t];
              nb.grad[o] += acc;
            }
            for (int64_t ci = 0; ci < Ci; ++ci) {
              const double* irow = nin.values.data() + (b * Ci + ci) * L;
              double* igrow = gi ? nin.grad.data() + (b * Ci + ci) * L : nullptr;
              const double* wrow = nw.values.data() + (o * Ci + ci) * K;
              double* wgrow = gw ? nw.grad.data() + (o * Ci + ci) * K : nullptr;
              for (int64_t k = 0; k < K; ++k) {
                int64_t tmin = p - k <= 0 ? 0 : (p - k + s - 1) / s;
                if (L - 1 + p - k < 0) continue;
                int64_t tmax = (L - 1 + p - k) / s;
                if (tmax > Lo - 1) tmax = Lo - 1;
                const int64_t base = tmin * s + k - p;
                if (gw) {
                  double acc = 0.0;
                  const double* ip = irow + base;
                  for (int64_t t = tmin; t <= tmax; ++t, ip += s)
                    acc += grow[t] * *ip;
                  wgrow[k] += acc;
                }
                if (gi) {
                  const double wk = wrow[k];
                  double* ip = igrow + base;
                  for (int64_t t = tmin; t <= tmax; ++t, ip += s)
                    *ip += grow[t] * wk;
                }
              }
            }
          }
        }
      });
}

Tensor conv2d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              int stride, int padding) {
  require(input.ndim() == 4, "conv2d: input must be [batch, channels, H, W], got " +
                                 shape_str(input.shape()));
  require(weight.ndim() == 4, "conv2d: weight must be [out, in, kh, kw]");
  require(bias.ndim() == 1, "conv2d: bias must be [out]");
  const int64_t B = input.dim(0), Ci = input.dim(1), H = input.dim(2),
                W = input.dim(3);
  const int64_t Co = weight.dim(0), Kh = weight.dim(2), Kw = weight.dim(3);
  require(weight.dim(1) == Ci, "conv2d: weight in-channels mismatch");
  require(bias.dim(0) == Co, "conv2d: bias size mismatch");
  require(stride >= 1 && padding >= 0, "conv2d: bad stride/padding");
  require(H + 2 * padding >= Kh && W + 2 * padding >= Kw,
          "conv2d: input " + std::to_string(H) + "x" + std::to_string(W) +
              " too small for kernel " + std::to_string(Kh) + "x" +
              std::to_string(Kw) + " with padding " + std::to_string(padding));
  const int64_t Ho = (H + 2 * padding - Kh) / stride + 1;
  const int64_t Wo = (W + 2 * padding - Kw) / stride + 1;

  const auto& in = input.values();
  const auto& w = weight.values();
  const auto& bv = bias.values();
  std::vector<double> out(static_cast<size_t>(B * Co * Ho * Wo));
  const int64_t s = stride, p = padding;
  for (int64_t b = 0; b < B; ++b) {
    for (int64_t o = 0; o < Co; ++o) {
      double* oplane = out.data() + (b * Co + o) * Ho * Wo;
      std::fill(oplane, oplane + Ho * Wo, bv[o]);
      for (int64_t ci = 0; ci < Ci; ++ci) {
        const double* iplane = in.data() + (b * Ci + ci) * H * W;
        const double* wplane = w.data() + (o * Ci + ci) * Kh * Kw;
        for (int64_t kh = 0; kh < Kh; ++kh) {
          for (int64_t kw = 0; kw < Kw; ++kw) {
            const double wk = wplane[kh * Kw + kw];
            for (int64_t ty = 0; ty < Ho; ++ty) {
              const int64_t iy = ty * s + kh - p;
              if (iy < 0 || iy >= H) continue;
              int64_t txmin = p - kw <= 0 ? 0 : (p - kw + s - 1) / s;
              if (W - 1 + p - kw < 0) continue;
              int64_t txmax = (W - 1 + p - kw) / s;
              if (txmax > Wo - 1) txmax = Wo - 1;
              double* orow = oplane + ty * Wo;
              const double* ip = iplane + iy * W + txmin * s + kw - p;
              for (int64_t tx = txmin; tx <= txmax; ++tx, ip += s)
                orow[tx] += *ip * wk;
            }
          }
        }
      }
    }
  }

  return Tensor::make_node(
      {B, Co, Ho, Wo}, std::move(out), {input, weight, bias},
      [B, Ci, H, W, Co, Kh, Kw, Ho, Wo, s, p](detail::Node& self) {
        auto& nin = *self.parents[0];
        auto& nw = *self.parents[1];
        auto& nb = *self.parents[2];
        const bool gi = nin.requires_grad, gw = nw.requires_grad,
                   gb = nb.requires_grad;
        if (gi) nin.ensure_grad();
        if (gw) nw.ensure_grad();
        if (gb) nb.ensure_grad();
        for (int64_t b = 0; b < B; ++b) {
          for (int64_t o = 0; o < Co; ++o) {
            const double* gplane = self.grad.data() + (b * Co + o) * Ho * Wo;
            if (gb) {
              double acc = 0.0;
              for (int64_t i = 0; i < Ho * Wo; ++i) acc += gplane[i];
              nb.grad[o] += acc;
            }
            for (int64_t ci = 0; ci < Ci; ++ci) {
              const double* iplane = nin.values.data() + (b * Ci + ci) * H * W;
              double* igplane = gi ? nin.grad.data() + (b * Ci + ci) * H * W : nullptr;
              const double* wplane = nw.values.data() + (o * Ci + ci) * Kh * Kw;
              double* wgplane = gw ? nw.grad.data() + (o * Ci + ci) * Kh * Kw : nullptr;
              for (int64_t kh = 0; kh < Kh; ++kh) {
                for (int64_t kw = 0; kw < Kw; ++kw) {
                  double wacc = 0.0;
                  const double wk = wplane[kh * Kw + kw];
                  for (int64_t ty = 0; ty < Ho; ++ty) {
                    const int64_t iy = ty * s + kh - p;
                    if (iy < 0 || iy >= H) continue;
                    int64_t txmin = p - kw <= 0 ? 0 : (p - kw + s - 1) / s;
                    if (W - 1 + p - kw < 0) continue;
                    int64_t txmax = (W - 1 + p - kw) / s;
                    if (txmax > Wo - 1) txmax = Wo - 1;
                    const double* grow = gplane + ty * Wo;
                    const int64_t base = iy * W + txmin * s + kw - p;
                    if (gw) {
                      const double* ip = iplane + base;
                      for (int64_t tx = txmin; tx <= txmax; ++tx, ip += s)
                        wacc += grow[tx] * *ip;
                    }
                    if (gi) {
                      double* ip = igplane + base;
                      for (int64_t tx = txmin; tx <= txmax; ++tx, ip += s)
                        *ip += grow[tx] * wk;
                    }
                  }
                  if (gw) wgplane[kh * Kw + kw] += wacc;
                }
              }
            }
          }
        }
      });
}

Tensor batchnorm(const Tensor& input, const Tensor& gamma, const Tensor& beta,
                 RunningStats& stats, NormMode mode, double momentum,
                 double eps) {
  require(input.ndim() >= 2, "batchnorm: input must be [batch, channels, ...]");
  const int64_t B = input.dim(0), C = input.dim(1);
  int64_t S = 1;
  for (size_t i = 2; i < input.ndim(); ++i) S *= input.dim(i);
  require(gamma.ndim() == 1 && gamma.dim(0) == C, "batchnorm: gamma must be [channels]");
  require(beta.ndim() == 1 && beta.dim(0) == C, "batchnorm: beta must be [channels]");
  require(static_cast<int64_t>(stats.mean.size()) == C &&
              static_cast<int64_t>(stats.var.size()) == C,
          "batchnorm: running stats size mismatch");
  require(eps > 0.0, "batchnorm: eps must be > 0");
  const int64_t m = B * S;
  if (mode == NormMode::kTrain && m < 2)
    raise(ErrorCode::kInvalidArgument,
          "batchnorm: degenerate batch (batch*spatial = " + std::to_string(m) +
              " < 2 in train mode)");

  const auto& in = input.values();
  std::vector<double> mean(C), invstd(C);
  if (mode == NormMode::kTrain) {
    for (int64_t c = 0; c < C; ++c) {
      double mu = 0.0;
      for (int64_t b = 0; b < B; ++b) {
        const double* row = in.data() + (b * C + c) * S;
        for (int64_t i = 0; i < S; ++i) mu += row[i];
      }
      mu /= static_cast<double>(m);
      double var = 0.0;
      for (int64_t b = 0; b < B; ++b) {
        const double* row = in.data() + (b * C + c) * S;
        for (int64_t i = 0; i < S; ++i) {
          const double d = row[i] - mu;
          var += d * d;
        }
      }
      var /= static_cast<double>(m);
      mean[c] = mu;
      invstd[c] = 1.0 / std::sqrt(var + eps);
      stats.mean[c] = (1.0 - momentum) * stats.mean[c] + momentum * mu;
      stats.var[c] = (1.0 - momentum) * stats.var[c] + momentum * var;
    }
  } else {
    for (int64_t c = 0; c < C; ++c) {
      mean[c] = stats.mean[c];
      invstd[c] = 1.0 / std::sqrt(stats.var[c] + eps);
    }
  }

  const auto& gv = gamma.values();
  const auto& bv = beta.values();
  std::vector<double> xhat(in.size());
  std::vector<double> out(in.size());
  for (int64_t b = 0; b < B; ++b) {
    for (int64_t c = 0; c < C; ++c) {
      const double* row = in.data() + (b * C + c) * S;
      double* xr = xhat.data() + (b * C + c) * S;
      double* orow = out.data() + (b * C + c) * S;
      const double mu = mean[c], is = invstd[c], g = gv[c], bb = bv[c];
      for (int64_t i = 0; i < S; ++i) {
        xr[i] = (row[i] - mu) * is;
        orow[i] = g * xr[i] + bb;
      }
    }
  }

  const bool train = mode == NormMode::kTrain;
  return Tensor::make_node(
      input.shape(), std::move(out), {input, gamma, beta},
      [B, C, S, train, xhat = std::move(xhat),
       invstd = std::move(invstd)](detail::Node& self) {
        auto& nin = *self.parents[0];
        auto& ng = *self.parents[1];
        auto& nb = *self.parents[2];
        const int64_t m = B * S;
        std::vector<double> sum_dy(C, 0.0), sum_dy_xhat(C, 0.0);
        for (int64_t b = 0; b < B; ++b) {
          for (int64_t c = 0; c < C; ++c) {
            const double* grow = self.grad.data() + (b * C + c) * S;
            const double* xr = xhat.data() + (b * C + c) * S;
            double a = 0.0, d = 0.0;
            for (int64_t i = 0; i < S; ++i) {
              a += grow[i];
              d += grow[i] * xr[i];
            }
            sum_dy[c] += a;
            sum_dy_xhat[c] += d;
          }
        }
        if (ng.requires_grad) {
          ng.ensure_grad();
          for (int64_t c = 0; c < C; ++c) ng.grad[c] += sum_dy_xhat[c];
        }
        if (nb.requires_grad) {
          nb.ensure_grad();
          for (int64_t c = 0; c < C; ++c) nb.grad[c] += sum_dy[c];
        }
        if (nin.requires_grad) {
          nin.ensure_grad();
          for (int64_t b = 0; b < B; ++b) {
            for (int64_t c = 0; c < C; ++c) {
              const double* grow = self.grad.data() + (b * C + c) * S;
              const double* xr = xhat.data() + (b * C + c) * S;
              double* ig = nin.grad.data() + (b * C + c) * S;
              const double gis = ng.values[c] * invstd[c];
              if (train) {
                const double mdy = sum_dy[c] / static_cast<double>(m);
                const double mdyx = sum_dy_xhat[c] / static_cast<double>(m);
                for (int64_t i = 0; i < S; ++i)
                  ig[i] += gis * (grow[i] - mdy - xr[i] * mdyx);
              } else {
                for (int64_t i = 0; i < S; ++i) ig[i] += gis * grow[i];
              }
            }
          }
        }
      });
}

Tensor relu(const Tensor& input) {
  std::vector<double> out(input.values().size());
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = input.values()[i] > 0.0 ? input.values()[i] : 0.0;
  return Tensor::make_node(input.shape(), std::move(out), {input},
                           [](detail::Node& self) {
                             auto& p = *self.parents[0];
                             if (!p.requires_grad) return;
                             p.ensure_grad();
                             for (size_t i = 0; i < self.grad.size(); ++i)
                               if (p.values[i] > 0.0) p.grad[i] += self.grad[i];
                           });
}

namespace {

// Shared maxpool core: the argmax (first maximum) per output element is
// recorded as a flat input index for the backward scatter.
Tensor maxpool_impl(const Tensor& input, std::vector<int64_t> out_shape,
                    std::vector<int64_t> argmax, std::vector<double> out) {
  return Tensor::make_node(
      std::move(out_shape), std::move(out), {input},
      [argmax = std::move(argmax)](detail::Node& self) {
        auto& p = *self.parents[0];
        if (!p.requires_grad) return;
        p.ensure_grad();
        for (size_t i = 0; i < self.grad.size(); ++i)
          p.grad[argmax[i]] += self.grad[i];
      });
}

}  // namespace

Tensor maxpool1d(const Tensor& input, int window, int stride) {
  require(input.ndim() == 3, "maxpool1d: input must be [batch, channels, length]");
  require(window >= 1 && stride >= 1, "maxpool1d: bad window/stride");
  const int64_t B = input.dim(0), C = input.dim(1), L = input.dim(2);
  require(L >= window, "maxpool1d: input length " + std::to_string(L) +
                           " smaller than window " + std::to_string(window));
  const int64_t Lo = (L - window) / stride + 1;
  const auto& in = input.values();
  std::vector<double> out(static_cast<size_t>(B * C * Lo));
  std::vector<int64_t> argmax(out.size());
  for (int64_t bc = 0; bc < B * C; ++bc) {
    const double* row = in.data() + bc * L;
    for (int64_t t = 0; t < Lo; ++t) {
      int64_t best = t * stride;
      double bv = row[best];
      for (int k = 1; k < window; ++k) {
        const int64_t idx = t * stride + k;
        if (row[idx] > bv) {
          bv = row[idx];
          best = idx;
        }
      }
      out[bc * Lo + t] = bv;
      argmax[bc * Lo + t] = bc * L + best;
    }
  }
  return maxpool_impl(input, {B, C, Lo}, std::move(argmax), std::move(out));
}

Tensor maxpool2d(const Tensor& input, int window_h, int window_w, int stride_h,
                 int stride_w) {
  require(input.ndim() == 4, "maxpool2d: input must be [batch, channels, H, W]");
  require(window_h >= 1 && window_w >= 1 && stride_h >= 1 && stride_w >= 1,
          "maxpool2d: bad window/stride");
  const int64_t B = input.dim(0), C = input.dim(1), H = input.dim(2),
                W = input.dim(3);
  require(H >= window_h && W >= window_w,
          "maxpool2d: input " + std::to_string(H) + "x" + std::to_string(W) +
              " smaller than window " + std::to_string(window_h) + "x" +
              std::to_string(window_w));
  const int64_t Ho = (H - window_h) / stride_h + 1;
  const int64_t Wo = (W - window_w) / stride_w + 1;
  const auto& in = input.values();
  std::vector<double> out(static_cast<size_t>(B * C * Ho * Wo));
  std::vector<int64_t> argmax(out.size());
  for (int64_t bc = 0; bc < B * C; ++bc) {
    const double* plane = in.data() + bc * H * W;
    for (int64_t ty = 0; ty < Ho; ++ty) {
      for (int64_t tx = 0; tx < Wo; ++tx) {
        int64_t best = ty * stride_h * W + tx * stride_w;
        double bv = plane[best];
        for (int ky = 0; ky < window_h; ++ky) {
          for (int kx = 0; kx < window_w; ++kx) {
            const int64_t idx = (ty * stride_h + ky) * W + tx * stride_w + kx;
            if (plane[idx] > bv) {
              bv = plane[idx];
              best = idx;
            }
          }
        }
        out[(bc * Ho + ty) * Wo + tx] = bv;
        argmax[(bc * Ho + ty) * Wo + tx] = bc * H * W + best;
      }
    }
  }
  return maxpool_impl(input, {B, C, Ho, Wo}, std::move(argmax), std::move(out));
}

Tensor global_avg_pool(const Tensor& input) {
  require(input.ndim() >= 3, "global_avg_pool: input must be [batch, channels, ...]");
  const int64_t B = input.dim(0), C = input.dim(1);
  int64_t S = 1;
  for (size_t i = 2; i < input.ndim(); ++i) S *= input.dim(i);
  require(S >= 1, "global_avg_pool: empty spatial extent");
  const auto& in = input.values();
  std::vector<double> out(static_cast<size_t>(B * C));
  for (int64_t bc = 0; bc < B * C; ++bc) {
    double acc = 0.0;
    const double* row = in.data() + bc * S;
    for (int64_t i = 0; i < S; ++i) acc += row[i];
    out[bc] = acc / static_cast<double>(S);
  }
  return Tensor::make_node({B, C}, std::move(out), {input},
                           [S](detail::Node& self) {
                             auto& p = *self.parents[0];
                             if (!p.requires_grad) return;
                             p.ensure_grad();
                             const double inv = 1.0 / static_cast<double>(S);
                             for (size_t i = 0; i < self.grad.size(); ++i) {
                               const double g = self.grad[i] * inv;
                               double* ig = p.grad.data() + i * S;
                               for (int64_t k = 0; k < S; ++k) ig[k] += g;
                             }
                           });
}

Tensor linear(const Tensor& input, const Tensor& weight, const Tensor& bias) {
  require(input.ndim() == 2, "linear: input must be [batch, in]");
  require(weight.ndim() == 2, "linear: weight must be [out, in]");
  require(bias.ndim() == 1, "linear: bias must be [out]");
  const int64_t B = input.dim(0), I = input.dim(1), O = weight.dim(0);
  require(weight.dim(1) == I, "linear: weight in-features " +
                                  std::to_string(weight.dim(1)) +
                                  " do not match input features " +
                                  std::to_string(I));
  require(bias.dim(0) == O, "linear: bias size mismatch");
  const auto& in = input.values();
  const auto& w = weight.values();
  const auto& bv = bias.values();
  std::vector<double> out(static_cast<size_t>(B * O));
  for (int64_t b = 0; b < B; ++b) {
    for (int64_t o = 0; o < O; ++o) {
      double acc = bv[o];
      const double* irow = in.data() + b * I;
      const double* wrow = w.data() + o * I;
      for (int64_t i = 0; i < I; ++i) acc += irow[i] * wrow[i];
      out[b * O + o] = acc;
    }
  }
  return Tensor::make_node(
      {B, O}, std::move(out), {input, weight, bias},
      [B, I, O](detail::Node& self) {
        auto& nin = *self.parents[0];
        auto& nw = *self.parents[1];
        auto& nb = *self.parents[2];
        if (nb.requires_grad) {
          nb.ensure_grad();
          for (int64_t b = 0; b < B; ++b)
            for (int64_t o = 0; o < O; ++o)
              nb.grad[o] += self.grad[b * O + o];
        }
        if (nw.requires_grad) {
          nw.ensure_grad();
          for (int64_t b = 0; b < B; ++b) {
            const double* irow = nin.values.data() + b * I;
            for (int64_t o = 0; o < O; ++o) {
              const double g = self.grad[b * O + o];
              double* wg = nw.grad.data() + o * I;
              for (int64_t i = 0; i < I; ++i) wg[i] += g * irow[i];
            }
          }
        }
        if (nin.requires_grad) {
          nin.ensure_grad();
          for (int64_t b = 0; b < B; ++b) {
            double* ig = nin.grad.data() + b * I;
            for (int64_t o = 0; o < O; ++o) {
              const double g = self.grad[b * O + o];
              const double* wrow = nw.values.data() + o * I;
              for (int64_t i = 0; i < I; ++i) ig[i] += g * wrow[i];
            }
          }
        }
      });
}

Tensor concat(const Tensor& a, const Tensor& b) {
  require(a.ndim() == 2 && b.ndim() == 2, "concat: operands must be [batch, features]");
  require(a.dim(0) == b.dim(0), "concat: batch sizes differ");
  const int64_t B = a.dim(0), N = a.dim(1), M = b.dim(1);
  std::vector<double> out(static_cast<size_t>(B * (N + M)));
  for (int64_t r = 0; r < B; ++r) {
    std::copy_n(a.values().data() + r * N, N, out.data() + r * (N + M));
    std::copy_n(b.values().data() + r * M, M, out.data() + r * (N + M) + N);
  }
  return Tensor::make_node({B, N + M}, std::move(out), {a, b},
                           [B, N, M](detail::Node& self) {
                             auto& pa = *self.parents[0];
                             auto& pb = *self.parents[1];
                             if (pa.requires_grad) pa.ensure_grad();
                             if (pb.requires_grad) pb.ensure_grad();
                             for (int64_t r = 0; r < B; ++r) {
                               const double* g = self.grad.data() + r * (N + M);
                               if (pa.requires_grad)
                                 for (int64_t i = 0; i < N; ++i)
                                   pa.grad[r * N + i] += g[i];
                               if (pb.requires_grad)
                                 for (int64_t i = 0; i < M; ++i)
                                   pb.grad[r * M + i] += g[N + i];
                             }
                           });
}

OneHotTarget OneHotTarget::from_labels(const std::vector<int>& labels,
                                       int num_classes) {
  require(num_classes >= 2, "one-hot: num_classes must be >= 2");
  OneHotTarget t;
  t.batch = static_cast<int64_t>(labels.size());
  t.num_classes = num_classes;
  t.values.assign(static_cast<size_t>(t.batch) * num_classes, 0.0);
  for (size_t i = 0; i < labels.size(); ++i) {
    require(labels[i] >= 0 && labels[i] < num_classes,
            "one-hot: label " + std::to_string(labels[i]) + " out of range");
    t.values[i * num_classes + labels[i]] = 1.0;
  }
  return t;
}

void OneHotTarget::validate() const {
  require(batch >= 1 && num_classes >= 2, "one-hot: empty target");
  require(values.size() == static_cast<size_t>(batch) * num_classes,
          "one-hot: size mismatch");
  for (int64_t r = 0; r < batch; ++r) {
    int ones = 0;
    for (int64_t c = 0; c < num_classes; ++c) {
      const double v = values[r * num_classes + c];
      require(v == 0.0 || v == 1.0, "one-hot: entries must be 0 or 1");
      if (v == 1.0) ++ones;
    }
    require(ones == 1, "one-hot: each row must contain exactly one 1");
  }
}

Tensor bce_with_logits(const Tensor& logits, const OneHotTarget& target) {
  require(logits.ndim() == 2, "bce_with_logits: logits must be [batch, classes]");
  target.validate();
  require(logits.dim(0) == target.batch && logits.dim(1) == target.num_classes,
          "bce_with_logits: logits " + shape_str(logits.shape()) +
              " do not match target [" + std::to_string(target.batch) + "," +
              std::to_string(target.num_classes) + "]");
  const int64_t B = target.batch;
  const auto& x = logits.values();
  double total = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i], yi = target.values[i];
    total += std::max(xi, 0.0) - xi * yi + std::log1p(std::exp(-std::abs(xi)));
  }
  total /= static_cast<double>(B);
  return Tensor::make_node(
      {}, {total}, {logits},
      [B, y = target.values](detail::Node& self) {
        auto& p = *self.parents[0];
        if (!p.requires_grad) return;
        p.ensure_grad();
        const double g = self.grad[0] / static_cast<double>(B);
        for (size_t i = 0; i < p.values.size(); ++i)
          p.grad[i] += g * (sigmoid(p.values[i]) - y[i]);
      });
}

}  // namespace tsfew
