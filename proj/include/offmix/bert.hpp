// Copyright 2026 The offmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OFFMIX_BERT_HPP
#define OFFMIX_BERT_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "offmix/binio.hpp"
#include "offmix/error.hpp"
#include "offmix/rng.hpp"
#include "offmix/vocab.hpp"

// BERT-family encoder: token/position/segment embeddings, post-layer-norm
// transformer blocks with multi-head self-attention and a GELU feed-forward,
// sentence representation read off position 0. Dense math is Eigen
// throughout, templated on the scalar so tests can run the same code in
// double precision.
namespace offmix::bert {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct Dims {
  int vocab_size = 0;
  int hidden = 0;
  int layers = 0;
  int heads = 0;
  int intermediate = 0;
  int max_position = 0;

  int head_dim() const { return hidden / heads; }
  bool operator==(const Dims&) const = default;
};

template <typename Scalar>
struct LayerParams {
  Mat<Scalar> wq, bq, wk, bk, wv, bv, wo, bo;  // H x H, biases 1 x H
  Mat<Scalar> ln1_g, ln1_b;                    // 1 x H
  Mat<Scalar> w1, b1;                          // H x I, 1 x I
  Mat<Scalar> w2, b2;                          // I x H, 1 x H
  Mat<Scalar> ln2_g, ln2_b;                    // 1 x H
};

template <typename Scalar>
struct Params {
  Dims dims;
  Mat<Scalar> tok_emb;            // vocab x H
  Mat<Scalar> pos_emb;            // max_position x H
  Mat<Scalar> seg_emb;            // 2 x H (segment 0 used throughout)
  Mat<Scalar> emb_ln_g, emb_ln_b; // 1 x H
  std::vector<LayerParams<Scalar>> layers;

  // Visits every tensor in a fixed order; the serialization format, Adam
  // state, and gradient accumulators all rely on this order.
  template <typename F>
  void for_each(F&& f) {
    f(tok_emb); f(pos_emb); f(seg_emb); f(emb_ln_g); f(emb_ln_b);
    for (auto& l : layers) {
      f(l.wq); f(l.bq); f(l.wk); f(l.bk); f(l.wv); f(l.bv); f(l.wo); f(l.bo);
      f(l.ln1_g); f(l.ln1_b);
      f(l.w1); f(l.b1); f(l.w2); f(l.b2);
      f(l.ln2_g); f(l.ln2_b);
    }
  }
  template <typename F>
  void for_each(F&& f) const {
    const_cast<Params*>(this)->for_each(
        [&](auto& t) { f(const_cast<const Mat<Scalar>&>(t)); });
  }
};

namespace detail {

constexpr double kLnEps = 1e-12;

template <typename Scalar>
Scalar gelu(Scalar x) {
  return Scalar(0.5) * x * (Scalar(1) + std::erf(x * Scalar(M_SQRT1_2)));
}

template <typename Scalar>
Scalar gelu_grad(Scalar x) {
  const Scalar cdf = Scalar(0.5) * (Scalar(1) + std::erf(x * Scalar(M_SQRT1_2)));
  const Scalar pdf =
      std::exp(Scalar(-0.5) * x * x) * Scalar(0.3989422804014326779);
  return cdf + x * pdf;
}

template <typename Scalar>
void softmax_rows(Mat<Scalar>& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Scalar mx = m.row(r).maxCoeff();
    m.row(r) = (m.row(r).array() - mx).exp().matrix();
    m.row(r) /= m.row(r).sum();
  }
}

}  // namespace detail

template <typename Scalar>
struct LayerNormCache {
  Mat<Scalar> xhat;   // L x H
  Vec<Scalar> rstd;   // L
};

template <typename Scalar>
Mat<Scalar> layernorm_forward(const Mat<Scalar>& x, const Mat<Scalar>& gamma,
                              const Mat<Scalar>& beta,
                              LayerNormCache<Scalar>& cache) {
  const Eigen::Index L = x.rows(), H = x.cols();
  cache.xhat.resize(L, H);
  cache.rstd.resize(L);
  Mat<Scalar> y(L, H);
  for (Eigen::Index r = 0; r < L; ++r) {
    const Scalar mean = x.row(r).mean();
    const Scalar var = (x.row(r).array() - mean).square().sum() / Scalar(H);
    const Scalar rstd = Scalar(1) / std::sqrt(var + Scalar(detail::kLnEps));
    cache.rstd[r] = rstd;
    cache.xhat.row(r) = ((x.row(r).array() - mean) * rstd).matrix();
    y.row(r) = cache.xhat.row(r).cwiseProduct(gamma.row(0)) + beta.row(0);
  }
  return y;
}

// dx for the biased-variance layer norm; accumulates dgamma/dbeta.
template <typename Scalar>
Mat<Scalar> layernorm_backward(const Mat<Scalar>& dy, const Mat<Scalar>& gamma,
                               const LayerNormCache<Scalar>& cache,
                               Mat<Scalar>& dgamma, Mat<Scalar>& dbeta) {
  const Eigen::Index L = dy.rows(), H = dy.cols();
  Mat<Scalar> dx(L, H);
  for (Eigen::Index r = 0; r < L; ++r) {
    auto xhat = cache.xhat.row(r);
    Eigen::Matrix<Scalar, 1, Eigen::Dynamic> dxhat =
        dy.row(r).cwiseProduct(gamma.row(0));
    const Scalar m1 = dxhat.mean();
    const Scalar m2 = dxhat.cwiseProduct(xhat).mean();
    dx.row(r) =
        (cache.rstd[r] * (dxhat.array() - m1 - xhat.array() * m2)).matrix();
    dgamma.row(0) += dy.row(r).cwiseProduct(xhat);
    dbeta.row(0) += dy.row(r);
  }
  return dx;
}

// Activations captured during forward that backward needs.
template <typename Scalar>
struct Cache {
  std::vector<TokenId> ids;  // masked prefix only
  Mat<Scalar> e_raw;
  LayerNormCache<Scalar> emb_ln;
  Mat<Scalar> x0;

  struct Layer {
    Mat<Scalar> x_in;
    Mat<Scalar> q, k, v;                // L x H
    std::vector<Mat<Scalar>> att;      // per head, L x L, post-softmax
    Mat<Scalar> ctx;                   // L x H
    LayerNormCache<Scalar> ln1;
    Mat<Scalar> out1;
    Mat<Scalar> ffn_pre;               // L x I
    Mat<Scalar> ffn_act;               // L x I
    LayerNormCache<Scalar> ln2;
  };
  std::vector<Layer> layers;
  Mat<Scalar> out_final;  // L x H
};

// Runs the encoder over the masked prefix of a sequence (`ids` must contain
// only real positions; padding never enters the computation).
template <typename Scalar>
Cache<Scalar> forward(const Params<Scalar>& p,
                      const std::vector<TokenId>& ids) {
  const int L = static_cast<int>(ids.size());
  const int H = p.dims.hidden;
  if (L == 0) throw_usage("cannot encode an empty token sequence");
  if (L > p.dims.max_position)
    throw_usage("sequence length " + std::to_string(L) +
                " exceeds the encoder's max position " +
                std::to_string(p.dims.max_position));

  Cache<Scalar> c;
  c.ids = ids;
  c.e_raw.resize(L, H);
  for (int t = 0; t < L; ++t) {
    const TokenId id = ids[static_cast<std::size_t>(t)];
    if (id < 0 || id >= p.dims.vocab_size)
      throw_data("token id " + std::to_string(id) +
                 " outside the encoder vocabulary");
    c.e_raw.row(t) = p.tok_emb.row(id) + p.pos_emb.row(t) + p.seg_emb.row(0);
  }
  c.x0 = layernorm_forward(c.e_raw, p.emb_ln_g, p.emb_ln_b, c.emb_ln);

  const int heads = p.dims.heads;
  const int dk = p.dims.head_dim();
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(dk));

  Mat<Scalar> x = c.x0;
  c.layers.resize(static_cast<std::size_t>(p.dims.layers));
  for (int li = 0; li < p.dims.layers; ++li) {
    auto& lp = p.layers[static_cast<std::size_t>(li)];
    auto& lc = c.layers[static_cast<std::size_t>(li)];
    lc.x_in = x;

    lc.q = x * lp.wq;
    lc.q.rowwise() += lp.bq.row(0);
    lc.k = x * lp.wk;
    lc.k.rowwise() += lp.bk.row(0);
    lc.v = x * lp.wv;
    lc.v.rowwise() += lp.bv.row(0);

    lc.att.resize(static_cast<std::size_t>(heads));
    lc.ctx.resize(L, H);
    for (int h = 0; h < heads; ++h) {
      auto qh = lc.q.middleCols(h * dk, dk);
      auto kh = lc.k.middleCols(h * dk, dk);
      auto vh = lc.v.middleCols(h * dk, dk);
      Mat<Scalar> scores = (qh * kh.transpose()) * scale;
      detail::softmax_rows(scores);
      lc.att[static_cast<std::size_t>(h)] = scores;
      lc.ctx.middleCols(h * dk, dk) = scores * vh;
    }

    Mat<Scalar> att_out = lc.ctx * lp.wo;
    att_out.rowwise() += lp.bo.row(0);
    Mat<Scalar> res1 = lc.x_in + att_out;
    lc.out1 = layernorm_forward(res1, lp.ln1_g, lp.ln1_b, lc.ln1);

    lc.ffn_pre = lc.out1 * lp.w1;
    lc.ffn_pre.rowwise() += lp.b1.row(0);
    lc.ffn_act = lc.ffn_pre.unaryExpr([](Scalar v) { return detail::gelu(v); });
    Mat<Scalar> ffn_out = lc.ffn_act * lp.w2;
    ffn_out.rowwise() += lp.b2.row(0);
    Mat<Scalar> res2 = lc.out1 + ffn_out;
    x = layernorm_forward(res2, lp.ln2_g, lp.ln2_b, lc.ln2);
  }
  c.out_final = x;
  return c;
}

template <typename Scalar>
Params<Scalar> zeros_like(const Params<Scalar>& p) {
  Params<Scalar> z;
  z.dims = p.dims;
  z.layers.resize(p.layers.size());
  auto zero_fill = [](Mat<Scalar>& dst, const Mat<Scalar>& src) {
    dst = Mat<Scalar>::Zero(src.rows(), src.cols());
  };
  zero_fill(z.tok_emb, p.tok_emb);
  zero_fill(z.pos_emb, p.pos_emb);
  zero_fill(z.seg_emb, p.seg_emb);
  zero_fill(z.emb_ln_g, p.emb_ln_g);
  zero_fill(z.emb_ln_b, p.emb_ln_b);
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    const auto& s = p.layers[i];
    auto& d = z.layers[i];
    zero_fill(d.wq, s.wq); zero_fill(d.bq, s.bq);
    zero_fill(d.wk, s.wk); zero_fill(d.bk, s.bk);
    zero_fill(d.wv, s.wv); zero_fill(d.bv, s.bv);
    zero_fill(d.wo, s.wo); zero_fill(d.bo, s.bo);
    zero_fill(d.ln1_g, s.ln1_g); zero_fill(d.ln1_b, s.ln1_b);
    zero_fill(d.w1, s.w1); zero_fill(d.b1, s.b1);
    zero_fill(d.w2, s.w2); zero_fill(d.b2, s.b2);
    zero_fill(d.ln2_g, s.ln2_g); zero_fill(d.ln2_b, s.ln2_b);
  }
  return z;
}

// Accumulates parameter gradients into `g` given d(loss)/d(out_final).
template <typename Scalar>
void backward(const Params<Scalar>& p, const Cache<Scalar>& c,
              const Mat<Scalar>& d_out_final, Params<Scalar>& g) {
  const int L = static_cast<int>(c.ids.size());
  const int heads = p.dims.heads;
  const int dk = p.dims.head_dim();
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(dk));

  Mat<Scalar> d_x = d_out_final;
  for (int li = p.dims.layers - 1; li >= 0; --li) {
    const auto& lp = p.layers[static_cast<std::size_t>(li)];
    const auto& lc = c.layers[static_cast<std::size_t>(li)];
    auto& lg = g.layers[static_cast<std::size_t>(li)];

    // x (block output) = LN2(out1 + ffn_out)
    Mat<Scalar> d_res2 =
        layernorm_backward(d_x, lp.ln2_g, lc.ln2, lg.ln2_g, lg.ln2_b);
    Mat<Scalar> d_out1 = d_res2;  // residual branch
    // ffn_out = gelu(out1*w1 + b1) * w2 + b2
    Mat<Scalar> d_ffn_act = d_res2 * lp.w2.transpose();
    lg.w2 += lc.ffn_act.transpose() * d_res2;
    lg.b2.row(0) += d_res2.colwise().sum();
    Mat<Scalar> d_ffn_pre = d_ffn_act.cwiseProduct(lc.ffn_pre.unaryExpr(
        [](Scalar v) { return detail::gelu_grad(v); }));
    d_out1 += d_ffn_pre * lp.w1.transpose();
    lg.w1 += lc.out1.transpose() * d_ffn_pre;
    lg.b1.row(0) += d_ffn_pre.colwise().sum();

    // out1 = LN1(x_in + att_out)
    Mat<Scalar> d_res1 =
        layernorm_backward(d_out1, lp.ln1_g, lc.ln1, lg.ln1_g, lg.ln1_b);
    Mat<Scalar> d_x_in = d_res1;  // residual branch
    // att_out = ctx * wo + bo
    Mat<Scalar> d_ctx = d_res1 * lp.wo.transpose();
    lg.wo += lc.ctx.transpose() * d_res1;
    lg.bo.row(0) += d_res1.colwise().sum();

    Mat<Scalar> d_q(L, p.dims.hidden), d_k(L, p.dims.hidden),
        d_v(L, p.dims.hidden);
    for (int h = 0; h < heads; ++h) {
      const auto& a = lc.att[static_cast<std::size_t>(h)];
      auto qh = lc.q.middleCols(h * dk, dk);
      auto kh = lc.k.middleCols(h * dk, dk);
      auto vh = lc.v.middleCols(h * dk, dk);
      auto d_ctx_h = d_ctx.middleCols(h * dk, dk);

      Mat<Scalar> d_a = d_ctx_h * vh.transpose();
      d_v.middleCols(h * dk, dk) = a.transpose() * d_ctx_h;
      // softmax rows: ds = a .* (da - rowdot(da, a))
      Mat<Scalar> d_s(L, L);
      for (int r = 0; r < L; ++r) {
        const Scalar dot = d_a.row(r).cwiseProduct(a.row(r)).sum();
        d_s.row(r) =
            a.row(r).cwiseProduct((d_a.row(r).array() - dot).matrix());
      }
      d_s *= scale;
      d_q.middleCols(h * dk, dk) = d_s * kh;
      d_k.middleCols(h * dk, dk) = d_s.transpose() * qh;
    }

    d_x_in += d_q * lp.wq.transpose();
    lg.wq += lc.x_in.transpose() * d_q;
    lg.bq.row(0) += d_q.colwise().sum();
    d_x_in += d_k * lp.wk.transpose();
    lg.wk += lc.x_in.transpose() * d_k;
    lg.bk.row(0) += d_k.colwise().sum();
    d_x_in += d_v * lp.wv.transpose();
    lg.wv += lc.x_in.transpose() * d_v;
    lg.bv.row(0) += d_v.colwise().sum();

    d_x = std::move(d_x_in);
  }

  Mat<Scalar> d_e_raw =
      layernorm_backward(d_x, p.emb_ln_g, c.emb_ln, g.emb_ln_g, g.emb_ln_b);
  for (int t = 0; t < L; ++t) {
    g.tok_emb.row(c.ids[static_cast<std::size_t>(t)]) += d_e_raw.row(t);
    g.pos_emb.row(t) += d_e_raw.row(t);
    g.seg_emb.row(0) += d_e_raw.row(t);
  }
}

template <typename Scalar>
Params<Scalar> random_params(const Dims& dims, std::uint64_t seed) {
  if (dims.hidden % dims.heads != 0)
    throw_usage("hidden size must be divisible by the number of heads");
  Rng rng(seed);
  Params<Scalar> p;
  p.dims = dims;
  p.layers.resize(static_cast<std::size_t>(dims.layers));
  const Scalar std_dev = Scalar(0.02);
  auto normal_fill = [&](Mat<Scalar>& m, int rows, int cols) {
    m.resize(rows, cols);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index cidx = 0; cidx < m.cols(); ++cidx)
        m(r, cidx) = std_dev * static_cast<Scalar>(rng.next_normal());
  };
  auto ones = [](Mat<Scalar>& m, int rows, int cols) {
    m = Mat<Scalar>::Ones(rows, cols);
  };
  auto zeros = [](Mat<Scalar>& m, int rows, int cols) {
    m = Mat<Scalar>::Zero(rows, cols);
  };
  const int H = dims.hidden, I = dims.intermediate;
  normal_fill(p.tok_emb, dims.vocab_size, H);
  normal_fill(p.pos_emb, dims.max_position, H);
  normal_fill(p.seg_emb, 2, H);
  ones(p.emb_ln_g, 1, H);
  zeros(p.emb_ln_b, 1, H);
  for (auto& l : p.layers) {
    normal_fill(l.wq, H, H); zeros(l.bq, 1, H);
    normal_fill(l.wk, H, H); zeros(l.bk, 1, H);
    normal_fill(l.wv, H, H); zeros(l.bv, 1, H);
    normal_fill(l.wo, H, H); zeros(l.bo, 1, H);
    ones(l.ln1_g, 1, H); zeros(l.ln1_b, 1, H);
    normal_fill(l.w1, H, I); zeros(l.b1, 1, I);
    normal_fill(l.w2, I, H); zeros(l.b2, 1, H);
    ones(l.ln2_g, 1, H); zeros(l.ln2_b, 1, H);
  }
  return p;
}

// --- serialization -------------------------------------------------------

inline constexpr char kWeightsMagic[4] = {'O', 'M', 'W', '1'};
inline constexpr std::uint32_t kWeightsVersion = 1;

template <typename Scalar>
void save_params(const Params<Scalar>& p, std::ostream& os) {
  binio::put_magic(os, kWeightsMagic);
  binio::put_u32(os, kWeightsVersion);
  binio::put_u32(os, static_cast<std::uint32_t>(p.dims.vocab_size));
  binio::put_u32(os, static_cast<std::uint32_t>(p.dims.hidden));
  binio::put_u32(os, static_cast<std::uint32_t>(p.dims.layers));
  binio::put_u32(os, static_cast<std::uint32_t>(p.dims.heads));
  binio::put_u32(os, static_cast<std::uint32_t>(p.dims.intermediate));
  binio::put_u32(os, static_cast<std::uint32_t>(p.dims.max_position));
  p.for_each([&](const Mat<Scalar>& t) {
    binio::put_u32(os, static_cast<std::uint32_t>(t.rows()));
    binio::put_u32(os, static_cast<std::uint32_t>(t.cols()));
    for (Eigen::Index r = 0; r < t.rows(); ++r)
      for (Eigen::Index cidx = 0; cidx < t.cols(); ++cidx)
        binio::put_f32(os, static_cast<float>(t(r, cidx)));
  });
}

template <typename Scalar>
Params<Scalar> load_params(std::istream& is) {
  binio::expect_magic(is, kWeightsMagic, "encoder weights");
  const std::uint32_t version = binio::get_u32(is, "weights version");
  if (version != kWeightsVersion)
    throw_data("unsupported encoder weights version " +
               std::to_string(version));
  Dims dims;
  dims.vocab_size = static_cast<int>(binio::get_u32(is, "vocab_size"));
  dims.hidden = static_cast<int>(binio::get_u32(is, "hidden"));
  dims.layers = static_cast<int>(binio::get_u32(is, "layers"));
  dims.heads = static_cast<int>(binio::get_u32(is, "heads"));
  dims.intermediate = static_cast<int>(binio::get_u32(is, "intermediate"));
  dims.max_position = static_cast<int>(binio::get_u32(is, "max_position"));
  if (dims.vocab_size <= 0 || dims.hidden <= 0 || dims.layers <= 0 ||
      dims.heads <= 0 || dims.intermediate <= 0 || dims.max_position <= 0 ||
      dims.hidden % dims.heads != 0)
    throw_data("encoder weights header has inconsistent dimensions");

  Params<Scalar> p = random_params<Scalar>(dims, 0);  // shape template
  p.for_each([&](Mat<Scalar>& t) {
    const auto rows = binio::get_u32(is, "tensor rows");
    const auto cols = binio::get_u32(is, "tensor cols");
    if (rows != static_cast<std::uint32_t>(t.rows()) ||
        cols != static_cast<std::uint32_t>(t.cols()))
      throw_data("encoder weights tensor shape mismatch");
    for (Eigen::Index r = 0; r < t.rows(); ++r)
      for (Eigen::Index cidx = 0; cidx < t.cols(); ++cidx)
        t(r, cidx) = static_cast<Scalar>(binio::get_f32(is, "tensor data"));
  });
  return p;
}

template <typename Scalar>
void save_params(const Params<Scalar>& p, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw_data("cannot write encoder weights file: " + path.string());
  save_params(p, os);
  if (!os) throw_data("failed writing encoder weights file: " + path.string());
}

template <typename Scalar>
Params<Scalar> load_params(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw_data("cannot open encoder weights file: " + path.string());
  Params<Scalar> p = load_params<Scalar>(is);
  if (is.peek() != std::char_traits<char>::eof())
    throw_data("encoder weights file has trailing bytes: " + path.string());
  return p;
}

// --- optimizer ------------------------------------------------------------

template <typename Scalar>
struct AdamState {
  Params<Scalar> m, v;
  long step = 0;

  explicit AdamState(const Params<Scalar>& shape)
      : m(zeros_like(shape)), v(zeros_like(shape)) {}
};

template <typename Scalar>
void adam_step(Params<Scalar>& p, const Params<Scalar>& grads,
               AdamState<Scalar>& state, Scalar lr,
               Scalar beta1 = Scalar(0.9), Scalar beta2 = Scalar(0.999),
               Scalar eps = Scalar(1e-8)) {
  ++state.step;
  const Scalar bc1 = Scalar(1) - std::pow(beta1, Scalar(state.step));
  const Scalar bc2 = Scalar(1) - std::pow(beta2, Scalar(state.step));

  // Walk the three parameter sets in lockstep via the fixed tensor order.
  std::vector<Mat<Scalar>*> ps, ms, vs;
  std::vector<const Mat<Scalar>*> gs;
  p.for_each([&](Mat<Scalar>& t) { ps.push_back(&t); });
  state.m.for_each([&](Mat<Scalar>& t) { ms.push_back(&t); });
  state.v.for_each([&](Mat<Scalar>& t) { vs.push_back(&t); });
  grads.for_each([&](const Mat<Scalar>& t) { gs.push_back(&t); });
  for (std::size_t i = 0; i < ps.size(); ++i) {
    Mat<Scalar>& m = *ms[i];
    Mat<Scalar>& v = *vs[i];
    const Mat<Scalar>& gmat = *gs[i];
    m = beta1 * m + (Scalar(1) - beta1) * gmat;
    v = (beta2 * v.array() + (Scalar(1) - beta2) * gmat.array().square()).matrix();
    ps[i]->array() -=
        lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);
  }
}

}  // namespace offmix::bert

#endif  // OFFMIX_BERT_HPP
