#include "fdcam/tiny_cnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fdcam/errors.hpp"
#include "fdcam/hashing.hpp"
#include "fdcam/rng.hpp"

namespace fdcam {
namespace {

using json = nlohmann::json;

// 3x3 convolution, stride 1, zero padding 1. Weight layout [out][in][ky][kx].
Tensor3 conv3x3(const Tensor3& in, const std::vector<double>& w,
                const std::vector<double>& b, int out_channels) {
  const int h = in.height;
  const int width = in.width;
  const int in_ch = in.channels;
  Tensor3 out(out_channels, h, width);
  for (int o = 0; o < out_channels; ++o) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < width; ++x) {
        double acc = b[o];
        for (int i = 0; i < in_ch; ++i) {
          for (int ky = 0; ky < 3; ++ky) {
            const int yy = y + ky - 1;
            if (yy < 0 || yy >= h) continue;
            for (int kx = 0; kx < 3; ++kx) {
              const int xx = x + kx - 1;
              if (xx < 0 || xx >= width) continue;
              acc += in.at(i, yy, xx) * w[((o * in_ch + i) * 3 + ky) * 3 + kx];
            }
          }
        }
        out.at(o, y, x) = acc;
      }
    }
  }
  return out;
}

// Gradient w.r.t. the convolution input for the same geometry.
Tensor3 conv3x3_backward_input(const Tensor3& dout, const std::vector<double>& w,
                               int in_channels) {
  const int h = dout.height;
  const int width = dout.width;
  const int out_ch = dout.channels;
  Tensor3 din(in_channels, h, width);
  for (int o = 0; o < out_ch; ++o) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < width; ++x) {
        const double g = dout.at(o, y, x);
        if (g == 0.0) continue;
        for (int i = 0; i < in_channels; ++i) {
          for (int ky = 0; ky < 3; ++ky) {
            const int yy = y + ky - 1;
            if (yy < 0 || yy >= h) continue;
            for (int kx = 0; kx < 3; ++kx) {
              const int xx = x + kx - 1;
              if (xx < 0 || xx >= width) continue;
              din.at(i, yy, xx) += g * w[((o * in_channels + i) * 3 + ky) * 3 + kx];
            }
          }
        }
      }
    }
  }
  return din;
}

void conv3x3_param_grads(const Tensor3& dout, const Tensor3& in,
                         std::vector<double>& dw, std::vector<double>& db) {
  const int h = dout.height;
  const int width = dout.width;
  const int out_ch = dout.channels;
  const int in_ch = in.channels;
  for (int o = 0; o < out_ch; ++o) {
    double bias_acc = 0.0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < width; ++x) {
        const double g = dout.at(o, y, x);
        if (g == 0.0) continue;
        bias_acc += g;
        for (int i = 0; i < in_ch; ++i) {
          for (int ky = 0; ky < 3; ++ky) {
            const int yy = y + ky - 1;
            if (yy < 0 || yy >= h) continue;
            for (int kx = 0; kx < 3; ++kx) {
              const int xx = x + kx - 1;
              if (xx < 0 || xx >= width) continue;
              dw[((o * in_ch + i) * 3 + ky) * 3 + kx] += g * in.at(i, yy, xx);
            }
          }
        }
      }
    }
    db[o] += bias_acc;
  }
}

void relu_inplace(Tensor3& t) {
  for (double& v : t.values) {
    if (v < 0.0) v = 0.0;
  }
}

// Zeroes grad entries where the pre-activation was <= 0 (subgradient 0 at 0).
void relu_backward_inplace(Tensor3& grad, const Tensor3& pre) {
  for (std::size_t i = 0; i < grad.values.size(); ++i) {
    if (pre.values[i] <= 0.0) grad.values[i] = 0.0;
  }
}

// 2x2 max pooling, stride 2. `argmax` receives, per output cell, the flat
// index of the winning input pixel within its channel plane.
Tensor3 maxpool2(const Tensor3& in, std::vector<int>& argmax) {
  const int oh = in.height / 2;
  const int ow = in.width / 2;
  Tensor3 out(in.channels, oh, ow);
  argmax.assign(static_cast<std::size_t>(in.channels) * oh * ow, 0);
  std::size_t cell = 0;
  for (int c = 0; c < in.channels; ++c) {
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x, ++cell) {
        double best = in.at(c, 2 * y, 2 * x);
        int best_idx = 2 * y * in.width + 2 * x;
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            const double v = in.at(c, 2 * y + dy, 2 * x + dx);
            const int idx = (2 * y + dy) * in.width + (2 * x + dx);
            if (v > best) {
              best = v;
              best_idx = idx;
            }
          }
        }
        out.at(c, y, x) = best;
        argmax[cell] = best_idx;
      }
    }
  }
  return out;
}

Tensor3 maxpool2_backward(const Tensor3& dpool, const std::vector<int>& argmax,
                          int in_h, int in_w) {
  Tensor3 din(dpool.channels, in_h, in_w);
  std::size_t cell = 0;
  for (int c = 0; c < dpool.channels; ++c) {
    double* plane = din.channel_data(c);
    for (int y = 0; y < dpool.height; ++y) {
      for (int x = 0; x < dpool.width; ++x, ++cell) {
        plane[argmax[cell]] += dpool.at(c, y, x);
      }
    }
  }
  return din;
}

std::vector<double> global_average_pool(const Tensor3& t) {
  std::vector<double> out(t.channels, 0.0);
  const double inv = 1.0 / static_cast<double>(t.plane_size());
  for (int c = 0; c < t.channels; ++c) {
    const double* plane = t.channel_data(c);
    double acc = 0.0;
    for (std::size_t i = 0; i < t.plane_size(); ++i) acc += plane[i];
    out[c] = acc * inv;
  }
  return out;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

void zero_channels(Tensor3& stack, const ChannelMask& mask) {
  for (int c = 0; c < stack.channels; ++c) {
    if (!mask.on[c]) {
      double* plane = stack.channel_data(c);
      std::fill(plane, plane + stack.plane_size(), 0.0);
    }
  }
}

}  // namespace

void TinyCnn::ParamGrads::add_scaled(const ParamGrads& other, double factor) {
  auto axpy = [factor](std::vector<double>& dst, const std::vector<double>& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += factor * src[i];
  };
  axpy(conv1_w, other.conv1_w);
  axpy(conv1_b, other.conv1_b);
  axpy(conv2_w, other.conv2_w);
  axpy(conv2_b, other.conv2_b);
  axpy(head_w, other.head_w);
  axpy(head_b, other.head_b);
}

TinyCnn::TinyCnn(std::uint64_t seed, int input_size, int class_count)
    : seed_(seed), input_size_(input_size), class_count_(class_count) {
  require(input_size >= 4 && input_size % 4 == 0,
          "TinyCnn: input size must be a positive multiple of 4");
  require(class_count >= 2, "TinyCnn: need at least two classes");

  Rng rng(seed);
  auto init = [&rng](std::vector<double>& v, std::size_t n, double stddev) {
    v.resize(n);
    for (double& x : v) x = rng.normal(0.0, stddev);
  };
  // He-style scales; biases start at zero so a freshly constructed net is
  // bias-free.
  init(params_.conv1_w, kConv1Channels * 3ull * kKernel * kKernel, std::sqrt(2.0 / 27.0));
  params_.conv1_b.assign(kConv1Channels, 0.0);
  init(params_.conv2_w, kConv2Channels * static_cast<std::size_t>(kConv1Channels) * kKernel * kKernel,
       std::sqrt(2.0 / 72.0));
  params_.conv2_b.assign(kConv2Channels, 0.0);
  init(params_.head_w, static_cast<std::size_t>(class_count) * kConv2Channels,
       std::sqrt(1.0 / kConv2Channels));
  params_.head_b.assign(class_count, 0.0);
}

void TinyCnn::set_target_layer(const std::string& id) {
  if (id != "conv1" && id != "conv2") {
    throw ConfigError("unknown target layer '" + id + "' (expected conv1 or conv2)");
  }
  target_layer_ = id;
}

int TinyCnn::channel_count() const {
  return target_layer_ == "conv1" ? kConv1Channels : kConv2Channels;
}

TinyCnn::ParamGrads TinyCnn::zero_grads() const {
  ParamGrads g;
  g.conv1_w.assign(params_.conv1_w.size(), 0.0);
  g.conv1_b.assign(params_.conv1_b.size(), 0.0);
  g.conv2_w.assign(params_.conv2_w.size(), 0.0);
  g.conv2_b.assign(params_.conv2_b.size(), 0.0);
  g.head_w.assign(params_.head_w.size(), 0.0);
  g.head_b.assign(params_.head_b.size(), 0.0);
  return g;
}

std::string TinyCnn::parameter_hash() const {
  std::uint64_t h = kFnvOffset;
  const int dims[] = {input_size_, class_count_, kConv1Channels, kConv2Channels};
  h = fnv1a64(dims, sizeof(dims), h);
  h = fnv1a64(params_.conv1_w, h);
  h = fnv1a64(params_.conv1_b, h);
  h = fnv1a64(params_.conv2_w, h);
  h = fnv1a64(params_.conv2_b, h);
  h = fnv1a64(params_.head_w, h);
  h = fnv1a64(params_.head_b, h);
  return hex64(h);
}

void TinyCnn::check_image(const Tensor3& image) const {
  if (image.channels != 3 || image.height != input_size_ || image.width != input_size_) {
    std::ostringstream oss;
    oss << "image shape mismatch: expected 3x" << input_size_ << "x" << input_size_
        << ", got " << image.channels << "x" << image.height << "x" << image.width;
    throw InputError(oss.str());
  }
}

void TinyCnn::check_mask(const ChannelMask& mask) const {
  if (mask.size() != channel_count()) {
    std::ostringstream oss;
    oss << "mask length " << mask.size() << " does not match channel count "
        << channel_count();
    throw InputError(oss.str());
  }
}

TinyCnn::ForwardState TinyCnn::forward_internal(const Tensor3& image,
                                                const ChannelMask* mask,
                                                Tensor3* conv1_pre_out) const {
  check_image(image);
  ForwardState s;
  Tensor3 conv1_pre = conv3x3(image, params_.conv1_w, params_.conv1_b, kConv1Channels);
  Tensor3 act1 = conv1_pre;
  relu_inplace(act1);
  if (conv1_pre_out) *conv1_pre_out = std::move(conv1_pre);
  s.pool1 = maxpool2(act1, s.pool1_argmax);
  if (mask && target_layer_ == "conv1") zero_channels(s.pool1, *mask);

  s.conv2_pre = conv3x3(s.pool1, params_.conv2_w, params_.conv2_b, kConv2Channels);
  Tensor3 act2 = s.conv2_pre;
  relu_inplace(act2);
  s.pool2 = maxpool2(act2, s.pool2_argmax);
  if (mask && target_layer_ == "conv2") zero_channels(s.pool2, *mask);

  s.gap = global_average_pool(s.pool2);
  s.logits.assign(class_count_, 0.0);
  for (int c = 0; c < class_count_; ++c) {
    double acc = params_.head_b[c];
    for (int k = 0; k < kConv2Channels; ++k) {
      acc += params_.head_w[c * kConv2Channels + k] * s.gap[k];
    }
    s.logits[c] = acc;
  }
  return s;
}

ClassScores TinyCnn::scores_from_logits(const std::vector<double>& logits) const {
  for (double v : logits) {
    if (!std::isfinite(v)) throw NumericError("model produced non-finite scores");
  }
  ClassScores out;
  out.mode = score_mode_;
  out.values = score_mode_ == ScoreMode::probability ? softmax(logits) : logits;
  return out;
}

const Tensor3& TinyCnn::target_stack(const ForwardState& state) const {
  return target_layer_ == "conv1" ? state.pool1 : state.pool2;
}

ClassScores TinyCnn::forward_scores(const Tensor3& image) const {
  return scores_from_logits(forward_internal(image, nullptr).logits);
}

Evaluation TinyCnn::forward_with_activations(const Tensor3& image) const {
  ForwardState s = forward_internal(image, nullptr);
  Evaluation eval;
  eval.scores = scores_from_logits(s.logits);
  eval.activations = target_stack(s);
  if (!eval.activations.all_finite()) {
    throw NumericError("non-finite activations at target layer");
  }
  return eval;
}

ClassScores TinyCnn::masked_forward(const Tensor3& image, const ChannelMask& mask) const {
  check_mask(mask);
  return scores_from_logits(forward_internal(image, &mask).logits);
}

std::vector<ClassScores> TinyCnn::batch_masked_forward(
    const Tensor3& image, const std::vector<ChannelMask>& masks) const {
  require(!masks.empty(), "batch_masked_forward: empty mask list");
  for (const ChannelMask& mask : masks) check_mask(mask);
  // The pass prefix up to the target layer does not depend on the mask, so it
  // is shared; each mask then replays only the downstream layers. This is
  // bit-identical to per-mask masked_forward calls.
  ForwardState s = forward_internal(image, nullptr);
  const Tensor3& base = target_stack(s);
  std::vector<ClassScores> out;
  out.reserve(masks.size());
  for (const ChannelMask& mask : masks) {
    Tensor3 acts = base;
    zero_channels(acts, mask);
    out.push_back(replay_from_target(acts));
  }
  return out;
}

ClassScores TinyCnn::head_scores(const Tensor3& conv2_stack) const {
  const std::vector<double> pooled = global_average_pool(conv2_stack);
  std::vector<double> logits(class_count_, 0.0);
  for (int c = 0; c < class_count_; ++c) {
    double acc = params_.head_b[c];
    for (int k = 0; k < kConv2Channels; ++k) {
      acc += params_.head_w[c * kConv2Channels + k] * pooled[k];
    }
    logits[c] = acc;
  }
  return scores_from_logits(logits);
}

ClassScores TinyCnn::replay_from_target(const Tensor3& target_activations) const {
  const int side = target_layer_ == "conv1" ? conv1_out_size() : conv2_out_size();
  require(target_activations.channels == channel_count() &&
              target_activations.height == side && target_activations.width == side,
          "replay_from_target: activation stack shape mismatch");
  if (target_layer_ == "conv2") {
    return head_scores(target_activations);
  }
  Tensor3 conv2_pre =
      conv3x3(target_activations, params_.conv2_w, params_.conv2_b, kConv2Channels);
  relu_inplace(conv2_pre);
  std::vector<int> argmax;
  Tensor3 pooled = maxpool2(conv2_pre, argmax);
  return head_scores(pooled);
}

Tensor3 TinyCnn::activation_gradients(const Tensor3& image, int class_index) const {
  require(class_index >= 0 && class_index < class_count_,
          "activation_gradients: class index out of range");
  ForwardState s = forward_internal(image, nullptr);

  // d score / d logits in the configured score mode.
  std::vector<double> dlogits(class_count_, 0.0);
  if (score_mode_ == ScoreMode::logit) {
    dlogits[class_index] = 1.0;
  } else {
    const std::vector<double> p = softmax(s.logits);
    for (int j = 0; j < class_count_; ++j) {
      dlogits[j] = p[class_index] * ((j == class_index ? 1.0 : 0.0) - p[j]);
    }
  }

  std::vector<double> dgap(kConv2Channels, 0.0);
  for (int k = 0; k < kConv2Channels; ++k) {
    double acc = 0.0;
    for (int c = 0; c < class_count_; ++c) {
      acc += dlogits[c] * params_.head_w[c * kConv2Channels + k];
    }
    dgap[k] = acc;
  }

  const int h2 = conv2_out_size();
  Tensor3 dpool2(kConv2Channels, h2, h2);
  const double inv_plane2 = 1.0 / static_cast<double>(h2 * h2);
  for (int k = 0; k < kConv2Channels; ++k) {
    double* plane = dpool2.channel_data(k);
    std::fill(plane, plane + dpool2.plane_size(), dgap[k] * inv_plane2);
  }
  if (target_layer_ == "conv2") return dpool2;

  const int h1 = conv1_out_size();
  Tensor3 dact2 = maxpool2_backward(dpool2, s.pool2_argmax, h1, h1);
  relu_backward_inplace(dact2, s.conv2_pre);
  return conv3x3_backward_input(dact2, params_.conv2_w, kConv1Channels);
}

double TinyCnn::loss_and_param_gradients(const Tensor3& image, int label,
                                         ParamGrads& grads) const {
  require(label >= 0 && label < class_count_, "label out of range");
  Tensor3 conv1_pre;
  ForwardState s = forward_internal(image, nullptr, &conv1_pre);
  const std::vector<double> p = softmax(s.logits);
  const double loss = -std::log(std::max(p[label], 1e-12));

  std::vector<double> dlogits = p;
  dlogits[label] -= 1.0;

  for (int c = 0; c < class_count_; ++c) {
    grads.head_b[c] += dlogits[c];
    for (int k = 0; k < kConv2Channels; ++k) {
      grads.head_w[c * kConv2Channels + k] += dlogits[c] * s.gap[k];
    }
  }

  const int h2 = conv2_out_size();
  const double inv_plane2 = 1.0 / static_cast<double>(h2 * h2);
  Tensor3 dpool2(kConv2Channels, h2, h2);
  for (int k = 0; k < kConv2Channels; ++k) {
    double acc = 0.0;
    for (int c = 0; c < class_count_; ++c) {
      acc += dlogits[c] * params_.head_w[c * kConv2Channels + k];
    }
    double* plane = dpool2.channel_data(k);
    std::fill(plane, plane + dpool2.plane_size(), acc * inv_plane2);
  }

  const int h1 = conv1_out_size();
  Tensor3 dact2 = maxpool2_backward(dpool2, s.pool2_argmax, h1, h1);
  relu_backward_inplace(dact2, s.conv2_pre);
  conv3x3_param_grads(dact2, s.pool1, grads.conv2_w, grads.conv2_b);

  Tensor3 dpool1 = conv3x3_backward_input(dact2, params_.conv2_w, kConv1Channels);
  Tensor3 dact1 = maxpool2_backward(dpool1, s.pool1_argmax, input_size_, input_size_);
  relu_backward_inplace(dact1, conv1_pre);
  conv3x3_param_grads(dact1, image, grads.conv1_w, grads.conv1_b);
  return loss;
}

void TinyCnn::save_checkpoint(const std::string& path) const {
  json doc;
  doc["format"] = "fdcam-tiny-cnn";
  doc["version"] = 1;
  doc["input_size"] = input_size_;
  doc["class_count"] = class_count_;
  doc["seed"] = seed_;
  doc["score_mode"] = to_string(score_mode_);
  doc["target_layer"] = target_layer_;
  doc["params"] = {
      {"conv1_w", params_.conv1_w}, {"conv1_b", params_.conv1_b},
      {"conv2_w", params_.conv2_w}, {"conv2_b", params_.conv2_b},
      {"head_w", params_.head_w},   {"head_b", params_.head_b},
  };
  doc["parameter_hash"] = parameter_hash();
  std::ofstream out(path);
  if (!out) throw InputError("cannot write checkpoint: " + path);
  out << doc.dump(2) << "\n";
}

TinyCnn TinyCnn::load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read checkpoint: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InputError("malformed checkpoint " + path + ": " + e.what());
  }
  try {
    if (doc.at("format") != "fdcam-tiny-cnn") {
      throw InputError("not a tiny CNN checkpoint: " + path);
    }
    TinyCnn model(doc.at("seed").get<std::uint64_t>(), doc.at("input_size").get<int>(),
                  doc.at("class_count").get<int>());
    const json& p = doc.at("params");
    Params loaded;
    loaded.conv1_w = p.at("conv1_w").get<std::vector<double>>();
    loaded.conv1_b = p.at("conv1_b").get<std::vector<double>>();
    loaded.conv2_w = p.at("conv2_w").get<std::vector<double>>();
    loaded.conv2_b = p.at("conv2_b").get<std::vector<double>>();
    loaded.head_w = p.at("head_w").get<std::vector<double>>();
    loaded.head_b = p.at("head_b").get<std::vector<double>>();
    require(loaded.conv1_w.size() == model.params_.conv1_w.size() &&
                loaded.conv1_b.size() == model.params_.conv1_b.size() &&
                loaded.conv2_w.size() == model.params_.conv2_w.size() &&
                loaded.conv2_b.size() == model.params_.conv2_b.size() &&
                loaded.head_w.size() == model.params_.head_w.size() &&
                loaded.head_b.size() == model.params_.head_b.size(),
            "checkpoint parameter shapes do not match the architecture");
    model.params_ = std::move(loaded);
    model.set_score_mode(score_mode_from_string(doc.at("score_mode").get<std::string>()));
    model.set_target_layer(doc.at("target_layer").get<std::string>());
    if (doc.contains("parameter_hash") &&
        doc.at("parameter_hash").get<std::string>() != model.parameter_hash()) {
      throw InputError("checkpoint parameter hash mismatch: " + path);
    }
    return model;
  } catch (const json::exception& e) {
    throw InputError("malformed checkpoint " + path + ": " + e.what());
  }
}

TinyCnn make_tiny_test_cnn(std::uint64_t seed) { return TinyCnn(seed); }

}  // namespace fdcam
