#include "net.hpp"

#include <cmath>
#include <cstring>

#include "io.hpp"
#include "rng.hpp"

namespace bbcirl {

void NetSpec::validate() const {
  if (layer_sizes.size() < 2)
    throw ConfigError("net: need at least input and output layer sizes");
  for (int s : layer_sizes)
    if (s < 1) throw ConfigError("net: layer sizes must be positive");
  if (head == Head::linear && layer_sizes.back() != 1)
    throw ConfigError("net: linear head requires output size 1");
  if (head == Head::softmax && layer_sizes.back() < 2)
    throw ConfigError("net: softmax head requires at least 2 outputs");
}

int NetSpec::param_count() const {
  int n = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l)
    n += (layer_sizes[l] + 1) * layer_sizes[l + 1];
  return n;
}

Network::Network(NetSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  int offset = 0;
  for (std::size_t l = 0; l + 1 < spec_.layer_sizes.size(); ++l) {
    const int in = spec_.layer_sizes[l];
    const int out = spec_.layer_sizes[l + 1];
    layers_.push_back(LayerView{in, out, offset});
    offset += (in + 1) * out;
  }
  params_.resize(static_cast<std::size_t>(offset));
  // U[-1/sqrt(fan_in), +1/sqrt(fan_in)] for weights and biases, drawn in
  // storage order so a seed pins the whole vector.
  Rng rng(spec_.init_seed);
  for (const auto& lv : layers_) {
    const double r = 1.0 / std::sqrt(static_cast<double>(lv.in));
    for (int i = 0; i < (lv.in + 1) * lv.out; ++i)
      params_[static_cast<std::size_t>(lv.offset + i)] = rng.uniform(-r, r);
  }
}

int Network::last_layer_size() const {
  const auto& lv = layers_.back();
  return (lv.in + 1) * lv.out;
}

std::span<double> Network::last_layer() {
  const auto& lv = layers_.back();
  return std::span<double>(params_).subspan(static_cast<std::size_t>(lv.offset));
}

std::span<const double> Network::last_layer() const {
  const auto& lv = layers_.back();
  return std::span<const double>(params_).subspan(static_cast<std::size_t>(lv.offset));
}

void Network::ensure_scratch(NetScratch& s) const {
  if (s.act.size() == layers_.size() &&
      (layers_.empty() || static_cast<int>(s.act.back().size()) == layers_.back().out)) {
    bool ok = true;
    for (std::size_t l = 0; l < layers_.size(); ++l)
      if (static_cast<int>(s.act[l].size()) != layers_[l].out) ok = false;
    if (ok) return;
  }
  s.act.assign(layers_.size(), {});
  s.delta.assign(layers_.size(), {});
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    s.act[l].resize(static_cast<std::size_t>(layers_[l].out));
    s.delta[l].resize(static_cast<std::size_t>(layers_[l].out));
  }
}

void Network::forward_core(int state, std::span<const double> input, NetScratch& s) const {
  ensure_scratch(s);
  if (state >= 0) {
    if (state >= input_size())
      throw UsageError("forward: state index out of range: " + std::to_string(state));
  } else if (static_cast<int>(input.size()) != input_size()) {
    throw UsageError("forward: input length " + std::to_string(input.size()) +
                     " does not match net input size " + std::to_string(input_size()));
  }

  const double* p = params_.data();
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& lv = layers_[l];
    const double* w = p + lv.offset;
    const double* b = w + static_cast<std::size_t>(lv.in) * lv.out;
    double* z = s.act[l].data();
    if (l == 0 && state >= 0) {
      for (int j = 0; j < lv.out; ++j) z[j] = w[j * lv.in + state] + b[j];
    } else {
      const double* x = (l == 0) ? input.data() : s.act[l - 1].data();
      for (int j = 0; j < lv.out; ++j) {
        double acc = b[j];
        const double* wj = w + static_cast<std::size_t>(j) * lv.in;
        for (int i = 0; i < lv.in; ++i) acc += wj[i] * x[i];
        z[j] = acc;
      }
    }
    const bool last = (l + 1 == layers_.size());
    if (!last) {
      for (int j = 0; j < lv.out; ++j)
        if (z[j] < 0.0) z[j] = 0.0;
    } else if (spec_.head == Head::softmax) {
      double mx = z[0];
      for (int j = 1; j < lv.out; ++j) mx = std::max(mx, z[j]);
      double sum = 0.0;
      for (int j = 0; j < lv.out; ++j) {
        z[j] = std::exp(z[j] - mx);
        sum += z[j];
      }
      for (int j = 0; j < lv.out; ++j) z[j] /= sum;
    }
  }
}

std::span<const double> Network::forward(std::span<const double> input, NetScratch& s) const {
  forward_core(-1, input, s);
  return s.act.back();
}

std::span<const double> Network::forward_state(int state, NetScratch& s) const {
  forward_core(state, {}, s);
  return s.act.back();
}

std::vector<double> Network::policy_forward(std::span<const double> input) const {
  if (spec_.head != Head::softmax) throw UsageError("policy_forward requires a softmax head");
  NetScratch s;
  auto out = forward(input, s);
  return std::vector<double>(out.begin(), out.end());
}

std::vector<double> Network::policy_forward_state(int state) const {
  if (spec_.head != Head::softmax) throw UsageError("policy_forward requires a softmax head");
  NetScratch s;
  auto out = forward_state(state, s);
  return std::vector<double>(out.begin(), out.end());
}

double Network::scalar_forward(std::span<const double> input) const {
  if (spec_.head != Head::linear) throw UsageError("scalar_forward requires a linear head");
  NetScratch s;
  return forward(input, s)[0];
}

double Network::scalar_forward_state(int state) const {
  if (spec_.head != Head::linear) throw UsageError("scalar_forward requires a linear head");
  NetScratch s;
  return forward_state(state, s)[0];
}

void Network::backprop_into(int state, std::span<const double> input, NetScratch& s,
                            std::span<double> dest, double scale) const {
  // delta for layer l is d(loss)/d(pre-activation of layer l output).
  // Walk layers backward; compute the previous delta from the still-unmodified
  // weights before touching this layer's destination block (dest may alias
  // params_ for fused updates).
  const double* p = params_.data();
  for (int l = static_cast<int>(layers_.size()) - 1; l >= 0; --l) {
    const auto& lv = layers_[l];
    const double* w = p + lv.offset;
    const double* d = s.delta[static_cast<std::size_t>(l)].data();
    if (l > 0) {
      double* dprev = s.delta[static_cast<std::size_t>(l - 1)].data();
      const double* hprev = s.act[static_cast<std::size_t>(l - 1)].data();
      for (int i = 0; i < lv.in; ++i) {
        double acc = 0.0;
        for (int j = 0; j < lv.out; ++j) acc += w[j * lv.in + i] * d[j];
        dprev[i] = (hprev[i] > 0.0) ? acc : 0.0;  // ReLU mask
      }
    }
    double* dw = dest.data() + lv.offset;
    double* db = dw + static_cast<std::size_t>(lv.in) * lv.out;
    if (l == 0 && state >= 0) {
      for (int j = 0; j < lv.out; ++j) {
        dw[j * lv.in + state] += scale * d[j];
        db[j] += scale * d[j];
      }
    } else {
      const double* x = (l == 0) ? input.data() : s.act[static_cast<std::size_t>(l - 1)].data();
      for (int j = 0; j < lv.out; ++j) {
        const double sd = scale * d[j];
        double* dwj = dw + static_cast<std::size_t>(j) * lv.in;
        for (int i = 0; i < lv.in; ++i) dwj[i] += sd * x[i];
        db[j] += sd;
      }
    }
  }
}

void Network::fill_score_delta(int action, GradMode mode, NetScratch& s) const {
  if (spec_.head != Head::softmax) throw UsageError("score gradients require a softmax head");
  const int out = output_size();
  if (action < 0 || action >= out)
    throw UsageError("action index out of range: " + std::to_string(action));
  const double* probs = s.act.back().data();
  double* d = s.delta.back().data();
  if (mode == GradMode::log_prob) {
    for (int j = 0; j < out; ++j) d[j] = -probs[j];
    d[action] += 1.0;
  } else {
    const double pa = probs[action];
    for (int j = 0; j < out; ++j) d[j] = -pa * probs[j];
    d[action] += pa;
  }
}

void Network::grad_log_prob(std::span<const double> input, int action, GradMode mode,
                            NetScratch& s, std::span<double> grad) const {
  if (static_cast<int>(grad.size()) != param_count())
    throw UsageError("grad buffer size must equal param count");
  forward_core(-1, input, s);
  fill_score_delta(action, mode, s);
  std::memset(grad.data(), 0, grad.size() * sizeof(double));
  backprop_into(-1, input, s, grad, 1.0);
}

void Network::grad_log_prob_state(int state, int action, GradMode mode, NetScratch& s,
                                  std::span<double> grad) const {
  if (static_cast<int>(grad.size()) != param_count())
    throw UsageError("grad buffer size must equal param count");
  forward_core(state, {}, s);
  fill_score_delta(action, mode, s);
  std::memset(grad.data(), 0, grad.size() * sizeof(double));
  backprop_into(state, {}, s, grad, 1.0);
}

void Network::last_layer_score_state(int state, int action, GradMode mode, NetScratch& s,
                                     std::span<double> out) const {
  if (static_cast<int>(out.size()) != last_layer_size())
    throw UsageError("last-layer score buffer has wrong size");
  forward_core(state, {}, s);
  fill_score_delta(action, mode, s);
  const auto& lv = layers_.back();
  const double* d = s.delta.back().data();
  double* dw = out.data();
  double* db = dw + static_cast<std::size_t>(lv.in) * lv.out;
  if (layers_.size() == 1) {
    // single weight layer: the "hidden" input is the one-hot state itself
    std::memset(dw, 0, static_cast<std::size_t>(lv.in) * lv.out * sizeof(double));
    for (int j = 0; j < lv.out; ++j) {
      dw[j * lv.in + state] = d[j];
      db[j] = d[j];
    }
    return;
  }
  const double* h = s.act[layers_.size() - 2].data();
  for (int j = 0; j < lv.out; ++j) {
    double* dwj = dw + static_cast<std::size_t>(j) * lv.in;
    for (int i = 0; i < lv.in; ++i) dwj[i] = d[j] * h[i];
    db[j] = d[j];
  }
}

void Network::apply_score_step_state(int state, int action, double coeff, NetScratch& s) {
  forward_core(state, {}, s);
  fill_score_delta(action, GradMode::log_prob, s);
  backprop_into(state, {}, s, params_, coeff);
}

double Network::accumulate_mse_grad_state(int state, std::span<const double> target,
                                          NetScratch& s, std::span<double> grad) const {
  if (spec_.head != Head::softmax) throw UsageError("clone loss requires a softmax head");
  const int out = output_size();
  if (static_cast<int>(target.size()) != out)
    throw UsageError("target distribution has wrong arity");
  forward_core(state, {}, s);
  const double* probs = s.act.back().data();
  double mse = 0.0;
  double dot = 0.0;  // sum_a dMSE/dp_a * p_a, for the softmax Jacobian
  double* d = s.delta.back().data();
  for (int a = 0; a < out; ++a) {
    const double diff = probs[a] - target[a];
    mse += diff * diff;
    d[a] = 2.0 * diff / out;  // dMSE/dp_a, stashed before the Jacobian pass
    dot += d[a] * probs[a];
  }
  mse /= out;
  for (int a = 0; a < out; ++a) d[a] = probs[a] * (d[a] - dot);
  backprop_into(state, {}, s, grad, 1.0);
  return mse;
}

void Network::accumulate_scalar_grad_state(int state, double dout, NetScratch& s,
                                           std::span<double> grad) const {
  if (spec_.head != Head::linear) throw UsageError("scalar gradients require a linear head");
  forward_core(state, {}, s);
  s.delta.back()[0] = dout;
  backprop_into(state, {}, s, grad, 1.0);
}

void Network::apply_gradient(std::span<const double> gradient, double step) {
  if (gradient.size() != params_.size())
    throw UsageError("gradient size does not match parameter count");
  for (std::size_t i = 0; i < params_.size(); ++i) params_[i] += step * gradient[i];
}

bool Network::params_finite() const {
  for (double v : params_)
    if (!std::isfinite(v)) return false;
  return true;
}

std::string Network::serialize(const std::vector<std::string>& manifest) const {
  std::string out;
  for (const auto& line : manifest) out += "# " + line + "\n";
  out += std::string("# head=") + (spec_.head == Head::softmax ? "softmax" : "linear") + "\n";
  out += "# init_seed=" + std::to_string(spec_.init_seed) + "\n";
  for (std::size_t l = 0; l + 1 < spec_.layer_sizes.size(); ++l)
    out += "# layer=" + std::to_string(spec_.layer_sizes[l]) + "x" +
           std::to_string(spec_.layer_sizes[l + 1]) + "\n";
  for (double v : params_) out += format_double(v) + "\n";
  return out;
}

Network Network::deserialize(std::string_view text) {
  NetSpec spec;
  spec.layer_sizes.clear();
  std::vector<double> values;
  bool head_seen = false;
  for (const auto& raw : split(text, '\n')) {
    auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto body = trim(line.substr(1));
      if (body.starts_with("head=")) {
        auto h = body.substr(5);
        if (h == "softmax")
          spec.head = Head::softmax;
        else if (h == "linear")
          spec.head = Head::linear;
        else
          throw IoError("snapshot: unknown head '" + std::string(h) + "'");
        head_seen = true;
      } else if (body.starts_with("init_seed=")) {
        spec.init_seed = parse_u64(body.substr(10));
      } else if (body.starts_with("layer=")) {
        auto dims = split(body.substr(6), 'x');
        if (dims.size() != 2) throw IoError("snapshot: malformed layer line");
        int in = static_cast<int>(parse_int(dims[0]));
        int out = static_cast<int>(parse_int(dims[1]));
        if (spec.layer_sizes.empty())
          spec.layer_sizes.push_back(in);
        else if (spec.layer_sizes.back() != in)
          throw IoError("snapshot: layer sizes do not chain");
        spec.layer_sizes.push_back(out);
      }
      // other comment lines are manifest content; skip
      continue;
    }
    values.push_back(parse_double(line));
  }
  if (!head_seen || spec.layer_sizes.size() < 2)
    throw IoError("snapshot: missing head or layer headers");
  Network net(spec);
  if (static_cast<int>(values.size()) != net.param_count())
    throw IoError("snapshot: expected " + std::to_string(net.param_count()) +
                  " parameters, found " + std::to_string(values.size()));
  std::copy(values.begin(), values.end(), net.params_.begin());
  return net;
}

}  // namespace bbcirl
