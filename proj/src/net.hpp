#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace bbcirl {

enum class Head { softmax, linear };

// Score flavor: gradient of ln pi(a|s) (the REINFORCE score) or of pi(a|s).
enum class GradMode { log_prob, prob };

struct NetSpec {
  std::vector<int> layer_sizes;  // input, hidden..., output
  Head head = Head::softmax;
  std::uint64_t init_seed = 0;

  void validate() const;
  int param_count() const;
  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  bool operator==(const NetSpec&) const = default;
};

// Reusable forward/backward buffers; sized lazily per network shape.
struct NetScratch {
  std::vector<std::vector<double>> act;    // post-activation per weight layer
  std::vector<std::vector<double>> delta;  // backward buffers, same shapes
};

// Plain fully connected net: ReLU on hidden layers, softmax or scalar linear
// head. Parameters live in one flat vector, per layer weights row-major by
// output unit followed by biases. Inputs are either dense vectors or a state
// index standing for the one-hot encoding; the index paths skip the zero
// columns and are the ones training loops use.
class Network {
 public:
  explicit Network(NetSpec spec);

  const NetSpec& spec() const { return spec_; }
  int input_size() const { return spec_.input_size(); }
  int output_size() const { return spec_.output_size(); }
  int num_weight_layers() const { return static_cast<int>(spec_.layer_sizes.size()) - 1; }
  int param_count() const { return static_cast<int>(params_.size()); }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  // Final-layer weights+biases, (last_hidden+1)*output values.
  std::span<double> last_layer();
  std::span<const double> last_layer() const;
  int last_layer_size() const;

  std::span<const double> forward(std::span<const double> input, NetScratch& s) const;
  std::span<const double> forward_state(int state, NetScratch& s) const;

  std::vector<double> policy_forward(std::span<const double> input) const;
  std::vector<double> policy_forward_state(int state) const;
  double scalar_forward(std::span<const double> input) const;
  double scalar_forward_state(int state) const;

  // Dense gradient of ln pi(action|input) (or pi, per mode) over all params.
  void grad_log_prob(std::span<const double> input, int action, GradMode mode,
                     NetScratch& s, std::span<double> grad) const;
  void grad_log_prob_state(int state, int action, GradMode mode, NetScratch& s,
                           std::span<double> grad) const;

  // Final-layer block of the same gradient (uses a fresh forward pass).
  void last_layer_score_state(int state, int action, GradMode mode, NetScratch& s,
                              std::span<double> out) const;

  // params += coeff * grad ln pi(action|state); fused, allocation free.
  void apply_score_step_state(int state, int action, double coeff, NetScratch& s);

  // Clone loss: accumulates the gradient of mean_a (pi_a(state)-target_a)^2
  // into grad and returns that per-state MSE.
  double accumulate_mse_grad_state(int state, std::span<const double> target,
                                   NetScratch& s, std::span<double> grad) const;

  // Scalar-head nets: grad += dout * d(output)/d(params).
  void accumulate_scalar_grad_state(int state, double dout, NetScratch& s,
                                    std::span<double> grad) const;

  // params += step * gradient
  void apply_gradient(std::span<const double> gradient, double step);

  bool params_finite() const;

  // Text snapshot: `# layer=<in>x<out>` headers then one parameter per line.
  // Exact decimal round-trip; extra leading `# key=value` lines pass through
  // serialize (manifest) and are ignored by deserialize.
  std::string serialize(const std::vector<std::string>& manifest = {}) const;
  static Network deserialize(std::string_view text);

  bool operator==(const Network& other) const {
    return spec_ == other.spec_ && params_ == other.params_;
  }

 private:
  struct LayerView {
    int in, out;
    int offset;  // into params_
  };
  void ensure_scratch(NetScratch& s) const;
  // state >= 0 means one-hot input, otherwise dense `input` is used.
  void forward_core(int state, std::span<const double> input, NetScratch& s) const;
  // delta.back() holds d(loss)/d(pre-head output); accumulates scale * grad
  // into dest (param layout). dest may alias params_.
  void backprop_into(int state, std::span<const double> input, NetScratch& s,
                     std::span<double> dest, double scale) const;
  void fill_score_delta(int action, GradMode mode, NetScratch& s) const;

  NetSpec spec_;
  std::vector<LayerView> layers_;
  std::vector<double> params_;
};

}  // namespace bbcirl
