#pragma once

#include "deepedge/sim/rng.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace deepedge::nn {

enum class Activation : std::uint8_t { RectifiedLinear, Linear };

struct DenseLayer {
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    // outputs x inputs, row-major.
    std::vector<double> weights;
    std::vector<double> bias;
    Activation activation = Activation::Linear;

    DenseLayer() = default;
    DenseLayer(std::size_t in, std::size_t out, Activation act)
        : inputs(in), outputs(out), weights(in * out, 0.0), bias(out, 0.0), activation(act) {}

    double& weight(std::size_t row, std::size_t col) { return weights[row * inputs + col]; }
    double weight(std::size_t row, std::size_t col) const { return weights[row * inputs + col]; }
};

/// Parameter-shaped buffer for gradients.
struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> bias;

    void set_zero();
    void scale(double factor);
    double l2_norm() const;
};

/// Dense feed-forward network. Hidden layers use rectified-linear
/// activations; the output layer is linear.
class DenseNetwork {
public:
    DenseNetwork() = default;
    /// Throws ArchitectureMismatch if adjacent widths disagree or the last
    /// layer is not linear.
    explicit DenseNetwork(std::vector<DenseLayer> layers);

    /// widths = {input, hidden..., output}. Weights are uniform in
    /// +-sqrt(6 / (fan_in + fan_out)), biases zero.
    static DenseNetwork initialized(std::span<const std::size_t> widths, sim::RngStream& rng);

    std::size_t input_width() const { return layers_.front().inputs; }
    std::size_t output_width() const { return layers_.back().outputs; }
    std::size_t parameter_count() const;

    const std::vector<DenseLayer>& layers() const { return layers_; }
    std::vector<DenseLayer>& layers() { return layers_; }

    /// Throws DimensionMismatch on a wrong input length.
    std::vector<double> forward(std::span<const double> input) const;

    /// Adds scale * d/dtheta of 0.5 * (Q(input, target_index) - target)^2 into
    /// `grads` and returns Q(input, target_index). Only the chosen output
    /// contributes to the loss.
    double accumulate_gradient(std::span<const double> input, std::size_t target_index,
                               double target_value, Gradients& grads, double scale = 1.0) const;

    /// Fresh gradients of 0.5 * (Q(s, a) - y)^2.
    Gradients backward(std::span<const double> input, std::size_t target_index,
                       double target_value) const;

    Gradients zero_gradients() const;

    bool same_architecture(const DenseNetwork& other) const;
    bool all_finite() const;

    friend bool operator==(const DenseNetwork& a, const DenseNetwork& b);

private:
    std::vector<DenseLayer> layers_;
};

bool operator==(const DenseNetwork& a, const DenseNetwork& b);

struct SgdConfig {
    double learning_rate = 1e-4;
    // Gradients with a larger global L2 norm are rescaled to this norm.
    std::optional<double> clip_norm = 10.0;
};

/// theta <- theta - lr * g, with g clipped to clip_norm when configured.
void sgd_step(DenseNetwork& net, const Gradients& grads, const SgdConfig& config);

/// Throws ArchitectureMismatch unless both networks have the same shape.
void copy_parameters(const DenseNetwork& source, DenseNetwork& destination);

/// Text tensor file:
///
///     deepedge-dense 1
///     layers <count>
///     layer <index> <outputs> <inputs> <relu|linear>
///     <outputs rows of `inputs` weights>
///     <one row of `outputs` biases>
///     ...
///
/// Values are written with 17 significant digits so a save/load cycle is exact.
void save_network(const DenseNetwork& net, std::ostream& out);
DenseNetwork load_network(std::istream& in);
void save_network(const DenseNetwork& net, const std::string& path);
DenseNetwork load_network(const std::string& path);

} // namespace deepedge::nn
