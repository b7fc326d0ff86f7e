#include "deepedge/nn/dense_network.hpp"

#include "deepedge/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>

namespace deepedge::nn {

void Gradients::set_zero() {
    for (auto& w : weights) {
        std::fill(w.begin(), w.end(), 0.0);
    }
    for (auto& b : bias) {
        std::fill(b.begin(), b.end(), 0.0);
    }
}

void Gradients::scale(double factor) {
    for (auto& w : weights) {
        for (double& x : w) {
            x *= factor;
        }
    }
    for (auto& b : bias) {
        for (double& x : b) {
            x *= factor;
        }
    }
}

double Gradients::l2_norm() const {
    double sum = 0.0;
    for (const auto& w : weights) {
        for (double x : w) {
            sum += x * x;
        }
    }
    for (const auto& b : bias) {
        for (double x : b) {
            sum += x * x;
        }
    }
    return std::sqrt(sum);
}

DenseNetwork::DenseNetwork(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) {
        throw ArchitectureMismatch("network has no layers");
    }
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const auto& layer = layers_[i];
        if (layer.inputs == 0 || layer.outputs == 0 ||
            layer.weights.size() != layer.inputs * layer.outputs ||
            layer.bias.size() != layer.outputs) {
            throw ArchitectureMismatch("layer " + std::to_string(i) + " has inconsistent shape");
        }
        if (i > 0 && layers_[i - 1].outputs != layer.inputs) {
            throw ArchitectureMismatch("layer " + std::to_string(i) +
                                       " input width does not match the previous output");
        }
    }
    if (layers_.back().activation != Activation::Linear) {
        throw ArchitectureMismatch("output layer must be linear");
    }
}

DenseNetwork DenseNetwork::initialized(std::span<const std::size_t> widths, sim::RngStream& rng) {
    if (widths.size() < 2) {
        throw ArchitectureMismatch("need at least input and output widths");
    }
    std::vector<DenseLayer> layers;
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
        const bool last = i + 2 == widths.size();
        DenseLayer layer(widths[i], widths[i + 1],
                         last ? Activation::Linear : Activation::RectifiedLinear);
        const double limit = std::sqrt(6.0 / static_cast<double>(widths[i] + widths[i + 1]));
        for (double& w : layer.weights) {
            w = (2.0 * rng.uniform01() - 1.0) * limit;
        }
        layers.push_back(std::move(layer));
    }
    return DenseNetwork(std::move(layers));
}

std::size_t DenseNetwork::parameter_count() const {
    std::size_t total = 0;
    for (const auto& layer : layers_) {
        total += layer.weights.size() + layer.bias.size();
    }
    return total;
}

namespace {

void affine(const DenseLayer& layer, std::span<const double> in, std::vector<double>& out) {
    out.resize(layer.outputs);
    for (std::size_t r = 0; r < layer.outputs; ++r) {
        const double* row = layer.weights.data() + r * layer.inputs;
        double sum = layer.bias[r];
        for (std::size_t c = 0; c < layer.inputs; ++c) {
            sum += row[c] * in[c];
        }
        out[r] = sum;
    }
}

void activate(Activation activation, std::vector<double>& values) {
    if (activation == Activation::RectifiedLinear) {
        for (double& v : values) {
            v = v > 0.0 ? v : 0.0;
        }
    }
}

} // namespace

std::vector<double> DenseNetwork::forward(std::span<const double> input) const {
    if (input.size() != input_width()) {
        throw DimensionMismatch("expected " + std::to_string(input_width()) + " inputs, got " +
                                std::to_string(input.size()));
    }
    std::vector<double> current(input.begin(), input.end());
    std::vector<double> next;
    for (const auto& layer : layers_) {
        affine(layer, current, next);
        activate(layer.activation, next);
        current.swap(next);
    }
    return current;
}

Gradients DenseNetwork::zero_gradients() const {
    Gradients grads;
    for (const auto& layer : layers_) {
        grads.weights.emplace_back(layer.weights.size(), 0.0);
        grads.bias.emplace_back(layer.bias.size(), 0.0);
    }
    return grads;
}

double DenseNetwork::accumulate_gradient(std::span<const double> input, std::size_t target_index,
                                         double target_value, Gradients& grads,
                                         double scale) const {
    if (input.size() != input_width()) {
        throw DimensionMismatch("expected " + std::to_string(input_width()) + " inputs, got " +
                                std::to_string(input.size()));
    }
    if (target_index >= output_width()) {
        throw DimensionMismatch("target index " + std::to_string(target_index) +
                                " outside the output layer");
    }
    if (grads.weights.size() != layers_.size()) {
        throw DimensionMismatch("gradient buffer does not match the network");
    }

    // activations[0] is the input; activations[i + 1] the output of layer i.
    std::vector<std::vector<double>> activations(layers_.size() + 1);
    activations[0].assign(input.begin(), input.end());
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        affine(layers_[i], activations[i], activations[i + 1]);
        activate(layers_[i].activation, activations[i + 1]);
    }
    const double prediction = activations.back()[target_index];

    std::vector<double> delta(output_width(), 0.0);
    delta[target_index] = (prediction - target_value) * scale;
    std::vector<double> previous;
    for (std::size_t i = layers_.size(); i-- > 0;) {
        const auto& layer = layers_[i];
        const auto& in = activations[i];
        auto& gw = grads.weights[i];
        auto& gb = grads.bias[i];
        for (std::size_t r = 0; r < layer.outputs; ++r) {
            const double d = delta[r];
            if (d == 0.0) {
                continue;
            }
            gb[r] += d;
            double* grow = gw.data() + r * layer.inputs;
            for (std::size_t c = 0; c < layer.inputs; ++c) {
                grow[c] += d * in[c];
            }
        }
        if (i == 0) {
            break;
        }
        previous.assign(layer.inputs, 0.0);
        for (std::size_t r = 0; r < layer.outputs; ++r) {
            const double d = delta[r];
            if (d == 0.0) {
                continue;
            }
            const double* row = layer.weights.data() + r * layer.inputs;
            for (std::size_t c = 0; c < layer.inputs; ++c) {
                previous[c] += row[c] * d;
            }
        }
        // The stored activation is positive exactly where the unit was active.
        if (layers_[i - 1].activation == Activation::RectifiedLinear) {
            for (std::size_t c = 0; c < layer.inputs; ++c) {
                if (!(in[c] > 0.0)) {
                    previous[c] = 0.0;
                }
            }
        }
        delta.swap(previous);
    }
    return prediction;
}

Gradients DenseNetwork::backward(std::span<const double> input, std::size_t target_index,
                                 double target_value) const {
    Gradients grads = zero_gradients();
    accumulate_gradient(input, target_index, target_value, grads);
    return grads;
}

bool DenseNetwork::same_architecture(const DenseNetwork& other) const {
    if (layers_.size() != other.layers_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const auto& a = layers_[i];
        const auto& b = other.layers_[i];
        if (a.inputs != b.inputs || a.outputs != b.outputs || a.activation != b.activation) {
            return false;
        }
    }
    return true;
}

bool DenseNetwork::all_finite() const {
    for (const auto& layer : layers_) {
        for (double w : layer.weights) {
            if (!std::isfinite(w)) {
                return false;
            }
        }
        for (double b : layer.bias) {
            if (!std::isfinite(b)) {
                return false;
            }
        }
    }
    return true;
}

bool operator==(const DenseNetwork& a, const DenseNetwork& b) {
    if (!a.same_architecture(b)) {
        return false;
    }
    for (std::size_t i = 0; i < a.layers_.size(); ++i) {
        if (a.layers_[i].weights != b.layers_[i].weights || a.layers_[i].bias != b.layers_[i].bias) {
            return false;
        }
    }
    return true;
}

void sgd_step(DenseNetwork& net, const Gradients& grads, const SgdConfig& config) {
    auto& layers = net.layers();
    if (grads.weights.size() != layers.size() || grads.bias.size() != layers.size()) {
        throw DimensionMismatch("gradient buffer does not match the network");
    }
    double step = config.learning_rate;
    if (config.clip_norm) {
        const double norm = grads.l2_norm();
        if (norm > *config.clip_norm) {
            step *= *config.clip_norm / norm;
        }
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
        auto& layer = layers[i];
        if (grads.weights[i].size() != layer.weights.size() ||
            grads.bias[i].size() != layer.bias.size()) {
            throw DimensionMismatch("gradient shape mismatch at layer " + std::to_string(i));
        }
        for (std::size_t k = 0; k < layer.weights.size(); ++k) {
            layer.weights[k] -= step * grads.weights[i][k];
        }
        for (std::size_t k = 0; k < layer.bias.size(); ++k) {
            layer.bias[k] -= step * grads.bias[i][k];
        }
    }
}

void copy_parameters(const DenseNetwork& source, DenseNetwork& destination) {
    if (!source.same_architecture(destination)) {
        throw ArchitectureMismatch("cannot copy parameters between different architectures");
    }
    auto& dst = destination.layers();
    const auto& src = source.layers();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i].weights = src[i].weights;
        dst[i].bias = src[i].bias;
    }
}

namespace {

constexpr const char* kMagic = "deepedge-dense";
constexpr int kFormatVersion = 1;

void expect_token(std::istream& in, const std::string& expected) {
    std::string token;
    if (!(in >> token) || token != expected) {
        throw FormatError("tensor file: expected '" + expected + "', found '" + token + "'");
    }
}

template <typename T>
T read_value(std::istream& in, const char* what) {
    T value{};
    if (!(in >> value)) {
        throw FormatError(std::string("tensor file: could not read ") + what);
    }
    return value;
}

} // namespace

void save_network(const DenseNetwork& net, std::ostream& out) {
    out << kMagic << ' ' << kFormatVersion << '\n';
    out << "layers " << net.layers().size() << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < net.layers().size(); ++i) {
        const auto& layer = net.layers()[i];
        out << "layer " << i << ' ' << layer.outputs << ' ' << layer.inputs << ' '
            << (layer.activation == Activation::RectifiedLinear ? "relu" : "linear") << '\n';
        for (std::size_t r = 0; r < layer.outputs; ++r) {
            for (std::size_t c = 0; c < layer.inputs; ++c) {
                out << (c == 0 ? "" : " ") << layer.weight(r, c);
            }
            out << '\n';
        }
        for (std::size_t r = 0; r < layer.outputs; ++r) {
            out << (r == 0 ? "" : " ") << layer.bias[r];
        }
        out << '\n';
    }
}

DenseNetwork load_network(std::istream& in) {
    expect_token(in, kMagic);
    if (read_value<int>(in, "version") != kFormatVersion) {
        throw FormatError("tensor file: unsupported version");
    }
    expect_token(in, "layers");
    const auto count = read_value<std::size_t>(in, "layer count");
    std::vector<DenseLayer> layers;
    for (std::size_t i = 0; i < count; ++i) {
        expect_token(in, "layer");
        if (read_value<std::size_t>(in, "layer index") != i) {
            throw FormatError("tensor file: layers out of order");
        }
        const auto outputs = read_value<std::size_t>(in, "output width");
        const auto inputs = read_value<std::size_t>(in, "input width");
        const auto act = read_value<std::string>(in, "activation");
        if (act != "relu" && act != "linear") {
            throw FormatError("tensor file: unknown activation '" + act + "'");
        }
        DenseLayer layer(inputs, outputs,
                         act == "relu" ? Activation::RectifiedLinear : Activation::Linear);
        for (double& w : layer.weights) {
            w = read_value<double>(in, "weight");
        }
        for (double& b : layer.bias) {
            b = read_value<double>(in, "bias");
        }
        layers.push_back(std::move(layer));
    }
    return DenseNetwork(std::move(layers));
}

void save_network(const DenseNetwork& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw FormatError("cannot write " + path);
    }
    save_network(net, out);
}

DenseNetwork load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot read " + path);
    }
    return load_network(in);
}

} // namespace deepedge::nn
