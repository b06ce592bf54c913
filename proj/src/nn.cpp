#include "pnav/nn.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pnav {

std::size_t DenseNet::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weights.size() + l.biases.size();
    return n;
}

DenseNet make_dense_net(const std::vector<int>& dims,
                        const std::vector<Activation>& activations, Rng& rng) {
    if (dims.size() < 2)
        throw std::invalid_argument("make_dense_net: need at least input and output dims");
    if (activations.size() != dims.size() - 1)
        throw std::invalid_argument("make_dense_net: one activation per layer required");
    DenseNet net;
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        Layer l;
        l.in = dims[i];
        l.out = dims[i + 1];
        l.activation = activations[i];
        const double bound = std::sqrt(6.0 / (l.in + l.out));
        l.weights.resize(static_cast<std::size_t>(l.in) * l.out);
        for (auto& w : l.weights) w = rng.uniform(-bound, bound);
        l.biases.assign(l.out, 0.0);
        net.layers.push_back(std::move(l));
    }
    return net;
}

namespace {

void affine(const Layer& l, std::span<const double> x, std::vector<double>& out) {
    out.assign(l.out, 0.0);
    for (int o = 0; o < l.out; ++o) {
        const double* w = &l.weights[static_cast<std::size_t>(o) * l.in];
        double acc = l.biases[o];
        for (int i = 0; i < l.in; ++i) acc += w[i] * x[i];
        out[o] = acc;
    }
}

void activate(Activation act, std::vector<double>& v) {
    if (act == Activation::ReLU)
        for (auto& x : v) x = x > 0.0 ? x : 0.0;
}

} // namespace

std::vector<double> forward(const DenseNet& net, std::span<const double> x) {
    if (static_cast<int>(x.size()) != net.input_dim())
        throw std::invalid_argument("forward: input dimension mismatch");
    std::vector<double> cur(x.begin(), x.end());
    std::vector<double> next;
    for (const auto& l : net.layers) {
        affine(l, cur, next);
        activate(l.activation, next);
        cur.swap(next);
    }
    return cur;
}

ForwardCache forward_cached(const DenseNet& net, std::span<const double> x) {
    if (static_cast<int>(x.size()) != net.input_dim())
        throw std::invalid_argument("forward_cached: input dimension mismatch");
    ForwardCache cache;
    std::vector<double> cur(x.begin(), x.end());
    for (const auto& l : net.layers) {
        cache.inputs.push_back(cur);
        std::vector<double> pre;
        affine(l, cur, pre);
        cache.pre.push_back(pre);
        activate(l.activation, pre);
        cur = std::move(pre);
    }
    cache.output = cur;
    return cache;
}

Gradients make_zero_gradients(const DenseNet& net) {
    Gradients g;
    for (const auto& l : net.layers) {
        g.dweights.emplace_back(l.weights.size(), 0.0);
        g.dbiases.emplace_back(l.biases.size(), 0.0);
    }
    g.dinput.assign(net.input_dim(), 0.0);
    return g;
}

void Gradients::accumulate(const Gradients& other) {
    for (std::size_t l = 0; l < dweights.size(); ++l) {
        for (std::size_t i = 0; i < dweights[l].size(); ++i)
            dweights[l][i] += other.dweights[l][i];
        for (std::size_t i = 0; i < dbiases[l].size(); ++i)
            dbiases[l][i] += other.dbiases[l][i];
    }
    for (std::size_t i = 0; i < dinput.size(); ++i) dinput[i] += other.dinput[i];
}

void Gradients::scale(double s) {
    for (auto& lw : dweights)
        for (auto& v : lw) v *= s;
    for (auto& lb : dbiases)
        for (auto& v : lb) v *= s;
    for (auto& v : dinput) v *= s;
}

Gradients backward(const DenseNet& net, const ForwardCache& cache,
                   std::span<const double> grad_out) {
    if (static_cast<int>(grad_out.size()) != net.output_dim())
        throw std::invalid_argument("backward: output gradient dimension mismatch");
    Gradients g = make_zero_gradients(net);
    std::vector<double> delta(grad_out.begin(), grad_out.end());
    for (int li = static_cast<int>(net.layers.size()) - 1; li >= 0; --li) {
        const Layer& l = net.layers[li];
        // gradient through the activation
        if (l.activation == Activation::ReLU) {
            for (int o = 0; o < l.out; ++o)
                if (cache.pre[li][o] <= 0.0) delta[o] = 0.0;
        }
        const auto& input = cache.inputs[li];
        auto& dw = g.dweights[li];
        auto& db = g.dbiases[li];
        for (int o = 0; o < l.out; ++o) {
            db[o] = delta[o];
            double* dwrow = &dw[static_cast<std::size_t>(o) * l.in];
            for (int i = 0; i < l.in; ++i) dwrow[i] = delta[o] * input[i];
        }
        std::vector<double> prev(l.in, 0.0);
        for (int o = 0; o < l.out; ++o) {
            const double* w = &l.weights[static_cast<std::size_t>(o) * l.in];
            const double d = delta[o];
            for (int i = 0; i < l.in; ++i) prev[i] += w[i] * d;
        }
        delta = std::move(prev);
    }
    g.dinput = std::move(delta);
    return g;
}

AdamState make_adam_state(const DenseNet& net, double learning_rate) {
    AdamState s;
    s.learning_rate = learning_rate;
    for (const auto& l : net.layers) {
        s.m_w.emplace_back(l.weights.size(), 0.0);
        s.v_w.emplace_back(l.weights.size(), 0.0);
        s.m_b.emplace_back(l.biases.size(), 0.0);
        s.v_b.emplace_back(l.biases.size(), 0.0);
    }
    return s;
}

namespace {

void adam_update(std::vector<double>& param, const std::vector<double>& grad,
                 std::vector<double>& m, std::vector<double>& v,
                 const AdamState& s, double c1, double c2) {
    for (std::size_t i = 0; i < param.size(); ++i) {
        m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * grad[i];
        v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * grad[i] * grad[i];
        const double mhat = m[i] / c1;
        const double vhat = v[i] / c2;
        param[i] -= s.learning_rate * mhat / (std::sqrt(vhat) + s.epsilon);
    }
}

} // namespace

void optimizer_step(DenseNet& net, const Gradients& grads, AdamState& opt) {
    if (grads.dweights.size() != net.layers.size())
        throw std::invalid_argument("optimizer_step: gradient shape mismatch");
    opt.step += 1;
    const double c1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
    const double c2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        adam_update(net.layers[l].weights, grads.dweights[l], opt.m_w[l], opt.v_w[l],
                    opt, c1, c2);
        adam_update(net.layers[l].biases, grads.dbiases[l], opt.m_b[l], opt.v_b[l],
                    opt, c1, c2);
    }
}

namespace {

constexpr char kMagic[] = "PNAVNET 1";

void put_doubles(std::ostream& os, const std::vector<double>& v) {
    for (double d : v) {
        std::uint64_t bits;
        std::memcpy(&bits, &d, sizeof(bits));
        unsigned char buf[8];
        for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
        os.write(reinterpret_cast<const char*>(buf), 8);
    }
}

void get_doubles(std::istream& is, std::vector<double>& v) {
    for (double& d : v) {
        unsigned char buf[8];
        is.read(reinterpret_cast<char*>(buf), 8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
        std::memcpy(&d, &bits, sizeof(d));
    }
}

const char* act_name(Activation a) {
    return a == Activation::ReLU ? "relu" : "identity";
}

Activation act_from_name(const std::string& s) {
    if (s == "relu") return Activation::ReLU;
    if (s == "identity") return Activation::Identity;
    throw std::runtime_error("checkpoint: unknown activation '" + s + "'");
}

} // namespace

void save_checkpoint(const DenseNet& net, const AdamState& opt,
                     const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    os << kMagic << "\n";
    os << "layers " << net.layers.size() << "\n";
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        const auto& l = net.layers[i];
        os << "layer " << i << " in " << l.in << " out " << l.out << " act "
           << act_name(l.activation) << "\n";
    }
    std::ostringstream hyper;
    hyper.precision(17);
    hyper << "optimizer adam lr " << opt.learning_rate << " beta1 " << opt.beta1
          << " beta2 " << opt.beta2 << " eps " << opt.epsilon << "\n";
    os << hyper.str();
    os << "data\n";
    for (const auto& l : net.layers) {
        put_doubles(os, l.weights);
        put_doubles(os, l.biases);
    }
    if (!os) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
    std::string line;
    std::getline(is, line);
    if (line != kMagic) throw std::runtime_error("bad checkpoint magic in " + path);

    Checkpoint ck;
    std::size_t n_layers = 0;
    double lr = 1e-3, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "layers") {
            ls >> n_layers;
        } else if (tag == "layer") {
            std::size_t idx;
            std::string kw_in, kw_out, kw_act, act;
            Layer l;
            ls >> idx >> kw_in >> l.in >> kw_out >> l.out >> kw_act >> act;
            if (!ls || kw_in != "in" || kw_out != "out" || kw_act != "act")
                throw std::runtime_error("malformed layer line in " + path);
            l.activation = act_from_name(act);
            l.weights.resize(static_cast<std::size_t>(l.in) * l.out);
            l.biases.resize(l.out);
            ck.net.layers.push_back(std::move(l));
        } else if (tag == "optimizer") {
            std::string kind, kw;
            ls >> kind >> kw >> lr >> kw >> beta1 >> kw >> beta2 >> kw >> eps;
        } else if (tag == "data") {
            break;
        } else {
            throw std::runtime_error("unexpected checkpoint line: " + line);
        }
    }
    if (ck.net.layers.size() != n_layers)
        throw std::runtime_error("checkpoint layer count mismatch in " + path);
    for (auto& l : ck.net.layers) {
        get_doubles(is, l.weights);
        get_doubles(is, l.biases);
    }
    if (!is) throw std::runtime_error("checkpoint data truncated: " + path);
    ck.opt = make_adam_state(ck.net, lr);
    ck.opt.beta1 = beta1;
    ck.opt.beta2 = beta2;
    ck.opt.epsilon = eps;
    return ck;
}

} // namespace pnav
