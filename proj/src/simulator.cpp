#include "qftarith/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "qftarith/qudit_model.hpp"

namespace qftarith {

namespace {

constexpr std::uint64_t kParallelThreshold = std::uint64_t{1} << 14;

template <class F>
void parallel_ranges(std::uint64_t count, unsigned threads, F&& body) {
    if (threads <= 1 || count < kParallelThreshold) {
        body(std::uint64_t{0}, count);
        return;
    }
    std::vector<std::jthread> workers;
    const std::uint64_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t begin = t * chunk;
        const std::uint64_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([&body, begin, end] { body(begin, end); });
    }
}

struct FixedDigit {
    std::uint64_t stride;
    std::uint64_t dim;
    std::uint64_t value;
};

// Visits every basis index whose digits on `fixed` match; the free digits
// are enumerated by inserting the fixed ones into a compact counter.
template <class F>
void for_each_fixed(const StateVector& state, std::vector<FixedDigit> fixed, unsigned threads, F&& fn) {
    std::sort(fixed.begin(), fixed.end(), [](const auto& a, const auto& b) { return a.stride < b.stride; });
    std::uint64_t free = state.size();
    for (const auto& f : fixed) free /= f.dim;
    parallel_ranges(free, threads, [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t k = begin; k < end; ++k) {
            std::uint64_t idx = k;
            for (const auto& f : fixed)
                idx = (idx / f.stride) * (f.stride * f.dim) + f.value * f.stride + (idx % f.stride);
            fn(idx);
        }
    });
}

void check_site(const StateVector& state, int site) {
    if (site < 0 || site >= state.num_sites())
        throw std::out_of_range("site " + std::to_string(site) + " outside state of " +
                                std::to_string(state.num_sites()) + " sites");
}

void apply_phase_rot(StateVector& state, const Gate& gate, const SimOptions& opts) {
    if (state.dim(gate.target) != 2) throw std::invalid_argument("phase rotation on a non-qubit site");
    std::vector<FixedDigit> fixed{{state.stride(gate.target), 2, 1}};
    for (int c : gate.controls) {
        check_site(state, c);
        if (state.dim(c) != 2) throw std::invalid_argument("phase rotation control on a non-qubit site");
        fixed.push_back({state.stride(c), 2, 1});
    }
    const Complex factor = phase_factor(gate.l, gate.sign);
    auto& amps = state.amplitudes();
    for_each_fixed(state, std::move(fixed), opts.threads,
                   [&](std::uint64_t idx) { amps[static_cast<Eigen::Index>(idx)] *= factor; });
}

void apply_swap(StateVector& state, const Gate& gate, const SimOptions& opts) {
    const int a = gate.target;
    const int b = gate.controls.at(0);
    check_site(state, b);
    if (state.dim(a) != state.dim(b)) throw std::invalid_argument("swap between sites of different dimension");
    const auto d = static_cast<std::uint64_t>(state.dim(a));
    const auto sa = state.stride(a);
    const auto sb = state.stride(b);
    auto& amps = state.amplitudes();
    for (std::uint64_t u = 0; u < d; ++u) {
        for (std::uint64_t v = u + 1; v < d; ++v) {
            for_each_fixed(state, {{sa, d, u}, {sb, d, v}}, opts.threads, [&](std::uint64_t idx) {
                const std::uint64_t other = idx + (v - u) * sa - (v - u) * sb;
                std::swap(amps[static_cast<Eigen::Index>(idx)], amps[static_cast<Eigen::Index>(other)]);
            });
        }
    }
}

}  // namespace

StateVector::StateVector(RegisterLayout layout) : layout_(std::move(layout)) {
    const int n = layout_.num_sites();
    dims_.resize(static_cast<std::size_t>(n));
    strides_.resize(static_cast<std::size_t>(n));
    std::uint64_t total = 1;
    for (int s = n - 1; s >= 0; --s) {
        const int d = layout_.site_dim(s);
        dims_[static_cast<std::size_t>(s)] = d;
        strides_[static_cast<std::size_t>(s)] = total;
        total *= static_cast<std::uint64_t>(d);
        if (total > kMaxAmplitudes)
            throw std::length_error("state would need more than 2^24 amplitudes");
    }
    amps_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(total));
    amps_[0] = 1.0;
}

std::uint64_t StateVector::register_value(std::uint64_t index, const Register& reg) const {
    std::uint64_t value = 0;
    for (int i = 0; i < reg.sites; ++i)
        value = value * static_cast<std::uint64_t>(reg.dim) + static_cast<std::uint64_t>(digit(index, reg.site(i)));
    return value;
}

std::uint64_t StateVector::basis_index(const std::map<std::string, std::uint64_t>& values) const {
    std::uint64_t index = 0;
    for (const auto& [name, value] : values) {
        const auto& reg = layout_.at(name);
        if (value >= reg.capacity())
            throw std::out_of_range("value " + std::to_string(value) + " does not fit register '" + name + "'");
        std::uint64_t rest = value;
        for (int i = reg.sites - 1; i >= 0; --i) {
            index += (rest % static_cast<std::uint64_t>(reg.dim)) * stride(reg.site(i));
            rest /= static_cast<std::uint64_t>(reg.dim);
        }
    }
    return index;
}

StateVector prepare_basis(const RegisterLayout& layout, const std::map<std::string, std::uint64_t>& values) {
    StateVector state(layout);
    const auto idx = state.basis_index(values);
    state.amplitudes()[0] = 0.0;
    state.amplitudes()[static_cast<Eigen::Index>(idx)] = 1.0;
    return state;
}

StateVector random_state(const RegisterLayout& layout, std::uint64_t seed) {
    StateVector state(layout);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (auto& a : state.amplitudes()) a = Complex(gauss(rng), gauss(rng));
    state.amplitudes().normalize();
    return state;
}

Complex phase_factor(int l, int sign) {
    if (l < 1) throw std::invalid_argument("phase rotation needs l >= 1");
    if (l == 1) return {-1.0, 0.0};
    if (l == 2) return {0.0, static_cast<double>(sign)};
    const double angle = 2.0 * std::numbers::pi * std::ldexp(1.0, -l);
    return std::polar(1.0, sign * angle);
}

void apply_site_unitary(StateVector& state, int site, const Eigen::MatrixXcd& matrix, const SimOptions& opts) {
    check_site(state, site);
    const int d = state.dim(site);
    if (matrix.rows() != d || matrix.cols() != d)
        throw std::invalid_argument("site unitary dimension mismatch");
    const auto stride = state.stride(site);
    auto& amps = state.amplitudes();
    if (d == 2) {
        const Complex m00 = matrix(0, 0), m01 = matrix(0, 1), m10 = matrix(1, 0), m11 = matrix(1, 1);
        for_each_fixed(state, {{stride, 2, 0}}, opts.threads, [&](std::uint64_t idx) {
            const auto i0 = static_cast<Eigen::Index>(idx);
            const auto i1 = static_cast<Eigen::Index>(idx + stride);
            const Complex a0 = amps[i0], a1 = amps[i1];
            amps[i0] = m00 * a0 + m01 * a1;
            amps[i1] = m10 * a0 + m11 * a1;
        });
        return;
    }
    for_each_fixed(state, {{stride, static_cast<std::uint64_t>(d), 0}}, opts.threads, [&](std::uint64_t idx) {
        Eigen::VectorXcd local(d);
        for (int v = 0; v < d; ++v) local[v] = amps[static_cast<Eigen::Index>(idx + v * stride)];
        Eigen::VectorXcd out = matrix * local;
        for (int v = 0; v < d; ++v) amps[static_cast<Eigen::Index>(idx + v * stride)] = out[v];
    });
}

void apply_diagonal(StateVector& state, std::span<const int> sites,
                    const std::function<Complex(std::span<const int>)>& phase, const SimOptions& opts) {
    for (int s : sites) check_site(state, s);
    auto& amps = state.amplitudes();
    parallel_ranges(state.size(), opts.threads, [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<int> digits(sites.size());
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            for (std::size_t i = 0; i < sites.size(); ++i) digits[i] = state.digit(idx, sites[i]);
            amps[static_cast<Eigen::Index>(idx)] *= phase(digits);
        }
    });
}

void apply(StateVector& state, const Gate& gate, const SimOptions& opts) {
    check_site(state, gate.target);
    switch (gate.kind) {
    case GateKind::Fourier:
        apply_site_unitary(state, gate.target, qft_matrix<double>(state.dim(gate.target)), opts);
        break;
    case GateKind::InverseFourier:
        apply_site_unitary(state, gate.target, iqft_matrix<double>(state.dim(gate.target)), opts);
        break;
    case GateKind::PhaseRot:
        apply_phase_rot(state, gate, opts);
        break;
    case GateKind::Swap:
        apply_swap(state, gate, opts);
        break;
    }
}

void run(StateVector& state, const CircuitIR& circuit, const SimOptions& opts) {
    if (!(circuit.layout() == state.layout())) throw std::invalid_argument("circuit and state layouts differ");
    for (const auto& g : circuit.gates()) apply(state, g, opts);
}

OutcomeDistribution readout(const StateVector& state, const Register& reg) {
    OutcomeDistribution dist;
    dist.register_name = reg.name;
    dist.probabilities.assign(reg.capacity(), 0.0);
    const auto& amps = state.amplitudes();
    for (std::uint64_t idx = 0; idx < state.size(); ++idx) {
        const double p = std::norm(amps[static_cast<Eigen::Index>(idx)]);
        if (p != 0.0) dist.probabilities[state.register_value(idx, reg)] += p;
    }
    return dist;
}

OutcomeDistribution readout(const StateVector& state, std::string_view register_name) {
    return readout(state, state.layout().at(register_name));
}

}  // namespace qftarith
