#include "qrp/physics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qrp {

namespace {

double clamped_normal(double mean, double sd, RngStream& rng) {
    if (!(sd > 0)) return std::max(0.0, mean);
    std::normal_distribution<double> d(mean, sd);
    return std::max(0.0, d(rng));
}

}  // namespace

double sample_truncated_normal(double mean, double sd, double lo, double hi, RngStream& rng) {
    if (!(sd > 0)) return std::clamp(mean, lo, hi);
    std::normal_distribution<double> d(mean, sd);
    for (int i = 0; i < 1000; ++i) {
        double x = d(rng);
        if (x >= lo && x <= hi) return x;
    }
    // Interval far in a tail: fall back to uniform inside it.
    return rng.uniform(lo, hi);
}

double sample_initial_quality(const GlobalParams& g, RngStream& rng) {
    return sample_truncated_normal(g.mu_q, g.sigma_q, g.quality_bounds.first, g.quality_bounds.second, rng);
}

double sample_wear_nonconforming(double delta, const MachineParams& m, RngStream& rng) {
    return clamped_normal(delta * m.mu_minus, m.sigma_minus, rng);
}

double sample_wear_qualified(double p, const MachineParams& m, RngStream& rng) {
    return clamped_normal(p * m.mu_plus, m.sigma_plus, rng);
}

double sample_wear_environment(double dt, const MachineParams& m, RngStream& rng) {
    double shape = m.alpha * dt;
    if (!(shape > 0)) return 0.0;
    std::gamma_distribution<double> d(shape, m.beta);
    return d(rng);
}

double sample_quality_noise(const GlobalParams& g, RngStream& rng) {
    if (!(g.noise_sigma > 0)) return 0.0;
    std::normal_distribution<double> d(0.0, g.noise_sigma);
    return d(rng);
}

double Sampler::initial_quality(const GlobalParams& g) {
    if (mode_ == SamplingMode::expected) return std::clamp(g.mu_q, g.quality_bounds.first, g.quality_bounds.second);
    return sample_initial_quality(g, rng_);
}

double Sampler::wear_nonconforming(double delta, const MachineParams& m) {
    if (mode_ == SamplingMode::expected) return std::max(0.0, delta * m.mu_minus);
    return sample_wear_nonconforming(delta, m, rng_);
}

double Sampler::wear_qualified(double p, const MachineParams& m) {
    if (mode_ == SamplingMode::expected) return std::max(0.0, p * m.mu_plus);
    return sample_wear_qualified(p, m, rng_);
}

double Sampler::wear_environment(double dt, const MachineParams& m) {
    if (mode_ == SamplingMode::expected) return dt > 0 ? m.alpha * dt * m.beta : 0.0;
    return sample_wear_environment(dt, m, rng_);
}

double Sampler::quality_noise(const GlobalParams& g) {
    if (mode_ == SamplingMode::expected) return 0.0;
    return sample_quality_noise(g, rng_);
}

WearBreakdown degradation_increment(const JobWearContext& ctx, const MachineParams& m, Sampler& s) {
    WearBreakdown w;
    if (ctx.delta) w.du_minus = s.wear_nonconforming(*ctx.delta, m);
    w.du_plus = s.wear_qualified(ctx.p, m);
    w.dv = s.wear_environment(ctx.dt, m);
    w.total = w.du_minus + w.du_plus + w.dv;
    return w;
}

double actual_processing_time(double nominal, double eta, double w_prev) { return nominal * (1.0 + eta * w_prev); }

double quality_characteristic(double base, const QualityCoefficients& c, double w_prev, double eps) {
    return base + c.a * w_prev + c.b0 * eps + w_prev * c.gamma * eps;
}

double quality_characteristic(const MachineParams& m, double w_prev, double eps, CoefficientSet set) {
    return quality_characteristic(m.upsilon_k0, m.coefficients(set), w_prev, eps);
}

bool classify_quality(double D, const QualitySpec& spec, JobType type) {
    const auto& s = spec.at(type);
    return std::abs(D - s.SL_plus) < s.xi;
}

std::optional<double> ineligible_deviation(double v, const TypeSpec& spec) {
    double d = std::abs(v - spec.SL_plus);
    if (d >= spec.xi) return d;
    return std::nullopt;
}

}  // namespace qrp
