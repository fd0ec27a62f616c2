#pragma once

#include "qrp/model.hpp"
#include "qrp/rng.hpp"

#include <optional>

namespace qrp {

struct WearBreakdown {
    double du_minus = 0.0;
    double du_plus = 0.0;
    double dv = 0.0;
    double total = 0.0;
};

// Raw samplers. Gaussian wear is clamped at zero.

double sample_initial_quality(const GlobalParams& g, RngStream& rng);
double sample_wear_nonconforming(double delta, const MachineParams& m, RngStream& rng);
double sample_wear_qualified(double p, const MachineParams& m, RngStream& rng);
double sample_wear_environment(double dt, const MachineParams& m, RngStream& rng);
double sample_quality_noise(const GlobalParams& g, RngStream& rng);

/// Draws from a normal law truncated to [lo, hi].
double sample_truncated_normal(double mean, double sd, double lo, double hi, RngStream& rng);

/// `expected` replaces every draw by its zero-variance limit: clamped Gaussian
/// means, Gamma mean alpha*dt*beta, mu_q for input quality and zero noise.
enum class SamplingMode { stochastic, expected };

/// A random stream paired with a sampling mode.
class Sampler {
public:
    explicit Sampler(RngStream rng, SamplingMode mode = SamplingMode::stochastic) : rng_(rng), mode_(mode) {}

    double initial_quality(const GlobalParams& g);
    double wear_nonconforming(double delta, const MachineParams& m);
    double wear_qualified(double p, const MachineParams& m);
    double wear_environment(double dt, const MachineParams& m);
    double quality_noise(const GlobalParams& g);

    [[nodiscard]] SamplingMode mode() const { return mode_; }
    [[nodiscard]] RngStream& rng() { return rng_; }
    [[nodiscard]] Sampler substream(std::uint64_t tag, std::uint64_t index = 0) const {
        return Sampler(rng_.substream(tag, index), mode_);
    }

private:
    RngStream rng_;
    SamplingMode mode_;
};

/// Input to one job's degradation increment. `delta` is set only when the
/// input quality is ineligible, which is when the non-conforming term applies.
struct JobWearContext {
    double p = 0.0;
    std::optional<double> delta;
    double dt = 0.0;
};

WearBreakdown degradation_increment(const JobWearContext& ctx, const MachineParams& m, Sampler& s);

/// p = O (1 + eta W_prev)
[[nodiscard]] double actual_processing_time(double nominal, double eta, double w_prev);

/// D = base + a W + b0 eps + W Gamma eps
[[nodiscard]] double quality_characteristic(double base, const QualityCoefficients& c, double w_prev, double eps);
/// Machine-side form using upsilon_k^0 and the instance's coefficient set.
[[nodiscard]] double quality_characteristic(const MachineParams& m, double w_prev, double eps,
                                            CoefficientSet set = CoefficientSet::alternate);

/// q = |D - SL| < xi
[[nodiscard]] bool classify_quality(double D, const QualitySpec& spec, JobType type);

/// |v - SL| when the input quality v is ineligible (>= xi), otherwise empty.
[[nodiscard]] std::optional<double> ineligible_deviation(double v, const TypeSpec& spec);

}  // namespace qrp
