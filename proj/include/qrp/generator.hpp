#pragma once

#include "qrp/model.hpp"
#include "qrp/rng.hpp"

namespace qrp {

struct GeneratorSpec {
    int n_jobs = 100;
    double sigma_q = 0.06;
    double type1_share = 0.5;  ///< remaining jobs are type 2
};

/// Base machine table plus n jobs. Nominal times are uniform on
/// center +- half-width per (job, capable machine): type 1 on 2.616 +- 0.3,
/// type 2 on 1.92 +- 0.5. Type labels are shuffled over job ids.
[[nodiscard]] ProblemInstance generate_instance(const GeneratorSpec& spec, RngStream rng);

}  // namespace qrp
