#include "qrp/generator.hpp"

#include <cmath>
#include <stdexcept>

namespace qrp {

ProblemInstance generate_instance(const GeneratorSpec& spec, RngStream rng) {
    if (spec.n_jobs < 0 || !(spec.sigma_q > 0.0) || spec.type1_share < 0.0 || spec.type1_share > 1.0)
        throw std::invalid_argument("generator spec out of range");
    ProblemInstance inst = base_machine_table(spec.sigma_q);
    const int n1 = static_cast<int>(std::lround(spec.n_jobs * spec.type1_share));
    std::vector<JobType> types(static_cast<std::size_t>(spec.n_jobs), 2);
    std::fill(types.begin(), types.begin() + n1, 1);
    for (std::size_t i = types.size(); i > 1; --i) std::swap(types[i - 1], types[rng.below(i)]);
    for (int i = 0; i < spec.n_jobs; ++i) {
        Job j;
        j.id = i;
        j.job_type = types[static_cast<std::size_t>(i)];
        const double center = j.job_type == 1 ? 2.616 : 1.92;
        const double half = j.job_type == 1 ? 0.3 : 0.5;
        for (const auto& m : inst.machines)
            if (m.can_process(j.job_type)) j.nominal_times[m.id] = rng.uniform(center - half, center + half);
        inst.jobs.push_back(std::move(j));
    }
    return inst;
}

}  // namespace qrp
