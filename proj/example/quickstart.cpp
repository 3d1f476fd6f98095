// Minimal tour: build a Lipschitz model, compute radii, run the iteration on
// a benchmark system, and compare observed errors against the a-priori bounds.

#include <cstdio>

#include "ntraub/ntraub.hpp"

int main() {
    using namespace ntraub;

    // Constant averages kappa = e/2, kappa0 = (e-1)/2 of the 3-D benchmark.
    const BenchmarkCase bench = make_motivational();

    const RadiusResult conv = radius_t31(bench.model);
    const RadiusResult uniq = radius_uniqueness_t41(bench.model);
    std::printf("convergence radius  %.6f  (lhs %.6f, %s)\n", conv.delta,
                conv.condition_lhs_at_delta, to_string(conv.method));
    std::printf("uniqueness radius   %.6f\n", uniq.delta);

    const IterationTrace trace = solve(bench.problem, {0.2, 0.2, 0.2});
    std::printf("solve: %s after %d outer iterations, final residual %.3e\n",
                to_string(trace.status), trace.outer_iterations,
                trace.records.back().res_norm);

    // True seed distances from the first step drive the error-bound
    // sequences; the geometric (q1 q2 q3)^t bound is the telling one here.
    const TraceRecord& first = trace.records.front();
    const SeedDistances seeds{*first.err_x, *first.err_y, *first.err_z};
    const auto c = constants_C(bench.model, seeds);
    const auto q = constants_q_t51(bench.model, seeds);
    std::printf("C1=%.4f C2=%.4f C3=%.4f   q1=%.4f q2=%.4f q3=%.4f\n", c[0], c[1],
                c[2], q[0], q[1], q[2]);
    const BoundSequence seq = error_seq_linear(q[0] * q[1] * q[2], seeds.rho_x0, 3);
    const auto observed = trace.outer_errors();
    for (std::size_t t = 0; t < seq.values.size(); ++t) {
        std::printf("  ||x_%zu - x*|| <= %.3e", t + 1, seq.values[t]);
        if (t + 1 < observed.size()) std::printf("   (observed %.3e)", observed[t + 1]);
        std::printf("\n");
    }
    return 0;
}
