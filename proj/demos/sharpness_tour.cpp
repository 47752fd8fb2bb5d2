// Walks one exponent pair end to end: the sharp constants, the ratio the
// matched Gaussian family attains, and how a generic input stays below it.

#include <cstdio>

#include "heatsharp/constants.hpp"
#include "heatsharp/experiments.hpp"
#include "heatsharp/function_spec.hpp"

int main() {
    using namespace heatsharp;

    const Exponent p = Exponent::parse("4/3");
    const Exponent q = Exponent::parse("4/3");
    const SharpConstants sc = sharp_constants(p, q);

    std::printf("pair p=%s q=%s gives r=%s\n", sc.triple.p.str().c_str(),
                sc.triple.q.str().c_str(), sc.triple.r.str().c_str());
    std::printf("sharp heat constant K = %.12f, decay t^-%.3f\n", sc.heat_constant, sc.decay);
    std::printf("extremal Gaussian power beta* = %.6f (%s)\n\n", sc.beta.value,
                sc.beta.kind_name().c_str());

    const std::vector<double> times = {0.1, 1.0, 10.0};

    const FunctionSpec matched = GaussianPowerSpec{1.0, sc.beta.value};
    const ExperimentRecord attained = verify_sharpness_ratio(p, q, matched, times);
    std::printf("matched family  (verdict %s)\n", verdict_name(attained.verdict).c_str());
    for (const ExperimentRow& row : attained.rows)
        std::printf("  t = %5.2f   rho = %.12f\n", row.abscissa, row.value);

    const FunctionSpec box = IndicatorSpec{-1.0, 1.0};
    const ExperimentRecord generic = verify_sharpness_ratio(p, q, box, times);
    std::printf("\nunit box        (verdict %s)\n", verdict_name(generic.verdict).c_str());
    for (const ExperimentRow& row : generic.rows)
        std::printf("  t = %5.2f   rho = %.12f\n", row.abscissa, row.value);

    return 0;
}
