// Projects coherent states onto a constraint sector and compares the
// normalized double-oscillator overlap with the SU(2) coherent-state formula.
#include "csq/csq.hpp"

#include <cstdio>
#include <vector>

int main() {
    using namespace csq;

    const FockSpace one(1, 40);
    const cplx alpha(1.0, 0.4);
    for (double e : {2.0, 2.5}) {
        const ProjectorSpec spec{single_constraint(one, e), 0.1};
        const PhysicalState s = project(spec, coherent_vector(one, alpha));
        std::printf("single  E'=%.1f  physical norm %.12f%s\n", e, s.norm_in_full_space, s.is_null() ? "  (null)" : "");
    }

    const FockSpace two(2, 12);
    const int mprime = 4;
    const ConstraintOp con = double_constraint(two, mprime);
    const LinearOperator p = build_projector({con, 0.1});
    const std::vector<cplx> l1{cplx(0.5, 0.2), cplx(0.7, -0.1)}, l2{cplx(-0.3, 0.6), cplx(0.4, 0.3)};
    const auto numeric = normalized_projected_propagator(p, con, l1, l2);
    const cplx formula = su2_overlap(mprime, l1[0] / l1[1], l2[0] / l2[1]).value;
    std::printf("double  m'=%d  projected %.12f%+.12fi  su2 %.12f%+.12fi\n", mprime, numeric->value.real(),
                numeric->value.imag(), formula.real(), formula.imag());
    return 0;
}
