"""Boundary behavior and stability classes side by side.

For three scalar systems, prints the boundary survey flags (inner,
co-inner, contractive) next to the stability class of the restricted
forward and backward flows, plus the outer defect function where the
defect does not vanish.
"""

import numpy as np

from pontsys import (
    SignatureSpace,
    as_transfer,
    blaschke_potapov_factor,
    boundary_behavior,
    cascade,
    defect,
    invert_system,
    stability_classify,
)
from pontsys.sampling import random_passive_colligation


def survey(name, system):
    bnd = boundary_behavior(as_transfer(system))
    st = stability_classify(system)
    print(f"{name}:")
    print(f"  sigma_max on circle  {float(np.nanmax(bnd.sigma_max)):.6f}")
    print(f"  inner / co-inner     {bnd.inner} / {bnd.co_inner}")
    print(f"  stability class      {st.label} "
          f"(radii {st.forward_radius:.3f}, {st.backward_radius:.3f})")
    d = defect(as_transfer(system))
    if d.phi is None:
        print("  right defect         vanishes identically")
    else:
        mags = np.round(np.abs(d.phi.numerator), 4)
        print(f"  outer defect factor  numerator magnitudes {mags}, "
              f"boundary residual {d.boundary_residual:.1e}")
    print()


def main():
    b = blaschke_potapov_factor(0.3, 1.0, [1.0], 1)
    survey("inner b_{0.3}", b)
    survey("mixed b / b_{0.55}",
           cascade(b, invert_system(blaschke_potapov_factor(0.55, 1.0, [1.0], 1))))
    rng = np.random.default_rng(5)
    survey("strict contraction",
           random_passive_colligation(rng, SignatureSpace(2, 0), 1, 1,
                                      strict=0.4))


if __name__ == "__main__":
    main()
