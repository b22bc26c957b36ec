"""Observability can be lost in a cascade despite coprime-looking factors.

Reproduces the two-channel counterexample: the row function
S = (a b, 1) / sqrt(2) with a(z) = z and b the Blaschke factor at 1/2 is
realized canonically (co-isometric, observable), then cascaded with the
conservative realization of 1/b.  The cascade picks up an unobservable
direction, and the adjoint cascade an unreachable one, even though the
scalar pieces share no zero.
"""

import numpy as np

from pontsys import (
    Colligation,
    adjoint_system,
    as_transfer,
    blaschke_potapov_factor,
    canonical_coisometric_realization,
    cascade,
    classify,
    invert_system,
    obstruction_controllable,
    obstruction_observable,
)


def main():
    a = blaschke_potapov_factor(0.0, 1.0, [1.0], 1)   # a(z) = z
    b = blaschke_potapov_factor(0.5, 1.0, [1.0], 1)
    ab = cascade(a, b)
    rt = 1.0 / np.sqrt(2.0)
    n = ab.state_dim
    row = Colligation(ab.state, 2, 1,
                      ab.A, np.hstack([ab.B * rt, np.zeros((n, 1))]),
                      ab.C, np.hstack([ab.D * rt, [[rt]]]))

    model = canonical_coisometric_realization(as_transfer(row))
    cls = classify(model)
    print(f"canonical factor: kind={cls.kind.value}, "
          f"observable={cls.observable}, state dim {model.state_dim}")

    invb = invert_system(b)
    obs = obstruction_observable(model, invb)
    print(f"cascade obstruction to observability: dimension {obs.dimension}")
    print(f"  dual-route agreement {obs.agreement_residual:.1e}")

    ctrl = obstruction_controllable(adjoint_system(invb), adjoint_system(model))
    print(f"adjoint cascade obstruction to controllability: "
          f"dimension {ctrl.dimension}")
    print(f"  dual-route agreement {ctrl.agreement_residual:.1e}")


if __name__ == "__main__":
    main()
