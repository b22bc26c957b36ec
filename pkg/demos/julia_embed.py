"""Embed a passive system into a conservative one by defect channels.

A strictly contractive system leaves room between its operator and the
metric unitaries; appending defect coordinates to the input and output
closes the gap without touching the state.  The original transfer
function survives as the leading corner of the embedded one.
"""

import numpy as np

from pontsys import SignatureSpace, classify, julia_embedding, transfer_eval
from pontsys.sampling import random_passive_colligation


def main():
    rng = np.random.default_rng(12)
    sys0 = random_passive_colligation(rng, SignatureSpace(2, 1), 2, 1,
                                      strict=0.3)
    print(f"passive system: state (+{sys0.state.pos}, -{sys0.state.neg}), "
          f"{sys0.input_dim} in, {sys0.output_dim} out, "
          f"kind {classify(sys0).kind.value}")

    emb = julia_embedding(sys0)
    print(f"embedded:       state (+{emb.state.pos}, -{emb.state.neg}), "
          f"{emb.input_dim} in, {emb.output_dim} out, "
          f"kind {classify(emb).kind.value}")

    worst = 0.0
    for z in np.linspace(-0.8, 0.8, 9):
        corner = transfer_eval(emb, z)[: sys0.output_dim, : sys0.input_dim]
        worst = max(worst, np.linalg.norm(corner - transfer_eval(sys0, z), 2))
    print(f"corner transfer matches original within {worst:.2e}")


if __name__ == "__main__":
    main()
