"""Random risk aversion lottery: choice data point one way, mean utility the other.

Prints the choice probability, the mean utility difference, the verdicts of
the symmetric-class pair test and of the response-time criterion, and the
q-FSD margins in both directions.
"""

from __future__ import annotations

from chronopref.generators import CrraLottery, crra_dataset
from chronopref.symmetric import reveal_symmetric_pair
from chronopref.unrestricted import reveal_unrestricted


def main() -> None:
    fam = CrraLottery()
    ds = crra_dataset()
    lo, hi = fam.support
    print(f"p(x,y) = {ds.prob('x', 'y'):.4f}, mean difference = {fam.mean():.5f}, support [{lo:.3f}, {hi:.3f}]")
    sym = reveal_symmetric_pair(ds, "y", "x")
    print(f"symmetric pair test: y over x {'strictly' if sym and sym.strict else 'weakly' if sym else 'not'} revealed")
    for a, b in (("x", "y"), ("y", "x")):
        edge, v = reveal_unrestricted(ds, a, b)
        print(f"RT criterion {a} over {b}: revealed={edge is not None}, worst margin {v.worst_margin:.4f} at t={v.witness_t}")


if __name__ == "__main__":
    main()
