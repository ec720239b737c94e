"""From a linear torus action on affine space to a polyhedral divisor.

Run with ``python3 demos/downgrade_walkthrough.py``.

A torus T of rank k acting linearly on A^m is given by an m x k integer
weight matrix F. Completing F to an exact sequence 0 -> Z^k -> Z^m -> Z^(m-k)
gives the quotient lattice map P and a section s with s F = 1. Each column
of P spans a ray of the quotient fan. The fiber of the positive orthant over
that ray, pushed through s, is the polytope that ray contributes.
"""

from ppdivisor.convex import dual_cone
from ppdivisor.divisors import ModelKind, YModel
from ppdivisor.downgrade import WeightData, assemble, downgrade
from ppdivisor.errors import OutsideWeightCone
from ppdivisor.exact_linalg import Matrix, smith_normal_form
from ppdivisor.ppdiv import evaluate


def show(title, w, section=None):
    print(title)
    r = downgrade(w, section)
    for line in r.summary():
        print("  " + line)
    print()
    return r


# 1. The exact sequence behind everything, for the Russell weights.
F = Matrix([[6], [-6], [3], [2]])
snf = smith_normal_form(F)
print("Smith form of F: U F V = D with D =", snf.D.rows, " (a single 1, so Z^4 / F Z is free)")
r = show("weights (6, -6, 3, 2)", WeightData(F))
seq = r.seq
print("  P F =", (seq.P @ seq.F).rows, "  s F =", (seq.s @ seq.F).rows, "\n")

# 2. The section is a choice. Another one shifts every polytope by the
#    image of the difference, which changes the divisor by a principal one.
show("same weights, section s = (0, 0, -1, 2)", WeightData(F), Matrix([[0, 0, -1, 2]]))

# 3. The building block X_p has weights (p, p, -p, 1). Only the coordinates
#    of weight -p and 1 give nontrivial polytopes.
for p in (2, 3):
    show(f"building block, p = {p}", WeightData.single((p, p, -p, 1)))

# 4. A rank-two torus. Rays are found the same way; polytopes live in Q^2.
#    Coordinates 1 and 2 map to the same ray, which is listed once.
show("rank-two torus on A^4", WeightData(Matrix([[1, 0], [0, 1], [-1, -1], [1, 1]])))

# 5. All weights positive: the torus has a nonzero tail cone sigma and the
#    divisor can only be evaluated on sigma's dual.
w = WeightData.single((1, 2, 3))
r = show("positive weights (1, 2, 3)", w)
plane = YModel("P", ModelKind.AFFINE_PLANE, ("L1", "L2", "L3"))
D = assemble(r, {0: "L1", 1: "L2", 2: "L3"}, plane)
print("  divisor:", D)
for u in (0, 1, 6, -1):
    try:
        print(f"  D({u}) = {evaluate(D, (u,)).format(plane.primes)}")
    except OutsideWeightCone as e:
        print(f"  D({u}) is undefined: {e}")
print("  tail:", D.tail, " weights allowed:", dual_cone(D.tail))
