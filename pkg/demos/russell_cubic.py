"""The Russell cubic x + x^2 y + z^2 + t^3 = 0 with its one-dimensional torus.

Run with ``python3 demos/russell_cubic.py``. We compute its polyhedral
divisor twice. The first route downgrades the linear action on A^4
directly. The second route glues two building blocks together with a
Bezout relation 3a + 2b = 1. Both land on the same divisor.
"""

from fractions import Fraction

from ppdivisor.convex import Polyhedron
from ppdivisor.downgrade import WeightData, assemble, downgrade
from ppdivisor.exact_linalg import Matrix
from ppdivisor.fixtures_kr import bezout_pairs, russell_cubic, russell_model
from ppdivisor.ppdiv import PPDivisor, add, evaluate, linearly_equivalent, pushforward

model = russell_model()
print("surface:", model.name, "primes", ", ".join(model.primes))

# Weights (6, -6, 3, 2) on the coordinates x, y, z, t. The labels say which
# prime of the blown-up plane each coordinate ray maps to.
weights = WeightData.single((6, -6, 3, 2), {0: "Dv", 1: "E", 2: "D3", 3: "D2"})
r = downgrade(weights)
print("\ndirect downgrade")
for line in r.summary():
    print("  " + line)
direct = assemble(r, weights.ray_labels, model)
print("  divisor:", direct)

# Same answer from blocks: D_2 carries the z^2 part, D_3 the t^3 part.
fx = russell_cubic()
print("\nfrom building blocks")
print("  D_2 =", fx.D_2)
print("  D_3 =", fx.D_3)
print("  a*D_3 + b*D_2 with (a, b) = (1, -1):", fx.pipeline)
print("  agrees with direct downgrade:", fx.pipeline == direct)

# The difference D_3 - D_2 is the divisor itself, so D_2 + D == D_3.
print("\nD_2 + D == D_3:", add(fx.D_2, direct) == fx.D_3)

# Multiplying weights by 2 (resp. 3) kills the order-2 (order-3) part.
for order, block in ((2, fx.D_2), (3, fx.D_3)):
    pushed = pushforward(Matrix([[order]]), direct)
    ok, w = linearly_equivalent(pushed, block)
    print(f"  {order}*D = {pushed}")
    print(f"      + div({w}) = {block}")

# Every other Bezout pair gives an equivalent presentation.
print("\nother Bezout pairs")
for a, b in bezout_pairs(3, 2, 6):
    D = PPDivisor(model, {"D3": Polyhedron([(Fraction(a, 2),)]), "D2": Polyhedron([(Fraction(b, 3),)]),
                          "E": Polyhedron([(0,), (Fraction(1, 6),)])})
    ok, w = linearly_equivalent(D, direct)
    print(f"  (a, b) = ({a:>2}, {b:>2})  {str(D):<32} witness div({w})")

# Evaluating on the weight lattice gives the graded pieces.
print("\nevaluations")
for u in (-6, -1, 0, 1, 6):
    print(f"  D({u:>2}) = {evaluate(direct, (u,)).format(model.primes)}")
