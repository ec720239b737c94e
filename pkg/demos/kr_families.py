"""Two families of exotic threefolds, built by descending along finite covers.

Run with ``python3 demos/kr_families.py``.

First kind: x + x^d y + z^alpha2 + t^alpha3. Upstairs, on a blown-up plane,
the divisor looks just like the Russell cubic's. One cyclic cover of order
d - 1 takes it down to the threefold's own surface.

Second kind: x + y (x^d + z^alpha2)^l + t^alpha3. Here the descent takes two
covers, of order d and then of order dl - 1. The second is skipped when
dl - 1 == 1.
"""

from fractions import Fraction

from ppdivisor.fixtures_kr import KRFirstKind, KRSecondKind, first_kind, second_kind
from ppdivisor.ppdiv import is_valid_map, pullback

print("first kind")
print(f"  {'d':>2} {'a2':>3} {'a3':>3}  {'(a, b)':<9} descended divisor")
for d, a2, a3 in [(2, 2, 3), (3, 2, 3), (3, 2, 5), (4, 3, 7), (5, 4, 5)]:
    fx = first_kind(KRFirstKind(d, a2, a3))
    # the exceptional coefficient shrinks by the cover's order
    assert fx.descended.coefficient("E'").vertices[-1][0] == Fraction(1, (d - 1) * a2 * a3)
    # pulling the quotient back up returns the divisor we started with
    assert pullback(fx.cover, fx.descended) == fx.upstairs
    print(f"  {d:>2} {a2:>3} {a3:>3}  {str(fx.bezout):<9} {fx.descended}")

fx = first_kind(KRFirstKind(3, 2, 3))
print("\n  the d = 3, alpha = (2, 3) descent, stage by stage")
for line in fx.report.lines():
    print("    " + line)

print("\nsecond kind")
for d, l, a2, a3 in [(2, 2, 3, 5), (2, 1, 3, 5), (3, 2, 2, 5)]:
    fx = second_kind(KRSecondKind(d, l, a2, a3))
    a, b = fx.bezout
    print(f"\n  d={d} l={l} alpha2={a2} alpha3={a3}")
    print(f"    Bezout pair with {d} | a: (a, b) = ({a}, {b}), so a' = a/d = {fx.primed[0]}")
    print(f"    upstairs     {fx.upstairs}")
    for rec in fx.report.records:
        ok = is_valid_map(rec.map, rec.source, rec.result)
        print(f"    {rec.stage.describe():<30} -> {rec.result}   map valid: {ok}")
