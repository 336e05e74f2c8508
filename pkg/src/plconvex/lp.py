"""Seidel's randomized incremental linear programming in exact arithmetic.

Small fixed dimension only (the fan code uses four variables).  Every
variable is implicitly boxed to ``[-bound, bound]`` so each subproblem is
bounded and has a well-defined starting vertex.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

Constraint = tuple[tuple[Fraction, ...], Fraction]  # a . x <= b


def seidel_lp(
    constraints: Sequence[tuple[Sequence, object]],
    objective: Sequence,
    bound=1,
    rng: random.Random | None = None,
) -> list[Fraction] | None:
    """Maximize ``objective . x`` subject to ``a . x <= b`` and the box.

    Returns an optimal point, or ``None`` when the constraints are infeasible.
    Expected running time is linear in the number of constraints.
    """
    rng = rng or random.Random(0)
    cons = [(tuple(Fraction(x) for x in a), Fraction(b)) for a, b in constraints]
    return _solve(cons, [Fraction(c) for c in objective], Fraction(bound), rng)


def _solve(cons: list[Constraint], c: list[Fraction], bound: Fraction, rng) -> list[Fraction] | None:
    d = len(c)
    if d == 0:
        return [] if all(b >= 0 for _, b in cons) else None
    x = [bound if cj > 0 else -bound if cj < 0 else Fraction(0) for cj in c]
    order = list(range(len(cons)))
    rng.shuffle(order)
    done: list[Constraint] = []
    for idx in order:
        a, b = cons[idx]
        if sum(ai * xi for ai, xi in zip(a, x)) <= b:
            done.append((a, b))
            continue
        j = next((i for i, ai in enumerate(a) if ai != 0), None)
        if j is None:
            return None
        aj = a[j]

        def restrict(h: Constraint) -> Constraint:
            a2, b2 = h
            f = a2[j] / aj
            return (
                tuple(a2[l] - f * a[l] for l in range(d) if l != j),
                b2 - f * b,
            )

        unit = tuple(Fraction(int(i == j)) for i in range(d))
        neg = tuple(-u for u in unit)
        sub_cons = [restrict(h) for h in done]
        sub_cons.append(restrict((unit, bound)))
        sub_cons.append(restrict((neg, bound)))
        fc = c[j] / aj
        sub_c = [c[l] - fc * a[l] for l in range(d) if l != j]
        y = _solve(sub_cons, sub_c, bound, rng)
        if y is None:
            return None
        rest = iter(y)
        x = [Fraction(0)] * d
        for l in range(d):
            if l != j:
                x[l] = next(rest)
        x[j] = (b - sum(a[l] * x[l] for l in range(d) if l != j)) / aj
        done.append((a, b))
    return x
