"""Brute-force oracles for the tests.

These deliberately avoid the library's own algorithms: equivalence of forms
is decided by searching words in the modular group generators, norm
equations are solved by exhaustive search, and quadratic residues by
squaring every residue.
"""

import math
from collections import deque

from iqgalois.idealgen import QuadraticInteger


def sl2_orbit(form: tuple[int, int, int], max_size: int = 20000) -> set:
    """Forms reachable from `form` by the standard generators.

    S: (a, b, c) -> (c, -b, a); T^(+-1): (a, b, c) -> (a, b +- 2a, a +- b + c).
    Every properly equivalent form with coefficients of comparable size is
    reached well before the size cap.
    """
    seen = {form}
    queue = deque([form])
    while queue and len(seen) < max_size:
        a, b, c = queue.popleft()
        nbrs = [
            (c, -b, a),
            (a, b + 2 * a, a + b + c),
            (a, b - 2 * a, a - b + c),
        ]
        for nb in nbrs:
            if nb not in seen and abs(nb[1]) <= 6 * max(a, c, abs(b)) + 6:
                seen.add(nb)
                queue.append(nb)
    return seen


def quadratic_residues(p: int) -> set[int]:
    return {x * x % p for x in range(p)}


def norm_elements(D: int, n: int) -> list[QuadraticInteger]:
    """All alpha in the order with norm exactly n, by exhausting v."""
    out = []
    vmax = math.isqrt(4 * n // -D)
    for v in range(-vmax, vmax + 1):
        usq = 4 * n + D * v * v
        if usq < 0:
            continue
        u = math.isqrt(usq)
        if u * u != usq:
            continue
        for uu in {u, -u}:
            if (uu - v * D) % 2 == 0:
                out.append(QuadraticInteger(uu, v, D))
    return out


def power_in_order(beta: QuadraticInteger, e: int) -> QuadraticInteger:
    result = QuadraticInteger(2, 0, beta.disc)
    for _ in range(e):
        result = result.mul(beta)
    return result


def is_perfect_power(alpha: QuadraticInteger, p: int) -> bool:
    """Does beta^p = alpha have a solution in the order?  Exhaustive."""
    n = alpha.norm
    root = round(n ** (1.0 / p))
    base = None
    for cand in (root - 1, root, root + 1):
        if cand >= 0 and cand**p == n:
            base = cand
            break
    if base is None:
        return False
    return any(power_in_order(beta, p) == alpha for beta in norm_elements(alpha.disc, base))


def random_local_unit(rng, D: int, p: int, span: int | None = None) -> QuadraticInteger:
    """A random element of the order that is a unit above p."""
    span = span or 6 * p * p
    while True:
        u = rng.randrange(-span, span + 1)
        v = rng.randrange(-span, span + 1)
        if (u - v * D) % 2:
            u += 1
        try:
            alpha = QuadraticInteger(u, v, D)
        except ValueError:
            continue
        if alpha.norm != 0 and alpha.norm % p != 0:
            return alpha
