"""Integer arithmetic primitives: primes, factoring, Kronecker symbols,
square roots in Z/p^k, and a small Smith normal form.

Everything here is exact integer arithmetic; no external math libraries.
"""

import math

_SIEVE_LIMIT = 1 << 16
_sieve_primes: list[int] | None = None

# Witnesses making Miller-Rabin deterministic below 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def small_primes() -> list[int]:
    """Cached ascending primes below 2**16."""
    global _sieve_primes
    if _sieve_primes is None:
        sieve = bytearray([1]) * _SIEVE_LIMIT
        sieve[0] = sieve[1] = 0
        for i in range(2, math.isqrt(_SIEVE_LIMIT) + 1):
            if sieve[i]:
                sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
        _sieve_primes = [i for i in range(_SIEVE_LIMIT) if sieve[i]]
    return _sieve_primes


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # Brent's cycle variant; n odd composite, no small factors.
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed on {n}")


def factorize(n: int) -> list[tuple[int, int]]:
    """Factor n >= 1 into sorted (prime, exponent) pairs.

    Trial division by the cached sieve covers cofactors met in surveys
    (discriminants stay below 10**9); Pollard rho picks up the rest.
    """
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out: dict[int, int] = {}
    for p in small_primes():
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return sorted(out.items())


def is_squarefree_factored(factors: list[tuple[int, int]]) -> bool:
    return all(e == 1 for _, e in factors)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for arbitrary integers."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # peel factors of 2 from n: (a|2) depends on a mod 8
    while n % 2 == 0:
        n //= 2
        if a % 8 in (3, 5):
            result = -result
    a %= n
    # Jacobi loop with quadratic reciprocity
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """A square root of a modulo the odd prime p, or None."""
    a %= p
    if a == 0:
        return 0
    if kronecker(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def sqrt_mod_prime_power(a: int, p: int, k: int) -> int | None:
    """A root of x^2 = a (mod p^k) for odd p with p not dividing a."""
    r = sqrt_mod_prime(a, p)
    if r is None or r == 0:
        return None
    pe = p
    while pe < p**k:
        pe *= p
        # Newton step: r <- r - (r^2 - a) / (2r)
        r = (r - (r * r - a) * pow(2 * r, -1, pe)) % pe
    return r % p**k


def sqrt_mod_2k(a: int, k: int) -> int | None:
    """An odd root of x^2 = a (mod 2^k), by direct scan (k small)."""
    m = 1 << k
    for x in range(1, m, 2):
        if x * x % m == a % m:
            return x
    return None


def smith_normal_form(rows: list[list[int]]) -> tuple[list[int], list[list[int]]]:
    """Diagonalize a square integer relation matrix.

    Rows are relations among n generators: row r states prod g_i^{r[i]} = 1.
    Returns (diag, w) where diag[j] | diag[j+1] and the new generators
    h_j = prod_i g_i^{w[i][j]} satisfy h_j^diag[j] = 1 and generate the
    same group as a direct product.
    """
    n = len(rows)
    # a = transpose(rows): columns span the relation lattice
    a = [[rows[j][i] for j in range(n)] for i in range(n)]
    winv = [[int(i == j) for j in range(n)] for i in range(n)]  # accumulates P^-1

    def row_op(i, j, m):
        # row_i += m * row_j on a  <=>  col_j -= m * col_i on winv
        a[i] = [x + m * y for x, y in zip(a[i], a[j])]
        for r in range(n):
            winv[r][j] -= m * winv[r][i]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        for r in range(n):
            winv[r][i], winv[r][j] = winv[r][j], winv[r][i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        for r in range(n):
            winv[r][i] = -winv[r][i]

    def col_op(j, i, m):
        for r in range(n):
            a[r][j] += m * a[r][i]

    def col_swap(i, j):
        for r in range(n):
            a[r][i], a[r][j] = a[r][j], a[r][i]

    for t in range(n):
        while True:
            # move a minimal nonzero entry of the trailing block to (t, t)
            piv = None
            for i in range(t, n):
                for j in range(t, n):
                    if a[i][j] != 0 and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                break
            if piv != (t, t):
                if piv[0] != t:
                    row_swap(t, piv[0])
                if piv[1] != t:
                    col_swap(t, piv[1])
            dirty = False
            for i in range(t + 1, n):
                if a[i][t] != 0:
                    row_op(i, t, -(a[i][t] // a[t][t]))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    col_op(j, t, -(a[t][j] // a[t][t]))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            # enforce divisibility of the remaining block by the pivot
            bad = None
            for i in range(t + 1, n):
                for j in range(t + 1, n):
                    if a[i][j] % a[t][t] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, 1)
        if a[t][t] < 0:
            row_neg(t)
    diag = [a[i][i] for i in range(n)]
    return diag, winv
