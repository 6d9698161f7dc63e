"""Small exact number-theory helpers: primality, Legendre/Kronecker symbols,
square roots mod p, Hilbert symbols over Q."""

from math import gcd


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond desk scale."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_from(start: int):
    """Unbounded ascending prime generator."""
    n = max(2, start)
    while True:
        if is_prime(n):
            yield n
        n += 1


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p: one of -1, 0, 1."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n)."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def mod_sqrt(a: int, p: int):
    """A square root of a mod p (p an odd prime), or None."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _split_power(x: int, p: int):
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


def hilbert_symbol(a: int, b: int, p: int) -> int:
    """Hilbert symbol (a, b)_p over Q_p for a prime p; a, b nonzero integers."""
    if a == 0 or b == 0:
        raise ValueError("arguments must be nonzero")
    if p == 2:
        alpha, u = _split_power(a, 2)
        beta, w = _split_power(b, 2)
        eps = lambda x: ((x - 1) // 2) % 2
        omega = lambda x: ((x * x - 1) // 8) % 2
        e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
        return -1 if e % 2 else 1
    alpha, u = _split_power(a, p)
    beta, w = _split_power(b, p)
    e = alpha * beta * ((p - 1) // 2)
    s = (-1) ** (e % 2)
    if beta % 2:
        s *= legendre(u, p)
    if alpha % 2:
        s *= legendre(w, p)
    return s


def hilbert_infinity(a: int, b: int) -> int:
    return -1 if (a < 0 and b < 0) else 1


def ramified_primes(a: int, b: int):
    """Finite primes where the quaternion algebra (a, b / Q) ramifies."""
    cands = {2}
    for x in (abs(a), abs(b)):
        d = 2
        while d * d <= x:
            if x % d == 0:
                cands.add(d)
                while x % d == 0:
                    x //= d
            d += 1
        if x > 1:
            cands.add(x)
    return sorted(p for p in cands if hilbert_symbol(a, b, p) == -1)
