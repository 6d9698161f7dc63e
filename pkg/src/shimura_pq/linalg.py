"""Exact integer and rational dense linear algebra.

Everything works over plain ``int`` and ``fractions.Fraction``; matrices are
lists (or tuples) of rows.  Sizes here are tiny (4x4 for lattices, at most a
few hundred for graph Laplacians), so the classical algorithms are used
without any fancy pivoting.
"""

from fractions import Fraction
from math import gcd, isqrt


def xgcd(a: int, b: int):
    """Return (g, s, t) with g = gcd(a, b) = s*a + t*b and g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf_rows(rows, ncols=None):
    """Row Hermite normal form of the lattice spanned by integer ``rows``.

    Returns the list of nonzero rows as tuples: row echelon with positive
    pivots and the entries above each pivot reduced into [0, pivot).  The
    output is canonical for the row span, which is what makes lattice
    equality a plain tuple comparison.
    """
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    work = [list(r) for r in rows if any(r)]
    result = []
    for col in range(ncols):
        pool = [r for r in work if r[col] != 0]
        rest = [r for r in work if r[col] == 0]
        if not pool:
            work = rest
            continue
        piv = pool[0]
        for row in pool[1:]:
            a, b = piv[col], row[col]
            g, s, t = xgcd(a, b)
            u, v = a // g, b // g
            piv, row = (
                [s * x + t * y for x, y in zip(piv, row)],
                [u * y - v * x for x, y in zip(piv, row)],
            )
            if any(row):
                rest.append(row)
        if piv[col] < 0:
            piv = [-x for x in piv]
        result.append(piv)
        work = rest
    # reduce entries above each pivot
    for i in range(1, len(result)):
        prow = result[i]
        pcol = next(j for j in range(ncols) if prow[j])
        pval = prow[pcol]
        for above in result[:i]:
            q = above[pcol] // pval
            if q:
                for j in range(ncols):
                    above[j] -= q * prow[j]
    return [tuple(r) for r in result]


def smith_normal_form(mat, want_left=False, modulus=None):
    """Diagonal of the Smith normal form of an integer matrix.

    Returns the list of diagonal entries d_1 | d_2 | ... (nonnegative, with
    zeros trailing).  With ``want_left=True`` also returns the left transform
    U with U*A*V = D; U is what is needed to read off cokernel coordinates.

    With ``modulus=m`` the computation happens in Z/m (every entry reduced
    into [0, m)), which is the standard remedy against intermediate entry
    explosion when only the cokernel of [mat | m*I] is wanted.
    """
    a = [list(r) for r in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def red(x):
        return x % modulus if modulus else x

    def row_op(i, j, q):
        # row_i -= q * row_j
        a[i] = [red(x - q * y) for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):
        for r in range(m):
            a[r][i] = red(a[r][i] - q * a[r][j])

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(m):
            a[r][i], a[r][j] = a[r][j], a[r][i]

    if modulus:
        a = [[x % modulus for x in row] for row in a]
    k = 0
    while k < min(m, n):
        # locate the smallest nonzero entry in the trailing block
        best = None
        for i in range(k, m):
            for j in range(k, n):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(k, best[0])
        swap_cols(k, best[1])
        # clear the edging; pivoting may need several sweeps
        while True:
            done = True
            for i in range(k + 1, m):
                if a[i][k]:
                    q = a[i][k] // a[k][k]
                    row_op(i, k, q)
                    if a[i][k]:
                        swap_rows(i, k)
                        done = False
            for j in range(k + 1, n):
                if a[k][j]:
                    q = a[k][j] // a[k][k]
                    col_op(j, k, q)
                    if a[k][j]:
                        swap_cols(j, k)
                        done = False
            if done:
                break
        # divisibility repair: pivot must divide the trailing block
        fixed = False
        for i in range(k + 1, m):
            if fixed:
                break
            for j in range(k + 1, n):
                if a[i][j] % a[k][k]:
                    row_op(k, i, -1)  # add row i to row k
                    fixed = True
                    break
        if fixed:
            continue
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            u[k] = [-x for x in u[k]]
        k += 1

    diag = [a[i][i] if i < n else 0 for i in range(min(m, n))]
    if want_left:
        return diag, u
    return diag


def cokernel_order(mat, vec):
    """Order of ``vec + im(mat)`` in Z^n / mat*Z^m (0 means infinite).

    ``mat`` is n x m integer; ``vec`` length n.
    """
    diag, u = smith_normal_form(mat, want_left=True)
    c = [sum(u[i][j] * vec[j] for j in range(len(vec))) for i in range(len(u))]
    order = 1
    for i, ci in enumerate(c):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if ci != 0:
                return 0
            continue
        step = d // gcd(d, ci)
        order = order * step // gcd(order, step)
    return order


def det_bareiss(mat):
    """Exact determinant of a square integer matrix (Bareiss)."""
    a = [list(r) for r in mat]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def mat_inv_frac(mat):
    """Inverse of a square matrix over Fraction (raises on singular input)."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def mat_mul_frac(a, b):
    return [
        [sum(x * y for x, y in zip(row, col)) for col in zip(*b)]
        for row in a
    ]


def solve_frac(a, b):
    """One solution x of a*x = b over Fraction, or None if inconsistent.

    Free variables are set to 0; the pivot choice is deterministic, so the
    returned particular solution is canonical for a given input.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = Fraction(1) / aug[r][col]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = aug[i][n] - sum(aug[i][j] * x[j] for j in range(n) if j != col)
    return x


def kernel_mod_p(mat, p):
    """Basis of the kernel of an n x n integer matrix acting mod p (row vectors c with c*mat = 0)."""
    n = len(mat)
    a = [[mat[i][j] % p for j in range(n)] for i in range(n)]
    # row-reduce the transpose: we want left kernel of mat = kernel of mat^T
    t = [[a[j][i] for j in range(n)] for i in range(n)]
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if t[i][col] % p), None)
        if piv is None:
            continue
        t[r], t[piv] = t[piv], t[r]
        inv = pow(t[r][col], -1, p)
        t[r] = [x * inv % p for x in t[r]]
        for i in range(n):
            if i != r and t[i][col] % p:
                f = t[i][col]
                t[i] = [(x - f * y) % p for x, y in zip(t[i], t[r])]
        r += 1
    # kernel of t (as a map on row vectors v -> v with t*v = 0): free columns
    pivcols = []
    c = 0
    for i in range(r):
        while c < n and t[i][c] % p == 0:
            c += 1
        pivcols.append(c)
    free = [j for j in range(n) if j not in pivcols]
    out = []
    for j in free:
        v = [0] * n
        v[j] = 1
        for i, pc in enumerate(pivcols):
            v[pc] = (-t[i][j]) % p
        out.append(tuple(v))
    return out


def frac_sqrt(x: Fraction):
    """Exact square root of a nonnegative rational, or None."""
    if x < 0:
        return None
    pn, pd = x.numerator, x.denominator
    rn, rd = isqrt(pn), isqrt(pd)
    if rn * rn != pn or rd * rd != pd:
        return None
    return Fraction(rn, rd)
