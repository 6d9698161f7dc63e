"""Exact arithmetic in definite rational quaternion algebras.

An algebra (q, a, b) has Q-basis 1, i, j, k with i^2 = -a, j^2 = -b, k = ij,
ramified exactly at {q, infinity}.  Elements carry integer numerator
4-vectors over a positive denominator; lattices carry a 4x4 integer basis
matrix in row Hermite normal form over a denominator, which makes lattice
equality a tuple comparison.  No floating point is used anywhere.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, isqrt

from .linalg import det_bareiss, frac_sqrt, hnf_rows, kernel_mod_p, mat_inv_frac, mat_mul_frac
from .ntheory import is_prime, mod_sqrt, ramified_primes


@dataclass(frozen=True)
class QuaternionAlgebra:
    """Definite algebra with i^2 = -a, j^2 = -b, k = ij, ramified at {q, oo}."""

    q: int
    a: int
    b: int

    def mul4(self, x, y):
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            x0 * y0 - a * x1 * y1 - b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 + b * (x2 * y3 - x3 * y2),
            x0 * y2 + x2 * y0 - a * (x1 * y3 - x3 * y1),
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    def nrd4(self, x):
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        return x0 * x0 + a * x1 * x1 + b * x2 * x2 + a * b * x3 * x3

    def pair4(self, x, y):
        """trd(x * conj(y)) for integer coordinate vectors (the norm form is
        diagonal in the 1,i,j,k basis)."""
        a, b = self.a, self.b
        return 2 * (x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] + a * b * x[3] * y[3])

    def ramification(self):
        return ramified_primes(-self.a, -self.b)


def _norm4(num, den):
    g = gcd(gcd(gcd(abs(num[0]), abs(num[1])), gcd(abs(num[2]), abs(num[3]))), den)
    if g > 1:
        num = (num[0] // g, num[1] // g, num[2] // g, num[3] // g)
        den //= g
    return num, den


class Quat:
    """Quaternion with exact rational coordinates (integer numerators / den)."""

    __slots__ = ("alg", "num", "den")

    def __init__(self, alg, num, den=1):
        if den < 0:
            num = tuple(-x for x in num)
            den = -den
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        num, den = _norm4(tuple(int(x) for x in num), den)
        object.__setattr__(self, "alg", alg)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *_):
        raise AttributeError("Quat is immutable")

    @classmethod
    def from_coords(cls, alg, coords):
        fr = [Fraction(c) for c in coords]
        den = reduce(lambda x, y: x * y // gcd(x, y), (f.denominator for f in fr), 1)
        return cls(alg, tuple(int(f * den) for f in fr), den)

    @classmethod
    def one(cls, alg):
        return cls(alg, (1, 0, 0, 0))

    @property
    def coords(self):
        return tuple(Fraction(x, self.den) for x in self.num)

    def __add__(self, other):
        other = self._coerce(other)
        d = self.den * other.den // gcd(self.den, other.den)
        s, o = d // self.den, d // other.den
        return Quat(self.alg, tuple(s * x + o * y for x, y in zip(self.num, other.num)), d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        return Quat(self.alg, tuple(-x for x in self.num), self.den)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return Quat(self.alg, tuple(f.numerator * x for x in self.num), self.den * f.denominator)
        return Quat(self.alg, self.alg.mul4(self.num, other.num), self.den * other.den)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        f = Fraction(other)
        return self * Fraction(f.denominator, f.numerator)

    def _coerce(self, other):
        if isinstance(other, Quat):
            return other
        f = Fraction(other)
        return Quat(self.alg, (f.numerator, 0, 0, 0), f.denominator)

    def conj(self):
        n = self.num
        return Quat(self.alg, (n[0], -n[1], -n[2], -n[3]), self.den)

    def trd(self):
        return Fraction(2 * self.num[0], self.den)

    def nrd(self):
        return Fraction(self.alg.nrd4(self.num), self.den * self.den)

    def inv(self):
        n = self.nrd()
        if n == 0:
            raise ZeroDivisionError("inverting zero quaternion")
        return self.conj() / n

    def is_zero(self):
        return self.num == (0, 0, 0, 0)

    def key(self):
        return (self.den, self.num)

    def __eq__(self, other):
        return (
            isinstance(other, Quat)
            and self.alg == other.alg
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.alg, self.num, self.den))

    def __repr__(self):
        return f"Quat({self.num}/{self.den})"


def _fr_floor(f):
    return f.numerator // f.denominator


def _fsqrt_floor(f):
    if f < 0:
        return -1
    return isqrt(f.numerator * f.denominator) // f.denominator


def _int_range(off, bound):
    """Integers c with (c + off)^2 <= bound; off, bound are Fractions."""
    if bound < 0:
        return 1, 0
    s = _fsqrt_floor(bound)
    base = _fr_floor(-off)

    def le_upper(c):
        d = c + off
        return d <= 0 or d * d <= bound

    def ge_lower(c):
        d = c + off
        return d >= 0 or d * d <= bound

    hi = base + s
    while le_upper(hi + 1):
        hi += 1
    while hi > base - s - 2 and not le_upper(hi):
        hi -= 1
    lo = base - s - 1
    while not ge_lower(lo):
        lo += 1
    while ge_lower(lo - 1):
        lo -= 1
    return lo, hi


class Lattice:
    """Full rank-4 lattice: integer HNF rows over a positive denominator."""

    __slots__ = ("alg", "den", "rows", "_cache")

    def __init__(self, alg, rows, den):
        rows = [tuple(int(x) for x in r) for r in rows]
        g = den
        for r in rows:
            for x in r:
                g = gcd(g, abs(x))
        if g > 1:
            den //= g
            rows = [tuple(x // g for x in r) for r in rows]
        object.__setattr__(self, "alg", alg)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "rows", tuple(rows))
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, *_):
        raise AttributeError("Lattice is immutable")

    # -- construction -----------------------------------------------------
    @classmethod
    def from_int_rows(cls, alg, rows, den):
        h = hnf_rows(rows, 4)
        if len(h) != 4:
            raise ValueError("lattice does not have full rank 4")
        return cls(alg, h, den)

    @classmethod
    def from_elements(cls, alg, elems):
        den = 1
        for e in elems:
            den = den * e.den // gcd(den, e.den)
        rows = [tuple(x * (den // e.den) for x in e.num) for e in elems]
        return cls.from_int_rows(alg, rows, den)

    @classmethod
    def from_frac_rows(cls, alg, rows):
        den = 1
        fr = [[Fraction(x) for x in r] for r in rows]
        for r in fr:
            for x in r:
                den = den * x.denominator // gcd(den, x.denominator)
        return cls.from_int_rows(alg, [[int(x * den) for x in r] for r in fr], den)

    # -- basic data --------------------------------------------------------
    def basis(self):
        return [Quat(self.alg, r, self.den) for r in self.rows]

    def frac_rows(self):
        return [[Fraction(x, self.den) for x in r] for r in self.rows]

    def det(self):
        d = 1
        for idx in range(4):
            d *= self.rows[idx][idx]
        return Fraction(abs(d), self.den ** 4)

    def key(self):
        return (self.den, self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, Lattice)
            and self.alg == other.alg
            and self.den == other.den
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.alg, self.den, self.rows))

    def __repr__(self):
        return f"Lattice({self.rows}/{self.den})"

    # -- membership ---------------------------------------------------------
    def coords_of(self, x):
        """Integer coordinates of x in this basis, or None if x is outside."""
        if x.alg != self.alg:
            raise ValueError("algebra mismatch")
        v = [Fraction(n * self.den, x.den) for n in x.num]
        c = [0, 0, 0, 0]
        for idx in range(4):
            piv = Fraction(self.rows[idx][idx])
            t = (v[idx] - sum(c[r] * self.rows[r][idx] for r in range(idx))) / piv
            if t.denominator != 1:
                return None
            c[idx] = int(t)
        for col in range(4):
            if sum(c[r] * self.rows[r][col] for r in range(4)) * x.den != x.num[col] * self.den:
                return None
        return tuple(c)

    def __contains__(self, x):
        return self.coords_of(x) is not None

    # -- lattice arithmetic --------------------------------------------------
    def mul(self, other):
        rows = []
        for r in self.rows:
            for s in other.rows:
                rows.append(self.alg.mul4(r, s))
        return Lattice.from_int_rows(self.alg, rows, self.den * other.den)

    def mul_elem(self, x):
        rows = [self.alg.mul4(r, x.num) for r in self.rows]
        return Lattice.from_int_rows(self.alg, rows, self.den * x.den)

    def elem_mul(self, x):
        rows = [self.alg.mul4(x.num, r) for r in self.rows]
        return Lattice.from_int_rows(self.alg, rows, self.den * x.den)

    def conj_lattice(self):
        rows = [(r[0], -r[1], -r[2], -r[3]) for r in self.rows]
        return Lattice.from_int_rows(self.alg, rows, self.den)

    def scale(self, f):
        f = Fraction(f)
        if f <= 0:
            raise ValueError("scale factor must be positive")
        return Lattice(self.alg, [tuple(f.numerator * x for x in r) for r in self.rows],
                       self.den * f.denominator)

    def add(self, other):
        den = self.den * other.den // gcd(self.den, other.den)
        s, o = den // self.den, den // other.den
        rows = [tuple(s * x for x in r) for r in self.rows]
        rows += [tuple(o * x for x in r) for r in other.rows]
        return Lattice.from_int_rows(self.alg, rows, den)

    def add_elem(self, x):
        den = self.den * x.den // gcd(self.den, x.den)
        rows = [tuple((den // self.den) * v for v in r) for r in self.rows]
        rows.append(tuple((den // x.den) * v for v in x.num))
        return Lattice.from_int_rows(self.alg, rows, den)

    def conj_by(self, y):
        yi = y.inv()
        rows = [Quat(self.alg, r, self.den) for r in self.rows]
        return Lattice.from_elements(self.alg, [y * r * yi for r in rows])

    def index_in(self, other):
        """Generalized index [other : self] as a Fraction."""
        return self.det() / other.det()

    # -- quadratic form machinery ---------------------------------------------
    def gram(self):
        """Integer Gram matrix G with nrd(c . basis) = c^T G c / den^2."""
        if "gram" not in self._cache:
            a, b = self.alg.a, self.alg.b
            w = (1, a, b, a * b)
            g = [[sum(w[m] * self.rows[r][m] * self.rows[s][m] for m in range(4))
                  for s in range(4)] for r in range(4)]
            self._cache["gram"] = g
        return self._cache["gram"]

    def _ldl(self):
        if "ldl" not in self._cache:
            g = self.gram()
            n = 4
            L = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
            D = [Fraction(0)] * n
            for j2 in range(n):
                D[j2] = Fraction(g[j2][j2]) - sum(L[j2][k] ** 2 * D[k] for k in range(j2))
                if D[j2] <= 0:
                    raise ArithmeticError("form is not positive definite")
                for i2 in range(j2 + 1, n):
                    L[i2][j2] = (Fraction(g[i2][j2])
                                 - sum(L[i2][k] * L[j2][k] * D[k] for k in range(j2))) / D[j2]
            self._cache["ldl"] = (D, L)
        return self._cache["ldl"]

    def _enum_form(self, target, upto=False):
        """Integer vectors c != 0 with c^T G c == target (or <= target if upto)."""
        D, L = self._ldl()
        out = []
        c = [0, 0, 0, 0]
        tgt = Fraction(target)

        def rec(j2, rem):
            if j2 < 0:
                if (upto or rem == 0) and any(c):
                    out.append((tuple(c), tgt - rem))
                return
            off = sum(L[i2][j2] * c[i2] for i2 in range(j2 + 1, 4))
            lo, hi = _int_range(off, rem / D[j2])
            for cj in range(lo, hi + 1):
                c[j2] = cj
                val = D[j2] * (cj + off) ** 2
                if val <= rem:
                    rec(j2 - 1, rem - val)
            c[j2] = 0

        rec(3, tgt)
        return out

    def norm_vectors(self, n, trace=None):
        """All x in the lattice with nrd(x) = n (and trd(x) = trace if given)."""
        n = Fraction(n)
        if n < 0:
            return []
        if n == 0:
            z = Quat(self.alg, (0, 0, 0, 0))
            return [z] if trace in (None, 0, Fraction(0)) else []
        target = n * self.den ** 2
        if target.denominator != 1:
            return []
        found = []
        for c, _ in self._enum_form(int(target)):
            x = Quat(self.alg,
                     tuple(sum(c[r] * self.rows[r][m] for r in range(4)) for m in range(4)),
                     self.den)
            if trace is None or x.trd() == trace:
                found.append(x)
        found.sort(key=lambda v: v.key())
        return found

    def find_norm_vector(self, n):
        """One x with nrd(x) = n, or None (early-exit enumeration)."""
        n = Fraction(n)
        if n <= 0:
            return None
        target = n * self.den ** 2
        if target.denominator != 1:
            return None
        D, L = self._ldl()
        c = [0, 0, 0, 0]
        hit = []

        def rec(j2, rem):
            if j2 < 0:
                if rem == 0:
                    hit.append(tuple(c))
                    return True
                return False
            off = sum(L[i2][j2] * c[i2] for i2 in range(j2 + 1, 4))
            lo, hi = _int_range(off, rem / D[j2])
            for cj in range(lo, hi + 1):
                c[j2] = cj
                val = D[j2] * (cj + off) ** 2
                if val <= rem and rec(j2 - 1, rem - val):
                    return True
            c[j2] = 0
            return False

        rec(3, Fraction(int(target)))
        if not hit:
            return None
        cvec = hit[0]
        return Quat(self.alg,
                    tuple(sum(cvec[r] * self.rows[r][m] for r in range(4)) for m in range(4)),
                    self.den)

    def min_vectors(self):
        """(minimal nonzero nrd, all attaining vectors), deterministic order."""
        if "min" in self._cache:
            return self._cache["min"]
        g = self.gram()
        detg = det_bareiss(g)
        bound = isqrt(2 * isqrt(detg)) + 2
        best = None
        vecs = []
        while best is None:
            for c, val in self._enum_form(bound, upto=True):
                if val == 0:
                    continue
                if best is None or val < best:
                    best, vecs = val, [c]
                elif val == best:
                    vecs.append(c)
            bound *= 2  # safety; the Hermite bound should always hit
        out = [Quat(self.alg,
                    tuple(sum(c[r] * self.rows[r][m] for r in range(4)) for m in range(4)),
                    self.den) for c in set(vecs)]
        out.sort(key=lambda v: v.key())
        res = (Fraction(int(best), self.den ** 2), out)
        self._cache["min"] = res
        return res


# -- duality helpers ---------------------------------------------------------

def _dual_of_constraints(alg, functionals):
    """Lattice {x : x . w in Z for all w in the span of the functionals}."""
    den = 1
    fr = [[Fraction(x) for x in w] for w in functionals]
    for w in fr:
        for x in w:
            den = den * x.denominator // gcd(den, x.denominator)
    rows = hnf_rows([[int(x * den) for x in w] for w in fr], 4)
    if len(rows) != 4:
        raise ValueError("constraint span is degenerate")
    pinv = mat_inv_frac(rows)
    # basis rows of the dual: den * (P^T)^{-1} = den * transpose(P^{-1})
    dual_rows = [[den * pinv[c][r] for c in range(4)] for r in range(4)]
    return Lattice.from_frac_rows(alg, dual_rows)


def _mult_matrix(b, side):
    """4x4 Fraction matrix M with coords(e_r * b) (side='right') or
    coords(b * e_r) (side='left') as row r."""
    alg = b.alg
    rows = []
    for r in range(4):
        e = tuple(int(m == r) for m in range(4))
        prod = alg.mul4(e, b.num) if side == "right" else alg.mul4(b.num, e)
        rows.append([Fraction(x, b.den) for x in prod])
    return rows


def _order_of(lat, side):
    minv = mat_inv_frac(lat.frac_rows())
    functionals = []
    for b in lat.basis():
        k = mat_mul_frac(_mult_matrix(b, side), minv)
        for col in range(4):
            functionals.append([k[r][col] for r in range(4)])
    return _dual_of_constraints(lat.alg, functionals)


def left_order(lat):
    """{x : x * L <= L}."""
    return _order_of(lat, "right")


def right_order(lat):
    """{x : L * x <= L}."""
    return _order_of(lat, "left")


def lattice_intersection(l1, l2):
    m1 = mat_inv_frac(l1.frac_rows())
    m2 = mat_inv_frac(l2.frac_rows())
    functionals = [[m[r][col] for r in range(4)] for m in (m1, m2) for col in range(4)]
    return _dual_of_constraints(l1.alg, functionals)


# -- orders ------------------------------------------------------------------

def reduced_discriminant(order):
    basis = order.basis()
    t = [[(x * y).trd() for y in basis] for x in basis]
    det = _frac_det4(t)
    d = frac_sqrt(abs(det))
    if d is None or d.denominator != 1:
        raise ArithmeticError("trace form determinant is not a perfect square")
    return int(d)


def _frac_det4(m):
    a = [row[:] for row in m]
    det = Fraction(1)
    for col in range(4):
        piv = next((r for r in range(col, 4) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = Fraction(1) / a[col][col]
        for r in range(col + 1, 4):
            if a[r][col]:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def is_order(lat):
    one = Quat.one(lat.alg)
    if one not in lat:
        return False
    basis = lat.basis()
    for x in basis:
        if x.trd().denominator != 1 or x.nrd().denominator != 1:
            return False
        for y in basis:
            if x * y not in lat:
                return False
    return True


def units(order):
    """All elements of reduced norm 1 (comes in +/- pairs)."""
    return order.norm_vectors(1)


def unit_order(order):
    """#(units / {+-1})."""
    return len(units(order)) // 2


def make_algebra(q, a=None):
    """Quaternion algebra ramified exactly at {q, infinity}.

    For q = 3 mod 4 the model is (a, b) = (1, q); other residues get the
    smallest a with the right ramification.  Passing ``a`` forces a specific
    model (used to exercise model independence).
    """
    if not is_prime(q) or q < 5:
        raise ValueError(f"q must be a prime >= 5, got {q}")
    if a is None:
        if q % 4 == 3:
            a = 1
        else:
            a = next(c for c in range(1, 500) if ramified_primes(-c, -q) == [q])
    alg = QuaternionAlgebra(q=q, a=a, b=q)
    if ramified_primes(-a, -q) != [q]:
        raise ValueError(f"(-{a}, -{q}) is not ramified exactly at {{{q}, oo}}")
    return alg


def _ring_closure(lat):
    """Smallest multiplicatively closed lattice containing lat, or None if
    trace/norm integrality breaks along the way."""
    cur = lat
    for _ in range(16):
        for x in cur.basis():
            if x.trd().denominator != 1 or x.nrd().denominator != 1:
                return None
        nxt = cur.add(cur.mul(cur))
        if nxt == cur:
            return cur
        cur = nxt
    return None


def _line_reps(ell):
    """Canonical representatives of lines in F_ell^4 (first nonzero entry 1)."""
    reps = []
    for lead in range(4):
        tail = 4 - lead - 1
        count = ell ** tail
        for n in range(count):
            v = [0] * 4
            v[lead] = 1
            m = n
            for t in range(tail):
                v[lead + 1 + t] = m % ell
                m //= ell
            reps.append(tuple(v))
    return reps


def maximal_order(alg):
    """A maximal order (reduced discriminant q) in the algebra.

    For the main model (1, q) with q = 3 mod 4 this is the classical order
    with basis 1, i, (1+j)/2, (i+k)/2; any other model is maximalized by
    saturation from the obvious order Z<1,i,j,k>.
    """
    q = alg.q
    if alg.a == 1 and alg.b == q and q % 4 == 3:
        rows = [(2, 0, 0, 0), (0, 2, 0, 0), (1, 0, 1, 0), (0, 1, 0, 1)]
        order = Lattice.from_int_rows(alg, rows, 2)
        if reduced_discriminant(order) != q:
            raise ArithmeticError("classical maximal order has wrong discriminant")
        return order
    order = Lattice.from_int_rows(
        alg, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)], 1)
    d = reduced_discriminant(order)
    while d != q:
        if d % q:
            raise ArithmeticError("discriminant lost divisibility by q")
        m = d // q
        ell = next(p for p in range(2, m + 1) if m % p == 0 and is_prime(p))
        enlarged = None
        basis = order.basis()
        for c in _line_reps(ell):
            x = sum((cr * br for cr, br in zip(c, basis) if cr),
                    Quat(alg, (0, 0, 0, 0))) / ell
            if x.trd().denominator != 1 or x.nrd().denominator != 1:
                continue
            cand = _ring_closure(order.add_elem(x))
            if cand is None or cand == order:
                continue
            if is_order(cand):
                enlarged = cand
                break
        if enlarged is None:
            raise ArithmeticError(f"cannot enlarge order at {ell}")
        order = enlarged
        d = reduced_discriminant(order)
    return order


# -- ideals -------------------------------------------------------------------

def ideal_norm(ideal, order):
    """Reduced norm via nrd(I)^2 = [O : I] (generalized index)."""
    n = frac_sqrt(ideal.index_in(order))
    if n is None:
        raise ArithmeticError("ideal index is not a perfect square")
    return n


def reduce_ideal(ideal, order):
    """(J, z) with J = I*z in the same left class and small reduced norm."""
    n = ideal_norm(ideal, order)
    _, vecs = ideal.min_vectors()
    x = vecs[0]
    z = x.conj() / n
    return ideal.mul_elem(z), z


def equiv_witness(i1, i2, order, n1=None, n2=None):
    """x with i2 = i1 * x if the left O-ideal classes agree, else None."""
    if n1 is None:
        n1 = ideal_norm(i1, order)
    if n2 is None:
        n2 = ideal_norm(i2, order)
    t = i1.conj_lattice().mul(i2)
    x = t.find_norm_vector(n1 * n2)
    if x is None:
        return None
    return x / n1


def is_equivalent(i1, i2, order):
    """Same left ideal class of the given order."""
    return equiv_witness(i1, i2, order) is not None


def two_sided_prime(order, q):
    """The unique two-sided ideal of reduced norm q of a maximal order.

    Taken as the radical of the trace pairing mod q lifted back to the
    lattice, plus q*O; its index in O is q^2.
    """
    basis = order.basis()
    t = [[_as_int((x * y).trd()) for y in basis] for x in basis]
    ker = kernel_mod_p(t, q)
    if len(ker) != 2:
        raise ArithmeticError("radical mod q does not have dimension 2")
    rows = [tuple(sum(c[r] * order.rows[r][m] for r in range(4)) for m in range(4))
            for c in ker]
    rows += [tuple(q * x for x in r) for r in order.rows]
    ideal = Lattice.from_int_rows(order.alg, rows, order.den)
    if ideal.index_in(order) != q * q:
        raise ArithmeticError("two-sided ideal has wrong index")
    return ideal


def _as_int(f):
    f = Fraction(f)
    if f.denominator != 1:
        raise ArithmeticError("expected an integer, got " + str(f))
    return int(f)


def norm_ideals(order, ell):
    """The ell+1 left ideals of reduced norm ell of a (locally) maximal order.

    Splits O/ell O = M_2(F_ell) by an explicit rank-one idempotent; the
    ideals are O*x + O*ell for the ell+1 one-dimensional row spaces.
    """
    alg = order.alg
    if alg.q % ell == 0:
        raise ValueError("ell must not divide q (ramified case not supported)")
    if not is_prime(ell):
        raise ValueError("ell must be prime")
    basis = order.basis()
    minv = mat_inv_frac(order.frac_rows())
    one = _int_vec(mat_mul_frac([[Fraction(1), 0, 0, 0]], minv)[0])
    gamma = [[_int_vec(mat_mul_frac([[Fraction(x, b1.den * b2.den) for x in
                                      alg.mul4(b1.num, b2.num)]], minv)[0])
              for b2 in basis] for b1 in basis]
    trd_b = [_as_int(b.trd()) for b in basis]
    gram = order.gram()
    den2 = order.den ** 2

    def mul_mod(c1, c2):
        out = [0, 0, 0, 0]
        for r in range(4):
            if c1[r] % ell == 0:
                continue
            for s in range(4):
                if c2[s] % ell == 0:
                    continue
                grs = gamma[r][s]
                f = c1[r] * c2[s]
                for m in range(4):
                    out[m] += f * grs[m]
        return tuple(x % ell for x in out)

    def nrd_mod(c):
        val = sum(gram[r][s] * c[r] * c[s] for r in range(4) for s in range(4))
        assert val % den2 == 0
        return (val // den2) % ell

    def trd_mod(c):
        return sum(trd_b[r] * c[r] for r in range(4)) % ell

    # find an element whose characteristic polynomial splits mod ell
    e = None
    for c in _coeff_sweep(ell):
        t = trd_mod(c)
        n = nrd_mod(c)
        if ell == 2:
            if t % 2 == 1 and n % 2 == 0:
                lam1, lam2 = 1, 0
            else:
                continue
        else:
            disc = (t * t - 4 * n) % ell
            if disc == 0:
                continue
            s = mod_sqrt(disc, ell)
            if s is None:
                continue
            inv2 = pow(2, -1, ell)
            lam1, lam2 = (t + s) * inv2 % ell, (t - s) * inv2 % ell
        dinv = pow((lam1 - lam2) % ell, -1, ell)
        e = tuple((x - lam2 * o) * dinv % ell for x, o in zip(c, one))
        if mul_mod(e, e) != e:
            raise ArithmeticError("idempotent construction failed")
        break
    if e is None:
        raise ArithmeticError("no split element found mod ell")
    one_minus_e = tuple((o - x) % ell for o, x in zip(one, e))
    f = None
    for r in range(4):
        g = tuple(int(m == r) for m in range(4))
        cand = mul_mod(mul_mod(e, g), one_minus_e)
        if any(cand):
            f = cand
            break
    if f is None:
        raise ArithmeticError("no off-diagonal unit found")
    gens = [tuple((e[m] + c * f[m]) % ell for m in range(4)) for c in range(ell)]
    gens.append(one_minus_e)
    ideals = []
    seen = set()
    for gvec in gens:
        xnum = tuple(sum(gvec[r] * order.rows[r][m] for r in range(4)) for m in range(4))
        rows = [alg.mul4(r, xnum) for r in order.rows]
        rows += [tuple(ell * order.den * x for x in r) for r in order.rows]
        ideal = Lattice.from_int_rows(alg, rows, order.den ** 2)
        if ideal.key() in seen:
            raise ArithmeticError("norm-ell ideals collided")
        seen.add(ideal.key())
        if ideal.index_in(order) != ell * ell:
            raise ArithmeticError("norm-ell ideal has wrong index")
        ideals.append(ideal)
    ideals.sort(key=lambda l2: l2.key())
    return ideals


def norm_ideals_exhaustive(order, ell):
    """Brute-force oracle: all index-ell^2 left submodules with O*P <= P,
    P >= ell*O, of reduced norm ell.  Cost O(ell^4); test use only."""
    alg = order.alg
    minv = mat_inv_frac(order.frac_rows())
    basis = order.basis()
    gamma = [[_int_vec(mat_mul_frac([[Fraction(x, b1.den * b2.den) for x in
                                      alg.mul4(b1.num, b2.num)]], minv)[0])
              for b2 in basis] for b1 in basis]

    def mul_mod(c1, c2):
        out = [0, 0, 0, 0]
        for r in range(4):
            for s in range(4):
                f = c1[r] * c2[s]
                if f:
                    grs = gamma[r][s]
                    for m in range(4):
                        out[m] += f * grs[m]
        return tuple(x % ell for x in out)

    def rref2(vecs):
        m = [list(v) for v in vecs]
        r = 0
        for col in range(4):
            piv = next((i for i in range(r, len(m)) if m[i][col] % ell), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = pow(m[r][col], -1, ell)
            m[r] = [x * inv % ell for x in m[r]]
            for i in range(len(m)):
                if i != r and m[i][col] % ell:
                    f = m[i][col]
                    m[i] = [(x - f * y) % ell for x, y in zip(m[i], m[r])]
            r += 1
        return tuple(tuple(row) for row in m[:r])

    found = set()
    # all 2-dimensional subspaces via (canonical line, second vector) pairs
    vecs = [tuple((n // ell ** i) % ell for i in range(4)) for n in range(ell ** 4)]
    for v1 in _line_reps(ell):
        for v2 in vecs:
            key = rref2([v1, v2])
            if len(key) != 2 or key in found:
                continue
            span = {tuple((a * u + b * w) % ell for u, w in zip(key[0], key[1]))
                    for a in range(ell) for b in range(ell)}
            ok = True
            for gvec in (tuple(int(m == r) for m in range(4)) for r in range(4)):
                for v in key:
                    if mul_mod(gvec, v) not in span:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                found.add(key)
    ideals = []
    for key in found:
        rows = [tuple(sum(v[r] * order.rows[r][m] for r in range(4)) for m in range(4))
                for v in key]
        rows += [tuple(ell * x for x in r) for r in order.rows]
        ideal = Lattice.from_int_rows(alg, rows, order.den)
        if ideal.index_in(order) == ell * ell and ideal_norm(ideal, order) == ell:
            ideals.append(ideal)
    ideals.sort(key=lambda l2: l2.key())
    return ideals


def _coeff_sweep(ell):
    for n in range(1, ell ** 4):
        yield tuple((n // ell ** i) % ell for i in range(4))


def _int_vec(frac_row):
    out = []
    for x in frac_row:
        f = Fraction(x)
        if f.denominator != 1:
            raise ArithmeticError("expected integral coordinates")
        out.append(int(f))
    return tuple(out)


def short_vectors(lat, t, n):
    """All x in the lattice with trd(x) = t and nrd(x) = n."""
    return lat.norm_vectors(n, trace=Fraction(t))
