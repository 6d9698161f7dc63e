"""Dual graph of the special fiber at p of the Shimura curve of discriminant pq.

Vertices are left ideal classes of a fixed maximal order in the definite
quaternion algebra ramified at {q, oo} (equivalently supersingular curves
over F_{q^2}); edges are unit-conjugation orbits of norm-p left ideals of the
right orders (equivalently p-isogenies).  The two Atkin-Lehner involutions
act by dual-isogeny reversal (w_p, with a sign) and by Frobenius transport
through the two-sided norm-q ideal (w_q).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .ntheory import is_prime
from .quat import (
    Lattice,
    Quat,
    equiv_witness,
    ideal_norm,
    lattice_intersection,
    make_algebra,
    maximal_order,
    norm_ideals,
    reduce_ideal,
    reduced_discriminant,
    right_order,
    two_sided_prime,
    unit_order,
    units,
)


@dataclass
class VertexClass:
    ideal: Lattice
    right_order: Lattice
    weight: int
    norm: Fraction
    fingerprint: tuple
    rational: bool = False


def _fingerprint(ideal, norm):
    """Counts of lattice vectors of reduced norm k*nrd(I), k = 1, 2, 3.

    The normalized norm form is a left-class invariant, so this is a cheap
    pre-filter before the short-vector equivalence test.
    """
    target = 3 * norm * ideal.den ** 2
    counts = [0, 0, 0]
    unit = norm * ideal.den ** 2
    for _, val in ideal._enum_form(int(target), upto=True):
        r = val / unit
        if r.denominator == 1 and 1 <= r <= 3:
            counts[int(r) - 1] += 1
    return tuple(counts)


class VertexSet:
    """Ideal classes of the fixed maximal order, canonically ordered."""

    def __init__(self, q, alg, order, classes, wq_perm, wq_witnesses, two_sided):
        self.q = q
        self.alg = alg
        self.order = order
        self.classes = classes
        self.wq_perm = wq_perm
        self.wq_witnesses = wq_witnesses
        self.two_sided = two_sided  # per class: two-sided norm-q ideal of R_k
        self._units = {}

    def __len__(self):
        return len(self.classes)

    @property
    def weights(self):
        return [c.weight for c in self.classes]

    def mass(self):
        return sum(Fraction(1, c.weight) for c in self.classes)

    def units_of(self, k):
        if k not in self._units:
            self._units[k] = units(self.classes[k].right_order)
        return self._units[k]

    def rational_count(self):
        return sum(1 for c in self.classes if c.rational)

    def locate(self, ideal):
        """Class index and witness y with ideal = I_k * y (ideal must be a
        left ideal of the base order)."""
        reduced, z = reduce_ideal(ideal, self.order)
        nr = ideal_norm(reduced, self.order)
        fp = _fingerprint(reduced, nr)
        for k, rec in enumerate(self.classes):
            if rec.fingerprint != fp:
                continue
            w = equiv_witness(rec.ideal, reduced, self.order, n1=rec.norm, n2=nr)
            if w is not None:
                return k, w * z.inv()
        raise ArithmeticError("ideal does not match any class (class set incomplete?)")


def _class_record(ideal, order):
    ro = right_order(ideal)
    w = unit_order(ro)
    n = ideal_norm(ideal, order)
    return VertexClass(ideal=ideal, right_order=ro, weight=w, norm=n,
                       fingerprint=_fingerprint(ideal, n))


def vertex_classes(q, alg=None):
    """All left ideal classes of a maximal order, by 2-neighbor search.

    Connectivity of the norm-2 step graph follows from strong approximation;
    completeness is independently certified by the Eichler mass formula
    closing exactly (a hard error otherwise).
    """
    if not is_prime(q) or q < 5:
        raise ValueError(f"q must be a prime >= 5, got {q}")
    alg = alg or make_algebra(q)
    order = maximal_order(alg)
    recs = [_class_record(order, order)]
    queue = [0]
    while queue:
        k = queue.pop(0)
        for p2 in norm_ideals(recs[k].right_order, 2):
            j = recs[k].ideal.mul(p2)
            jr, _ = reduce_ideal(j, order)
            njr = ideal_norm(jr, order)
            fp = _fingerprint(jr, njr)
            hit = False
            for rec in recs:
                if rec.fingerprint == fp and equiv_witness(
                        rec.ideal, jr, order, n1=rec.norm, n2=njr) is not None:
                    hit = True
                    break
            if not hit:
                recs.append(_class_record(jr, order))
                queue.append(len(recs) - 1)
    mass = sum(Fraction(1, r.weight) for r in recs)
    if mass != Fraction(q - 1, 12):
        raise ArithmeticError(f"mass formula violated: {mass} != ({q}-1)/12")
    recs.sort(key=lambda r: (-r.weight, r.ideal.key()))
    vset = VertexSet(q, alg, order, recs, None, None, None)
    _attach_wq(vset)
    return vset


def _attach_wq(vset):
    order = vset.order
    q = vset.q
    nclasses = len(vset.classes)
    perm = [None] * nclasses
    witnesses = [None] * nclasses
    two_sided = []
    for k, rec in enumerate(vset.classes):
        ts = two_sided_prime(rec.right_order, q)
        two_sided.append(ts)
        t, y = vset.locate(rec.ideal.mul(ts))
        perm[k] = t
        witnesses[k] = y
    for k, t in enumerate(perm):
        if perm[t] != k:
            raise ArithmeticError("w_q is not an involution on vertices")
    vset.wq_perm = perm
    vset.wq_witnesses = witnesses
    vset.two_sided = two_sided
    for k, rec in enumerate(vset.classes):
        rec.rational = perm[k] == k


@dataclass
class Edge:
    source: int
    ideal: Lattice
    orbit: tuple
    eichler: Lattice
    length: int
    target: int
    witness: Quat


class ShimuraGraph:
    """Vertices, oriented edges, and the two Atkin-Lehner actions."""

    def __init__(self, p, q, vset, edges):
        self.p = p
        self.q = q
        self.vset = vset
        self.edges = edges
        self._edge_lookup = {}
        for i, e in enumerate(edges):
            for member in e.orbit:
                self._edge_lookup[(e.source, member.key())] = i
        self.wp_perm = None
        self.wq_edge_perm = None
        self._neighbors = {}
        self._brandt_v = {}
        self._brandt_e = {}

    def __len__(self):
        return len(self.edges)

    @property
    def lengths(self):
        return [e.length for e in self.edges]

    def edge_mass(self):
        return sum(Fraction(1, e.length) for e in self.edges)

    def s_map(self, i):
        return self.edges[i].source

    def t_map(self, i):
        return self.edges[i].target

    def locate_edge(self, vertex, ideal):
        key = (vertex, ideal.key())
        if key not in self._edge_lookup:
            raise ArithmeticError("edge lattice not found at vertex")
        return self._edge_lookup[key]

    # -- vertex-level Hecke neighbors, cached ------------------------------
    def vertex_neighbors(self, k, ell):
        """List of (norm-ell ideal L of R_k, target class m, witness z) with
        I_k * L = I_m * z."""
        if (k, ell) not in self._neighbors:
            rec = self.vset.classes[k]
            out = []
            for lam in norm_ideals(rec.right_order, ell):
                j = rec.ideal.mul(lam)
                m, z = self.vset.locate(j)
                out.append((lam, m, z))
            self._neighbors[(k, ell)] = out
        return self._neighbors[(k, ell)]

    def brandt_vertices(self, ell):
        if ell not in self._brandt_v:
            n = len(self.vset)
            mat = [[0] * n for _ in range(n)]
            for k in range(n):
                for _, m, _ in self.vertex_neighbors(k, ell):
                    mat[k][m] += 1
            self._brandt_v[ell] = mat
        return self._brandt_v[ell]

    def brandt_edges(self, ell):
        if ell not in self._brandt_e:
            n = len(self.edges)
            mat = [[0] * n for _ in range(n)]
            inv_ell = Fraction(1, ell)
            for i, e in enumerate(self.edges):
                for lam, m, z in self.vertex_neighbors(e.source, ell):
                    pushed = lam.conj_lattice().scale(inv_ell).mul(
                        lattice_intersection(lam, e.ideal)).conj_by(z)
                    mat[i][self.locate_edge(m, pushed)] += 1
            self._brandt_e[ell] = mat
        return self._brandt_e[ell]


def _orbit_partition(ideals, unit_list):
    remaining = {ideal.key(): ideal for ideal in ideals}
    orbits = []
    while remaining:
        key0 = min(remaining)
        seed = remaining.pop(key0)
        members = {key0: seed}
        for u in unit_list:
            conj = seed.conj_by(u)
            members.setdefault(conj.key(), conj)
        for k in members:
            remaining.pop(k, None)
        orbits.append([members[k] for k in sorted(members)])
    return orbits


def build_graph(p, q, alg=None, vset=None):
    """The full dual graph for the pair (p, q), edges oriented S1 -> S2."""
    if p == q:
        raise ValueError("p and q must be distinct")
    for v in (p, q):
        if not is_prime(v) or v < 5:
            raise ValueError(f"{v} is not a prime >= 5")
    if vset is None:
        vset = vertex_classes(q, alg)
    order = vset.order
    edges = []
    for k, rec in enumerate(vset.classes):
        unit_list = vset.units_of(k)
        orbits = _orbit_partition(norm_ideals(rec.right_order, p), unit_list)
        total = sum(len(o) for o in orbits)
        if total != p + 1:
            raise ArithmeticError("orbits do not cover the p+1 ideals")
        for orbit in orbits:
            rep = orbit[0]
            eich = lattice_intersection(rec.right_order, right_order(rep))
            length = unit_order(eich)
            if length * len(orbit) != rec.weight:
                raise ArithmeticError("orbit-stabilizer mismatch at a vertex")
            if reduced_discriminant(eich) != p * q:
                raise ArithmeticError("edge order does not have discriminant pq")
            t, y = vset.locate(rec.ideal.mul(rep))
            edges.append(Edge(source=k, ideal=rep, orbit=tuple(orbit),
                              eichler=eich, length=length, target=t, witness=y))
    edges.sort(key=lambda e: (e.source, e.ideal.key()))
    graph = ShimuraGraph(p, q, vset, edges)
    _attach_wp(graph)
    _attach_wq_edges(graph)
    return graph


def _attach_wp(graph):
    """Dual-isogeny involution: e = (k, P) goes to the edge at t(e) with
    ideal y conj(P) y^{-1}; as a path operator it carries a global -1 sign."""
    perm = []
    for e in graph.edges:
        dual = e.ideal.conj_lattice().conj_by(e.witness)
        perm.append(graph.locate_edge(e.target, dual))
    for i, j in enumerate(perm):
        if perm[j] != i:
            raise ArithmeticError("w_p is not an involution on edges")
        if graph.edges[j].source != graph.edges[i].target:
            raise ArithmeticError("w_p does not swap source and target")
        if graph.edges[j].length != graph.edges[i].length:
            raise ArithmeticError("w_p does not preserve lengths")
    graph.wp_perm = perm


def _attach_wq_edges(graph):
    """Frobenius on edges: conjugate the subgroup ideal by the vertex
    witness y (with I_k * Q = I_sigma(k) * y).  Since y lies in the
    two-sided norm-q ideal, this conjugation is the Frobenius transport; at
    a fixed vertex it swaps the eigen-ideals of the extra automorphisms."""
    vset = graph.vset
    perm = []
    for e in graph.edges:
        k = e.source
        moved = e.ideal.conj_by(vset.wq_witnesses[k])
        perm.append(graph.locate_edge(vset.wq_perm[k], moved))
    for i, j in enumerate(perm):
        if perm[j] != i:
            raise ArithmeticError("w_q is not an involution on edges")
        if graph.edges[j].length != graph.edges[i].length:
            raise ArithmeticError("w_q does not preserve lengths")
        if graph.edges[j].target != vset.wq_perm[graph.edges[i].target]:
            raise ArithmeticError("w_q does not commute with the target map")
    graph.wq_edge_perm = perm


def brandt_matrix(graph, ell, level="vertices"):
    """Integer matrix of the ell-th Hecke operator; row sums are ell+1.

    Row index is the source: entry [k][t] counts norm-ell steps from k
    landing at t.
    """
    if not is_prime(ell):
        raise ValueError("ell must be prime")
    if graph.p % ell == 0 or graph.q % ell == 0:
        raise ValueError("ell must be coprime to pq")
    if level == "vertices":
        return [row[:] for row in graph.brandt_vertices(ell)]
    if level == "edges":
        return [row[:] for row in graph.brandt_edges(ell)]
    raise ValueError("level must be 'vertices' or 'edges'")


# -- independent supersingular count -------------------------------------------

def _fq2_ops(q):
    d = next(x for x in range(2, q) if pow(x, (q - 1) // 2, q) == q - 1)

    def mul(x, y):
        u1, v1 = x
        u2, v2 = y
        return ((u1 * u2 + d * v1 * v2) % q, (u1 * v2 + u2 * v1) % q)

    def inv(x):
        u, v = x
        n = (u * u - d * v * v) % q
        ninv = pow(n, -1, q)
        return (u * ninv % q, (-v) * ninv % q)

    return mul, inv


def ss_oracle(q):
    """(number of supersingular j-invariants, number of F_q-rational ones).

    Roots of the Hasse polynomial sum C(m,i)^2 x^i (m = (q-1)/2) over F_{q^2}
    are the supersingular Legendre parameters; they map to j-invariants by
    j = 256 (x^2-x+1)^3 / (x^2 (x-1)^2).  Entirely independent of the
    quaternion machinery.
    """
    if not is_prime(q) or q < 5:
        raise ValueError(f"q must be a prime >= 5, got {q}")
    m = (q - 1) // 2
    coeffs = [comb(m, i) ** 2 % q for i in range(m + 1)]
    coeffs.reverse()  # Horner from the top degree
    mul, inv = _fq2_ops(q)

    def hasse(lam):
        acc = (0, 0)
        for c in coeffs:
            acc = mul(acc, lam)
            acc = ((acc[0] + c) % q, acc[1])
        return acc

    roots = []
    for u in range(q):
        if hasse((u, 0)) == (0, 0):
            roots.append((u, 0))
    for v in range(1, (q - 1) // 2 + 1):
        for u in range(q):
            lam = (u, v)
            if hasse(lam) == (0, 0):
                roots.append(lam)
                roots.append((u, (q - v) % q))
    jset = set()
    for lam in roots:
        lam2 = mul(lam, lam)
        num = ((lam2[0] - lam[0] + 1) % q, (lam2[1] - lam[1]) % q)
        num3 = mul(mul(num, num), num)
        den = mul(lam2, ((lam[0] - 1) % q, lam[1]))
        den = mul(den, ((lam[0] - 1) % q, lam[1]))
        j = mul(((256 % q) * num3[0] % q, (256 % q) * num3[1] % q), inv(den))
        jset.add(j)
    rational = sum(1 for j in jset if j[1] == 0)
    return len(jset), rational
