"""Finitely generated abelian groups and the forms that live on them.

Groups are Z^r x Z_m1 x ... x Z_ms with additive coordinate tuples
(free coordinates first, torsion coordinates reduced into [0, m_i)).
Degrees of every grading in the workbench are elements of such a group;
the distinguished grading group Z x G is formed by prepending one free
coordinate (helpers at the bottom).

Bicharacters are stored as full exponent tables over the (finite)
domain subgroup: beta(t1, t2) = zeta_M^table[t1, t2] where M is the
exponent of the domain.  That makes equality of two bicharacters a
plain table comparison regardless of which generators either side was
built from.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .scalars import CycloField, Scalar


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class AbelianGroup:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0 or any(m < 2 for m in self.torsion):
            raise GroupError("free rank must be >= 0 and torsion orders >= 2")

    @property
    def ncoords(self) -> int:
        return self.free_rank + len(self.torsion)

    def element(self, coords) -> "GroupElement":
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.ncoords:
            raise GroupError(f"expected {self.ncoords} coordinates, got {len(coords)}")
        reduced = list(coords)
        for k, m in enumerate(self.torsion):
            reduced[self.free_rank + k] %= m
        return GroupElement(self, tuple(reduced))

    @property
    def identity(self) -> "GroupElement":
        return self.element((0,) * self.ncoords)

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def elements(self) -> list["GroupElement"]:
        if not self.is_finite():
            raise GroupError("cannot enumerate an infinite group")
        out = [()]
        for m in self.torsion:
            out = [t + (k,) for t in out for k in range(m)]
        return [GroupElement(self, t) for t in sorted(out)]

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{m}" for m in self.torsion]
        return " x ".join(parts) if parts else "1"


@dataclass(frozen=True)
class GroupElement:
    group: AbelianGroup
    coords: tuple[int, ...]

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if other.group != self.group:
            raise GroupError("elements of different groups")
        return self.group.element(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return self.group.element(tuple(-a for a in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def scaled(self, n: int) -> "GroupElement":
        return self.group.element(tuple(n * a for a in self.coords))

    def is_identity(self) -> bool:
        return all(c == 0 for c in self.coords)

    def order(self):
        """Multiplicative order; None if infinite (nonzero free part)."""
        if any(self.coords[: self.group.free_rank]):
            return None
        n = 1
        for k, m in enumerate(self.group.torsion):
            c = self.coords[self.group.free_rank + k]
            if c:
                o = m // gcd(m, c)
                n = n * o // gcd(n, o)
        return n

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"


class Subgroup:
    """A finite subgroup given by generators, eagerly enumerated.

    Enumeration is rejected above 2**16 elements; every construction in
    the workbench needs tiny finite supports anyway.
    """

    MAX_SIZE = 1 << 16

    def __init__(self, group: AbelianGroup, generators):
        self.group = group
        self.generators = tuple(generators)
        for g in self.generators:
            if g.group != group:
                raise GroupError("generator outside parent group")
            if g.order() is None:
                raise GroupError("subgroup must be finite")
        elems = {group.identity}
        frontier = [group.identity]
        while frontier:
            cur = frontier.pop()
            for g in self.generators:
                nxt = cur + g
                if nxt not in elems:
                    if len(elems) >= self.MAX_SIZE:
                        raise GroupError("subgroup enumeration exceeds 2^16 elements")
                    elems.add(nxt)
                    frontier.append(nxt)
        self.elements = tuple(sorted(elems, key=lambda e: e.coords))
        self._index = {e: i for i, e in enumerate(self.elements)}

    def __contains__(self, e: GroupElement) -> bool:
        return e in self._index

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and other.group == self.group
                and set(other.elements) == set(self.elements))

    def __hash__(self):
        return hash((self.group, self.elements))

    def index_of(self, e: GroupElement) -> int:
        return self._index[e]

    def is_elementary_2(self) -> bool:
        return all(e.order() in (1, 2) for e in self.elements)

    def coset_rep(self, g: GroupElement) -> GroupElement:
        """Lexicographically smallest representative of g + T."""
        return min((g + t for t in self.elements), key=lambda e: e.coords)

    def basis(self) -> list[GroupElement]:
        """A minimal generating set (greedy, deterministic)."""
        chosen: list[GroupElement] = []
        span = {self.group.identity}
        for e in sorted(self.elements, key=lambda x: (-(x.order() or 0), x.coords)):
            if e in span:
                continue
            chosen.append(e)
            span = {a + b for a in span for b in _cyclic(e)}
            if len(span) == len(self.elements):
                break
        return chosen

    def extended_by(self, t: GroupElement) -> "Subgroup":
        return Subgroup(self.group, self.generators + (t,))

    def __str__(self):
        return "<" + ", ".join(str(g) for g in self.generators) + ">"


def _cyclic(e: GroupElement) -> list[GroupElement]:
    out, cur = [e.group.identity], e
    while not cur.is_identity():
        out.append(cur)
        cur = cur + e
    return out


def trivial_subgroup(group: AbelianGroup) -> Subgroup:
    return Subgroup(group, ())


# ---------------------------------------------------------------------------
# bicharacters and quadratic forms
# ---------------------------------------------------------------------------

class Bicharacter:
    """A map T x T -> roots of unity, multiplicative in each slot.

    Stored as the full exponent table over the enumerated domain:
    beta(t1, t2) = zeta_M^k with M the exponent of T.  Construction
    from a generator matrix checks that the generators form a basis,
    which forces multiplicativity of the extension.
    """

    def __init__(self, domain: Subgroup, exponent: int, table: dict):
        self.domain = domain
        self.exponent = exponent       # M: all values are powers of zeta_M
        self.table = table             # (t1, t2) -> int mod M

    @staticmethod
    def from_generator_matrix(domain: Subgroup, gens, matrix) -> "Bicharacter":
        """matrix[i][j] = k_ij with beta(gen_i, gen_j) = zeta_(o_ij)^(k_ij),
        o_ij = gcd(ord gen_i, ord gen_j)."""
        gens = tuple(gens)
        orders = [g.order() for g in gens]
        size = 1
        for o in orders:
            size *= o
        if size != len(domain):
            raise GroupError("bicharacter generators must form a basis of the domain")
        M = 1
        for o in orders:
            M = M * o // gcd(M, o)
        M = max(M, 1)
        # exponent coordinates of every element over the generator basis
        coords = {}
        def rec(i, cur, vec):
            if i == len(gens):
                coords[cur] = tuple(vec)
                return
            e = domain.group.identity
            for k in range(orders[i]):
                rec(i + 1, cur + e, vec + [k])
                e = e + gens[i]
        rec(0, domain.group.identity, [])
        if len(coords) != len(domain):
            raise GroupError("generator exponents do not enumerate the domain")
        kmat = [[(matrix[i][j] * (M // gcd(orders[i], orders[j]))) % M
                 for j in range(len(gens))] for i in range(len(gens))]
        table = {}
        for t1 in domain.elements:
            v1 = coords[t1]
            for t2 in domain.elements:
                v2 = coords[t2]
                k = 0
                for i, a in enumerate(v1):
                    if a:
                        for j, b in enumerate(v2):
                            if b:
                                k += a * b * kmat[i][j]
                table[(t1, t2)] = k % M
        return Bicharacter(domain, M, table)

    @staticmethod
    def from_sign_table(domain: Subgroup, signs: dict) -> "Bicharacter":
        """Build a {+1,-1}-valued bicharacter from a full sign table,
        checking multiplicativity in each slot."""
        table = {}
        for t1 in domain.elements:
            for t2 in domain.elements:
                s = signs[(t1, t2)]
                if s not in (1, -1):
                    raise GroupError("sign table values must be +-1")
                table[(t1, t2)] = 0 if s == 1 else 1
        bc = Bicharacter(domain, 2, table)
        if not bc.is_multiplicative():
            raise GroupError("sign table is not multiplicative in each slot")
        return bc

    def exponent_of(self, t1: GroupElement, t2: GroupElement) -> int:
        key = (t1, t2)
        if key not in self.table:
            raise GroupError(f"element {t1} or {t2} outside the bicharacter domain")
        return self.table[key]

    def eval(self, t1: GroupElement, t2: GroupElement, field: CycloField) -> Scalar:
        return field.zeta(self.exponent, self.exponent_of(t1, t2))

    def is_multiplicative(self) -> bool:
        els = self.domain.elements
        for a in els:
            for b in els:
                ab = a + b
                for c in els:
                    if (self.table[(ab, c)] - self.table[(a, c)] - self.table[(b, c)]) % self.exponent:
                        return False
                    if (self.table[(c, ab)] - self.table[(c, a)] - self.table[(c, b)]) % self.exponent:
                        return False
        return True

    def is_alternating(self) -> bool:
        return all(self.table[(t, t)] % self.exponent == 0 for t in self.domain.elements)

    def radical(self) -> list[GroupElement]:
        return [t for t in self.domain.elements
                if all(self.table[(t, s)] % self.exponent == 0 for s in self.domain.elements)]

    def is_nondegenerate_alternating(self) -> bool:
        return self.is_alternating() and len(self.radical()) == 1

    def restrict(self, sub: Subgroup) -> "Bicharacter":
        table = {(a, b): self.table[(a, b)] for a in sub.elements for b in sub.elements}
        return Bicharacter(sub, self.exponent, table)

    def swapped(self) -> "Bicharacter":
        """beta o ex, i.e. (t1, t2) -> beta(t2, t1)."""
        return Bicharacter(self.domain, self.exponent,
                           {(a, b): self.table[(b, a)] for (a, b) in self.table})

    def __eq__(self, other):
        if not isinstance(other, Bicharacter):
            return NotImplemented
        if set(self.domain.elements) != set(other.domain.elements):
            return False
        # compare values, not raw exponents (exponents may use different M)
        lcm = self.exponent * other.exponent // gcd(self.exponent, other.exponent)
        for key, k in self.table.items():
            if (k * (lcm // self.exponent)) % lcm != (other.table[key] * (lcm // other.exponent)) % lcm:
                return False
        return True

    def __hash__(self):
        return hash(frozenset(
            ((a.coords, b.coords), k % self.exponent) for (a, b), k in self.table.items()))


class QuadraticForm:
    """A sign-valued form tau on an elementary 2-group with tau(e) = 1 whose
    polar form tau(t1+t2)tau(t1)tau(t2) is a bicharacter."""

    def __init__(self, domain: Subgroup, values: dict, check: bool = True):
        self.domain = domain
        self.values = {t: int(values[t]) for t in domain.elements}
        if check:
            if not domain.is_elementary_2():
                raise GroupError("quadratic form domain must be an elementary 2-group")
            if self.values[domain.group.identity] != 1:
                raise GroupError("quadratic form must send the identity to +1")
            if any(v not in (1, -1) for v in self.values.values()):
                raise GroupError("quadratic form values must be +-1")
            self.polar_form()   # raises if the polar form is not multiplicative

    def __call__(self, t: GroupElement) -> int:
        if t not in self.values:
            raise GroupError(f"element {t} outside the quadratic form domain")
        return self.values[t]

    def polar_form(self) -> Bicharacter:
        signs = {}
        for t1 in self.domain.elements:
            for t2 in self.domain.elements:
                signs[(t1, t2)] = self(t1 + t2) * self(t1) * self(t2)
        return Bicharacter.from_sign_table(self.domain, signs)

    def extend(self, t: GroupElement) -> "QuadraticForm":
        """tau^[t] on T<t>: u + k*t  ->  tau(u) * (-1)^k."""
        if t in self.domain:
            raise GroupError("extension element already lies in the domain")
        if t.order() != 2:
            raise GroupError("extension element must have order 2")
        big = self.domain.extended_by(t)
        values = {}
        for u in self.domain.elements:
            values[u] = self(u)
            values[u + t] = -self(u)
        return QuadraticForm(big, values)

    def __eq__(self, other):
        if not isinstance(other, QuadraticForm):
            return NotImplemented
        return (set(self.domain.elements) == set(other.domain.elements)
                and all(self.values[t] == other.values[t] for t in self.values))

    def __hash__(self):
        return hash(frozenset((t.coords, v) for t, v in self.values.items()))


def extend_bicharacter(beta: Bicharacter, t: GroupElement) -> Bicharacter:
    """beta^[t] on T<t>: (u + k1*t, v + k2*t) -> beta(u, v); t lands in the radical."""
    if t in beta.domain:
        raise GroupError("extension element already lies in the domain")
    if t.order() != 2:
        raise GroupError("extension element must have order 2")
    big = beta.domain.extended_by(t)
    table = {}
    for u in beta.domain.elements:
        for v in beta.domain.elements:
            k = beta.table[(u, v)]
            table[(u, v)] = k
            table[(u + t, v)] = k
            table[(u, v + t)] = k
            table[(u + t, v + t)] = k
    return Bicharacter(big, beta.exponent, table)


def all_quadratic_forms(beta: Bicharacter) -> list[QuadraticForm]:
    """Every quadratic form whose polar form is beta (finite: 2^rank choices
    of signs on a basis determine the rest)."""
    T = beta.domain
    basis = T.basis()
    forms = []
    for mask in range(1 << len(basis)):
        values = {T.group.identity: 1}
        for i, b in enumerate(basis):
            sb = -1 if (mask >> i) & 1 else 1
            new_values = dict(values)
            for u, vu in values.items():
                # forced by the polar identity: tau(u+b) = tau(u) tau(b) beta(u, b)
                sign_beta = 1 if beta.table[(u, b)] % beta.exponent == 0 else -1
                new_values[u + b] = vu * sb * sign_beta
            values = new_values
        forms.append(QuadraticForm(T, values))
    return forms


def symplectic_decomposition(T: Subgroup, beta: Bicharacter):
    """Split (T, beta) into hyperbolic pairs.

    Greedy: pick a of maximal order l, find b with beta(a, b) a primitive
    l-th root, split off <a, b> and recurse on its orthogonal complement.
    Returns a list of (a, b, l) triples; empty for the trivial group.
    """
    if not beta.is_nondegenerate_alternating():
        raise GroupError("bicharacter must be nondegenerate alternating")
    pairs = []
    current = T
    current_beta = beta
    while len(current) > 1:
        a = max(current.elements, key=lambda e: (e.order(), tuple(-c for c in e.coords)))
        l = a.order()
        M = current_beta.exponent
        b = None
        for cand in current.elements:
            k = current_beta.table[(a, cand)]
            if k and (M // gcd(M, k)) == l:
                b = cand
                break
        if b is None:
            raise GroupError("nondegeneracy violated: no hyperbolic partner found")
        pairs.append((a, b, l))
        span_ab = Subgroup(current.group, (a, b))
        if len(span_ab) != l * l:
            raise GroupError("hyperbolic pair does not span Z_l x Z_l")
        complement = [t for t in current.elements
                      if current_beta.table[(t, a)] % M == 0
                      and current_beta.table[(t, b)] % M == 0]
        sub = Subgroup(current.group, tuple(complement))
        if len(sub) * l * l != len(current):
            raise GroupError("orthogonal complement has the wrong size")
        current_beta = current_beta.restrict(sub)
        current = sub
    return pairs


# ---------------------------------------------------------------------------
# the grading group Z x G
# ---------------------------------------------------------------------------

def prepend_z(G: AbelianGroup) -> AbelianGroup:
    """The group Z x G; coordinate 0 is the distinguished Z slot."""
    return AbelianGroup(G.free_rank + 1, G.torsion)


def zg_element(ZG: AbelianGroup, z: int, g: GroupElement) -> GroupElement:
    return ZG.element((z,) + g.coords)


def z_part(e: GroupElement) -> int:
    return e.coords[0]


def g_part(G: AbelianGroup, e: GroupElement) -> GroupElement:
    return G.element(e.coords[1:])


def flip_z(e: GroupElement) -> GroupElement:
    return e.group.element((-e.coords[0],) + e.coords[1:])
