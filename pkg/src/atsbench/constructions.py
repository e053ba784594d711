"""Parametric constructions: standard realizations of graded division
algebras, involutions on them, exchange doubles, 3-graded matrix
algebras over them, and the block-matrix involutions.

The standard realization of a finite group T with a nondegenerate
alternating bicharacter beta is built from clock and shift matrices as
Kronecker products, one factor per hyperbolic pair of (T, beta).  The
basis element X_t attached to t = a1^c1 b1^d1 ... is the product
X_a1^c1 X_b1^d1 ... in that fixed order, so bases are bit-exact
reproducible.  All higher constructions are assembled from the exact
structure constants of these realizations and verified on the spot.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import linalg
from .groups import (AbelianGroup, Bicharacter, GroupElement, GroupError,
                     QuadraticForm, Subgroup, extend_bicharacter, prepend_z,
                     symplectic_decomposition, trivial_subgroup, zg_element)
from .omega import (INVOLUTION, PRODUCT, Grading, LinearMap, OmegaAlgebra,
                    check_grading, check_involution, check_morphism,
                    check_t4_flip, to_sparse, vec_add, vec_scale)
from .scalars import CycloField, Scalar


class ConstraintError(ValueError):
    """A construction parameter violates one of its defining constraints;
    the message names the violated condition."""


# ---------------------------------------------------------------------------
# monomial matrices (clock / shift arithmetic)
# ---------------------------------------------------------------------------

class MonoMatrix:
    """A generalized permutation matrix: one nonzero entry per column.

    perm[j] is the row of the nonzero entry in column j, vals[j] its value.
    """

    __slots__ = ("n", "perm", "vals")

    def __init__(self, n, perm, vals):
        self.n = n
        self.perm = tuple(perm)
        self.vals = tuple(vals)

    @staticmethod
    def identity(field: CycloField, n: int) -> "MonoMatrix":
        return MonoMatrix(n, range(n), [field.one] * n)

    @staticmethod
    def clock(field: CycloField, eps: Scalar, n: int) -> "MonoMatrix":
        return MonoMatrix(n, range(n), [eps ** k for k in range(n)])

    @staticmethod
    def shift(field: CycloField, n: int) -> "MonoMatrix":
        # e_k -> e_(k+1 mod n)
        return MonoMatrix(n, [(j + 1) % n for j in range(n)], [field.one] * n)

    def __matmul__(self, other: "MonoMatrix") -> "MonoMatrix":
        perm = [self.perm[other.perm[j]] for j in range(self.n)]
        vals = [self.vals[other.perm[j]] * other.vals[j] for j in range(self.n)]
        return MonoMatrix(self.n, perm, vals)

    def kron(self, other: "MonoMatrix") -> "MonoMatrix":
        n = self.n * other.n
        perm = [0] * n
        vals = [None] * n
        for j1 in range(self.n):
            for j2 in range(other.n):
                j = j1 * other.n + j2
                perm[j] = self.perm[j1] * other.n + other.perm[j2]
                vals[j] = self.vals[j1] * other.vals[j2]
        return MonoMatrix(n, perm, vals)

    def transpose(self) -> "MonoMatrix":
        perm = [0] * self.n
        vals = [None] * self.n
        for j in range(self.n):
            perm[self.perm[j]] = j
            vals[self.perm[j]] = self.vals[j]
        return MonoMatrix(self.n, perm, vals)

    def scalar_ratio(self, other: "MonoMatrix"):
        """c with self = c * other, or None."""
        if self.perm != other.perm:
            return None
        c = self.vals[0] / other.vals[0]
        if all(self.vals[j] == c * other.vals[j] for j in range(self.n)):
            return c
        return None

    def to_dense(self, field: CycloField):
        m = [[field.zero] * self.n for _ in range(self.n)]
        for j in range(self.n):
            m[self.perm[j]][j] = self.vals[j]
        return m


# ---------------------------------------------------------------------------
# graded division algebras
# ---------------------------------------------------------------------------

@dataclass
class GradedDivision:
    """A graded division algebra with one-dimensional homogeneous
    components, basis indexed by its support subgroup."""
    field: CycloField
    group: AbelianGroup
    support: Subgroup
    algebra: OmegaAlgebra
    grading: Grading
    elements: tuple                  # basis index -> support element
    bicharacter: Bicharacter         # commutation bicharacter on the support
    flavor: str = "simple"           # "simple" | "exchange"
    sign_form: QuadraticForm = None  # phi0(Z_s) = sign_form(s) Z_s, if involution
    t: GroupElement = None           # doubling element (exchange flavor)
    matrices: list = None            # monomial realizations (simple flavor)
    inner: "GradedDivision" = None   # the doubled algebra (exchange flavor)

    def __post_init__(self):
        self.index = {e: i for i, e in enumerate(self.elements)}

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def mu(self, i: int, j: int):
        """Structure constant: Z_i Z_j = mu * Z_k; returns (mu, k)."""
        row = self.algebra.row(PRODUCT, (i, j))
        assert len(row) == 1, "graded division product must be monomial"
        ((k, c),) = row.items()
        return c, k

    def basis_inverse(self, i: int):
        """(c, j) with Z_i^{-1} = c * Z_j."""
        j = self.index[-self.elements[i]]
        c, k = self.mu(i, j)
        assert self.elements[k].is_identity()
        return c.inverse(), j

    def has_involution(self) -> bool:
        return INVOLUTION in self.algebra.operators


def standard_realization(T: Subgroup, beta: Bicharacter,
                         field: CycloField) -> GradedDivision:
    """The graded division algebra D(T, beta) realized by Kronecker
    products of clock and shift matrices, with basis {X_t}."""
    if not beta.is_nondegenerate_alternating():
        raise ConstraintError(
            "bicharacter must be nondegenerate alternating on T")
    pairs = symplectic_decomposition(T, beta)
    group = T.group
    # exponent coordinates of each t over (a1, b1, a2, b2, ...)
    gens = [g for (a, b, _) in pairs for g in (a, b)]
    orders = [l for (_, _, l) in pairs for _ in range(2)]
    coords = {group.identity: ()}
    for g, o in zip(gens, orders):
        coords = {e + g.scaled(k): c + (k,)
                  for e, c in coords.items() for k in range(o)}
    if len(coords) != len(T):
        raise ConstraintError("T is not of symmetric-square shape")

    gen_mats = []
    for (a, b, l) in pairs:
        eps = beta.eval(a, b, field)
        gen_mats.append(MonoMatrix.clock(field, eps, l))
        gen_mats.append(MonoMatrix.shift(field, l))
    n = 1
    for (_, _, l) in pairs:
        n *= l

    def realize(exps) -> MonoMatrix:
        m = MonoMatrix.identity(field, 1)
        for (a, b, l), pos in zip(pairs, range(0, 2 * len(pairs), 2)):
            blk = MonoMatrix.identity(field, l)
            for _ in range(exps[pos]):
                blk = gen_mats[pos] @ blk
            for _ in range(exps[pos + 1]):
                blk = gen_mats[pos + 1] @ blk
            m = m.kron(blk)
        return m

    elements = tuple(sorted(T.elements, key=lambda e: e.coords))
    mats = [realize(coords[t]) for t in elements]
    index = {e: i for i, e in enumerate(elements)}

    alg = OmegaAlgebra(field, len(T), {PRODUCT: 2},
                       [f"X{t}" for t in elements])
    for i, ti in enumerate(elements):
        for j, tj in enumerate(elements):
            k = index[ti + tj]
            c = (mats[i] @ mats[j]).scalar_ratio(mats[k])
            assert c is not None, "product of X_t basis elements must be monomial"
            alg.set_entry(PRODUCT, (i, j), {k: c})
    grading = Grading(alg, group, elements)
    return GradedDivision(field, group, T, alg, grading, elements, beta,
                          matrices=mats)


def transpose_form(D: GradedDivision) -> QuadraticForm:
    """The distinguished quadratic form tau with X_t^T = tau(t) X_t,
    i.e. the sign pattern of matrix transposition on the realization.
    Only elementary 2-supports admit one."""
    if not D.support.is_elementary_2():
        raise GroupError("transposition is diagonal only on elementary 2-supports")
    values = {}
    for i, t in enumerate(D.elements):
        c = D.matrices[i].transpose().scalar_ratio(D.matrices[i])
        assert c is not None and c.is_rational()
        values[t] = int(c.rational_value())
    return QuadraticForm(D.support, values)


def d_inv(T: Subgroup, beta: Bicharacter, tau: QuadraticForm,
          field: CycloField) -> GradedDivision:
    """D(T, beta) with the involution X_t -> tau(t) X_t."""
    if not T.is_elementary_2():
        raise ConstraintError(
            "a graded division algebra admits an involution only when "
            "its support is an elementary 2-group")
    D = standard_realization(T, beta, field)
    if tau.polar_form() != beta:
        raise ConstraintError("polar form of tau must equal beta")
    D.algebra.add_operator(INVOLUTION, 1)
    for i, t in enumerate(D.elements):
        D.algebra.set_entry(INVOLUTION, (i,), {i: field.scalar(tau(t))})
    rep = check_involution(D.algebra)
    assert rep.passed, rep.violations
    D.sign_form = tau
    return D


def d_inv_transpose(T: Subgroup, beta: Bicharacter,
                    field: CycloField) -> GradedDivision:
    """D(T, beta) with matrix transposition as the involution."""
    D = standard_realization(T, beta, field)
    return d_inv(T, beta, transpose_form(D), field)


# ---------------------------------------------------------------------------
# exchange doubles
# ---------------------------------------------------------------------------

def exchange_double(alg: OmegaAlgebra, grading: Grading,
                    t: GroupElement) -> tuple[OmegaAlgebra, Grading]:
    """(A + A^op, ex) with the grading deg(x, phi(x)) = h,
    deg(x, -phi(x)) = h + t over a homogeneous basis of A.

    Basis order: u_0..u_{d-1} = (x_k, phi(x_k)), then v_k = (x_k, -phi(x_k)).
    """
    if t.order() != 2:
        raise ConstraintError("doubling element must have order 2")
    if t in set(grading.degmap):
        raise ConstraintError("doubling element must avoid the support")
    field = alg.field
    d = alg.dim

    # pair coordinates: (p, q) as a length-2d dense vector
    def pair(p, q):
        out = dict(p)
        for i, c in q.items():
            out[i + d] = c
        return out

    phi_cols = [alg.row(INVOLUTION, (k,)) for k in range(d)]
    u_cols = [pair(alg.basis_vec(k), phi_cols[k]) for k in range(d)]
    v_cols = [pair(alg.basis_vec(k), vec_scale(field.scalar(-1), phi_cols[k]))
              for k in range(d)]
    change = []
    for col in u_cols + v_cols:
        dense = [field.zero] * (2 * d)
        for i, c in col.items():
            dense[i] = c
        change.append(dense)
    inv = linalg.invert_matrix(field, [list(r) for r in zip(*change)])
    assert inv is not None

    def to_new(vec_pair):
        dense = [field.zero] * (2 * d)
        for i, c in vec_pair.items():
            dense[i] = c
        return to_sparse(linalg.mat_vec(field, inv, dense))

    def pair_mul(x, y):
        # (a, b)(c, d) = (ac, db): components of length-2d sparse vectors
        a = {i: c for i, c in x.items() if i < d}
        b = {i - d: c for i, c in x.items() if i >= d}
        c_ = {i: c for i, c in y.items() if i < d}
        dd = {i - d: c for i, c in y.items() if i >= d}
        return pair(alg.mul(a, c_), alg.mul(dd, b))

    out = OmegaAlgebra(field, 2 * d, {PRODUCT: 2, INVOLUTION: 1},
                       [f"u{k}" for k in range(d)] + [f"v{k}" for k in range(d)])
    cols = u_cols + v_cols
    for i in range(2 * d):
        for j in range(2 * d):
            out.set_entry(PRODUCT, (i, j), to_new(pair_mul(cols[i], cols[j])))
        swapped = pair({k - d: c for k, c in cols[i].items() if k >= d},
                       {k: c for k, c in cols[i].items() if k < d})
        out.set_entry(INVOLUTION, (i,), to_new(swapped))
    degmap = tuple(list(grading.degmap) + [h + t for h in grading.degmap])
    new_grading = Grading(out, grading.group, degmap,
                          graded_ops=grading.graded_ops | {INVOLUTION})
    return out, new_grading


def exchange_double_division(D: GradedDivision, t: GroupElement) -> GradedDivision:
    """Double a graded division algebra with involution at t, re-sorting
    the basis by support element so Y_s sits at index(s).

    Verifies the two claimed identities: the induced involution is
    s -> sign_form^[t](s) and the commutation bicharacter is beta^[t].
    """
    if not D.has_involution():
        raise ConstraintError("exchange double needs an involution on D")
    alg2, gr2 = exchange_double(D.algebra, D.grading, t)
    Tt = D.support.extended_by(t)
    elements = tuple(sorted(Tt.elements, key=lambda e: e.coords))
    order = []
    for s in elements:
        matches = [i for i, h in enumerate(gr2.degmap) if h == s]
        assert len(matches) == 1
        order.append(matches[0])
    perm = {old: new for new, old in enumerate(order)}

    alg = OmegaAlgebra(D.field, alg2.dim, dict(alg2.operators),
                       [f"Y{elements[i]}" for i in range(alg2.dim)])
    for op, arity in alg2.operators.items():
        for idx, row in alg2.tensors[op].items():
            if all(i in perm for i in idx):
                alg.set_entry(op, tuple(perm[i] for i in idx),
                              {perm[j]: c for j, c in row.items()})
    grading = Grading(alg, gr2.group, elements, graded_ops=gr2.graded_ops)

    beta_ext = extend_bicharacter(D.bicharacter, t)
    sign_ext = D.sign_form.extend(t)
    out = GradedDivision(D.field, D.group, Tt, alg, grading, elements,
                         beta_ext, flavor="exchange", sign_form=sign_ext,
                         t=t, inner=D)
    for i in range(alg.dim):
        row = alg.row(INVOLUTION, (i,))
        assert list(row) == [i], "exchange involution must be diagonal on Y_s"
        assert row[i] == D.field.scalar(sign_ext(elements[i])), \
            "involution signs must follow the extended quadratic form"
    for i in range(alg.dim):
        for j in range(alg.dim):
            ci, ki = out.mu(i, j)
            cj, kj = out.mu(j, i)
            assert ki == kj
            assert ci == beta_ext.eval(elements[i], elements[j], D.field) * cj, \
                "commutation factor must follow the extended bicharacter"
    return out


# ---------------------------------------------------------------------------
# matrix algebras over a graded division algebra
# ---------------------------------------------------------------------------

def kappa_expand(kappa, gamma):
    """Repeat gamma[j] kappa[j] times."""
    if len(kappa) != len(gamma):
        raise ConstraintError("kappa and gamma lengths must match")
    if any(k <= 0 for k in kappa):
        raise ConstraintError("kappa entries must be positive")
    out = []
    for k, g in zip(kappa, gamma):
        out.extend([g] * k)
    return tuple(out)


@dataclass
class MatrixOverDivision:
    """M_N(D) with the Z x G grading deg(d E_ij) = (delta_i - delta_j,
    gamma_i + deg d - gamma_j); basis index = (i*N + j)*dim_D + b."""
    D: GradedDivision
    gamma: tuple            # expanded degree tuple, length N
    k0: int                 # split point: delta_i = 0 for i < k0
    algebra: OmegaAlgebra
    grading: Grading

    @property
    def N(self) -> int:
        return len(self.gamma)

    def bidx(self, b: int, i: int, j: int) -> int:
        return (i * self.N + j) * self.D.dim + b


def matrix_grading(D: GradedDivision, gamma0, gamma1) -> MatrixOverDivision:
    """Assemble M_N(D) with the 3-graded Z x G degree map; gamma0/gamma1
    are the already-expanded degree tuples of the two module parts."""
    gamma = tuple(gamma0) + tuple(gamma1)
    k0 = len(gamma0)
    N = len(gamma)
    if N < 1:
        raise ConstraintError("at least one module basis vector required")
    field = D.field
    dD = D.dim
    dim = N * N * dD
    labels = [f"{D.algebra.basis_labels[b]}E{i + 1},{j + 1}"
              for i in range(N) for j in range(N) for b in range(dD)]
    alg = OmegaAlgebra(field, dim, {PRODUCT: 2}, labels)
    ZG = prepend_z(D.group)
    deltas = [0 if i < k0 else 1 for i in range(N)]
    degmap = []
    for i in range(N):
        for j in range(N):
            for b in range(dD):
                degmap.append(zg_element(
                    ZG, deltas[i] - deltas[j],
                    gamma[i] + D.elements[b] - gamma[j]))
    mk = MatrixOverDivision(D, gamma, k0, alg, None)
    for i in range(N):
        for j in range(N):
            for l in range(N):
                for b in range(dD):
                    for bp in range(dD):
                        c, k = D.mu(b, bp)
                        alg.set_entry(PRODUCT,
                                      (mk.bidx(b, i, j), mk.bidx(bp, j, l)),
                                      {mk.bidx(k, i, l): c})
    mk.grading = Grading(alg, ZG, tuple(degmap), graded_ops=frozenset({PRODUCT}))
    return mk


# ---------------------------------------------------------------------------
# the Phi-matrix involutions
# ---------------------------------------------------------------------------

@dataclass
class InvolutionParams:
    """Parameters of a 3-graded matrix algebra with involution.

    The exchange-double case is selected by a non-None t.  Per part
    (kappa, gamma, m): the first m entries describe self-dual isotypic
    components (odd multiplicities first, then even ones carrying an
    S-block sign), the remaining entries come in consecutive dual pairs
    (q, q) with degrees (g', g'').
    """
    group: AbelianGroup
    T: Subgroup
    beta: Bicharacter
    kappa0: tuple
    gamma0: tuple
    kappa1: tuple
    gamma1: tuple
    delta: int
    g: GroupElement
    t: GroupElement = None
    m0: int = None            # defaults to len(kappa0): all self-dual
    m1: int = None
    S_signs0: tuple = None    # signs of the even self-dual blocks, per part
    S_signs1: tuple = None
    t_values0: tuple = None   # derived from gamma and g when omitted
    t_values1: tuple = None

    def __post_init__(self):
        self.kappa0 = tuple(self.kappa0)
        self.kappa1 = tuple(self.kappa1)
        self.gamma0 = tuple(self.gamma0)
        self.gamma1 = tuple(self.gamma1)
        if self.m0 is None:
            self.m0 = len(self.kappa0)
        if self.m1 is None:
            self.m1 = len(self.kappa1)
        if self.delta not in (1, -1):
            raise ConstraintError("delta must be +1 or -1")
        if self.t is not None:
            if self.t.order() != 2:
                raise ConstraintError("t must have order 2")
            if self.t in self.T:
                raise ConstraintError("t must lie outside T")
            if self.delta != 1:
                raise ConstraintError(
                    "exchange-double case forces delta = +1 (sgn(B)=1)")
        for which, gamma in ((0, self.gamma0), (1, self.gamma1)):
            reps = [self.full_support.coset_rep(g) for g in gamma]
            if len(set(reps)) != len(reps):
                raise ConstraintError(
                    f"gamma{which} entries must be distinct modulo the support")

    @property
    def full_support(self) -> Subgroup:
        return self.T.extended_by(self.t) if self.t is not None else self.T

    def part(self, which: int):
        if which == 0:
            return self.kappa0, self.gamma0, self.m0, self.S_signs0, self.t_values0
        return self.kappa1, self.gamma1, self.m1, self.S_signs1, self.t_values1


def _resolve_part(params: InvolutionParams, which: int, sigma: QuadraticForm):
    """Validate one part's shape and constraints; returns the block list
    [(kind, q, t_value or None, sign or None), ...] in layout order."""
    kappa, gamma, m, s_signs, t_values = params.part(which)
    signname = ("sign constraint delta = beta^[t](t_i)" if params.t is not None
                else "sign constraint delta = beta(t_i)")
    if len(kappa) == 0:
        raise ConstraintError(f"kappa{which} must be nonempty (supp pi1 = -1,0,1)")
    if len(kappa) != len(gamma):
        raise ConstraintError(f"kappa{which}/gamma{which} length mismatch")
    if any(k <= 0 for k in kappa):
        raise ConstraintError(f"kappa{which} entries must be positive")
    if not 0 <= m <= len(kappa) or (len(kappa) - m) % 2:
        raise ConstraintError(
            f"kappa{which}: entries beyond the first m{which}={m} must pair up")
    T_full = params.full_support
    reps = [T_full.coset_rep(g) for g in gamma]
    if len(set(reps)) != len(reps):
        raise ConstraintError(
            f"gamma{which} entries must be distinct modulo the support")
    l = 0
    while l < m and kappa[l] % 2 == 1:
        l += 1
    if any(kappa[i] % 2 for i in range(l, m)):
        raise ConstraintError(
            f"kappa{which}: odd multiplicities must form a prefix "
            f"of the self-dual blocks (odd, even, paired layout)")
    signs = tuple(s_signs) if s_signs is not None else None
    if signs is not None and len(signs) != m - l:
        raise ConstraintError(
            f"S_signs{which} must list one sign per even self-dual block")
    tvals = tuple(t_values) if t_values is not None else None
    if tvals is not None and len(tvals) != m:
        raise ConstraintError(
            f"t_values{which} must list one support element per self-dual block")

    blocks = []
    for i in range(m):
        t_i = -(gamma[i].scaled(2) + params.g)
        if t_i not in T_full:
            raise ConstraintError(
                f"degree constraint (g_i)^2 t_i = g^-1 fails at "
                f"gamma{which}[{i}]: no solution t_i in the support")
        if tvals is not None and tvals[i] != t_i:
            raise ConstraintError(
                f"t_values{which}[{i}] contradicts the degree "
                f"constraint (g_i)^2 t_i = g^-1")
        sig = sigma(t_i)
        if kappa[i] % 2 == 1:
            if sig != params.delta:
                raise ConstraintError(
                    f"{signname} fails at odd block "
                    f"{which}.{i} (beta(t)={sig})")
            blocks.append(("odd", kappa[i], t_i, None))
        else:
            want = params.delta * sig
            got = signs[i - l] if signs is not None else want
            if got * sig != params.delta:
                raise ConstraintError(
                    f"{signname} fails at even block {which}.{i}: "
                    f"sgn(S) beta(t) != delta")
            blocks.append(("even", kappa[i] // 2, t_i, got))
    for r in range(m, len(kappa), 2):
        if kappa[r] != kappa[r + 1]:
            raise ConstraintError(
                f"kappa{which}: paired blocks must repeat the multiplicity")
        if not (gamma[r] + gamma[r + 1] + params.g).is_identity():
            raise ConstraintError(
                f"degree constraint fails at paired block {which}.{r}: "
                "g' g'' must equal g^-1")
        blocks.append(("paired", kappa[r], None, None))
    return blocks


def build_division_part(params: InvolutionParams,
                        field: CycloField) -> GradedDivision:
    if params.t is None:
        return d_inv_transpose(params.T, params.beta, field)
    inner = d_inv_transpose(params.T, params.beta, field)
    return exchange_double_division(inner, params.t)


@dataclass
class ConstructedAlgebra:
    """A fully assembled algebra with involution and Z x G grading,
    together with the construction data classify needs."""
    kind: str                    # "phi" | "exchange_pair"
    field: CycloField
    group: AbelianGroup          # the G of the Z x G grading
    D: GradedDivision
    matrix: MatrixOverDivision
    algebra: OmegaAlgebra
    grading: Grading
    params: object
    phi: dict = None             # (i, j) -> (b, Scalar); None for exchange pairs

    def verify(self):
        reports = [check_grading(self.grading),
                   check_involution(self.algebra),
                   check_t4_flip(self.grading)]
        return reports


def phi_matrix(params: InvolutionParams, D: GradedDivision,
               sigma: QuadraticForm):
    """The block-diagonal involution matrix over D, as a sparse monomial
    matrix {(i, j): (basis index, scalar)}."""
    field = D.field
    phi = {}
    offset = 0
    for which in (0, 1):
        for kind, q, t_i, sign in _resolve_part(params, which, sigma):
            if kind == "odd":
                b = D.index[t_i]
                for p in range(q):
                    phi[(offset + p, offset + p)] = (b, field.one)
                offset += q
            elif kind == "even":
                b = D.index[t_i]
                if sign == 1:
                    for p in range(2 * q):
                        phi[(offset + p, offset + p)] = (b, field.one)
                else:
                    for p in range(q):
                        phi[(offset + p, offset + q + p)] = (b, field.one)
                        phi[(offset + q + p, offset + p)] = (b, -field.one)
                offset += 2 * q
            else:
                b = D.index[D.group.identity]
                dlt = field.scalar(params.delta)
                for p in range(q):
                    phi[(offset + p, offset + q + p)] = (b, field.one)
                    phi[(offset + q + p, offset + p)] = (b, dlt)
                offset += 2 * q
    return phi


def _phi_inverse(phi: dict, D: GradedDivision):
    inv = {}
    for (i, j), (b, c) in phi.items():
        ci, bi = D.basis_inverse(b)
        inv[(j, i)] = (bi, ci * c.inverse())
    return inv


def validate_params(params: InvolutionParams, field: CycloField):
    """Checks that do not need the built division algebra."""
    if not params.T.is_elementary_2():
        raise ConstraintError("the support T must be an elementary 2-group")
    if not params.beta.is_nondegenerate_alternating():
        raise ConstraintError("beta must be nondegenerate alternating")
    # delta/t shape constraints are enforced at parameter construction


def build_M_inv(params: InvolutionParams, field: CycloField,
                verify: bool = True) -> ConstructedAlgebra:
    """M(G, T, beta, kappa0, kappa1, gamma0, gamma1, delta, g) or its
    exchange-double variant: the 3-graded matrix algebra over the
    division part with the involution X -> Phi^{-1} X^* Phi, where *
    is the entrywise-phi0 transpose."""
    validate_params(params, field)
    D = build_division_part(params, field)
    phi = phi_matrix(params, D, D.sign_form)
    phi_inv = _phi_inverse(phi, D)

    g0 = kappa_expand(params.kappa0, params.gamma0)
    g1 = kappa_expand(params.kappa1, params.gamma1)
    mk = matrix_grading(D, g0, g1)
    alg, N = mk.algebra, mk.N

    col_of_row = {}
    for (i, j) in phi:
        assert i not in col_of_row, "Phi must be monomial"
        col_of_row[i] = j

    # phi(b E_ij) = Phi^{-1} (sigma(b) b E_ji) Phi lands at a single
    # position (p, q) because Phi is monomial over D
    sign_of = D.sign_form
    alg.add_operator(INVOLUTION, 1)
    for i in range(N):
        q = col_of_row[i]
        b_r, c_r = phi[(i, q)]
        for j in range(N):
            p = col_of_row[j]
            b_l, c_l = phi_inv[(p, j)]
            for b in range(D.dim):
                sgn = field.scalar(sign_of(D.elements[b]))
                c1, k1 = D.mu(b_l, b)
                c2, k2 = D.mu(k1, b_r)
                coeff = sgn * c_l * c1 * c2 * c_r
                alg.set_entry(INVOLUTION, (mk.bidx(b, i, j),),
                              {mk.bidx(k2, p, q): coeff})
    ca = ConstructedAlgebra("phi", field, params.group, D, mk, alg,
                            mk.grading, params, phi)
    if verify:
        for rep in ca.verify():
            if not rep.passed:
                raise AssertionError(f"{rep.name} failed: {rep.violations[:3]}")
    return ca


# ---------------------------------------------------------------------------
# opposites and exchange pairs
# ---------------------------------------------------------------------------

def opposite(alg: OmegaAlgebra, grading: Grading,
             negate_z: bool = True) -> tuple[OmegaAlgebra, Grading]:
    """Reversed product; for Z x G gradings the Z slot of every degree is
    negated (pass negate_z=False for gradings without a Z slot)."""
    out = OmegaAlgebra(alg.field, alg.dim, {PRODUCT: 2},
                       [f"{lbl}^op" for lbl in alg.basis_labels])
    for (i, j), row in alg.tensors[PRODUCT].items():
        out.set_entry(PRODUCT, (j, i), dict(row))
    if negate_z:
        degmap = tuple(grading.group.element((-d.coords[0],) + d.coords[1:])
                       for d in grading.degmap)
    else:
        degmap = grading.degmap
    return out, Grading(out, grading.group, degmap,
                        graded_ops=frozenset({PRODUCT}))


@dataclass
class ExchangePairParams:
    """Parameters of M(G, D, kappa0, kappa1, gamma0, gamma1)^ex."""
    group: AbelianGroup
    T: Subgroup
    beta: Bicharacter
    kappa0: tuple
    gamma0: tuple
    kappa1: tuple
    gamma1: tuple

    def __post_init__(self):
        self.kappa0 = tuple(self.kappa0)
        self.kappa1 = tuple(self.kappa1)
        self.gamma0 = tuple(self.gamma0)
        self.gamma1 = tuple(self.gamma1)
        for which, (kappa, gamma) in enumerate(
                [(self.kappa0, self.gamma0), (self.kappa1, self.gamma1)]):
            if len(kappa) == 0:
                raise ConstraintError(f"kappa{which} must be nonempty")
            if len(kappa) != len(gamma):
                raise ConstraintError(f"kappa{which}/gamma{which} length mismatch")
            if any(k <= 0 for k in kappa):
                raise ConstraintError(f"kappa{which} entries must be positive")
            reps = [self.T.coset_rep(g) for g in gamma]
            if len(set(reps)) != len(reps):
                raise ConstraintError(
                    f"gamma{which} entries must be distinct modulo the support")

    @property
    def full_support(self) -> Subgroup:
        return self.T


def exchange_of_graded(alg: OmegaAlgebra,
                       grading: Grading) -> tuple[OmegaAlgebra, Grading]:
    """(A + A^op, ex) with the exchange grading: the (i, g) component
    pairs x in A_(i,g) with y in A_(-i,g).  Basis: A block then A^op block."""
    field = alg.field
    d = alg.dim
    out = OmegaAlgebra(field, 2 * d, {PRODUCT: 2, INVOLUTION: 1},
                       alg.basis_labels + [f"{lbl}'" for lbl in alg.basis_labels])
    for (i, j), row in alg.tensors[PRODUCT].items():
        out.set_entry(PRODUCT, (i, j), dict(row))
        out.set_entry(PRODUCT, (j + d, i + d), {k + d: c for k, c in row.items()})
    for i in range(d):
        out.set_entry(INVOLUTION, (i,), {i + d: field.one})
        out.set_entry(INVOLUTION, (i + d,), {i: field.one})
    degmap = list(grading.degmap)
    for dg in grading.degmap:
        degmap.append(grading.group.element((-dg.coords[0],) + dg.coords[1:]))
    new_grading = Grading(out, grading.group, tuple(degmap),
                          graded_ops=frozenset({PRODUCT}))
    return out, new_grading


def build_exchange_pair(params: ExchangePairParams, field: CycloField,
                        verify: bool = True) -> ConstructedAlgebra:
    """M(G, D(T, beta), kappa0, kappa1, gamma0, gamma1)^ex."""
    D = standard_realization(params.T, params.beta, field)
    g0 = kappa_expand(params.kappa0, params.gamma0)
    g1 = kappa_expand(params.kappa1, params.gamma1)
    mk = matrix_grading(D, g0, g1)
    alg, grading = exchange_of_graded(mk.algebra, mk.grading)
    ca = ConstructedAlgebra("exchange_pair", field, params.group, D, mk,
                            alg, grading, params)
    if verify:
        for rep in ca.verify():
            if not rep.passed:
                raise AssertionError(f"{rep.name} failed: {rep.violations[:3]}")
    return ca


# ---------------------------------------------------------------------------
# exchange-double theorems, checked on instances
# ---------------------------------------------------------------------------

def graded_division_iso(Da: GradedDivision, Db: GradedDivision):
    """A graded isomorphism between two graded division algebras with the
    same support, as a diagonal map Z_s -> c_s Z_s.

    The scalars satisfy c_s c_t / c_(s+t) = mu_a(s,t) / mu_b(s,t); values
    on a basis of the support propagate to everything, and each choice is
    verified against the full tables.  Involutions (when present) must
    carry identical sign functions, which the diagonal map preserves.
    Returns a verified LinearMap or None.
    """
    if set(Da.support.elements) != set(Db.support.elements):
        return None
    field = Da.field
    roots = field.roots_of_unity()
    basis = Da.support.basis()
    for choice in itertools.product(roots, repeat=len(basis)):
        c = {Da.group.identity: field.one}
        for gen, c_gen in zip(basis, choice):
            new_c = dict(c)
            gi_a, gi_b = Da.index[gen], Db.index[gen]
            for u in list(c):
                prev = u
                for _ in range(1, gen.order()):
                    ma, _ = Da.mu(Da.index[prev], gi_a)
                    mb, _ = Db.mu(Db.index[prev], gi_b)
                    # forced by c_s c_t / c_(s+t) = mu_a / mu_b
                    new_c[prev + gen] = new_c[prev] * c_gen * mb / ma
                    prev = prev + gen
            c = new_c
        ok = True
        for s1 in Da.support.elements:
            for s2 in Da.support.elements:
                ma, _ = Da.mu(Da.index[s1], Da.index[s2])
                mb, _ = Db.mu(Db.index[s1], Db.index[s2])
                if c[s1] * c[s2] * mb != c[s1 + s2] * ma:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        cols = [dict() for _ in range(Da.dim)]
        for i, s in enumerate(Da.elements):
            cols[i] = {Db.index[s]: c[s]}
        f = LinearMap(Da.algebra, Db.algebra, cols)
        ops = [PRODUCT] + ([INVOLUTION] if Da.has_involution()
                           and Db.has_involution() else [])
        rep = check_morphism(f, ops=ops, gradings=(Da.grading, Db.grading))
        if rep.passed:
            return f
    return None


def exchange_subgroup_transfer(Dx: GradedDivision, T2: Subgroup):
    """Restrict an exchange double to the part graded by an index-2
    subgroup T2 (not containing the doubling element) and read off the
    transported division structure.

    Returns (bicharacter on T2, sign form on T2, projection map), after
    verifying that the projection (x, y) -> x onto the doubled algebra is
    an algebra isomorphism of the T2-part."""
    if Dx.flavor != "exchange":
        raise ConstraintError("transfer needs an exchange double")
    t = Dx.t
    if t in T2:
        raise ConstraintError("T2 must avoid the doubling element")
    if 2 * len(T2) != len(Dx.support):
        raise ConstraintError("T2 must have index 2 in the full support")
    D1 = Dx.inner
    field = Dx.field
    # psi(Y_(h t^k)) = X_(h t^k) in the inner algebra: projection to the
    # first pair component, up to the normalization of Y
    proj_cols = {}
    tau1 = D1.sign_form
    for h in T2.elements:
        k = 0 if h in D1.support else 1
        inner_elt = h if k == 0 else h + t
        proj_cols[Dx.index[h]] = {D1.index[inner_elt]: field.one}
    # multiplicativity of the projection on the T2 part
    for h1 in T2.elements:
        for h2 in T2.elements:
            i, j = Dx.index[h1], Dx.index[h2]
            c, k = Dx.mu(i, j)
            lhs = {kk: c * cc for kk, cc in proj_cols[k].items()}
            (a1, c1), = proj_cols[i].items()
            (a2, c2), = proj_cols[j].items()
            cc, kk = D1.mu(a1, a2)
            rhs = {kk: c1 * c2 * cc}
            assert lhs == rhs, "projection is not multiplicative on the T2 part"
    # transported commutation bicharacter and involution signs
    signs = {}
    exponent = 2
    table = {}
    for h1 in T2.elements:
        for h2 in T2.elements:
            c1, k1 = Dx.mu(Dx.index[h1], Dx.index[h2])
            c2, k2 = Dx.mu(Dx.index[h2], Dx.index[h1])
            ratio = c1 / c2
            table[(h1, h2)] = 0 if ratio == field.one else 1
    for h in T2.elements:
        row = Dx.algebra.row(INVOLUTION, (Dx.index[h],))
        ((k, c),) = row.items()
        assert k == Dx.index[h]
        signs[h] = 1 if c == field.one else -1
    beta2 = Bicharacter(T2, exponent, table)
    tau2 = QuadraticForm(T2, signs)
    return beta2, tau2, proj_cols


def removal_twist(Dx1: GradedDivision, Dx2: GradedDivision):
    """For two exchange doubles of the same (T', beta) at the same t with
    different quadratic forms: the element t' in T' and the verified
    identity Int(Y_t') o phi_1 = phi_2.

    Together with the degree-preserving pair map (x, 0) -> (x, 0),
    (0, x) -> (0, tau_1 tau_2 x) (which is the identity in the Y basis),
    this realizes the twist-removal statement; returns (t', twisted_map).
    """
    if Dx1.flavor != "exchange" or Dx2.flavor != "exchange":
        raise ConstraintError("twist removal needs exchange doubles")
    if Dx1.t != Dx2.t or set(Dx1.support.elements) != set(Dx2.support.elements):
        raise ConstraintError("doubles must share the support and t")
    if Dx1.bicharacter != Dx2.bicharacter:
        raise ConstraintError("doubles must share the extended bicharacter")
    field = Dx1.field
    assert Dx1.algebra.tensors[PRODUCT] == Dx2.algebra.tensors[PRODUCT], \
        "Y-basis product tensors of the two doubles must coincide"
    T1 = Dx1.inner.support
    tau1, tau2 = Dx1.inner.sign_form, Dx2.inner.sign_form
    beta = Dx1.inner.bicharacter
    # chi(s) = tau1(s) tau2(s) is a character of T'; nondegeneracy provides
    # t' with beta(t', .) = chi
    t_prime = None
    for cand in T1.elements:
        if all(beta.eval(cand, s, field) ==
               field.scalar(tau1(s) * tau2(s)) for s in T1.elements):
            t_prime = cand
            break
    assert t_prime is not None, "no t' realizes the character tau1 tau2"
    # Int(Y_t') o phi_1 must equal phi_2 exactly on the Y basis
    alg1 = Dx1.algebra
    i_tp = Dx1.index[t_prime]
    inv_c, inv_idx = Dx1.basis_inverse(i_tp)
    for i in range(alg1.dim):
        ((k, c),) = alg1.row(INVOLUTION, (i,)).items()
        c1, k1 = Dx1.mu(i_tp, k)
        c2, k2 = Dx1.mu(k1, inv_idx)
        twisted = {k2: c * c1 * c2 * inv_c}
        expected = Dx2.algebra.row(INVOLUTION, (i,))
        assert twisted == expected, \
            f"Int(Y_t') o phi_1 != phi_2 at basis {i}"
    # seatbelt: the identity map intertwines the twisted structures
    ident = LinearMap(Dx2.algebra, Dx1.algebra,
                      [Dx1.algebra.basis_vec(i) for i in range(alg1.dim)])
    rep = check_morphism(ident, ops=[PRODUCT],
                         gradings=(Dx2.grading, Dx1.grading))
    assert rep.passed
    return t_prime, ident
