"""Flat-model Rumin complex as matrices over the universal enveloping algebra.

On the simply connected group of a graded nilpotent Lie algebra, forms with
left-invariant coframe coefficients identify with UEA-valued columns, and the
de Rham differential becomes d = sum_i eps(theta^i) X_i + CE-part.  The
splitting operator L is pinned by the three conditions

    delta L = 0,      delta d L = 0,      pi L = id,

with delta the order-0 Kostant codifferential (the CE adjoint) and pi the
orthogonal projection onto the harmonic subspace.  L is solved from the
linear system these conditions impose on a grading-homogeneous ansatz: the
component of L raising the form weight by w carries UEA coefficients of
Heisenberg order exactly w.  The Rumin differential is D = pi d L; purity of
the cohomology makes its Heisenberg order equal to p_{q+1} - p_q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ce_cohomology import (
    adjoint_matrix,
    betti_and_weights,
    ce_differential,
    exterior_basis,
    harmonic_projection,
    insert_sign,
    star,
    weight_of,
)
from .errors import AnsatzInsufficient, NotPure
from .rational import (
    inverse,
    mat_mul,
    solve,
    transpose,
    zeros,
)
from .uea import UEA, UEAOperatorMatrix, formal_adjoint


def invariant_de_rham(alg, uea=None):
    """Matrices of the invariant de Rham differential d_q, q = 0..m-1.

    d = sum_i eps(theta^i) X_i + CE-part; deleting all monomials of positive
    Heisenberg order recovers the CE differential.
    """
    uea = uea or UEA(alg)
    m = alg.dim
    out = []
    for q in range(m):
        src = exterior_basis(m, q)
        dst = exterior_basis(m, q + 1)
        dst_index = {idx: pos for pos, idx in enumerate(dst)}
        ce = ce_differential(alg, q)
        entries = [[uea.scalar(ce[r][c]) for c in range(len(src))] for r in range(len(dst))]
        for c, I in enumerate(src):
            for i in range(m):
                s, J = insert_sign(I, i)
                if s == 0:
                    continue
                entries[dst_index[J]][c] = entries[dst_index[J]][c] + uea.generator(i).scale(s)
        out.append(UEAOperatorMatrix(uea, entries))
    return out


def kostant_delta(alg, inner, uea=None):
    """Order-0 codifferentials delta_q: Lambda^q -> Lambda^(q-1), q = 1..m.

    In the flat model with the identity splitting, delta is the CE adjoint
    with respect to the induced inner products; delta^2 = 0.
    """
    uea = uea or UEA(alg)
    out = {}
    for q in range(1, alg.dim + 1):
        d_prev = ce_differential(alg, q - 1)
        adj = adjoint_matrix(d_prev, inner.lambda_gram(q - 1), inner.lambda_gram(q))
        out[q] = UEAOperatorMatrix.from_scalar(uea, adj)
    return out


@dataclass
class RuminComplex:
    """Rumin data of one algebra and metric: splitting L, differential D."""

    algebra: object
    inner: object
    uea: object
    cohomology: object
    L: list            # per q: UEA matrix, Lambda^q rows x b_q columns
    D: list            # per q in 0..m-1: UEA matrix, b_{q+1} x b_q
    harmonic: list     # per q: harmonic basis matrix of the metric
    orders: tuple      # attained Heisenberg order of each D_q

    @property
    def p(self):
        return self.cohomology.p

    @property
    def k(self):
        return self.cohomology.k


def solve_splitting_L(alg, inner, uea=None, max_extra=None):
    """Solve the defining conditions of the splitting operator L for all q.

    Raises NotPure when the cohomology is not pure, and AnsatzInsufficient
    when no unique solution exists within the homogeneity ansatz even after
    raising the per-component order bound up to the homogeneous dimension.
    """
    uea = uea or UEA(alg)
    coh = betti_and_weights(alg, inner)
    if coh.p is None:
        raise NotPure(f"cohomology weights {coh.weights} are not pure")
    if max_extra is None:
        max_extra = alg.homogeneous_dimension
    d_ops = invariant_de_rham(alg, uea)
    deltas = kostant_delta(alg, inner, uea)
    L = []
    for q in range(alg.dim + 1):
        for extra in range(max_extra + 1):
            lq = _solve_L_degree(alg, inner, uea, coh, d_ops, deltas, q, extra)
            if lq is not None:
                L.append(lq)
                break
        else:
            raise AnsatzInsufficient(
                f"no unique splitting in degree {q} within order bound +{max_extra}"
            )
    return L, coh, d_ops


def _solve_L_degree(alg, inner, uea, coh, d_ops, deltas, q, extra):
    m = alg.dim
    basis = exterior_basis(m, q)
    n_q = len(basis)
    b_q = coh.betti[q]
    p_q = coh.p[q]
    proj, _ = harmonic_projection(alg, inner, q)
    proj_op = UEAOperatorMatrix.from_scalar(uea, proj)
    if b_q == 0:
        return UEAOperatorMatrix(uea, [[] for _ in range(n_q)], 0)

    # unknown slots: (row i, column j, monomial) with order in
    # [w_i - p_q, w_i - p_q + extra]
    slots = []
    for i, I in enumerate(basis):
        w = weight_of(alg, I) - p_q
        if w < 0:
            continue
        monos = []
        for o in range(w, w + extra + 1):
            monos.extend(uea.monomials_of_order(o))
        for j in range(b_q):
            for mono in monos:
                slots.append((i, j, mono))
    if not slots:
        return None

    def conditions(op):
        conds = []
        if q >= 1:
            conds.append(deltas[q] @ op)
        if q < m:
            conds.append(deltas[q + 1] @ (d_ops[q] @ op))
        conds.append(proj_op @ op)
        return conds

    # linearity: assemble the sparse coefficient column of each unit slot
    columns = []
    eq_index = {}
    for u, (i, j, mono) in enumerate(slots):
        unit = UEAOperatorMatrix.zero(uea, n_q, b_q)
        unit.entries[i][j] = uea.element({mono: Fraction(1)})
        col = {}
        for t, cond in enumerate(conditions(unit)):
            for r, row in enumerate(cond.entries):
                for c, e in enumerate(row):
                    for exps, coeff in e.coeffs.items():
                        key = (t, r, c, exps)
                        eq_index.setdefault(key, len(eq_index))
                        col[eq_index[key]] = col.get(eq_index[key], Fraction(0)) + coeff
        columns.append(col)

    # right-hand side: pi L = id contributes the identity; other blocks zero
    t_pi = len(conditions(UEAOperatorMatrix.zero(uea, n_q, b_q))) - 1
    zero_mono = (0,) * m
    for j in range(b_q):
        eq_index.setdefault((t_pi, j, j, zero_mono), len(eq_index))
    n_eq = len(eq_index)
    rhs = [Fraction(0)] * n_eq
    for j in range(b_q):
        rhs[eq_index[(t_pi, j, j, zero_mono)]] = Fraction(1)

    a = zeros(n_eq, len(slots))
    for u, col in enumerate(columns):
        for r, v in col.items():
            a[r][u] = v
    x = solve(a, rhs)
    if x is None:
        return None
    if len(slots) > 0 and _has_kernel(a):
        raise AnsatzInsufficient(
            f"splitting in degree {q} is underdetermined within the ansatz"
        )
    lq = UEAOperatorMatrix.zero(uea, n_q, b_q)
    for u, (i, j, mono) in enumerate(slots):
        if x[u]:
            lq.entries[i][j] = lq.entries[i][j] + uea.element({mono: x[u]})
    return UEAOperatorMatrix(uea, lq.entries)


def _has_kernel(a):
    from .rational import nullspace

    return bool(nullspace(a))


def rumin_D(alg, inner, reference_inner=None):
    """The Rumin complex D = pi d L for all degrees.

    The matrices act between the cohomology spaces in the harmonic basis of
    ``reference_inner`` (default: ``inner`` itself); expressing two metrics'
    complexes over a common reference exhibits metric independence as exact
    matrix equality.
    """
    uea = UEA(alg)
    L, coh, d_ops = solve_splitting_L(alg, inner, uea)
    m = alg.dim
    D = []
    for q in range(m):
        proj, _ = harmonic_projection(alg, inner, q + 1)
        proj_op = UEAOperatorMatrix.from_scalar(uea, proj)
        D.append(proj_op @ (d_ops[q] @ L[q]))
    harms = [harmonic_projection(alg, inner, q)[1] for q in range(m + 1)]
    if reference_inner is not None:
        c_mats = [
            quotient_coordinates(alg, reference_inner, q, harms[q])
            for q in range(m + 1)
        ]
        D = [c_mats[q + 1] @ (D[q] @ inverse(c_mats[q])) for q in range(m)]
        harms = [harmonic_projection(alg, reference_inner, q)[1] for q in range(m + 1)]
    orders = tuple(dq.order() for dq in D)
    return RuminComplex(
        algebra=alg,
        inner=inner,
        uea=uea,
        cohomology=coh,
        L=L,
        D=D,
        harmonic=harms,
        orders=orders,
    )


def quotient_coordinates(alg, reference_inner, q, columns_matrix):
    """Coordinates of cocycle columns in H^q = ker d / img d, with the basis
    induced by the reference metric's harmonic representatives."""
    href = harmonic_projection(alg, reference_inner, q)[1]
    img = ce_differential(alg, q - 1) if q > 0 else None
    b = len(href[0]) if href and href[0] else 0
    n_cols = len(columns_matrix[0]) if columns_matrix and columns_matrix[0] else 0
    from .rational import column_space

    img_cols = column_space(img) if img else []
    # solve [href | img] * (c, w) = v for each column v
    rows = len(columns_matrix)
    system = [
        [href[i][j] for j in range(b)] + [col[i] for col in img_cols]
        for i in range(rows)
    ]
    out = zeros(b, n_cols)
    for c in range(n_cols):
        v = [columns_matrix[i][c] for i in range(rows)]
        sol = solve(system, v)
        if sol is None:
            raise NotPure("column is not a cocycle of the expected class")
        for j in range(b):
            out[j][c] = sol[j]
    return out


def gr_equals_ce(alg):
    """Order-0 part of the invariant de Rham differential equals the CE one."""
    d_ops = invariant_de_rham(alg)
    for q in range(alg.dim):
        if d_ops[q].order_zero_part() != ce_differential(alg, q):
            return False
    return True


def star_on_cohomology(alg, inner, rc, q, orientation=1):
    """Rational part of the star restricted to harmonic subspaces,
    as a b_{m-q} x b_q matrix between harmonic-basis coordinates."""
    m = alg.dim
    st = star(alg, inner, q, orientation)
    image = mat_mul(st.matrix, rc.harmonic[q])
    target = rc.harmonic[m - q]
    coords = solve(target, image)
    if coords is None:
        raise NotPure(f"star image of harmonic {q}-forms is not harmonic")
    return coords


def formal_adjoint_uea(op, gram_source, gram_target):
    """Formal adjoint of a UEA operator matrix between inner-product spaces."""
    return formal_adjoint(op, gram_source, gram_target)


def harmonic_gram(alg, inner, harm, q):
    return mat_mul(mat_mul(transpose(harm), inner.lambda_gram(q)), harm)


def star_duality_check(alg, inner, orientation=1):
    """Verify (D_q)* = (-1)^(q+1) star^(-1) D_{m-q-1} star for every q.

    Also records k_q = k_{m-q-1}.  Returns a per-degree report; the scale of
    the star cancels in the conjugation, so the check is exact over Q.
    """
    rc = rumin_D(alg, inner)
    m = alg.dim
    grams = [harmonic_gram(alg, inner, rc.harmonic[q], q) for q in range(m + 1)]
    stars = [star_on_cohomology(alg, inner, rc, q, orientation) for q in range(m + 1)]
    report = {"degrees": {}, "orders_palindromic": None, "all_hold": True}
    k = rc.k
    report["orders_palindromic"] = all(k[q] == k[m - q - 1] for q in range(m))
    for q in range(m):
        lhs = formal_adjoint(rc.D[q], grams[q], grams[q + 1])
        conj = inverse(stars[q]) @ (rc.D[m - q - 1] @ stars[q + 1])
        rhs = conj.scale((-1) ** (q + 1))
        holds = lhs == rhs
        report["degrees"][q] = holds
        report["all_hold"] = report["all_hold"] and holds
    report["all_hold"] = report["all_hold"] and report["orders_palindromic"]
    return report
