"""Chevalley-Eilenberg cohomology of graded nilpotent Lie algebras, exactly.

Sign convention: on 1-forms (d a)(X, Y) = -a([X, Y]), so d theta^k =
-sum_{i<j} c^k_ij theta^i wedge theta^j, extended as a graded derivation of
degree +1.  The ordered basis of Lambda^q g* is the set of strictly increasing
multi-indices in lexicographic order; wedge signs come from permutation parity.

All kernels, images and projections are exact rational; no floating point
enters this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .errors import DegenerateMetric, GradingViolation, NotPositiveDefinite
from .rational import (
    column_space,
    columns_to_matrix,
    det,
    identity,
    inverse,
    is_positive_definite,
    mat,
    mat_mul,
    nullspace,
    rank,
    transpose,
    zeros,
)


@lru_cache(maxsize=None)
def exterior_basis(m, q):
    """Strictly increasing q-tuples from range(m), lexicographically ordered."""
    return tuple(combinations(range(m), q))


@lru_cache(maxsize=None)
def _basis_index(m, q):
    return {idx: pos for pos, idx in enumerate(exterior_basis(m, q))}


def insert_sign(index_tuple, i):
    """Insert i into the increasing tuple; returns (sign, new tuple) or (0, None)."""
    if i in index_tuple:
        return 0, None
    pos = sum(1 for x in index_tuple if x < i)
    sign = -1 if pos % 2 else 1
    return sign, tuple(sorted(index_tuple + (i,)))


def merge_sign(left, right):
    """Sign of sorting the concatenation of two increasing tuples; 0 on overlap.

    theta^left wedge theta^right = sign * theta^sorted; the sign is the parity
    of the inversions between the two blocks.
    """
    if set(left) & set(right):
        return 0, None
    inversions = sum(1 for x in left for y in right if x > y)
    return (-1) ** inversions, tuple(sorted(left + right))


def weight_of(alg, index_tuple):
    return sum(alg.weights[i] for i in index_tuple)


def ce_differential(alg, q):
    """Matrix of the CE differential Lambda^q g* -> Lambda^{q+1} g*."""
    m = alg.dim
    if q < 0 or q >= m:
        rows = len(exterior_basis(m, q + 1)) if 0 <= q + 1 <= m else 0
        cols = len(exterior_basis(m, q)) if 0 <= q <= m else 0
        return zeros(rows, cols)
    src = exterior_basis(m, q)
    dst_index = _basis_index(m, q + 1)
    d = zeros(len(dst_index), len(src))
    for col, idx in enumerate(src):
        for pos, i in enumerate(idx):
            rest = idx[:pos] + idx[pos + 1:]
            sgn_slot = -1 if pos % 2 else 1
            # d theta^i = -sum_{a<b} c^i_ab theta^a wedge theta^b
            for (a, b), terms in alg.brackets.items():
                c = terms.get(i)
                if c is None:
                    continue
                s, merged = merge_sign((a, b), rest)
                if s == 0:
                    continue
                d[dst_index[merged]][col] += -c * sgn_slot * s
    return d


class GradedInnerProduct:
    """Positive definite Gram matrix on g, block diagonal across degrees.

    The induced inner product on g* is the inverse Gram; on Lambda^q g* it is
    the usual Gram of q-minors.
    """

    def __init__(self, alg, gram):
        self.algebra = alg
        self.gram = mat(gram)
        if len(self.gram) != alg.dim or any(len(r) != alg.dim for r in self.gram):
            raise DegenerateMetric(f"Gram matrix must be {alg.dim} x {alg.dim}")
        for i in range(alg.dim):
            for j in range(alg.dim):
                if self.gram[i][j] != self.gram[j][i]:
                    raise DegenerateMetric(f"Gram matrix not symmetric at ({i + 1}, {j + 1})")
                if alg.degrees[i] != alg.degrees[j] and self.gram[i][j] != 0:
                    raise GradingViolation(
                        f"Gram entry ({i + 1}, {j + 1}) couples degrees "
                        f"{alg.degrees[i]} and {alg.degrees[j]}"
                    )
        if not is_positive_definite(self.gram):
            raise NotPositiveDefinite("Gram matrix is not positive definite")
        self.dual_gram = inverse(self.gram)
        self._lambda_grams = {}

    def lambda_gram(self, q):
        """Gram matrix of the induced inner product on Lambda^q g*."""
        if q not in self._lambda_grams:
            basis = exterior_basis(self.algebra.dim, q)
            g = self.dual_gram
            out = []
            for I in basis:
                row = []
                for J in basis:
                    row.append(det([[g[a][b] for b in J] for a in I]))
                out.append(row)
            self._lambda_grams[q] = out
        return self._lambda_grams[q]

    def det_gram(self):
        return det(self.gram)


def identity_metric(alg):
    return GradedInnerProduct(alg, identity(alg.dim))


def extend_metric_235(alg, g):
    """Extend a 2x2 Gram on g_-1 of the (2,3,5) algebra to all of g.

    The extension is forced by the bracket identifications:
    <X3,X3> = 4 (g11 g22 - g12^2) and <[Xi,X3],[Xj,X3]> = 3 <X3,X3> g_ij.
    """
    if not alg.is_standard_235():
        raise GradingViolation("metric extension is specific to the (2,3,5) table")
    g = mat(g)
    if len(g) != 2 or g[0][1] != g[1][0]:
        raise DegenerateMetric("need a symmetric 2x2 Gram on g_-1")
    if not is_positive_definite(g):
        raise NotPositiveDefinite("Gram on g_-1 is not positive definite")
    g33 = 4 * (g[0][0] * g[1][1] - g[0][1] * g[1][0])
    full = zeros(5, 5)
    for i in range(2):
        for j in range(2):
            full[i][j] = g[i][j]
            # X4 = [X1, X3], X5 = [X2, X3]
            full[3 + i][3 + j] = 3 * g33 * g[i][j]
    full[2][2] = g33
    return GradedInnerProduct(alg, full)


def adjoint_matrix(a, gram_src, gram_dst):
    """Adjoint of a: (src, gram_src) -> (dst, gram_dst), i.e. G_src^-1 aT G_dst."""
    return mat_mul(inverse(gram_src), mat_mul(transpose(a), gram_dst))


@dataclass
class WeightedCohomology:
    """Betti numbers, grading-weight multisets and purity data of H^*(g)."""

    algebra: object
    betti: tuple
    weights: tuple          # per q: sorted tuple of weights with multiplicity
    harmonic: list          # per q: matrix whose columns span ker d_q ∩ ker d*_{q-1}
    pure: bool
    p: tuple | None         # weight p_q per degree when pure
    k: tuple | None         # Heisenberg orders k_q = p_{q+1} - p_q when pure
    homogeneous_dimension: int

    def weight_euler_polynomial(self):
        """Coefficients of sum_q (-1)^q sum_{w in weights_q} t^w, exact integers."""
        coeffs = [0] * (self.homogeneous_dimension + 1)
        for q, ws in enumerate(self.weights):
            for w in ws:
                coeffs[w] += (-1) ** q
        return coeffs


def betti_and_weights(alg, inner=None):
    """Cohomology of the CE complex with grading weights and purity data.

    Betti numbers and weight multisets are metric independent (the CE
    differential preserves the total weight, so cohomology splits by weight);
    the inner product only selects the harmonic representatives.
    """
    if inner is None:
        inner = identity_metric(alg)
    m = alg.dim
    betti, weights, harmonic = [], [], []
    d_prev = None
    for q in range(m + 1):
        d_q = ce_differential(alg, q)
        basis = exterior_basis(m, q)
        wts = [weight_of(alg, I) for I in basis]
        per_weight = []
        for w in sorted(set(wts)):
            cols_w = [i for i, x in enumerate(wts) if x == w]
            sub_d = [[d_q[r][c] for c in cols_w] for r in range(len(d_q))] if d_q else []
            ker_w = len(cols_w) - (rank(sub_d) if sub_d and cols_w else 0)
            img_w = 0
            if q > 0 and d_prev:
                rows_w = cols_w
                sub_prev = [[d_prev[r][c] for c in range(len(d_prev[0]))] for r in rows_w]
                img_w = rank(sub_prev)
            per_weight.extend([w] * (ker_w - img_w))
        betti.append(len(per_weight))
        weights.append(tuple(sorted(per_weight)))
        harmonic.append(_harmonic_basis(alg, inner, q, d_prev, d_q))
        d_prev = d_q
    pure = all(len(set(ws)) <= 1 for ws in weights)
    p = tuple(ws[0] for ws in weights) if pure and all(weights) else None
    k = tuple(p[q + 1] - p[q] for q in range(m)) if p is not None else None
    return WeightedCohomology(
        algebra=alg,
        betti=tuple(betti),
        weights=tuple(weights),
        harmonic=harmonic,
        pure=pure,
        p=p,
        k=k,
        homogeneous_dimension=alg.homogeneous_dimension,
    )


def _harmonic_basis(alg, inner, q, d_prev, d_q):
    """Columns spanning ker d_q ∩ ker d*_{q-1}, exact."""
    n_q = len(exterior_basis(alg.dim, q))
    rows = [row[:] for row in d_q] if d_q else []
    if q > 0 and d_prev:
        dstar = adjoint_matrix(d_prev, inner.lambda_gram(q - 1), inner.lambda_gram(q))
        rows.extend(dstar)
    if not rows:
        cols = [[Fraction(1 if i == j else 0) for i in range(n_q)] for j in range(n_q)]
        return columns_to_matrix(cols, n_q)
    return columns_to_matrix(nullspace(rows), n_q)


def hodge_decomposition(alg, inner, q):
    """Orthogonal decomposition Lambda^q = img d_{q-1} ⊕ harmonic ⊕ img d*_q.

    Returns three matrices whose columns span the three summands.
    """
    m = alg.dim
    n_q = len(exterior_basis(m, q))
    d_q = ce_differential(alg, q)
    d_prev = ce_differential(alg, q - 1) if q > 0 else None
    img = column_space(d_prev) if d_prev else []
    coimg = []
    if q < m and d_q:
        dstar = adjoint_matrix(d_q, inner.lambda_gram(q), inner.lambda_gram(q + 1))
        coimg = column_space(dstar)
    harm = _harmonic_basis(alg, inner, q, d_prev, d_q)
    return (
        columns_to_matrix(img, n_q),
        harm,
        columns_to_matrix(coimg, n_q),
    )


def harmonic_projection(alg, inner, q):
    """Orthogonal projection Lambda^q -> harmonic subspace in harmonic-basis
    coordinates (a b_q x dim Lambda^q matrix), together with the basis."""
    _, harm, _ = hodge_decomposition(alg, inner, q)
    if not harm or not harm[0]:
        return [], harm
    g_q = inner.lambda_gram(q)
    ht_g = mat_mul(transpose(harm), g_q)
    gram_h = mat_mul(ht_g, harm)
    proj = mat_mul(inverse(gram_h), ht_g)
    return proj, harm


@dataclass
class StarOperator:
    """Hodge star Lambda^q -> Lambda^{m-q} as sqrt(det G) times a rational matrix.

    The metric volume form is mu = orientation * sqrt(det G) * theta^1...theta^m,
    so the star itself is irrational in general; every identity this package
    checks (conjugations, star∘star, isometry) closes over Q using the pair
    (matrix, det_scale) with star = sqrt(det_scale) * matrix.
    """

    q: int
    m: int
    matrix: list
    det_scale: Fraction
    orientation: int

    def compose_with(self, other):
        """Rational matrix of self ∘ other (the sqrt factors multiply to det_scale)."""
        return [[x * self.det_scale for x in row] for row in mat_mul(self.matrix, other.matrix)]


def star(alg, inner, q, orientation=1):
    """Star operator characterized by alpha ∧ (star beta) = <alpha, beta> mu."""
    if orientation not in (1, -1):
        raise DegenerateMetric("orientation must be +1 or -1")
    m = alg.dim
    basis_q = exterior_basis(m, q)
    basis_c = _basis_index(m, m - q)
    gram_q = inner.lambda_gram(q)
    rows = zeros(len(basis_c), len(basis_q))
    for i, I in enumerate(basis_q):
        comp = tuple(x for x in range(m) if x not in I)
        s, _ = merge_sign(I, comp)
        # theta^I wedge theta^comp = s * theta^(1..m); force the pairing row
        for j in range(len(basis_q)):
            rows[basis_c[comp]][j] = Fraction(orientation * s) * gram_q[i][j]
    # rows is already the rational part: alpha wedge (R beta) = <alpha,beta> theta^(1..m)
    d = inner.det_gram()
    if d == 0:
        raise DegenerateMetric("metric volume vanishes")
    return StarOperator(q=q, m=m, matrix=rows, det_scale=d, orientation=orientation)


def star_adjoint_rational(alg, inner, st):
    """Rational part of the adjoint star: adjoint(star) = sqrt(det) * result."""
    return adjoint_matrix(st.matrix, inner.lambda_gram(st.q), inner.lambda_gram(st.m - st.q))


def duality_pairing(alg, q, inner=None):
    """Pairing matrix H^q x H^{m-q} -> H^m via wedge of harmonic representatives.

    Entry (a, b) is the theta^(1..m) coefficient of h_a ∧ h'_b; nondegeneracy
    is the algebraic Poincare duality of the nilpotent Lie algebra.
    """
    if inner is None:
        inner = identity_metric(alg)
    m = alg.dim
    _, hq, _ = hodge_decomposition(alg, inner, q)
    _, hc, _ = hodge_decomposition(alg, inner, m - q)
    basis_q = exterior_basis(m, q)
    basis_c = exterior_basis(m, m - q)
    bq = len(hq[0]) if hq and hq[0] else 0
    bc = len(hc[0]) if hc and hc[0] else 0
    out = zeros(bq, bc)
    for a in range(bq):
        for b in range(bc):
            acc = Fraction(0)
            for i, I in enumerate(basis_q):
                if hq[i][a] == 0:
                    continue
                for j, J in enumerate(basis_c):
                    if hc[j][b] == 0:
                        continue
                    s, merged = merge_sign(I, J)
                    if s:
                        acc += Fraction(s) * hq[i][a] * hc[j][b]
            out[a][b] = acc
    return out


def random_graded_inner_product(alg, rng, spread=2):
    """Random block-diagonal positive definite Gram, exact rationals.

    Each degree block is A^T A + I for a random small integer matrix A.
    Used by the metric-independence checks.
    """
    g = zeros(alg.dim, alg.dim)
    for d in sorted(set(alg.degrees)):
        idx = alg.degree_indices(d)
        nd = len(idx)
        a = [[Fraction(rng.randint(-spread, spread)) for _ in range(nd)] for _ in range(nd)]
        block = mat_mul(transpose(a), a)
        for i in range(nd):
            block[i][i] += 1
        for i in range(nd):
            for j in range(nd):
                g[idx[i]][idx[j]] = block[i][j]
    return GradedInnerProduct(alg, g)
