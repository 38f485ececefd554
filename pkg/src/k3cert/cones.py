"""Target models, their (-2)-classes, and cone-side computations.

Two families of hyperbolic target lattices are supported, both with a
distinguished basis (A, E1, ..., Er):

* even flavor: Gram diag(2, -2, ..., -2), rank r + 1, r <= 8;
* odd flavor: Gram [[0, 1], [1, -2]] (+) diag(-2, ..., -2), rank r + 1,
  r <= 5.

Classes are coordinate vectors in this basis.  Each model carries the
finite list of relevant (-2)-classes in a canonical order (ascending
lexicographic on coordinates), the generators used for the nef test,
and a reference ample class.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .errors import ValidationError
from .linalg import bilinear, identity, mat_vec, solve_linear

EVEN_MAX_R = 8
ODD_MAX_R = 5


@dataclass(frozen=True)
class ConeModel:
    flavor: str  # "even" | "odd"
    r: int
    gram: tuple
    minus_two: tuple  # (-2)-classes, ascending lex order
    nef_generators: tuple
    ample: tuple

    @property
    def rank(self) -> int:
        return self.r + 1

    @property
    def basis_names(self) -> tuple:
        return ("A",) + tuple(f"E{i}" for i in range(1, self.r + 1))


def _even_minus_two(r: int) -> list:
    """Classes d*A - sum(m_i E_i) with d^2 - sum(m_i^2) = -1 and
    3d - sum(m_i) = 1, as coordinate tuples (d, -m_1, ..., -m_r)."""
    if r == 0:
        return []  # d^2 + 1 = 0 has no solution
    out = []
    # Cauchy-Schwarz: (3d - 1)^2 <= r (d^2 + 1) bounds d; d >= 0 always.
    dmax = 0
    while (3 * (dmax + 1) - 1) ** 2 <= r * ((dmax + 1) ** 2 + 1):
        dmax += 1

    def rec(d, pos, s, q, prefix):
        # remaining entries must sum to s with squares summing to q
        slots = r - pos
        if slots == 1:
            if s * s == q:
                out.append((d,) + tuple(-x for x in prefix) + (-s,))
            return
        lim = isqrt(q)
        for m in range(-lim, lim + 1):
            s2, q2 = s - m, q - m * m
            if s2 * s2 <= (slots - 1) * q2:
                rec(d, pos + 1, s2, q2, prefix + (m,))

    for d in range(0, dmax + 1):
        rec(d, 0, 3 * d - 1, d * d + 1, ())
    return sorted(set(out))


def _odd_minus_two(r: int) -> list:
    """E_1, ..., E_r together with P_j = A - E_j for j >= 2."""
    out = []
    for i in range(1, r + 1):
        e = [0] * (r + 1)
        e[i] = 1
        out.append(tuple(e))
    for j in range(2, r + 1):
        p = [0] * (r + 1)
        p[0] = 1
        p[j] = -1
        out.append(tuple(p))
    return sorted(out)


@lru_cache(maxsize=None)
def build_model(flavor: str, r: int) -> ConeModel:
    if flavor == "even":
        if not 0 <= r <= EVEN_MAX_R:
            raise ValidationError(f"even model needs 0 <= r <= {EVEN_MAX_R}, got {r}")
        n = r + 1
        gram = [[0] * n for _ in range(n)]
        gram[0][0] = 2
        for i in range(1, n):
            gram[i][i] = -2
        minus_two = tuple(_even_minus_two(r))
        if r == 0:
            nef = ((1,),)
            ample = (1,)
        elif r == 1:
            nef = ((0, 1), (1, 1))  # E1 and A - E1 (square 0) bound the cone
            ample = (3, -1)
        else:
            nef = minus_two
            ample = tuple([3] + [-1] * r)
    elif flavor == "odd":
        if not 0 <= r <= ODD_MAX_R:
            raise ValidationError(f"odd model needs 0 <= r <= {ODD_MAX_R}, got {r}")
        n = r + 1
        gram = [[0] * n for _ in range(n)]
        if r >= 1:
            gram[0][1] = gram[1][0] = 1
        for i in range(1, n):
            gram[i][i] = -2
        minus_two = tuple(_odd_minus_two(r))
        nef = minus_two
        if r == 0:
            ample = (1,)
        else:
            ample = tuple([9, 4] + [-1] * (r - 1))
    else:
        raise ValidationError(f"unknown flavor {flavor!r}; expected 'even' or 'odd'")
    return ConeModel(
        flavor=flavor,
        r=r,
        gram=tuple(tuple(row) for row in gram),
        minus_two=minus_two,
        nef_generators=nef,
        ample=ample,
    )


def minus_two_classes(model: ConeModel) -> tuple:
    return model.minus_two


def ample_reference(model: ConeModel) -> tuple:
    return model.ample


@dataclass(frozen=True)
class ReflectionTrace:
    """Ordered (-2)-classes whose reflections map start to end."""

    steps: tuple
    start: tuple
    end: tuple

    def replay(self, model: ConeModel) -> list:
        cur = list(self.start)
        for root in self.steps:
            cur = reflect(model, cur, root)
        return cur

    def holds(self, model: ConeModel) -> bool:
        return tuple(self.replay(model)) == tuple(self.end)


def _as_list_gram(model: ConeModel) -> list:
    return [list(row) for row in model.gram]


def pair(model: ConeModel, x, y) -> int:
    return bilinear(_as_list_gram(model), list(x), list(y))


def is_nef(model: ConeModel, klass) -> tuple[bool, tuple | None]:
    """Pairing >= 0 against every cone generator; on failure returns the
    first violating generator in canonical order."""
    for gen in model.nef_generators:
        if pair(model, klass, gen) < 0:
            return False, gen
    return True, None


def nef_inequality_odd(model: ConeModel, klass) -> bool:
    """Coefficient test d >= 2 m_1 >= 4 m_j >= 0 for odd-flavor classes
    d*A + m_1 E_1 - sum_{j>=2} m_j E_j; equivalent to the pairing test."""
    if model.flavor != "odd":
        raise ValidationError("coefficient nef test applies to odd-flavor models only")
    if len(klass) != model.rank:
        raise ValidationError(f"class length does not match rank {model.rank}")
    d = klass[0]
    if model.r == 0:
        return d >= 0
    m1 = klass[1]
    rest = [-c for c in klass[2:]]
    if not d >= 2 * m1 >= 0:
        return False
    return all(2 * m1 >= 4 * mj >= 0 for mj in rest)


def is_big(model: ConeModel, klass) -> bool:
    """Positive square and positive pairing with the reference ample class."""
    return pair(model, klass, klass) > 0 and pair(model, klass, model.ample) > 0


def reflect(model: ConeModel, klass, root) -> list:
    """Reflection in a (-2)-class: F -> F + (F . R) R."""
    if pair(model, root, root) != -2:
        raise ValidationError("reflections are only taken in classes of square -2")
    s = pair(model, klass, root)
    return [c + s * t for c, t in zip(klass, root)]


def reflection_matrix(model: ConeModel, root) -> list:
    """Matrix of reflect(-, root) acting on coordinate columns."""
    if pair(model, root, root) != -2:
        raise ValidationError("reflections are only taken in classes of square -2")
    n = model.rank
    gr = mat_vec(_as_list_gram(model), list(root))
    m = identity(n)
    for i in range(n):
        for j in range(n):
            m[i][j] += root[i] * gr[j]
    return m


def cremona_matrix(model: ConeModel, indices) -> list:
    """Quadratic involution on an even model attached to three E-indices.

    Acts by F -> F + ((F . R) / 2) R with R = A - E_i - E_j - E_k; the
    matrix is integral because (F . R) is always even here.
    """
    if model.flavor != "even":
        raise ValidationError("the quadratic involution is defined on even models only")
    idx = tuple(indices)
    if len(idx) != 3 or len(set(idx)) != 3 or not all(1 <= i <= model.r for i in idx):
        raise ValidationError(
            f"need three distinct indices in 1..{model.r}, got {list(indices)}"
        )
    root = [0] * model.rank
    root[0] = 1
    for i in idx:
        root[i] = -1
    gr = mat_vec(_as_list_gram(model), root)
    if any(x % 2 for x in gr):
        raise ValidationError("involution class has odd pairings; matrix not integral")
    half = [x // 2 for x in gr]
    m = identity(model.rank)
    for i in range(model.rank):
        for j in range(model.rank):
            m[i][j] += root[i] * half[j]
    return m


def cremona(model: ConeModel, klass, indices) -> list:
    return mat_vec(cremona_matrix(model, indices), list(klass))


@dataclass(frozen=True)
class ZariskiDecomposition:
    positive: tuple  # Fractions
    negative: tuple  # Fractions
    support: tuple  # (-2)-classes spanning the negative part
    coefficients: tuple  # Fraction coefficient per support class

    def p_square(self, model: ConeModel) -> Fraction:
        g = _as_list_gram(model)
        n = len(g)
        return sum(
            self.positive[i] * g[i][j] * self.positive[j]
            for i in range(n)
            for j in range(n)
        )


@lru_cache(maxsize=None)
def _root_tables(flavor: str, r: int):
    """Per-model cache: G.root for every (-2)-class, plus their mutual
    pairing table, so support Grams are table lookups."""
    model = build_model(flavor, r)
    rank = model.rank
    g = model.gram
    g_roots = tuple(
        tuple(sum(g[i][j] * rt[j] for j in range(rank)) for i in range(rank))
        for rt in model.minus_two
    )
    index = {rt: k for k, rt in enumerate(model.minus_two)}
    table = tuple(
        tuple(sum(gr[i] * rt[i] for i in range(rank)) for rt in model.minus_two)
        for gr in g_roots
    )
    return index, g_roots, table


def _negative_definite(gram: list) -> bool:
    """Sylvester criterion via fraction-free (Bareiss) elimination:
    the m-th leading principal minor must have sign (-1)^m."""
    k = len(gram)
    a = [list(row) for row in gram]
    prev = 1
    for t in range(k):
        piv = a[t][t]
        if piv == 0 or (piv > 0) != (t % 2 == 1):
            return False
        for i in range(t + 1, k):
            for j in range(t + 1, k):
                a[i][j] = (a[i][j] * piv - a[i][t] * a[t][j]) // prev
        prev = piv
    return True


def zariski_decompose(model: ConeModel, klass) -> ZariskiDecomposition:
    """Write L = P + N with P orthogonal to every support class, N a
    non-negative rational combination of (-2)-classes with negative
    definite Gram, and P non-negative on the support.

    The support starts at the classes pairing negatively with L and is
    grown until P pairs non-negatively with every (-2)-class of the
    model.  A support whose Gram fails to be negative definite is
    rejected: the input class is then not pseudo-effective.
    """
    if len(klass) != model.rank:
        raise ValidationError(f"class length does not match rank {model.rank}")
    index, g_roots, table = _root_tables(model.flavor, model.r)
    rank = model.rank
    support = [
        rt
        for rt, gr in zip(model.minus_two, g_roots)
        if sum(klass[i] * gr[i] for i in range(rank)) < 0
    ]
    n_total = len(model.minus_two)
    for _ in range(n_total + 1):
        if not support:
            return ZariskiDecomposition(
                positive=tuple(Fraction(c) for c in klass),
                negative=tuple(Fraction(0) for _ in klass),
                support=(),
                coefficients=(),
            )
        k = len(support)
        rows = [index[rt] for rt in support]
        gram_s = [[table[rows[i]][rows[j]] for j in range(k)] for i in range(k)]
        if not _negative_definite(gram_s):
            raise ValidationError(
                "support Gram is not negative definite; "
                "the class is not pseudo-effective"
            )
        rhs = [
            Fraction(sum(klass[i] * g_roots[index[rt]][i] for i in range(rank)))
            for rt in support
        ]
        coeffs = solve_linear([[Fraction(x) for x in row] for row in gram_s], rhs)
        negative = [
            sum((coeffs[i] * support[i][j] for i in range(k)), Fraction(0))
            for j in range(model.rank)
        ]
        positive = [Fraction(c) - nj for c, nj in zip(klass, negative)]
        gp = [
            sum(positive[i] * model.gram[i][j] for i in range(model.rank))
            for j in range(model.rank)
        ]
        in_support = set(support)
        extra = [
            rt
            for rt in model.minus_two
            if rt not in in_support
            and sum(gp[j] * rt[j] for j in range(model.rank) if rt[j]) < 0
        ]
        if not extra:
            return ZariskiDecomposition(
                positive=tuple(positive),
                negative=tuple(negative),
                support=tuple(support),
                coefficients=tuple(coeffs),
            )
        support = sorted(set(support) | set(extra))
    raise ValidationError("support growth failed to stabilise")  # pragma: no cover
