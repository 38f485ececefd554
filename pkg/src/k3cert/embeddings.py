"""Primitive embeddings of rank-2 (and two fixed rank-4) hyperbolic
lattices into the cone models, reflection nef-ification, hypothesis
verification, and the degeneration bookkeeping.

Every public operation returns either a self-verifying Certificate or a
report whose witnesses can be rechecked by exact arithmetic alone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .cones import (
    ConeModel,
    ReflectionTrace,
    build_model,
    is_big,
    is_nef,
    pair,
    reflect,
)
from .errors import ComputationError, ValidationError
from .lattice import Rank2Lattice, reduce_rank2_basis, validate_rank2
from .linalg import bilinear, congruent, is_primitive_matrix, mat_mul, mat_vec
from .squares import (
    is_three_square_excluded,
    iter_five_coprime_squares,
    three_squares,
)

M1_SEARCH_BOUND = 10**4
REFLECTION_BUDGET = 10**5


@dataclass(frozen=True)
class Embedding:
    """Integer matrix whose columns are the images of a source basis."""

    source_gram: tuple
    flavor: str
    r: int
    matrix: tuple  # (r+1) x s, columns = basis images

    @property
    def model(self) -> ConeModel:
        return build_model(self.flavor, self.r)

    @property
    def columns(self) -> list:
        return [list(col) for col in zip(*self.matrix)]

    def image(self, coords) -> list:
        return mat_vec([list(row) for row in self.matrix], list(coords))

    def image_gram(self) -> list:
        g = [list(row) for row in self.model.gram]
        return congruent(g, [list(row) for row in self.matrix])

    def gram_preserved(self) -> bool:
        return self.image_gram() == [list(row) for row in self.source_gram]

    def primitivity(self) -> tuple:
        return is_primitive_matrix([list(row) for row in self.matrix])


@dataclass(frozen=True)
class Certificate:
    source_gram: tuple
    embedding: Embedding
    trace: ReflectionTrace
    image_of_L: tuple
    checks: dict = field(compare=False)

    def self_verify(self) -> bool:
        """Recompute every boolean in checks from the raw fields."""
        fresh = _compute_checks(
            self.embedding, self.image_of_L, dict(self.checks.get("extra", {}))
        )
        return fresh == self.checks and self.trace.holds(self.embedding.model)


def _min_nef_pairing(model: ConeModel, klass):
    if not model.nef_generators:
        return None
    return min(pair(model, klass, gen) for gen in model.nef_generators)


def _compute_checks(emb: Embedding, image_of_L, extra: dict) -> dict:
    model = emb.model
    primitive, factors = emb.primitivity()
    klass = list(image_of_L)
    nef_ok, _ = is_nef(model, klass)
    return {
        "gram_preserved": emb.gram_preserved(),
        "primitive": {"pass": primitive, "invariant_factors": list(factors)},
        "nef": {"pass": nef_ok, "min_pairing": _min_nef_pairing(model, klass)},
        "big": {
            "pass": is_big(model, klass),
            "self_intersection": pair(model, klass, klass),
            "ample_pairing": pair(model, klass, model.ample),
        },
        "extra": extra,
    }


def _make_certificate(emb: Embedding, trace: ReflectionTrace, L_coords, extra: dict) -> Certificate:
    image = tuple(emb.image(L_coords))
    return Certificate(
        source_gram=emb.source_gram,
        embedding=emb,
        trace=trace,
        image_of_L=image,
        checks=_compute_checks(emb, image, extra),
    )


def _empty_trace(klass) -> ReflectionTrace:
    t = tuple(klass)
    return ReflectionTrace(steps=(), start=t, end=t)


def _as_gram(source) -> list:
    if isinstance(source, Rank2Lattice):
        return source.gram
    gram = [list(row) for row in source]
    if len(gram) != 2 or any(len(row) != 2 for row in gram):
        raise ValidationError("expected a rank-2 source (Gram matrix or lattice)")
    return gram


def _inv2(t) -> list:
    """Inverse of a unimodular 2x2 integer matrix."""
    d = t[0][0] * t[1][1] - t[0][1] * t[1][0]
    if d not in (1, -1):
        raise ValidationError("change of basis is not unimodular")
    return [[d * t[1][1], -d * t[0][1]], [-d * t[1][0], d * t[0][0]]]


def _columns_to_matrix(cols) -> list:
    return [list(row) for row in zip(*cols)]


def embed_even(source, L_coords=(1, 0)) -> Certificate:
    """Isometric primitive embedding of an even-determinant rank-2
    hyperbolic lattice into the even rank-7 model.

    The basis is reduced first so the half-Gram reads [[2p, 2m], [2m, 2q]]
    with p >= 0, m >= 0, q < 0; the two image columns are then assembled
    from a coprime five-square decomposition of -q, with the branch
    chosen by the parity of p.  Primitivity is always verified; on
    failure alternative five-square witnesses are tried in order.
    """
    gram = _as_gram(source)
    if gram[0][1] % 2 != 0:
        raise ValidationError("even-determinant path requires an even off-diagonal pairing")
    reduced, t = reduce_rank2_basis(gram)
    p, m, q = reduced[0][0] // 2, reduced[0][1] // 2, reduced[1][1] // 2
    model = build_model("even", 6)

    def f1_column():
        c = [0] * 7
        if p % 2 == 1:
            # ((p+1)/2)(A - E6) + E6
            c[0] = (p + 1) // 2
            c[6] = 1 - (p + 1) // 2
        else:
            # ((p+2)/2)(A - E6) - E1 + E6
            c[0] = (p + 2) // 2
            c[1] = -1
            c[6] = 1 - (p + 2) // 2
        return c

    last_factors = None
    for parts in iter_five_coprime_squares(-q):
        c2 = [0] * 7
        scale = m if p % 2 == 1 else m + parts[0]
        c2[0] = scale
        c2[6] = -scale
        for i, mi in enumerate(parts, start=1):
            c2[i] -= mi
        cols = [f1_column(), c2]
        matrix = _columns_to_matrix(cols)
        emb_red = Embedding(
            source_gram=tuple(tuple(row) for row in reduced),
            flavor="even",
            r=6,
            matrix=tuple(tuple(row) for row in matrix),
        )
        ok, factors = emb_red.primitivity()
        last_factors = factors
        if not ok:
            continue
        # compose with the inverse change of basis to image the
        # original (unreduced) source basis
        full = mat_mul(matrix, _inv2(t))
        emb = Embedding(
            source_gram=tuple(tuple(row) for row in gram),
            flavor="even",
            r=6,
            matrix=tuple(tuple(row) for row in full),
        )
        if not emb.gram_preserved():
            raise ValidationError("image columns fail to reproduce the source Gram")
        return _make_certificate(
            emb,
            _empty_trace(emb.image(L_coords)),
            L_coords,
            {"squares_witness": list(parts), "reduced_gram": reduced,
             "basis_change": t},
        )
    raise ComputationError(
        f"no five-square witness yields a primitive embedding "
        f"(last invariant factors {last_factors})"
    )


def embed_odd(source, L_coords=(1, 0), m1_bound=M1_SEARCH_BOUND) -> Certificate:
    """Isometric primitive embedding of an odd-determinant rank-2
    hyperbolic lattice into the odd rank-5 model.

    After reduction the half-Gram is [[2p, m], [m, 2q]] with p >= 0,
    m > 0 odd, q < 0; the construction searches m1 = 1, 2, ... for the
    first value making (m - q*m1)*m1 - p a sum of three squares and the
    resulting columns primitive.
    """
    gram = _as_gram(source)
    if gram[0][1] % 2 == 0:
        raise ValidationError("odd-determinant path requires an odd off-diagonal pairing")
    reduced, t = reduce_rank2_basis(gram)
    p, m, q = reduced[0][0] // 2, reduced[0][1], reduced[1][1] // 2
    model = build_model("odd", 4)

    for m1 in range(1, m1_bound + 1):
        target = (m - q * m1) * m1 - p
        if target <= 0:
            continue
        excluded, _ = is_three_square_excluded(target)
        if excluded:
            continue
        parts = three_squares(target).parts
        c1 = [m - q * m1 + m1, m1, -parts[0], -parts[1], -parts[2]]
        c2 = [q + 1, 1, 0, 0, 0]
        matrix = _columns_to_matrix([c1, c2])
        emb_red = Embedding(
            source_gram=tuple(tuple(row) for row in reduced),
            flavor="odd",
            r=4,
            matrix=tuple(tuple(row) for row in matrix),
        )
        ok, _factors = emb_red.primitivity()
        if not ok:
            continue
        full = mat_mul(matrix, _inv2(t))
        emb = Embedding(
            source_gram=tuple(tuple(row) for row in gram),
            flavor="odd",
            r=4,
            matrix=tuple(tuple(row) for row in full),
        )
        if not emb.gram_preserved():
            raise ValidationError("image columns fail to reproduce the source Gram")
        return _make_certificate(
            emb,
            _empty_trace(emb.image(L_coords)),
            L_coords,
            {"m1": m1, "squares_witness": list(parts), "reduced_gram": reduced,
             "basis_change": t},
        )
    raise ComputationError(f"m1 search bound {m1_bound} exhausted")


def _reflect_embedding(model: ConeModel, emb: Embedding, root) -> Embedding:
    cols = [reflect(model, col, root) for col in emb.columns]
    return Embedding(
        source_gram=emb.source_gram,
        flavor=emb.flavor,
        r=emb.r,
        matrix=tuple(tuple(row) for row in _columns_to_matrix(cols)),
    )


def nefify(model: ConeModel, emb: Embedding, L_coords) -> tuple:
    """Reflect the embedding until the image of L is nef.

    At each step the first (canonical-order) (-2)-class pairing
    negatively with the image is reflected; the pairing with the
    reference ample class strictly decreases, which bounds the loop.
    The embedding's global sign is flipped first if that pairing starts
    negative (a sign flip is an isometry).
    """
    if (model.flavor, model.r) != (emb.flavor, emb.r):
        raise ValidationError("model does not match the embedding's target")
    sigma_l = emb.image(L_coords)
    sq = pair(model, sigma_l, sigma_l)
    if sq < 0 or all(c == 0 for c in sigma_l):
        raise ValidationError("nef-ification requires a nonzero class of square >= 0")
    if pair(model, sigma_l, model.ample) < 0:
        emb = Embedding(
            source_gram=emb.source_gram,
            flavor=emb.flavor,
            r=emb.r,
            matrix=tuple(tuple(-x for x in row) for row in emb.matrix),
        )
        sigma_l = emb.image(L_coords)
    start = tuple(sigma_l)
    steps = []
    height = pair(model, sigma_l, model.ample)
    for _ in range(REFLECTION_BUDGET):
        ok, root = is_nef(model, sigma_l)
        if ok:
            trace = ReflectionTrace(steps=tuple(steps), start=start, end=tuple(sigma_l))
            return emb, trace
        emb = _reflect_embedding(model, emb, root)
        sigma_l = emb.image(L_coords)
        steps.append(tuple(root))
        new_height = pair(model, sigma_l, model.ample)
        if new_height >= height:
            raise ComputationError(
                f"ample pairing failed to decrease ({height} -> {new_height}); "
                f"trace so far: {steps}"
            )
        height = new_height
    raise ComputationError(f"reflection budget {REFLECTION_BUDGET} exhausted; trace: {steps}")


def nefify_pair(model: ConeModel, emb: Embedding, L_coords, C_coords) -> tuple:
    """Normalise a second class against a nef and big first class.

    Reflections in (-2)-classes orthogonal to the image of L fix that
    image; they are applied while some such class pairs positively with
    the image of C (the sign convention that makes N*L - C eventually
    nef).  Returns the adjusted embedding and the smallest N with
    N * (L.R) >= C.R for every listed class and (N L - C)^2 > 0.
    """
    sigma_l = emb.image(L_coords)
    ok, bad = is_nef(model, sigma_l)
    if not ok:
        raise ValidationError(f"image of L is not nef (fails against {bad})")
    if not is_big(model, sigma_l):
        raise ValidationError("image of L is not big")
    s0 = [rt for rt in model.minus_two if pair(model, sigma_l, rt) == 0]
    for _ in range(REFLECTION_BUDGET):
        sigma_c = emb.image(C_coords)
        root = next((rt for rt in s0 if pair(model, sigma_c, rt) > 0), None)
        if root is None:
            break
        emb = _reflect_embedding(model, emb, root)
    else:
        raise ComputationError(f"reflection budget {REFLECTION_BUDGET} exhausted")
    sigma_l = emb.image(L_coords)
    sigma_c = emb.image(C_coords)
    n = 0
    for rt in model.minus_two:
        lr, cr = pair(model, sigma_l, rt), pair(model, sigma_c, rt)
        if lr > 0:
            n = max(n, -(-cr // lr))  # ceil(cr / lr)
        elif cr > 0:
            raise ComputationError(
                f"class {rt} is orthogonal to the image of L but still pairs "
                f"positively with the image of C"
            )
    while True:
        cand = [n * a - b for a, b in zip(sigma_l, sigma_c)]
        if pair(model, cand, cand) > 0:
            return emb, n
        n += 1


def embed_a3_explicit(a: int, b: int) -> Certificate:
    """Explicit embedding of Z L1 + Z L2 (L1^2 = 2a, L1.L2 = b,
    L2^2 = -2) into the odd rank-6 model, with nef and big image of
    L = L1 + L2; requires a, b >= 1 and a + b >= 9.

    The three branches by b mod 3 place a fixed multiple of E1 plus a
    string of delta further exceptional classes, delta in {1, 2, 3}
    chosen to make the leading coefficient integral.
    """
    if a < 1 or b < 1:
        raise ValidationError("need a >= 1 and b >= 1")
    if a + b < 9:
        raise ValidationError(f"need a + b >= 9, got {a + b}")
    rem = b % 3
    if rem == 0:
        delta = 3 + 3 * (a // 3) - a
        lead = (a + 9 + delta) // 3
        if lead * 3 != a + 9 + delta:
            raise ComputationError("branch coefficient is not integral")
        l1 = [lead, 3, 0, 0, 0, 0]
        l2 = [b // 3, 0, -1, 0, 0, 0]
    else:
        delta = 2 + 3 * ((a + 1) // 3) - a
        if rem == 1:
            lead = (a + 13 + delta) // 3
            if lead * 3 != a + 13 + delta:
                raise ComputationError("branch coefficient is not integral")
            l1 = [lead, 3, -2, 0, 0, 0]
            l2 = [(b - 4) // 3, 0, 1, 0, 0, 0]
        else:
            lead = (a + 10 + delta) // 3
            if lead * 3 != a + 10 + delta:
                raise ComputationError("branch coefficient is not integral")
            l1 = [lead, 3, -1, 0, 0, 0]
            l2 = [(b - 2) // 3, 0, 1, 0, 0, 0]
    for i in range(3, 3 + delta):
        l1[i] = -1
    model = build_model("odd", 5)
    emb = Embedding(
        source_gram=((2 * a, b), (b, -2)),
        flavor="odd",
        r=5,
        matrix=tuple(tuple(row) for row in _columns_to_matrix([l1, l2])),
    )
    if not emb.gram_preserved():
        raise ComputationError("explicit branch columns fail the Gram check")
    sigma = emb.image([1, 1])
    extra = {
        "branch": rem,
        "delta": delta,
        "sigma_L_dot_A": pair(model, sigma, [1, 0, 0, 0, 0, 0]),
        "sigma_L_dot_E5": pair(model, sigma, [0, 0, 0, 0, 0, 1]),
    }
    extra["sigma_L_dot_A_ge_3"] = extra["sigma_L_dot_A"] >= 3
    extra["sigma_L_dot_E5_le_2"] = extra["sigma_L_dot_E5"] <= 2
    return _make_certificate(emb, _empty_trace(sigma), [1, 1], extra)


RANK4_COLUMNS = {
    1: ([2, 1, 0, 0, 0], [-1, 0, 1, 0, 0], [-1, 0, 0, 1, 0], [-1, 0, 0, 0, 1]),
    2: (
        [12, 6, -4, -3, -2, -1],
        [1, 0, -1, 0, 0, 0],
        [0, -1, 0, 0, 0, 0],
        [1, 0, 0, -1, 0, 0],
    ),
}

RANK4_GRAMS = {
    1: ((2, -1, -1, -1), (-1, -2, 0, 0), (-1, 0, -2, 0), (-1, 0, 0, -2)),
    2: ((12, -2, 0, 0), (-2, -2, -1, 0), (0, -1, -2, -1), (0, 0, -1, -2)),
}


def embed_rank4(which: int) -> Certificate:
    """The two fixed rank-4 embeddings, into the odd rank-5 (which=1)
    and odd rank-6 (which=2) models."""
    if which not in RANK4_COLUMNS:
        raise ValidationError(f"which must be 1 or 2, got {which}")
    cols = RANK4_COLUMNS[which]
    r = len(cols[0]) - 1
    emb = Embedding(
        source_gram=RANK4_GRAMS[which],
        flavor="odd",
        r=r,
        matrix=tuple(tuple(row) for row in _columns_to_matrix(list(cols))),
    )
    if not emb.gram_preserved():
        raise ComputationError("hardcoded rank-4 columns fail the Gram check")
    sigma = emb.image([1, 0, 0, 0])
    return _make_certificate(emb, _empty_trace(sigma), [1, 0, 0, 0], {"which": which})


def _odd_coeffs(model: ConeModel, klass) -> tuple:
    if model.flavor != "odd":
        raise ValidationError("expected an odd-flavor model")
    if len(klass) != model.rank:
        raise ValidationError(f"class length does not match rank {model.rank}")
    d, m1 = klass[0], klass[1]
    rest = [-c for c in klass[2:]]
    return d, m1, rest


F_CLASS = (4, 2, -1, -1, -1, -1)  # square-zero mover class on the odd rank-6 model


def rank4_split(model: ConeModel, klass) -> tuple:
    """Split a nef class on the odd rank-6 model into a bounded piece
    plus copies of the square-zero class F = 4A + 2E1 - sum(E_i)."""
    if (model.flavor, model.r) != ("odd", 5):
        raise ValidationError("splitting is defined on the odd rank-6 model")
    d, m1, rest = _odd_coeffs(model, klass)
    m2, m3, m4, m5 = rest
    if not (m2 >= m3 >= m4 >= m5):
        raise ValidationError("coordinates must be sorted so m2 >= m3 >= m4 >= m5")
    if not (2 * m1 >= 4 * m2 and m5 >= 0 and m1 >= 3 and d >= 4 * m5):
        raise ValidationError(
            "normalization 2 m1 >= 4 m2 >= ... >= 4 m5 >= 0, m1 >= 3, d >= 4 m5 violated"
        )
    if m5 <= 1:
        return "unsplit", [(1, tuple(klass))]
    if m1 - 2 * m5 >= 1:
        p = (d - 4 * m5 + 4, m1 - 2 * m5 + 2) + tuple(-(mi - m5 + 1) for mi in rest)
        return "bounded_plus_movers", [(1, p), (m5 - 1, F_CLASS)]
    # 2 m1 >= 4 m5 and not m1 - 2 m5 >= 1 forces m1 = 2 m5
    a_class = (1, 0, 0, 0, 0, 0)
    return "movers_only", [(d - 4 * m5, a_class), (m5, F_CLASS)]


@dataclass(frozen=True)
class HypothesisReport:
    a1: bool
    a2: tuple | None  # (L1, L2, L3)
    a3: tuple | None  # (L1, L2)
    a3_flags: dict


def _box(bounds):
    """All integer pairs with |x| <= bounds[0], |y| <= bounds[1], in
    ascending lexicographic order."""
    return [
        (x, y)
        for x in range(-bounds[0], bounds[0] + 1)
        for y in range(-bounds[1], bounds[1] + 1)
    ]


def verify_hypotheses(lam: Rank2Lattice, L, search_margin: int = 2) -> HypothesisReport:
    """Check the three alternative hypotheses for a polarized rank-2
    lattice: even pairing parity (A1), a triple split of L into classes
    of positive square and positive pairing with L (A2), and a split
    L = L1 + L2 with L2 of square -2 and the size/coprimality side
    conditions (A3).  Searches are exhaustive over a box bounded by the
    coordinates of L plus search_margin."""
    g = lam.gram
    lsq = bilinear(g, list(L), list(L))
    if lsq <= 0:
        raise ValidationError("hypothesis verification requires L^2 > 0")
    a1 = lam.a % 2 == 0
    bounds = (abs(L[0]) + search_margin, abs(L[1]) + search_margin)
    box = _box(bounds)

    def good(c):
        return bilinear(g, c, c) > 0 and bilinear(g, list(L), c) > 0

    a2 = None
    for l1 in box:
        if not good(list(l1)):
            continue
        for l2 in box:
            l3 = [L[0] - l1[0] - l2[0], L[1] - l1[1] - l2[1]]
            if good(list(l2)) and good(l3):
                a2 = (l1, l2, (l3[0], l3[1]))
                break
        if a2 is not None:
            break

    a3 = None
    a3_flags = {}
    for l1 in box:
        l2 = (L[0] - l1[0], L[1] - l1[1])
        if bilinear(g, list(l2), list(l2)) != -2:
            continue
        l1sq = bilinear(g, list(l1), list(l1))
        flags = {
            "l1_square_positive": l1sq > 0,
            "l_dot_l1_positive": bilinear(g, list(L), list(l1)) > 0,
            "l_dot_l2_positive": bilinear(g, list(L), list(l2)) > 0,
            "l1_not_in_2_lambda": l1[0] % 2 != 0 or l1[1] % 2 != 0,
            "difference_primitive": gcd(l1[0] - l2[0], l1[1] - l2[1]) == 1,
            "size_bound": l1sq + 2 * bilinear(g, list(l1), list(l2)) >= 18,
        }
        if all(flags.values()):
            a3 = (l1, l2)
            a3_flags = flags
            break
    return HypothesisReport(a1=a1, a2=a2, a3=a3, a3_flags=a3_flags)


@dataclass(frozen=True)
class DegenerationLedger:
    r: int
    permutation: tuple  # sorting of the E_2..E_r coordinates, as indices
    restriction_y1: tuple  # coords in basis (A1, B1, G1, ..., G_{2r-2})
    restriction_y2: int  # multiplicity of A2
    m_class: tuple
    summands: tuple  # (multiplicity, class) pairs
    m_dot_d: int
    lam: int
    m: int

    def recombined(self) -> list:
        n = len(self.m_class)
        total = [0] * n
        for mult, cls in self.summands:
            for i in range(n):
                total[i] += mult * cls[i]
        return total


def _y1_gram(r: int) -> list:
    n = 2 * r
    g = [[0] * n for _ in range(n)]
    g[0][1] = g[1][0] = 1
    g[1][1] = -2
    for i in range(2, n):
        g[i][i] = -1
    return g


def restrict_and_decompose(r: int, klass) -> DegenerationLedger:
    """Restrict an odd-model class to the two components of the
    degenerate surface and decompose the adjusted class M into moving
    summands of non-negative multiplicity.

    The Y1 basis is (A1, B1, G1, ..., G_{2r-2}) with Gram
    [[0,1],[1,-2]] (+) (-1) I; the reference class D = 4A1 + 2B1 - sum G_i
    satisfies D^2 = 10 - 2r.  Coordinates m_2 >= ... >= m_r are sorted
    first (recorded as a permutation).
    """
    if not 2 <= r <= 5:
        raise ValidationError(f"r must be in 2..5, got {r}")
    model = build_model("odd", r)
    d, m1, rest = _odd_coeffs(model, klass)
    order = sorted(range(len(rest)), key=lambda i: -rest[i])
    ms = [rest[i] for i in order]
    if not (d >= 2 * m1 and (not ms or 2 * m1 >= 4 * ms[0]) and (not ms or ms[-1] >= 0)):
        raise ValidationError("normalization d >= 2 m1 >= 4 max(m_j) >= 0 violated")
    if m1 < 2:
        raise ValidationError("normalization requires m1 >= 2")
    if r == 5 and ms[3] > 1:
        raise ValidationError("for r = 5 the smallest multiplicity must be <= 1")

    n = 2 * r
    g1 = _y1_gram(r)
    restriction = [0] * n
    restriction[0], restriction[1] = d, m1
    for j, mj in enumerate(ms, start=2):
        restriction[2 * j - 3 + 1] -= mj  # G_{2j-3} is basis slot 2j-2
        restriction[2 * j - 2 + 1] -= mj
    y2_mult = d - sum(ms)

    d_class = [4, 2] + [-1] * (n - 2)
    d_sq = bilinear(g1, d_class, d_class)
    if d_sq != 10 - 2 * r:
        raise ComputationError(f"reference class square {d_sq} != {10 - 2 * r}")

    # last index (2-based) with positive multiplicity
    a_idx = 1
    for j, mj in enumerate(ms, start=2):
        if mj > 0:
            a_idx = j
    m_class = [0] * n
    m_class[0], m_class[1] = d - 4, m1 - 2
    for j in range(2, a_idx + 1):
        m_class[2 * j - 2] -= ms[j - 2] - 1
        m_class[2 * j - 1] -= ms[j - 2] - 1

    def string(upto, parity):
        """2A1 + B1 - sum_{j=2}^{upto} G (odd or even member of pair j)."""
        c = [0] * n
        c[0], c[1] = 2, 1
        for j in range(2, upto + 1):
            c[2 * j - 2 + parity] -= 1
        return tuple(c)

    summands = []
    if a_idx >= 2:
        tail = ms[a_idx - 2]
        summands.append((tail - 1, string(a_idx, 0)))
        summands.append((tail - 1, string(a_idx, 1)))
        for i in range(2, a_idx):
            diff = ms[i - 2] - ms[i - 1]
            summands.append((diff, string(i, 0)))
            summands.append((diff, string(i, 1)))
        summands.append((m1 - 2 * ms[0], string(1, 0)))
    else:
        summands.append((m1 - 2, string(1, 0)))
    a1_class = tuple([1] + [0] * (n - 1))
    summands.append((d - 2 * m1, a1_class))
    summands = tuple((mult, cls) for mult, cls in summands if mult > 0)
    if any(mult < 0 for mult, _ in summands):
        raise ComputationError("negative multiplicity in decomposition")

    m_dot_d = bilinear(g1, m_class, d_class)
    lam = max(0, min(4, m_dot_d - 1))
    ledger = DegenerationLedger(
        r=r,
        permutation=tuple(order),
        restriction_y1=tuple(restriction),
        restriction_y2=y2_mult,
        m_class=tuple(m_class),
        summands=summands,
        m_dot_d=m_dot_d,
        lam=lam,
        m=m_dot_d - lam,
    )
    if ledger.recombined() != list(m_class):
        raise ComputationError("summands fail to recombine to M")
    return ledger


def certify(lam, L) -> Certificate:
    """Full pipeline: validate, embed by determinant parity, reflect to
    a nef image, and package a self-verifying certificate."""
    if not isinstance(lam, Rank2Lattice):
        lam = validate_rank2(*lam)
    L = list(L)
    if len(L) != 2:
        raise ValidationError("L must have two coordinates")
    lsq = bilinear(lam.gram, L, L)
    if lsq <= 0:
        raise ValidationError(f"L^2 = {lsq} must be positive")

    if lam.a % 2 == 0:
        cert = embed_even(lam, L)
        model = build_model("even", 6)
        emb, trace = nefify(model, cert.embedding, L)
        extra = dict(cert.checks["extra"])
        extra["path"] = "even"
        return _make_certificate(emb, trace, L, extra)

    report = verify_hypotheses(lam, L)
    if report.a3 is not None:
        l1, l2 = report.a3
        det = l1[0] * l2[1] - l1[1] * l2[0]
        aa = bilinear(lam.gram, list(l1), list(l1)) // 2
        bb = bilinear(lam.gram, list(l1), list(l2))
        if det in (1, -1) and aa >= 1 and bb >= 1 and aa + bb >= 9:
            inner = embed_a3_explicit(aa, bb)
            # re-express the image on the original basis (F1, F2)
            w = [[l1[0], l2[0]], [l1[1], l2[1]]]
            full = mat_mul([list(row) for row in inner.embedding.matrix], _inv2(w))
            emb = Embedding(
                source_gram=tuple(tuple(row) for row in lam.gram),
                flavor="odd",
                r=5,
                matrix=tuple(tuple(row) for row in full),
            )
            extra = dict(inner.checks["extra"])
            extra.update({"path": "odd_a3", "witness_l1": list(l1), "witness_l2": list(l2)})
            return _make_certificate(emb, _empty_trace(emb.image(L)), L, extra)

    cert = embed_odd(lam, L)
    model = build_model("odd", 4)
    emb, trace = nefify(model, cert.embedding, L)
    sigma = emb.image(L)
    extra = dict(cert.checks["extra"])
    a_pairing = pair(model, sigma, [1, 0, 0, 0, 0])
    extra.update(
        {
            "path": "odd_generic",
            "a1": report.a1,
            "a2_witness": report.a2,
            "a3_witness": report.a3,
            "sigma_L_dot_A": a_pairing,
            "sigma_L_dot_A_ge_3": a_pairing >= 3,
        }
    )
    return _make_certificate(emb, trace, L, extra)
