"""Command-line front end emitting machine-checkable JSON certificates.

Every subcommand builds a document

    {schema_version, command, inputs, result, checks}

where `result` holds raw data only and every entry of `checks` is
recomputable from `result` alone; the `check` subcommand does exactly
that and additionally re-runs the command on the echoed inputs,
comparing the result byte-for-byte.

Exit codes: 0 success, 1 input validation failure, 2 computation
(search/step budget) failure.  Errors are emitted as JSON on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from math import gcd

from . import cones, embeddings, lattice, linalg, squares
from .errors import ComputationError, K3CertError, LegendreExclusion, ValidationError

SCHEMA_VERSION = "1.0"


# ---------------------------------------------------------------- encoding

def _encode(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, bool) or isinstance(obj, int) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _frac(x) -> Fraction:
    if isinstance(x, str):
        num, _, den = x.partition("/")
        return Fraction(int(num), int(den or "1"))
    return Fraction(x)


def _dumps(doc, pretty=False) -> str:
    if pretty:
        return json.dumps(doc, indent=2)
    return json.dumps(doc, separators=(",", ":"))


def _parse_class(text) -> list:
    try:
        return [int(x) for x in str(text).split(",")]
    except ValueError as exc:
        raise ValidationError(f"cannot parse integer vector from {text!r}") from exc


def _parse_matrix(text) -> list:
    rows = [_parse_class(row) for row in str(text).split(";")]
    if len({len(r) for r in rows}) != 1:
        raise ValidationError("matrix rows have inconsistent lengths")
    return rows


def _check(name, ok, details=None):
    return {"name": name, "pass": bool(ok), "details": _encode(details or {})}


# ---------------------------------------------------------------- handlers
#
# Each handler: inputs dict -> JSON-able result dict.
# Each checker: result dict -> checks list (reads result only).

def _h_lattice_validate(inputs):
    lam = lattice.validate_rank2(inputs["d"], inputs["a"], inputs["b"])
    return {
        "d": lam.d,
        "a": lam.a,
        "b": lam.b,
        "gram": lam.gram,
        "determinant": lam.determinant,
        "parity": "even" if lam.det_is_even else "odd",
    }


def _c_lattice_validate(result):
    d, a, b = result["d"], result["a"], result["b"]
    det = 4 * b * d - a * a
    return [
        _check("hyperbolic", det < 0 and d > 0, {"determinant": det}),
        _check(
            "parity_consistent",
            (result["parity"] == "even") == (a % 2 == 0),
            {"a": a},
        ),
    ]


def _h_squares(inputs):
    n, k = inputs["n"], inputs["k"]
    if k == 3:
        w = squares.three_squares(n)
    elif k == 4:
        w = squares.four_squares(n)
    elif k == 5:
        w = squares.five_coprime_squares(n)
    else:
        raise ValidationError(f"k must be 3, 4 or 5, got {k}")
    return {"n": n, "k": k, "parts": list(w.parts), "gcd": w.gcd, "exponent": w.exponent}


def _c_squares(result):
    from functools import reduce

    n, k, parts = result["n"], result["k"], result["parts"]
    g = reduce(gcd, parts)
    l = result["exponent"]
    checks = [
        _check(
            "witness_holds",
            sum(p * p for p in parts) == n
            and len(parts) == k
            and g == result["gcd"] == 2**l,
            {"gcd": g},
        )
    ]
    if k == 3:
        ok = n % 4**l == 0 and (n // 4**l) % 4 != 0
    elif k == 4:
        ok = (l == 0 and n % 2 == 1) or (
            n % 2 ** (2 * l + 1) == 0 and n % 2 ** (2 * l + 3) != 0
        )
    else:
        ok = g == 1
    checks.append(_check("gcd_exponent_dictated", ok, {"exponent": l}))
    return checks


def _h_cones_enumerate(inputs):
    model = cones.build_model(inputs["flavor"], inputs["r"])
    return {
        "flavor": model.flavor,
        "r": model.r,
        "gram": [list(row) for row in model.gram],
        "count": len(model.minus_two),
        "classes": [list(c) for c in model.minus_two],
        "nef_generators": [list(c) for c in model.nef_generators],
        "ample": list(model.ample),
    }


def _c_cones_enumerate(result):
    g = result["gram"]
    amp = result["ample"]
    sq = linalg.bilinear(g, amp, amp)
    # the rank-1 odd model has no class of positive square at all
    square_ok = sq > 0 or (result["flavor"] == "odd" and result["r"] == 0)
    return [
        _check(
            "classes_square_minus_two",
            all(linalg.bilinear(g, c, c) == -2 for c in result["classes"]),
            {},
        ),
        _check("count_matches", result["count"] == len(result["classes"]), {}),
        _check(
            "ample_reference_positive",
            square_ok
            and all(linalg.bilinear(g, amp, c) > 0 for c in result["nef_generators"]),
            {"self_intersection": sq},
        ),
    ]


def _h_nef(inputs):
    model = cones.build_model(inputs["flavor"], inputs["r"])
    klass = inputs["class"]
    ok, failing = cones.is_nef(model, klass)
    result = {
        "flavor": model.flavor,
        "r": model.r,
        "class": list(klass),
        "nef": ok,
        "failing_class": list(failing) if failing else None,
        "min_pairing": (
            min(cones.pair(model, klass, g) for g in model.nef_generators)
            if model.nef_generators
            else None
        ),
    }
    if model.flavor == "odd":
        result["coefficient_chain"] = cones.nef_inequality_odd(model, klass)
    return result


def _c_nef(result):
    model = cones.build_model(result["flavor"], result["r"])
    klass = result["class"]
    ok, _ = cones.is_nef(model, klass)
    checks = [_check("pairing_definition", ok == result["nef"], {})]
    if model.flavor == "odd":
        checks.append(
            _check(
                "chain_agreement",
                cones.nef_inequality_odd(model, klass) == result["nef"],
                {},
            )
        )
    return checks


def _h_zariski(inputs):
    model = cones.build_model(inputs["flavor"], inputs["r"])
    klass = inputs["class"]
    z = cones.zariski_decompose(model, klass)
    return {
        "flavor": model.flavor,
        "r": model.r,
        "class": list(klass),
        "positive": [_encode(x) for x in z.positive],
        "negative": [_encode(x) for x in z.negative],
        "support": [list(c) for c in z.support],
        "coefficients": [_encode(x) for x in z.coefficients],
        "p_square": _encode(z.p_square(model)),
    }


def _c_zariski(result):
    model = cones.build_model(result["flavor"], result["r"])
    g = [[Fraction(x) for x in row] for row in model.gram]
    p = [_frac(x) for x in result["positive"]]
    n = [_frac(x) for x in result["negative"]]
    klass = result["class"]

    def bil(x, y):
        return sum(x[i] * g[i][j] * y[j] for i in range(len(g)) for j in range(len(g)))

    support = result["support"]
    k = len(support)
    sig_ok = True
    if k:
        gram_s = [
            [cones.pair(model, support[i], support[j]) for j in range(k)] for i in range(k)
        ]
        sig_ok = linalg.signature(gram_s) == (0, k, 0)
    return [
        _check(
            "recombination",
            all(p[i] + n[i] == klass[i] for i in range(len(klass))),
            {},
        ),
        _check("orthogonality", bil(p, n) == 0, {}),
        _check(
            "positive_part_nef",
            all(bil(p, [Fraction(c) for c in rt]) >= 0 for rt in model.minus_two),
            {},
        ),
        _check(
            "coefficients_nonnegative",
            all(_frac(c) >= 0 for c in result["coefficients"]),
            {},
        ),
        _check("support_negative_definite", sig_ok, {}),
        _check("p_square_matches", _frac(result["p_square"]) == bil(p, p), {}),
    ]


def _h_cremona(inputs):
    model = cones.build_model("even", inputs["r"])
    idx = inputs["ijk"]
    klass = inputs["class"]
    matrix = cones.cremona_matrix(model, idx)
    return {
        "r": model.r,
        "indices": list(idx),
        "class": list(klass),
        "image": cones.cremona(model, klass, idx),
        "matrix": matrix,
    }


def _c_cremona(result):
    model = cones.build_model("even", result["r"])
    g = [list(row) for row in model.gram]
    m = result["matrix"]
    return [
        _check("isometry", linalg.congruent(g, m) == g, {}),
        _check("involution", linalg.mat_mul(m, m) == linalg.identity(len(m)), {}),
        _check(
            "image_matches", linalg.mat_vec(m, result["class"]) == result["image"], {}
        ),
    ]


def _certificate_result(cert):
    emb = cert.embedding
    extra = cert.checks["extra"]
    return {
        "source_gram": [list(row) for row in cert.source_gram],
        "flavor": emb.flavor,
        "r": emb.r,
        "matrix": [list(row) for row in emb.matrix],
        "image_of_L": list(cert.image_of_L),
        "trace": {
            "steps": [list(s) for s in cert.trace.steps],
            "start": list(cert.trace.start),
            "end": list(cert.trace.end),
        },
        "extra": _encode(extra),
    }


def _certificate_checks(result):
    emb = embeddings.Embedding(
        source_gram=tuple(tuple(row) for row in result["source_gram"]),
        flavor=result["flavor"],
        r=result["r"],
        matrix=tuple(tuple(row) for row in result["matrix"]),
    )
    model = emb.model
    trace = cones.ReflectionTrace(
        steps=tuple(tuple(s) for s in result["trace"]["steps"]),
        start=tuple(result["trace"]["start"]),
        end=tuple(result["trace"]["end"]),
    )
    image = result["image_of_L"]
    primitive, factors = emb.primitivity()
    nef_ok, _ = cones.is_nef(model, image)
    sq = cones.pair(model, image, image)
    amp = cones.pair(model, image, model.ample)
    return [
        _check("gram_preserved", emb.gram_preserved(), {}),
        _check("primitive", primitive, {"invariant_factors": list(factors)}),
        _check(
            "nef",
            nef_ok,
            {
                "min_pairing": (
                    min(cones.pair(model, image, g) for g in model.nef_generators)
                    if model.nef_generators
                    else None
                )
            },
        ),
        _check(
            "big",
            sq > 0 and amp > 0,
            {"self_intersection": sq, "ample_pairing": amp},
        ),
        _check(
            "trace_replay",
            trace.holds(model) and list(trace.end) == list(image),
            {},
        ),
    ]


def _h_embed(inputs):
    lam = lattice.validate_rank2(inputs["d"], inputs["a"], inputs["b"])
    if inputs.get("L") is not None:
        cert = embeddings.certify(lam, inputs["L"])
        res = _certificate_result(cert)
        res["L"] = list(inputs["L"])
        return res
    if lam.a % 2 == 0:
        cert = embeddings.embed_even(lam)
    else:
        cert = embeddings.embed_odd(lam)
    res = _certificate_result(cert)
    res["L"] = [1, 0]
    return res


def _c_embed(result):
    checks = _certificate_checks(result)
    image = linalg.mat_vec(result["matrix"], result["L"])
    checks.append(
        _check("image_consistent", image == list(result["image_of_L"]), {})
    )
    return checks


def _h_nefify(inputs):
    model = cones.build_model(inputs["flavor"], inputs["r"])
    matrix = inputs["matrix"]
    if len(matrix) != model.rank:
        raise ValidationError(
            f"matrix must have {model.rank} rows for this model, got {len(matrix)}"
        )
    source_gram = linalg.congruent([list(r) for r in model.gram], matrix)
    emb = embeddings.Embedding(
        source_gram=tuple(tuple(row) for row in source_gram),
        flavor=model.flavor,
        r=model.r,
        matrix=tuple(tuple(row) for row in matrix),
    )
    new_emb, trace = embeddings.nefify(model, emb, inputs["L"])
    return {
        "flavor": model.flavor,
        "r": model.r,
        "source_gram": source_gram,
        "input_matrix": [list(row) for row in matrix],
        "matrix": [list(row) for row in new_emb.matrix],
        "L": list(inputs["L"]),
        "image_of_L": new_emb.image(inputs["L"]),
        "trace": {
            "steps": [list(s) for s in trace.steps],
            "start": list(trace.start),
            "end": list(trace.end),
        },
    }


def _c_nefify(result):
    model = cones.build_model(result["flavor"], result["r"])
    emb = embeddings.Embedding(
        source_gram=tuple(tuple(row) for row in result["source_gram"]),
        flavor=result["flavor"],
        r=result["r"],
        matrix=tuple(tuple(row) for row in result["matrix"]),
    )
    trace = cones.ReflectionTrace(
        steps=tuple(tuple(s) for s in result["trace"]["steps"]),
        start=tuple(result["trace"]["start"]),
        end=tuple(result["trace"]["end"]),
    )
    nef_ok, _ = cones.is_nef(model, result["image_of_L"])
    start_sq = cones.pair(model, trace.start, trace.start)
    end_sq = cones.pair(model, trace.end, trace.end)
    return [
        _check("gram_preserved", emb.gram_preserved(), {}),
        _check("nef", nef_ok, {}),
        _check(
            "trace_replay",
            trace.holds(model) and list(trace.end) == list(result["image_of_L"]),
            {},
        ),
        _check("square_preserved", start_sq == end_sq, {"square": end_sq}),
    ]


def _h_a3(inputs):
    cert = embeddings.embed_a3_explicit(inputs["a"], inputs["b"])
    res = _certificate_result(cert)
    res["L"] = [1, 1]
    return res


def _c_a3(result):
    checks = _certificate_checks(result)
    model = cones.build_model(result["flavor"], result["r"])
    image = result["image_of_L"]
    a_pairing = cones.pair(model, image, [1, 0, 0, 0, 0, 0])
    e5_pairing = cones.pair(model, image, [0, 0, 0, 0, 0, 1])
    checks.append(
        _check(
            "boundary_pairings",
            a_pairing >= 3 and e5_pairing <= 2,
            {"A_pairing": a_pairing, "E5_pairing": e5_pairing},
        )
    )
    return checks


def _h_rank4(inputs):
    cert = embeddings.embed_rank4(inputs["which"])
    res = _certificate_result(cert)
    res["L"] = [1, 0, 0, 0]
    res["expected_gram"] = [list(row) for row in embeddings.RANK4_GRAMS[inputs["which"]]]
    return res


def _c_rank4(result):
    emb = embeddings.Embedding(
        source_gram=tuple(tuple(row) for row in result["source_gram"]),
        flavor=result["flavor"],
        r=result["r"],
        matrix=tuple(tuple(row) for row in result["matrix"]),
    )
    primitive, factors = emb.primitivity()
    return [
        _check(
            "gram_matches_expected",
            emb.image_gram() == [list(row) for row in result["expected_gram"]],
            {},
        ),
        _check("primitive", primitive, {"invariant_factors": list(factors)}),
    ]


def _h_degeneration(inputs):
    led = embeddings.restrict_and_decompose(inputs["r"], inputs["class"])
    return {
        "r": led.r,
        "class": list(inputs["class"]),
        "permutation": list(led.permutation),
        "restriction_y1": list(led.restriction_y1),
        "restriction_y2": led.restriction_y2,
        "M": list(led.m_class),
        "summands": [[mult, list(cls)] for mult, cls in led.summands],
        "M_dot_D": led.m_dot_d,
        "lambda": led.lam,
        "m": led.m,
    }


def _c_degeneration(result):
    r = result["r"]
    n = 2 * r
    g1 = embeddings._y1_gram(r)
    m_class = result["M"]
    total = [0] * n
    for mult, cls in result["summands"]:
        for i in range(n):
            total[i] += mult * cls[i]
    d_class = [4, 2] + [-1] * (n - 2)
    m_dot_d = linalg.bilinear(g1, m_class, d_class)
    lam = max(0, min(4, m_dot_d - 1))
    return [
        _check("recombination", total == m_class, {}),
        _check(
            "multiplicities_nonnegative",
            all(mult >= 0 for mult, _ in result["summands"]),
            {},
        ),
        _check(
            "reference_square",
            linalg.bilinear(g1, d_class, d_class) == 10 - 2 * r,
            {},
        ),
        _check(
            "lambda_consistent",
            result["M_dot_D"] == m_dot_d
            and result["lambda"] == lam
            and result["m"] == m_dot_d - lam,
            {},
        ),
    ]


def _h_verify(inputs):
    lam = lattice.validate_rank2(inputs["d"], inputs["a"], inputs["b"])
    report = embeddings.verify_hypotheses(lam, inputs["L"])
    return {
        "d": lam.d,
        "a": lam.a,
        "b": lam.b,
        "L": list(inputs["L"]),
        "a1": report.a1,
        "a2_witness": [list(w) for w in report.a2] if report.a2 else None,
        "a3_witness": [list(w) for w in report.a3] if report.a3 else None,
        "a3_flags": _encode(report.a3_flags),
    }


def _c_verify(result):
    lam = lattice.validate_rank2(result["d"], result["a"], result["b"])
    g = lam.gram
    L = result["L"]
    checks = [_check("a1_parity", result["a1"] == (result["a"] % 2 == 0), {})]
    if result["a2_witness"] is not None:
        l1, l2, l3 = result["a2_witness"]
        ok = (
            [a + b + c for a, b, c in zip(l1, l2, l3)] == list(L)
            and all(linalg.bilinear(g, w, w) > 0 for w in (l1, l2, l3))
            and all(linalg.bilinear(g, L, w) > 0 for w in (l1, l2, l3))
        )
        checks.append(_check("a2_witness_recheck", ok, {}))
    if result["a3_witness"] is not None:
        l1, l2 = result["a3_witness"]
        l1sq = linalg.bilinear(g, l1, l1)
        ok = (
            [a + b for a, b in zip(l1, l2)] == list(L)
            and linalg.bilinear(g, l2, l2) == -2
            and l1sq > 0
            and linalg.bilinear(g, L, l1) > 0
            and linalg.bilinear(g, L, l2) > 0
            and (l1[0] % 2 != 0 or l1[1] % 2 != 0)
            and gcd(l1[0] - l2[0], l1[1] - l2[1]) == 1
            and l1sq + 2 * linalg.bilinear(g, l1, l2) >= 18
        )
        checks.append(_check("a3_witness_recheck", ok, {}))
    return checks


HANDLERS = {
    "lattice validate": _h_lattice_validate,
    "squares": _h_squares,
    "cones enumerate": _h_cones_enumerate,
    "nef": _h_nef,
    "zariski": _h_zariski,
    "cremona": _h_cremona,
    "embed": _h_embed,
    "nefify": _h_nefify,
    "a3": _h_a3,
    "rank4": _h_rank4,
    "degeneration": _h_degeneration,
    "verify": _h_verify,
}

CHECKERS = {
    "lattice validate": _c_lattice_validate,
    "squares": _c_squares,
    "cones enumerate": _c_cones_enumerate,
    "nef": _c_nef,
    "zariski": _c_zariski,
    "cremona": _c_cremona,
    "embed": _c_embed,
    "nefify": _c_nefify,
    "a3": _c_a3,
    "rank4": _c_rank4,
    "degeneration": _c_degeneration,
    "verify": _c_verify,
}


def build_document(command: str, inputs: dict) -> dict:
    if command not in HANDLERS:
        raise ValidationError(f"unknown command {command!r}")
    result = _encode(HANDLERS[command](inputs))
    checks = CHECKERS[command](result)
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": _encode(inputs),
        "result": result,
        "checks": checks,
    }


def run_check(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read certificate: {exc}") from exc
    for key in ("schema_version", "command", "inputs", "result", "checks"):
        if key not in doc:
            raise ValidationError(f"certificate lacks required field {key!r}")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ValidationError(f"unsupported schema version {doc['schema_version']!r}")
    command = doc["command"]
    if command not in CHECKERS:
        raise ValidationError(f"unknown command {command!r} in certificate")

    recomputed = CHECKERS[command](doc["result"])
    divergence = None
    stored = doc["checks"]
    if len(stored) != len(recomputed):
        divergence = {"kind": "check_count", "stored": len(stored), "recomputed": len(recomputed)}
    else:
        for old, new in zip(stored, recomputed):
            if old != new:
                divergence = {"kind": "check", "name": new["name"], "stored": old, "recomputed": new}
                break
    failing = [c["name"] for c in recomputed if not c["pass"]]

    rerun_match = None
    if divergence is None:
        fresh = build_document(command, doc["inputs"])
        rerun_match = _dumps(fresh["result"]) == _dumps(doc["result"])
        if not rerun_match:
            divergence = {"kind": "result_bytes"}
    return {
        "command": command,
        "pass": divergence is None,
        "failing_checks": failing,
        "divergence": divergence,
        "rerun_byte_identical": rerun_match,
        "checks": recomputed,
    }


# ---------------------------------------------------------------- argparse

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indent the JSON output")
    common.add_argument("--quiet", action="store_true", help="suppress standard output")
    common.add_argument("--json", action="store_true", help="JSON output (the default)")

    parser = _Parser(prog="k3cert", description=__doc__, parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(container, name):
        return container.add_parser(name, parents=[common])

    lat = sub.add_parser("lattice")
    latsub = lat.add_subparsers(dest="subcommand", required=True)
    p = add_parser(latsub, "validate")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)

    p = add_parser(sub, "squares")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, choices=(3, 4, 5), required=True)

    con = sub.add_parser("cones")
    consub = con.add_subparsers(dest="subcommand", required=True)
    p = add_parser(consub, "enumerate")
    p.add_argument("--flavor", choices=("even", "odd"), required=True)
    p.add_argument("--r", type=int, required=True)

    for name in ("nef", "zariski"):
        p = add_parser(sub, name)
        p.add_argument("--flavor", choices=("even", "odd"), required=True)
        p.add_argument("--r", type=int, required=True)
        p.add_argument("--class", dest="klass", required=True)

    p = add_parser(sub, "cremona")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--ijk", required=True)
    p.add_argument("--class", dest="klass", required=True)

    p = add_parser(sub, "embed")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--L", dest="L", default=None)

    p = add_parser(sub, "nefify")
    p.add_argument("--flavor", choices=("even", "odd"), required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--L", dest="L", required=True)

    p = add_parser(sub, "a3")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)

    p = add_parser(sub, "rank4")
    p.add_argument("--which", type=int, required=True)

    p = add_parser(sub, "degeneration")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--class", dest="klass", required=True)

    p = add_parser(sub, "verify")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--L", dest="L", required=True)

    p = add_parser(sub, "check")
    p.add_argument("--file", required=True)
    return parser


def _inputs_from_args(args) -> tuple:
    cmd = args.command
    if cmd == "lattice":
        return "lattice validate", {"d": args.d, "a": args.a, "b": args.b}
    if cmd == "squares":
        return "squares", {"n": args.n, "k": args.k}
    if cmd == "cones":
        return "cones enumerate", {"flavor": args.flavor, "r": args.r}
    if cmd in ("nef", "zariski"):
        return cmd, {"flavor": args.flavor, "r": args.r, "class": _parse_class(args.klass)}
    if cmd == "cremona":
        ijk = _parse_class(args.ijk)
        return "cremona", {"r": args.r, "ijk": ijk, "class": _parse_class(args.klass)}
    if cmd == "embed":
        inputs = {"d": args.d, "a": args.a, "b": args.b}
        inputs["L"] = _parse_class(args.L) if args.L is not None else None
        return "embed", inputs
    if cmd == "nefify":
        return "nefify", {
            "flavor": args.flavor,
            "r": args.r,
            "matrix": _parse_matrix(args.matrix),
            "L": _parse_class(args.L),
        }
    if cmd == "a3":
        return "a3", {"a": args.a, "b": args.b}
    if cmd == "rank4":
        return "rank4", {"which": args.which}
    if cmd == "degeneration":
        return "degeneration", {"r": args.r, "class": _parse_class(args.klass)}
    if cmd == "verify":
        return "verify", {
            "d": args.d,
            "a": args.a,
            "b": args.b,
            "L": _parse_class(args.L),
        }
    raise ValidationError(f"unknown command {cmd!r}")


def _error_payload(exc: Exception) -> dict:
    payload = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    if isinstance(exc, LegendreExclusion):
        payload["error"]["witness"] = list(exc.witness)
    return payload


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "check":
            doc = run_check(args.file)
            exit_code = 0 if doc["pass"] else 1
        else:
            command, inputs = _inputs_from_args(args)
            doc = build_document(command, inputs)
            exit_code = 0
        if not args.quiet:
            print(_dumps(doc, pretty=args.pretty))
        return exit_code
    except ComputationError as exc:
        print(_dumps(_error_payload(exc)), file=sys.stderr)
        return 2
    except K3CertError as exc:
        print(_dumps(_error_payload(exc)), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
