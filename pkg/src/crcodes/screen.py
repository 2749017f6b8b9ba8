"""Feasibility screening of intersection arrays for linear completely regular codes.

A putative array ``{b0,...;c1,...}`` of a distance-regular graph is tested as
the array of a completely regular code ``C`` in a Hamming graph ``H(n, q)``
with ``b0 = (q-1) n``:

* class sizes ``k_i = k_{i-1} b_{i-1} / c_i`` must be integers and their sum
  ``v`` (the number of cosets) a prime power;
* along a distance partition the number of vertices of ``W_i`` (distance ``i``
  from a fixed vertex of ``C^(j)``) inside ``C^(i)`` is
  ``prod_{l=1..i} b_{j+l-1} / c_l`` for the ambient graph's ``c_l``; these
  must be integers (and likewise for the ``c`` side of the code array);
* ``K_w(K_1^{-1}(S))`` must be an integer matrix for every ``w``, ``S`` the
  tridiagonal quotient matrix; its ``(0, 0)`` entries give the code's weight
  distribution, and MacWilliams gives the dual's.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable, Sequence

from .arrays import IntersectionArray
from .code import WeightDistribution, alphabet_reduction_params, macwilliams
from .errors import InconsistentDistributionError, MergeError, ParameterError
from .exactmath import RationalMatrix, is_integer_matrix, krawtchouk_matrix_sequence
from .gf import is_prime, prime_power_base
from .graph import IntegerQuotient

__all__ = [
    "IntersectionArray",
    "FeasibilityReport",
    "class_sizes",
    "boundary_count_profile",
    "divisibility_check",
    "hamming_candidates",
    "quotient_from_array",
    "krawtchouk_integrality",
    "predicted_weight_distributions",
    "merge_cells",
    "screen_report",
    "load_annotations",
    "load_fixture_table",
]


# --- class sizes -------------------------------------------------------------------


@dataclass(frozen=True)
class ClassSizes:
    sizes: tuple[Fraction, ...]
    v: Fraction

    @property
    def integral(self) -> bool:
        return all(s.denominator == 1 for s in self.sizes)

    def as_ints(self) -> tuple[int, ...]:
        return tuple(int(s) for s in self.sizes)


def class_sizes(a: IntersectionArray) -> ClassSizes:
    sizes = [Fraction(1)]
    for i in range(a.diameter):
        sizes.append(sizes[-1] * a.b[i] / a.c[i])
    return ClassSizes(tuple(sizes), sum(sizes))


# --- divisibility ---------------------------------------------------------------------


def hamming_c(length: int) -> tuple[int, ...]:
    """``c_1..c_length`` of a Hamming graph: ``c_l = l``."""
    return tuple(range(1, length + 1))


def boundary_count_profile(
    code_array: IntersectionArray,
    ambient_c: Sequence[int] | None = None,
    j: int = 0,
    side: str = "b",
) -> list[Fraction]:
    """``[prod_{l=1..i} x_{j+l} / c_l for i = 0..rho-j]``.

    ``side="b"`` uses ``x_{j+l} = b_{j+l-1}``; ``side="c"`` uses
    ``x_{j+l} = c_{j+l}``.  Each term counts vertices of a fixed distance
    class and so must be an integer.
    """
    rho = code_array.diameter
    if not 0 <= j <= rho:
        raise ParameterError(f"start cell {j} outside 0..{rho}")
    if side not in ("b", "c"):
        raise ParameterError(f"side must be 'b' or 'c', got {side!r}")
    ambient_c = hamming_c(rho) if ambient_c is None else tuple(ambient_c)
    seq = code_array.b if side == "b" else code_array.c
    out = [Fraction(1)]
    for i in range(1, rho - j + 1):
        if i > len(ambient_c):
            break
        out.append(out[-1] * seq[j + i - 1] / ambient_c[i - 1])
    return out


@dataclass(frozen=True)
class DivisibilityVerdict:
    passed: bool
    witnesses: tuple[dict, ...] = ()

    def to_json(self) -> dict:
        return {"test": "divisibility", "passed": self.passed, "witnesses": list(self.witnesses)}


def divisibility_check(a: IntersectionArray, ambient_c: Sequence[int] | None = None) -> DivisibilityVerdict:
    """Every failing product is reported; order is ``i`` ascending, ``c`` side before ``b`` side, ``j`` ascending."""
    rho = a.diameter
    ambient_c = hamming_c(rho) if ambient_c is None else tuple(ambient_c)
    witnesses = []
    for i in range(1, rho + 1):
        if i > len(ambient_c):
            break
        modulus = math.prod(ambient_c[:i])
        for side in ("c", "b"):
            for j in range(0, rho - i + 1):
                terms = boundary_count_profile(a, ambient_c, j, side)
                if terms[i].denominator != 1:
                    seq = a.b if side == "b" else a.c
                    factors = seq[j : j + i]
                    witnesses.append(
                        {
                            "side": side,
                            "i": i,
                            "j": j,
                            "factors": list(factors),
                            "product": math.prod(factors),
                            "modulus": modulus,
                        }
                    )
    return DivisibilityVerdict(not witnesses, tuple(witnesses))


# --- Hamming-graph candidates ----------------------------------------------------------


def hamming_candidates(b0: int, min_n: int) -> list[tuple[int, int]]:
    """All ``(q, n)`` with ``q >= 2``, ``(q-1) n = b0`` and ``n >= min_n``; q ascending."""
    if b0 < 1:
        raise ParameterError("degree must be positive")
    out = []
    for d in range(1, b0 + 1):
        if b0 % d == 0 and b0 // d >= min_n:
            out.append((d + 1, b0 // d))
    return out


def quotient_from_array(a: IntersectionArray, degree: int | None = None) -> IntegerQuotient:
    degree = a.degree if degree is None else degree
    if degree < a.degree:
        raise ParameterError(f"degree {degree} is below b0 = {a.degree}")
    rho = a.diameter
    S = [[0] * (rho + 1) for _ in range(rho + 1)]
    for i in range(rho + 1):
        b = a.b[i] if i < rho else 0
        c = a.c[i - 1] if i > 0 else 0
        if i < rho:
            S[i][i + 1] = b
        if i > 0:
            S[i][i - 1] = c
        S[i][i] = degree - b - c
        if S[i][i] < 0:
            raise ParameterError(f"negative diagonal entry in row {i}")
    return IntegerQuotient(tuple(map(tuple, S)))


# --- Krawtchouk integrality -------------------------------------------------------------


@dataclass(frozen=True)
class KrawtchoukVerdict:
    q: int
    n: int
    passed: bool
    w_checked: int
    failing_w: int | None = None
    cell: tuple[int, int] | None = None
    value: Fraction | None = None
    # S^(w)[0][0] for w = 0..w_checked, i.e. the code's predicted weight counts
    corner: tuple[Fraction, ...] = field(default=(), repr=False)

    def to_json(self) -> dict:
        out = {"test": "krawtchouk", "q": self.q, "n": self.n, "passed": self.passed, "w_checked": self.w_checked}
        if not self.passed:
            out.update(failing_w=self.failing_w, cell=list(self.cell), value=str(self.value))
        return out


def _inverse_k1(S: IntegerQuotient, n: int, q: int) -> RationalMatrix:
    """``K_1^{-1}(S) = ((q-1) n I - S) / q``."""
    size = S.size
    return (RationalMatrix.scalar(size, (q - 1) * n) - RationalMatrix.from_rows(S.matrix)).scale(Fraction(1, q))


def krawtchouk_integrality(a: IntersectionArray, n: int, q: int, w_max: int | None = None) -> KrawtchoukVerdict:
    """Check ``S^(w) = K_w(K_1^{-1}(S))`` is integral for ``w = 1..w_max`` (default ``n``)."""
    if (q - 1) * n != a.degree:
        raise ParameterError(f"b0 = {a.degree} is not the degree (q-1)n = {(q - 1) * n} of H({n},{q})")
    w_max = n if w_max is None else w_max
    X = _inverse_k1(quotient_from_array(a), n, q)
    corner = []
    for w, Sw in krawtchouk_matrix_sequence(X, n, q, w_max):
        ok, bad = is_integer_matrix(Sw)
        corner.append(Sw[0, 0])
        if not ok:
            i, j, val = bad
            return KrawtchoukVerdict(q, n, False, w, w, (i, j), val, tuple(corner))
    return KrawtchoukVerdict(q, n, True, w_max, corner=tuple(corner))


def _log_exact(v: int, base: int) -> int | None:
    e = 0
    while v > 1 and v % base == 0:
        v //= base
        e += 1
    return e if v == 1 else None


def predicted_weight_distributions(
    a: IntersectionArray, n: int, q: int, verdict: KrawtchoukVerdict | None = None
) -> tuple[WeightDistribution, WeightDistribution]:
    """Weight distributions of the putative code and of its dual.

    Raises :class:`InconsistentDistributionError` if the Krawtchouk test
    fails or a count is negative or fractional.
    """
    if verdict is None or verdict.w_checked < n:
        verdict = krawtchouk_integrality(a, n, q)
    if not verdict.passed:
        raise InconsistentDistributionError(
            f"K_{verdict.failing_w}(K_1^-1(S)) is not integral at H({n},{q}), cell {verdict.cell}"
        )
    v = int(class_sizes(a).v)
    redundancy = _log_exact(v, q)
    if redundancy is None or redundancy > n:
        raise ParameterError(f"v = {v} is not q^m for q = {q}, m <= n")
    counts = [int(x) for x in verdict.corner]
    if any(x < 0 for x in counts):
        w = next(i for i, x in enumerate(counts) if x < 0)
        raise InconsistentDistributionError(f"predicted count at weight {w} is negative ({counts[w]})")
    W = WeightDistribution(tuple(counts))
    return W, macwilliams(W, n, q, n - redundancy)


# --- cell merging -----------------------------------------------------------------------


def merge_cells(S: IntegerQuotient, grouping: Sequence[Sequence[int]]) -> IntegerQuotient:
    """Quotient of the coarser partition whose cells are unions of ``grouping``'s members.

    Groups keep the order given.  Raises :class:`MergeError` with the first
    pair of disagreeing rows if the coarser partition is not equitable, and
    :class:`ParameterError` if ``grouping`` is not a partition of the cells.
    """
    groups = [list(g) for g in grouping]
    flat = sorted(x for g in groups for x in g)
    if flat != list(range(S.size)):
        raise ParameterError(f"grouping must cover cells 0..{S.size - 1} exactly once")
    if any(not g for g in groups):
        raise ParameterError("empty group")
    merged = []
    for g in groups:
        rows = [tuple(sum(S[r, c] for c in h) for h in groups) for r in g]
        for r, row in zip(g[1:], rows[1:]):
            if row != rows[0]:
                raise MergeError(f"rows {g[0]} and {r} disagree after merging: {rows[0]} vs {row}")
        merged.append(rows[0])
    return IntegerQuotient(tuple(merged))


# --- annotations and fixtures ------------------------------------------------------------


@dataclass(frozen=True)
class Annotation:
    array: IntersectionArray
    status: str  # graph-exists | graph-nonexistent | code-nonexistent
    citation: str
    note: str = ""

    def to_json(self) -> dict:
        return {"array": str(self.array), "status": self.status, "citation": self.citation, "note": self.note}


ANNOTATION_STATUSES = ("graph-exists", "graph-nonexistent", "code-nonexistent")


def parse_annotations(records: Iterable[dict]) -> list[Annotation]:
    out = []
    for rec in records:
        status = rec["status"]
        if status not in ANNOTATION_STATUSES:
            raise ParameterError(f"unknown annotation status {status!r}")
        out.append(Annotation(IntersectionArray.parse(rec["array"]), status, rec["citation"], rec.get("note", "")))
    return out


def load_annotations(path=None) -> list[Annotation]:
    if path is None:
        text = resources.files("crcodes.data").joinpath("annotations.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return parse_annotations(json.loads(text))


def load_fixture_table(name: str = "bcn14") -> list[IntersectionArray]:
    path = resources.files("crcodes.data").joinpath(f"{name}.json")
    if name == "annotations" or not path.is_file():
        raise ParameterError(f"no shipped fixture table named {name!r}")
    text = path.read_text()
    return [IntersectionArray.parse(rec["array"]) for rec in json.loads(text)]


# --- the report ---------------------------------------------------------------------------


STATUS_TEXT = {
    "rejected": "rejected by screening",
    "exists": "screening passes; existence known (annotation)",
    "nonexistent-by-citation": "screening passes; nonexistence known (annotation)",
    "refer-to-search": "screening passes; refer to search",
}


@dataclass
class FeasibilityReport:
    array: IntersectionArray
    v: int | str
    class_sizes: list
    candidates: list[dict] = field(default_factory=list)
    verdicts: list[dict] = field(default_factory=list)
    witnesses: list[dict] = field(default_factory=list)
    annotations: list[dict] = field(default_factory=list)
    search_targets: list[dict] = field(default_factory=list)
    reasons: list[str] = field(default_factory=list)
    status: str = ""

    @property
    def rejected(self) -> bool:
        return self.status == "rejected"

    def to_json(self) -> dict:
        return {
            "array": str(self.array),
            "v": self.v,
            "class_sizes": self.class_sizes,
            "candidates": self.candidates,
            "verdicts": self.verdicts,
            "witnesses": self.witnesses,
            "annotations": self.annotations,
            "search_targets": self.search_targets,
            "reasons": self.reasons,
            "status": self.status,
            "summary": STATUS_TEXT[self.status],
        }


def _wd_json(W: WeightDistribution) -> dict:
    return {"counts": list(W.counts), "compact": str(W)}


def _candidate_entry(a: IntersectionArray, q: int, n: int, v_base: tuple[int, int] | None, w_max):
    entry: dict = {"q": q, "n": n}
    qb = prime_power_base(q)
    entry["prime_power"] = qb is not None
    entry["linear_realizable"] = bool(qb and v_base and qb[0] == v_base[0])
    kv = krawtchouk_integrality(a, n, q, w_max)
    entry["krawtchouk"] = kv.to_json()
    entry["viable"] = False
    if kv.passed and entry["linear_realizable"] and kv.w_checked == n:
        try:
            W, Wd = predicted_weight_distributions(a, n, q, kv)
        except (InconsistentDistributionError, ParameterError) as exc:
            entry["prediction_error"] = str(exc)
        else:
            entry["W"] = _wd_json(W)
            entry["W_dual"] = _wd_json(Wd)
            entry["viable"] = True
    return entry, kv


def screen_report(
    a: IntersectionArray | str,
    annotations: Sequence[Annotation] | None = None,
    w_max: int | None = None,
) -> FeasibilityReport:
    """Run every screening test on ``a``; never raises on an infeasible array."""
    a = IntersectionArray.parse(a)
    annotations = load_annotations() if annotations is None else annotations
    cs = class_sizes(a)
    report = FeasibilityReport(a, str(cs.v) if cs.v.denominator != 1 else int(cs.v), [str(s) for s in cs.sizes])

    if not cs.integral:
        i = next(i for i, s in enumerate(cs.sizes) if s.denominator != 1)
        report.verdicts.append({"test": "class_sizes", "passed": False})
        report.witnesses.append({"test": "class_sizes", "index": i, "value": str(cs.sizes[i])})
        report.reasons.append("class sizes are not integral")
    else:
        report.class_sizes = list(cs.as_ints())
        report.verdicts.append({"test": "class_sizes", "passed": True})

    v_base = prime_power_base(int(cs.v)) if cs.integral else None
    report.verdicts.append({"test": "prime_power_order", "passed": v_base is not None})
    if cs.integral and v_base is None:
        report.witnesses.append({"test": "prime_power_order", "v": int(cs.v)})
        report.reasons.append(f"v = {int(cs.v)} is not a prime power")

    div = divisibility_check(a)
    report.verdicts.append(div.to_json())
    if not div.passed:
        report.witnesses.extend({"test": "divisibility", **w} for w in div.witnesses)
        report.reasons.append("divisibility")

    viable: dict[tuple[int, int], dict] = {}
    for q, n in hamming_candidates(a.degree, a.diameter):
        entry, kv = _candidate_entry(a, q, n, v_base, w_max)
        report.candidates.append(entry)
        if not kv.passed:
            report.witnesses.append({"test": "krawtchouk", "q": q, "n": n, "w": kv.failing_w, "cell": list(kv.cell), "value": str(kv.value)})
        if entry["viable"]:
            viable[(q, n)] = entry

    # a code over F_{p^s} yields one over F_p with the same array, so a
    # composite alphabet survives only if its prime reduction does
    targets = []
    for (q, n), entry in viable.items():
        p, s = prime_power_base(q)
        if s > 1:
            reduced = (p, alphabet_reduction_params(n, q, p))
            entry["reduces_to"] = list(reduced)
            if reduced not in viable:
                entry["viable"] = False
                continue
        else:
            Wd = WeightDistribution(tuple(entry["W_dual"]["counts"]))
            targets.append(
                {"q": q, "n": n, "k": _log_exact(int(cs.v), q), "weights": Wd.nonzero_weights(), "W_dual": str(Wd)}
            )
    report.search_targets = targets
    if not any(e["viable"] for e in report.candidates) and cs.integral and v_base is not None:
        realizable = [e for e in report.candidates if e["linear_realizable"]]
        if not realizable:
            report.reasons.append("no realizable Hamming-graph candidate")
        elif all(not e["krawtchouk"]["passed"] for e in realizable):
            report.reasons.append("krawtchouk")
        else:
            report.reasons.append("predicted weight distributions inconsistent")

    for ann in annotations:
        if ann.array == a:
            report.annotations.append(ann.to_json())

    if report.reasons:
        report.status = "rejected"
    elif any(x["status"] == "graph-exists" for x in report.annotations):
        report.status = "exists"
    elif report.annotations:
        report.status = "nonexistent-by-citation"
    else:
        report.status = "refer-to-search"
    return report


def _screen_one(args):
    text, ann_records, w_max = args
    return screen_report(text, parse_annotations(ann_records), w_max).to_json()


def screen_batch(
    arrays: Sequence[IntersectionArray],
    annotations: Sequence[Annotation] | None = None,
    workers: int = 1,
    w_max: int | None = None,
) -> list[dict]:
    """JSON reports in input order; ``workers > 1`` fans out over processes."""
    annotations = load_annotations() if annotations is None else annotations
    if workers <= 1:
        return [screen_report(a, annotations, w_max).to_json() for a in arrays]
    records = [x.to_json() for x in annotations]
    jobs = [(str(a), records, w_max) for a in arrays]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_screen_one, jobs))
