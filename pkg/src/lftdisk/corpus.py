"""Worked examples as data, and a runner that replays them.

A corpus file is a JSON array of records::

    {
      "id": "example_3_1",
      "title": "...",
      "maps": {"phi": {"a": [1, 0], ...}, "f": {"registry": "example_2_2_exp"}},
      "cell": ["HyperbolicNonAut", "HyperbolicAut"],      # optional
      "flags": {"rigidity": "..."},                       # optional
      "expected": [{"check": "classify", "map": "phi", "tag": "..."}, ...]
    }

Each entry of ``expected`` is checked by one library call; see ``CHECKS``.
"""

from __future__ import annotations

import cmath
import json
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Callable

from .classify import MapTag, cayley_conjugate, classify, self_map_report
from .config import DEFAULT, Tolerances
from .dynamics import step_class
from .errors import EvaluationFailure, LFTError, ParseError, UnknownMapName
from .intertwine import (
    check_conditions,
    parabolic_conformal_derivative,
    residual,
    solve_family,
    type_compatible,
)
from .moebius import Moebius, complex_from_json, compose, proj_distance
from .roots import embeddable, root_nonelliptic, roots_elliptic
from .classify import rotation_order

CORPUS_ENV = "LFTDISK_CORPUS"


# --- registry of non-LFT maps -------------------------------------------------------------
# principal branches throughout (cmath.log, cmath.sqrt: cut along the negative axis)


def _square(z):
    return z * z


def _exp_map(z):
    return cmath.exp(-0.5 * (1 + z) / (1 - z))


_LOG_SCALE = 0.5 * math.exp(-math.pi**2 / math.log(2))


def _log_map(z):
    # 1/(1 - z) lies in the right half-plane, where the principal log is analytic
    return _LOG_SCALE * cmath.exp(2j * math.pi / math.log(2) * cmath.log(1 / (1 - z)))


def _sqrt_map(z):
    s = cmath.sqrt((1 + z) / (1 - z))
    return (s - 1) / (s + 1)


def _cubic(z):
    return (z + z**3) / 2


REGISTRY: dict[str, Callable[[complex], complex]] = {
    "example_2_1_square": _square,
    "example_2_2_exp": _exp_map,
    "example_2_3_log": _log_map,
    "example_3_2_sqrt": _sqrt_map,
    "example_3_5_cubic": _cubic,
}


def lookup(name: str) -> Callable[[complex], complex]:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownMapName(f"no evaluable map named {name!r}; known: {sorted(REGISTRY)}") from None


# --- records --------------------------------------------------------------------------------


@dataclass
class ExampleRecord:
    id: str
    title: str
    maps: dict[str, Moebius | str]
    expected: list[dict]
    cell: tuple[str, str] | None = None
    flags: dict[str, str] = field(default_factory=dict)

    def lft(self, key: str) -> Moebius:
        m = self.maps[key]
        if not isinstance(m, Moebius):
            raise LFTError(f"{self.id}: map {key!r} is not an LFT")
        return m

    def evaluable(self, key: str) -> Callable:
        m = self.maps[key]
        return lookup(m) if isinstance(m, str) else m


CHECKS = (
    "classify",
    "self_map",
    "residual",
    "conditions",
    "composition",
    "family",
    "compatible",
    "roots",
    "root_nonelliptic",
    "embed",
    "halfplane",
    "step",
    "conformal_derivative",
    "rotation_order",
)


def _parse_map(obj, where: str) -> Moebius | str:
    if isinstance(obj, dict) and "registry" in obj:
        name = obj["registry"]
        if not isinstance(name, str):
            raise ParseError("registry name must be a string", where)
        lookup(name)
        return name
    if not isinstance(obj, dict):
        raise ParseError("expected a coefficient object or {'registry': name}", where)
    for k in "abcd":
        if k not in obj:
            raise ParseError(f"missing coefficient {k!r}", where)
        complex_from_json(obj[k], f"{where}.{k}")
    return Moebius.from_json(obj)


def parse_records(data: Any) -> list[ExampleRecord]:
    if not isinstance(data, list):
        raise ParseError("the corpus must be a JSON array of records", "$")
    records = []
    for i, raw in enumerate(data):
        where = f"$[{i}]"
        if not isinstance(raw, dict):
            raise ParseError("record must be an object", where)
        for key in ("id", "maps", "expected"):
            if key not in raw:
                raise ParseError(f"missing key {key!r}", where)
        if not isinstance(raw["maps"], dict):
            raise ParseError("maps must be an object", f"{where}.maps")
        maps = {k: _parse_map(v, f"{where}.maps.{k}") for k, v in raw["maps"].items()}
        expected = raw["expected"]
        if not isinstance(expected, list):
            raise ParseError("expected must be a list", f"{where}.expected")
        for j, e in enumerate(expected):
            if not isinstance(e, dict) or e.get("check") not in CHECKS:
                raise ParseError(f"unknown check {e!r}", f"{where}.expected[{j}]")
            for ref in ("map", "f", "phi", "psi", "equals", "contains"):
                names = e.get(ref)
                if isinstance(names, str) and names not in maps:
                    raise ParseError(f"refers to undefined map {names!r}", f"{where}.expected[{j}].{ref}")
        cell = raw.get("cell")
        if cell is not None:
            if not (isinstance(cell, list) and len(cell) == 2):
                raise ParseError("cell must be a [phi tag, psi tag] pair", f"{where}.cell")
            try:
                cell = (MapTag(cell[0]).value, MapTag(cell[1]).value)
            except ValueError as exc:
                raise ParseError(str(exc), f"{where}.cell") from exc
        records.append(
            ExampleRecord(
                id=str(raw["id"]),
                title=str(raw.get("title", "")),
                maps=maps,
                expected=expected,
                cell=cell,
                flags=dict(raw.get("flags", {})),
            )
        )
    return records


def default_corpus_path() -> Path:
    env = os.environ.get(CORPUS_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("lftdisk") / "data" / "corpus.json"))


def load(path: str | os.PathLike | None = None) -> list[ExampleRecord]:
    path = Path(path) if path is not None else default_corpus_path()
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        return []
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from exc
    return parse_records(data)


# --- running ------------------------------------------------------------------------------------


@dataclass
class CheckResult:
    check: str
    passed: bool
    measured: Any
    expected: Any
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "passed": self.passed,
            "measured": self.measured,
            "expected": self.expected,
            "detail": self.detail,
        }


@dataclass
class RecordResult:
    id: str
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"id": self.id, "passed": self.passed, "checks": [c.to_json() for c in self.checks]}


@dataclass
class Report:
    records: list[RecordResult]
    tolerances: Tolerances = DEFAULT

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def exit_status(self) -> int:
        return 0 if self.passed else 1

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "n_records": len(self.records),
            "n_failed": sum(not r.passed for r in self.records),
            "tolerances": {k: getattr(self.tolerances, k) for k in self.tolerances.__dataclass_fields__},
            "records": [r.to_json() for r in self.records],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False) + "\n"

    def table(self) -> str:
        lines = [f"{'record':<28} {'check':<22} {'result':<6} measured / expected"]
        for r in self.records:
            for c in r.checks:
                lines.append(
                    f"{r.id:<28} {c.check:<22} {'pass' if c.passed else 'FAIL':<6} "
                    f"{_short(c.measured)} / {_short(c.expected)}"
                )
        lines.append(f"{sum(r.passed for r in self.records)}/{len(self.records)} records pass")
        return "\n".join(lines) + "\n"


def _short(x) -> str:
    s = json.dumps(x)
    return s if len(s) <= 60 else s[:57] + "..."


def _cjson(z) -> list[float] | str:
    z = complex(z)
    if cmath.isinf(z):
        return "inf"
    return [z.real, z.imag]


def _close(measured: complex, expected, tol: float) -> bool:
    if expected == "inf":
        return cmath.isinf(complex(measured))
    return abs(complex(measured) - complex(*expected)) <= tol


def _run_check(rec: ExampleRecord, e: dict, tol: Tolerances) -> CheckResult:
    kind = e["check"]
    if kind == "classify":
        cls = classify(rec.lft(e["map"]), tol)
        ok = cls.tag.value == e["tag"]
        measured = cls.to_json()
        if "dw_point" in e:
            ok &= cls.dw_point is not None and _close(cls.dw_point.to_complex(), e["dw_point"], 1e-9)
        if "multiplier" in e:
            ok &= _close(cls.multiplier, e["multiplier"], 1e-9)
        exp = {k: e[k] for k in ("tag", "dw_point", "multiplier") if k in e}
        return CheckResult(kind, ok, measured, exp, e["map"])

    if kind == "self_map":
        rep = self_map_report(rec.lft(e["map"]), tol)
        measured = rep.to_json()
        ok = all(measured[k] == e[k] for k in ("is_self_map", "is_automorphism", "boundary_case") if k in e)
        exp = {k: e[k] for k in ("is_self_map", "is_automorphism", "boundary_case") if k in e}
        return CheckResult(kind, ok, measured, exp, e["map"])

    if kind == "residual":
        try:
            r = residual(rec.evaluable(e["f"]), rec.evaluable(e["phi"]), rec.evaluable(e["psi"]))
        except EvaluationFailure as exc:
            return CheckResult(kind, False, None, e, str(exc))
        bound = e.get("max", tol.residual)
        return CheckResult(kind, r < bound, r, {"max": bound})

    if kind == "conditions":
        chk = check_conditions(rec.lft(e["f"]), rec.lft(e["phi"]), rec.lft(e["psi"]), tol)
        ok = chk.holds == e["holds"] and chk.consistent
        if "failed" in e:
            ok &= sorted(chk.failed) == sorted(e["failed"])
        exp = {k: e[k] for k in ("holds", "failed") if k in e}
        return CheckResult(kind, ok, chk.to_json(), exp, chk.reason)

    if kind == "composition":
        f, phi, psi = rec.lft(e["f"]), rec.lft(e["phi"]), rec.lft(e["psi"])
        d = proj_distance(compose(f, phi), compose(psi, f))
        if "min" in e:
            return CheckResult(kind, d > e["min"], d, {"min": e["min"]})
        return CheckResult(kind, d < e["max"], d, {"max": e["max"]})

    if kind == "family":
        fam = solve_family(rec.lft(e["phi"]), rec.lft(e["psi"]), tol)
        ok = fam.kind.value == e["kind"]
        measured = {"kind": fam.kind.value, "reason": fam.reason}
        if "contains" in e:
            names = e["contains"] if isinstance(e["contains"], list) else [e["contains"]]
            params = {n: fam.parameter_of(rec.lft(n)) for n in names}
            measured["parameters"] = {n: None if p is None else _cjson(p) for n, p in params.items()}
            ok &= all(p is not None and fam.is_self_map_member(p) for p in params.values())
        exp = {k: e[k] for k in ("kind", "contains") if k in e}
        return CheckResult(kind, ok, measured, exp)

    if kind == "compatible":
        comp = type_compatible(classify(rec.lft(e["phi"]), tol), classify(rec.lft(e["psi"]), tol))
        return CheckResult(kind, comp.verdict.value == e["verdict"], comp.verdict.value, e["verdict"], comp.reason)

    if kind == "roots":
        roots = roots_elliptic(rec.lft(e["map"]), e["n"], tol)
        ok = len(roots) == e["count"]
        for c in e.get("contains", []):
            ok &= any(proj_distance(r, Moebius.from_json(c)) < 1e-10 for r in roots)
        measured = [r.to_json() for r in roots]
        return CheckResult(kind, ok, {"count": len(roots), "roots": measured},
                           {k: e[k] for k in ("count", "contains") if k in e})

    if kind == "root_nonelliptic":
        g = root_nonelliptic(rec.lft(e["map"]), e["n"], tol)
        d = proj_distance(g, rec.lft(e["equals"]))
        return CheckResult(kind, d < 1e-10, d, {"equals": e["equals"], "max": 1e-10})

    if kind == "embed":
        v = embeddable(rec.lft(e["map"]), e.get("max_depth", 64), tol)
        ok = v.status.value == e["status"]
        if "depth" in e:
            ok &= v.depth == e["depth"]
        return CheckResult(kind, ok, {"status": v.status.value, "depth": v.depth},
                           {k: e[k] for k in ("status", "depth") if k in e}, v.note)

    if kind == "halfplane":
        h = cayley_conjugate(rec.lft(e["map"]), tol)
        ok = abs(h.A - e["A"]) < 1e-9 and _close(h.B, e["B"], 1e-9)
        return CheckResult(kind, ok, h.to_json(), {"A": e["A"], "B": e["B"]})

    if kind == "step":
        s = step_class(rec.lft(e["map"]), tol=tol)
        return CheckResult(kind, s.value == e["class"], s.value, e["class"])

    if kind == "conformal_derivative":
        v = parabolic_conformal_derivative(rec.lft(e["phi"]), rec.lft(e["psi"]), tol)
        return CheckResult(kind, _close(v, e["value"], 1e-9), _cjson(v), e["value"])

    if kind == "rotation_order":
        cls = classify(rec.lft(e["map"]), tol)
        n = rotation_order(cls.multiplier, tol=tol)
        return CheckResult(kind, n == e["order"], n, e["order"])

    raise ParseError(f"unknown check {kind!r}")


def run_record(rec: ExampleRecord, tol: Tolerances = DEFAULT) -> RecordResult:
    results = []
    for e in rec.expected:
        try:
            results.append(_run_check(rec, e, tol))
        except LFTError as exc:
            results.append(CheckResult(e["check"], False, None, e, f"{type(exc).__name__}: {exc}"))
    return RecordResult(rec.id, results)


def run(records: list[ExampleRecord], tol: Tolerances = DEFAULT) -> Report:
    return Report([run_record(r, tol) for r in records], tol)


def witnessed_cells(records: list[ExampleRecord], tol: Tolerances = DEFAULT) -> set[tuple[str, str]]:
    """Class pairs (phi, psi) covered by a record that passes."""
    cells = set()
    for rec in records:
        if rec.cell is not None and run_record(rec, tol).passed:
            cells.add(rec.cell)
    return cells
