"""Regenerating the stored tables and diffing them against the engine.

Each golden file is JSON::

    {"id": ..., "title": ..., "structure": <template or list of templates>,
     "grid": [<param>, ...], "cells": [<cell>, ...]}

A grid parameter is ``{"name": "m", "values": [...]}``, ``{"name": "n",
"range": [lo, hi]}`` (inclusive, bounds may be templates in earlier
parameters) or ``{"names": ["m", "n"], "tuples": [[0, 1], ...]}``.  Cells may
add their own ``grid``, a ``when`` condition and a ``structure`` override.

Every cell has a ``provenance`` (``paper`` or ``derived-recomputation``) and a
``check``; a cell may carry a ``typo`` block with corrected expectations.  A
cell whose printed value fails while the corrected value holds at every grid
point is reported as ``paper-typo-candidate`` rather than as a mismatch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterator

from . import templates as tpl
from .cochains import Cochain, format_cochain
from .coderivation import LInfinityStructure, bracket, is_codifferential
from .cohomology import check_classes, cohomology, filtered_cohomology
from .graded import SPACE_1_2, GradedDim

MATCH = "match"
TYPO = "paper-typo-candidate"
MISMATCH = "mismatch"

ALIASES = {
    "sec3": ["sec3-coboundaries", "sec3-dims"],
    "sec5": ["sec5-coboundaries", "sec5.1-dims", "sec5.2-dims", "sec5.3-dims"],
    "sec6": ["sec6-coboundaries", "sec6-dims"],
    "sec7": ["sec7-coboundaries", "sec7-dims"],
    "sec8": ["sec8-coboundaries", "sec8-dims", "sec8-h1"],
}


class UnknownTable(KeyError):
    pass


def golden_dir(path=None) -> Path:
    if path is not None:
        return Path(path)
    return Path(str(resources.files("linfty") / "golden"))


def table_ids(path=None) -> list[str]:
    return sorted(p.stem for p in golden_dir(path).glob("*.json"))


def resolve(table_id: str, path=None) -> list[str]:
    known = table_ids(path)
    if table_id == "all":
        return known
    if table_id in ALIASES:
        return [t for t in ALIASES[table_id] if t in known]
    if table_id not in known:
        raise UnknownTable(table_id)
    return [table_id]


def load_table(table_id: str, path=None) -> dict:
    p = golden_dir(path) / f"{table_id}.json"
    if not p.exists():
        raise UnknownTable(table_id)
    return json.loads(p.read_text())


# -- grids ---------------------------------------------------------------------


def expand_grid(grid, base: dict | None = None) -> Iterator[dict]:
    base = dict(base or {})
    if not grid:
        yield base
        return
    head, rest = grid[0], grid[1:]
    if "tuples" in head:
        for tup in head["tuples"]:
            p = dict(base)
            for name, v in zip(head["names"], tup):
                p[name] = tpl.number(v, p)
            yield from expand_grid(rest, p)
        return
    name = head["name"]
    if "range" in head:
        lo, hi = (tpl.integer(x, base) for x in head["range"])
        values = range(lo, hi + 1)
    else:
        values = [tpl.number(v, base) for v in head["values"]]
    for v in values:
        p = dict(base)
        p[name] = Fraction(v)
        yield from expand_grid(rest, p)


def _params_text(p: dict) -> str:
    return ", ".join(f"{k}={_fmt(v)}" for k, v in p.items())


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def build_structure(shape, params: dict, truncation=None) -> LInfinityStructure:
    parts = shape if isinstance(shape, list) else [shape]
    comps: dict[int, Cochain] = {}
    for part in parts:
        c = tpl.cochain(part, params)
        if c.is_zero:
            continue
        comps[c.degree] = comps[c.degree] + c if c.degree in comps else c
    trunc = None if truncation is None else tpl.integer(truncation, params)
    return LInfinityStructure(SPACE_1_2, comps, trunc)


# -- cell checks -----------------------------------------------------------------


@dataclass
class CellResult:
    label: str
    status: str
    provenance: str
    points: int
    detail: str = ""
    note: str = ""

    def to_json(self) -> dict:
        out = {"cell": self.label, "status": self.status, "provenance": self.provenance, "points": self.points}
        if self.detail:
            out["detail"] = self.detail
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class TableResult:
    table_id: str
    title: str
    cells: list[CellResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != MISMATCH for c in self.cells)

    def counts(self) -> dict[str, int]:
        out = {MATCH: 0, TYPO: 0, MISMATCH: 0}
        for c in self.cells:
            out[c.status] += 1
        return out

    def lines(self) -> list[str]:
        out = [f"== {self.table_id}: {self.title}"]
        for c in self.cells:
            line = f"[{c.status}] {c.label} ({c.provenance}, {c.points} points)"
            if c.detail:
                line += f": {c.detail}"
            out.append(line)
            if c.note and c.status == TYPO:
                out.append(f"    note: {c.note}")
        n = self.counts()
        out.append(f"-- {n[MATCH]} match, {n[TYPO]} paper-typo-candidate, {n[MISMATCH]} mismatch")
        return out

    def to_json(self) -> dict:
        return {"id": self.table_id, "title": self.title, "ok": self.ok, "cells": [c.to_json() for c in self.cells]}


def _safe_cochain(text, params):
    try:
        return tpl.cochain(text, params), None
    except tpl.TemplateError as exc:
        return None, str(exc)


def _compare(cell, computed_fn, params_list, expected_key, typo_key=None):
    """Run ``computed_fn`` at every point and compare with the printed and corrected templates."""
    typo = cell.get("typo")
    printed_ok = True
    corrected_ok = typo is not None
    first_bad = ""
    points = 0
    for p in params_list:
        got = computed_fn(p)
        if got is None:
            continue
        points += 1
        exp, err = _safe_cochain(cell[expected_key], p)
        if err or exp != got:
            if printed_ok:
                first_bad = f"at {_params_text(p)} printed {cell[expected_key]!r} -> {err or format_cochain(exp)}; computed {format_cochain(got)}"
            printed_ok = False
        if typo is not None and corrected_ok:
            fix, err2 = _safe_cochain(typo[typo_key or expected_key], p)
            if err2 or fix != got:
                corrected_ok = False
    return points, printed_ok, corrected_ok, first_bad


def _status(printed_ok, corrected_ok):
    if printed_ok:
        return MATCH
    return TYPO if corrected_ok else MISMATCH


def _points(table, cell) -> list[dict]:
    grid = list(table.get("grid", [])) + list(cell.get("grid", []))
    pts = []
    for p in expand_grid(grid):
        if tpl.condition(cell.get("when", table.get("when")), p):
            pts.append(p)
    return pts


def _structure_for(table, cell, p) -> LInfinityStructure:
    shape = cell.get("structure", table.get("structure"))
    return build_structure(shape, p, cell.get("truncation", table.get("truncation")))


def run_cell(table: dict, cell: dict) -> CellResult:
    kind = cell["check"]
    prov = cell.get("provenance", "paper")
    note = cell.get("typo", {}).get("note", "") if cell.get("typo") else cell.get("note", "")
    pts = _points(table, cell)
    label = cell.get("label") or _default_label(cell)
    handler = _HANDLERS[kind]
    try:
        status, points, detail = handler(table, cell, pts)
    except (tpl.TemplateError, ValueError) as exc:
        status, points, detail = MISMATCH, 0, f"error: {exc}"
    return CellResult(label, status, prov, points, detail, note)


def _default_label(cell) -> str:
    kind = cell["check"]
    if kind == "coboundary":
        return f"D({cell['source']})"
    if kind == "dims":
        return f"H^({cell['degree']})"
    if kind == "self-bracket":
        return f"1/2 [d,d] for {cell['expr']}"
    if kind == "classify":
        return f"class of {cell['expr']}"
    return kind


def _h_coboundary(table, cell, pts):
    def computed(p):
        src = tpl.cochain(cell["source"], p)
        if src.is_zero:
            return None
        return bracket(src, _structure_for(table, cell, p).leading_term)

    points, ok, fix_ok, bad = _compare(cell, computed, pts, "paper")
    return _status(ok, fix_ok), points, "" if ok else bad


def _h_self_bracket(table, cell, pts):
    def computed(p):
        c = tpl.cochain(cell["expr"], p)
        return bracket(c, c).scale(Fraction(1, 2))

    points, ok, fix_ok, bad = _compare(cell, computed, pts, "paper")
    return _status(ok, fix_ok), points, "" if ok else bad


def _h_square_zero(table, cell, pts):
    expected = cell.get("expected", True)
    for p in pts:
        d = _structure_for(table, cell, p) if "expr" not in cell else build_structure(cell["expr"], p)
        ok, w = is_codifferential(d)
        if ok != expected:
            return MISMATCH, len(pts), f"at {_params_text(p)} square-zero is {ok}"
    return MATCH, len(pts), ""


def _tag_from(shape, p):
    from .moduli import FamilyTag

    lam = shape.get("lambda")
    return FamilyTag(shape["family"], tpl.integer(shape["degree"], p),
                     None if lam is None else tpl.number(lam, p))


def _h_classify(table, cell, pts):
    from .moduli import canonical_form, classify

    points = 0
    printed_ok = True
    fix_ok = "typo" in cell
    detail = ""
    for p in pts:
        c = tpl.cochain(cell["expr"], p)
        if c.is_zero:
            continue
        points += 1
        tag, _ = canonical_form(c)
        if "family" in cell and tag != _tag_from(cell["family"], p):
            return MISMATCH, points, f"at {_params_text(p)} classified as {tag}"
        if "equivalent_to" in cell:
            rep, err = _safe_cochain(cell["equivalent_to"], p)
            if err or classify(rep) != tag:
                if printed_ok:
                    detail = f"printed representative {cell['equivalent_to']!r}: {err or 'different class'}; class is {tag}"
                printed_ok = False
            if fix_ok:
                rep2, err2 = _safe_cochain(cell["typo"]["equivalent_to"], p)
                fix_ok = err2 is None and classify(rep2) == tag
    return _status(printed_ok, fix_ok), points, detail


def _h_jumps(table, cell, pts):
    from .moduli import jump_neighbors

    for p in pts:
        tag = _tag_from(cell["family"], p)
        got = jump_neighbors(tag)
        exp = [_tag_from(s, p) for s in cell["expected"]]
        if got != exp:
            return MISMATCH, len(pts), f"at {_params_text(p)} got {[str(t) for t in got]}"
    return MATCH, len(pts), ""


def _h_inequivalent(table, cell, pts):
    from .moduli import classify

    for p in pts:
        tags = [classify(tpl.cochain(e, p)) for e in cell["exprs"]]
        if len(set(tags)) != len(tags):
            return MISMATCH, len(pts), f"at {_params_text(p)} classes {[str(t) for t in tags]}"
    return MATCH, len(pts), ""


def _dims_at(d: LInfinityStructure, degree: int):
    if d.is_homogeneous:
        return cohomology(d, [degree], check=False)[degree]
    return filtered_cohomology(d, [degree], check=False)[degree]


def _element(t, params):
    """A listed class: one template, or a list of templates for a class spread over several degrees.

    Returns ``(leading part, components, error)``.
    """
    parts = []
    for text in (t if isinstance(t, list) else [t]):
        c, err = _safe_cochain(text, params)
        if err:
            return None, [], f"{text!r}: {err}"
        if not c.is_zero:
            parts.append(c)
    if not parts:
        return None, [], f"{t!r} is zero"
    parts.sort(key=lambda c: c.degree)
    return parts[0], parts, None


def _mixed_cocycle(d: LInfinityStructure, parts) -> bool:
    """Exact check that the sum of ``parts`` is killed by the whole structure."""
    total: dict[int, Cochain] = {}
    for g in parts:
        for dk in d.components.values():
            b = bracket(g, dk)
            if not b.is_zero:
                total[b.degree] = total[b.degree] + b if b.degree in total else b
    return all(c.is_zero for c in total.values())


def _basis_ok(d, degree, h: GradedDim, basis, complete, parity=None) -> tuple[bool, str]:
    by_parity = {0: [], 1: []}
    for lead, parts in basis:
        if lead.degree != degree:
            return False, f"{format_cochain(lead)} has degree {lead.degree}, expected {degree}"
        if len(parts) > 1 and not _mixed_cocycle(d, parts):
            return False, f"{' + '.join(format_cochain(c) for c in parts)} is not a cocycle"
        by_parity[lead.parity].append(lead)
    for elems in by_parity.values():
        cocycles, independent = check_classes(d, elems)
        if not cocycles:
            return False, "a listed class is not a cocycle"
        if not independent:
            return False, "listed classes are dependent modulo coboundaries"
    if parity is not None:
        if complete and len(by_parity[parity]) != h.as_list()[parity]:
            return False, f"basis has {len(by_parity[parity])} {_PARITY_NAME[parity]} elements, cohomology is {h}"
        if by_parity[1 - parity]:
            return False, f"{_PARITY_NAME[1 - parity]} element in a {_PARITY_NAME[parity]} basis"
    elif complete and (len(by_parity[0]), len(by_parity[1])) != (h.even, h.odd):
        return False, f"basis has {len(by_parity[0])}|{len(by_parity[1])} elements, cohomology is {h}"
    return True, ""


_PARITY_NAME = {0: "even", 1: "odd"}
_PARITY = {"even": 0, "odd": 1}


def _h_dims(table, cell, pts):
    typo = cell.get("typo") or {}
    parity = _PARITY.get(cell.get("parity"))
    printed_ok = True
    fix_ok = bool(typo)
    detail = ""
    points = 0
    for p in pts:
        points += 1
        d = _structure_for(table, cell, p)
        deg = tpl.integer(cell["degree"], p)
        entry = _dims_at(d, deg)

        def verdict(h_text, basis_list):
            problems = []
            if h_text is not None:
                if parity is None and entry.h != GradedDim.parse(str(h_text)):
                    problems.append(f"h = {entry.h}, printed {h_text}")
                elif parity is not None and entry.h.as_list()[parity] != int(h_text):
                    problems.append(f"{cell['parity']} h = {entry.h.as_list()[parity]}, printed {h_text}")
            for key, text in (("z", cell.get("z")), ("b", cell.get("b"))):
                if text is not None and getattr(entry, key) != GradedDim.parse(text):
                    problems.append(f"{key} = {getattr(entry, key)}, printed {text}")
            if basis_list is not None:
                elems = []
                for t in basis_list:
                    lead, parts, err = _element(t, p)
                    if err:
                        problems.append(err)
                        break
                    elems.append((lead, parts))
                else:
                    ok, why = _basis_ok(d, deg, entry.h, elems, cell.get("complete", True), parity)
                    if not ok:
                        problems.append(why)
            return problems

        probs = verdict(cell.get("h"), cell.get("basis"))
        if probs:
            if printed_ok:
                reps = ", ".join(format_cochain(c) for c in entry.representatives) or "none"
                detail = f"at {_params_text(p)} degree {deg}: {'; '.join(probs)}; computed h = {entry.h}, classes {reps}"
            printed_ok = False
        if fix_ok:
            fix_ok = not verdict(typo.get("h", cell.get("h")), typo.get("basis", cell.get("basis")))
    return _status(printed_ok, fix_ok), points, detail


def _h_total_drop(table, cell, pts):
    for p in pts:
        d = _structure_for(table, cell, p)
        lo, hi = (tpl.integer(x, p) for x in cell["degrees"])
        ref = build_structure(cell["reference"], p)
        ext = filtered_cohomology(d, range(lo, hi + 1), check=False).total()
        base = cohomology(ref, range(lo, hi + 1), check=False).total()
        if base - ext != cell["drop"]:
            return MISMATCH, len(pts), f"at {_params_text(p)} drop is {base - ext}"
    return MATCH, len(pts), ""


def _h_extends(table, cell, pts):
    from .extensions import extends_to_cocycle

    typo = cell.get("typo")
    printed_ok, fix_ok, detail = True, typo is not None, ""
    for p in pts:
        d = _structure_for(table, cell, p)
        phi, err = _safe_cochain(cell["expr"], p)
        got = None if err else extends_to_cocycle(d, phi)
        if got != cell["expected"]:
            if printed_ok:
                detail = f"at {_params_text(p)} " + (err or f"extends = {got}")
            printed_ok = False
        if fix_ok:
            fixed, err2 = _safe_cochain(typo["expr"], p)
            fix_ok = err2 is None and extends_to_cocycle(d, fixed) == cell["expected"]
    return _status(printed_ok, fix_ok), len(pts), detail


def _h_fingerprints(table, cell, pts):
    """Members of a family indexed by ``vary`` have pairwise distinct cohomology fingerprints."""
    name = cell["vary"]["name"]
    for p in pts:
        seen = {}
        for v in cell["vary"]["values"]:
            q = dict(p)
            q[name] = tpl.number(v, p)
            if not tpl.condition(cell.get("vary_when"), q):
                continue
            d = _structure_for(table, cell, q)
            lo, hi = (tpl.integer(x, q) for x in cell["degrees"])
            report = filtered_cohomology(d, range(lo, hi + 1), check=False) if not d.is_homogeneous \
                else cohomology(d, range(lo, hi + 1), check=False)
            fp = tuple(e.h for e in report.entries)
            if fp in seen.values():
                return MISMATCH, len(pts), f"at {_params_text(q)} fingerprint repeats"
            seen[_fmt(q[name])] = fp
    return MATCH, len(pts), ""


def _h_higher_removable(table, cell, pts):
    from .extensions import higher_corrections_removable

    for p in pts:
        d = _structure_for(table, cell, p)
        lo, hi = (tpl.integer(x, p) for x in cell["degrees"])
        res = higher_corrections_removable(d, range(lo, hi + 1))
        bad = [j for j, ok in res.items() if not ok]
        if bad:
            return MISMATCH, len(pts), f"at {_params_text(p)} irremovable in degrees {bad}"
    return MATCH, len(pts), ""


def _h_standard_fixed(table, cell, pts):
    from .extensions import standard_form

    for p in pts:
        d = _structure_for(table, cell, p)
        sf = standard_form(d)
        if sf.structure != d or not sf.replay_matches():
            return MISMATCH, len(pts), f"at {_params_text(p)} standard form is {sf.structure}"
    return MATCH, len(pts), ""


def _h_removable(table, cell, pts):
    from .extensions import correction_removable

    for p in pts:
        m, n, k = (int(p[x]) for x in ("m", "n", "k"))
        got = correction_removable(m, n, k)
        exp = tpl.condition(cell["expected"], p)
        if got != exp:
            return MISMATCH, len(pts), f"at {_params_text(p)} removable = {got}"
    return MATCH, len(pts), ""


_HANDLERS = {
    "coboundary": _h_coboundary,
    "self-bracket": _h_self_bracket,
    "square-zero": _h_square_zero,
    "classify": _h_classify,
    "jumps": _h_jumps,
    "inequivalent": _h_inequivalent,
    "dims": _h_dims,
    "total-drop": _h_total_drop,
    "extends": _h_extends,
    "higher-removable": _h_higher_removable,
    "standard-form-fixed": _h_standard_fixed,
    "removable": _h_removable,
    "distinct-fingerprints": _h_fingerprints,
}


def reproduce(table_id: str, path=None) -> TableResult:
    table = load_table(table_id, path)
    result = TableResult(table["id"], table.get("title", ""))
    for cell in table["cells"]:
        result.cells.append(run_cell(table, cell))
    return result
