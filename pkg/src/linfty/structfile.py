"""JSON structure files.

::

    {"dims": [1, 2],
     "components": [{"degree": 3, "terms": [{"index": [0,1,2], "target": 3, "coeff": "1"}]}],
     "truncation": 3}

``dims`` is ``[even, odd]``; targets are 1-based and coefficients are rational
strings.  A component may instead carry ``"expr"`` in the cochain grammar.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .cochains import Cochain, format_rational, parse_cochain
from .coderivation import LInfinityStructure
from .graded import GradedSpace


class StructureFileError(ValueError):
    pass


def structure_to_json(d: LInfinityStructure) -> dict:
    comps = []
    for n, c in d.components.items():
        terms = [{"index": list(index), "target": t + 1, "coeff": format_rational(v)} for (index, t), v in c.items()]
        comps.append({"degree": n, "terms": terms})
    return {"dims": [d.space.even_dim, d.space.odd_dim], "components": comps, "truncation": d.truncation}


def structure_from_json(data: dict) -> LInfinityStructure:
    try:
        even, odd = (int(x) for x in data["dims"])
        space = GradedSpace(even, odd)
        comps = {}
        for comp in data.get("components", []):
            if "expr" in comp:
                c = parse_cochain(comp["expr"], space)
            else:
                terms = {}
                for t in comp["terms"]:
                    key = (space.check_index(t["index"]), int(t["target"]) - 1)
                    if not 0 <= key[1] < space.ngens:
                        raise StructureFileError(f"target {t['target']} out of range")
                    terms[key] = terms.get(key, 0) + Fraction(str(t["coeff"]))
                c = Cochain(space, terms)
            if c.is_zero:
                continue
            degree = int(comp.get("degree", c.degree))
            if c.degree != degree:
                raise StructureFileError(f"component declared at degree {degree} has degree {c.degree}")
            comps[degree] = comps[degree] + c if degree in comps else c
        trunc = data.get("truncation")
        return LInfinityStructure(space, comps, None if trunc is None else int(trunc))
    except (KeyError, TypeError) as exc:
        raise StructureFileError(f"malformed structure file: {exc}") from None


def dumps(d: LInfinityStructure) -> str:
    return json.dumps(structure_to_json(d), indent=2, sort_keys=True) + "\n"


def loads(text: str) -> LInfinityStructure:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureFileError(f"invalid JSON: {exc}") from None
    return structure_from_json(data)


def load(path) -> LInfinityStructure:
    return loads(Path(path).read_text())


def save(d: LInfinityStructure, path) -> None:
    Path(path).write_text(dumps(d))
