"""Coboundary operator ``D(phi) = [phi, d_N]`` and its cohomology, degree by degree.

Dimensions are exact ranks over the rationals.  Coboundary dimensions ``b_n``
count the image of ``D`` out of ``L_n`` and are recorded by the parity of the
image, so ``z_n + b_n.swapped() = dim L_n`` and ``h_n = z_n - b_{n-N+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .cochains import BasisKey, Cochain, cochain_basis, format_cochain
from .coderivation import LInfinityStructure, bracket, is_codifferential
from .graded import GradedDim, GradedSpace
from .linalg import Echelon, nullspace, rank


class NotCodifferentialError(ValueError):
    def __init__(self, witness: Cochain):
        super().__init__(f"[d,d] has nonzero component {format_cochain(witness)}")
        self.witness = witness


def _leading(d) -> Cochain:
    if isinstance(d, Cochain):
        return d
    if d.is_zero:
        raise ValueError("the zero structure has no leading term")
    return d.leading_term


def coboundary(d, phi: Cochain) -> Cochain:
    """``D(phi) = [phi, d_N]`` for the leading term ``d_N`` of ``d``."""
    return bracket(phi, _leading(d))


@lru_cache(maxsize=None)
def _basis_index(space: GradedSpace, degree: int, parity: int) -> tuple[tuple[BasisKey, ...], dict]:
    keys = tuple(cochain_basis(space, degree, parity))
    return keys, {k: i for i, k in enumerate(keys)}


@lru_cache(maxsize=None)
def _columns(d: Cochain, degree: int, parity: int) -> tuple[dict, ...]:
    """Columns of ``[., d]`` from ``L_degree`` of the given parity, in target coordinates."""
    space = d.space
    src, _ = _basis_index(space, degree, parity)
    target_degree = degree + d.degree - 1
    _, tgt_pos = _basis_index(space, target_degree, (parity + d.parity) % 2)
    cols = []
    for key in src:
        image = bracket(Cochain(space, {key: 1}, degree, parity), d)
        cols.append({tgt_pos[k]: v for k, v in image.items()})
    return tuple(cols)


@dataclass
class DegreeBlockMatrix:
    """``D`` restricted to ``L_n``, split by source parity; rows index the target basis."""

    source_degree: int
    target_degree: int
    even_source: tuple[BasisKey, ...]
    odd_source: tuple[BasisKey, ...]
    even_target: tuple[BasisKey, ...]
    odd_target: tuple[BasisKey, ...]
    even: list[dict]  # even source -> odd target
    odd: list[dict]  # odd source -> even target

    @classmethod
    def build(cls, d, n: int) -> DegreeBlockMatrix:
        dn = _leading(d)
        space = dn.space
        t = n + dn.degree - 1
        ev_src, _ = _basis_index(space, n, 0)
        od_src, _ = _basis_index(space, n, 1)
        ev_tgt, _ = _basis_index(space, t, 0)
        od_tgt, _ = _basis_index(space, t, 1)
        return cls(n, t, ev_src, od_src, ev_tgt, od_tgt,
                   _as_rows(_columns(dn, n, 0), len(od_tgt)),
                   _as_rows(_columns(dn, n, 1), len(ev_tgt)))

    def block(self, parity: int) -> list[dict]:
        return self.odd if parity else self.even

    def dense(self, parity: int) -> list[list[Fraction]]:
        ncols = len(self.odd_source if parity else self.even_source)
        return [[r.get(c, Fraction(0)) for c in range(ncols)] for r in self.block(parity)]


def _as_rows(columns: Sequence[dict], nrows: int) -> list[dict]:
    rows = [{} for _ in range(nrows)]
    for j, col in enumerate(columns):
        for i, v in col.items():
            rows[i][j] = v
    return rows


@dataclass
class DegreeCohomology:
    degree: int
    z: GradedDim
    b: GradedDim
    h: GradedDim
    representatives: list[Cochain] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "z": self.z.as_list(),
            "b": self.b.as_list(),
            "h": self.h.as_list(),
            "representatives": [format_cochain(c) for c in self.representatives],
        }


@dataclass
class CohomologyReport:
    leading_degree: int
    entries: list[DegreeCohomology]

    def __getitem__(self, degree: int) -> DegreeCohomology:
        for e in self.entries:
            if e.degree == degree:
                return e
        raise KeyError(degree)

    def h(self, degree: int) -> GradedDim:
        return self[degree].h

    @property
    def degrees(self) -> list[int]:
        return [e.degree for e in self.entries]

    def total(self) -> int:
        return sum(e.h.total for e in self.entries)

    def fingerprint(self) -> tuple[tuple[int, int, int], ...]:
        return tuple((e.degree, e.h.even, e.h.odd) for e in self.entries)

    def to_json(self) -> list[dict]:
        return [e.to_json() for e in self.entries]

    def table(self) -> str:
        lines = [f"{'n':>3}  {'z':>5}  {'b':>5}  {'h':>5}  representatives"]
        for e in self.entries:
            reps = ", ".join(format_cochain(c) for c in e.representatives)
            lines.append(f"{e.degree:>3}  {str(e.z):>5}  {str(e.b):>5}  {str(e.h):>5}  {reps}")
        return "\n".join(lines)


def _vector(c: Cochain, pos: dict) -> dict:
    return {pos[k]: v for k, v in c.items()}


def _cochain(space, keys, vec: dict, degree: int, parity: int) -> Cochain:
    return Cochain(space, {keys[i]: v for i, v in vec.items()}, degree, parity)


def _degree_data(dn: Cochain, n: int, parity: int):
    """Kernel basis out of ``L_n^parity`` and the incoming image inside it."""
    space = dn.space
    keys, pos = _basis_index(space, n, parity)
    out_rows = _as_rows(_columns(dn, n, parity), len(_basis_index(space, n + dn.degree - 1, 1 - parity)[0]))
    kernel = nullspace(out_rows, len(keys))
    src = n - dn.degree + 1
    incoming = list(_columns(dn, src, 1 - parity)) if src >= 1 else []
    return keys, pos, kernel, incoming, rank(out_rows)


def cohomology(d, degrees: Iterable[int] | None = None, *, preferred: Sequence[Cochain] = (),
               check: bool = True) -> CohomologyReport:
    """Cohomology of ``D = [., d_N]`` in each requested degree.

    Representatives complete the incoming coboundaries to the cocycles.  Any
    ``preferred`` cochains that are cocycles independent modulo what is already
    chosen are taken first; echelon kernel vectors fill the rest.
    """
    if isinstance(d, Cochain):
        d = LInfinityStructure.from_cochain(d)
    if d.is_zero:
        raise ValueError("the zero structure has no leading term")
    if check:
        ok, witness = is_codifferential(d)
        if not ok:
            raise NotCodifferentialError(witness)
    dn = d.leading_term
    N = dn.degree
    if degrees is None:
        degrees = default_degrees(N)
    space = dn.space
    entries = []
    for n in degrees:
        z = [0, 0]
        b = [0, 0]
        inc = [0, 0]
        reps: list[Cochain] = []
        for parity in (0, 1):
            keys, pos, kernel, incoming, out_rank = _degree_data(dn, n, parity)
            z[parity] = len(kernel)
            b[1 - parity] = out_rank
            ech = Echelon()
            kernel_ech = Echelon()
            for v in kernel:
                kernel_ech.add(v)
            for col in incoming:
                if not kernel_ech.contains(col):
                    raise AssertionError(f"D o D != 0 into degree {n}")
                ech.add(col)
            inc[parity] = ech.rank
            for c in preferred:
                if c.is_zero or c.degree != n or c.parity != parity:
                    continue
                v = _vector(c, pos)
                if kernel_ech.contains(v) and ech.add(v):
                    reps.append(c)
            for v in kernel:
                if ech.add(v):
                    reps.append(_cochain(space, keys, v, n, parity))
        h = GradedDim(z[0] - inc[0], z[1] - inc[1])
        entries.append(DegreeCohomology(n, GradedDim(*z), GradedDim(*b), h, reps))
    return CohomologyReport(N, entries)


def default_degrees(leading_degree: int) -> list[int]:
    if leading_degree == 1:
        return list(range(1, 9))
    m = leading_degree - 2
    return list(range(1, m + 7))


def deformation_directions(d, degrees: Iterable[int] | None = None) -> list[Cochain]:
    """Odd cohomology representatives: the directions of the universal infinitesimal deformation."""
    report = cohomology(d, degrees)
    return [c for e in report.entries for c in e.representatives if c.parity == 1]


def is_cocycle(d, phi: Cochain) -> bool:
    return coboundary(d, phi).is_zero


def is_coboundary(d, phi: Cochain) -> bool:
    """Whether ``phi = D(eta)`` for some ``eta`` (``phi`` homogeneous)."""
    if phi.is_zero:
        return True
    dn = _leading(d)
    src = phi.degree - dn.degree + 1
    if src < 1:
        return False
    _, pos = _basis_index(dn.space, phi.degree, phi.parity)
    ech = Echelon()
    for col in _columns(dn, src, 1 - phi.parity):
        ech.add(col)
    return ech.contains(_vector(phi, pos))


def preimage(d, phi: Cochain) -> Cochain | None:
    """Some ``eta`` with ``D(eta) = phi``, or None."""
    from .linalg import solve

    dn = _leading(d)
    space = dn.space
    if phi.is_zero:
        return Cochain.zero(space)
    src = phi.degree - dn.degree + 1
    if src < 1:
        return None
    keys, _ = _basis_index(space, src, 1 - phi.parity)
    tkeys, tpos = _basis_index(space, phi.degree, phi.parity)
    rows = _as_rows(_columns(dn, src, 1 - phi.parity), len(tkeys))
    rhs = [0] * len(tkeys)
    for k, v in phi.items():
        rhs[tpos[k]] = v
    sol = solve(rows, rhs, len(keys))
    if sol is None:
        return None
    return _cochain(space, keys, sol, src, 1 - phi.parity)


# -- filtered cohomology of a structure with several components -------------


def _structure_columns(d: LInfinityStructure, degree: int, parity: int) -> dict[int, tuple[dict, ...]]:
    """Columns of ``[., d_p]`` out of ``L_degree`` for each component degree ``p``, keyed by target degree."""
    out = {}
    for p, c in d.components.items():
        out[degree + p - 1] = _columns(c, degree, parity)
    return out


def _leading_cocycles(d: LInfinityStructure, k: int, parity: int, top: int):
    """Leading parts in ``L_k`` of cochains ``x_k + ... + x_top`` with ``[x, d]`` vanishing through ``top + N - 1``."""
    space = d.space
    N = d.leading_degree
    horizon = top + N - 1
    offsets = {}
    ncols = 0
    for j in range(k, top + 1):
        offsets[j] = ncols
        ncols += len(_basis_index(space, j, parity)[0])
    row_offsets = {}
    nrows = 0
    for t in range(k + N - 1, horizon + 1):
        row_offsets[t] = nrows
        nrows += len(_basis_index(space, t, 1 - parity)[0])
    rows = [{} for _ in range(nrows)]
    for j in range(k, top + 1):
        for t, cols in _structure_columns(d, j, parity).items():
            if t > horizon:
                continue
            for jj, col in enumerate(cols):
                for i, v in col.items():
                    rows[row_offsets[t] + i][offsets[j] + jj] = v
    width = len(_basis_index(space, k, parity)[0])
    ech = Echelon()
    for v in nullspace(rows, ncols):
        lead = {c: x for c, x in v.items() if c < width}
        if lead:
            ech.add(lead)
    return ech


def _leading_coboundaries(d: LInfinityStructure, k: int, parity: int) -> Echelon:
    """Leading parts in ``L_k`` of coboundaries ``[y, d]`` whose lower components vanish."""
    space = d.space
    N = d.leading_degree
    src_parity = 1 - parity
    hi = k - N + 1
    ech = Echelon()
    if hi < 1:
        return ech
    offsets = {}
    ncols = 0
    for j in range(1, hi + 1):
        offsets[j] = ncols
        ncols += len(_basis_index(space, j, src_parity)[0])
    row_offsets = {}
    nrows = 0
    for t in range(N, k + 1):
        row_offsets[t] = nrows
        nrows += len(_basis_index(space, t, parity)[0])
    rows = [{} for _ in range(nrows)]
    for j in range(1, hi + 1):
        for t, cols in _structure_columns(d, j, src_parity).items():
            if t > k:
                continue
            for jj, col in enumerate(cols):
                for i, v in col.items():
                    rows[row_offsets[t] + i][offsets[j] + jj] = v
    lower = [r for t in range(N, k) for r in rows[row_offsets[t]: row_offsets[t] + len(_basis_index(space, t, parity)[0])]]
    top_rows = rows[row_offsets[k]:]
    for v in nullspace(lower, ncols):
        image = {}
        for i, r in enumerate(top_rows):
            s = sum((x * v.get(c, 0) for c, x in r.items()), Fraction(0))
            if s:
                image[i] = s
        if image:
            ech.add(image)
    return ech


def filtered_cohomology(d: LInfinityStructure, degrees: Iterable[int], *, margin: int | None = None,
                        check: bool = True) -> CohomologyReport:
    """Associated graded cohomology of ``[., d]`` for a structure with several components.

    In degree ``k`` it compares leading parts of cocycles with leading parts of
    coboundaries.  Cocycle extensions are solved through ``k + margin``; the
    default margin covers three steps of the gap between the leading and the
    highest component.
    """
    if check:
        ok, witness = is_codifferential(d)
        if not ok:
            raise NotCodifferentialError(witness)
    N = d.leading_degree
    gap = max(d.components) - N
    if margin is None:
        margin = 3 * gap + 2
    space = d.space
    entries = []
    for k in degrees:
        zdim = [0, 0]
        bdim = [0, 0]
        reps = []
        for parity in (0, 1):
            keys, _ = _basis_index(space, k, parity)
            lz = _leading_cocycles(d, k, parity, k + margin)
            lb = _leading_coboundaries(d, k, parity)
            zdim[parity] = lz.rank
            bdim[parity] = lb.rank
            for c, row in sorted(lz.reduced().items()):
                if lb.add(row):
                    reps.append(_cochain(space, keys, row, k, parity))
        z = GradedDim(*zdim)
        b = GradedDim(*bdim)
        entries.append(DegreeCohomology(k, z, b, z - b, reps))
    return CohomologyReport(N, entries)


def check_classes(d, elements: Sequence[Cochain], *, margin: int | None = None) -> tuple[bool, bool]:
    """``(all cocycles, independent modulo coboundaries)`` for cochains of one degree and parity.

    For a structure with several components the leading-part versions of both
    notions are used, as in :func:`filtered_cohomology`.
    """
    elements = [c for c in elements]
    if not elements:
        return True, True
    if any(c.is_zero for c in elements):
        return True, False
    degree, parity = elements[0].degree, elements[0].parity
    if any(c.degree != degree or c.parity != parity for c in elements):
        raise ValueError("classes must share degree and parity")
    if isinstance(d, Cochain):
        d = LInfinityStructure.from_cochain(d)
    _, pos = _basis_index(d.space, degree, parity)
    vectors = [_vector(c, pos) for c in elements]
    if d.is_homogeneous:
        dn = d.leading_term
        cocycles = all(bracket(c, dn).is_zero for c in elements)
        ech = Echelon()
        src = degree - dn.degree + 1
        if src >= 1:
            for col in _columns(dn, src, 1 - parity):
                ech.add(col)
    else:
        gap = max(d.components) - d.leading_degree
        top = degree + (3 * gap + 2 if margin is None else margin)
        lz = _leading_cocycles(d, degree, parity, top)
        cocycles = all(lz.contains(v) for v in vectors)
        ech = _leading_coboundaries(d, degree, parity)
    independent = all(ech.add(v) for v in vectors)
    return cocycles, independent
