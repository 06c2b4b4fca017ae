"""Extending a codifferential ``d_N`` by higher components, and reducing extensions.

The component ``d_{n+1}`` of an extension must solve

    D(d_{n+1}) = -1/2 * sum_{k=N+1}^{n} [d_k, d_{n+N+1-k}],   D = [., d_N],

so each step is a linear problem whose obstruction lives in the cohomology
of ``D``.  :func:`standard_form` pushes an extension to a normal form with
exponentials of even cochains and torus rescalings, and keeps a transcript
that can be replayed backwards onto the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from . import families
from .cochains import Cochain, HomogeneityError, format_cochain
from .coderivation import (ExpAutomorphism, LInfinityStructure, LinearAutomorphism, bracket,
                           conjugate_linear, exp_automorphism, is_codifferential)
from .cohomology import (_basis_index, _columns, _cochain, _leading_cocycles, _vector, cohomology,
                         filtered_cohomology, is_coboundary, preimage)
from .graded import SPACE_1_2
from .linalg import Echelon, nullspace, solve


class TruncationTooSmall(ValueError):
    pass


# -- one step of the obstruction calculus ------------------------------------


@dataclass
class ExtensionProblem:
    """``d_N`` plus chosen components ``d_{N+1} .. d_n``; the next unknown is ``d_{n+1}``."""

    base: Cochain
    partial: dict[int, Cochain] = field(default_factory=dict)
    target: int | None = None

    def __post_init__(self):
        if self.base.is_zero or self.base.parity != 1:
            raise ValueError("the base must be a nonzero odd cochain")
        N = self.base.degree
        self.partial = {n: c for n, c in sorted(self.partial.items()) if not c.is_zero}
        for n, c in self.partial.items():
            if n <= N or c.degree != n or c.parity != 1:
                raise ValueError(f"bad component at degree {n}")
        if self.target is None:
            self.target = max(self.partial, default=N) + 1
        if self.target <= max(self.partial, default=N):
            raise ValueError("target degree must exceed the chosen components")
        # [d, d] must vanish in every degree already fixed by the chosen components
        s = self.structure()
        for n in range(2 * N - 1, self.target + N - 1):
            sq = _self_bracket(s, n)
            if not sq.is_zero:
                raise ValueError(f"partial extension fails in degree {n}: {format_cochain(sq)}")

    @property
    def leading_degree(self) -> int:
        return self.base.degree

    def component(self, n: int) -> Cochain:
        if n == self.base.degree:
            return self.base
        return self.partial.get(n, Cochain.zero(self.base.space, n, 1))

    def structure(self) -> LInfinityStructure:
        comps = {self.base.degree: self.base, **self.partial}
        return LInfinityStructure(self.base.space, comps, self.target - 1)

    def extend(self, component: Cochain) -> ExtensionProblem:
        n = self.target
        comps = dict(self.partial)
        if not component.is_zero:
            if component.degree != n:
                raise ValueError(f"expected a component of degree {n}")
            comps[n] = component
        return ExtensionProblem(self.base, comps, n + 1)


def _self_bracket(d: LInfinityStructure, n: int) -> Cochain:
    total = Cochain.zero(d.space, n, 0)
    for p, cp in d.components.items():
        q = n + 1 - p
        if q in d.components:
            total = total + bracket(cp, d.components[q])
    return total


def obstruction_rhs(p: ExtensionProblem) -> Cochain:
    """Right hand side ``-1/2 sum [d_k, d_{n+N+1-k}]`` for the unknown ``d_{n+1}``; asserted to be a cocycle."""
    N = p.leading_degree
    n = p.target - 1
    total = Cochain.zero(p.base.space, n + N, 0)
    for k in range(N + 1, n + 1):
        j = n + N + 1 - k
        if j <= N:
            continue
        a, b = p.component(k), p.component(j)
        if not a.is_zero and not b.is_zero:
            total = total + bracket(a, b)
    rhs = total.scale(Fraction(-1, 2))
    if not bracket(rhs, p.base).is_zero:
        raise AssertionError("obstruction is not a cocycle")
    return rhs


@dataclass
class StepSolution:
    particular: Cochain
    cocycles: list[Cochain]
    classes: list[Cochain]

    @property
    def obstructed(self) -> bool:
        return False


@dataclass
class Obstructed:
    obstruction: Cochain

    @property
    def obstructed(self) -> bool:
        return True


def solve_step(p: ExtensionProblem) -> StepSolution | Obstructed:
    """Solve ``D(d_{n+1}) = obstruction_rhs(p)``.

    On success the answer is one solution together with the odd cocycles of
    degree ``n+1`` (all solutions differ by these) and the odd cohomology
    representatives among them.
    """
    rhs = obstruction_rhs(p)
    space = p.base.space
    n1 = p.target
    if rhs.is_zero:
        part = Cochain.zero(space, n1, 1)
    else:
        part = preimage(p.base, rhs)
        if part is None:
            return Obstructed(rhs)
    keys, _ = _basis_index(space, n1, 1)
    tkeys, _ = _basis_index(space, n1 + p.leading_degree - 1, 0)
    cols = _columns(p.base, n1, 1)
    rows = [{} for _ in tkeys]
    for j, col in enumerate(cols):
        for i, v in col.items():
            rows[i][j] = v
    cocycles = [_cochain(space, keys, v, n1, 1) for v in nullspace(rows, len(keys))]
    report = cohomology(LInfinityStructure.from_cochain(p.base), [n1], check=False)
    classes = [c for c in report[n1].representatives if c.parity == 1]
    return StepSolution(part, cocycles, classes)


# -- transcripts and standard forms -------------------------------------------


@dataclass
class Move:
    """One equivalence: ``exp`` of even cochains, a ``linear`` map, or a ``truncate``."""

    kind: str
    data: str
    eta: tuple[Cochain, ...] = ()
    linear: LinearAutomorphism | None = None
    degree: int | None = None

    def to_json(self) -> dict:
        return {"move": self.kind, "data": self.data}


def _apply_move(move: Move, d: LInfinityStructure, truncation: int, inverse: bool = False) -> LInfinityStructure:
    if move.kind == "exp":
        e = ExpAutomorphism(d.space, move.eta, truncation)
        return (e.inverse() if inverse else e).conjugate(d).truncated(truncation)
    if move.kind == "linear":
        g = move.linear.inverse() if inverse else move.linear
        return conjugate_linear(g, d)
    if move.kind == "truncate":
        return d if inverse else d.truncated(move.degree)
    raise ValueError(f"unknown move {move.kind!r}")


@dataclass
class StandardForm:
    input: LInfinityStructure
    structure: LInfinityStructure
    moves: list[Move]
    secondary_degree: int | None
    irremovable: list[int]
    notes: list[str]

    @property
    def transcript(self) -> list[dict]:
        return [m.to_json() for m in self.moves]

    def replay(self) -> LInfinityStructure:
        """Undo the moves in reverse order, starting from the reduced structure."""
        d = self.structure
        T = self.structure.truncation
        for move in reversed(self.moves):
            d = _apply_move(move, d, T, inverse=True)
        return d.truncated(T)

    def replay_matches(self) -> bool:
        T = self.structure.truncation
        return self.replay() == self.input.truncated(T)


def _torus_characters(c: Cochain) -> list[tuple[int, ...]]:
    out = []
    for (index, target), _ in c.items():
        chi = list(index)
        chi[target] -= 1
        out.append(tuple(chi))
    return out


def _rational_root(x: Fraction, e: int) -> Fraction | None:
    """``y`` with ``y**e == x`` if one is rational (``e`` may be negative)."""
    if e < 0:
        r = _rational_root(x, -e)
        return None if r is None else 1 / r
    if e == 0:
        return None

    def iroot(k: int) -> int | None:
        if k < 0:
            if e % 2 == 0:
                return None
            r = iroot(-k)
            return None if r is None else -r
        r = round(k ** (1 / e)) if k else 0
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** e == k:
                return cand
        return None

    num = iroot(x.numerator)
    den = iroot(x.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _normalizing_torus(base: Cochain, term: Cochain, bound: int):
    """Diagonal map fixing ``base`` that sends the leading coefficient of ``term`` to 1.

    Returns ``(g, None)`` on success, ``(None, note)`` otherwise.
    """
    (lead_key, lead_coeff) = next(term.items())
    if lead_coeff == 1:
        return None, None
    index, target = lead_key
    chi = list(index)
    chi[target] -= 1
    fixed = _torus_characters(base)
    n = base.space.ngens
    best = None
    for v in product(range(-bound, bound + 1), repeat=n):
        if any(sum(a * b for a, b in zip(v, f)) for f in fixed):
            continue
        e = sum(a * b for a, b in zip(v, chi))
        if e and (best is None or (abs(e), -e) < (abs(best[1]), -best[1])):
            best = (v, e)
    if best is None:
        return None, f"coefficient {lead_coeff} of the secondary term cannot be rescaled"
    v, e = best
    t = _rational_root(1 / lead_coeff, e)
    if t is None:
        return None, (f"secondary coefficient {lead_coeff} needs a root of degree {abs(e)}: "
                      "equivalent over the algebraic closure, not over the rationals")
    g = LinearAutomorphism.diagonal(base.space, [t ** a for a in v])
    return g, None


def _joint_solve(d1: Cochain, d2: Cochain, delta: Cochain):
    """Even ``eta_a``, ``eta_b`` with ``delta = [eta_a, d1] + [eta_b, d2]`` and ``[eta_b, d1] = 0``, or None."""
    space = delta.space
    j = delta.degree
    da = j - d1.degree + 1
    db = j - d2.degree + 1
    blocks = []
    if da >= 1:
        blocks.append(("a", da))
    if db >= 1:
        blocks.append(("b", db))
    offsets = {}
    ncols = 0
    for name, deg in blocks:
        offsets[name] = ncols
        ncols += len(_basis_index(space, deg, 0)[0])
    tkeys, tpos = _basis_index(space, j, 1)
    rows = [{} for _ in tkeys]
    rhs = [Fraction(0)] * len(tkeys)
    for k, v in delta.items():
        rhs[tpos[k]] = v
    for name, deg in blocks:
        op = d1 if name == "a" else d2
        for c, col in enumerate(_columns(op, deg, 0)):
            for i, v in col.items():
                rows[i][offsets[name] + c] = v
    if "b" in offsets:
        ckeys, _ = _basis_index(space, db + d1.degree - 1, 1)
        extra = [{} for _ in ckeys]
        for c, col in enumerate(_columns(d1, db, 0)):
            for i, v in col.items():
                extra[i][offsets["b"] + c] = v
        rows += extra
        rhs += [Fraction(0)] * len(ckeys)
    sol = solve(rows, rhs, ncols)
    if sol is None:
        return None
    out = []
    for name, deg in blocks:
        keys, _ = _basis_index(space, deg, 0)
        vec = {c - offsets[name]: v for c, v in sol.items() if offsets[name] <= c < offsets[name] + len(keys)}
        out.append(_cochain(space, keys, vec, deg, 0))
    return [c for c in out if not c.is_zero]


def standard_form(d: LInfinityStructure, truncation: int | None = None, *, normalize: bool = True) -> StandardForm:
    """Reduce ``d`` to ``d_N + d_{N+k} + ...`` with ``d_{N+k}`` a nontrivial class, up to ``truncation``.

    Components that are coboundaries of ``d_N`` are removed with exponentials
    until a secondary term survives.  Its leading coefficient is then set to 1
    by a diagonal map fixing ``d_N`` when a rational root allows it.  Later
    components are removed when they can be written as ``D1(eta_a) + D2(eta_b)``
    with ``D1(eta_b) = 0``; the rest are kept and listed as irremovable.
    """
    if d.is_zero:
        raise ValueError("the zero structure has no leading term")
    T = d.truncation if truncation is None else truncation
    N = d.leading_degree
    if T <= N:
        raise TruncationTooSmall(f"truncation {T} leaves nothing above the leading degree {N}")
    ok, witness = is_codifferential(d.with_truncation(T))
    if not ok:
        from .cohomology import NotCodifferentialError

        raise NotCodifferentialError(witness)
    original = d.with_truncation(T)
    cur = original.truncated(T)
    moves: list[Move] = []
    notes: list[str] = []
    if max(d.components) > T:
        moves.append(Move("truncate", str(T), degree=T))
    base = cur.leading_term
    secondary = None
    irremovable = []
    bound = max(T, 4)
    for j in range(N + 1, T + 1):
        delta = cur.component(j)
        if delta.is_zero:
            continue
        if secondary is None:
            eta = preimage(base, delta)
            if eta is not None:
                # exp(eta) adds [d_N, eta] = -D(eta) = -delta in degree j
                move = Move("exp", format_cochain(eta), eta=(eta,))
                cur = _apply_move(move, cur, T)
                moves.append(move)
                assert cur.component(j).is_zero
                continue
            secondary = j
            if normalize:
                g, note = _normalizing_torus(base, delta, bound)
                if g is not None:
                    move = Move("linear", _format_linear(g), linear=g)
                    cur = _apply_move(move, cur, T)
                    moves.append(move)
                    base = cur.leading_term
                if note:
                    notes.append(note)
            continue
        etas = _joint_solve(base, cur.component(secondary), delta)
        if etas is None:
            irremovable.append(j)
            continue
        move = Move("exp", " + ".join(format_cochain(e) for e in etas), eta=tuple(etas))
        cur = _apply_move(move, cur, T)
        moves.append(move)
        assert cur.component(j).is_zero
    return StandardForm(original.truncated(T), cur, moves, secondary, irremovable, notes)


def _format_linear(g: LinearAutomorphism) -> str:
    rows = ["(" + ", ".join(_fmt(x) for x in row) + ")" for row in g.matrix]
    return "matrix(" + ", ".join(rows) + ")"


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- the two-component criteria ------------------------------------------------


@dataclass
class EquivextReport:
    delta: Cochain
    d1_cocycle: bool
    d2_delta_d1_coboundary: bool
    d1_coboundary: bool
    d2_image_of_d1_cocycle: bool
    joint: bool

    @property
    def removable(self) -> bool:
        return self.delta.is_zero or self.d1_coboundary or self.d2_image_of_d1_cocycle or self.joint

    def to_json(self) -> dict:
        return {
            "delta": format_cochain(self.delta),
            "d1_cocycle": self.d1_cocycle,
            "d2_delta_is_d1_coboundary": self.d2_delta_d1_coboundary,
            "d1_coboundary": self.d1_coboundary,
            "d2_of_d1_cocycle": self.d2_image_of_d1_cocycle,
            "joint_move": self.joint,
            "removable": self.removable,
        }


def _split_two(d: LInfinityStructure) -> tuple[Cochain, Cochain]:
    if len(d.components) != 2:
        raise ValueError("expected a structure with exactly two components")
    d1, d2 = d.components.values()
    return d1, d2


def _d2_of_d1_cocycle(d1: Cochain, d2: Cochain, delta: Cochain) -> bool:
    """Is ``delta = [eta, d2]`` for an even ``eta`` with ``[eta, d1] = 0``?"""
    space = delta.space
    deg = delta.degree - d2.degree + 1
    if deg < 1:
        return False
    keys, _ = _basis_index(space, deg, 0)
    tkeys, tpos = _basis_index(space, delta.degree, 1)
    ckeys, _ = _basis_index(space, deg + d1.degree - 1, 1)
    rows = [{} for _ in range(len(tkeys) + len(ckeys))]
    for c, col in enumerate(_columns(d2, deg, 0)):
        for i, v in col.items():
            rows[i][c] = v
    for c, col in enumerate(_columns(d1, deg, 0)):
        for i, v in col.items():
            rows[len(tkeys) + i][c] = v
    rhs = [Fraction(0)] * len(rows)
    for k, v in delta.items():
        rhs[tpos[k]] = v
    return solve(rows, rhs, len(keys)) is not None


def equivext_check(d: LInfinityStructure, delta: Cochain) -> EquivextReport:
    """Which removal criteria apply to a further component ``delta`` of ``d = d_N + d_{N+k}``."""
    d1, d2 = _split_two(d)
    if delta.is_zero:
        return EquivextReport(delta, True, True, True, True, True)
    if delta.parity != 1:
        raise HomogeneityError("corrections are odd")
    if delta.degree <= d2.degree:
        raise ValueError("delta must have degree above the secondary term")
    cocycle = bracket(delta, d1).is_zero
    d2d = bracket(delta, d2)
    return EquivextReport(
        delta,
        cocycle,
        is_coboundary(d1, d2d) if not d2d.is_zero else True,
        is_coboundary(d1, delta),
        _d2_of_d1_cocycle(d1, d2, delta),
        _joint_solve(d1, d2, delta) is not None,
    )


def higher_corrections_removable(d: LInfinityStructure, degrees: Sequence[int]) -> dict[int, bool]:
    """For each degree: every odd ``D1``-cocycle whose ``D2`` is a ``D1``-coboundary is removable."""
    d1, d2 = _split_two(d)
    space = d.space
    out = {}
    for j in degrees:
        keys, _ = _basis_index(space, j, 1)
        tkeys, _ = _basis_index(space, j + d1.degree - 1, 0)
        rows = [{} for _ in tkeys]
        for c, col in enumerate(_columns(d1, j, 1)):
            for i, v in col.items():
                rows[i][c] = v
        ok = True
        for vec in nullspace(rows, len(keys)):
            delta = _cochain(space, keys, vec, j, 1)
            rep = equivext_check(d, delta)
            if rep.d2_delta_d1_coboundary and not rep.removable:
                ok = False
                break
        out[j] = ok
    return out


def extends_to_cocycle(d: LInfinityStructure, phi: Cochain, margin: int | None = None) -> bool:
    """Whether ``phi`` is the leading part of a cocycle of the whole structure ``d``."""
    if margin is None:
        margin = 3 * (max(d.components) - d.leading_degree) + 2
    keys, pos = _basis_index(d.space, phi.degree, phi.parity)
    ech = _leading_cocycles(d, phi.degree, phi.parity, phi.degree + margin)
    return ech.contains(_vector(phi, pos))


# -- the two extension families ------------------------------------------------


def build_d_lambda_e(m: int, n: int, truncation: int | None = None) -> LInfinityStructure:
    """``psi[0,1,m+1]_3 - (n+2) psi[1,1,m]_1 + psi[0,0,n+2]_1`` for ``n > m >= 0``."""
    if not 0 <= m < n:
        raise ValueError("need n > m >= 0")
    comps = {m + 2: families.d_lambda(m, -(n + 2)), n + 2: families.psi((0, 0, n + 2), 1)}
    d = LInfinityStructure(SPACE_1_2, comps, truncation or m + n + 6)
    ok, w = is_codifferential(d)
    if not ok:
        raise AssertionError(f"d_lambda_e is not square-zero: {w}")
    return d


def build_d_infty_ext(m: int, n: int, a=0, truncation: int | None = None) -> LInfinityStructure:
    """``psi[1,1,m]_1 + psi[0,1,n+1]_3 + a psi[0,1,2n-m+1]_3`` for ``n > m >= 0``."""
    if not 0 <= m < n:
        raise ValueError("need n > m >= 0")
    a = Fraction(a)
    comps = {m + 2: families.d_infty(m), n + 2: families.psi((0, 1, n + 1), 3)}
    if a:
        comps[2 * n - m + 2] = families.psi((0, 1, 2 * n - m + 1), 3, a)
    d = LInfinityStructure(SPACE_1_2, comps, truncation or 2 * n - m + 4)
    ok, w = is_codifferential(d)
    if not ok:
        raise AssertionError(f"d_infty_ext is not square-zero: {w}")
    return d


def correction_removable(m: int, n: int, k: int, coeff=1, truncation: int | None = None) -> bool:
    """Whether ``coeff * psi[0,1,k+1]_3`` added to ``d_{infty,n}`` can be removed (``k > n``)."""
    if k <= n:
        raise ValueError("corrections sit above the secondary term: need k > n")
    T = truncation or max(k + 2, 2 * n - m + 4)
    base = build_d_infty_ext(m, n, 0, T)
    d = base + families.psi((0, 1, k + 1), 3, coeff)
    sf = standard_form(d, T, normalize=False)
    return (k + 2) not in sf.irremovable


def extension_cohomology(d: LInfinityStructure, degrees: Sequence[int], margin: int | None = None):
    return filtered_cohomology(d, degrees, margin=margin)
