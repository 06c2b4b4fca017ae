"""Z2-graded spaces, monomials of the reduced symmetric coalgebra, Koszul signs.

Generators are numbered from 0 with the odd ones first, so on the 1|2 space
``w1, w2`` (indices 0, 1) are odd and ``w3`` (index 2) is even.  A monomial is
stored as its exponent tuple; its canonical word lists the generators in
index order, ``w1^i1 w2^i2 w3^i3``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import factorial
from typing import Sequence

MultiIndex = tuple[int, ...]


@dataclass(frozen=True)
class GradedDim:
    even: int
    odd: int

    def __add__(self, other: GradedDim) -> GradedDim:
        return GradedDim(self.even + other.even, self.odd + other.odd)

    def __sub__(self, other: GradedDim) -> GradedDim:
        return GradedDim(self.even - other.even, self.odd - other.odd)

    def swapped(self) -> GradedDim:
        return GradedDim(self.odd, self.even)

    @property
    def total(self) -> int:
        return self.even + self.odd

    def as_list(self) -> list[int]:
        return [self.even, self.odd]

    @classmethod
    def parse(cls, text: str) -> GradedDim:
        if text.strip() == "0":
            return cls(0, 0)
        e, o = text.split("|")
        return cls(int(e), int(o))

    def __str__(self) -> str:
        return f"{self.even}|{self.odd}"


ZERO_DIM = GradedDim(0, 0)


@dataclass(frozen=True)
class GradedSpace:
    even_dim: int
    odd_dim: int

    def __post_init__(self):
        if self.even_dim < 0 or self.odd_dim < 0:
            raise ValueError("dimensions must be nonnegative")
        if self.even_dim + self.odd_dim < 1:
            raise ValueError("space must have at least one generator")

    @property
    def ngens(self) -> int:
        return self.even_dim + self.odd_dim

    def is_odd(self, gen: int) -> bool:
        return gen < self.odd_dim

    @property
    def odd_flags(self) -> tuple[bool, ...]:
        return tuple(self.is_odd(g) for g in range(self.ngens))

    def check_index(self, index: Sequence[int]) -> MultiIndex:
        index = tuple(int(e) for e in index)
        if len(index) != self.ngens:
            raise ValueError(f"multi-index {index} has wrong length for {self}")
        for g, e in enumerate(index):
            if e < 0:
                raise ValueError(f"negative exponent in {index}")
            if self.is_odd(g) and e > 1:
                raise ValueError(f"odd generator w{g + 1} squared in {index}")
        if sum(index) < 1:
            raise ValueError("the empty monomial is not in the reduced coalgebra")
        return index

    def index_parity(self, index: MultiIndex) -> int:
        return sum(index[: self.odd_dim]) % 2

    def gen_parity(self, gen: int) -> int:
        return 1 if self.is_odd(gen) else 0

    def unit(self, gen: int) -> MultiIndex:
        return tuple(1 if g == gen else 0 for g in range(self.ngens))

    def __str__(self) -> str:
        return f"{self.even_dim}|{self.odd_dim}"


SPACE_1_2 = GradedSpace(1, 2)
SPACE_0_3 = GradedSpace(0, 3)


def weight(index: MultiIndex) -> int:
    return sum(index)


def index_factorial(index: MultiIndex) -> int:
    out = 1
    for e in index:
        out *= factorial(e)
    return out


def canonical_word(index: MultiIndex) -> tuple[int, ...]:
    word: list[int] = []
    for g, e in enumerate(index):
        word.extend([g] * e)
    return tuple(word)


def word_index(space: GradedSpace, letters: Sequence[int]) -> MultiIndex | None:
    """Exponent vector of a word, or None when an odd letter repeats (the product vanishes)."""
    counts = [0] * space.ngens
    for g in letters:
        counts[g] += 1
    for g in range(space.odd_dim):
        if counts[g] > 1:
            return None
    return tuple(counts)


def symmetric_basis(space: GradedSpace, degree: int) -> list[MultiIndex]:
    """All monomials of the given weight, in descending lexicographic order."""
    if degree < 1:
        raise ValueError("degree must be positive")
    out: list[MultiIndex] = []

    def rec(prefix: list[int], g: int, remaining: int):
        if g == space.ngens - 1:
            if space.is_odd(g) and remaining > 1:
                return
            out.append(tuple(prefix + [remaining]))
            return
        top = min(remaining, 1) if space.is_odd(g) else remaining
        for e in range(top, -1, -1):
            rec(prefix + [e], g + 1, remaining - e)

    rec([], 0, degree)
    return out


def graded_dimension(space: GradedSpace, degree: int) -> GradedDim:
    even = odd = 0
    for index in symmetric_basis(space, degree):
        if space.index_parity(index):
            odd += 1
        else:
            even += 1
    return GradedDim(even, odd)


@dataclass
class SignedWord:
    """A word in the generators carrying the sign accumulated by reordering it."""

    letters: list[int]
    sign: int = 1

    def swap(self, pos: int, space: GradedSpace) -> None:
        a, b = self.letters[pos], self.letters[pos + 1]
        if space.is_odd(a) and space.is_odd(b):
            self.sign = -self.sign
        self.letters[pos], self.letters[pos + 1] = b, a


def koszul_sign(space: GradedSpace, word: Sequence[int], permutation: Sequence[int]) -> int:
    """Sign e with ``w[p[0]] ... w[p[n-1]] = e * w[0] ... w[n-1]``.

    ``permutation[i]`` is the position in ``word`` of the letter placed at slot
    ``i``.  The permuted word is bubble-sorted back into the original order; only
    swaps of two odd letters flip the sign.
    """
    if len(permutation) != len(word) or sorted(permutation) != list(range(len(word))):
        raise ValueError("permutation must be a bijection on the positions of the word")
    positions = list(permutation)
    tracker = SignedWord([word[p] for p in positions])
    n = len(positions)
    for i in range(n):
        for j in range(n - 1 - i):
            if positions[j] > positions[j + 1]:
                tracker.swap(j, space)
                positions[j], positions[j + 1] = positions[j + 1], positions[j]
    return tracker.sign


def unshuffles(k: int, l: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Partitions of positions 0..k+l-1 into increasing blocks of sizes k and l."""
    if k < 1 or l < 0:
        raise ValueError("need k >= 1 and l >= 0")
    n = k + l
    out = []
    for first in combinations(range(n), k):
        chosen = set(first)
        out.append((first, tuple(i for i in range(n) if i not in chosen)))
    return out


def place_letter(space: GradedSpace, gen: int, rest: MultiIndex) -> tuple[int, MultiIndex | None]:
    """Rewrite ``w_gen * w_rest`` as a signed canonical monomial."""
    if space.is_odd(gen) and rest[gen]:
        return 0, None
    sign = 1
    if space.is_odd(gen):
        passed = sum(rest[g] for g in range(gen))
        if passed % 2:
            sign = -1
    out = list(rest)
    out[gen] += 1
    return sign, tuple(out)
