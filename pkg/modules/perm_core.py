"""
Permutation Core for Schinzel Lab.
Exact permutation arithmetic on the letters {1, ..., n}.

Features:
- Cycle-notation parsing and printing
- Composition, inversion, powers and conjugation
- Cycle decomposition, cycle type and element order
- The index statistic ind(p) = n - (number of cycles), fixed points counted

Convention:
    compose(p, q) applies p first, then q.
    p * q is the matrix-order product, (p * q)(k) = p(q(k)); hence p * q == compose(q, p).
    Words in generators, product-one, and conjugation g * x * g**-1 all use p * q,
    the order in which affine matrices multiply.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from functools import reduce
from itertools import permutations
from math import lcm
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from utils.exceptions import MalformedPermutationError, DegreeMismatchError

logger = logging.getLogger(__name__)


# ============================================
# Constants
# ============================================

_CYCLE_TEXT = re.compile(r"^\s*(\([^()]*\)\s*)*$")
_CYCLE = re.compile(r"\(([^()]*)\)")
_LETTER_SEPARATOR = re.compile(r"[\s,]+")


# ============================================
# Perm
# ============================================

@dataclass(frozen=True, order=True, slots=True)
class Perm:
    """
    A bijection of {1, ..., n} stored as its 1-based image array.

    Entry k - 1 of ``images`` is the image of letter k. Instances are immutable
    and hashable; ordering is lexicographic on the image arrays.
    """

    images: Tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        n = len(images)
        if n < 1:
            raise MalformedPermutationError("A permutation needs degree >= 1", degree=n)
        if sorted(images) != list(range(1, n + 1)):
            raise MalformedPermutationError(
                f"Image array {list(images)} is not a bijection of 1..{n}", degree=n
            )
        object.__setattr__(self, "images", images)

    @classmethod
    def _trusted(cls, images: Tuple[int, ...]) -> Perm:
        # Skips validation; callers guarantee a bijection.
        perm = object.__new__(cls)
        object.__setattr__(perm, "images", images)
        return perm

    @classmethod
    def identity(cls, degree: int) -> Perm:
        if degree < 1:
            raise MalformedPermutationError("A permutation needs degree >= 1", degree=degree)
        return cls._trusted(tuple(range(1, degree + 1)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Perm:
        """Build a permutation from disjoint cycles; unmentioned letters are fixed."""
        if degree < 1:
            raise MalformedPermutationError("A permutation needs degree >= 1", degree=degree)
        images = list(range(1, degree + 1))
        seen = set()
        for cycle in cycles:
            for letter in cycle:
                if not 1 <= letter <= degree:
                    raise MalformedPermutationError(
                        f"Letter {letter} out of range 1..{degree}", degree=degree
                    )
                if letter in seen:
                    raise MalformedPermutationError(
                        f"Letter {letter} repeated across cycles", degree=degree
                    )
                seen.add(letter)
            for i, letter in enumerate(cycle):
                images[letter - 1] = cycle[(i + 1) % len(cycle)]
        return cls._trusted(tuple(images))

    @classmethod
    def from_json(cls, data: Sequence[int]) -> Perm:
        return cls(tuple(data))

    # ---- arithmetic -------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, letter: int) -> int:
        return self.images[letter - 1]

    def __mul__(self, other: Perm) -> Perm:
        """Matrix-order product: apply ``other`` first, then ``self``."""
        if not isinstance(other, Perm):
            return NotImplemented
        if len(other.images) != len(self.images):
            raise DegreeMismatchError(self.degree, other.degree, "product")
        images = self.images
        return Perm._trusted(tuple(images[k - 1] for k in other.images))

    def inverse(self) -> Perm:
        inv = [0] * len(self.images)
        for letter, image in enumerate(self.images, start=1):
            inv[image - 1] = letter
        return Perm._trusted(tuple(inv))

    def __invert__(self) -> Perm:
        return self.inverse()

    def __pow__(self, exponent: int) -> Perm:
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = Perm.identity(self.degree)
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self, by: Perm) -> Perm:
        """Return by * self * by^-1, i.e. self with its letters relabeled by ``by``."""
        if by.degree != self.degree:
            raise DegreeMismatchError(self.degree, by.degree, "conjugation")
        images = [0] * self.degree
        for letter, image in enumerate(self.images, start=1):
            images[by(letter) - 1] = by(image)
        return Perm._trusted(tuple(images))

    # ---- structure --------------------------------------------------

    @property
    def is_identity(self) -> bool:
        return all(image == letter for letter, image in enumerate(self.images, start=1))

    def cycles(self) -> List[List[int]]:
        """Disjoint cycles including fixed points, each from its minimal letter, sorted."""
        seen = [False] * (self.degree + 1)
        result: List[List[int]] = []
        for start in range(1, self.degree + 1):
            if seen[start]:
                continue
            cycle = []
            letter = start
            while not seen[letter]:
                seen[letter] = True
                cycle.append(letter)
                letter = self.images[letter - 1]
            result.append(cycle)
        return result

    def cycle_type(self) -> Tuple[int, ...]:
        """Cycle lengths in decreasing order, fixed points included."""
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def index(self) -> int:
        return self.degree - len(self.cycles())

    def order(self) -> int:
        return reduce(lcm, (len(c) for c in self.cycles()), 1)

    def fixed_points(self) -> List[int]:
        return [letter for letter, image in enumerate(self.images, start=1) if letter == image]

    def is_n_cycle(self) -> bool:
        return len(self.cycles()) == 1

    # ---- output -----------------------------------------------------

    def to_cycle_string(self) -> str:
        parts = [c for c in self.cycles() if len(c) > 1]
        if not parts:
            return "()"
        return "".join("(" + " ".join(str(x) for x in c) + ")" for c in parts)

    def to_json(self) -> List[int]:
        return list(self.images)

    def __str__(self) -> str:
        return self.to_cycle_string()

    def __repr__(self) -> str:
        return f"Perm('{self.to_cycle_string()}', degree={self.degree})"


# ============================================
# Module-level operations
# ============================================

def parse_perm(text: str, degree: int) -> Perm:
    """
    Parse whitespace-separated disjoint cycles such as ``"(1 4)(2 3)"``.

    Empty text or ``"()"`` is the identity. Letters not mentioned are fixed.

    Raises:
        MalformedPermutationError: bad parentheses, repeated letter, letter out of range
    """
    if degree < 1:
        raise MalformedPermutationError("A permutation needs degree >= 1", text=text, degree=degree)
    if text is None or not text.strip():
        return Perm.identity(degree)
    if not _CYCLE_TEXT.match(text):
        raise MalformedPermutationError(f"Malformed cycle notation: {text!r}", text=text, degree=degree)

    cycles: List[List[int]] = []
    for body in _CYCLE.findall(text):
        tokens = [tok for tok in _LETTER_SEPARATOR.split(body.strip()) if tok]
        try:
            letters = [int(tok) for tok in tokens]
        except ValueError:
            raise MalformedPermutationError(
                f"Non-integer letter in cycle ({body})", text=text, degree=degree
            ) from None
        if letters:
            cycles.append(letters)
    try:
        return Perm.from_cycles(cycles, degree)
    except MalformedPermutationError as e:
        raise MalformedPermutationError(e.message, text=text, degree=degree) from None


def compose(p: Perm, q: Perm) -> Perm:
    """Apply p first, then q."""
    if p.degree != q.degree:
        raise DegreeMismatchError(p.degree, q.degree, "compose")
    return q * p


def product(perms: Sequence[Perm], degree: Optional[int] = None) -> Perm:
    """Matrix-order product perms[0] * perms[1] * ... (rightmost acts first)."""
    if not perms:
        if degree is None:
            raise MalformedPermutationError("Empty product needs an explicit degree")
        return Perm.identity(degree)
    return reduce(lambda a, b: a * b, perms)


def cycle_decomposition(p: Perm) -> List[List[int]]:
    return p.cycles()


def index(p: Perm) -> int:
    """ind(p) = n minus the number of disjoint cycles (fixed points count as cycles)."""
    return p.index()


def identity(degree: int) -> Perm:
    return Perm.identity(degree)


def cycle_type_label(p: Perm) -> str:
    """Nontrivial cycle lengths joined by '.', e.g. '2.2'; identity is '1'."""
    lengths = [str(length) for length in p.cycle_type() if length > 1]
    return ".".join(lengths) if lengths else "1"


def symmetric_group(degree: int) -> Iterator[Perm]:
    """All of S_n in lexicographic order of image arrays."""
    for images in permutations(range(1, degree + 1)):
        yield Perm._trusted(images)


def n_cycle(degree: int) -> Perm:
    """The standard n-cycle (1 2 ... n)."""
    return Perm._trusted(tuple(list(range(2, degree + 1)) + [1]))
