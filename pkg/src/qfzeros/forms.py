"""Diagonal unit quadratic forms F(x) = sum_i b_i x_i^2, b_i = +-1, n odd.

The Gram matrix J = diag(b_1, ..., b_n) is its own inverse, so
c^t J^{-1} c = sum_i b_i c_i^2 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .ntheory import DomainError


@dataclass(frozen=True)
class QuadraticForm:
    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.signs) < 3 or len(self.signs) % 2 == 0:
            raise DomainError("need an odd number of variables, n >= 3")
        if any(b not in (-1, 1) for b in self.signs):
            raise DomainError("signs must be +-1")

    @classmethod
    def from_string(cls, text: str) -> "QuadraticForm":
        """Parse a sign string like "+,+,-" (also accepts "++-")."""
        toks = [t.strip() for t in text.split(",")] if "," in text else list(text.strip())
        mapping = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}
        try:
            return cls(tuple(mapping[t] for t in toks))
        except KeyError as exc:
            raise DomainError(f"bad sign token {exc.args[0]!r} in form string") from None

    @property
    def n(self) -> int:
        return len(self.signs)

    @property
    def det_j(self) -> int:
        out = 1
        for b in self.signs:
            out *= b
        return out

    @property
    def m_plus(self) -> int:
        return sum(1 for b in self.signs if b == 1)

    @property
    def m_minus(self) -> int:
        return self.n - self.m_plus

    @property
    def is_definite(self) -> bool:
        return self.m_plus in (0, self.n)

    def negated(self) -> "QuadraticForm":
        return QuadraticForm(tuple(-b for b in self.signs))

    def normalized_for_two_adic(self) -> tuple["QuadraticForm", int]:
        """(form, flip) with flip = -1 when the form was negated so that
        2 * m_plus > n, the convention under which the 2-adic constants
        are stated."""
        if 2 * self.m_plus > self.n:
            return self, 1
        return self.negated(), -1

    def __call__(self, x) -> int:
        return int(sum(b * int(v) ** 2 for b, v in zip(self.signs, x)))

    def value_array(self, xs: np.ndarray) -> np.ndarray:
        """F on an (..., n) array of integer coordinates."""
        xs = np.asarray(xs)
        b = np.array(self.signs)
        return (b * xs.astype(np.int64) ** 2).sum(axis=-1)

    def value_array_float(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        return (np.array(self.signs) * xs * xs).sum(axis=-1)

    def ctjc(self, c) -> int:
        """c^t J^{-1} c = sum b_i c_i^2 (J is an involution)."""
        return int(sum(b * int(v) ** 2 for b, v in zip(self.signs, c)))

    def label(self) -> str:
        return ",".join("+" if b == 1 else "-" for b in self.signs)

    def isotropic_vector(self, bound: int = 6) -> tuple[int, ...] | None:
        """Some nonzero c with c^t J^{-1} c = 0 and |c_i| <= bound, if any.

        Definite forms have none.  Search order is deterministic.
        """
        if self.is_definite:
            return None
        for c in product(range(bound + 1), repeat=self.n):
            if any(c) and self.ctjc(c) == 0:
                return c
        return None


def all_sign_patterns(n: int):
    """All 2^n sign tuples of length n, lexicographic with +1 first."""
    return [tuple(p) for p in product((1, -1), repeat=n)]
