"""Bidegree (a, b) of a curve class on the quadric surface.

The two coordinates are the intersection numbers with the two line rulings;
a generic curve of bidegree (a, b) is pinned down by 2(a+b) - 1 points.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError


@dataclass(frozen=True, order=True)
class Bidegree:
    a: int
    b: int

    def __post_init__(self) -> None:
        if not (isinstance(self.a, int) and isinstance(self.b, int)):
            raise InputError(f"bidegree components must be integers, got ({self.a!r}, {self.b!r})")
        if self.a < 0 or self.b < 0:
            raise InputError(f"bidegree components must be nonnegative, got ({self.a}, {self.b})")
        if self.a + self.b < 1:
            raise InputError("bidegree (0, 0) is not a curve class")

    @property
    def point_count(self) -> int:
        """Number of point constraints, 2(a+b) - 1.  Always odd."""
        return 2 * (self.a + self.b) - 1

    @property
    def total(self) -> int:
        return self.a + self.b

    def flipped(self) -> "Bidegree":
        return Bidegree(self.b, self.a)

    def normalized(self) -> "Bidegree":
        """Ruling-swap representative with a <= b."""
        return self if self.a <= self.b else self.flipped()
