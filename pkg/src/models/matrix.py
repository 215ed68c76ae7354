"""
Matrix Module for ECFCensus
Arbitrary-precision 2x2 integer matrices acting by Moebius transformations
"""
from dataclasses import dataclass
from typing import Tuple


@dataclass(frozen=True)
class Mat2Z:
    """2x2 integer matrix [[a, b], [c, d]]"""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> "Mat2Z":
        return cls(1, 0, 0, 1)

    @classmethod
    def swap(cls) -> "Mat2Z":
        """The matrix J2 = [[0, 1], [1, 0]]"""
        return cls(0, 1, 1, 0)

    @classmethod
    def from_rows(cls, rows) -> "Mat2Z":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    def rows(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, other: "Mat2Z") -> "Mat2Z":
        if not isinstance(other, Mat2Z):
            return NotImplemented
        return Mat2Z(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def power(self, k: int) -> "Mat2Z":
        """Non-negative integer power by repeated squaring"""
        if k < 0:
            return self.inverse().power(-k)
        result = Mat2Z.identity()
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def inverse(self) -> "Mat2Z":
        """Inverse over the integers; only defined for det = +-1"""
        det = self.det
        if det not in (1, -1):
            raise ZeroDivisionError(f"matrix {self.rows()} is not unimodular")
        return Mat2Z(self.d * det, -self.b * det, -self.c * det, self.a * det)

    def mod2(self) -> Tuple[int, int, int, int]:
        return (self.a % 2, self.b % 2, self.c % 2, self.d % 2)

    def is_identity_mod2(self) -> bool:
        return self.mod2() == (1, 0, 0, 1)

    def is_swap_mod2(self) -> bool:
        return self.mod2() == (0, 1, 1, 0)

    def max_entry(self) -> int:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"
