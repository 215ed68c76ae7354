"""
Words Module for ECFCensus
Digits, digit words and expansions for even (ECF), backward (BCF) and
regular (RCF) continued fractions
"""
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Tuple, Union

from core.errors import DegenerateWord, OutOfDomain
from models.matrix import Mat2Z

ECF = "ECF"
BCF = "BCF"
RCF = "RCF"
KINDS = (ECF, BCF, RCF)


@dataclass(frozen=True)
class EcfDigit:
    """ECF digit (a, e): a even and >= 2, e = +-1"""

    a: int
    e: int

    def __post_init__(self):
        if self.a < 2 or self.a % 2:
            raise OutOfDomain(f"ECF digit a={self.a} must be even and >= 2")
        if self.e not in (1, -1):
            raise OutOfDomain(f"ECF sign e={self.e} must be +1 or -1")

    def matrix(self) -> Mat2Z:
        return Mat2Z(self.a, self.e, 1, 0)

    def __str__(self) -> str:
        return f"({self.a},{self.e})"


@dataclass(frozen=True)
class BcfDigit:
    """BCF digit a >= 2 (the sign is always -1)"""

    a: int

    def __post_init__(self):
        if self.a < 2:
            raise OutOfDomain(f"BCF digit a={self.a} must be >= 2")

    @property
    def e(self) -> int:
        return -1

    def matrix(self) -> Mat2Z:
        return Mat2Z(self.a, -1, 1, 0)

    def __str__(self) -> str:
        return str(self.a)


@dataclass(frozen=True)
class RcfDigit:
    """Regular continued fraction partial quotient b >= 1"""

    b: int

    def __post_init__(self):
        if self.b < 1:
            raise OutOfDomain(f"RCF digit b={self.b} must be >= 1")

    @property
    def a(self) -> int:
        return self.b

    @property
    def e(self) -> int:
        return 1

    def matrix(self) -> Mat2Z:
        return Mat2Z(self.b, 1, 1, 0)

    def __str__(self) -> str:
        return str(self.b)


Digit = Union[EcfDigit, BcfDigit, RcfDigit]


def make_digit(kind: str, raw) -> Digit:
    """Build a digit of the given kind from a tuple (ECF) or an int"""
    if isinstance(raw, (EcfDigit, BcfDigit, RcfDigit)):
        return raw
    if kind == ECF:
        a, e = raw
        return EcfDigit(int(a), int(e))
    if kind == BCF:
        return BcfDigit(int(raw))
    if kind == RCF:
        return RcfDigit(int(raw))
    raise OutOfDomain(f"unknown expansion kind {kind!r}")


@dataclass(frozen=True)
class CfWord:
    """Finite digit word of one expansion kind"""

    kind: str
    digits: Tuple[Digit, ...] = ()

    @classmethod
    def of(cls, kind: str, raw: Iterable) -> "CfWord":
        kind = kind.upper()
        if kind not in KINDS:
            raise OutOfDomain(f"unknown expansion kind {kind!r}")
        return cls(kind, tuple(make_digit(kind, d) for d in raw))

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self) -> Iterator[Digit]:
        return iter(self.digits)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return CfWord(self.kind, self.digits[index])
        return self.digits[index]

    def __add__(self, other: "CfWord") -> "CfWord":
        if other.kind != self.kind:
            raise OutOfDomain("cannot concatenate words of different kinds")
        return CfWord(self.kind, self.digits + other.digits)

    def __mul__(self, k: int) -> "CfWord":
        return CfWord(self.kind, self.digits * k)

    def raw(self) -> List:
        """Plain representation: (a, e) tuples for ECF, ints otherwise"""
        if self.kind == ECF:
            return [(d.a, d.e) for d in self.digits]
        return [d.a for d in self.digits]

    def matrix(self) -> Mat2Z:
        result = Mat2Z.identity()
        for digit in self.digits:
            result = result @ digit.matrix()
        return result

    def sign_product(self) -> int:
        """delta(w) = (-e_1)...(-e_n), the determinant of the word matrix"""
        sign = 1
        for digit in self.digits:
            sign *= -digit.e
        return sign

    def is_degenerate(self) -> bool:
        """All-(2,-1) ECF words and all-2 BCF words converge to the rational 1"""
        if not self.digits or self.kind == RCF:
            return False
        return all(d.a == 2 and d.e == -1 for d in self.digits)

    def primitive_root(self) -> Tuple["CfWord", int]:
        """Shortest block b with self = b^k; returns (b, k)"""
        n = len(self.digits)
        for size in range(1, n + 1):
            if n % size:
                continue
            block = self.digits[:size]
            if block * (n // size) == self.digits:
                return CfWord(self.kind, block), n // size
        return self, 1

    def is_primitive(self) -> bool:
        return self.primitive_root()[1] == 1

    def rotate(self, i: int) -> "CfWord":
        if not self.digits:
            return self
        i %= len(self.digits)
        return CfWord(self.kind, self.digits[i:] + self.digits[:i])

    def reversed(self) -> "CfWord":
        return CfWord(self.kind, tuple(reversed(self.digits)))

    def require_period(self) -> "CfWord":
        """Reject empty and degenerate period words"""
        if not self.digits:
            raise DegenerateWord("period word must be nonempty")
        if self.is_degenerate():
            raise DegenerateWord(f"period {self} has the rational limit 1")
        return self

    def __str__(self) -> str:
        return ",".join(str(d) for d in self.digits)


@dataclass(frozen=True)
class ConvergentPair:
    """k-th convergent numerator and denominator"""

    p: int
    q: int


@dataclass(frozen=True)
class Expansion:
    """Eventually periodic expansion: preperiod word followed by a primitive period"""

    preperiod: CfWord
    period: CfWord

    @property
    def kind(self) -> str:
        return self.period.kind

    @property
    def is_purely_periodic(self) -> bool:
        return len(self.preperiod) == 0

    def __str__(self) -> str:
        pre = str(self.preperiod)
        return f"[{pre + ';' if pre else ''}({self.period})]"
