"""Exact rational helpers: polyratio parsing, word weights, small linear solves."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

PolyRatio = tuple  # tuple[Fraction, ...]


def parse_rational(text: str) -> Fraction:
    """``"3/10"`` or ``"0.3"`` -> Fraction(3, 10); decimals are read exactly."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    return Fraction(text)


def polyratio(values, k: int | None = None) -> PolyRatio:
    """Build a validated polyratio from a string "a,b,..." or an iterable."""
    if isinstance(values, str):
        values = [parse_rational(v) for v in values.split(",")]
    alpha = tuple(Fraction(v) for v in values)
    if k is not None and len(alpha) != k:
        raise ValueError(f"polyratio has {len(alpha)} entries, fractal has {k} cells")
    for a in alpha:
        if not 0 < a < 1:
            raise ValueError(f"ratio {a} not in (0, 1)")
    return alpha


def word_weight(alpha: Sequence[Fraction], word) -> Fraction:
    w = Fraction(1)
    for i in word:
        w *= alpha[i - 1]
    return w


def fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_decimal(x: Fraction) -> str:
    return f"{float(x):.6g}"


class IntScale:
    """Common-denominator view of a polyratio.

    With D the lcm of the denominators, every word weight at level <= m is
    ``scaled(word) / D**m`` for an integer ``scaled(word)``; shortest paths can
    then run on integers.
    """

    def __init__(self, alpha: Sequence[Fraction], m: int):
        self.alpha = tuple(Fraction(a) for a in alpha)
        self.m = m
        self.D = math.lcm(*(a.denominator for a in self.alpha))
        self.nums = [int(a * self.D) for a in self.alpha]
        self.unit = self.D ** m

    def scaled(self, word) -> int:
        v = self.D ** (self.m - len(word))
        for i in word:
            v *= self.nums[i - 1]
        return v

    def unscale(self, v: int) -> Fraction:
        return Fraction(v, self.unit)


def solve_exact(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan elimination over the rationals; None if singular."""
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(A, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            return None
        M[col], M[pivot] = M[pivot], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]
