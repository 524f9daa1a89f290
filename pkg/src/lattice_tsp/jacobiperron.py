"""Jacobi-Perron continued fractions for pairs of reals, with certified digits.

Reals are fixed-point integers scaled by ``2**P``. Every quantity carries an
enclosing interval ``[lo, hi]``; a digit (a floor) is only emitted when the
whole interval agrees on it. Otherwise the run restarts from the sources at
twice the precision.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Callable

START_PRECISION = 192
PRECISION_CAP = 4096


class PrecisionCapError(ArithmeticError):
    pass


class DependentInputsError(ArithmeticError):
    pass


class _Uncertified(Exception):
    def __init__(self, zero_divisor: bool = False):
        self.zero_divisor = zero_divisor
        self.step = 0


def icbrt(n: int) -> int:
    """``floor(n ** (1/3))`` for ``n >= 0`` by integer Newton iteration."""
    if n < 0:
        raise ValueError("negative argument")
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            break
        x = y
    while x * x * x > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


@dataclass(frozen=True)
class PreciseReal:
    """A real in ``[0, 1)`` known to ``precision`` bits.

    ``value`` is ``floor(x * 2**precision)``, so ``x`` lies in
    ``[value, value + 1) / 2**precision`` (a single point if ``exact``).
    ``source`` is ``("cube_root", k, power)``, ``("rational", p, q)`` or
    ``("literal", text)``; :meth:`at` re-derives from it.
    """

    source: tuple
    precision: int
    value: int
    exact: bool = False

    @property
    def interval(self) -> tuple[int, int]:
        return self.value, self.value + (0 if self.exact else 1)

    def at(self, precision: int) -> PreciseReal:
        kind = self.source[0]
        if kind == "cube_root":
            return cube_root_frac(self.source[1], self.source[2], precision)
        if kind == "rational":
            return rational(self.source[1], self.source[2], precision)
        if kind == "literal":
            return literal(self.source[1], precision)
        raise ValueError(f"unknown source {kind!r}")

    def __float__(self) -> float:
        return self.value / (1 << self.precision)

    def fraction(self) -> Fraction:
        """Lower end of the enclosing interval as an exact rational."""
        return Fraction(self.value, 1 << self.precision)


def cube_root_frac(k: int, power: int, precision_bits: int) -> PreciseReal:
    """Fractional part of ``k ** (power/3)``."""
    if power not in (1, 2):
        raise ValueError("power must be 1 or 2")
    if k < 2:
        raise ValueError("k must be >= 2")
    if precision_bits < 64:
        raise ValueError("precision must be at least 64 bits")
    if icbrt(k) ** 3 == k:
        raise ValueError(f"{k} is a perfect cube: the result would be rational")
    n = k**power
    scaled = icbrt(n << (3 * precision_bits))
    frac = scaled - (icbrt(n) << precision_bits)
    return PreciseReal(("cube_root", k, power), precision_bits, frac)


def rational(p: int, q: int, precision_bits: int = START_PRECISION) -> PreciseReal:
    x = Fraction(p, q)
    if not 0 <= x < 1:
        raise ValueError("value must lie in [0, 1)")
    num = x.numerator << precision_bits
    return PreciseReal(("rational", x.numerator, x.denominator), precision_bits,
                       num // x.denominator, exact=num % x.denominator == 0)


def literal(text: str, precision_bits: int = START_PRECISION) -> PreciseReal:
    x = Fraction(Decimal(text))
    if not 0 <= x < 1:
        raise ValueError("value must lie in [0, 1)")
    num = x.numerator << precision_bits
    return PreciseReal(("literal", text), precision_bits,
                       num // x.denominator, exact=num % x.denominator == 0)


@dataclass(frozen=True)
class Convergent:
    index: int
    q: int
    p: int
    r: int


# A variant maps the current state (intervals for x1, x2 at scale S) to a
# digit tuple, the next state, and the 3x3 step matrix A with
# (1, x1, x2)^T proportional to A (1, x1', x2')^T.
Variant = Callable[[tuple, tuple, int], tuple]


def _floor_div(num: int, den: int) -> int:
    return num // den


def _ceil_div(num: int, den: int) -> int:
    return -(-num // den)


def _quotient(num: tuple, den: tuple, S: int) -> tuple[int, int]:
    """Enclosure of ``num/den`` (both nonnegative intervals, den > 0) at scale S."""
    nlo, nhi = num
    dlo, dhi = den
    return _floor_div(nlo * S, dhi), _ceil_div(nhi * S, dlo)


def _certified_floor(iv: tuple[int, int], S: int) -> int:
    lo, hi = iv
    d = lo // S
    if hi // S != d:
        raise _Uncertified()
    return d


def jacobi_perron_step(x1: tuple, x2: tuple, S: int):
    """Classical step ``(x1, x2) -> (x2/x1 - a, 1/x1 - b)`` with ``a = floor(x2/x1)``, ``b = floor(1/x1)``."""
    if x1[0] <= 0:
        raise _Uncertified(zero_divisor=True)
    inv = _quotient((S, S), x1, S)
    ratio = _quotient(x2, x1, S)
    b = _certified_floor(inv, S)
    a = _certified_floor(ratio, S)
    y1 = (ratio[0] - a * S, ratio[1] - a * S)
    y2 = (inv[0] - b * S, inv[1] - b * S)
    step = ((b, 0, 1), (1, 0, 0), (a, 1, 0))
    return (a, b), y1, y2, step


VARIANTS: dict[str, Variant] = {"jacobi-perron": jacobi_perron_step}


def _run(alpha: PreciseReal, beta: PreciseReal, iterations: int, step: Variant):
    S = 1 << alpha.precision
    x1, x2 = alpha.interval, beta.interval
    # columns of M hold the last three convergents (q, p, r)
    M = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    out = []
    for i in range(1, iterations + 1):
        try:
            _, x1, x2, A = step(x1, x2, S)
        except _Uncertified as exc:
            exc.step = i
            raise
        M = [[sum(M[r][t] * A[t][c] for t in range(3)) for c in range(3)] for r in range(3)]
        out.append(Convergent(i, M[0][0], M[1][0], M[2][0]))
    return out


def jacobi_perron(
    alpha: PreciseReal,
    beta: PreciseReal,
    iterations: int,
    *,
    precision: int = START_PRECISION,
    cap: int = PRECISION_CAP,
    variant: str = "jacobi-perron",
) -> list[Convergent]:
    """First ``iterations`` convergents ``(q_i, p_i, r_i)`` of ``(alpha, beta)``.

    Starts at ``precision`` bits and doubles on any uncertified digit, up to
    ``cap`` bits.
    """
    step = VARIANTS[variant]
    prec = precision
    failures = []
    while True:
        a, b = alpha.at(prec), beta.at(prec)
        if not (0 < a.value and 0 < b.value):
            raise ValueError("alpha and beta must lie in (0, 1)")
        try:
            return _run(a, b, iterations, step)
        except _Uncertified as exc:
            failures.append(exc)
        if prec >= cap:
            break
        prec = min(2 * prec, cap)
    # A divisor that stays in [0, eps], or a floor that keeps straddling the
    # same integer at every precision, points at an exact rational relation.
    if failures[-1].zero_divisor or (
        len(failures) > 1 and len({f.step for f in failures}) == 1
    ):
        raise DependentInputsError(
            f"dependent inputs suspected: step {failures[-1].step} undecidable at every precision"
        )
    raise PrecisionCapError(f"precision cap of {cap} bits reached at step {failures[-1].step}")


@dataclass(frozen=True)
class ConvergenceReport:
    index: int
    q: int
    err_alpha: float
    err_beta: float
    delta_hat: float

    @property
    def strong(self) -> bool:
        return self.delta_hat > 0


def _log_error(x: PreciseReal, p: int, q: int) -> float:
    """``log |x - p/q|``; raises if the error is within rounding of zero."""
    num = abs(x.value * q - (p << x.precision))
    # x carries one ulp of uncertainty, so num is known to within q
    if num <= q:
        raise ValueError(f"degenerate input: |x - {p}/{q}| indistinguishable from zero")
    return math.log(num) - math.log(q) - x.precision * math.log(2)


def convergence_report(
    alpha: PreciseReal, beta: PreciseReal, convergents: list[Convergent]
) -> list[ConvergenceReport]:
    """Errors ``|alpha - p/q|``, ``|beta - r/q|`` and the exponent ``delta_hat``.

    ``delta_hat = min(-log err / log q) - 1``; positive values mean the
    convergent already satisfies the ``1/q^(1+delta)`` bound.
    """
    if not convergents:
        return []
    qmax = max(c.q for c in convergents)
    prec = max(alpha.precision, 4 * qmax.bit_length() + 128)
    a, b = alpha.at(prec), beta.at(prec)
    out = []
    for c in convergents:
        logs = [_log_error(a, c.p, c.q), _log_error(b, c.r, c.q)]
        if c.q > 1:
            delta = min(-lg / math.log(c.q) for lg in logs) - 1
        else:
            delta = math.nan
        out.append(ConvergenceReport(c.index, c.q, math.exp(logs[0]), math.exp(logs[1]), delta))
    return out


def write_convergents_csv(path, convergents: list[Convergent], reports: list[ConvergenceReport]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["i", "q", "p", "r", "err_alpha", "err_beta", "delta_hat"])
        for c, rep in zip(convergents, reports):
            w.writerow([c.index, c.q, c.p, c.r, f"{rep.err_alpha:.6e}", f"{rep.err_beta:.6e}",
                        f"{rep.delta_hat:.6f}"])
