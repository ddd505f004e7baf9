#!/usr/bin/env python3
"""
Chebyshev polynomials and trigonometric identity checks for dynkin-walk

T_n and U_n are built exactly from the three-term recurrence. Discriminants
are exact (Sylvester resultant through the Bareiss determinant). The
trigonometric products are compared in log-magnitude space so they cannot
underflow; the empirical sign of each product is recorded separately.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from .checks import LOG2, CheckResult, log_abs_product
from .errors import DomainError, InvalidParameterError
from .exact_linalg import BigMatrix, det_bareiss

logger = logging.getLogger("dynkin-walk.chebyshev")

DEFAULT_TOL = 1e-9
SIN_HALF_ANGLE_FLOOR = 1e-12

Number = Union[int, Fraction, float]


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial, coeffs[i] is the coefficient of x^i"""
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = [int(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def of(cls, *coeffs: int) -> "IntPolynomial":
        return cls(tuple(coeffs))

    @classmethod
    def x(cls) -> "IntPolynomial":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial"""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def constant(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (size - len(self.coeffs))
        b = other.coeffs + (0,) * (size - len(other.coeffs))
        return IntPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: Union[int, "IntPolynomial"]) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        if self.is_zero or other.is_zero:
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def __call__(self, x: Number) -> Number:
        """Horner evaluation; float arguments are evaluated exactly and rounded once"""
        point = Fraction(x) if isinstance(x, float) else x
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return float(acc) if isinstance(x, float) else acc

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            magnitude = abs(c)
            if power == 0:
                body = str(magnitude)
            else:
                body = ("" if magnitude == 1 else str(magnitude)) + ("x" if power == 1 else f"x^{power}")
            if not terms:
                terms.append(("-" if c < 0 else "") + body)
            else:
                terms.append(("- " if c < 0 else "+ ") + body)
        return " ".join(terms)


def _three_term(n: int, first: IntPolynomial) -> IntPolynomial:
    if n < 0:
        raise InvalidParameterError(f"Chebyshev index must be nonnegative, got {n}")
    two_x = IntPolynomial.of(0, 2)
    prev, cur = IntPolynomial.of(1), first
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, two_x * cur - prev
    return cur


def chebyshev_t(n: int) -> IntPolynomial:
    """T_n via T_{k+1} = 2x T_k - T_{k-1}, T_0 = 1, T_1 = x"""
    return _three_term(n, IntPolynomial.x())


def chebyshev_u(n: int) -> IntPolynomial:
    """U_n via the same recurrence from U_0 = 1, U_1 = 2x"""
    return _three_term(n, IntPolynomial.of(0, 2))


# ---------------------------------------------------------------------------
# exact algebra
# ---------------------------------------------------------------------------

def sylvester_matrix(p: IntPolynomial, q: IntPolynomial) -> BigMatrix:
    m, n = p.degree, q.degree
    size = m + n
    p_desc = list(reversed(p.coeffs))
    q_desc = list(reversed(q.coeffs))
    rows = []
    for shift in range(n):
        rows.append([0] * shift + p_desc + [0] * (size - shift - len(p_desc)))
    for shift in range(m):
        rows.append([0] * shift + q_desc + [0] * (size - shift - len(q_desc)))
    return BigMatrix.from_rows(rows, cols=size)


def resultant(p: IntPolynomial, q: IntPolynomial) -> int:
    if p.is_zero or q.is_zero:
        raise InvalidParameterError("resultant of the zero polynomial")
    if p.degree == 0 and q.degree == 0:
        return 1
    return det_bareiss(sylvester_matrix(p, q))


def discriminant(p: IntPolynomial) -> int:
    """(-1)^{n(n-1)/2} Res(p, p') / a_n, equal to a_n^{2n-2} * prod_{k<j} (r_j - r_k)^2"""
    if p.is_zero:
        raise InvalidParameterError("discriminant of the zero polynomial")
    n = p.degree
    if n < 1:
        raise InvalidParameterError("discriminant needs degree at least 1")
    res = resultant(p, p.derivative())
    quotient, remainder = divmod(res, p.leading)
    if remainder:
        raise InvalidParameterError("resultant not divisible by the leading coefficient")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * quotient


def vieta_root_product(p: IntPolynomial) -> Fraction:
    """Product of the roots, (-1)^n a_0 / a_n"""
    if p.degree < 1:
        raise InvalidParameterError("root product needs degree at least 1")
    sign = -1 if p.degree % 2 else 1
    return Fraction(sign * p.constant, p.leading)


def root_difference_square_exact(m: int) -> Fraction:
    """Exact square of prod_{k<j} (2cos((2j-1)pi/2m) - 2cos((2k-1)pi/2m))

    The cosines are the roots of T_m, whose leading coefficient is 2^{m-1}, so the
    square is 4^{m(m-1)/2} * Disc(T_m) / 2^{(m-1)(2m-2)}.
    """
    if m < 1:
        raise InvalidParameterError(f"m must be at least 1, got {m}")
    disc = discriminant(chebyshev_t(m))
    return Fraction(disc * 4 ** (m * (m - 1) // 2), 2 ** ((m - 1) * (2 * m - 2)))


# ---------------------------------------------------------------------------
# trigonometric checks
# ---------------------------------------------------------------------------

def _log_check(name: str, params: dict, factors: Sequence[float], expected_log: float,
               tol: float, **detail) -> CheckResult:
    log_value, sign = log_abs_product(factors)
    residual = abs(log_value - expected_log)
    passed = residual < tol
    if not passed:
        logger.warning(f"{name} {params}: log residual {residual:.3e} exceeds {tol:.1e}")
    detail.update({"log2_value": log_value / LOG2, "log2_expected": expected_log / LOG2})
    return CheckResult(name, params, passed, residual, sign, detail)


def check_root_difference_product(m: int, tol: float = DEFAULT_TOL) -> CheckResult:
    """|prod_{k<j} (2cos a_j - 2cos a_k)| = 2^{(m-1)/2} m^{m/2}, a_j = (2j-1)pi/2m"""
    if m < 1:
        raise InvalidParameterError(f"m must be at least 1, got {m}")
    roots = [2.0 * math.cos((2 * j - 1) * math.pi / (2 * m)) for j in range(1, m + 1)]
    factors = [roots[j] - roots[k] for j in range(m) for k in range(j)]
    expected = 0.5 * (m - 1) * LOG2 + 0.5 * m * math.log(m)
    exact_square = root_difference_square_exact(m)
    return _log_check("root_difference_product", {"m": m}, factors, expected, tol,
                      exact_square=str(exact_square),
                      exact_square_matches=exact_square == 2 ** (m - 1) * m ** m)


def check_cos_products(m: int, tol: float = DEFAULT_TOL) -> List[CheckResult]:
    """prod_{j=1}^{4m} cos((2j-1)pi/8m) = 2^{1-4m} and prod_{j=1}^{4m} cos(j pi/(4m+1)) = 2^{-4m}"""
    if m < 1:
        raise InvalidParameterError(f"m must be at least 1, got {m}")
    odd_eighths = [math.cos((2 * j - 1) * math.pi / (8 * m)) for j in range(1, 4 * m + 1)]
    vieta_t = vieta_root_product(chebyshev_t(4 * m))
    first = _log_check("cos_product_odd_eighths", {"m": m}, odd_eighths, (1 - 4 * m) * LOG2, tol,
                       vieta=str(vieta_t), vieta_matches=vieta_t == Fraction(1, 2 ** (4 * m - 1)))

    fractions = [math.cos(j * math.pi / (4 * m + 1)) for j in range(1, 4 * m + 1)]
    vieta_u = vieta_root_product(chebyshev_u(4 * m))
    second = _log_check("cos_product_4m_plus_1", {"m": m}, fractions, -4 * m * LOG2, tol,
                        vieta=str(vieta_u), vieta_matches=vieta_u == Fraction(1, 2 ** (4 * m)))
    return [first, second]


def check_sin_product(m: int, tol: float = DEFAULT_TOL) -> CheckResult:
    """prod_{j=1}^{m-1} sin((2j-1)pi/(4(m-1))) = 2^{3/2-m}

    The product variable and the index inside the sine are read as the same
    running index.
    """
    if m < 2:
        raise InvalidParameterError(f"sine product needs m >= 2, got {m}")
    factors = [math.sin((2 * j - 1) * math.pi / (4 * (m - 1))) for j in range(1, m)]
    vieta = vieta_root_product(chebyshev_t(2 * (m - 1)))
    expected_vieta = Fraction((-1) ** (m - 1), 2 ** (2 * m - 3))
    return _log_check("sin_product", {"m": m}, factors, (1.5 - m) * LOG2, tol,
                      vieta=str(vieta), vieta_matches=vieta == expected_vieta)


def check_cos_sum(a: float, b: float, x: float, m: int, tol: float = DEFAULT_TOL) -> CheckResult:
    """sum_{k=1}^m cos((ak+b)x) against its telescoped closed form"""
    if m < 1:
        raise InvalidParameterError(f"m must be at least 1, got {m}")
    s = math.sin(0.5 * a * x)
    if abs(s) < SIN_HALF_ANGLE_FLOOR:
        raise DomainError(f"sin(ax/2) = {s:.3e} is numerically zero")
    direct = math.fsum(math.cos((a * k + b) * x) for k in range(1, m + 1))
    closed = (math.sin(((m + 0.5) * a + b) * x) - math.sin((0.5 * a + b) * x)) / (2.0 * s)
    residual = abs(direct - closed)
    return CheckResult("cos_sum", {"a": a, "b": b, "x": x, "m": m}, residual < tol, residual,
                       1 if direct >= 0 else -1, {"direct": direct, "closed_form": closed})


def run_all_checks(m_max: int, tol: float = DEFAULT_TOL) -> List[CheckResult]:
    """Every trigonometric check for m = 1..m_max, plus cosine sums on a fixed grid"""
    results = []
    for m in range(1, m_max + 1):
        results.append(check_root_difference_product(m, tol))
        results.extend(check_cos_products(m, tol))
        if m >= 2:
            results.append(check_sin_product(m, tol))
        for a, b, x in ((2.0, -1.0, math.pi / 8), (1.0, 0.0, math.pi / 3), (3.0, 0.5, 0.7)):
            results.append(check_cos_sum(a, b, x, m, tol))
    return results
