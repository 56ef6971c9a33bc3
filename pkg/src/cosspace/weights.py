"""Weight sequences and certified summation of their tail series.

A weight specification consists of a base omega in (0, 1) and two positive
sequences {a_j} (nondecreasing) and {b_j} (bounded away from zero).  The
weight attached to a multi-index k is

    omega_k = omega ** sum_j a_j * k_j**b_j.

Everything downstream (kernel values, worst-case errors, index sets) reduces
to evaluating omega_k stably and to summing one-dimensional series of the
form sum_{l>=1} omega**(a*(scale*l)**b) with a certified truncation error.
All exponentials are handled in the log domain so that weights far below the
double-precision underflow threshold degrade gracefully instead of raising.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

from scipy.special import zeta

MultiIndex = tuple[int, ...]

#: default relative tolerance for certified series values
REL_TOL = 1e-14

_KINDS = ("constant", "polynomial", "exponential", "superexponential", "list")

_MAX_SERIES_TERMS = 5_000_000


def nonzero_count(k: Sequence[int]) -> int:
    """Number of nonzero coordinates of a multi-index."""
    return sum(1 for kj in k if kj != 0)


def pow_sat(x: float, p: float) -> float:
    """x**p for x >= 0, saturating to +inf instead of raising on overflow."""
    try:
        return float(x) ** p
    except OverflowError:
        return math.inf


def as_multi_index(k: Iterable[int]) -> MultiIndex:
    """Validate and normalize a multi-index (all coordinates >= 0)."""
    t = tuple(int(kj) for kj in k)
    if any(kj < 0 for kj in t):
        raise ValueError(f"multi-index must be nonnegative, got {t}")
    return t


@dataclass(frozen=True)
class SequenceRule:
    """Closed-form description of an infinite positive sequence.

    Supported kinds (j runs from 1):

    ==================  =================  =========================
    kind                params             value at j
    ==================  =================  =========================
    constant            (c,)               c
    polynomial          (c, p)             c * j**p
    exponential         (c, r)             c * r**j
    superexponential    (c, r)             c * r**(j*j)
    list                (v1, ..., vm)      v_j for j <= m, else v_m
    ==================  =================  =========================

    An explicit list continues with its last entry (constant tail), which is
    what makes tail properties such as boundedness decidable.
    """

    kind: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        params = tuple(float(x) for x in self.params)
        object.__setattr__(self, "params", params)
        n_expected = {"constant": 1, "polynomial": 2, "exponential": 2,
                      "superexponential": 2}
        if self.kind == "list":
            if not params:
                raise ValueError("list sequence needs at least one value")
        elif len(params) != n_expected[self.kind]:
            raise ValueError(
                f"{self.kind} sequence takes {n_expected[self.kind]} "
                f"parameter(s), got {len(params)}")
        if params[0] <= 0:
            raise ValueError("leading sequence parameter must be positive")
        if self.kind == "list" and any(v <= 0 for v in params):
            raise ValueError("list sequence values must be positive")
        if self.kind in ("exponential", "superexponential") and params[1] <= 0:
            raise ValueError("exponential base must be positive")

    def value(self, j: int) -> float:
        """The j-th element, j >= 1."""
        if j < 1:
            raise ValueError("sequence index starts at 1")
        if self.kind == "constant":
            return self.params[0]
        if self.kind == "polynomial":
            c, p = self.params
            return c * float(j) ** p
        if self.kind == "exponential":
            c, r = self.params
            return c * r ** j
        if self.kind == "superexponential":
            c, r = self.params
            return c * r ** (j * j)
        vals = self.params
        return vals[j - 1] if j <= len(vals) else vals[-1]

    def prefix(self, s: int) -> tuple[float, ...]:
        """The first s elements."""
        return tuple(self.value(j) for j in range(1, s + 1))

    def is_nondecreasing(self) -> bool:
        if self.kind == "constant":
            return True
        if self.kind == "polynomial":
            return self.params[1] >= 0
        if self.kind in ("exponential", "superexponential"):
            return self.params[1] >= 1
        vals = self.params
        return all(x <= y for x, y in zip(vals, vals[1:]))

    def inf_value(self) -> float:
        """Infimum over j >= 1 (0 signals decay to zero)."""
        if self.kind == "constant":
            return self.params[0]
        if self.kind == "polynomial":
            c, p = self.params
            return c if p >= 0 else 0.0
        if self.kind in ("exponential", "superexponential"):
            c, r = self.params
            return c * r if r >= 1 else 0.0
        return min(self.params)

    def is_bounded(self) -> bool:
        if self.kind == "constant" or self.kind == "list":
            return True
        if self.kind == "polynomial":
            return self.params[1] <= 0
        return self.params[1] <= 1

    def tends_to_infinity(self) -> bool:
        if self.kind == "polynomial":
            return self.params[1] > 0
        if self.kind in ("exponential", "superexponential"):
            return self.params[1] > 1
        return False

    def log_growth(self) -> float:
        """liminf_j log(value(j)) / j, exact per family.

        Zero for constant, polynomial and list sequences, log(r) for
        exponential ones, and +inf for superexponential ones with r > 1.
        """
        if self.kind == "exponential":
            return math.log(self.params[1])
        if self.kind == "superexponential":
            r = self.params[1]
            return math.inf if r > 1 else (0.0 if r == 1 else -math.inf)
        return 0.0

    def reciprocal_sum(self) -> float:
        """sum_{j>=1} 1/value(j); math.inf when the series diverges."""
        if self.kind == "constant" or self.kind == "list":
            return math.inf
        if self.kind == "polynomial":
            c, p = self.params
            if p <= 1:
                return math.inf
            return float(zeta(p)) / c
        c, r = self.params
        if r <= 1:
            return math.inf
        if self.kind == "exponential":
            return 1.0 / (c * (r - 1.0))
        # superexponential: terms (1/c) r**(-j*j) decay fast enough that a
        # short direct sum is exact to double precision
        total = 0.0
        for j in range(1, 400):
            t = r ** (-(j * j)) / c
            total += t
            if t < 1e-18 * total:
                break
        return total


@dataclass(frozen=True)
class SeriesSum:
    """A certified value of a convergent series of positive terms."""

    value: float
    log_value: float
    terms_used: int
    tail_bound: float


@dataclass(frozen=True)
class WeightSpec:
    """Base omega and the two exponent sequences defining the weights.

    ``a`` must be positive and nondecreasing, ``b`` must have positive
    infimum.  ``s_max`` caps the dimension for explicit evaluation.  If
    a_1 < 1 the spec is accepted with a warning flag; several derived
    constructions are tuned for a_1 >= 1.
    """

    omega: float
    a: SequenceRule
    b: SequenceRule
    s_max: int = 64

    def __post_init__(self):
        if not (0.0 < self.omega < 1.0):
            raise ValueError(f"omega must lie in (0, 1), got {self.omega}")
        if self.s_max < 1:
            raise ValueError("s_max must be a positive integer")
        if not self.a.is_nondecreasing():
            raise ValueError("sequence a must be nondecreasing")
        if self.a.value(1) <= 0:
            raise ValueError("sequence a must be positive")
        if self.b.inf_value() <= 0:
            raise ValueError("sequence b must have positive infimum")
        if self.a.value(1) < 1.0:
            warnings.warn(
                "a_1 < 1: derived constants assume a_1 >= 1 and may be loose",
                stacklevel=2)

    @property
    def a_star(self) -> float:
        return self.a.value(1)

    @property
    def b_star(self) -> float:
        return self.b.inf_value()

    @property
    def a_star_below_one(self) -> bool:
        return self.a_star < 1.0

    @property
    def log_inv_omega(self) -> float:
        return -math.log(self.omega)

    def a_seq(self, s: int) -> tuple[float, ...]:
        self.check_dim(s)
        return self.a.prefix(s)

    def b_seq(self, s: int) -> tuple[float, ...]:
        self.check_dim(s)
        return self.b.prefix(s)

    def check_dim(self, s: int) -> None:
        if not (1 <= s <= self.s_max):
            raise ValueError(
                f"dimension {s} outside configured range [1, {self.s_max}]")


def exponent_sum(spec: WeightSpec, k: Sequence[int]) -> float:
    """sum_j a_j * k_j**b_j for a multi-index k (0 for the zero index)."""
    kk = as_multi_index(k)
    if len(kk) > spec.s_max:
        raise ValueError(f"index length {len(kk)} exceeds s_max {spec.s_max}")
    total = 0.0
    for j, kj in enumerate(kk, start=1):
        if kj:
            total += spec.a.value(j) * float(kj) ** spec.b.value(j)
    return total


def log_weight(spec: WeightSpec, k: Sequence[int]) -> float:
    """log of the weight at k; 0.0 for the zero index, -inf on underflow."""
    e = exponent_sum(spec, k)
    if e == 0.0:
        return 0.0
    return -e * spec.log_inv_omega


def weight(spec: WeightSpec, k: Sequence[int]) -> float:
    """The weight omega**(sum a_j k_j**b_j), flushed to 0 below range."""
    lw = log_weight(spec, k)
    if lw == -math.inf:
        return 0.0
    return math.exp(lw)


def _tail_bound_scaled(c: float, b: float, T: int) -> float:
    """Upper bound on sum_{l>T} exp(-c*(l**b - 1)) for c > 0, b > 0.

    For b >= 1 the exponent is convex in l, so l**b >= T**b + b*T**(b-1)*(l-T)
    dominates the tail by a geometric series.  For b < 1 successive dyadic
    blocks (T, 2T], (2T, 4T], ... of decreasing terms give the condensation
    bound sum_j (2**j T) exp(-c (2**j T)**b - c), summed until its own ratio
    drops below 1/2 and then closed geometrically.
    """
    if b >= 1.0:
        x = c * b * T ** (b - 1.0)
        if x == math.inf:
            return 0.0
        one_minus_rho = -math.expm1(-x)
        if one_minus_rho <= 0.0:
            return math.inf
        rho = math.exp(-x)
        head = math.exp(-c * (T ** b - 1.0)) if c * (T ** b - 1.0) != math.inf else 0.0
        return head * rho / one_minus_rho
    total = 0.0
    x = float(T)
    for _ in range(300):
        xb = x ** b
        tj = x * math.exp(-c * (xb - 1.0))
        ratio = 2.0 * math.exp(-c * xb * (2.0 ** b - 1.0))
        if ratio < 0.5:
            total += tj / (1.0 - ratio)
            return total
        total += tj
        x *= 2.0
    return math.inf


def tail_series(a: float, b: float, omega: float, scale: float,
                rel_tol: float = REL_TOL) -> SeriesSum:
    """Certified value of sum_{l>=1} omega**(a*(scale*l)**b).

    Terms are accumulated relative to the first one (log domain overall), with
    compensated summation, until the current term is below 1e-16 of the
    running sum and a certified tail bound is below ``rel_tol`` of it.
    """
    if not (a > 0 and b > 0 and scale > 0 and 0.0 < omega < 1.0):
        raise ValueError("tail_series requires a, b, scale > 0 and omega in (0,1)")
    L = -math.log(omega)
    c = a * scale ** b * L
    if c == math.inf:
        # every term underflows; the series value is an exact double 0
        return SeriesSum(value=0.0, log_value=-math.inf, terms_used=1,
                         tail_bound=0.0)
    if c == 0.0:
        raise ValueError("degenerate series exponent (a*scale**b underflowed)")
    # Kahan-compensated sum of exp(-c*(l**b - 1))
    total = 0.0
    comp = 0.0
    l = 0
    tail = math.inf
    while l < _MAX_SERIES_TERMS:
        l += 1
        e = c * (float(l) ** b - 1.0)
        t = math.exp(-e) if e != math.inf else 0.0
        y = t - comp
        hi = total + y
        comp = (hi - total) - y
        total = hi
        if t < 1e-16 * total:
            tail = _tail_bound_scaled(c, b, l)
            if tail <= rel_tol * total:
                break
    else:
        raise RuntimeError(
            f"series did not certify within {_MAX_SERIES_TERMS} terms "
            f"(a={a}, b={b}, omega={omega}, scale={scale})")
    log_value = -c + math.log(total)
    value = math.exp(log_value) if log_value > -745.0 else 0.0
    abs_tail = tail * math.exp(-c) if -c > -745.0 else 0.0
    return SeriesSum(value=value, log_value=log_value, terms_used=l,
                     tail_bound=abs_tail)


def series_tail_bound(a: float, b: float, omega: float, scale: float,
                      after: int) -> float:
    """Certified upper bound on sum_{l>after} omega**(a*(scale*l)**b)."""
    if after < 1:
        raise ValueError("tail bound defined for after >= 1")
    L = -math.log(omega)
    c = a * scale ** b * L
    if c == math.inf:
        return 0.0
    scaled = _tail_bound_scaled(c, b, after)
    if scaled == 0.0 or -c <= -745.0:
        return 0.0 if scaled != math.inf else math.inf
    return scaled * math.exp(-c)


def log_c_star(spec: WeightSpec) -> float:
    """log of 2 * omega**(-a_1) * sum_{l>=1} omega**(a_1 * l**b_star)."""
    ts = tail_series(spec.a_star, spec.b_star, spec.omega, 1.0)
    return math.log(2.0) + spec.a_star * spec.log_inv_omega + ts.log_value


def c_star(spec: WeightSpec) -> float:
    """The tail constant 2 * omega**(-a_1) * sum_l omega**(a_1 * l**b_star).

    Always at least 2; bounds every per-coordinate alias tail that appears in
    the quadrature error analysis.
    """
    return math.exp(log_c_star(spec))


def b_partial(spec: WeightSpec, s: int) -> float:
    """Partial sum of reciprocals sum_{j<=s} 1/b_j."""
    spec.check_dim(s)
    return math.fsum(1.0 / bj for bj in spec.b.prefix(s))


def b_total(spec: WeightSpec) -> float:
    """Full sum of reciprocals sum_{j>=1} 1/b_j; math.inf when divergent."""
    return spec.b.reciprocal_sum()


def alpha_star(spec: WeightSpec) -> float:
    """liminf_j log(a_j)/j; 0 for subexponential growth, +inf for
    superexponential growth."""
    return spec.a.log_growth()
