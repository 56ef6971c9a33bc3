"""The weighted half-period cosine function space.

Functions live on [0,1]^s and are expanded in the L2-orthonormal system
2**(|k|_*/2) * prod_j cos(pi k_j x_j), k in N_0^s, where |k|_* counts the
nonzero coordinates.  The space norm weights the squared coefficients by
1/omega_k, so the reproducing kernel factorizes per coordinate as

    K(x, y) = prod_j (1 + 2 sum_{k>=1} w_j(k) cos(pi k x_j) cos(pi k y_j)),

with w_j(k) = omega**(a_j * k**b_j).  The factor 2**|k|_* is the product of
the two square roots carried by the orthonormal system.  Univariate kernel
series are truncated under the same certified-tail policy as the weight
series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .weights import (
    MultiIndex,
    REL_TOL,
    WeightSpec,
    as_multi_index,
    log_weight,
    nonzero_count,
    series_tail_bound,
)


def _check_point(x: Sequence[float], s: int) -> np.ndarray:
    pt = np.asarray(x, dtype=float)
    if pt.shape != (s,):
        raise ValueError(f"point has shape {pt.shape}, expected ({s},)")
    if np.any(pt < 0.0) or np.any(pt > 1.0):
        raise ValueError(f"point {x} outside the unit cube")
    return pt


@dataclass(frozen=True)
class CosinePolynomial:
    """A function with finitely many cosine coefficients.

    ``coeffs`` maps a multi-index k to the coefficient of the orthonormal
    basis function 2**(|k|_*/2) prod_j cos(pi k_j x_j).  The zero function is
    the empty map.  Treat instances as immutable.
    """

    dim: int
    coeffs: dict[MultiIndex, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        clean = {}
        for k, c in self.coeffs.items():
            kk = as_multi_index(k)
            if len(kk) != self.dim:
                raise ValueError(f"index {kk} has wrong length for dim {self.dim}")
            clean[kk] = float(c)
        object.__setattr__(self, "coeffs", clean)

    @property
    def support(self) -> list[MultiIndex]:
        return sorted(self.coeffs)

    def coeff(self, k: Sequence[int]) -> float:
        """Coefficient at k, zero when absent."""
        kk = as_multi_index(k)
        if len(kk) != self.dim:
            raise ValueError(f"index length {len(kk)} does not match dim {self.dim}")
        return self.coeffs.get(kk, 0.0)

    def __call__(self, x: Sequence[float]) -> float:
        return eval_function(self, x)

    def to_text(self) -> str:
        """Sparse text form: a dim header, then one line per index."""
        lines = [f"dim {self.dim}"]
        for k in sorted(self.coeffs):
            coords = " ".join(str(c) for c in k)
            lines.append(f"{coords} {self.coeffs[k]!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CosinePolynomial":
        rows = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
        if not rows or not rows[0].startswith("dim "):
            raise ValueError("missing 'dim <s>' header line")
        dim = int(rows[0].split()[1])
        coeffs: dict[MultiIndex, float] = {}
        for ln in rows[1:]:
            parts = ln.split()
            if len(parts) != dim + 1:
                raise ValueError(f"malformed coefficient line {ln!r}")
            k = tuple(int(p) for p in parts[:dim])
            coeffs[k] = float(parts[dim])
        return cls(dim=dim, coeffs=coeffs)


def eval_function(f: CosinePolynomial, x: Sequence[float]) -> float:
    """Pointwise value sum_k f(k) * 2**(|k|_*/2) * prod_j cos(pi k_j x_j)."""
    pt = _check_point(x, f.dim)
    total = 0.0
    for k, c in f.coeffs.items():
        basis = 2.0 ** (nonzero_count(k) / 2.0)
        for kj, xj in zip(k, pt):
            if kj:
                basis *= math.cos(math.pi * kj * xj)
        total += c * basis
    return total


def eval_on_points(f: CosinePolynomial, points: np.ndarray) -> np.ndarray:
    """Vectorized evaluation on an (n, s) array of points in the cube."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != f.dim:
        raise ValueError(f"points must have shape (n, {f.dim})")
    out = np.zeros(pts.shape[0])
    for k, c in f.coeffs.items():
        basis = np.full(pts.shape[0], 2.0 ** (nonzero_count(k) / 2.0))
        for j, kj in enumerate(k):
            if kj:
                basis *= np.cos(math.pi * kj * pts[:, j])
        out += c * basis
    return out


def univariate_kernel_weights(spec: WeightSpec, j: int,
                              rel_tol: float = REL_TOL) -> np.ndarray:
    """Weights w(k) = omega**(a_j k**b_j), k = 1..T, with certified tail.

    T is the smallest truncation point whose tail bound is below rel_tol
    relative to the magnitude proxy 1 + 2*sum_k w(k) of the kernel factor.
    """
    a, b = spec.a.value(j), spec.b.value(j)
    L = spec.log_inv_omega
    out = []
    total = 0.0
    k = 0
    while True:
        k += 1
        e = a * float(k) ** b * L
        w = math.exp(-e) if e != math.inf else 0.0
        out.append(w)
        total += w
        if w < 1e-16 * (1.0 + total):
            if 2.0 * series_tail_bound(a, b, spec.omega, 1.0, k) \
                    <= rel_tol * (1.0 + 2.0 * total):
                break
        if k > 2_000_000:
            raise RuntimeError("kernel series did not certify")
    return np.asarray(out)


def kernel_gram(spec: WeightSpec, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Kernel matrix K(x_i, y_j) for point arrays X (m,s) and Y (n,s)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if X.shape[1] != Y.shape[1]:
        raise ValueError("point arrays have mismatched dimension")
    s = X.shape[1]
    spec.check_dim(s)
    for arr in (X, Y):
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise ValueError("points outside the unit cube")
    G = np.ones((X.shape[0], Y.shape[0]))
    for j in range(s):
        w = univariate_kernel_weights(spec, j + 1)
        ks = math.pi * np.arange(1, len(w) + 1)
        Cx = np.cos(np.outer(X[:, j], ks))
        Cy = np.cos(np.outer(Y[:, j], ks))
        G *= 1.0 + 2.0 * (Cx * w) @ Cy.T
    return G


def kernel_eval(spec: WeightSpec, x: Sequence[float], y: Sequence[float]) -> float:
    """Reproducing kernel K(x, y) via the per-coordinate product form."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("points have mismatched dimension")
    s = x.shape[0]
    spec.check_dim(s)
    _check_point(x, s)
    _check_point(y, s)
    return float(kernel_gram(spec, x[None, :], y[None, :])[0, 0])


def space_norm(spec: WeightSpec, f: CosinePolynomial) -> float:
    """Norm sqrt(sum_k f(k)**2 / omega_k), accumulated in the log domain."""
    spec.check_dim(f.dim)
    log_terms = []
    for k, c in f.coeffs.items():
        if c == 0.0:
            continue
        log_terms.append(2.0 * math.log(abs(c)) - log_weight(spec, k))
    if not log_terms:
        return 0.0
    m = max(log_terms)
    if m == math.inf:
        return math.inf
    total = math.fsum(math.exp(t - m) for t in log_terms)
    return math.exp(0.5 * (m + math.log(total)))


def sample_unit_ball(spec: WeightSpec, support: Iterable[Sequence[int]],
                     seed: int) -> CosinePolynomial:
    """Random polynomial with unit space norm, supported on ``support``.

    Coefficients are drawn uniformly from [-1, 1] and rescaled to norm one.
    Deterministic for a fixed seed.
    """
    keys = [as_multi_index(k) for k in support]
    if not keys:
        raise ValueError("support must be nonempty")
    dims = {len(k) for k in keys}
    if len(dims) != 1:
        raise ValueError("support indices have mixed lengths")
    dim = dims.pop()
    rng = np.random.default_rng(seed)
    draws = rng.uniform(-1.0, 1.0, size=len(keys))
    raw = CosinePolynomial(dim, dict(zip(keys, draws)))
    norm = space_norm(spec, raw)
    if not (0.0 < norm < math.inf):
        raise ValueError("drawn polynomial cannot be normalized (degenerate weights)")
    return CosinePolynomial(dim, {k: c / norm for k, c in zip(keys, draws)})
