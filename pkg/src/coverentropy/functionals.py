"""Generalized entropy functionals of the form ``f(sum_i g(m_i))``.

A functional is admissible for this package when either

* ``f`` is increasing and ``g`` is subadditive and concave, or
* ``f`` is decreasing and ``g`` is superadditive and convex.

Under either case, merging two positive masses never increases the value,
which is what makes the cover-entropy search over merged assignments exact.
Shannon, Renyi-alpha and Tsallis-alpha (base-2 logs, ``alpha`` in
``(0, inf) \\ {1}``) are provided as built-ins; arbitrary ``(f, g)`` pairs can
be wrapped and checked numerically with :func:`check_structure`.

Functionals are immutable value objects; :func:`evaluate` is pure.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError
from .measure import MASS_TOL

# Kernel dispatch codes for the inner map g.  Custom functionals carry
# G_CUSTOM and fall back to interpreted search paths.
G_SHANNON = 0  # t * log2(t), extended by g(0) = 0
G_POWER = 1    # t ** alpha,  g(0) = 0
G_CUSTOM = -1


class CompositionCase(enum.Enum):
    """Which of the two admissible (f, g) shapes a functional declares."""

    INCREASING_SUBADDITIVE_CONCAVE = "increasing-subadditive-concave"
    DECREASING_SUPERADDITIVE_CONVEX = "decreasing-superadditive-convex"


@dataclass(frozen=True)
class EntropyFunctional:
    """An ``f(sum g(mass))`` functional with its declared composition case.

    ``g_code`` selects the compiled search kernel (``G_SHANNON``/``G_POWER``)
    and must describe ``g`` exactly; wrap custom maps with ``G_CUSTOM``.
    """

    name: str
    alpha: float | None
    f: Callable[[float], float]
    g: Callable[[float], float]
    case: CompositionCase
    g_code: int = G_CUSTOM

    @property
    def minimizes_g_sum(self) -> bool:
        """True when minimizing the functional means minimizing ``sum g``."""
        return self.case is CompositionCase.INCREASING_SUBADDITIVE_CONCAVE

    def __call__(self, masses: Sequence[float]) -> float:
        return evaluate(self, masses)

    def __repr__(self) -> str:  # keep reprs short in reports and errors
        return f"EntropyFunctional({self.name!r})"


def evaluate(e: EntropyFunctional, masses: Sequence[float]) -> float:
    """Apply ``f`` to the g-sum over the strictly positive entries.

    Entries must lie in ``[0, 1]`` and sum to at most 1, both within
    ``MASS_TOL``; zero entries contribute nothing (the ``g(0) = 0``
    convention built into every ``g`` here).
    """
    arr = np.asarray(masses, dtype=np.float64)
    if arr.ndim != 1:
        raise ValidationError(f"masses must be one-dimensional, got shape {arr.shape}")
    if arr.size and (float(arr.min()) < 0.0 or float(arr.max()) > 1.0 + MASS_TOL):
        raise ValidationError("masses must lie in [0, 1]")
    if float(arr.sum()) > 1.0 + MASS_TOL:
        raise ValidationError(f"masses sum to {float(arr.sum())}, beyond 1")
    s = 0.0
    for m in arr:
        if m > 0.0:
            s += e.g(float(m))
    return float(e.f(s))


# ---------------------------------------------------------------------------
# Built-ins
# ---------------------------------------------------------------------------

def _g_shannon(t: float) -> float:
    return t * math.log2(t) if t > 0.0 else 0.0


def shannon() -> EntropyFunctional:
    """Base-2 Shannon entropy: ``f(x) = -x``, ``g(t) = t*log2(t)``."""
    return EntropyFunctional(
        name="shannon",
        alpha=None,
        f=lambda x: -x,
        g=_g_shannon,
        # f is decreasing; t*log2(t) is convex and, with g(0)=0, superadditive.
        case=CompositionCase.DECREASING_SUPERADDITIVE_CONVEX,
        g_code=G_SHANNON,
    )


def _check_alpha(alpha: float) -> float:
    try:
        alpha = float(alpha)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"alpha must be a number, got {alpha!r}") from exc
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise ValidationError(f"alpha must lie in (0, inf), got {alpha}")
    if alpha == 1.0:
        raise ValidationError("alpha=1 is excluded; use shannon() for that limit")
    return alpha


def _power_case(alpha: float) -> CompositionCase:
    # t**alpha is concave and subadditive for alpha < 1, convex and
    # superadditive for alpha > 1; the outer map's direction flips with the
    # sign of 1/(1-alpha) so both regimes stay admissible.
    if alpha < 1.0:
        return CompositionCase.INCREASING_SUBADDITIVE_CONCAVE
    return CompositionCase.DECREASING_SUPERADDITIVE_CONVEX


def _g_power(alpha: float) -> Callable[[float], float]:
    def g(t: float) -> float:
        return t ** alpha if t > 0.0 else 0.0

    return g


def renyi(alpha: float) -> EntropyFunctional:
    """Renyi entropy of order alpha: ``f(s) = log2(s)/(1-alpha)``, ``g(t) = t**alpha``."""
    alpha = _check_alpha(alpha)

    def f(s: float) -> float:
        return math.log2(s) / (1.0 - alpha)

    return EntropyFunctional(
        name=f"renyi:{alpha:g}",
        alpha=alpha,
        f=f,
        g=_g_power(alpha),
        case=_power_case(alpha),
        g_code=G_POWER,
    )


def tsallis(alpha: float) -> EntropyFunctional:
    """Tsallis entropy of order alpha: ``f(s) = (s-1)/(1-alpha)``, ``g(t) = t**alpha``."""
    alpha = _check_alpha(alpha)

    def f(s: float) -> float:
        return (s - 1.0) / (1.0 - alpha)

    return EntropyFunctional(
        name=f"tsallis:{alpha:g}",
        alpha=alpha,
        f=f,
        g=_g_power(alpha),
        case=_power_case(alpha),
        g_code=G_POWER,
    )


def builtin_functionals() -> tuple[EntropyFunctional, ...]:
    """A representative spread used by the self test and benchmarks."""
    return (shannon(), renyi(0.5), renyi(2.0), tsallis(0.5), tsallis(2.0))


def parse_functional(spec: str) -> EntropyFunctional:
    """Parse a selection string: ``shannon``, ``renyi:ALPHA`` or ``tsallis:ALPHA``."""
    text = spec.strip().lower()
    if text == "shannon":
        return shannon()
    for prefix, ctor in (("renyi:", renyi), ("tsallis:", tsallis)):
        if text.startswith(prefix):
            raw = text[len(prefix):]
            try:
                alpha = float(raw)
            except ValueError as exc:
                raise ValidationError(f"bad alpha literal {raw!r} in {spec!r}") from exc
            return ctor(alpha)
    raise ValidationError(
        f"unknown functional {spec!r}; expected shannon, renyi:ALPHA or tsallis:ALPHA"
    )


# ---------------------------------------------------------------------------
# Numerical structure check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructureReport:
    """Grid-based verdicts for the three conditions of the declared case.

    ``worst_*`` fields record the largest violation found (0 when clean);
    a check passes when its violation stays within ``tol``.
    """

    case: CompositionCase
    grid_size: int
    tol: float
    f_monotone: bool
    g_additive: bool
    g_curvature: bool
    worst_f_violation: float
    worst_additive_violation: float
    worst_curvature_violation: float

    @property
    def passed(self) -> bool:
        return self.f_monotone and self.g_additive and self.g_curvature


def check_structure(e: EntropyFunctional, grid_size: int = 201, tol: float = 1e-9) -> StructureReport:
    """Check the declared composition case of ``e`` on an evenly spaced grid.

    ``g`` is probed on ``[0, 1]``: sub/superadditivity on all grid pairs with
    ``s + t <= 1`` and concavity/convexity via midpoint second differences.
    ``f`` is probed for monotonicity on the span of g-sums reachable with at
    most ``grid_size`` blocks (between ``g(1)`` and ``grid_size*g(1/grid_size)``);
    ``f`` is never evaluated outside that span.
    """
    if grid_size < 3:
        raise ValidationError("grid_size must be at least 3")
    ts = np.linspace(0.0, 1.0, grid_size)
    gv = np.array([e.g(float(t)) for t in ts])

    concave_like = e.case is CompositionCase.INCREASING_SUBADDITIVE_CONCAVE

    # Midpoint second differences on the grid interior.
    second = gv[:-2] + gv[2:] - 2.0 * gv[1:-1]
    if concave_like:
        worst_curv = float(max(0.0, second.max(initial=0.0)))
    else:
        worst_curv = float(max(0.0, -second.min(initial=0.0)))

    # Additivity on grid pairs (s, t) with s + t <= 1.
    worst_add = 0.0
    for i in range(grid_size):
        s = float(ts[i])
        for j in range(i, grid_size):
            t = float(ts[j])
            u = s + t
            if u > 1.0 + 1e-15:
                break
            gap = e.g(min(u, 1.0)) - (gv[i] + gv[j])
            # subadditive wants gap <= 0; superadditive wants gap >= 0
            violation = gap if concave_like else -gap
            if violation > worst_add:
                worst_add = float(violation)

    # Monotonicity of f over the reachable span of g-sums.
    m = grid_size
    end_a = e.g(1.0)
    end_b = m * e.g(1.0 / m)
    lo, hi = min(end_a, end_b), max(end_a, end_b)
    if hi - lo < 1e-15:
        lo, hi = lo - 0.5, hi + 0.5  # degenerate custom g; probe a unit span
    xs = np.linspace(lo, hi, grid_size)
    fv = np.array([e.f(float(x)) for x in xs])
    steps = np.diff(fv)
    if concave_like:  # f must increase
        worst_f = float(max(0.0, -steps.min(initial=0.0)))
    else:  # f must decrease
        worst_f = float(max(0.0, steps.max(initial=0.0)))

    return StructureReport(
        case=e.case,
        grid_size=grid_size,
        tol=tol,
        f_monotone=worst_f <= tol,
        g_additive=worst_add <= tol,
        g_curvature=worst_curv <= tol,
        worst_f_violation=worst_f,
        worst_additive_violation=worst_add,
        worst_curvature_violation=worst_curv,
    )
