"""Exact Wiener index and mean first-passage time of generalized Vicsek fractals.

Inputs are the seed's vertex count ``n`` and Wiener index ``W`` plus the
operation parameter ``s`` and generation ``t``. One step of V_s maps

    W  ->  3 (s+1)^2 W + (s^2 - s - 2) N^2 + (s + 2) N

where ``N`` is the vertex count before the step. :func:`wiener_closed` is
the solution of that recurrence; it is checked against the recurrence and
against breadth-first search on explicit graphs. The formulas as they were
originally published are kept in :func:`eval_printed_formulas` for the
errata report only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Context, Decimal
from fractions import Fraction

from .errors import BadParameter, DegenerateSize, InternalInconsistency

VARIANTS = ("derived", "printed-theorem3", "printed-corollary4",
            "printed-corollary5", "printed-AP5")


@dataclass(frozen=True)
class ClosedFormParams:
    n: int
    W: int
    s: int
    t: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise BadParameter(f"seed vertex count must be >= 1, got {self.n}")
        if self.W < 0:
            raise BadParameter(f"Wiener index must be >= 0, got {self.W}")
        if (self.W == 0) != (self.n == 1):
            raise BadParameter(f"W = 0 exactly when n = 1 (got n={self.n}, W={self.W})")
        if self.s < 2:
            raise BadParameter(f"s must be >= 2, got {self.s}")
        if self.t < 0:
            raise BadParameter(f"t must be >= 0, got {self.t}")

    @classmethod
    def typical(cls, s, t=0):
        """Parameters of the star seed with ``s`` leaves (W = s^2)."""
        return cls(s + 1, s * s, s, t)

    @property
    def is_typical(self) -> bool:
        return self.n == self.s + 1 and self.W == self.s ** 2

    @property
    def vertex_count(self) -> int:
        return self.n * (self.s + 1) ** self.t


@dataclass(frozen=True)
class ClosedFormReport:
    variant: str
    vertex_count_t: int
    wiener_t: int | Fraction | None
    mfpt_t: Fraction | None

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "vertex_count": str(self.vertex_count_t),
            "wiener_num": _num(self.wiener_t),
            "wiener_den": _den(self.wiener_t),
            "mfpt_num": _num(self.mfpt_t),
            "mfpt_den": _den(self.mfpt_t),
        }


@dataclass(frozen=True)
class ScalingReport:
    s: int
    lambda_: float
    spectral_dim: float
    fractal_dim: float
    walk_dim: float
    delta_series: list = field(default_factory=list)


def wiener_one_step(n: int, W: int, s: int) -> int:
    ClosedFormParams(n, W, s)
    return 3 * (s + 1) ** 2 * W + (s * s - s - 2) * n * n + (s + 2) * n


def wiener_recursive(p: ClosedFormParams) -> int:
    w, size = p.W, p.n
    for _ in range(p.t):
        w = 3 * (p.s + 1) ** 2 * w + (p.s * p.s - p.s - 2) * size * size + (p.s + 2) * size
        size *= p.s + 1
    return w


def wiener_closed(p: ClosedFormParams) -> int:
    n, W, s, t = p.n, p.W, p.s, p.t
    if t == 0:
        return W
    q = s + 1
    second, rem2 = divmod((s - 2) * n * n * q ** (2 * t - 1) * (3 ** t - 1), 2)
    third, rem3 = divmod((s + 2) * n * q ** (t - 1) * ((3 * q) ** t - 1), 3 * s + 2)
    if rem2 or rem3:
        raise InternalInconsistency(f"non-exact division in closed form at {p}")
    return 3 ** t * q ** (2 * t) * W + second + third


def mfpt_from_wiener(wiener: int, vertex_count: int) -> Fraction:
    if vertex_count < 2:
        raise DegenerateSize("mean first-passage time needs at least 2 vertices")
    return Fraction(2 * wiener, vertex_count)


def mfpt_closed(p: ClosedFormParams) -> Fraction:
    n, W, s, t = p.n, p.W, p.s, p.t
    if p.vertex_count < 2:
        raise BadParameter("single-vertex graph has no mean first-passage time")
    q = s + 1
    return (Fraction(2 * 3 ** t * q ** t * W, n)
            + (s - 2) * n * Fraction(q) ** (t - 1) * (3 ** t - 1)
            + Fraction(2 * (s + 2) * ((3 * q) ** t - 1), (3 * s + 2) * q))


def derived_report(p: ClosedFormParams) -> ClosedFormReport:
    w = wiener_closed(p)
    size = p.vertex_count
    mfpt = mfpt_from_wiener(w, size) if size >= 2 else None
    return ClosedFormReport("derived", size, w, mfpt)


# ---------------------------------------------------------------------------
# formulas as printed
# ---------------------------------------------------------------------------

def printed_theorem3(p: ClosedFormParams) -> Fraction:
    n, W, s, t = p.n, p.W, p.s, p.t
    q = Fraction(s + 1)
    return (3 ** t * q ** (2 * t) * W
            + n * n * (3 ** t - 1) * q ** (2 * (t - 1)) / 2
            + n * q ** (t - 1) * (3 ** t * q ** t - 1) / (3 * s + 2))


def printed_corollary4(p: ClosedFormParams) -> Fraction:
    n, W, s, t = p.n, p.W, p.s, p.t
    q = Fraction(s + 1)
    return (2 * 3 ** t * q ** t / n * W
            + n * (3 ** t - 1) * q ** (t - 2)
            + 2 * (3 ** t * q ** t - 1) / ((3 * s + 2) * q))


def printed_corollary5(s: int, t: int) -> Fraction:
    q = Fraction(s + 1)
    return (2 * 3 ** t * q ** (t + 1)
            + (3 ** t - 1) * q ** (t - 1)
            + 2 * (3 ** t * q ** t - 1) / ((3 * s + 2) * q))


def printed_ap5_sums(s: int, t: int) -> tuple[Fraction, Fraction]:
    """The two partial reciprocal-eigenvalue sums as printed."""
    if s < 2 or t < 1:
        raise BadParameter(f"need s >= 2 and t >= 1, got s={s}, t={t}")
    q = s + 1
    first = Fraction((3 * q) ** t - 1, q * (3 * s + 2))
    second = (Fraction((s - 2) * q ** (t - 1) * (3 ** t - 1), 2)
              + Fraction((3 * q) ** t - 1, 3 * s + 2))
    return first, second


def eval_printed_formulas(p: ClosedFormParams) -> list[ClosedFormReport]:
    """Evaluate each published formula verbatim; no correctness claim.

    The star-seed-only expressions are included when ``p`` is the star seed
    (``n = s + 1``, ``W = s^2``).
    """
    size = p.vertex_count
    w3 = printed_theorem3(p)
    out = [
        ClosedFormReport("printed-theorem3", size, _intify(w3),
                         Fraction(2 * w3, size) if size >= 2 else None),
        ClosedFormReport("printed-corollary4", size, None,
                         printed_corollary4(p) if size >= 2 else None),
    ]
    if p.is_typical:
        out.append(ClosedFormReport("printed-corollary5", size, None,
                                    printed_corollary5(p.s, p.t)))
        if p.t >= 1:
            a, b = printed_ap5_sums(p.s, p.t)
            out.append(ClosedFormReport("printed-AP5", size, None, 2 * (a + b)))
    return out


# ---------------------------------------------------------------------------
# scaling
# ---------------------------------------------------------------------------

def scaling_exponents(s: int) -> ScalingReport:
    if s < 2:
        raise BadParameter(f"s must be >= 2, got {s}")
    ratio = math.log(s + 1) / math.log(3)
    lam = 1 + 1 / ratio
    d = 2 / lam
    d_f = ratio
    d_w = 1 + ratio
    if abs(d_w - 2 * d_f / d) > 1e-12:
        raise InternalInconsistency(f"d_w != 2 d_f / d at s={s}")
    return ScalingReport(s, lam, d, d_f, d_w)


_LN_CTX = Context(prec=40)


def log_exact(x) -> Decimal:
    """Natural log of a positive int or Fraction to 40 significant digits.

    Integers convert to Decimal exactly and Decimal's exponent range dwarfs
    float's, so numbers with millions of digits neither overflow nor lose
    their leading digits.
    """
    x = Fraction(x)
    if x <= 0:
        raise BadParameter("logarithm of a non-positive number")
    return _LN_CTX.subtract(_LN_CTX.ln(Decimal(x.numerator)),
                            _LN_CTX.ln(Decimal(x.denominator)))


def delta(p: ClosedFormParams) -> float:
    size = p.vertex_count
    if size < 2:
        raise BadParameter(f"vertex count {size} < 2 at t={p.t}")
    return float(_LN_CTX.divide(log_exact(mfpt_closed(p)), log_exact(size)))


def delta_series(p: ClosedFormParams, t_range) -> list[tuple[int, float]]:
    """``(t, ln A_t / ln |V_t|)`` for each ``t`` in ``t_range``."""
    return [(t, delta(ClosedFormParams(p.n, p.W, p.s, t))) for t in t_range]


def scaling_report(p: ClosedFormParams, t_range) -> ScalingReport:
    base = scaling_exponents(p.s)
    return ScalingReport(base.s, base.lambda_, base.spectral_dim,
                         base.fractal_dim, base.walk_dim,
                         delta_series(p, t_range))


def _intify(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _num(x):
    return None if x is None else str(Fraction(x).numerator)


def _den(x):
    return None if x is None else str(Fraction(x).denominator)
