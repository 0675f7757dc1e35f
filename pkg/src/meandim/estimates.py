"""Dimension estimates and the reciprocal extrapolation model."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class DimensionEstimate:
    """A finite-scale dimension sequence with its extrapolated limit.

    ``value`` is the fitted limit, ``sequence`` the raw per-scale values,
    ``schedule`` the evaluation points that produced them, ``model`` names
    the abscissa the straight-line fit used (so alternative models can be
    compared), and ``coefficients`` stores (limit, slope) of the fit.
    ``kind`` records the direction of the estimate: "exact" is reserved
    for exactness-certified systems.
    """

    value: float
    kind: str  # "upper-bound" | "lower-bound" | "exact"
    schedule: tuple = ()
    sequence: tuple[float, ...] = ()
    model: str = ""
    coefficients: tuple[float, float] = (0.0, 0.0)


def fit_limit(xs, vs) -> tuple[float, float]:
    """Least-squares fit v = v_inf + c*x; returns (v_inf, c).

    The abscissa x is a vanishing scale variable (1/M or similar), so the
    intercept is the extrapolated limit.  Raises ValueError with fewer
    than two distinct abscissae.
    """
    xs = [float(x) for x in xs]
    vs = [float(v) for v in vs]
    if len(xs) != len(vs):
        raise ValueError("schedule and values have different lengths")
    if len(set(xs)) < 2:
        raise ValueError("extrapolation needs at least two distinct scales")
    n = len(xs)
    mx = sum(xs) / n
    mv = sum(vs) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxv = sum((x - mx) * (v - mv) for x, v in zip(xs, vs))
    c = sxv / sxx
    return mv - c * mx, c
