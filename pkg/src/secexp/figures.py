"""Reference figure sweeps: exponent comparison curves as CSV-ready rows.

Each sweep returns header scalars (echoed as CSV comments) and rows of
(x, curve_name, value).  Curve ordering facts that hold pointwise:

  * sweep 2: the Cramer exponent sits between the Holenstein-Renner lower
    and upper exponents on their validity window;
  * sweep 3: phi form >= Pinsker form >= order-2 form without smoothing;
  * sweep 4: e_phi >= e_psi >= the psi/Pinsker form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dists import (
    Alphabet,
    SubDist,
    renyi_tilde,
    renyi_tilde_derivative,
    shannon_entropy,
)
from .exponents import (
    cramer_exponent_restricted,
    critical_rate,
    holenstein_renner_exponents,
    universal_exponent,
)
from .wiretap import (
    Channel,
    e_phi,
    e_psi,
    mutual_information,
    psi_pinsker_exponent,
)

__all__ = [
    "FigureData",
    "figure_sweep",
    "example_channel",
    "example_channel_reported_info",
    "binary_entropy",
]

BERN_P = 0.2
EXAMPLE_A = 0.05


@dataclass(frozen=True)
class FigureData:
    figure_id: int
    header: dict
    rows: list  # (x, curve_name, value)


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log(1.0 - p)


def example_channel(a: float = EXAMPLE_A) -> Channel:
    """The binary asymmetric example: W_0 = (a, 1-a), W_1 = (1-9a, 9a)."""
    alph = Alphabet(("0", "1"))
    return Channel(alph, alph, [[a, 1.0 - a], [1.0 - 9.0 * a, 9.0 * a]])


def example_channel_reported_info(a: float = EXAMPLE_A) -> float:
    """The reported mutual-information formula h(1/2 - 5a) - (h(a) + h(9a))/2.

    Note: the true uniform-input mixture of this channel is (1/2 - 4a, ...),
    so this formula disagrees with the matrix-derived mutual information;
    both are reported and only this one reproduces the stated 0.119.
    """
    return binary_entropy(0.5 - 5.0 * a) - (
        binary_entropy(a) + binary_entropy(9.0 * a)
    ) / 2.0


def _figure2(points: int) -> FigureData:
    p = SubDist.bernoulli(BERN_P)
    h = shannon_entropy(p)
    h2p = renyi_tilde_derivative(p, 1.0)
    window_start = h - math.log(3.0) / 24.0
    header = {
        "p": BERN_P,
        "h": h,
        "h2_prime": h2p,
        "window_start": window_start,
    }
    rows = []
    for r in np.linspace(window_start, h, points):
        r = float(r)
        rows.append((r, "cramer", cramer_exponent_restricted(p, r).value))
        hr = holenstein_renner_exponents(p, r)
        rows.append((r, "hr_lower", hr.lower))
        rows.append((r, "hr_upper", hr.upper))
    return FigureData(2, header, rows)


def _figure3(points: int) -> FigureData:
    p = SubDist.bernoulli(BERN_P)
    h = shannon_entropy(p)
    h2 = renyi_tilde(p, 1.0)
    header = {"p": BERN_P, "h": h, "critical_rate": critical_rate(p)}
    rows = []
    for r in np.linspace(0.0, h, points):
        r = float(r)
        rows.append((r, "phi_form", universal_exponent(p, r).value))
        pins = cramer_exponent_restricted(p, r).value / 2.0
        rows.append((r, "pinsker_form", pins))
        rows.append((r, "no_smoothing", (h2 - r) / 2.0))
    return FigureData(3, header, rows)


def _figure4(points: int) -> FigureData:
    w = example_channel()
    p = SubDist.uniform(w.input_alphabet)
    i_reported = example_channel_reported_info()
    i_matrix = mutual_information(p, w)
    header = {"a": EXAMPLE_A, "i_reported": i_reported, "i_matrix": i_matrix}
    rows = []
    for r in np.linspace(i_reported, math.log(2.0), points):
        r = float(r)
        rows.append((r, "e_phi", e_phi(r, w, p)))
        rows.append((r, "e_psi", e_psi(r, w, p)))
        rows.append((r, "psi_pinsker", psi_pinsker_exponent(r, w, p)))
    return FigureData(4, header, rows)


def figure_sweep(figure_id: int, points: int = 50) -> FigureData:
    """Sweep the comparison curves for one of the reference figures (2, 3, 4)."""
    if points < 2:
        raise ValueError("need at least 2 sweep points")
    if figure_id == 2:
        return _figure2(points)
    if figure_id == 3:
        return _figure3(points)
    if figure_id == 4:
        return _figure4(points)
    raise ValueError(f"unknown figure id {figure_id}")
