"""Resonance location, linewidths and overlap classification.

Transmission resonances are the local minima of the denominator
D(k) = |m22(k)|**2.  They are found by a coarse uniform scan followed by
root refinement of the exact derivative dD/dk inside each bracketing
interval, which pins k0 to machine precision even for very sharp lines.
Two independent linewidth estimators are provided: one from the local
curvature of D and one from the half-maximum points of the transmission.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import (DegenerateResonanceError, DesignVerificationError,
                     InvalidInputError, OverlappingResonanceError)
from .tmm import (CavityStack, denominator, denominator_array,
                  denominator_derivatives)

_K_RTOL = 1e-12          # relative tolerance contract for refined minima
_DEDUPE_RTOL = 1e-9


class OverlapFlag(enum.Enum):
    WELL_RESOLVED = "well_resolved"
    OVERLAPPING = "overlapping"


class CavityFamily(enum.Enum):
    THREE_MIRROR = "three_mirror"
    FOUR_MIRROR_SYMMETRIC = "four_mirror_symmetric"
    FOUR_MIRROR_ASYMMETRIC = "four_mirror_asymmetric"


@dataclass(frozen=True)
class SpectrumSample:
    k: float
    transmission: float
    denominator: float


@dataclass(frozen=True)
class Resonance:
    """A refined transmission resonance of a stack.

    ``kappa_curvature`` and ``kappa_halfmax`` are HWHM values in angular
    frequency (the speed of light applied as a reporting factor);
    ``neighbor_spacing`` is the wavenumber distance to the closest
    adjacent resonance found in the same scan (inf if none).
    """

    k0: float
    transmission_peak: float
    kappa_curvature: float
    kappa_halfmax: float | None = None
    overlap_flag: OverlapFlag | None = None
    neighbor_spacing: float = math.inf


@dataclass(frozen=True)
class OverlapCriterion:
    """Analytic single-mode inequality for a recognized stack shape."""

    family: CavityFamily
    lhs: float
    rhs: float
    satisfied: bool


@dataclass(frozen=True)
class CommonResonanceDesign:
    """Gap lengths tuned so all subcavities resonate at the same k."""

    family: CavityFamily
    gap_long: float
    gap_short: float
    theta0: float
    phi0: float
    target_k: float
    mode_indices: tuple[int, int]
    stack: CavityStack


def _fsr_estimate(stack: CavityStack) -> float:
    total = stack.total_length
    return math.pi / total if total > 0 else math.inf


def _validate_range(k_min: float, k_max: float) -> None:
    ok = (math.isfinite(k_min) and math.isfinite(k_max)
          and 0 < k_min < k_max)
    if not ok:
        raise InvalidInputError(f"need 0 < k_min < k_max, got ({k_min}, {k_max})")


def scan_arrays(stack: CavityStack, k_min: float, k_max: float,
                samples_per_fsr: int = 64):
    """Uniform sampling of (k, T, D) with at least the requested density."""
    _validate_range(k_min, k_max)
    if samples_per_fsr < 16:
        raise InvalidInputError(f"samples_per_fsr must be >= 16, got {samples_per_fsr}")
    fsr = _fsr_estimate(stack)
    spacing = (fsr if math.isfinite(fsr) else (k_max - k_min)) / samples_per_fsr
    n = max(int(math.ceil((k_max - k_min) / spacing)) + 1, 2)
    k = np.linspace(k_min, k_max, n)
    d = denominator_array(stack, k)
    return k, 1.0 / d, d


def scan_spectrum(stack: CavityStack, k_min: float, k_max: float,
                  samples_per_fsr: int = 64) -> list[SpectrumSample]:
    k, t, d = scan_arrays(stack, k_min, k_max, samples_per_fsr)
    return [SpectrumSample(float(ki), float(ti), float(di))
            for ki, ti, di in zip(k, t, d)]


def _dprime(stack: CavityStack, k: float) -> float:
    return denominator_derivatives(stack, k)[1]


def _refine_minimum(stack: CavityStack, a: float, b: float) -> float:
    """Refine the minimum of D bracketed by (a, b)."""
    da = _dprime(stack, a)
    db = _dprime(stack, b)
    if da < 0.0 < db:
        return brentq(lambda x: _dprime(stack, x), a, b,
                      xtol=1e-15 * max(a, 1.0), rtol=8.9e-16)
    res = minimize_scalar(lambda x: denominator(stack, x), bounds=(a, b),
                          method="bounded",
                          options={"xatol": 1e-13 * max(b, 1.0)})
    return float(res.x)


def find_resonances(stack: CavityStack, k_min: float, k_max: float,
                    samples_per_fsr: int = 64, c: float = 1.0) -> list[Resonance]:
    """Every local minimum of D in the range, refined and classified.

    Returns an ascending list; an empty range of minima is not an error.
    """
    k, _, d = scan_arrays(stack, k_min, k_max, samples_per_fsr)
    inner = d[1:-1]
    dip = np.minimum(d[:-2], d[2:]) - inner
    # a genuine valley dips far above rounding noise; a flat spectrum is
    # resonance-free
    interior = np.flatnonzero((dip > 0) & (dip > 1e-12 * inner)) + 1
    k0s: list[float] = []
    for i in interior:
        k0 = _refine_minimum(stack, float(k[i - 1]), float(k[i + 1]))
        if not (k_min <= k0 <= k_max):
            continue
        if k0s and abs(k0 - k0s[-1]) <= _DEDUPE_RTOL * k0:
            continue
        k0s.append(k0)
    k0s.sort()
    out: list[Resonance] = []
    for j, k0 in enumerate(k0s):
        left = k0 - k0s[j - 1] if j > 0 else math.inf
        right = k0s[j + 1] - k0 if j + 1 < len(k0s) else math.inf
        spacing = min(left, right)
        _, _, dpp = denominator_derivatives(stack, k0)
        if dpp <= 0.0:
            continue        # refined onto numerical flatness, not a minimum
        kappa = c * math.sqrt(2.0 * denominator(stack, k0) / dpp)
        out.append(Resonance(k0=k0, transmission_peak=1.0 / denominator(stack, k0),
                             kappa_curvature=kappa, neighbor_spacing=spacing))
    return classify_overlap(out, c=c)


def _kappa_curvature_at(stack: CavityStack, k0: float, c: float) -> float:
    d, _, dpp = denominator_derivatives(stack, k0)
    if dpp <= 0.0:
        raise DegenerateResonanceError(
            f"non-positive curvature of D at k0={k0}: D''={dpp}")
    return c * math.sqrt(2.0 * d / dpp)


def linewidth_curvature(stack: CavityStack, resonance, c: float = 1.0) -> float:
    """HWHM from the curvature of D: kappa = c*sqrt(2*D(k0)/D''(k0)).

    Both derivatives are evaluated exactly by differentiating the matrix
    product, so for a two-mirror stack this reproduces the closed-form
    linewidth to rounding accuracy.
    """
    k0 = getattr(resonance, "k0", resonance)
    return _kappa_curvature_at(stack, float(k0), c)


def linewidth_halfmax(stack: CavityStack, resonance, c: float = 1.0) -> float:
    """HWHM from the two points where T falls to half its peak value.

    Each half-maximum point is located by bisection to 1e-12 relative;
    if a side fails to reach half maximum before the neighboring
    resonance an :class:`OverlappingResonanceError` is raised.
    """
    k0 = float(getattr(resonance, "k0", resonance))
    d0 = denominator(stack, k0)
    target = 2.0 * d0
    spacing = getattr(resonance, "neighbor_spacing", math.inf)
    kappa0 = getattr(resonance, "kappa_curvature", None)
    limit = 0.9 * spacing if math.isfinite(spacing) else _fsr_estimate(stack)
    if not math.isfinite(limit):
        limit = 0.5 * k0
    step0 = (kappa0 / c) * 0.25 if kappa0 else limit / 256.0
    step0 = min(step0, limit / 4.0)

    def crossing(sign: float) -> float:
        lo, s = 0.0, step0
        while s <= limit:
            if denominator(stack, k0 + sign * s) >= target:
                return brentq(lambda x: denominator(stack, k0 + sign * x) - target,
                              lo, s, xtol=1e-15 * k0, rtol=1e-13)
            lo, s = s, s * 1.6
        raise OverlappingResonanceError(
            f"T does not reach half maximum within {limit:.3g} of k0={k0:.6g} "
            f"(side {'+' if sign > 0 else '-'})")

    s_right = crossing(+1.0)
    s_left = crossing(-1.0)
    return c * 0.5 * (s_right + s_left)


def classify_overlap(resonances: list[Resonance], c: float = 1.0) -> list[Resonance]:
    """Flag each resonance well-resolved iff kappa < c * spacing / 2."""
    out = []
    for r in resonances:
        if r.kappa_curvature is None:
            raise InvalidInputError("resonance is missing kappa_curvature")
        well = r.kappa_curvature < c * r.neighbor_spacing / 2.0
        flag = OverlapFlag.WELL_RESOLVED if well else OverlapFlag.OVERLAPPING
        out.append(replace(r, overlap_flag=flag))
    return out


def analytic_overlap_criterion(stack: CavityStack) -> OverlapCriterion | None:
    """Closed-form single-mode inequality when the stack shape allows one.

    Three mirrors with equal outer polarizabilities: sqrt(2l/L) > z'/z**2.
    Four mirrors (z, z', z', z): 1/(4 z'**2) + (l1+l2)/L > 1/z**2.
    Returns None for shapes without a recognized criterion.
    """
    z = stack.zetas
    gaps = stack.gaps
    if len(z) == 3 and math.isclose(z[0], z[2], rel_tol=1e-12, abs_tol=1e-15):
        zeta, zp = z[0], z[1]
        if zeta == 0:
            return None
        big, small = max(gaps), min(gaps)
        lhs = math.sqrt(2.0 * small / big)
        rhs = abs(zp) / zeta ** 2
        return OverlapCriterion(CavityFamily.THREE_MIRROR, lhs, rhs, lhs > rhs)
    if (len(z) == 4 and math.isclose(z[0], z[3], rel_tol=1e-12, abs_tol=1e-15)
            and math.isclose(z[1], z[2], rel_tol=1e-12, abs_tol=1e-15)):
        zeta, zp = z[0], z[1]
        if zeta == 0 or zp == 0:
            return None
        family = (CavityFamily.FOUR_MIRROR_SYMMETRIC
                  if math.isclose(gaps[0], gaps[2], rel_tol=1e-12)
                  else CavityFamily.FOUR_MIRROR_ASYMMETRIC)
        lhs = 1.0 / (4.0 * zp ** 2) + (gaps[0] + gaps[2]) / gaps[1]
        rhs = 1.0 / zeta ** 2
        return OverlapCriterion(family, lhs, rhs, lhs > rhs)
    return None


def _principal_arctan(num: float, den: float) -> float:
    if den == 0.0:
        return math.copysign(math.pi / 2.0, num)
    return math.atan(num / den)


def resonant_phases(family: CavityFamily, zeta: float,
                    zeta_prime: float) -> tuple[float, float]:
    """Principal-branch round-trip phases (theta0, phi0) for a family.

    For the three-mirror family theta0 belongs to the gap between the
    first two mirrors and carries a +pi/2 offset; phi0 belongs to the
    remaining gap.  For the symmetric four-mirror family theta0 belongs
    to the middle gap and phi0 to the two outer gaps.
    """
    alpha = _principal_arctan(zeta + zeta_prime, 1.0 - zeta * zeta_prime)
    if family is CavityFamily.THREE_MIRROR:
        return -0.5 * alpha + math.pi / 2.0, -0.5 * alpha
    if family is CavityFamily.FOUR_MIRROR_SYMMETRIC:
        beta = _principal_arctan(2.0 * zeta_prime, 1.0 - zeta_prime ** 2)
        return -0.5 * beta, -0.5 * alpha
    raise InvalidInputError(f"no common-resonance construction for {family}")


def design_common_resonance(family: CavityFamily, zeta: float, zeta_prime: float,
                            target_k: float, mode_indices: tuple[int, int],
                            verify: bool = True) -> CommonResonanceDesign:
    """Choose gap lengths so every subcavity resonates at ``target_k``.

    ``mode_indices = (n, m)`` select the branch: the long-phase gap gets
    length (theta0 + n*pi)/k and the short-phase gap (phi0 + m*pi)/k.
    With ``verify`` the constructed stack is scanned and must show a
    resonance within 1e-6 relative of the target.
    """
    if not (target_k > 0 and math.isfinite(target_k)):
        raise InvalidInputError(f"target_k must be positive, got {target_k}")
    theta0, phi0 = resonant_phases(family, zeta, zeta_prime)
    n, m = mode_indices
    gap_long = (theta0 + n * math.pi) / target_k
    gap_short = (phi0 + m * math.pi) / target_k
    if gap_long <= 0 or gap_short <= 0:
        raise InvalidInputError(
            f"mode indices {mode_indices} give non-positive gaps "
            f"({gap_long:.3g}, {gap_short:.3g})")
    if family is CavityFamily.THREE_MIRROR:
        stack = CavityStack.three_mirror(zeta, zeta_prime, gap_long, gap_short)
    else:
        stack = CavityStack.four_mirror(zeta, zeta_prime, gap_short, gap_long,
                                        gap_short)
    if verify:
        fsr = _fsr_estimate(stack)
        found = find_resonances(stack, target_k - 2 * fsr, target_k + 2 * fsr)
        if not any(abs(r.k0 - target_k) <= 1e-6 * target_k for r in found):
            raise DesignVerificationError(
                f"no resonance within 1e-6 relative of k={target_k} "
                f"on the constructed stack")
    return CommonResonanceDesign(family, gap_long, gap_short, theta0, phi0,
                                 target_k, (n, m), stack)


def refine_near(stack: CavityStack, k_guess: float, window: float) -> float:
    """Refine the minimum of D nearest ``k_guess`` within ``+-window``.

    The bracket is grown geometrically until the derivative changes sign
    across it, which tracks a slowly moving minimum without rescanning.
    """
    w = max(window * 2 ** -20, 1e-12 * k_guess)
    while w <= window:
        if _dprime(stack, k_guess - w) < 0.0 < _dprime(stack, k_guess + w):
            return brentq(lambda x: _dprime(stack, x), k_guess - w, k_guess + w,
                          xtol=1e-15 * k_guess, rtol=8.9e-16)
        w *= 4.0
    raise DegenerateResonanceError(
        f"no bracketed minimum within {window:.3g} of k={k_guess:.6g}")
