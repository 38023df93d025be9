"""Closed-form results for two-, three- and four-mirror resonators.

Everything here is evaluated directly from analytic expressions, with no
use of the numerical matrix engine, so the two routes cross-validate
each other.  The expressions are transcribed without algebraic
simplification; ``c`` is a reporting scale (default 1) so linewidths
come out in units of c/length and couplings in c/length**2.

Conventions: ``zeta`` is the outer-mirror polarizability, ``zeta_prime``
the inner one, ``L`` the long-phase gap and ``l`` the short-phase gap
(the two equal outer gaps in the symmetric four-mirror case).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInputError, OutsideValidityError
from .resonance import CavityFamily, resonant_phases


@dataclass(frozen=True)
class TwoMirrorAnalytics:
    theta0: float
    k0: float
    kappa_exact: float
    kappa_highR: float
    intensity: float
    G: float
    g_over_beta: float


@dataclass(frozen=True)
class ThreeMirrorAnalytics:
    theta0: float
    phi0: float
    kappa_exact: float
    kappa_highR: float
    L_eff: float
    E_L_sq: float
    E_l_sq: float
    ratio: float
    nonoverlap_lhs: float
    nonoverlap_rhs: float
    G_highR: float
    G_m: float
    r_prime: float


@dataclass(frozen=True)
class FourMirrorAnalytics:
    theta0: float
    phi0: float
    kappa_exact: float
    kappa_highR: float
    L_eff: float
    E_l_sq: float
    E_L_sq: float
    single_mode_lhs: float
    single_mode_rhs: float
    G_exact: float
    g_l_over_beta: float
    g_L_over_beta: float


def _check_positive(**lengths: float) -> None:
    for name, v in lengths.items():
        if not (v > 0 and math.isfinite(v)):
            raise InvalidInputError(f"{name} must be positive, got {v}")


def reflectivity_magnitude(zeta: float) -> float:
    """|r| = zeta / sqrt(1 + zeta**2) for a thin mirror."""
    return zeta / math.sqrt(1.0 + zeta * zeta)


def effective_length(family: CavityFamily, zeta_prime: float, L: float,
                     l: float | None = None, l1: float | None = None,
                     l2: float | None = None) -> float:
    """Length weighting each gap by its relative field intensity.

    Three-mirror: L*(1-r') + l*(1+r').  Symmetric four-mirror:
    2l + L*(sqrt(1+z'^2)-z')**2; the asymmetric variant replaces 2l by
    l1 + l2.
    """
    if family is CavityFamily.THREE_MIRROR:
        _check_positive(L=L, l=l)
        rp = reflectivity_magnitude(zeta_prime)
        return L * (1.0 - rp) + l * (1.0 + rp)
    shrink = (math.sqrt(1.0 + zeta_prime ** 2) - zeta_prime) ** 2
    if family is CavityFamily.FOUR_MIRROR_SYMMETRIC:
        _check_positive(L=L, l=l)
        return 2.0 * l + L * shrink
    if family is CavityFamily.FOUR_MIRROR_ASYMMETRIC:
        _check_positive(L=L, l1=l1, l2=l2)
        return l1 + l2 + L * shrink
    raise InvalidInputError(f"unknown family {family!r}")


def two_mirror(zeta: float, zeta_prime: float, L: float,
               k_mode_index: int = 0, c: float = 1.0) -> TwoMirrorAnalytics:
    """All closed-form properties of a two-mirror resonator.

    theta0 solves tan(2*theta0) = -(z+z')/(1-z*z') on the principal
    branch, shifted by ``k_mode_index`` half-wavelengths; the exact HWHM
    is (c/2L)(sqrt((1+z^2)(1+z'^2)) - z z') / (sqrt(z z') * ((1+z^2)(1+z'^2))^{1/4})
    and the high-reflectivity form is (c/4L)(1/z^2 + 1/z'^2).
    """
    _check_positive(L=L)
    z, zp = zeta, zeta_prime
    den = 1.0 - z * zp
    alpha = math.copysign(math.pi / 2, z + zp) if den == 0 else math.atan((z + zp) / den)
    theta0 = -0.5 * alpha + k_mode_index * math.pi
    k0 = theta0 / L
    if z * zp <= 0:
        raise InvalidInputError(
            f"exact linewidth needs zeta*zeta_prime > 0, got {z * zp}")
    s = math.sqrt((1.0 + z * z) * (1.0 + zp * zp))
    kappa_exact = (c / (2.0 * L)) * (s - z * zp) / (math.sqrt(z * zp) * math.sqrt(s))
    kappa_highr = (c / (4.0 * L)) * (1.0 / z ** 2 + 1.0 / zp ** 2)
    intensity = (1.0 + 2.0 * zp * zp) / (s - z * zp) ** 2
    return TwoMirrorAnalytics(theta0=theta0, k0=k0, kappa_exact=kappa_exact,
                              kappa_highR=kappa_highr, intensity=intensity,
                              G=c * k0 / L, g_over_beta=1.0 / math.sqrt(L))


def three_mirror_common(zeta: float, zeta_prime: float, L: float, l: float,
                        k: float, c: float = 1.0) -> ThreeMirrorAnalytics:
    """Common-resonance properties of the (z, z', z) three-mirror stack.

    ``k`` is the common-resonance wavenumber the couplings refer to.
    The exact HWHM is valid for arbitrary polarizabilities; the high-
    reflectivity forms use L_eff = L*(1-r') + l*(1+r').
    """
    _check_positive(L=L, l=l, k=k)
    z, zp = zeta, zeta_prime
    theta0, phi0 = resonant_phases(CavityFamily.THREE_MIRROR, z, zp)
    s = math.sqrt((1.0 + z * z) * (1.0 + zp * zp))
    bracket = ((l * l + L * L) * z * (1.0 + z * z) * (1.0 + 2.0 * zp * zp)
               + 2.0 * L * l * z * (1.0 + z * z)
               + (l * l - L * L) * zp * (1.0 + 2.0 * z * z) * s)
    inner = z * bracket
    if inner <= 0:
        raise OutsideValidityError(
            f"three-mirror linewidth radicand is non-positive ({inner:.3g})")
    kappa_exact = (c / 2.0) * math.sqrt((1.0 + zp * zp) / inner)
    rp = reflectivity_magnitude(zp)
    l_eff = effective_length(CavityFamily.THREE_MIRROR, zp, L, l=l)
    kappa_highr = c / (2.0 * z * z * l_eff)
    shrink = (math.sqrt(1.0 + zp * zp) - zp) ** 2
    e_l_sq = 2.0 * z * z * shrink / (1.0 + zp * zp)
    e_s_sq = 2.0 * z * z / (1.0 + zp * zp)
    return ThreeMirrorAnalytics(
        theta0=theta0, phi0=phi0, kappa_exact=kappa_exact, kappa_highR=kappa_highr,
        L_eff=l_eff, E_L_sq=e_l_sq, E_l_sq=e_s_sq, ratio=shrink,
        nonoverlap_lhs=math.sqrt(2.0 * l / L), nonoverlap_rhs=zp / z ** 2,
        G_highR=2.0 * c * k * rp / l_eff, G_m=(2.0 * c * k / (L + l)) * rp,
        r_prime=rp)


def four_mirror_symmetric_common(zeta: float, zeta_prime: float, L: float,
                                 l: float, k: float,
                                 c: float = 1.0) -> FourMirrorAnalytics:
    """Common-resonance properties of the symmetric four-mirror stack.

    Outer gaps of length ``l`` flank a middle gap ``L``.  The exact HWHM
    reduces, for highly reflecting outer mirrors, to
    c / (2 z^2 L_eff) with L_eff = 2l + L*(sqrt(1+z'^2)-z')**2, and the
    exact coupling of a movable end mirror is
    G = c k z^2 / (2 l z^2 + L*(z*sqrt(1+z'^2) - z'*sqrt(1+z^2))**2).
    """
    _check_positive(L=L, l=l, k=k)
    z, zp = zeta, zeta_prime
    theta0, phi0 = resonant_phases(CavityFamily.FOUR_MIRROR_SYMMETRIC, z, zp)
    s = math.sqrt((1.0 + z * z) * (1.0 + zp * zp))
    bracket = (L * ((1.0 + 2.0 * z * z) * (1.0 + 2.0 * zp * zp) - 4.0 * z * zp * s)
               + 2.0 * l * (1.0 + 2.0 * z * z))
    radicand = bracket ** 2 - (2.0 * l + L) ** 2 - 8.0 * l * L * zp * zp
    if radicand <= 0:
        raise OutsideValidityError(
            f"four-mirror linewidth radicand is non-positive ({radicand:.3g})")
    kappa_exact = c / math.sqrt(radicand)
    shrink = (math.sqrt(1.0 + zp * zp) - zp) ** 2
    l_eff = effective_length(CavityFamily.FOUR_MIRROR_SYMMETRIC, zp, L, l=l)
    kappa_highr = c / (2.0 * z * z * l_eff)
    g_denom = (2.0 * l * z * z
               + L * (z * math.sqrt(1.0 + zp * zp) - zp * math.sqrt(1.0 + z * z)) ** 2)
    single_lhs = math.inf if zp == 0 else 1.0 / (4.0 * zp * zp) + 2.0 * l / L
    return FourMirrorAnalytics(
        theta0=theta0, phi0=phi0, kappa_exact=kappa_exact, kappa_highR=kappa_highr,
        L_eff=l_eff, E_l_sq=2.0 * z * z, E_L_sq=2.0 * z * z * shrink,
        single_mode_lhs=single_lhs, single_mode_rhs=1.0 / z ** 2,
        G_exact=c * k * z * z / g_denom,
        g_l_over_beta=1.0 / math.sqrt(2.0 * l + L * shrink),
        g_L_over_beta=1.0 / math.sqrt(L + 2.0 * l / shrink))
