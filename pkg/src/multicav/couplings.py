"""Optomechanical and emitter couplings of a stack resonance.

The dispersive optomechanical coupling G = c*|dk0/dx| is measured by
symmetrically displacing the chosen element and re-refining the
resonance, which works for arbitrary stacks and is cross-checked against
every closed form.  Emitter couplings follow from the energy relation
for the vacuum field: the mode volume weights each gap by its relative
mean intensity, so for gap i

    g_i = beta / sqrt( sum_j  l_j * |E_j / E_i|**2 )

with ``beta`` the dipole and geometry constants folded into a single
user-supplied scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BranchJumpError, DegenerateResonanceError, InvalidInputError
from .resonance import OverlapFlag, Resonance, refine_near
from .tmm import CavityStack, gap_intensities

_DELTA_X_FRACTION = 1e-6        # default displacement, fraction of smallest gap
_DELTA_X_MAX_FRACTION = 1e-4
_NONLINEARITY_TOLERANCE = 0.01


@dataclass(frozen=True)
class EmitterParams:
    """Two-level emitter constants: dipole scale beta and decay rate gamma."""

    beta: float
    gamma: float

    def __post_init__(self):
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise InvalidInputError(f"beta must be positive, got {self.beta}")
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise InvalidInputError(f"gamma must be positive, got {self.gamma}")


@dataclass(frozen=True)
class OMCouplingResult:
    """Displacement-response coupling with its linearity diagnostic."""

    G: float
    delta_x: float
    relative_nonlinearity: float
    nonlinearity_warning: bool


@dataclass(frozen=True)
class JCGapCoupling:
    gap_index: int
    g: float
    zero_field: bool


@dataclass(frozen=True)
class CouplingReport:
    """Per-resonance couplings and cooperativity figures of merit."""

    resonance: Resonance
    kappa: float
    G: float | None
    g_per_gap: tuple[float, ...] | None
    C_om: float | None
    C_jc_per_gap: tuple[float, ...] | None
    emitter: EmitterParams | None
    nonlinearity_warning: bool = False
    normalization_notes: dict | None = None


def _require_resolved(resonance: Resonance) -> None:
    if resonance.overlap_flag is OverlapFlag.OVERLAPPING:
        raise InvalidInputError(
            f"resonance at k0={resonance.k0:.6g} overlaps its neighbors; "
            "couplings need a well-resolved line")


def _min_adjacent_gap(stack: CavityStack, index: int) -> float:
    gaps = stack.gaps
    if not gaps:
        raise InvalidInputError("single-element stack has no gap to modulate")
    adjacent = []
    if index > 0:
        adjacent.append(gaps[index - 1])
    if index < len(stack.elements) - 1:
        adjacent.append(gaps[index])
    return min(adjacent)


def _shifted_k0(stack: CavityStack, index: int, dx: float,
                resonance: Resonance) -> float:
    moved = stack.displaced(index, dx)
    spacing = resonance.neighbor_spacing
    window = spacing / 4.0 if math.isfinite(spacing) else 0.1 * resonance.k0
    try:
        return refine_near(moved, resonance.k0, window)
    except DegenerateResonanceError as exc:
        raise BranchJumpError(
            f"resonance at k0={resonance.k0:.6g} was lost (moved farther than "
            f"{window:.3g}) under displacement {dx:.3g}") from exc


def om_coupling(stack: CavityStack, resonance: Resonance, movable_index: int,
                delta_x: float | None = None, c: float = 1.0) -> OMCouplingResult:
    """G = c*|dk0/dx| for displacing element ``movable_index``.

    Interior elements keep the total length fixed (one adjacent gap
    grows while the other shrinks); end mirrors change it.  The central
    difference is repeated at half the step and must agree within 1%,
    otherwise the result carries a nonlinearity warning.
    """
    _require_resolved(resonance)
    n = len(stack.elements)
    if not (0 <= movable_index < n):
        raise InvalidInputError(f"movable_index {movable_index} out of range")
    min_gap = _min_adjacent_gap(stack, movable_index)
    if delta_x is None:
        delta_x = _DELTA_X_FRACTION * min_gap
    if not (0 < delta_x <= _DELTA_X_MAX_FRACTION * min_gap):
        raise InvalidInputError(
            f"delta_x must be in (0, {_DELTA_X_MAX_FRACTION:g} * smallest "
            f"adjacent gap], got {delta_x}")

    def slope(h: float) -> float:
        up = _shifted_k0(stack, movable_index, +h, resonance)
        down = _shifted_k0(stack, movable_index, -h, resonance)
        return c * abs(up - down) / (2.0 * h)

    # fast-moving resonances (G near the bare short-cavity scale) need a
    # smaller step to stay on the tracked branch; a genuine jump persists
    # at any step size and still raises
    for _ in range(8):
        try:
            g_coarse = slope(delta_x)
            break
        except BranchJumpError:
            if delta_x < 1e-12 * min_gap:
                raise
            delta_x /= 10.0
    else:
        raise BranchJumpError(
            f"could not track the resonance at k0={resonance.k0:.6g} "
            "even with vanishing displacement")
    g_fine = slope(delta_x / 2.0)
    scale = max(abs(g_fine), abs(g_coarse), 1e-300)
    deviation = abs(g_coarse - g_fine) / scale
    return OMCouplingResult(G=g_fine, delta_x=delta_x,
                            relative_nonlinearity=deviation,
                            nonlinearity_warning=deviation > _NONLINEARITY_TOLERANCE)


def jc_coupling(stack: CavityStack, resonance: Resonance,
                emitter: EmitterParams) -> list[JCGapCoupling]:
    """Emitter coupling in every interior gap at the resonance.

    The gap holding the strongest field gets the largest g; a gap with
    strictly zero mean field reports g = 0 with a flag rather than an
    error.
    """
    _require_resolved(resonance)
    intensities = gap_intensities(stack, resonance.k0)
    if len(intensities) == 0:
        raise InvalidInputError("single-element stack has no interior gap")
    gaps = stack.gaps
    weighted = float(sum(l * i for l, i in zip(gaps, intensities)))
    if weighted <= 0.0:
        raise InvalidInputError("no field energy stored in any gap")
    out = []
    for j, intensity in enumerate(intensities):
        if intensity == 0.0:
            out.append(JCGapCoupling(gap_index=j, g=0.0, zero_field=True))
        else:
            g = emitter.beta * math.sqrt(intensity / weighted)
            out.append(JCGapCoupling(gap_index=j, g=g, zero_field=False))
    return out


def cooperativities(G: float | None, g_per_gap, kappa: float,
                    gamma: float | None):
    """C_om = G**2/kappa and C_jc,i = g_i**2/(kappa*gamma)."""
    if not (kappa > 0 and math.isfinite(kappa)):
        raise InvalidInputError(f"kappa must be positive, got {kappa}")
    c_om = None if G is None else G * G / kappa
    c_jc = None
    if g_per_gap is not None:
        if not (gamma and gamma > 0):
            raise InvalidInputError(f"gamma must be positive, got {gamma}")
        c_jc = tuple(g * g / (kappa * gamma) for g in g_per_gap)
    return c_om, c_jc


def coupling_report(stack: CavityStack, resonance: Resonance,
                    movable_index: int | None = None,
                    emitter: EmitterParams | None = None,
                    delta_x: float | None = None, c: float = 1.0,
                    normalization_notes: dict | None = None) -> CouplingReport:
    """Assemble kappa, G, g and the cooperativities for one resonance."""
    if movable_index is None and emitter is None:
        raise InvalidInputError("need a movable element, an emitter, or both")
    kappa = resonance.kappa_curvature
    g_result = None
    warning = False
    if movable_index is not None:
        om = om_coupling(stack, resonance, movable_index, delta_x=delta_x, c=c)
        g_result = om.G
        warning = om.nonlinearity_warning
    g_list = None
    if emitter is not None:
        g_list = tuple(gc.g for gc in jc_coupling(stack, resonance, emitter))
    c_om, c_jc = cooperativities(g_result, g_list, kappa,
                                 emitter.gamma if emitter else None)
    return CouplingReport(resonance=resonance, kappa=kappa, G=g_result,
                          g_per_gap=g_list, C_om=c_om, C_jc_per_gap=c_jc,
                          emitter=emitter, nonlinearity_warning=warning,
                          normalization_notes=normalization_notes)
