"""Transfer-matrix core for stacks of thin lossless mirrors on a 1D axis.

Each mirror is an infinitely thin, absorptionless dielectric slab with a
real dimensionless polarizability ``zeta``; free space between mirrors
only accumulates phase.  Forward/backward plane-wave amplitudes on the
two sides of any element are related by a unimodular complex 2x2 matrix,
and a whole stack composes as the ordered left-to-right product of
mirror and propagation matrices.  Amplitude vectors are ordered
``(backward, forward)`` and the matrix maps right-side amplitudes to
left-side amplitudes, so for a unit wave incident from the left the
power transmission is ``1 / |m22|**2``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidInputError


class Incidence(enum.Enum):
    """Side from which the unit-amplitude plane wave arrives."""

    FROM_LEFT = "left"
    FROM_RIGHT = "right"


@dataclass(frozen=True)
class OpticalElement:
    """A thin lossless mirror: real polarizability and axial position."""

    zeta: float
    position: float

    def __post_init__(self):
        if not (isinstance(self.zeta, (int, float)) and math.isfinite(self.zeta)):
            raise InvalidInputError(f"zeta must be finite and real, got {self.zeta!r}")
        if not (isinstance(self.position, (int, float)) and math.isfinite(self.position)):
            raise InvalidInputError(f"position must be finite, got {self.position!r}")
        if self.position < 0:
            raise InvalidInputError(f"position must be >= 0, got {self.position}")


@dataclass(frozen=True)
class CavityStack:
    """Ordered mirrors plus the incidence convention.

    Positions must be strictly increasing; the gaps between successive
    elements are the subcavities of the resonator.
    """

    elements: tuple[OpticalElement, ...]
    incidence: Incidence = Incidence.FROM_LEFT

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(self.elements) < 1:
            raise InvalidInputError("a stack needs at least one element")
        for e in self.elements:
            if not isinstance(e, OpticalElement):
                raise InvalidInputError(f"not an OpticalElement: {e!r}")
        pos = [e.position for e in self.elements]
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise InvalidInputError(f"positions must be strictly increasing, got {pos}")

    @property
    def positions(self) -> tuple[float, ...]:
        return tuple(e.position for e in self.elements)

    @property
    def zetas(self) -> tuple[float, ...]:
        return tuple(e.zeta for e in self.elements)

    @property
    def gaps(self) -> tuple[float, ...]:
        p = self.positions
        return tuple(b - a for a, b in zip(p, p[1:]))

    @property
    def total_length(self) -> float:
        return self.elements[-1].position - self.elements[0].position

    @classmethod
    def two_mirror(cls, zeta: float, zeta_prime: float, length: float,
                   incidence: Incidence = Incidence.FROM_LEFT) -> "CavityStack":
        """Mirrors ``zeta`` and ``zeta_prime`` separated by ``length``."""
        return cls((OpticalElement(zeta, 0.0), OpticalElement(zeta_prime, length)),
                   incidence)

    @classmethod
    def three_mirror(cls, zeta: float, zeta_prime: float, gap_left: float,
                     gap_right: float,
                     incidence: Incidence = Incidence.FROM_LEFT) -> "CavityStack":
        """Outer mirrors ``zeta`` with a middle mirror ``zeta_prime``.

        The middle mirror sits ``gap_left`` after the first mirror and
        ``gap_right`` before the last one.
        """
        return cls((OpticalElement(zeta, 0.0),
                    OpticalElement(zeta_prime, gap_left),
                    OpticalElement(zeta, gap_left + gap_right)), incidence)

    @classmethod
    def four_mirror(cls, zeta: float, zeta_prime: float, gap_left: float,
                    gap_middle: float, gap_right: float,
                    incidence: Incidence = Incidence.FROM_LEFT) -> "CavityStack":
        """Outer mirrors ``zeta`` and two inner mirrors ``zeta_prime``."""
        x1 = gap_left
        x2 = gap_left + gap_middle
        x3 = gap_left + gap_middle + gap_right
        return cls((OpticalElement(zeta, 0.0), OpticalElement(zeta_prime, x1),
                    OpticalElement(zeta_prime, x2), OpticalElement(zeta, x3)),
                   incidence)

    def displaced(self, index: int, dx: float) -> "CavityStack":
        """Move one element along the axis by ``dx`` (can be negative).

        If the move would push the first element below the origin the
        whole stack is translated back; only gaps carry physics.
        """
        pos = list(self.positions)
        pos[index] += dx
        lowest = min(pos)
        if lowest < 0:
            pos = [p - lowest for p in pos]
        elems = tuple(replace(e, position=p) for e, p in zip(self.elements, pos))
        return CavityStack(elems, self.incidence)

    def scaled(self, s: float) -> "CavityStack":
        """Multiply every position by ``s > 0``."""
        if not (s > 0):
            raise InvalidInputError(f"scale factor must be positive, got {s}")
        return CavityStack(tuple(replace(e, position=e.position * s)
                                 for e in self.elements), self.incidence)

    def with_incidence(self, incidence: Incidence) -> "CavityStack":
        return CavityStack(self.elements, incidence)


@dataclass(frozen=True)
class TransferMatrix:
    """Complex 2x2 matrix relating (backward, forward) wave amplitudes."""

    m11: complex
    m12: complex
    m21: complex
    m22: complex

    @property
    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21

    def unimodularity_defect(self) -> float:
        """|det - 1| relative to the size of the products forming it."""
        scale = abs(self.m11 * self.m22) + abs(self.m12 * self.m21) + 1.0
        return abs(self.det - 1.0) / scale

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        a, b, c, d = self.m11, self.m12, self.m21, self.m22
        e, f, g, h = other.m11, other.m12, other.m21, other.m22
        return TransferMatrix(a * e + b * g, a * f + b * h,
                              c * e + d * g, c * f + d * h)

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=complex)

    @staticmethod
    def identity() -> "TransferMatrix":
        return TransferMatrix(1.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class FieldSegment:
    """Plane-wave amplitudes in one region between (or outside) mirrors.

    ``gap_index`` is -1 for the semi-infinite region left of the stack,
    ``0 .. n_gaps-1`` for the interior gaps (gap ``j`` lies between
    elements ``j`` and ``j+1``) and ``n_gaps`` for the region right of
    the stack.  Amplitudes are referenced to the left boundary of the
    region (to the first mirror for the left exterior).
    """

    gap_index: int
    c_plus: complex
    c_minus: complex
    mean_intensity: float


def mirror_matrix(zeta: float) -> TransferMatrix:
    """Matrix of a thin lossless mirror, [[1+iz, iz], [-iz, 1-iz]].

    ``zeta = 0`` is the identity (transparent element); the determinant
    is exactly 1 for any real ``zeta``.
    """
    if not math.isfinite(zeta):
        raise InvalidInputError(f"zeta must be finite, got {zeta!r}")
    return TransferMatrix(1 + 1j * zeta, 1j * zeta, -1j * zeta, 1 - 1j * zeta)


def propagation_matrix(theta: float) -> TransferMatrix:
    """Free-space phase accumulation diag(e^{i theta}, e^{-i theta})."""
    if not math.isfinite(theta):
        raise InvalidInputError(f"theta must be finite, got {theta!r}")
    return TransferMatrix(cmath.exp(1j * theta), 0.0, 0.0, cmath.exp(-1j * theta))


def _validate_k(k: float) -> None:
    if not (isinstance(k, (int, float)) and math.isfinite(k) and k > 0):
        raise InvalidInputError(f"wavenumber k must be finite and > 0, got {k!r}")


def _mirror_entries(zeta: float) -> tuple[complex, complex, complex, complex]:
    return (1 + 1j * zeta, 1j * zeta, -1j * zeta, 1 - 1j * zeta)


def _stack_entries(stack: CavityStack, k: float):
    """Entries of the left-to-right product at wavenumber ``k``."""
    elems = stack.elements
    a, b, c, d = _mirror_entries(elems[0].zeta)
    prev = elems[0].position
    for e in elems[1:]:
        theta = k * (e.position - prev)
        ep = cmath.exp(1j * theta)
        em = cmath.exp(-1j * theta)
        a, b, c, d = a * ep, b * em, c * ep, d * em
        p, q, r, s = _mirror_entries(e.zeta)
        a, b = a * p + b * r, a * q + b * s
        c, d = c * p + d * r, c * q + d * s
        prev = e.position
    return a, b, c, d


def _stack_entries_derivatives(stack: CavityStack, k: float):
    """Product plus its first and second derivatives with respect to k.

    The element matrices do not depend on k, so the product rule only
    picks up terms from the propagation factors, whose derivatives are
    again diagonal.  Everything is exact up to floating-point rounding.
    """
    elems = stack.elements
    m = list(_mirror_entries(elems[0].zeta))
    d1 = [0j, 0j, 0j, 0j]
    d2 = [0j, 0j, 0j, 0j]
    prev = elems[0].position
    for e in elems[1:]:
        g = e.position - prev
        theta = k * g
        ep = cmath.exp(1j * theta)
        em = cmath.exp(-1j * theta)
        # columns scale by (ep, em); d/dk adds a factor (+ig, -ig)
        pe, pm = 1j * g * ep, -1j * g * em
        se, sm = -(g * g) * ep, -(g * g) * em
        d2 = [d2[0] * ep + 2 * d1[0] * pe + m[0] * se,
              d2[1] * em + 2 * d1[1] * pm + m[1] * sm,
              d2[2] * ep + 2 * d1[2] * pe + m[2] * se,
              d2[3] * em + 2 * d1[3] * pm + m[3] * sm]
        d1 = [d1[0] * ep + m[0] * pe, d1[1] * em + m[1] * pm,
              d1[2] * ep + m[2] * pe, d1[3] * em + m[3] * pm]
        m = [m[0] * ep, m[1] * em, m[2] * ep, m[3] * em]
        p, q, r, s = _mirror_entries(e.zeta)

        def times_mirror(t):
            return [t[0] * p + t[1] * r, t[0] * q + t[1] * s,
                    t[2] * p + t[3] * r, t[2] * q + t[3] * s]

        m, d1, d2 = times_mirror(m), times_mirror(d1), times_mirror(d2)
        prev = e.position
    return tuple(m), tuple(d1), tuple(d2)


def _stack_entries_array(stack: CavityStack, k: np.ndarray):
    """Vectorized product entries for an array of wavenumbers."""
    k = np.asarray(k, dtype=float)
    elems = stack.elements
    p, q, r, s = _mirror_entries(elems[0].zeta)
    a = np.full(k.shape, p, dtype=complex)
    b = np.full(k.shape, q, dtype=complex)
    c = np.full(k.shape, r, dtype=complex)
    d = np.full(k.shape, s, dtype=complex)
    prev = elems[0].position
    for e in elems[1:]:
        ph = np.exp(1j * k * (e.position - prev))
        phc = np.conjugate(ph)
        a, b, c, d = a * ph, b * phc, c * ph, d * phc
        p, q, r, s = _mirror_entries(e.zeta)
        a, b = a * p + b * r, a * q + b * s
        c, d = c * p + d * r, c * q + d * s
        prev = e.position
    return a, b, c, d


def compose(stack: CavityStack, k: float) -> TransferMatrix:
    """Ordered product of all element and gap matrices at wavenumber ``k``."""
    _validate_k(k)
    return TransferMatrix(*_stack_entries(stack, float(k)))


def compose_derivatives(stack: CavityStack, k: float):
    """Return (M, dM/dk, d2M/dk2) of the composed matrix."""
    _validate_k(k)
    m, d1, d2 = _stack_entries_derivatives(stack, float(k))
    return TransferMatrix(*m), TransferMatrix(*d1), TransferMatrix(*d2)


def denominator(stack: CavityStack, k: float) -> float:
    """D(k) = |m22|**2 of the composed matrix; transmission is 1/D."""
    _validate_k(k)
    m22 = _stack_entries(stack, float(k))[3]
    return abs(m22) ** 2


def denominator_derivatives(stack: CavityStack, k: float) -> tuple[float, float, float]:
    """D(k) together with its exact first and second k-derivatives."""
    _validate_k(k)
    m, d1, d2 = _stack_entries_derivatives(stack, float(k))
    w, w1, w2 = m[3], d1[3], d2[3]
    d = abs(w) ** 2
    dp = 2.0 * (w.conjugate() * w1).real
    dpp = 2.0 * (abs(w1) ** 2 + (w.conjugate() * w2).real)
    return d, dp, dpp


def transmission(stack: CavityStack, k: float) -> float:
    """Power transmission T = 1/|m22|**2; equals 1 only on resonance."""
    return 1.0 / denominator(stack, k)


def reflection(stack: CavityStack, k: float) -> float:
    """Power reflection R = |m21/m22|**2 (lossless complement of T)."""
    _validate_k(k)
    _, _, m21, m22 = _stack_entries(stack, float(k))
    return abs(m21 / m22) ** 2


def denominator_array(stack: CavityStack, k: np.ndarray) -> np.ndarray:
    _, _, _, m22 = _stack_entries_array(stack, k)
    return np.abs(m22) ** 2


def transmission_array(stack: CavityStack, k: np.ndarray) -> np.ndarray:
    return 1.0 / denominator_array(stack, k)


def field_segments(stack: CavityStack, k: float) -> list[FieldSegment]:
    """Reconstruct the field in every gap and both exterior regions.

    The incident wave (side given by ``stack.incidence``) has unit
    amplitude.  Each segment stores forward/backward amplitudes and the
    spatially averaged intensity |c+|**2 + |c-|**2.
    """
    _validate_k(k)
    k = float(k)
    elems = stack.elements
    n = len(elems)
    _, _, m21, m22 = _stack_entries(stack, k)
    if stack.incidence is Incidence.FROM_LEFT:
        v = (0j, 1.0 / m22)                # transmitted wave only, far side
    else:
        v = (1.0 + 0j, -m21 / m22)         # unit wave incoming from the right

    def segment(idx, vec):
        cm, cp = vec
        return FieldSegment(gap_index=idx, c_plus=cp, c_minus=cm,
                            mean_intensity=abs(cp) ** 2 + abs(cm) ** 2)

    out = [segment(n - 1, v)]
    for i in range(n - 1, 0, -1):
        p, q, r, s = _mirror_entries(elems[i].zeta)
        v = (p * v[0] + q * v[1], r * v[0] + s * v[1])
        theta = k * (elems[i].position - elems[i - 1].position)
        v = (v[0] * cmath.exp(1j * theta), v[1] * cmath.exp(-1j * theta))
        out.append(segment(i - 1, v))
    p, q, r, s = _mirror_entries(elems[0].zeta)
    v = (p * v[0] + q * v[1], r * v[0] + s * v[1])
    out.append(segment(-1, v))
    out.reverse()
    return out


def gap_intensities(stack: CavityStack, k: float) -> np.ndarray:
    """Mean intensity of each interior gap, in stack order."""
    segs = field_segments(stack, k)
    return np.array([s.mean_intensity for s in segs[1:-1]])
