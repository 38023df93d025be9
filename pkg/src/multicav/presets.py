"""Bundled job configurations reproducing the reference datasets.

Each preset fixes a mirror geometry (lengths stored as multiples of pi
and resolved at load) and a wavenumber window centered on a resonance of
the short subcavity, so two runs of the same preset produce identical
files.
"""

from __future__ import annotations

import math

from pydantic import BaseModel

from .errors import InvalidInputError
from .jobs import JobConfig, SweepConfig
from .resonance import CavityFamily, resonant_phases


def _short_cavity_resonance(zeta: float, zeta_prime: float, length: float,
                            mode_index: int) -> float:
    phi0 = resonant_phases(CavityFamily.THREE_MIRROR, zeta, zeta_prime)[1]
    return (phi0 + mode_index * math.pi) / length


def _fig3() -> JobConfig:
    # strongly asymmetric three-mirror cavity, window of one short-cavity
    # free spectral range around the short-cavity resonance
    k_l = _short_cavity_resonance(20.0, 5.0, math.pi, 590)
    return JobConfig(
        stack={"family": "three", "zeta": 20.0, "zeta_prime": 5.0,
               "gap_left": "100pi", "gap_right": "pi"},
        k_min=k_l - 0.5, k_max=k_l + 0.5,
        outputs=["spectrum", "resonances", "fields", "couplings"],
        movable_index=1, emitter={"beta": 1.0, "gamma": 1.0})


def _fig_tunnel() -> JobConfig:
    # same geometry pushed into the tunneling regime: identical high
    # reflectivities and a thousandfold length asymmetry
    k_l = _short_cavity_resonance(10.0, 10.0, math.pi, 590)
    return JobConfig(
        stack={"family": "three", "zeta": 10.0, "zeta_prime": 10.0,
               "gap_left": "1000pi", "gap_right": "pi"},
        k_min=k_l - 0.008, k_max=k_l + 0.008,
        outputs=["spectrum", "resonances"])


def _fig4() -> SweepConfig:
    # common-resonance sweep at fixed total length: coupling and linewidth
    # versus the position of the movable middle mirror
    return SweepConfig(
        zeta=20.0, zeta_prime=[0.5, 2.0, 10.0], total_length="101pi",
        short_gaps=["pi", "2pi", "5pi", "10pi", "20pi", "30pi", "40pi", "50.5pi"],
        target_k=590.0)


def _fig6() -> JobConfig:
    # symmetric four-mirror cavity: two short outer subcavities around a
    # long middle one
    k_l = _short_cavity_resonance(20.0, 5.0, math.pi, 590)
    return JobConfig(
        stack={"family": "four", "zeta": 20.0, "zeta_prime": 5.0,
               "gap_left": "pi", "gap_middle": "100pi", "gap_right": "pi"},
        k_min=k_l - 0.5, k_max=k_l + 0.5,
        outputs=["spectrum", "resonances", "fields", "couplings"],
        movable_index=3, emitter={"beta": 1.0, "gamma": 1.0})


def _fig7() -> JobConfig:
    # modular hybrid: unequal outer subcavities; the window sits on the
    # short-cavity mode where the three-cavity quasi-resonance is sharpest
    k_l = _short_cavity_resonance(20.0, 5.0, math.pi, 604)
    return JobConfig(
        stack={"family": "four", "zeta": 20.0, "zeta_prime": 5.0,
               "gap_left": "9.91pi", "gap_middle": "100pi", "gap_right": "pi"},
        k_min=k_l - 0.08, k_max=k_l + 0.08,
        outputs=["spectrum", "resonances", "fields", "couplings"],
        movable_index=3, emitter={"beta": 1.0, "gamma": 1.0})


_PRESETS = {
    "fig3": _fig3,
    "fig_tunnel": _fig_tunnel,
    "fig4": _fig4,
    "fig6": _fig6,
    "fig7": _fig7,
}


def preset_names() -> list[str]:
    return sorted(_PRESETS)


def preset(name: str) -> BaseModel:
    """Return the job (or sweep) configuration for a named preset."""
    try:
        builder = _PRESETS[name]
    except KeyError:
        raise InvalidInputError(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}"
        ) from None
    return builder()
