"""Job schemas and runners shared by the HTTP service and the CLI.

A job is a single JSON document: the stack (explicit elements or a named
mirror family), a wavenumber window, and the requested outputs.  Gap
lengths may be given as plain numbers or as strings like ``"100pi"`` so
configurations stay exact multiples of pi.  Runners return plain dicts;
the writers emit CSV for tabular data and JSON for structured reports,
always with the resolved config and tool version in a header block.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import __version__
from .analytic import two_mirror
from .couplings import EmitterParams, coupling_report, om_coupling
from .errors import InvalidInputError, MulticavError, OverlappingResonanceError
from .resonance import (CavityFamily, OverlapFlag, analytic_overlap_criterion,
                        design_common_resonance, find_resonances,
                        linewidth_halfmax, resonant_phases, scan_arrays)
from .tmm import CavityStack, OpticalElement, field_segments

_PI_PATTERN = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+))?\s*\*?\s*pi\s*$", re.IGNORECASE)


def resolve_length(value: float | int | str) -> float:
    """Turn ``"100pi"``, ``"9.91*pi"`` or a plain number into a float."""
    if isinstance(value, (int, float)):
        return float(value)
    m = _PI_PATTERN.match(value)
    if not m:
        raise ValueError(f"cannot parse length {value!r}; use a number or '<x>pi'")
    factor = float(m.group(1)) if m.group(1) else 1.0
    return factor * math.pi


LengthLike = float | int | str


class ElementSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    zeta: float
    position: LengthLike


class StackSpec(BaseModel):
    """Either an explicit element list or a named mirror family."""

    model_config = ConfigDict(extra="forbid")
    elements: list[ElementSpec] | None = None
    family: Literal["two", "three", "four"] | None = None
    zeta: float | None = None
    zeta_prime: float = 0.0
    length: LengthLike | None = None        # two-mirror
    gap_left: LengthLike | None = None      # three- and four-mirror
    gap_middle: LengthLike | None = None    # four-mirror
    gap_right: LengthLike | None = None

    @model_validator(mode="after")
    def _check_shape(self):
        if (self.elements is None) == (self.family is None):
            raise ValueError("give either 'elements' or 'family', not both")
        if self.family is not None and self.zeta is None:
            raise ValueError("a family stack needs 'zeta'")
        needed = {"two": ("length",), "three": ("gap_left", "gap_right"),
                  "four": ("gap_left", "gap_middle", "gap_right")}
        if self.family is not None:
            missing = [f for f in needed[self.family] if getattr(self, f) is None]
            if missing:
                raise ValueError(f"family '{self.family}' needs {missing}")
        return self

    def to_stack(self) -> CavityStack:
        if self.elements is not None:
            elems = tuple(OpticalElement(e.zeta, resolve_length(e.position))
                          for e in self.elements)
            return CavityStack(elems)
        if self.family == "two":
            return CavityStack.two_mirror(self.zeta, self.zeta_prime,
                                          resolve_length(self.length))
        if self.family == "three":
            return CavityStack.three_mirror(self.zeta, self.zeta_prime,
                                            resolve_length(self.gap_left),
                                            resolve_length(self.gap_right))
        return CavityStack.four_mirror(self.zeta, self.zeta_prime,
                                       resolve_length(self.gap_left),
                                       resolve_length(self.gap_middle),
                                       resolve_length(self.gap_right))


class EmitterSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    beta: float = Field(gt=0)
    gamma: float = Field(gt=0)

    def to_params(self) -> EmitterParams:
        return EmitterParams(beta=self.beta, gamma=self.gamma)


OutputName = Literal["spectrum", "resonances", "fields", "couplings"]


class JobConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")
    stack: StackSpec
    k_min: float = Field(gt=0)
    k_max: float = Field(gt=0)
    samples_per_fsr: int = Field(default=64, ge=16)
    outputs: list[OutputName] = Field(default=["spectrum"], min_length=1)
    emitter: EmitterSpec | None = None
    movable_index: int | None = None
    speed_of_light: float = Field(default=1.0, gt=0)
    format: Literal["csv", "json"] = "csv"
    out: str | None = None

    @model_validator(mode="after")
    def _check(self):
        if self.k_max <= self.k_min:
            raise ValueError("k_max must exceed k_min")
        if "couplings" in self.outputs and (self.movable_index is None
                                            and self.emitter is None):
            raise ValueError("'couplings' needs movable_index and/or emitter")
        return self


class SweepConfig(BaseModel):
    """Common-resonance sweep of a three-mirror cavity at fixed total length.

    For each middle-mirror polarizability and each requested short-gap
    value, the gaps are tuned so both subcavities resonate at the same
    wavenumber (near ``target_k``) while the total length stays fixed;
    the middle mirror is the movable element.
    """

    model_config = ConfigDict(extra="forbid")
    family: Literal["three"] = "three"
    zeta: float
    zeta_prime: list[float] = Field(min_length=1)
    total_length: LengthLike
    short_gaps: list[LengthLike] = Field(min_length=1)
    target_k: float = Field(gt=0)
    speed_of_light: float = Field(default=1.0, gt=0)
    format: Literal["csv", "json"] = "csv"
    out: str | None = None


def _meta(config: BaseModel) -> dict:
    return {"tool": "multicav", "version": __version__,
            "config": config.model_dump(mode="json")}


def _resonance_row(r, halfmax: float | None) -> dict:
    return {
        "k0": r.k0,
        "transmission_peak": r.transmission_peak,
        "kappa_curvature": r.kappa_curvature,
        "kappa_halfmax": halfmax,
        "neighbor_spacing": None if math.isinf(r.neighbor_spacing)
        else r.neighbor_spacing,
        "overlap_flag": r.overlap_flag.value,
    }


def _criterion_dict(stack: CavityStack) -> dict | None:
    crit = analytic_overlap_criterion(stack)
    if crit is None:
        return None
    return {"family": crit.family.value, "lhs": crit.lhs, "rhs": crit.rhs,
            "satisfied": crit.satisfied}


def _normalization(stack: CavityStack, cfg: JobConfig) -> dict | None:
    """Reference values of the isolated rightmost subcavity, when meaningful."""
    zetas = stack.zetas
    if len(zetas) < 3:
        return None
    gap = stack.gaps[-1]
    z_in, z_out = zetas[-2], zetas[-1]
    if z_in * z_out <= 0:
        return None
    c = cfg.speed_of_light
    ref = two_mirror(z_in, z_out, gap, c=c)
    k_center = 0.5 * (cfg.k_min + cfg.k_max)
    mode = round((k_center * gap - ref.theta0) / math.pi)
    k_ref = (ref.theta0 + mode * math.pi) / gap
    notes = {
        "reference": "isolated rightmost subcavity",
        "zetas": [z_in, z_out],
        "length": gap,
        "k_ref": k_ref,
        "kappa_ref": ref.kappa_exact,
        "G_ref": c * k_ref / gap,
        "C_om_ref": (c * k_ref / gap) ** 2 / ref.kappa_exact,
    }
    if cfg.emitter is not None:
        g_ref = cfg.emitter.beta / math.sqrt(gap)
        notes["g_ref"] = g_ref
        notes["C_jc_ref"] = g_ref ** 2 / (ref.kappa_exact * cfg.emitter.gamma)
    return notes


def run_job(cfg: JobConfig) -> dict:
    """Execute every requested output of a job; returns plain dicts."""
    stack = cfg.stack.to_stack()
    c = cfg.speed_of_light
    result: dict = {"meta": _meta(cfg)}
    if "spectrum" in cfg.outputs:
        k, t, d = scan_arrays(stack, cfg.k_min, cfg.k_max, cfg.samples_per_fsr)
        result["spectrum"] = {"k": k.tolist(), "transmission": t.tolist(),
                              "denominator": d.tolist()}
    needs_res = any(o in cfg.outputs for o in ("resonances", "fields", "couplings"))
    if not needs_res:
        return result
    resonances = find_resonances(stack, cfg.k_min, cfg.k_max,
                                 cfg.samples_per_fsr, c=c)
    if "resonances" in cfg.outputs:
        rows = []
        for r in resonances:
            halfmax = None
            if r.overlap_flag is OverlapFlag.WELL_RESOLVED:
                try:
                    halfmax = linewidth_halfmax(stack, r, c=c)
                except OverlappingResonanceError:
                    halfmax = None
            rows.append(_resonance_row(r, halfmax))
        result["resonances"] = {"items": rows,
                                "analytic_criterion": _criterion_dict(stack)}
    if "fields" in cfg.outputs:
        items = []
        for r in resonances:
            segs = field_segments(stack, r.k0)
            items.append({"k0": r.k0, "segments": [
                {"gap_index": s.gap_index,
                 "c_plus": [s.c_plus.real, s.c_plus.imag],
                 "c_minus": [s.c_minus.real, s.c_minus.imag],
                 "mean_intensity": s.mean_intensity} for s in segs]})
        result["fields"] = {"items": items}
    if "couplings" in cfg.outputs:
        emitter = cfg.emitter.to_params() if cfg.emitter else None
        if not resonances:
            raise InvalidInputError(
                "the window contains no resonances to couple to")
        items = []
        for r in resonances:
            if r.overlap_flag is not OverlapFlag.WELL_RESOLVED:
                items.append({"k0": r.k0, "skipped": "overlapping"})
                continue
            rep = coupling_report(stack, r, movable_index=cfg.movable_index,
                                  emitter=emitter, c=c)
            items.append({
                "k0": r.k0,
                "kappa": rep.kappa,
                "G": rep.G,
                "C_om": rep.C_om,
                "g_per_gap": list(rep.g_per_gap) if rep.g_per_gap else None,
                "C_jc_per_gap": list(rep.C_jc_per_gap) if rep.C_jc_per_gap else None,
                "nonlinearity_warning": rep.nonlinearity_warning,
            })
        if not any("skipped" not in it for it in items):
            raise OverlappingResonanceError(
                "no well-resolved resonance in the window; cannot compute couplings")
        result["couplings"] = {"items": items,
                               "normalization": _normalization(stack, cfg)}
    return result


def run_sweep(cfg: SweepConfig) -> dict:
    """Tune common resonances at fixed total length and report couplings.

    Each row carries kappa and G of the designed common resonance plus
    their ratios to the mirror-centered reference of the same family.
    """
    total = resolve_length(cfg.total_length)
    c = cfg.speed_of_light
    rows = []
    for zp in cfg.zeta_prime:
        theta0, phi0 = resonant_phases(CavityFamily.THREE_MIRROR, cfg.zeta, zp)
        index_sum = round((cfg.target_k * total - theta0 - phi0) / math.pi)
        k = (theta0 + phi0 + index_sum * math.pi) / total
        mid_m = round((0.5 * total * k - phi0) / math.pi)
        reference = _sweep_point(cfg, zp, k, index_sum, mid_m, c)
        for gap in cfg.short_gaps:
            m = round((resolve_length(gap) * k - phi0) / math.pi)
            point = _sweep_point(cfg, zp, k, index_sum, m, c)
            rows.append({
                "zeta_prime": zp, "k0": point["k0"],
                "gap_left": point["gap_left"], "gap_right": point["gap_right"],
                "kappa": point["kappa"], "G": point["G"],
                "kappa_ratio_mid": point["kappa"] / reference["kappa"],
                "G_ratio_mid": point["G"] / reference["G"],
            })
    return {"meta": _meta(cfg), "sweep": {"rows": rows}}


def _sweep_point(cfg: SweepConfig, zp: float, k: float, index_sum: int,
                 m: int, c: float) -> dict:
    design = design_common_resonance(CavityFamily.THREE_MIRROR, cfg.zeta, zp,
                                     k, (index_sum - m, m), verify=False)
    stack = design.stack
    fsr = math.pi / stack.total_length
    found = find_resonances(stack, k - 2 * fsr, k + 2 * fsr, c=c)
    if not found:
        raise MulticavError(f"no resonance near k={k} for short gap index {m}")
    res = min(found, key=lambda r: abs(r.k0 - k))
    om = om_coupling(stack, res, 1, c=c)
    return {"k0": res.k0, "gap_left": design.gap_long,
            "gap_right": design.gap_short, "kappa": res.kappa_curvature,
            "G": om.G}


# ---------------------------------------------------------------------------
# output writers

def _header_lines(meta: dict) -> list[str]:
    return [f"# tool: {meta['tool']} {meta['version']}",
            f"# config: {json.dumps(meta['config'], sort_keys=False)}"]


def _csv_table(section: str, payload: dict) -> tuple[list[str], list[list]]:
    if section == "spectrum":
        cols = ["k", "transmission", "denominator"]
        rows = list(zip(payload["k"], payload["transmission"],
                        payload["denominator"]))
        return cols, [list(r) for r in rows]
    if section == "resonances":
        cols = ["k0", "transmission_peak", "kappa_curvature", "kappa_halfmax",
                "neighbor_spacing", "overlap_flag"]
        return cols, [[it[c] for c in cols] for it in payload["items"]]
    if section == "fields":
        cols = ["k0", "gap_index", "c_plus_re", "c_plus_im", "c_minus_re",
                "c_minus_im", "mean_intensity"]
        rows = []
        for it in payload["items"]:
            for s in it["segments"]:
                rows.append([it["k0"], s["gap_index"], s["c_plus"][0],
                             s["c_plus"][1], s["c_minus"][0], s["c_minus"][1],
                             s["mean_intensity"]])
        return cols, rows
    if section == "couplings":
        items = [it for it in payload["items"] if "skipped" not in it]
        n_gaps = max((len(it["g_per_gap"] or []) for it in items), default=0)
        cols = ["k0", "kappa", "G", "C_om"]
        cols += [f"g_gap{j}" for j in range(n_gaps)]
        cols += [f"C_jc_gap{j}" for j in range(n_gaps)]
        rows = []
        for it in items:
            row = [it["k0"], it["kappa"], it["G"], it["C_om"]]
            g = it["g_per_gap"] or [None] * n_gaps
            cj = it["C_jc_per_gap"] or [None] * n_gaps
            rows.append(row + list(g) + list(cj))
        return cols, rows
    if section == "sweep":
        cols = ["zeta_prime", "k0", "gap_left", "gap_right", "kappa", "G",
                "kappa_ratio_mid", "G_ratio_mid"]
        return cols, [[r[c] for c in cols] for r in payload["rows"]]
    raise InvalidInputError(f"no tabular form for {section!r}")


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_csv(meta: dict, section: str, payload: dict) -> str:
    cols, rows = _csv_table(section, payload)
    buf = io.StringIO()
    for line in _header_lines(meta):
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([_fmt_cell(v) for v in row])
    return buf.getvalue()


def render_json(meta: dict, section: str, payload: dict) -> str:
    return json.dumps({"meta": meta, section: payload}, indent=2,
                      sort_keys=False) + "\n"


def write_result(result: dict, out: Path, fmt: str,
                 sections: list[str] | None = None,
                 as_dir: bool = False) -> list[Path]:
    """Write each result section to ``out`` (a file for one section,
    otherwise a directory; ``as_dir`` forces directory mode)."""
    meta = result["meta"]
    sections = sections or [s for s in result if s != "meta"]
    single = len(sections) == 1 and not as_dir
    written = []
    for section in sections:
        payload = result[section]
        text = (render_csv(meta, section, payload) if fmt == "csv"
                else render_json(meta, section, payload))
        if single and (out.suffix or not out.is_dir()):
            path = out
        else:
            out.mkdir(parents=True, exist_ok=True)
            path = out / f"{section}.{fmt}"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        written.append(path)
    return written
