"""Parameters of the four-level double-resonance scheme.

Level labels
------------
``g`` and ``m`` are the upper levels, ``l`` and ``n`` the lower ones.  The
strong field 1 drives l-g, strong field 3 drives n-m, probe 2 sits on n-g and
probe 4 on l-m.  Upper levels may decay into the lower ones through the four
partial rates ``gl``, ``gn``, ``ml``, ``mn`` (read "from g to l" etc.).

Sign conventions
----------------
Every detuning is ``field frequency - transition frequency``.  Population
differences are ``lower - upper``::

    dn1 = n_l - n_g    dn2 = n_n - n_g    dn3 = n_n - n_m    dn4 = n_l - n_m

so a positive difference means an absorbing (non-inverted) transition.  All
quantities are dimensionless, in units of a single reference rate.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal, Mapping

import numpy as np

from .errors import ValidationError, Violation

LEVELS = ("g", "n", "m", "l")
BRANCHES = ("gl", "gn", "ml", "mn")
COHERENCES = ("lg", "ng", "nm", "lm", "ln", "gm")

# transition index -> (lower, upper)
TRANSITIONS = {1: ("l", "g"), 2: ("n", "g"), 3: ("n", "m"), 4: ("l", "m")}

Mode = Literal["strict", "lenient"]
Topology = Literal["fig1-double", "cascade"]
TOPOLOGIES = ("fig1-double", "cascade")


def _pair(a: str, b: str) -> str:
    key = a + b
    if key in COHERENCES:
        return key
    if key[::-1] in COHERENCES:
        return key[::-1]
    raise KeyError(f"unknown coherence {key!r}")


@dataclass(frozen=True)
class RelaxationSpec:
    """Decay, branching, coherence halfwidths and incoherent pumps."""

    gamma_total: Mapping[str, float]
    coherence_halfwidth: Mapping[str, float]
    branch: Mapping[str, float] = field(default_factory=dict)
    pump: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        widths = {}
        for key, val in dict(self.coherence_halfwidth).items():
            widths[_pair(key[0], key[1])] = float(val)
        object.__setattr__(self, "coherence_halfwidth", widths)
        object.__setattr__(self, "gamma_total", {k: float(v) for k, v in dict(self.gamma_total).items()})
        object.__setattr__(self, "branch", {k: float(v) for k, v in dict(self.branch).items()})
        object.__setattr__(self, "pump", {k: float(v) for k, v in dict(self.pump).items()})

    @classmethod
    def natural(cls, gamma_total, branch=None, pump=None, dephasing=None):
        """Halfwidths from lifetimes, ``(G_i + G_j)/2``, plus optional pure dephasing."""
        dephasing = dephasing or {}
        widths = {}
        for key in COHERENCES:
            a, b = key
            extra = dephasing.get(key, dephasing.get(key[::-1], 0.0))
            widths[key] = 0.5 * (gamma_total[a] + gamma_total[b]) + extra
        return cls(gamma_total=gamma_total, coherence_halfwidth=widths,
                   branch=branch or {}, pump=pump or {})

    def decay(self, level: str) -> float:
        return self.gamma_total[level]

    def rate(self, key: str) -> float:
        return self.branch.get(key, 0.0)

    def width(self, a: str, b: str | None = None) -> float:
        if b is None:
            a, b = a[0], a[1]
        return self.coherence_halfwidth[_pair(a, b)]

    def source(self, level: str) -> float:
        return self.pump.get(level, 0.0)

    def max_width(self) -> float:
        return max(self.coherence_halfwidth.values())


@dataclass(frozen=True)
class FieldSpec:
    """Detunings, complex Rabi frequencies and signed wavevector projections.

    Entries are indexed 1..4 in the physics but stored 0-based.  Detunings may
    be numpy arrays; every closed-form routine broadcasts over them.
    """

    detuning: tuple = (0.0, 0.0, 0.0, 0.0)
    rabi: tuple = (0.0, 0.0, 0.0, 0.0)
    wavevector: tuple = (0.0, 0.0, 0.0, 0.0)

    def __post_init__(self):
        for name in ("detuning", "rabi", "wavevector"):
            val = tuple(getattr(self, name))
            if len(val) != 4:
                raise ValueError(f"{name} must have four entries")
            object.__setattr__(self, name, val)
        object.__setattr__(self, "rabi", tuple(complex(g) for g in self.rabi))

    def with_detuning(self, index: int, value) -> "FieldSpec":
        """Copy with detuning ``index`` (1-based) replaced."""
        det = list(self.detuning)
        det[index - 1] = value
        return replace(self, detuning=tuple(det))

    def with_rabi(self, index: int, value) -> "FieldSpec":
        rabi = list(self.rabi)
        rabi[index - 1] = value
        return replace(self, rabi=tuple(rabi))


@dataclass(frozen=True)
class Populations:
    """Zero-field populations, balances of pumping against decay."""

    n: Mapping[str, float]

    @property
    def dn(self) -> tuple:
        n = self.n
        return (n["l"] - n["g"], n["n"] - n["g"], n["n"] - n["m"], n["l"] - n["m"])


def violations(relax: RelaxationSpec, fields: FieldSpec | None = None,
               mode: Mode = "lenient") -> list[Violation]:
    """Every invariant the parameter set breaks; empty when valid."""
    out = []
    for lev in LEVELS:
        if lev not in relax.gamma_total:
            out.append(Violation("MissingRate", f"gamma_total[{lev}] not given"))
        elif not relax.gamma_total[lev] > 0:
            out.append(Violation("NonPositiveRate", f"gamma_total[{lev}] = {relax.gamma_total[lev]}"))
    for key in relax.branch:
        if key not in BRANCHES:
            out.append(Violation("UnknownBranch", f"branch {key!r} is not one of {BRANCHES}"))
        elif relax.branch[key] < 0:
            out.append(Violation("NegativeRate", f"branch[{key}] = {relax.branch[key]}"))
    for lev in LEVELS:
        if lev not in relax.pump:
            continue
        if relax.pump[lev] < 0:
            out.append(Violation("NegativeRate", f"pump[{lev}] = {relax.pump[lev]}"))
    for key in relax.pump:
        if key not in LEVELS:
            out.append(Violation("UnknownLevel", f"pump {key!r}"))
    for upper in ("g", "m"):
        total = relax.gamma_total.get(upper)
        out_rate = sum(relax.rate(upper + low) for low in ("l", "n"))
        if total is not None and total > 0 and out_rate > total * (1 + 1e-12):
            out.append(Violation("BranchExceedsTotal",
                                 f"sum of branches from {upper} = {out_rate} > {total}"))
    for key in COHERENCES:
        if key not in relax.coherence_halfwidth:
            out.append(Violation("MissingRate", f"coherence_halfwidth[{key}] not given"))
            continue
        width = relax.coherence_halfwidth[key]
        if not width > 0:
            out.append(Violation("NonPositiveRate", f"coherence_halfwidth[{key}] = {width}"))
            continue
        if mode == "strict":
            a, b = key
            ga, gb = relax.gamma_total.get(a, 0.0), relax.gamma_total.get(b, 0.0)
            floor = 0.5 * (ga + gb)
            if width < floor * (1 - 1e-12):
                out.append(Violation("CoherenceWidthTooSmall",
                                     f"coherence_halfwidth[{key}] = {width} < {floor}"))
    if fields is not None:
        for i, k in enumerate(fields.wavevector, start=1):
            if not np.all(np.isfinite(k)):
                out.append(Violation("NonFinite", f"wavevector[{i}]"))
        for i, d in enumerate(fields.detuning, start=1):
            if not np.all(np.isfinite(d)):
                out.append(Violation("NonFinite", f"detuning[{i}]"))
        for i, g in enumerate(fields.rabi, start=1):
            if not np.isfinite(g):
                out.append(Violation("NonFinite", f"rabi[{i}]"))
    return out


def validate(relax: RelaxationSpec, fields: FieldSpec | None = None,
             mode: Mode = "lenient"):
    """Return ``(relax, fields)`` untouched, or raise :class:`ValidationError`."""
    found = violations(relax, fields, mode)
    if found:
        raise ValidationError(found)
    return relax, fields


def unsaturated_populations(relax: RelaxationSpec) -> Populations:
    # upper levels are fed only by their pumps; lower ones also by cascading decay
    n_m = relax.source("m") / relax.decay("m")
    n_g = relax.source("g") / relax.decay("g")
    n_n = (relax.source("n") + relax.rate("gn") * n_g + relax.rate("mn") * n_m) / relax.decay("n")
    n_l = (relax.source("l") + relax.rate("gl") * n_g + relax.rate("ml") * n_m) / relax.decay("l")
    return Populations({"g": n_g, "n": n_n, "m": n_m, "l": n_l})
