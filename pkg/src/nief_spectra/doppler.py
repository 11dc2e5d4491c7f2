"""Maxwell velocity averaging along a common beam axis.

Each field sees its detuning shifted to ``Omega_i - k_i v``; the response is
then averaged with the weight ``exp(-v^2/u^2) / (sqrt(pi) u)`` by
Gauss-Hermite quadrature.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import NonConvergent
from .model import FieldSpec

DEFAULT_ORDER = 64
MAX_ORDER = 512


@dataclass(frozen=True)
class DopplerConfig:
    u: float
    order: int = DEFAULT_ORDER
    max_order: int = MAX_ORDER
    rtol: float = 1e-9

    def __post_init__(self):
        if self.u < 0:
            raise ValueError("thermal velocity must be nonnegative")
        if self.order < 2 or self.order % 2:
            raise ValueError("quadrature order must be an even integer >= 2")
        if self.max_order < self.order:
            raise ValueError("max_order must be >= order")


@lru_cache(maxsize=None)
def hermite_rule(order: int):
    """Nodes and weights normalized so that the weights sum to one."""
    x, w = special.roots_hermite(order)
    w = w / np.sum(w)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def shifted_fields(fields: FieldSpec, v: float) -> FieldSpec:
    det = tuple(o - k * v for o, k in zip(fields.detuning, fields.wavevector))
    return replace(fields, detuning=det)


def average_at_order(evaluator, u: float, order: int):
    x, w = hermite_rule(order)
    total = 0.0
    for xi, wi in zip(x, w):
        total = total + wi * np.asarray(evaluator(u * xi))
    return total


def velocity_average(evaluator, cfg: DopplerConfig):
    """Maxwell average of ``evaluator(v)``, doubling the order until two
    successive estimates agree to ``cfg.rtol`` relative to the largest
    element (for a scalar this is the plain relative change)."""
    if cfg.u == 0:
        return np.asarray(evaluator(0.0))
    order = cfg.order if cfg.order < cfg.max_order else max(cfg.order // 2, 1)
    prev = average_at_order(evaluator, cfg.u, order)
    while order < cfg.max_order:
        order *= 2
        cur = average_at_order(evaluator, cfg.u, order)
        if np.max(np.abs(cur - prev)) <= cfg.rtol * np.max(np.abs(cur)):
            return cur
        prev = cur
    raise NonConvergent(f"Gauss-Hermite average not converged at order {order}")
