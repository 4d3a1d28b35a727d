from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class NormEstimate:
    """A certified lower bound for a norm.

    ``witness`` holds feasible points (each in its closed unit ball) at
    which the objective equals ``value``, so ``value`` never exceeds the
    true supremum.
    """

    value: float
    witness: list[np.ndarray]
    method: str
    restarts_used: int = 0
    iterations: int = 0
    degenerate: bool = False
    history: list[float] | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "value": float(self.value),
            "witness": [_vector_json(w) for w in self.witness],
            "restarts_used": int(self.restarts_used),
            "iterations": int(self.iterations),
            "degenerate": bool(self.degenerate),
        }


def _vector_json(v: np.ndarray) -> list:
    v = np.asarray(v)
    if np.iscomplexobj(v):
        return [[float(z.real), float(z.imag)] for z in v]
    return [float(z) for z in v]
