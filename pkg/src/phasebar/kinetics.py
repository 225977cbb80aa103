"""Kinetic-relation containers: ordered (M2, driving force) samples per model/parameter set."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field


@dataclass
class KineticSample:
    m2: float
    f: float
    r_final: float
    eps_left: float
    eps_right: float
    converged: bool


@dataclass
class KineticCurve:
    """One sweep of interface Mach number for a fixed model and parameter choice.

    Failed sweep points are kept (converged=False) so a curve records where
    the solver gave up instead of silently dropping the point.
    """

    model: str
    params_hash: str
    samples: list[KineticSample] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.samples.sort(key=lambda s: s.m2)
        m2s = [s.m2 for s in self.samples]
        if any(b <= a for a, b in zip(m2s, m2s[1:])):
            raise ValueError("M2 samples must be strictly increasing")

    def add(self, sample: KineticSample) -> None:
        self.samples.append(sample)
        self.__post_init__()

    def converged_samples(self) -> list[KineticSample]:
        return [s for s in self.samples if s.converged]

    def f_at(self, m2: float, atol: float = 1e-12) -> float:
        for s in self.samples:
            if abs(s.m2 - m2) <= atol:
                if not s.converged:
                    raise ValueError(f"sample at M2={m2} did not converge")
                return s.f
        raise KeyError(f"no sample at M2={m2}")

    def csv_rows(self) -> list[str]:
        rows = ["model,m2,f,r_final,eps_left,eps_right,params_hash,converged"]
        for s in self.samples:
            rows.append(
                f"{self.model},{s.m2:.12g},{s.f:.12g},{s.r_final:.6g},"
                f"{s.eps_left:.12g},{s.eps_right:.12g},{self.params_hash},"
                f"{int(s.converged)}"
            )
        return rows


def params_hash(params: dict) -> str:
    """Short content hash of a parameter dictionary (order-insensitive)."""
    canon = json.dumps(params, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:12]
