"""Closed-manifold model spectra and torsion assembly.

Three families, each with per-degree heat traces and kernel dimensions:

* circle(L, theta, rank): flat circle, optionally twisted by a rank-2
  rotation character (acyclic for theta != 0); degrees 0 and 1 share one
  spectrum.
* torus(n, L): flat n-torus; the degree-k form Laplacian is binom(n, k)
  copies of the scalar one, with harmonic forms of dimension binom(n, k).
* sphere2: the round 2-sphere; the coexact/exact split of 1-forms pins
  the degree spectra to the scalar one (zeta_1 = 2 zeta_0 off kernel,
  zeta_2 = zeta_0, Betti (1, 0, 1)).

Torsion conventions (all logs):

    residue trace   res_k := -2 (zeta_k(0) + b_k)
    residue torsion log T_res(beta) = 1/2 sum_k (-1)^(k+1) beta_k res_k
                                    = sum_k (-1)^k beta_k (zeta_k(0) + b_k)
    analytic torsion log T_zeta(beta) = 1/2 sum_k (-1)^k beta_k zeta_k'(0)

residue quantities reduce to exact coefficient arithmetic; analytic ones
go through the Mellin engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import BadParameter, NotAcyclic, ShapeMismatch
from .zetas import (
    HeatTrace,
    ZetaEval,
    circle_character_heat_trace,
    mellin_zeta,
    scale_heat_trace,
    sphere2_scalar_heat_trace,
    theta_expansion,
    zeta_at_zero,
)


@dataclass(frozen=True)
class ClosedModel:
    """A closed model geometry: per-degree heat traces and Betti numbers."""

    name: str
    dim: int
    rank: int
    heat: tuple[HeatTrace, ...]
    betti: tuple[int, ...]

    def __post_init__(self):
        if len(self.heat) != self.dim + 1 or len(self.betti) != self.dim + 1:
            raise ShapeMismatch("need one heat trace and Betti number per degree")

    def zeta(self, k: int, s, derivative: bool = False) -> ZetaEval:
        return mellin_zeta(self.heat[k], s, derivative=derivative)

    def zeta_at_zero(self, k: int) -> float:
        return zeta_at_zero(self.heat[k])

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))


def build_model(name: str, *, L: float = 2.0 * math.pi, theta: float = 0.0,
                rank: int = 1, n: int = 2) -> ClosedModel:
    """Construct one of the closed models; see the module docstring."""
    if name == "circle":
        if theta != 0.0 and rank != 2:
            raise BadParameter("a nontrivial circle character requires rank 2")
        if rank not in (1, 2):
            raise BadParameter(f"circle rank must be 1 or 2, got {rank}")
        h = circle_character_heat_trace(L, theta, rank)
        b = rank if theta == 0.0 else 0
        return ClosedModel(name=f"circle(L={L:g}, theta={theta:g}, rank={rank})",
                           dim=1, rank=rank, heat=(h, h), betti=(b, b))
    if name == "torus":
        if n < 1:
            raise BadParameter(f"torus dimension must be >= 1, got {n}")
        scalar = theta_expansion("lattice", n=n, L=L)
        heat = tuple(scale_heat_trace(scalar, math.comb(n, k),
                                      label=f"torus deg {k}")
                     for k in range(n + 1))
        betti = tuple(math.comb(n, k) for k in range(n + 1))
        return ClosedModel(name=f"torus(n={n}, L={L:g})", dim=n, rank=1,
                           heat=heat, betti=betti)
    if name == "sphere2":
        scalar = sphere2_scalar_heat_trace()
        h1 = _double_without_kernel(scalar)
        return ClosedModel(name="sphere2", dim=2, rank=1,
                           heat=(scalar, h1, scalar), betti=(1, 0, 1))
    raise BadParameter(f"unknown model {name!r}")


def _double_without_kernel(h: HeatTrace) -> HeatTrace:
    """2 x (trace minus its kernel): the 1-form trace of the 2-sphere."""
    doubled = scale_heat_trace(h, 2)
    return HeatTrace(
        terms=tuple(sorted(
            [(p, c) for p, c in doubled.terms if p != 0.0]
            + [(0.0, doubled.constant_coefficient - 2.0 * h.kernel_dim)],
            key=lambda pc: -pc[0])),
        remainder=doubled.remainder,
        tail=doubled.tail,
        kernel_dim=0,
        lambda_min=doubled.lambda_min,
        t_floor=doubled.t_floor,
        label=f"2x({h.label}) minus kernel",
    )


def residue_log_trace(model: ClosedModel, k: int) -> float:
    """res_k = -2 (zeta_k(0) + b_k), by exact coefficient arithmetic."""
    return -2.0 * (model.zeta_at_zero(k) + model.betti[k])


@dataclass(frozen=True)
class TorsionReport:
    """Per-degree zeta data and assembled torsion combinations."""

    model: str
    beta: tuple[float, ...]
    betti: tuple[int, ...]
    zeta0: tuple[float, ...]
    residue_traces: tuple[float, ...]
    log_torsion_res: float | None = None
    log_torsion_zeta: float | None = None
    zeta_prime0: tuple[float, ...] | None = None
    abs_error_estimate: float = 0.0
    flags: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "model": self.model,
            "beta": list(self.beta),
            "betti": list(self.betti),
            "zeta0": list(self.zeta0),
            "residue_traces": list(self.residue_traces),
            "abs_error_estimate": self.abs_error_estimate,
        }
        if self.log_torsion_res is not None:
            out["log_torsion_res"] = self.log_torsion_res
        if self.log_torsion_zeta is not None:
            out["log_torsion_zeta"] = self.log_torsion_zeta
        if self.zeta_prime0 is not None:
            out["zeta_prime0"] = list(self.zeta_prime0)
        if self.flags:
            out["flags"] = self.flags
        return out


def _check_beta(beta: Sequence[float], dim: int) -> tuple[float, ...]:
    beta = tuple(float(x) for x in beta)
    if len(beta) != dim + 1:
        raise ShapeMismatch(f"beta must have length {dim + 1}, got {len(beta)}")
    return beta


def residue_torsion(model: ClosedModel, beta: Sequence[float]) -> TorsionReport:
    """log T_res(beta) = sum_k (-1)^k beta_k (zeta_k(0) + b_k); exact arithmetic.

    For beta = 1 this is rank * chi; for beta = k on even-dimensional models
    it is (dim/2) * rank * chi; odd-dimensional models give 0 for every beta.
    """
    beta = _check_beta(beta, model.dim)
    zeta0 = tuple(model.zeta_at_zero(k) for k in range(model.dim + 1))
    res = tuple(residue_log_trace(model, k) for k in range(model.dim + 1))
    log_t = 0.5 * sum((-1.0) ** (k + 1) * beta[k] * res[k]
                      for k in range(model.dim + 1))
    return TorsionReport(model=model.name, beta=beta, betti=model.betti,
                         zeta0=zeta0, residue_traces=res, log_torsion_res=log_t)


def analytic_torsion(model: ClosedModel, beta: Sequence[float],
                     require_acyclic: bool = False) -> TorsionReport:
    """log T_zeta(beta) = 1/2 sum_k (-1)^k beta_k zeta_k'(0).

    With require_acyclic=True (the torsion-as-Reidemeister reading of
    beta = k) a nonzero Betti number raises NotAcyclic.  beta = 1 yields 0
    in every dimension.
    """
    beta = _check_beta(beta, model.dim)
    if require_acyclic and any(model.betti):
        raise NotAcyclic(f"model {model.name} has Betti numbers {model.betti}")
    evals = [model.zeta(k, 0.0, derivative=True) for k in range(model.dim + 1)]
    zeta0 = tuple(e.value for e in evals)
    prime = tuple(e.derivative for e in evals)
    res = tuple(residue_log_trace(model, k) for k in range(model.dim + 1))
    log_t = 0.5 * sum((-1.0) ** k * beta[k] * prime[k]
                      for k in range(model.dim + 1))
    err = sum(abs(beta[k]) * evals[k].abs_error_estimate
              for k in range(model.dim + 1))
    return TorsionReport(model=model.name, beta=beta, betti=model.betti,
                         zeta0=zeta0, residue_traces=res,
                         log_torsion_zeta=log_t, zeta_prime0=prime,
                         abs_error_estimate=err)


@dataclass(frozen=True)
class IdentityReport:
    """Max deviations of the zeta identities at the sampled points."""

    model: str
    s_values: tuple[float, ...]
    duality: float
    alternating_sum: float
    weighted_sum: float | None
    half_dim_relation: float | None
    tol: float

    @property
    def ok(self) -> bool:
        checks = [self.duality, self.alternating_sum]
        if self.weighted_sum is not None:
            checks.append(self.weighted_sum)
        if self.half_dim_relation is not None:
            checks.append(self.half_dim_relation)
        return all(c <= self.tol for c in checks)

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "s_values": list(self.s_values),
            "duality": self.duality,
            "alternating_sum": self.alternating_sum,
            "weighted_sum": self.weighted_sum,
            "half_dim_relation": self.half_dim_relation,
            "tol": self.tol,
            "ok": self.ok,
        }


def identity_suite(model: ClosedModel, s_values: Sequence[float] = (0.0, 0.75, 2.0),
                   tol: float = 1e-8) -> IdentityReport:
    """Check the duality and alternating-sum identities of the degree zetas.

    At every sampled s: zeta_k(s) = zeta_{n-k}(s); for odd n the alternating
    sum vanishes; for even n both the plain and the k-weighted alternating
    sums vanish and (n/2) * sum = weighted sum.
    """
    n = model.dim
    duality = 0.0
    alternating = 0.0
    weighted = 0.0 if n % 2 == 0 else None
    half_relation = 0.0 if n % 2 == 0 else None
    for s in s_values:
        vals = [model.zeta(k, s).value for k in range(n + 1)]
        for k in range(n + 1):
            duality = max(duality, abs(vals[k] - vals[n - k]))
        alt = sum((-1.0) ** k * vals[k] for k in range(n + 1))
        alternating = max(alternating, abs(alt))
        if n % 2 == 0:
            wtd = sum((-1.0) ** k * k * vals[k] for k in range(n + 1))
            weighted = max(weighted, abs(wtd))
            half_relation = max(half_relation, abs(0.5 * n * alt - wtd))
    return IdentityReport(model=model.name, s_values=tuple(s_values),
                          duality=duality, alternating_sum=alternating,
                          weighted_sum=weighted, half_dim_relation=half_relation,
                          tol=tol)


def surface_residue_combination(model: ClosedModel) -> float:
    """(1/2) res_0 - res_1 + (3/2) res_2 on a closed surface.

    On a genus-g surface this evaluates to (4g - 4) * rank; it equals
    -log T_res for beta = (1, 2, 3) under the sign convention above.
    """
    if model.dim != 2:
        raise ShapeMismatch("surface combination needs a two-dimensional model")
    res = [residue_log_trace(model, k) for k in range(3)]
    return 0.5 * res[0] - res[1] + 1.5 * res[2]
