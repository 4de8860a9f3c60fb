"""Enhancement checker and helpers built on the module and Hochschild layers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra import Algebra, AlgebraMorphism, check_morphism, is_selfinjective
from .catalog import CATALOG, build_named_example
from .hochschild import CohomologyClass, HochschildCochain, class_to_syzygy_map
from .modules import (
    IsoSearchConfig,
    ModuleMap,
    Resolution,
    RightModule,
    Verdict,
    direct_sum,
    find_invertible_structure,
    find_isomorphism,
    is_projective,
    minimal_resolution,
    regular_bimodule,
    strip_projective_summands,
    tensor_over_algebra,
    twisted_bimodule,
)

__all__ = [
    "EnhancementReport",
    "check_enhancement",
    "find_suspension",
    "verify_suspension_candidate",
    "evaluate_class_on_module",
    "build_named_example",
    "CATALOG",
]


@dataclass
class EnhancementReport:
    algebra: str
    frobenius: bool
    separable: bool = False
    omega3_dim: Optional[int] = None
    stripped_dim: Optional[int] = None
    invertible: Verdict = Verdict.UNDETERMINED
    sigma: Optional[AlgebraMorphism] = None
    reverified: Optional[bool] = None
    notes: list = field(default_factory=list)

    @property
    def verdict(self) -> Verdict:
        return self.invertible

    @property
    def decided(self) -> bool:
        return self.invertible is not Verdict.UNDETERMINED

    @property
    def status(self) -> str:
        return "decided" if self.decided else "undetermined-budget"

    def records(self) -> dict:
        """Flat key/value view, used by the machine output of the CLI."""
        sig = self.sigma.describe() if self.sigma is not None else None
        out = {
            "algebra": self.algebra,
            "frobenius": str(self.frobenius).lower(),
            "separable": str(self.separable).lower(),
            "omega3_dim": "" if self.omega3_dim is None else self.omega3_dim,
            "stripped_dim": "" if self.stripped_dim is None else self.stripped_dim,
            "enhancement": self.invertible.value,
            "status": self.status,
            "reverified": "" if self.reverified is None else str(self.reverified).lower(),
        }
        if sig is not None:
            for k, v in sig.items():
                out[f"sigma.{k}"] = v
        return out

    def __str__(self):
        lines = [f"algebra: {self.algebra}"]
        lines.append(f"self-injective: {self.frobenius}")
        lines.append(f"separable: {self.separable}")
        if self.omega3_dim is not None:
            lines.append(f"dim Omega^3: {self.omega3_dim} (without projective summands: {self.stripped_dim})")
        lines.append(f"enhancement: {self.invertible.value} ({self.status})")
        if self.sigma is not None:
            desc = ", ".join(f"{k} -> {v}" for k, v in self.sigma.describe().items()) or "identity"
            lines.append(f"suspension sigma: {desc}")
        lines.extend(self.notes)
        return "\n".join(lines)


def _stably_iso_to_twist(omega3, a: Algebra, tau: AlgebraMorphism, config: IsoSearchConfig) -> Verdict:
    s1 = strip_projective_summands(omega3).module
    s2 = strip_projective_summands(twisted_bimodule(a, tau)).module
    verdict, _ = find_isomorphism(s1, s2, config)
    return verdict


def _separable_vertices(lam) -> list:
    """Vertices spanning a block isomorphic to k: their bimodule projective is 1-dimensional."""
    return [v for v in range(lam.algebra.n_vertices) if lam.projective((v, v)).dim == 1]


def _restore_separable_blocks(stripped, lam):
    """Add back the projective summands _tau Lambda_1 has on blocks isomorphic to k.

    tau may be taken to fix those blocks: changing it there only changes
    projective summands, so the stable class is unaffected."""
    extra = [lam.projective((v, v)) for v in _separable_vertices(lam)]
    if not extra:
        return stripped
    if stripped.dim == 0:
        return direct_sum(*extra)
    return direct_sum(stripped, *extra)


def check_enhancement(a: Algebra, config: IsoSearchConfig = IsoSearchConfig()) -> EnhancementReport:
    """Decide whether Omega^3 of the regular bimodule is stably isomorphic to
    an invertible bimodule _tau Lambda_1; the suspension is then tau^-1."""
    report = EnhancementReport(a.name, frobenius=is_selfinjective(a))
    if not report.frobenius:
        report.invertible = Verdict.FALSE
        report.notes.append("not self-injective: the stable category is not triangulated by syzygies")
        return report
    lam = regular_bimodule(a)
    if is_projective(lam):
        report.separable = True
        report.omega3_dim = 0
        report.stripped_dim = 0
        report.invertible = Verdict.TRUE
        report.sigma = AlgebraMorphism.identity(a)
        report.reverified = True
        report.notes.append("separable: every bimodule is projective, any automorphism works")
        return report
    res = minimal_resolution(lam, 2)
    omega3 = res.syzygies[3]
    stripped = strip_projective_summands(omega3)
    report.omega3_dim = omega3.dim
    report.stripped_dim = stripped.module.dim
    tau = find_invertible_structure(_restore_separable_blocks(stripped.module, lam))
    if tau is None:
        report.invertible = Verdict.FALSE
        return report
    # independent re-verification on a perturbed resolution
    rng = np.random.default_rng(config.seed)
    fresh = minimal_resolution(lam, 2, rng=rng).syzygies[3]
    check = _stably_iso_to_twist(fresh, a, tau, config)
    if check is Verdict.FALSE:
        raise ArithmeticError("re-verification contradicts the computed suspension")
    report.reverified = check is Verdict.TRUE
    report.invertible = check
    report.sigma = tau.inverse()
    return report


def find_suspension(a: Algebra, config: IsoSearchConfig = IsoSearchConfig()) -> Optional[AlgebraMorphism]:
    """sigma with Omega^3 stably isomorphic to _{sigma^-1}Lambda_1, or None."""
    report = check_enhancement(a, config)
    return report.sigma if report.invertible is Verdict.TRUE else None


def verify_suspension_candidate(a: Algebra, sigma: AlgebraMorphism, config: IsoSearchConfig = IsoSearchConfig()) -> Verdict:
    """Is Omega^3 stably isomorphic to _{sigma^-1}Lambda_1?"""
    F = a.field
    if sigma.source is not a or sigma.target is not a:
        raise ValueError("candidate must be an endomorphism of the algebra")
    if not check_morphism(sigma) or F.rank(sigma.matrix) != a.dim:
        raise ValueError("candidate is not an automorphism")
    lam = regular_bimodule(a)
    if is_projective(lam):
        return Verdict.TRUE
    omega3 = minimal_resolution(lam, 2).syzygies[3]
    return _stably_iso_to_twist(omega3, a, sigma.inverse(), config)


def evaluate_class_on_module(x, m: RightModule, res: Optional[Resolution] = None) -> ModuleMap:
    """M (x) f : M (x) Omega^n -> M (x) _{sigma^q}Lambda_1 for the syzygy map f of x."""
    c = x.representative if isinstance(x, CohomologyClass) else x
    if not isinstance(c, HochschildCochain):
        raise TypeError("expected a cochain or cohomology class")
    if c.arity <= 0:
        raise ValueError("Hochschild degree 0 is not supported")
    a = c.algebra
    if m.algebra is not a:
        raise ValueError("module over a different algebra")
    if res is None:
        res = minimal_resolution(regular_bimodule(a), c.arity)
    f = class_to_syzygy_map(c, res)
    F = a.field
    src, _, comp_s = tensor_over_algebra(m, f.source, with_projection=True)
    tgt, proj_t, _ = tensor_over_algebra(m, f.target, with_projection=True)
    big = np.kron(F.eye(m.dim), f.matrix)
    mat = F.matmul(proj_t, np.array(big[:, comp_s]))
    return ModuleMap(src, tgt, mat)
