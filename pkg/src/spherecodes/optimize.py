"""Search algorithms: improvement-only annealing and tangential descent.

The annealer jostles the whole configuration, keeps a candidate only if
the total energy drops, and shrinks the jiggle scale geometrically
whenever a round improved.  Descent moves every point along the
tangential component of its force with a step of alpha = 0.5/n, halving
alpha (down to 0.1/n) whenever a step would raise the energy.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CoincidentPoints, NoProgress, SphereCodesError, StagnationLimit, ZeroVector
from .numerics import BigReal, Rng
from .geometry import (
    Point3,
    PointSet,
    default_signature_tol,
    gram_matrix,
    gram_signature,
    normalize,
    random_point,
)
from .potentials import EnergyValue, Potential, energy, forces, residual, tangential_component


@dataclass(frozen=True)
class AnnealConfig:
    final_precision: object  # BigReal, or anything BigReal() accepts
    passes_per_round: int = 100000
    scale_init: object = "0.1"
    scale_ratio: object = "0.8"
    max_rounds: int | None = None  # default 10 * working digits

    def __post_init__(self):
        if self.passes_per_round < 1:
            raise ValueError("passes_per_round must be at least 1")


@dataclass(frozen=True)
class DescentConfig:
    tolerance: object  # residual target
    alpha_numerator: object = "0.5"  # step is alpha_numerator / n
    max_iters: int = 100000


@dataclass(frozen=True, eq=False)
class RunReport:
    final_points: PointSet
    final_energy: EnergyValue
    iterations: int
    residual: BigReal
    history: tuple  # of (round_or_iteration, BigReal energy)
    termination: str  # "converged" or "stagnated"

    def __repr__(self):
        return (f"RunReport(E={self.final_energy.value.to_float():.12g}, "
                f"iterations={self.iterations}, residual={self.residual.to_float():.3g}, "
                f"{self.termination})")


def _as_big(value, digits: int) -> BigReal:
    return BigReal(value, digits)


def jiggle(P: PointSet, scale, rng: Rng) -> PointSet:
    """Perturb every coordinate of every point by scale * uniform(-1, 1)
    and push the results back onto the sphere.  A perturbation that
    lands a point at the origin is redrawn."""
    p = P.precision
    scale = _as_big(scale, p)
    if not scale > 0:
        raise ValueError("jiggle scale must be positive")
    out = []
    for pt in P.points:
        while True:
            moved = Point3(pt.x + scale * rng.next_uniform(p),
                           pt.y + scale * rng.next_uniform(p),
                           pt.z + scale * rng.next_uniform(p))
            try:
                out.append(normalize(moved))
                break
            except ZeroVector:
                continue
    return PointSet(out)


def percolating_anneal(P0: PointSet, pot: Potential, cfg: AnnealConfig, rng: Rng) -> RunReport:
    """Improvement-only annealing.

    Terminates successfully once an improving round's total energy drop
    falls below cfg.final_precision; raises StagnationLimit (carrying
    the partial report) after max_rounds consecutive rounds without any
    improvement.
    """
    w = P0.precision
    final_precision = _as_big(cfg.final_precision, w)
    if not final_precision > 0:
        raise ValueError("final_precision must be positive")
    scale = _as_big(cfg.scale_init, w)
    ratio = _as_big(cfg.scale_ratio, w)
    if not (ratio > 0 and ratio < 1):
        raise ValueError("scale_ratio must lie in (0, 1)")
    max_rounds = cfg.max_rounds if cfg.max_rounds is not None else 10 * w

    current = P0
    e_current = energy(P0, pot).value
    history = [(0, e_current)]
    passes = 0
    rounds = 0
    idle_rounds = 0

    def report(termination):
        return RunReport(final_points=current,
                         final_energy=energy(current, pot),
                         iterations=passes,
                         residual=residual(current, pot),
                         history=tuple(history),
                         termination=termination)

    while True:
        rounds += 1
        round_drop = BigReal.zero(w)
        for _ in range(cfg.passes_per_round):
            passes += 1
            candidate = jiggle(current, scale, rng)
            try:
                e_candidate = energy(candidate, pot).value
            except CoincidentPoints:
                continue
            if e_candidate < e_current:
                round_drop = round_drop + (e_current - e_candidate)
                current = candidate
                e_current = e_candidate
        history.append((rounds, e_current))
        if round_drop > 0:
            idle_rounds = 0
            scale = scale * ratio
            if round_drop < final_precision:
                return report("converged")
        else:
            idle_rounds += 1
            if idle_rounds >= max_rounds:
                raise StagnationLimit(
                    f"no improvement in {idle_rounds} consecutive rounds",
                    report=report("stagnated"))


def descent_step(P: PointSet, pot: Potential, alpha) -> PointSet:
    """One batch step: move every point along its tangential force
    scaled by alpha, computed from the current set, then renormalize."""
    p = P.precision
    alpha = _as_big(alpha, p)
    if alpha.is_zero():
        return P
    moved = []
    for pt, F in zip(P.points, forces(P, pot)):
        T = tangential_component(pt, F)
        moved.append(normalize(pt + T.scaled(alpha)))
    return PointSet(moved)


def descent(P0: PointSet, pot: Potential, cfg: DescentConfig) -> RunReport:
    """Tangential gradient descent with alpha = alpha_numerator / n.

    Runs until the tangential residual drops below cfg.tolerance.  A
    step that raises the energy beyond rounding noise is rejected and
    alpha is halved, with a floor of 0.1/n; a genuine increase at the
    floor raises NoProgress, and exhausting max_iters while still above
    tolerance raises StagnationLimit.
    """
    w = P0.precision
    n = P0.n
    tolerance = _as_big(cfg.tolerance, w)
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    alpha = _as_big(cfg.alpha_numerator, w) / n
    if not alpha > 0:
        raise ValueError("alpha_numerator must be positive")
    alpha_floor = BigReal("0.1", w) / n
    if alpha < alpha_floor:
        alpha_floor = alpha

    current = P0
    e_current = energy(current, pot).value
    # beneath this, an energy "increase" is indistinguishable from
    # rounding noise and must not trip the step-size ladder
    fuzz = BigReal.exp10(4 - w, w) * (abs(e_current) + 1)
    history = [(0, e_current)]
    iterations = 0

    def report(r, termination):
        return RunReport(final_points=current,
                         final_energy=energy(current, pot),
                         iterations=iterations,
                         residual=r,
                         history=tuple(history),
                         termination=termination)

    while True:
        force_list = forces(current, pot)
        tangential = [tangential_component(pt, F)
                      for pt, F in zip(current.points, force_list)]
        r = max(t.norm() for t in tangential) if n > 1 else BigReal.zero(w)
        if r < tolerance:
            return report(r, "converged")
        if iterations >= cfg.max_iters:
            raise StagnationLimit(
                f"residual {r.to_float():.3g} still above tolerance after "
                f"{iterations} iterations", report=report(r, "stagnated"))
        iterations += 1
        candidate = PointSet(normalize(pt + t.scaled(alpha))
                             for pt, t in zip(current.points, tangential))
        e_candidate = energy(candidate, pot).value
        if e_candidate - e_current > fuzz:
            if not alpha > alpha_floor:
                raise NoProgress(
                    f"energy rises by {(e_candidate - e_current).to_float():.3g} "
                    f"even at the minimum step size")
            halved = alpha / 2
            alpha = halved if halved > alpha_floor else alpha_floor
            continue
        current = candidate
        e_current = e_candidate
        history.append((iterations, e_current))


@dataclass(frozen=True, eq=False)
class MultiStartResult:
    best: RunReport
    signatures: list  # GramSignature per successful restart
    energies: list  # BigReal per successful restart


def multi_start(n: int, pot: Potential, restarts: int, cfg: DescentConfig,
                base_seed: int, digits: int = 40) -> MultiStartResult:
    """Independent descent runs from random starts on streams
    base_seed/0 .. base_seed/(restarts-1); returns the lowest-energy
    report (ties broken by restart index) plus the Gram signature and
    energy of every successful run.  Raises only if every run fails."""
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    best = None
    signatures = []
    energies = []
    first_error = None
    for k in range(restarts):
        rng = Rng(base_seed, stream=k)
        start = PointSet(random_point(rng, digits) for _ in range(n))
        try:
            run = descent(start, pot, cfg)
        except SphereCodesError as exc:
            if first_error is None:
                first_error = exc
            continue
        tol = default_signature_tol(digits)
        signatures.append(gram_signature(gram_matrix(run.final_points), tol))
        energies.append(run.final_energy.value)
        if best is None or run.final_energy.value < best.final_energy.value:
            best = run
    if best is None:
        raise first_error
    return MultiStartResult(best=best, signatures=signatures, energies=energies)
