"""Three-way strategy comparison with structured findings.

Runs the same model under all three dynamics on one grid and inspects the
results for the failure modes that distinguish them:

- means escaping the observable's spectral range (the unnormalized
  strategy does this whenever the state norm drifts),
- frozen dynamics, i.e. every observable constant although the
  Hamiltonian visibly moves the initial state (the naive Heisenberg
  strategy's signature failure),
- means that stop being real, which the naive Heisenberg conjugation
  produces on non-nilpotent generators; such a strategy is reported as
  failed rather than aborting the comparison,
- mutual agreement, which all three must exhibit when the Hamiltonian is
  self-adjoint.

The text rendering is line-oriented with stable ``key=value`` fields so
downstream scripts can grep it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evolution import (
    EvolutionRequest,
    Strategy,
    TimeSeries,
    default_observables,
    run,
)
from .hamiltonian import HamiltonianSpec, compile_hamiltonian, is_self_adjoint
from .linalg import norm

__all__ = ["StrategyFindings", "ComparisonReport", "compare_strategies", "render_report"]

#: Tolerance on spectral-range excursions and on "constant" time series.
FINDING_TOL = 1e-10

#: Strategies must agree within this when the Hamiltonian is self-adjoint.
AGREEMENT_TOL = 1e-10


@dataclass(frozen=True)
class StrategyFindings:
    """Diagnostics for one strategy's run.

    ``series`` is ``None`` when the strategy could not produce real means
    on this model; ``error`` then carries the reason.
    """

    strategy: Strategy
    series: TimeSeries | None
    spectral_excess: dict[str, float]
    frozen: bool
    error: str | None = None

    @property
    def clean(self) -> bool:
        over = max(self.spectral_excess.values(), default=0.0)
        return self.error is None and over <= FINDING_TOL and not self.frozen


@dataclass(frozen=True)
class ComparisonReport:
    """All three strategies on one grid, plus divergence diagnostics."""

    findings: list[StrategyFindings]
    self_adjoint: bool
    initial_response: float  # |H psi0|
    max_pairwise_deviation: float
    times: np.ndarray

    def series(self, strategy: Strategy) -> TimeSeries | None:
        for f in self.findings:
            if f.strategy is strategy:
                return f.series
        raise KeyError(strategy)


def _spectral_excess(values: np.ndarray, lo: float, hi: float) -> float:
    over = float(np.max(values - hi, initial=0.0))
    under = float(np.max(lo - values, initial=0.0))
    return max(over, under, 0.0)


def compare_strategies(
    spec: HamiltonianSpec,
    initial,
    times: np.ndarray | None = None,
    observables=None,
) -> ComparisonReport:
    """Run every strategy from the same initial state and collect findings."""
    if observables is None:
        observables = default_observables(spec)
    h = compile_hamiltonian(spec)
    ranges = {}
    for label, x in observables:
        eigenvalues = np.linalg.eigvalsh(x)
        ranges[label] = (float(eigenvalues[0]), float(eigenvalues[-1]))

    probe = EvolutionRequest(hamiltonian=spec, initial=initial)
    initial_response = norm(h @ probe.initial_state())
    grid = probe.grid() if times is None else np.asarray(times, dtype=float)

    findings = []
    for strategy in Strategy:
        request = EvolutionRequest(
            hamiltonian=spec,
            initial=initial,
            strategy=strategy,
            times=grid,
            observables=observables,
        )
        try:
            series = run(request)
        except ArithmeticError as exc:
            findings.append(
                StrategyFindings(
                    strategy=strategy,
                    series=None,
                    spectral_excess={},
                    frozen=False,
                    error=str(exc),
                )
            )
            continue
        excess = {
            label: _spectral_excess(series.values[label], *ranges[label])
            for label, _ in observables
        }
        frozen = initial_response > 1e-12 and all(
            np.max(np.abs(col - col[0])) <= FINDING_TOL
            for col in series.values.values()
        )
        findings.append(
            StrategyFindings(
                strategy=strategy,
                series=series,
                spectral_excess=excess,
                frozen=frozen,
            )
        )

    deviation = 0.0
    completed = [f for f in findings if f.series is not None]
    for i, a in enumerate(completed):
        for b in completed[i + 1 :]:
            for label in a.series.values:
                gap = float(
                    np.max(np.abs(a.series.values[label] - b.series.values[label]))
                )
                deviation = max(deviation, gap)

    return ComparisonReport(
        findings=findings,
        self_adjoint=is_self_adjoint(h),
        initial_response=initial_response,
        max_pairwise_deviation=deviation,
        times=grid,
    )


def render_report(report: ComparisonReport) -> str:
    """Plain-text report: one ``key=value; ...`` line per fact."""
    lines = []
    grid = report.times
    lines.append(f"grid; points={grid.size}; t_max={grid[-1]:.6g}")
    lines.append(
        "hamiltonian; self_adjoint="
        + ("true" if report.self_adjoint else "false")
        + f"; initial_response_norm={report.initial_response:.6e}"
    )
    for f in report.findings:
        name = f.strategy.value
        flagged = False
        if f.error is not None:
            lines.append(f"strategy={name}; finding=evaluation_failed; detail={f.error}")
            flagged = True
        for label, excess in f.spectral_excess.items():
            if excess > FINDING_TOL:
                lines.append(
                    f"strategy={name}; finding=spectral_bound_violation; "
                    f"observable={label}; max_excess={excess:.6e}"
                )
                flagged = True
        if f.frozen:
            lines.append(f"strategy={name}; finding=frozen_dynamics")
            flagged = True
        if not flagged:
            lines.append(f"strategy={name}; finding=clean")
    lines.append(
        f"diagnostic=max_pairwise_deviation; value={report.max_pairwise_deviation:.6e}"
    )
    if report.self_adjoint:
        agree = report.max_pairwise_deviation <= AGREEMENT_TOL
        lines.append(
            "finding=strategy_agreement; "
            + f"max_pairwise_deviation={report.max_pairwise_deviation:.6e}; "
            + ("ok=true" if agree else "ok=false")
        )
    return "\n".join(lines) + "\n"
