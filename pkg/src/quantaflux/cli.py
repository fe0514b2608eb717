"""Command-line front end.

Three subcommands:

``simulate --config <path> [--out <path>] [--plot <path>]``
    Run one configuration and write a CSV time series
    (``t,n_1,...,n_M,norm``, 12 significant digits per value), optionally
    rendering the occupation curves to an image next to it.

``compare --config <path> [--plot <path>]``
    Run all three strategies on the configured model and print a
    line-oriented findings report to standard output.

``verify [--filter <name>]``
    Re-run every built-in (preset, initial-state) pair that has an exact
    reference solution and report the worst deviation per pair.  Exits 0
    only if every deviation is at most 1e-10.

Configuration files are YAML with three sections::

    model:
      preset: model1          # a preset or scenario name ...
      params: {lambda: 1.0}   # ... with optional parameter overrides
      # or an inline model instead of a preset:
      # modes: [fermion, fermion]
      # terms: [[1.0, ["2+", "1-"]]]
    run:
      initial: "10"           # one digit per mode
      strategy: normalized    # unnormalized | heisenberg | normalized
      t_max: 10.0
      steps: 401
    output:
      csv: out.csv
      figure: out.png         # optional

Unknown keys are rejected by name.  Exit codes: 0 success, 1 reference
deviations found by ``verify``, 2 configuration or computation errors,
3 file I/O errors.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass

import numpy as np
import yaml

from .evolution import EvolutionRequest, Strategy, time_grid, run
from .hamiltonian import HamiltonianSpec, HamiltonianTerm, LadderFactor
from .models import PRESET_NAMES, SCENARIOS, closed_form, closed_form_pairs
from .models import closed_norm_squared, preset, reference_run
from .modes import ModeSystem, fermion, parse_occupations, truncated_boson
from .report import compare_strategies, render_report

__all__ = ["ConfigError", "RunConfig", "parse_config", "main", "entrypoint"]

VERIFY_TOL = 1e-10

_FACTOR_RE = re.compile(r"^(\d+)([+-])$")
_BOSON_RE = re.compile(r"^boson:(\d+)$")

_SECTION_KEYS = {
    "model": {"preset", "modes", "terms", "params"},
    "run": {"initial", "strategy", "t_max", "steps"},
    "output": {"csv", "figure"},
}


class ConfigError(ValueError):
    """A configuration document violates the schema."""


@dataclass(frozen=True)
class RunConfig:
    """A fully validated simulation request plus output destinations."""

    label: str
    hamiltonian: HamiltonianSpec
    initial: tuple[int, ...]
    strategy: Strategy
    t_max: float
    steps: int
    csv: str | None
    figure: str | None
    parameters: dict[str, float]

    def request(self) -> EvolutionRequest:
        return EvolutionRequest(
            hamiltonian=self.hamiltonian,
            initial=self.initial,
            strategy=self.strategy,
            times=time_grid(self.t_max, self.steps),
        )


def _check_keys(section: str, mapping: dict) -> None:
    allowed = _SECTION_KEYS[section]
    for key in mapping:
        if key not in allowed:
            raise ConfigError(f"unknown key {section}.{key}")


def _parse_mode(text, position: int):
    if text == "fermion":
        return fermion()
    if isinstance(text, str):
        match = _BOSON_RE.match(text)
        if match:
            levels = int(match.group(1))
            if levels < 2:
                raise ConfigError(
                    f"model.modes[{position}]: boson needs at least 2 levels"
                )
            return truncated_boson(levels)
    raise ConfigError(
        f"model.modes[{position}] must be 'fermion' or 'boson:<levels>', got {text!r}"
    )


def _parse_coefficient(value, position: int) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError:
            pass
    raise ConfigError(
        f"model.terms[{position}]: coefficient must be a number, got {value!r}"
    )


def _parse_factors(factors, position: int) -> list[LadderFactor]:
    if not isinstance(factors, list) or not factors:
        raise ConfigError(
            f"model.terms[{position}]: factors must be a non-empty list"
        )
    parsed = []
    for f in factors:
        match = _FACTOR_RE.match(f) if isinstance(f, str) else None
        if not match:
            raise ConfigError(
                f"model.terms[{position}]: factor {f!r} must look like '2+' or '1-'"
            )
        parsed.append(LadderFactor(mode=int(match.group(1)), dagger=match.group(2) == "+"))
    return parsed


def _parse_inline_model(model: dict) -> tuple[ModeSystem, HamiltonianSpec]:
    modes = model.get("modes")
    terms = model.get("terms")
    if not isinstance(modes, list) or not modes:
        raise ConfigError("model.modes must be a non-empty list")
    if not isinstance(terms, list) or not terms:
        raise ConfigError("model.terms must be a non-empty list")
    system = ModeSystem([_parse_mode(m, i) for i, m in enumerate(modes)])
    parsed_terms = []
    for i, entry in enumerate(terms):
        if not isinstance(entry, list) or len(entry) != 2:
            raise ConfigError(
                f"model.terms[{i}] must be [coefficient, [factors...]]"
            )
        coefficient = _parse_coefficient(entry[0], i)
        factors = _parse_factors(entry[1], i)
        for factor in factors:
            if not 1 <= factor.mode <= system.size:
                raise ConfigError(
                    f"model.terms[{i}]: mode {factor.mode} out of range 1..{system.size}"
                )
        parsed_terms.append(HamiltonianTerm(coefficient, factors))
    return system, HamiltonianSpec(system, parsed_terms)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a YAML configuration document."""
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"configuration is not valid YAML: {exc}") from exc
    if not isinstance(document, dict):
        raise ConfigError("configuration must be a mapping with a 'model' section")
    for key in document:
        if key not in _SECTION_KEYS:
            raise ConfigError(f"unknown key {key}")

    model = document.get("model")
    if not isinstance(model, dict):
        raise ConfigError("missing or invalid 'model' section")
    run_section = document.get("run") or {}
    output = document.get("output") or {}
    if not isinstance(run_section, dict):
        raise ConfigError("'run' section must be a mapping")
    if not isinstance(output, dict):
        raise ConfigError("'output' section must be a mapping")
    _check_keys("model", model)
    _check_keys("run", run_section)
    _check_keys("output", output)

    preset_name = model.get("preset")
    initial_text = run_section.get("initial")
    params = dict(model.get("params") or {})

    if preset_name is not None and ("modes" in model or "terms" in model):
        raise ConfigError("model.preset and model.modes/model.terms are exclusive")

    if preset_name is not None:
        if preset_name in SCENARIOS:
            scenario = SCENARIOS[preset_name]
            merged = dict(scenario.parameters)
            merged.update(params)
            params = merged
            if initial_text is None:
                initial_text = scenario.initial
            label = preset_name
            preset_name = scenario.preset
        elif preset_name in PRESET_NAMES:
            label = preset_name
        else:
            raise ConfigError(
                f"model.preset {preset_name!r} is neither a preset {PRESET_NAMES} "
                f"nor a scenario {tuple(SCENARIOS)}"
            )
        try:
            built = preset(preset_name, params)
        except ValueError as exc:
            raise ConfigError(f"model.params: {exc}") from exc
        system = built.system
        spec = built.hamiltonian
        parameters = built.parameters
        if initial_text is None:
            initial_text = "".join(str(n) for n in built.default_initial)
    else:
        if "params" in model:
            raise ConfigError("model.params requires model.preset")
        system, spec = _parse_inline_model(model)
        parameters = {}
        label = "inline"
        if initial_text is None:
            raise ConfigError("run.initial is required for inline models")

    if not isinstance(initial_text, str):
        raise ConfigError("run.initial must be an occupation string such as '101'")
    try:
        initial = parse_occupations(initial_text, system)
    except ValueError as exc:
        raise ConfigError(f"run.initial: {exc}") from exc

    strategy_name = run_section.get("strategy", Strategy.NORMALIZED.value)
    try:
        strategy = Strategy(strategy_name)
    except ValueError:
        names = ", ".join(s.value for s in Strategy)
        raise ConfigError(f"run.strategy must be one of {names}, got {strategy_name!r}")

    t_max = run_section.get("t_max", 10.0)
    if not isinstance(t_max, (int, float)) or t_max <= 0:
        raise ConfigError(f"run.t_max must be a positive number, got {t_max!r}")
    steps = run_section.get("steps", 401)
    if not isinstance(steps, int) or steps < 2:
        raise ConfigError(f"run.steps must be an integer >= 2, got {steps!r}")

    csv = output.get("csv")
    figure = output.get("figure")
    for key, value in (("csv", csv), ("figure", figure)):
        if value is not None and not isinstance(value, str):
            raise ConfigError(f"output.{key} must be a file path")

    return RunConfig(
        label=label,
        hamiltonian=spec,
        initial=initial,
        strategy=strategy,
        t_max=float(t_max),
        steps=steps,
        csv=csv,
        figure=figure,
        parameters=parameters,
    )


def _load_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as f:
        return parse_config(f.read())


def _cmd_simulate(args) -> int:
    config = _load_config(args.config)
    csv_path = args.out or config.csv
    if csv_path is None:
        raise ConfigError("no CSV destination: set output.csv or pass --out")
    series = run(config.request())
    with open(csv_path, "w", encoding="utf-8", newline="") as f:
        series.write_csv(f)
    print(f"wrote {csv_path} ({series.times.size} rows)")
    figure_path = args.plot or config.figure
    if figure_path:
        from .plotting import plot_timeseries

        plot_timeseries(
            series,
            figure_path,
            title=f"{config.label} ({config.strategy.value})",
        )
        print(f"wrote {figure_path}")
    return 0


def _cmd_compare(args) -> int:
    config = _load_config(args.config)
    report = compare_strategies(
        config.hamiltonian,
        config.initial,
        times=time_grid(config.t_max, config.steps),
    )
    sys.stdout.write(render_report(report))
    figure_path = args.plot or config.figure
    if figure_path:
        from .plotting import plot_comparison

        plot_comparison(report, figure_path, title=config.label)
        print(f"wrote {figure_path}")
    return 0


def _cmd_verify(args) -> int:
    pairs = [
        (name, init)
        for name, init in closed_form_pairs()
        if args.filter is None or args.filter in f"{name}:{init}"
    ]
    times = time_grid()
    failures = 0
    for name, init in pairs:
        series = reference_run(name, init, times=times)
        occupations = closed_form(name, init, t=times)
        if args.inject_error:
            occupations = -occupations
        norm_squared = closed_norm_squared(name, init, t=times)
        deviation = max(
            float(np.max(np.abs(series.values[f"n_{j + 1}"] - occupations[j])))
            for j in range(occupations.shape[0])
        )
        norm_deviation = float(
            np.max(np.abs(series.norms**2 - norm_squared) / np.maximum(1.0, norm_squared))
        )
        worst = max(deviation, norm_deviation)
        ok = worst <= VERIFY_TOL
        failures += 0 if ok else 1
        print(
            f"pair={name}:{init}; max_deviation={worst:.6e}; "
            f"status={'ok' if ok else 'FAIL'}"
        )
    print(f"pairs={len(pairs)}; failures={failures}")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantaflux",
        description="Occupation-flux dynamics under non-self-adjoint ladder Hamiltonians",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="run one configuration to CSV")
    simulate.add_argument("--config", required=True, help="YAML configuration path")
    simulate.add_argument("--out", help="CSV destination (overrides output.csv)")
    simulate.add_argument("--plot", help="also render the curves to this image path")

    compare = sub.add_parser("compare", help="run all three strategies and report")
    compare.add_argument("--config", required=True, help="YAML configuration path")
    compare.add_argument("--plot", help="render per-strategy panels to this image path")

    verify = sub.add_parser("verify", help="check the engine against reference forms")
    verify.add_argument("--filter", help="only pairs whose 'name:initial' contains this")
    verify.add_argument(
        "--inject-error",
        action="store_true",
        help="negative control: corrupt one reference value (must fail)",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "compare": _cmd_compare,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - boundary: report and set exit code
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())
