import json
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError
from rich import box
from rich.table import Table

from bellprocess.bohmian import GaussianPacket
from bellprocess.models import (
    DiracSpec,
    DiracSystem,
    FockSpec,
    LatticeSpec,
    QuantumSystem,
    build_dirac,
    build_fock,
    build_lattice_particle,
    build_two_level,
)
from bellprocess.verify import CheckContext, VerificationReport
from cli.models import (
    PARAMS_MODELS,
    DiracParams,
    ExperimentConfig,
    LatticeParams,
    ModelType,
)


class ConfigError(Exception):
    """An experiment file that cannot be used; the message names the line when it can."""


def _line_of(raw: str, key: str) -> Optional[int]:
    match = re.search(rf'"{re.escape(key)}"\s*:', raw)
    if match is None:
        return None
    return raw.count("\n", 0, match.start()) + 1


def _describe_error(raw: str, error: Dict[str, Any]) -> str:
    keys = [str(part) for part in error["loc"] if isinstance(part, str)]
    found = re.match(r"Value error, params\.([A-Za-z_][\w.]*)", error["msg"])
    if found:
        keys.append(found.group(1).split(".")[-1])
    where = ".".join(keys) or "<root>"
    line = None
    for key in reversed(keys):
        line = _line_of(raw, key)
        if line is not None:
            break
    prefix = f"line {line}: " if line is not None else ""
    return f"{prefix}{where}: {error['msg']}"


def load_experiment(path: Union[str, Path]) -> ExperimentConfig:
    """Parse and validate an experiment file, raising ConfigError with line-anchored messages."""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read {path}: {err}") from err
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as err:
        raise ConfigError(f"line {err.lineno}: invalid JSON ({err.msg})") from err
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as err:
        messages = [_describe_error(raw, error) for error in err.errors()]
        raise ConfigError("\n".join(messages)) from err


def parse_overrides(pairs: List[str]) -> Dict[str, Any]:
    """``key=value`` strings to a dict; values are read as JSON when they parse."""
    overrides = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"expected key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        try:
            overrides[key.strip()] = json.loads(value)
        except json.JSONDecodeError:
            overrides[key.strip()] = value
    return overrides


def packet_for(params: Union[LatticeParams, DiracParams], mass: float, hbar: Optional[float]) -> GaussianPacket:
    fields = params.packet.model_dump()
    if hbar is not None:
        fields["hbar"] = hbar
    return GaussianPacket(mass=mass, **fields)


def build_system(
    model: ModelType, params, t0: float = 0.0
) -> Tuple[Union[QuantumSystem, DiracSystem], Optional[GaussianPacket]]:
    """The system an experiment describes, plus its Gaussian packet when it has one."""
    if model is ModelType.TWO_LEVEL:
        return build_two_level(params.omega, params.hbar, t0=t0), None
    if model is ModelType.LATTICE_1D:
        spec = LatticeSpec(
            L=params.L,
            eps=params.eps,
            mass=params.mass,
            potential=params.potential,
            origin=params.origin,
            hbar=params.hbar,
        )
        packet = packet_for(params, spec.mass, params.hbar)
        profile = packet.psi(spec.sites(), 0.0)
        k = spec.spin_dim()
        if k > 1:
            spinful = np.zeros((spec.L, k), dtype=np.complex128)
            spinful[:, 0] = profile
            profile = spinful
        return build_lattice_particle(spec, profile, t0=t0), packet
    if model is ModelType.FOCK:
        spec = FockSpec(
            lattice=LatticeSpec(L=params.L, eps=params.eps, mass=params.mass, hbar=params.hbar),
            n_max=params.n_max,
            sources=params.sources,
            radius=params.radius,
            coupling=params.coupling,
            hopping=params.hopping,
            mass_ph=params.mass_ph,
            initial=params.initial,
        )
        return build_fock(spec, t0=t0), None
    spec = DiracSpec(L=params.L, eps=params.eps, mass=params.mass, c=params.c, origin=params.origin, hbar=params.hbar)
    # only the t = 0 envelope is used; u is read as a wavenumber
    packet = packet_for(params, 1.0, params.hbar)
    x = spec.x0 + spec.eps * np.arange(spec.L)
    profile = packet.psi(x, 0.0)[:, None] * np.asarray(params.spinor, dtype=float)[None, :]
    return build_dirac(spec, profile), None


def default_params(model: ModelType, overrides: Optional[Dict[str, Any]] = None):
    return PARAMS_MODELS[model].model_validate(overrides or {})


def make_context(
    config: ExperimentConfig,
    system: Union[QuantumSystem, DiracSystem],
    packet: Optional[GaussianPacket],
    jobs: Optional[int] = None,
    progress: bool = False,
) -> CheckContext:
    ensemble = config.ensemble
    params = config.model_params
    node = None
    if isinstance(system, QuantumSystem) and system.info.get("nodes"):
        node = system.info["nodes"][0]
    extra: Dict[str, Any] = {}
    if isinstance(params, LatticeParams):
        extra = {
            "eps_list": params.eps_list,
            "continuum_time": params.continuum_time,
            "x_eval": params.x_eval,
            "bohm_M": params.bohm_M,
            "bohm_time": params.bohm_time,
        }
    return CheckContext(
        system=system,
        M=ensemble.M,
        t0=ensemble.t0,
        horizon=ensemble.horizon,
        times=ensemble.times(),
        sampler=config.sampler,
        jobs=jobs,
        progress=progress,
        tv_tolerance=ensemble.tv_tolerance,
        node_config=node["config"] if node else None,
        node_time=node["time"] if node else None,
        node_delta=ensemble.node_delta,
        packet=packet,
        **extra,
    )


def _format_number(value: Optional[float]) -> str:
    if value is None:
        return "-"
    return f"{value:.4g}"


def report_table(report: VerificationReport) -> Table:
    table = Table(
        show_header=True,
        header_style="bold magenta",
        box=box.SIMPLE_HEAD,
        title=f"{report.model} (seed {report.seed})",
    )
    table.add_column("Check", style="cyan")
    table.add_column("Result", justify="center")
    table.add_column("Empirical", justify="right")
    table.add_column("Theoretical", justify="right")
    table.add_column("Tolerance", justify="right")
    table.add_column("M", justify="right")
    for check in report.checks:
        if not check.applicable:
            verdict = "[dim]n/a[/dim]"
        elif check.passed:
            verdict = "[green]pass[/green]"
        else:
            verdict = "[red]FAIL[/red]" + (" (retried)" if check.retried else "")
        table.add_row(
            check.name,
            verdict,
            _format_number(check.empirical),
            _format_number(check.theoretical),
            _format_number(check.tolerance),
            str(check.M) if check.M is not None else "-",
        )
    return table


def card_table(card: Dict[str, Any]) -> Table:
    table = Table(show_header=True, header_style="bold magenta", box=box.SIMPLE_HEAD)
    table.add_column("Property", style="cyan")
    table.add_column("Value")
    for key, value in card.items():
        table.add_row(key, json.dumps(value, default=str) if not isinstance(value, str) else value)
    return table


def convergence_frame(report: VerificationReport) -> Optional[pd.DataFrame]:
    for check in report.checks:
        if check.name == "continuum_limit" and "table" in check.details:
            return pd.DataFrame(check.details["table"])
    return None
