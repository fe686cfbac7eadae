"""Finite-difference chemotaxis simulator with signal-dependent motility.

Configs are TOML text in the same format the ``kssim`` CLI reads::

    import kssim
    res = kssim.run(kssim.config(preset="suppress1d", run={"horizon": 5}))
    res["summary"]["classification"], res["trajectory"]["u_max"][-1]
"""

from ._core import (
    BranchError,
    ConfigError,
    ConstructionError,
    DivergenceError,
    DomainError,
    InputError,
    RunFailure,
    SolverError,
    StepError,
    beta1,
    constants,
    helmholtz_solve,
    laplacian,
    normalize_config,
    preset_config,
    presets,
    run,
    sweep,
)

__all__ = [
    "BranchError",
    "ConfigError",
    "ConstructionError",
    "DivergenceError",
    "DomainError",
    "InputError",
    "RunFailure",
    "SolverError",
    "StepError",
    "beta1",
    "config",
    "constants",
    "helmholtz_solve",
    "laplacian",
    "normalize_config",
    "preset_config",
    "presets",
    "run",
    "sweep",
]


def _literal(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return '"' + value + '"'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(repr(float(x)) for x in value) + "]"
    return repr(float(value))


def config(preset=None, **sections):
    """Config text from an optional preset plus ``section={key: value}`` overrides.

    Sweep axes use dotted names: ``sweep={"source.lambda": [0, 1]}``.
    """
    lines = []
    if preset is not None:
        lines += ["[preset]", "name = " + _literal(preset)]
    for section, entries in sections.items():
        lines.append("[" + section + "]")
        for key, value in entries.items():
            name = '"' + key + '"' if "." in key else key
            lines.append(name + " = " + _literal(value))
    return "\n".join(lines) + "\n"
