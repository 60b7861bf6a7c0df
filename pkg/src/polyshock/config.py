"""Run configuration: flat key = value text with full validation.

Unknown keys, duplicate keys, malformed lines, and parameter-bound
violations are all reported with the offending line number and, for
bounds, the violated inequality.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .collisions import CrossSectionSpec
from .errors import ConfigError
from .gas import GasParameters

__all__ = ["RunConfig", "parse_config", "load_config"]

COMMANDS = ("closure", "shock", "sweep", "verify")


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "on", "yes", "1"):
        return True
    if low in ("false", "off", "no", "0"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


def _parse_float_list(raw: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in raw.split(",") if tok.strip())


# key -> (parser, default); list-valued keys hold the sweep grids and
# collapse to their single entry for non-sweep commands.
_SCHEMA = {
    "alpha": (_parse_float_list, (0.5,)),
    "mass": (float, 1.0),
    "boltzmann": (float, 1.0),
    "variant": (str, "standard"),
    "K": (float, 1.0),
    "s": (_parse_float_list, (1.0,)),
    "beta": (_parse_float_list, (0.0,)),
    "q": (_parse_float_list, (0.0,)),
    "rho": (float, 1.0),
    "e": (float, 1.0),
    "Pi": (float, 0.0),
    "mach0": (_parse_float_list, (1.1,)),
    "ode_rtol": (float, 1e-10),
    "eps_eq": (float, 1e-6),
    "max_span": (float, 1e5),
    "n_samples": (int, 1200),
    "quad_rel_tol": (float, 1e-8),
    "quad_abs_floor": (float, 1e-12),
    "max_subdivisions": (int, 400),
    "radial_cutoff_sigmas": (float, 12.0),
    "out": (str, "out"),
    "plot": (_parse_bool, False),
    "perturb_coefficients": (float, 0.0),
}

# bound name -> (check, message); messages name the violated inequality
_BOUNDS = {
    "alpha": (lambda v: all(x > -1.0 for x in v), "alpha must exceed -1"),
    "mass": (lambda v: v > 0.0, "mass must be positive"),
    "boltzmann": (lambda v: v > 0.0, "boltzmann must be positive"),
    "variant": (lambda v: v in ("standard", "generalized"),
                "variant must be 'standard' or 'generalized'"),
    "K": (lambda v: v > 0.0, "K must be positive"),
    "s": (lambda v: all(x > -1.5 for x in v), "s must exceed -3/2"),
    "beta": (lambda v: all(x > -2.0 for x in v), "beta must exceed -2"),
    "q": (lambda v: all(x > -1.5 for x in v), "q must exceed -3/2"),
    "rho": (lambda v: v > 0.0, "rho must be positive"),
    "e": (lambda v: v > 0.0, "e must be positive"),
    "mach0": (lambda v: all(x > 1.0 for x in v), "mach0 must exceed 1"),
    "ode_rtol": (lambda v: 0.0 < v <= 1e-6, "ode_rtol must lie in (0, 1e-6]"),
    "eps_eq": (lambda v: 0.0 < v < 1e-2, "eps_eq must lie in (0, 1e-2)"),
    "max_span": (lambda v: v > 0.0, "max_span must be positive"),
    "n_samples": (lambda v: v >= 16, "n_samples must be at least 16"),
    "quad_rel_tol": (lambda v: 0.0 < v <= 1e-3, "quad_rel_tol must lie in (0, 1e-3]"),
    "quad_abs_floor": (lambda v: v > 0.0, "quad_abs_floor must be positive"),
    "max_subdivisions": (lambda v: v >= 4, "max_subdivisions must be at least 4"),
    "radial_cutoff_sigmas": (lambda v: v >= 8.0, "radial_cutoff_sigmas must be at least 8"),
}


@dataclass
class RunConfig:
    """Fully validated configuration for one CLI invocation."""

    command: str = "shock"
    values: dict = field(default_factory=dict)

    def __getattr__(self, key):
        try:
            return self.__dict__["values"][key]
        except KeyError:
            raise AttributeError(key) from None

    def scalar(self, key: str) -> float:
        """Single value of a possibly list-valued key; rejects grids."""
        v = self.values[key]
        if isinstance(v, tuple):
            if len(v) != 1:
                raise ConfigError(f"key {key!r} must be a single value for command "
                                  f"{self.command!r}, got grid {v}")
            return v[0]
        return v

    def gas_parameters(self, alpha: float | None = None) -> GasParameters:
        a = self.scalar("alpha") if alpha is None else alpha
        return GasParameters(alpha=a, mass=self.values["mass"], boltzmann=self.values["boltzmann"])

    def cross_section(self, s=None, beta=None, q=None) -> CrossSectionSpec:
        variant = self.values["variant"]
        kwargs = dict(
            variant=variant,
            K=self.values["K"],
            s=self.scalar("s") if s is None else s,
        )
        if variant == "generalized":
            kwargs["beta"] = self.scalar("beta") if beta is None else beta
            kwargs["q"] = self.scalar("q") if q is None else q
        return CrossSectionSpec(**kwargs)


def parse_config(text: str, command: str = "shock") -> RunConfig:
    """Parse flat ``key = value`` lines with ``#`` comments."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; expected one of {COMMANDS}")
    values = {}
    seen_lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", line=lineno)
        key, _, raw_value = line.partition("=")
        key = key.strip()
        raw_value = raw_value.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"unknown key {key!r}", line=lineno)
        if key in values:
            raise ConfigError(
                f"duplicate key {key!r} (first set on line {seen_lines[key]})", line=lineno
            )
        parser, _ = _SCHEMA[key]
        try:
            value = parser(raw_value)
        except ValueError as exc:
            raise ConfigError(f"invalid value for {key!r}: {exc}", line=lineno) from None
        if key in _BOUNDS:
            check, message = _BOUNDS[key]
            # q enters the profile equations only through the exponent
            # s* = s + q, which is unrestricted there; the kernel bound
            # q > -3/2 applies when a cross section is actually built.
            skip = key == "q" and command in ("shock", "sweep")
            empty = isinstance(value, tuple) and not value
            if not skip and (empty or not check(value)):
                raise ConfigError(f"{message} (got {raw_value!r})", line=lineno)
        values[key] = value
        seen_lines[key] = lineno
    for key, (_, default) in _SCHEMA.items():
        values.setdefault(key, default)
    return RunConfig(command=command, values=values)


def load_config(path, command: str = "shock") -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read(), command=command)
