"""Run configuration: an INI-style text file read with :mod:`configparser`.

Sections
--------
``[chain]``       family (M1|M2|M3), optional name, ``a`` for M2, optional
                  ``perturb = row col delta`` (adds delta to one matrix entry).
``[run]``         s_min, s_max, t_max, mode (1d|2d|both), resolution,
                  resolution_2d, tol_zero, tol_bisect, tol_ck, seed, out.
``[function X]``  one per parameter function; ``pieces`` holds piecewise text,
                  ``variable`` names the free variable (default s, or t for
                  eta/vartheta/kappa).
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path

from .chains import REQUIRED, ChainSpec
from .expr import ExprError, parse_piecewise


class ConfigError(Exception):
    pass


_T_FUNCTIONS = {"eta", "vartheta", "kappa"}


@dataclass(frozen=True)
class RunConfig:
    family: str
    functions: dict[str, str]
    variables: dict[str, str] = field(default_factory=dict)
    name: str = "chain"
    threshold: float | None = None
    perturbation: tuple[int, int, float] | None = None
    s_min: float = 0.0
    s_max: float = 8.0
    t_max: float = 8.0
    mode: str = "1d"
    resolution: int = 4096
    resolution_2d: int = 256
    tol_zero: float = 1e-9
    tol_bisect: float = 1e-6
    tol_ck: float = 1e-9
    seed: int = 0
    out: str = "out"

    def chain(self) -> ChainSpec:
        compiled = {}
        for fname, text in self.functions.items():
            var = self.variables.get(fname, "t" if fname in _T_FUNCTIONS else "s")
            try:
                compiled[fname] = parse_piecewise(text, var)
            except ExprError as exc:
                raise ConfigError(f"function {fname}: {exc}") from exc
        try:
            return ChainSpec(self.family, compiled, self.threshold, self.perturbation, self.name)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def with_overrides(self, **kw) -> "RunConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


_RUN_FIELDS = {
    "s_min": float, "s_max": float, "t_max": float, "mode": str, "resolution": int,
    "resolution_2d": int, "tol_zero": float, "tol_bisect": float, "tol_ck": float,
    "seed": int, "out": str,
}


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None, comment_prefixes=("#",), inline_comment_prefixes=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed configuration: {exc}") from exc
    if not cp.has_section("chain"):
        raise ConfigError("missing [chain] section")
    chain = cp["chain"]
    family = chain.get("family", "").strip()
    if family not in REQUIRED:
        raise ConfigError(f"[chain] family must be one of {', '.join(REQUIRED)}")
    kw: dict = {"family": family, "name": chain.get("name", family).strip()}
    try:
        if "a" in chain:
            kw["threshold"] = float(chain["a"])
        if "perturb" in chain:
            i, j, d = chain["perturb"].split()
            kw["perturbation"] = (int(i), int(j), float(d))
    except ValueError as exc:
        raise ConfigError(f"[chain]: {exc}") from exc

    functions, variables = {}, {}
    for section in cp.sections():
        if not section.startswith("function "):
            if section not in ("chain", "run"):
                raise ConfigError(f"unknown section [{section}]")
            continue
        fname = section[len("function "):].strip()
        body = cp[section]
        if "pieces" not in body:
            raise ConfigError(f"[{section}] needs a 'pieces' entry")
        functions[fname] = body["pieces"].strip()
        if "variable" in body:
            variables[fname] = body["variable"].strip()
    wanted = set(REQUIRED[family])
    if set(functions) != wanted:
        raise ConfigError(
            f"{family} needs exactly the functions {sorted(wanted)}, got {sorted(functions)}"
        )
    kw["functions"] = functions
    kw["variables"] = variables

    if cp.has_section("run"):
        for key, value in cp["run"].items():
            if key not in _RUN_FIELDS:
                raise ConfigError(f"unknown [run] key {key!r}")
            try:
                kw[key] = _RUN_FIELDS[key](value.strip())
            except ValueError as exc:
                raise ConfigError(f"[run] {key}: {exc}") from exc
    cfg = RunConfig(**kw)
    if cfg.mode not in ("1d", "2d", "both"):
        raise ConfigError("mode must be 1d, 2d or both")
    if family == "M2" and cfg.threshold is None:
        raise ConfigError("M2 needs 'a' in [chain]")
    cfg.chain()  # surface expression errors early
    return cfg


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse_config(text)


EXAMPLE1 = """\
[chain]
family = M1
name = example1

[run]
s_min = 0
s_max = 8
t_max = 8
mode = both
resolution = 4096

[function h]
pieces = 1/(s+1)

[function f]
pieces = 4*s^2 - 24*s + 32

[function g]
pieces = 4*s - 16
"""

EXAMPLE2 = """\
[chain]
family = M2
name = example2
a = 10

[run]
s_min = 0
s_max = 8
t_max = 12
mode = both
resolution = 4096

[function phi]
pieces = s^2 - 8*s + 13

[function psi]
pieces = s^2 - 5
"""

EXAMPLE3 = """\
[chain]
family = M3
name = example3

[run]
s_min = 0
s_max = 8
t_max = 8
mode = 2d
resolution_2d = 400

[function eta]
pieces =
    [0, 6): t + 1
    [6, inf): 0

[function vartheta]
pieces =
    [0, 2): (t + 1)/sqrt(2)
    [2, 3): sqrt((t - 1)^2 + 4)
    [3, 6): 0
    [6, inf): t - 2

[function kappa]
pieces =
    [0, 1): 0
    [1, 6): t - 3
    [6, inf): 0

[function phi1]
pieces =
    [0, 3): -2
    [3, 5]: 0
    (5, inf): s - 5.7

[function phi2]
pieces =
    [0, 1): -1
    [1, 2): 0
    [2, 3): 1
    [3, inf): s - 4
"""

BUILTIN = {"example1": EXAMPLE1, "example2": EXAMPLE2, "example3": EXAMPLE3}


def builtin(name: str) -> RunConfig:
    return parse_config(BUILTIN[name])
