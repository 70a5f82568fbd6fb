"""Command line front end for the experiment drivers.

Invocation:

    tmfejer <command> --config <path> [--out <path>] [--format csv|json] [--seed N]

with commands kernel, converge, voronovskaya, saturation, frostman and
counterexample.  Configs are flat key = value documents; `#` starts a
comment, list values sit in brackets:

    command = converge
    sequence = constant:0.5        # constant:c | geometric:r | harmonic:c | list:[...]
    orders = [1, 2, 4, 8]          # strictly increasing, all >= 1
    function = identity            # one | identity | mobius:c | pole:c | poly:[c0, c1, ...]
    grid_n = 4096                  # power of two >= 16; default chosen per order
    seed = 0
    format = csv                   # csv | json
    out = results/converge.csv     # default stdout
    probes = 16                    # voronovskaya probe count / counterexample circle probes
    trials = 50                    # voronovskaya random densities
    kernel_samples = 64            # kernel command: samples per angle axis

Unknown keys, duplicates and malformed lines are ParseError (exit 2);
value-level problems are ValidationError (exit 2); numerical failures
exit 3.  Reruns with an identical config produce byte-identical files:
no timestamps, fixed float formatting, sorted JSON keys.  The
environment variable TMFEJER_GRID_N overrides the automatic grid
resolution, and an explicit grid_n in the config wins over both.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from tmfejer import __version__
from tmfejer.analysis import (
    cesaro_counterexample,
    convergence_experiment,
    diagnose_sequence,
    saturation_check,
    voronovskaya_experiment,
)
from tmfejer.blaschke import MODULUS_MARGIN, PointSequence, PoleProximity
from tmfejer.corpus import constant_one, identity_map, mobius, polynomial, simple_pole
from tmfejer.operators import CriticalPoint, fejer_kernel_angular
from tmfejer.quadrature import NoConvergence
from tmfejer.tm_basis import TMBasis

__all__ = [
    "ParseError",
    "ValidationError",
    "SequenceSpec",
    "ExperimentConfig",
    "parse_config",
    "run",
    "main",
]

COMMANDS = ("kernel", "converge", "voronovskaya", "saturation", "frostman", "counterexample")
GENERATOR_VERSION = "1"

_KEYS = (
    "command",
    "sequence",
    "orders",
    "grid_n",
    "seed",
    "out",
    "format",
    "function",
    "probes",
    "trials",
    "kernel_samples",
)


class ParseError(Exception):
    """Structural problem in a config document (line-level)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class ValidationError(Exception):
    """A parsed value violates a field constraint."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def _parse_complex(text: str, field: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise ValidationError(field, f"not a number: {text!r}") from None


def _parse_bracket_list(text: str, field: str) -> list[str]:
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValidationError(field, f"expected a bracketed list, got {text!r}")
    inner = s[1:-1].strip()
    if not inner:
        return []
    return [item.strip() for item in inner.split(",")]


@dataclass(frozen=True)
class SequenceSpec:
    """Named pole-sequence generator: constant, geometric, harmonic or list.

    geometric:r yields a_k = 1 - r^k and harmonic:c yields a_k = 1 - 1/(k+c),
    both for k = 1, 2, ...; materialization re-checks that every modulus
    stays inside the open disc with the standard margin.
    """

    kind: str
    parameter: tuple
    raw: str

    @staticmethod
    def parse(text: str) -> "SequenceSpec":
        return _parse_sequence(text)

    def materialize(self, count: int) -> PointSequence:
        if count < 1:
            raise ValidationError("orders", "need at least order 1")
        if self.kind == "constant":
            vals = [self.parameter[0]] * count
        elif self.kind == "geometric":
            r = self.parameter[0]
            vals = [1.0 - r ** k for k in range(1, count + 1)]
        elif self.kind == "harmonic":
            c = self.parameter[0]
            vals = [1.0 - 1.0 / (k + c) for k in range(1, count + 1)]
        else:
            if count > len(self.parameter):
                raise ValidationError(
                    "sequence", f"list holds {len(self.parameter)} points, need {count}"
                )
            vals = list(self.parameter[:count])
        try:
            return PointSequence(tuple(vals))
        except ValueError as exc:
            raise ValidationError("sequence", str(exc)) from None


def _parse_sequence(text: str) -> SequenceSpec:
    s = text.strip()
    if s.startswith("["):
        s = "list:" + s
    kind, sep, arg = s.partition(":")
    kind = kind.strip()
    if not sep:
        raise ValidationError("sequence", f"expected kind:parameter, got {text!r}")
    if kind == "constant":
        return SequenceSpec("constant", (_parse_complex(arg, "sequence"),), text.strip())
    if kind == "geometric":
        r = _parse_complex(arg, "sequence")
        if r.imag != 0 or not 0.0 < r.real < 1.0:
            raise ValidationError("sequence", "geometric ratio must satisfy 0 < r < 1")
        return SequenceSpec("geometric", (r.real,), text.strip())
    if kind == "harmonic":
        c = _parse_complex(arg, "sequence")
        if c.imag != 0 or c.real < 0.0:
            raise ValidationError("sequence", "harmonic offset must satisfy c >= 0")
        return SequenceSpec("harmonic", (c.real,), text.strip())
    if kind == "list":
        items = _parse_bracket_list(arg, "sequence")
        vals = tuple(_parse_complex(v, "sequence") for v in items)
        for v in vals:
            if abs(v) >= 1.0 - MODULUS_MARGIN:
                raise ValidationError("sequence", f"modulus of {v} not inside the open disc")
        return SequenceSpec("list", vals, text.strip())
    raise ValidationError("sequence", f"unknown generator {kind!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    command: str | None = None
    sequence: SequenceSpec = SequenceSpec("constant", (0.5 + 0j,), "constant:0.5")
    orders: tuple = (1, 2, 3, 4, 6, 8)
    grid_n: int | None = None
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    function: str = "identity"
    probes: int = 16
    trials: int = 50
    kernel_samples: int = 64


def _parse_int(text: str, field: str, minimum: int) -> int:
    try:
        value = int(text.strip())
    except ValueError:
        raise ValidationError(field, f"not an integer: {text!r}") from None
    if value < minimum:
        raise ValidationError(field, f"must be >= {minimum}, got {value}")
    return value


def _parse_orders(text: str) -> tuple:
    items = _parse_bracket_list(text, "orders")
    if not items:
        raise ValidationError("orders", "list is empty")
    orders = tuple(_parse_int(v, "orders", 1) for v in items)
    if any(b <= a for a, b in zip(orders, orders[1:])):
        raise ValidationError("orders", "must be strictly increasing")
    return orders


def _parse_grid_n(text: str, field: str = "grid_n") -> int:
    value = _parse_int(text, field, 16)
    if value & (value - 1):
        raise ValidationError(field, f"must be a power of two, got {value}")
    return value


def parse_config(text: str) -> ExperimentConfig:
    """Strict parse of a key = value document into an ExperimentConfig."""
    fields: dict = {}
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError(f"expected key = value, got {rawline.strip()!r}", lineno)
        key = key.strip()
        value = value.strip()
        if key not in _KEYS:
            raise ParseError(f"unknown key {key!r}", lineno)
        if key in fields:
            raise ParseError(f"duplicate key {key!r}", lineno)
        if not value:
            raise ParseError(f"empty value for {key!r}", lineno)
        fields[key] = value

    kwargs: dict = {}
    if "command" in fields:
        if fields["command"] not in COMMANDS:
            raise ValidationError("command", f"unknown command {fields['command']!r}")
        kwargs["command"] = fields["command"]
    if "sequence" in fields:
        kwargs["sequence"] = _parse_sequence(fields["sequence"])
    if "orders" in fields:
        kwargs["orders"] = _parse_orders(fields["orders"])
    if "grid_n" in fields:
        kwargs["grid_n"] = _parse_grid_n(fields["grid_n"])
    if "seed" in fields:
        kwargs["seed"] = _parse_int(fields["seed"], "seed", 0)
    if "out" in fields:
        kwargs["out"] = fields["out"]
    if "format" in fields:
        if fields["format"] not in ("csv", "json"):
            raise ValidationError("format", f"expected csv or json, got {fields['format']!r}")
        kwargs["format"] = fields["format"]
    if "function" in fields:
        _resolve_function(fields["function"])
        kwargs["function"] = fields["function"]
    if "probes" in fields:
        kwargs["probes"] = _parse_int(fields["probes"], "probes", 1)
    if "trials" in fields:
        kwargs["trials"] = _parse_int(fields["trials"], "trials", 1)
    if "kernel_samples" in fields:
        kwargs["kernel_samples"] = _parse_int(fields["kernel_samples"], "kernel_samples", 2)
    return ExperimentConfig(**kwargs)


def _resolve_function(name: str):
    s = name.strip()
    if s in ("one", "e0"):
        return constant_one()
    if s in ("identity", "w0"):
        return identity_map()
    kind, sep, arg = s.partition(":")
    if sep and kind == "mobius":
        alpha = _parse_complex(arg, "function")
        if abs(alpha) >= 1.0:
            raise ValidationError("function", "mobius parameter must be inside the disc")
        return mobius(alpha)
    if sep and kind == "pole":
        p = _parse_complex(arg, "function")
        if abs(p) <= 1.0:
            raise ValidationError("function", "pole must lie outside the closed disc")
        return simple_pole(p)
    if sep and kind == "poly":
        coeffs = [_parse_complex(v, "function") for v in _parse_bracket_list(arg, "function")]
        if not coeffs:
            raise ValidationError("function", "polynomial needs coefficients")
        return polynomial(coeffs, label=f"poly(deg {len(coeffs) - 1})")
    raise ValidationError("function", f"unknown function {name!r}")


def _resolved_grid_n(config: ExperimentConfig) -> int | None:
    if config.grid_n is not None:
        return config.grid_n
    env = os.environ.get("TMFEJER_GRID_N")
    if env is None:
        return None
    return _parse_grid_n(env, "TMFEJER_GRID_N")


def _execute(config: ExperimentConfig) -> list[dict]:
    grid_n = _resolved_grid_n(config)
    sequence = config.sequence.materialize(max(config.orders))
    if config.command == "kernel":
        rows = []
        m = config.kernel_samples
        angles = 2.0 * np.pi * np.arange(m) / m
        for n in config.orders:
            basis = TMBasis(sequence, int(n))
            xg, yg = np.meshgrid(angles, angles, indexing="ij")
            vals = np.asarray(fejer_kernel_angular(basis, xg, yg))
            for i in range(m):
                for j in range(m):
                    rows.append(
                        {
                            "order": int(n),
                            "x": float(xg[i, j]),
                            "y": float(yg[i, j]),
                            "value": float(vals[i, j]),
                        }
                    )
        return rows
    if config.command == "converge":
        f = _resolve_function(config.function)
        return [r.to_row() for r in convergence_experiment(f, sequence, config.orders, grid_n)]
    if config.command == "voronovskaya":
        rows = []
        for n in config.orders:
            rows.extend(
                r.to_row()
                for r in voronovskaya_experiment(
                    sequence, int(n), config.probes, config.trials, config.seed, grid_n
                )
            )
        return rows
    if config.command == "saturation":
        rows = []
        for n in config.orders:
            rows.extend(r.to_row() for r in saturation_check(sequence, int(n), grid_n=grid_n))
        return rows
    if config.command == "frostman":
        return [diagnose_sequence(sequence, int(n)).to_row() for n in config.orders]
    if config.command == "counterexample":
        values = sequence.as_array()
        return [
            r.to_row()
            for r in cesaro_counterexample(values, config.orders, grid_n, config.probes)
        ]
    raise ValidationError("command", f"unknown command {config.command!r}")


def _format_cell(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    return str(value)


def _render(config: ExperimentConfig, rows: list[dict]) -> str:
    meta = {
        "tool": "tmfejer",
        "tool_version": __version__,
        "command": config.command,
        "sequence": config.sequence.raw,
        "generator_version": GENERATOR_VERSION,
        "orders": list(config.orders),
        "seed": config.seed,
        "grid_n": config.grid_n,
        "function": config.function,
    }
    if config.format == "json":
        doc = {
            "schema_version": "1",
            "metadata": meta,
            "rows": rows,
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    lines = [
        f"# tool: tmfejer {__version__}",
        f"# command: {config.command}",
        f"# sequence: {config.sequence.raw} (generator v{GENERATOR_VERSION})",
        f"# seed: {config.seed}",
    ]
    if rows:
        header = list(rows[0].keys())
        lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(_format_cell(row[k]) for k in header))
    return "\n".join(lines) + "\n"


def run(config: ExperimentConfig) -> int:
    """Execute a validated config; returns the process exit status."""
    try:
        if config.command not in COMMANDS:
            raise ValidationError("command", f"missing or unknown command {config.command!r}")
        rows = _execute(config)
        text = _render(config, rows)
        if config.out is None or config.out == "-":
            sys.stdout.write(text)
        else:
            path = Path(config.out)
            if path.parent and not path.parent.exists():
                path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(text.encode("utf-8"))
        return 0
    except (ParseError, ValidationError, ValueError) as exc:
        print(f"tmfejer: error: {exc}", file=sys.stderr)
        return 2
    except (NoConvergence, CriticalPoint, PoleProximity) as exc:
        print(f"tmfejer: numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"tmfejer: error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tmfejer",
        description="Experiments for Takenaka-Malmquist bases and positive summation kernels.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="path to a key = value config document")
    parser.add_argument("--out", help="report path (default: config `out`, else stdout)")
    parser.add_argument("--format", choices=("csv", "json"), help="override config format")
    parser.add_argument("--seed", type=int, help="override config seed")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"tmfejer: error: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        config = parse_config(text)
    except (ParseError, ValidationError) as exc:
        print(f"tmfejer: error: {exc}", file=sys.stderr)
        return 2

    if config.command is not None and config.command != args.command:
        print(
            f"tmfejer: error: command mismatch: config says {config.command!r},"
            f" command line says {args.command!r}",
            file=sys.stderr,
        )
        return 2
    updates: dict = {"command": args.command}
    if args.out is not None:
        updates["out"] = args.out
    if args.format is not None:
        updates["format"] = args.format
    if args.seed is not None:
        if args.seed < 0:
            print("tmfejer: error: seed: must be >= 0", file=sys.stderr)
            return 2
        updates["seed"] = args.seed
    config = dataclasses.replace(config, **updates)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
