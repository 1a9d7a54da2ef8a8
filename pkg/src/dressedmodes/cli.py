"""Command-line surface: config files in, CSV/JSON reports out.

Five subcommands: `modes` (frequencies and the orthogonal transform),
`spectrum` (eigenstate energies), `evolve` (transition amplitudes over a
time grid), `probabilities` (per-source transition probabilities with the
unitarity defect), and `validate` (the full invariant suite).

Exit codes: 0 success, 1 validation failure or unstable model,
2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Callable, Sequence

import numpy as np

from .dynamics import (
    AmplitudeSample,
    PhaseConvention,
    kernel,
    multiquanta_amplitude,
    spectrum_energy,
)
from .errors import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    InvalidParameterError,
    NoConvergenceError,
    NonPositiveSpectrumError,
)
from .model import (
    ModelConfig,
    build_interaction_matrix,
    load_config,
    random_config,
)
from .oracle import (
    accuracy_dt,
    analytic_two_mode,
    integrate_propagator,
    kernel_from_propagator,
)
from .spectral import diagonalize, matrix_power, stability_margin

__all__ = ["main", "run", "build_parser"]

_MAX_ENUMERATED_OCCUPATIONS = 10**6

# Fixed tolerances for `validate`, echoed in the report.
_TOL_ORTHOGONALITY_PER_DIM = 1e-12
_TOL_RECONSTRUCTION_REL = 1e-10
_TOL_UNITARITY = 1e-10
_TOL_SEMIGROUP = 1e-10
_TOL_TIME_REVERSAL = 1e-12
_TOL_GENERATOR_REL = 1e-6
_TOL_ORACLE = 1e-6
_TOL_ANALYTIC_REL = 1e-12
_TOL_ANALYTIC_VECTORS = 1e-10
_GENERATOR_STEP = 1e-5
_ORACLE_MAX_DIM = 9


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dressedmodes",
        description=(
            "Exact solver for one oscillator linearly coupled to N field "
            "modes: normal-mode frequencies, transition amplitudes, energy "
            "spectra, and a self-validation suite."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, help="TOML model file")
        p.add_argument(
            "--format", choices=("csv", "json"), default="csv", help="output format"
        )
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    def grid(p: argparse.ArgumentParser) -> None:
        p.add_argument("--t0", type=float, default=0.0, help="grid start (default 0)")
        p.add_argument("--t1", type=float, default=10.0, help="grid end (default 10)")
        p.add_argument(
            "--steps",
            type=int,
            default=100,
            help=(
                "grid subdivisions; the closed interval [t0, t1] is sampled at "
                "steps+1 points including both endpoints (a single point when "
                "t0 == t1)"
            ),
        )

    p = sub.add_parser("modes", help="normal-mode frequencies and transform")
    common(p)

    p = sub.add_parser("spectrum", help="eigenstate energies")
    common(p)
    p.add_argument(
        "--occ",
        action="append",
        default=None,
        metavar="n0,n1,...",
        help="occupation numbers, one flag per eigenstate (repeatable)",
    )
    p.add_argument(
        "--max-quanta",
        type=int,
        default=None,
        help="enumerate every occupation with total quanta up to this bound",
    )
    p.add_argument(
        "--sorted", action="store_true", help="sort rows by nondecreasing energy"
    )

    p = sub.add_parser("evolve", help="transition amplitudes over a time grid")
    common(p)
    grid(p)
    p.add_argument(
        "--pair",
        action="append",
        default=None,
        metavar="r,s",
        required=True,
        help="source,target component pair (repeatable)",
    )
    p.add_argument("--n", type=int, default=1, help="quanta count (default 1)")
    p.add_argument(
        "--phase",
        choices=("total", "paper"),
        default="total",
        help="global phase convention for the amplitudes",
    )

    p = sub.add_parser(
        "probabilities", help="per-source transition probabilities and their sum"
    )
    common(p)
    grid(p)
    p.add_argument(
        "--pair",
        action="append",
        default=None,
        metavar="s",
        required=True,
        help="source component index (a single integer; exactly one)",
    )

    p = sub.add_parser(
        "validate",
        help="run the invariant suite (fixed tolerances, echoed in the report)",
    )
    common(p)
    p.add_argument(
        "--seed",
        type=int,
        default=0,
        help="seed for the random-model checks; echoed in the report",
    )

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
    except (InvalidParameterError, OSError, ValueError) as exc:
        print(f"dressedmodes: config error: {exc}", file=sys.stderr)
        return 2

    handler: Callable[[ModelConfig, argparse.Namespace], tuple[str, int]]
    handler = _HANDLERS[args.command]
    try:
        text, code = handler(config, args)
    except _UsageError as exc:
        print(f"dressedmodes: usage error: {exc}", file=sys.stderr)
        return 2
    except (IndexOutOfRangeError, DimensionMismatchError, InvalidParameterError) as exc:
        print(f"dressedmodes: usage error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (NonPositiveSpectrumError, NoConvergenceError) as exc:
        print(f"dressedmodes: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1

    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="") as handle:
            handle.write(text)
    return code


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


# ---------------------------------------------------------------------------
# rendering helpers

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _csv(lines: list[list[str]]) -> str:
    return "".join(",".join(cells) + "\n" for cells in lines)


def _json_payload(config: ModelConfig, command: str, results: list, **extra) -> str:
    payload = {
        "model": {
            "omega0": config.omega0,
            "hbar": config.hbar,
            "modes": [{"omega": m.omega, "c": m.c} for m in config.modes],
        },
        "command": command,
    }
    payload.update(extra)
    payload["results"] = results
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def _time_grid(args: argparse.Namespace) -> list[float]:
    if args.t1 < args.t0:
        raise _UsageError(f"--t1 ({args.t1}) must be >= --t0 ({args.t0})")
    if args.steps < 1:
        raise _UsageError(f"--steps must be >= 1, got {args.steps}")
    if args.t1 == args.t0:
        return [args.t0]
    span = args.t1 - args.t0
    return [args.t0 + i * span / args.steps for i in range(args.steps + 1)]


def _parse_ints(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise _UsageError(f"{flag} expects comma-separated integers, got {text!r}") from None


def _check_index(value: int, dim: int, flag: str) -> int:
    if not 0 <= value < dim:
        raise _UsageError(f"{flag} index {value} outside [0, {dim - 1}]")
    return value


# ---------------------------------------------------------------------------
# commands

def _cmd_modes(config: ModelConfig, args: argparse.Namespace) -> tuple[str, int]:
    basis = diagonalize(build_interaction_matrix(config))
    margin = stability_margin(basis)
    if args.format == "csv":
        lines = [["field", "i", "j", "value"]]
        for k, freq in enumerate(basis.frequencies):
            lines.append(["frequency", str(k), "", _fmt(float(freq))])
        lines.append(["stability_margin", "", "", _fmt(margin)])
        for r in range(basis.dim):
            for c in range(basis.dim):
                lines.append(["T", str(r), str(c), _fmt(float(basis.transform[r, c]))])
        return _csv(lines), 0
    results = [
        {
            "frequencies": [float(f) for f in basis.frequencies],
            "stability_margin": margin,
            "transform": [[float(v) for v in row] for row in basis.transform],
        }
    ]
    return _json_payload(config, "modes", results), 0


def _enumerate_occupations(total: int, slots: int):
    if slots == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _enumerate_occupations(total - first, slots - 1):
            yield (first,) + rest


def _cmd_spectrum(config: ModelConfig, args: argparse.Namespace) -> tuple[str, int]:
    basis = diagonalize(build_interaction_matrix(config))
    dim = basis.dim
    if (args.occ is None) == (args.max_quanta is None):
        raise _UsageError("provide exactly one of --occ or --max-quanta")

    vacuum = (0,) * dim
    if args.occ is not None:
        occupations = [vacuum]
        for text in args.occ:
            occ = tuple(_parse_ints(text, "--occ"))
            if len(occ) != dim:
                raise _UsageError(
                    f"--occ needs {dim} entries for this model, got {len(occ)}"
                )
            if any(n < 0 for n in occ):
                raise _UsageError(f"--occ entries must be >= 0, got {text!r}")
            if occ != vacuum:
                occupations.append(occ)
    else:
        if args.max_quanta < 0:
            raise _UsageError(f"--max-quanta must be >= 0, got {args.max_quanta}")
        count = math.comb(args.max_quanta + dim, dim)
        if count > _MAX_ENUMERATED_OCCUPATIONS:
            raise _UsageError(
                f"enumeration would produce {count} occupations "
                f"(limit {_MAX_ENUMERATED_OCCUPATIONS}); lower --max-quanta"
            )
        occupations = [
            occ
            for total in range(args.max_quanta + 1)
            for occ in _enumerate_occupations(total, dim)
        ]

    rows = [(occ, spectrum_energy(basis, occ, config.hbar)) for occ in occupations]
    if args.sorted:
        rows.sort(key=lambda row: row[1])

    if args.format == "csv":
        lines = [["occupation", "energy"]]
        for occ, energy in rows:
            lines.append([" ".join(str(n) for n in occ), _fmt(energy)])
        return _csv(lines), 0
    results = [{"occupation": list(occ), "energy": energy} for occ, energy in rows]
    return _json_payload(config, "spectrum", results), 0


def _cmd_evolve(config: ModelConfig, args: argparse.Namespace) -> tuple[str, int]:
    basis = diagonalize(build_interaction_matrix(config))
    grid = _time_grid(args)
    pairs = []
    for text in args.pair:
        parts = _parse_ints(text, "--pair")
        if len(parts) != 2:
            raise _UsageError(f"--pair expects r,s for evolve, got {text!r}")
        pairs.append(
            (
                _check_index(parts[0], basis.dim, "--pair"),
                _check_index(parts[1], basis.dim, "--pair"),
            )
        )
    convention = PhaseConvention(args.phase)
    samples = []
    for t in grid:
        for r, s in pairs:
            value = multiquanta_amplitude(basis, r, s, args.n, t, convention)
            samples.append(AmplitudeSample(time=t, r=r, s=s, n=args.n, value=value))

    if args.format == "csv":
        lines = [["t", "r", "s", "n", "re", "im", "prob"]]
        for sample in samples:
            lines.append(
                [
                    _fmt(sample.time),
                    str(sample.r),
                    str(sample.s),
                    str(sample.n),
                    _fmt(sample.value.real),
                    _fmt(sample.value.imag),
                    _fmt(sample.probability),
                ]
            )
        return _csv(lines), 0
    results = [
        {
            "t": sample.time,
            "r": sample.r,
            "s": sample.s,
            "n": sample.n,
            "re": sample.value.real,
            "im": sample.value.imag,
            "prob": sample.probability,
        }
        for sample in samples
    ]
    return _json_payload(config, "evolve", results), 0


def _cmd_probabilities(config: ModelConfig, args: argparse.Namespace) -> tuple[str, int]:
    basis = diagonalize(build_interaction_matrix(config))
    if len(args.pair) != 1:
        raise _UsageError("probabilities expects exactly one --pair")
    parts = _parse_ints(args.pair[0], "--pair")
    if len(parts) != 1:
        raise _UsageError(
            f"probabilities expects a single source index for --pair, got {args.pair[0]!r}"
        )
    source = _check_index(parts[0], basis.dim, "--pair")
    grid = _time_grid(args)

    rows = []
    for t in grid:
        column = kernel(basis, t).entries[:, source]
        probs = [
            float(v.real * v.real + v.imag * v.imag) for v in column
        ]
        rows.append((t, probs, sum(probs)))

    if args.format == "csv":
        header = ["t"] + [f"p{r}" for r in range(basis.dim)] + ["sum"]
        lines = [header]
        for t, probs, total in rows:
            lines.append([_fmt(t)] + [_fmt(p) for p in probs] + [_fmt(total)])
        return _csv(lines), 0
    results = [
        {"t": t, "probabilities": probs, "sum": total} for t, probs, total in rows
    ]
    return _json_payload(config, "probabilities", results, source=source), 0


# ---------------------------------------------------------------------------
# validate

def _max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a)))


def _check_basis(rows: list, label: str, matrix, basis, rng, n_times: int, n_pairs: int) -> None:
    dim = basis.dim
    identity = np.eye(dim)
    rows.append(
        _row(
            "orthogonality",
            label,
            _max_abs(basis.transform.T @ basis.transform - identity),
            _TOL_ORTHOGONALITY_PER_DIM * dim,
        )
    )
    reconstructed = (
        basis.transform * (basis.frequencies * basis.frequencies)
    ) @ basis.transform.T
    rows.append(
        _row(
            "reconstruction",
            label,
            _max_abs(reconstructed - matrix.entries) / _max_abs(matrix.entries),
            _TOL_RECONSTRUCTION_REL,
        )
    )
    defect = 0.0
    for t in rng.uniform(0.0, 50.0, size=n_times):
        j = kernel(basis, float(t)).entries
        sums = np.sum(j.real * j.real + j.imag * j.imag, axis=0)
        defect = max(defect, float(np.max(np.abs(sums - 1.0))))
    rows.append(_row("unitarity", label, defect, _TOL_UNITARITY))
    defect = 0.0
    for t1, t2 in rng.uniform(0.0, 10.0, size=(n_pairs, 2)):
        combined = kernel(basis, float(t1 + t2)).entries
        product = kernel(basis, float(t1)).entries @ kernel(basis, float(t2)).entries
        defect = max(defect, _max_abs(combined - product))
    rows.append(_row("semigroup", label, defect, _TOL_SEMIGROUP))


def _row(check: str, model: str, defect: float, tolerance: float) -> dict:
    return {
        "check": check,
        "model": model,
        "status": "pass" if defect <= tolerance else "fail",
        "defect": defect,
        "tolerance": tolerance,
        "note": "",
    }


def _cmd_validate(config: ModelConfig, args: argparse.Namespace) -> tuple[str, int]:
    seed = args.seed
    rng = np.random.default_rng(seed)
    rows: list[dict] = []
    matrix = build_interaction_matrix(config)
    try:
        basis = diagonalize(matrix)
    except (NonPositiveSpectrumError, NoConvergenceError) as exc:
        rows.append(
            {
                "check": "diagonalize",
                "model": "config",
                "status": "fail",
                "defect": None,
                "tolerance": None,
                "note": f"{type(exc).__name__}: {exc}",
            }
        )
        return _render_validate(config, seed, rows, args.format)

    _check_basis(rows, "config", matrix, basis, rng, n_times=20, n_pairs=5)

    defect = 0.0
    for t in rng.uniform(0.0, 25.0, size=5):
        j = kernel(basis, float(t)).entries
        defect = max(defect, _max_abs(kernel(basis, -float(t)).entries - np.conj(j)))
    rows.append(_row("time_reversal", "config", defect, _TOL_TIME_REVERSAL))

    h = _GENERATOR_STEP
    derivative = (
        1j * (kernel(basis, h).entries - kernel(basis, -h).entries) / (2.0 * h)
    )
    frequency_matrix = matrix_power(basis, 0.5)
    rows.append(
        _row(
            "generator",
            "config",
            _max_abs(derivative - frequency_matrix) / _max_abs(frequency_matrix),
            _TOL_GENERATOR_REL,
        )
    )

    if basis.dim <= _ORACLE_MAX_DIM:
        defect = 0.0
        for t in (1.0, 5.0, 10.0):
            propagator = integrate_propagator(matrix, t, accuracy_dt(matrix, t))
            reference = kernel_from_propagator(matrix, basis, propagator)
            defect = max(defect, _max_abs(reference - kernel(basis, t).entries))
        rows.append(_row("oracle_equivalence", "config", defect, _TOL_ORACLE))
    else:
        rows.append(
            {
                "check": "oracle_equivalence",
                "model": "config",
                "status": "skip",
                "defect": None,
                "tolerance": _TOL_ORACLE,
                "note": f"skipped: dimension {basis.dim} above {_ORACLE_MAX_DIM}",
            }
        )

    if config.n_modes == 1:
        low, high, theta = analytic_two_mode(
            config.omega0, config.modes[0].omega, config.modes[0].c
        )
        freq_defect = max(
            abs(float(basis.frequencies[0]) - low) / low,
            abs(float(basis.frequencies[1]) - high) / high,
        )
        rows.append(_row("analytic_frequencies", "config", freq_defect, _TOL_ANALYTIC_REL))
        columns = np.array(
            [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
        )
        vec_defect = 0.0
        for j in range(2):
            col = basis.transform[:, j]
            ref = columns[:, j]
            vec_defect = max(
                vec_defect, min(_max_abs(col - ref), _max_abs(col + ref))
            )
        rows.append(_row("analytic_vectors", "config", vec_defect, _TOL_ANALYTIC_VECTORS))

    for i in range(5):
        n = int(rng.integers(1, 9))
        sample = random_config(rng, n)
        sample_matrix = build_interaction_matrix(sample)
        sample_basis = diagonalize(sample_matrix)
        _check_basis(
            rows, f"random{i}(N={n})", sample_matrix, sample_basis, rng,
            n_times=5, n_pairs=2,
        )

    return _render_validate(config, seed, rows, args.format)


def _render_validate(
    config: ModelConfig, seed: int, rows: list[dict], fmt: str
) -> tuple[str, int]:
    failed = any(row["status"] == "fail" for row in rows)
    code = 1 if failed else 0
    if fmt == "json":
        return _json_payload(config, "validate", rows, seed=seed), code
    lines = [["seed", "check", "model", "status", "defect", "tolerance", "note"]]
    for row in rows:
        lines.append(
            [
                str(seed),
                row["check"],
                row["model"],
                row["status"],
                "" if row["defect"] is None else _fmt(row["defect"]),
                "" if row["tolerance"] is None else _fmt(row["tolerance"]),
                row["note"],
            ]
        )
    return _csv(lines), code


_HANDLERS: dict[str, Callable[[ModelConfig, argparse.Namespace], tuple[str, int]]] = {
    "modes": _cmd_modes,
    "spectrum": _cmd_spectrum,
    "evolve": _cmd_evolve,
    "probabilities": _cmd_probabilities,
    "validate": _cmd_validate,
}
