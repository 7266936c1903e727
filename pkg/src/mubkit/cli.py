"""Command line interface.

Subcommands
-----------
mub        build a MUB family, verify it, optionally export JSON files
operators  build the commuting-class operator set for a dimension
verify     re-run the verification suite on exported JSON files
tensors    export spherical tensor matrices for a given spin
tomo       run reconstruction trials on random states
tables     print the built-in bases and operators in symbolic form

Exit codes: 0 all checks pass, 1 a verification check fails,
2 unsupported or invalid input, 3 unreadable or malformed files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .classes import OperatorSet, build_set, coefficient_vectors, verify_set
from .matcore import (
    DEFAULT_TOL,
    matrix_from_json,
    matrix_to_json,
    root_of_unity,
    validate_tolerance,
)
from .mub import (
    BUILTIN_DIMS,
    Basis,
    MubFamily,
    UnsupportedDimensionError,
    builtin_family,
    check_family,
    odd_prime_family,
)
from .tensors import spherical_tensor
from .tomography import (
    probabilities,
    random_density,
    reconstruct_from_record,
    sample_shots,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_UNSUPPORTED = 2
EXIT_IO = 3

_MASK64 = (1 << 64) - 1

_FAMILY_FILE = "family.json"
_OPERATORS_FILE = "operators.json"
_REPORT_FILE = "verification_report.json"

# operator names used in the printed tables, per dimension
_TABLE_NAMES = {2: "sigma", 3: "alpha", 4: "beta", 5: "gamma"}


class _LoadError(Exception):
    """Raised when exported files are missing or malformed."""


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _emit_error(kind: str, message: str, **extra) -> None:
    payload = {"error": kind, "message": message}
    payload.update(extra)
    _emit(payload)


def _resolve_tol(args: argparse.Namespace) -> float:
    """Tolerance precedence: --tol flag, MUBKIT_TOL env var, default."""
    if getattr(args, "tol", None) is not None:
        return validate_tolerance(args.tol)
    env = os.environ.get("MUBKIT_TOL")
    if env is not None:
        try:
            value = float(env)
        except ValueError:
            raise ValueError(f"MUBKIT_TOL is not a number: {env!r}")
        return validate_tolerance(value)
    return DEFAULT_TOL


def _derive_seed(seed: int, *key: int) -> int:
    """Stable per-trial seed derived from the user seed and a key path."""
    seq = np.random.SeedSequence([seed & _MASK64, *key])
    return int(seq.generate_state(1, np.uint64)[0])


# ---------------------------------------------------------------------------
# JSON export / import of families and operator sets


def _basis_filename(label: str) -> str:
    return f"basis_{label}.json"


def _write_family(out: Path, family: MubFamily) -> list[str]:
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for basis in family.bases:
        name = _basis_filename(basis.label)
        with open(out / name, "w", encoding="utf-8") as fh:
            json.dump(matrix_to_json(basis.matrix), fh, indent=2)
        files.append(name)
    manifest = {
        "dim": family.dim,
        "bases": list(family.labels),
        "convention": "m-descending",
    }
    with open(out / _FAMILY_FILE, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
    return files + [_FAMILY_FILE]


def _load_json(path: Path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise _LoadError(f"cannot read {path.name}: {exc}")
    except json.JSONDecodeError as exc:
        raise _LoadError(f"malformed JSON in {path.name}: {exc}")
    if not isinstance(data, dict):
        raise _LoadError(f"{path.name} does not hold a JSON object")
    return data


def _load_matrix(path: Path) -> np.ndarray:
    try:
        return matrix_from_json(_load_json(path))
    except ValueError as exc:
        raise _LoadError(f"{path.name}: {exc}")


def _read_family(src: Path) -> MubFamily:
    manifest = _load_json(src / _FAMILY_FILE)
    try:
        dim = int(manifest["dim"])
        labels = [str(label) for label in manifest["bases"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise _LoadError(f"malformed family manifest: {exc!r}")
    bases = []
    for label in labels:
        matrix = _load_matrix(src / _basis_filename(label))
        if matrix.shape != (dim, dim):
            raise _LoadError(
                f"basis {label} has shape {matrix.shape}, expected ({dim}, {dim})")
        bases.append(Basis(dim, matrix, label))
    try:
        return MubFamily(dim, tuple(bases))
    except ValueError as exc:
        raise _LoadError(str(exc))


def _operator_filename(label: str, k: int) -> str:
    return f"op_{label}_k{k}.json"


def _write_operator_set(out: Path, opset: OperatorSet) -> list[str]:
    out.mkdir(parents=True, exist_ok=True)
    files = []
    classes = []
    for cls in opset.classes:
        names = []
        for k, op in enumerate(cls.operators, start=1):
            name = _operator_filename(cls.basis_label, k)
            with open(out / name, "w", encoding="utf-8") as fh:
                json.dump(matrix_to_json(op), fh, indent=2)
            names.append(name)
        files.extend(names)
        classes.append({"basis_label": cls.basis_label, "operators": names})
    manifest = {"dim": opset.dim, "classes": classes}
    with open(out / _OPERATORS_FILE, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
    return files + [_OPERATORS_FILE]


def _read_operator_set(src: Path, family: MubFamily) -> OperatorSet:
    from .classes import CommutingClass

    manifest = _load_json(src / _OPERATORS_FILE)
    try:
        dim = int(manifest["dim"])
        entries = list(manifest["classes"])
    except (KeyError, TypeError, ValueError) as exc:
        raise _LoadError(f"malformed operator manifest: {exc!r}")
    if dim != family.dim:
        raise _LoadError(
            f"operator manifest dimension {dim} does not match family dimension"
            f" {family.dim}")
    by_label = {basis.label: basis for basis in family.bases}
    classes = []
    for entry in entries:
        try:
            label = str(entry["basis_label"])
            names = [str(n) for n in entry["operators"]]
        except (KeyError, TypeError) as exc:
            raise _LoadError(f"malformed operator manifest entry: {exc!r}")
        if label not in by_label:
            raise _LoadError(f"operator class references unknown basis {label}")
        ops = []
        for name in names:
            matrix = _load_matrix(src / name)
            if matrix.shape != (dim, dim):
                raise _LoadError(
                    f"{name} has shape {matrix.shape}, expected ({dim}, {dim})")
            ops.append(matrix)
        basis = by_label[label]
        projectors = tuple(basis.projector(i) for i in range(dim))
        classes.append(CommutingClass(label, tuple(ops), projectors))
    return OperatorSet(dim, tuple(classes), family, coefficient_vectors(dim))


# ---------------------------------------------------------------------------
# symbolic table formatting


def _radical(mag: float) -> str | None:
    """Render a positive real as p/q, p/sqrt(q), sqrt(p)/q or sqrt(p/q)."""
    square = Fraction(mag * mag).limit_denominator(100000)
    if abs(float(square) - mag * mag) > 1e-9:
        return None
    num, den = square.numerator, square.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    num_exact, den_exact = rn * rn == num, rd * rd == den
    if num_exact and den_exact:
        return str(rn) if rd == 1 else f"{rn}/{rd}"
    if den_exact:
        return f"sqrt({num})" if rd == 1 else f"sqrt({num})/{rd}"
    if num_exact:
        return f"{rn}/sqrt({den})"
    return f"sqrt({num}/{den})"


def _phase_candidates(dim: int) -> list[tuple[complex, str]]:
    candidates = [(1 + 0j, ""), (1j, "i")]
    if dim not in (2, 4):
        # powers of w = exp(2*pi*i/d); for d = 2, 4 these are just +-1, +-i
        for p in range(1, dim):
            name = "w" if p == 1 else f"w^{p}"
            candidates.append((root_of_unity(dim, p), name))
        for p in range(1, dim):
            name = "i*w" if p == 1 else f"i*w^{p}"
            candidates.append((1j * root_of_unity(dim, p), name))
    return candidates


def _format_entry(value: complex, dim: int) -> str:
    if abs(value) < 1e-12:
        return "0"
    for phase, name in _phase_candidates(dim):
        reduced = value / phase
        if abs(reduced.imag) > 1e-9:
            continue
        sign = "-" if reduced.real < 0 else ""
        mag = _radical(abs(reduced.real))
        if mag is None:
            continue
        if not name:
            return f"{sign}{mag}"
        if mag == "1":
            return f"{sign}{name}"
        if mag.startswith("1/"):
            return f"{sign}{name}{mag[1:]}"
        return f"{sign}{mag}*{name}"
    return f"({value.real:+.6f}{value.imag:+.6f}i)"


def _format_matrix(matrix: np.ndarray, dim: int) -> list[str]:
    cells = [[_format_entry(v, dim) for v in row] for row in np.asarray(matrix)]
    width = max(len(c) for row in cells for c in row)
    return ["  ".join(c.rjust(width) for c in row) for row in cells]


def _print_tables(stream) -> None:
    for dim in BUILTIN_DIMS:
        family = builtin_family(dim)
        opset = build_set(family)
        stream.write(f"== dimension {dim} ==\n")
        if dim > 2:
            stream.write(f"(w = exp(2*pi*i/{dim}))\n")
        for basis in family.bases:
            stream.write(f"\nbasis {basis.label} (columns are basis vectors):\n")
            for line in _format_matrix(basis.matrix, dim):
                stream.write(f"  {line}\n")
        prefix = _TABLE_NAMES[dim]
        for k, op in enumerate(opset.operators, start=1):
            stream.write(f"\n{prefix}_{k}:\n")
            for line in _format_matrix(op, dim):
                stream.write(f"  {line}\n")
        stream.write("\n")


# ---------------------------------------------------------------------------
# subcommands


def _family_for(dim: int, source: str) -> MubFamily:
    if source == "builtin":
        return builtin_family(dim)
    return odd_prime_family(dim)


def _auto_family(dim: int) -> MubFamily:
    from .mub import _is_odd_prime, _refuse

    if dim in BUILTIN_DIMS:
        return builtin_family(dim)
    if _is_odd_prime(dim):
        return odd_prime_family(dim)
    raise _refuse(
        dim, "operator construction needs a complete MUB family; available"
        f" sources cover dimensions {BUILTIN_DIMS} and odd primes")


def cmd_mub(args: argparse.Namespace) -> int:
    tol = _resolve_tol(args)
    family = _family_for(args.dim, args.source)
    report = check_family(family, tol)
    payload = {
        "command": "mub",
        "dim": family.dim,
        "source": args.source,
        "bases": list(family.labels),
        "tolerance": tol,
        "checks": report.to_dicts(),
        "pass": report.passed,
    }
    if args.out is not None:
        files = _write_family(Path(args.out), family)
        payload["out"] = str(args.out)
        payload["files"] = files
    _emit(payload)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_operators(args: argparse.Namespace) -> int:
    tol = _resolve_tol(args)
    family = _auto_family(args.dim)
    opset = build_set(family, tol)
    report = verify_set(opset, tol)
    payload = {
        "command": "operators",
        "dim": opset.dim,
        "operator_count": len(opset),
        "classes": [cls.basis_label for cls in opset.classes],
        "tolerance": tol,
        "checks": report.to_dicts(),
        "pass": report.passed,
    }
    if args.out is not None:
        out = Path(args.out)
        files = _write_operator_set(out, opset)
        files += _write_family(out, family)
        with open(out / _REPORT_FILE, "w", encoding="utf-8") as fh:
            json.dump(report.to_dicts(), fh, indent=2)
        files.append(_REPORT_FILE)
        payload["out"] = str(args.out)
        payload["files"] = files
    _emit(payload)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_verify(args: argparse.Namespace) -> int:
    tol = _resolve_tol(args)
    src = Path(getattr(args, "in"))
    family = _read_family(src)
    results = list(check_family(family, tol))
    if (src / _OPERATORS_FILE).exists():
        opset = _read_operator_set(src, family)
        results += list(verify_set(opset, tol))
    passed = all(r.passed for r in results)
    _emit({
        "command": "verify",
        "dim": family.dim,
        "tolerance": tol,
        "checks": [r.to_dict() for r in results],
        "pass": passed,
    })
    return EXIT_PASS if passed else EXIT_FAIL


def _tensor_filename(k: int, q: int) -> str:
    tag = f"q{q}" if q >= 0 else f"qm{-q}"
    return f"tensor_k{k}_{tag}.json"


def cmd_tensors(args: argparse.Namespace) -> int:
    if args.two_j < 1:
        raise ValueError("--two-j must be a positive integer")
    j = args.two_j / 2
    ranks = range(args.two_j + 1) if args.k is None else [args.k]
    entries = []
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for k in ranks:
        components = range(-k, k + 1) if args.q is None else [args.q]
        for q in components:
            matrix = spherical_tensor(j, k, q)
            name = _tensor_filename(k, q)
            with open(out / name, "w", encoding="utf-8") as fh:
                json.dump(matrix_to_json(matrix), fh, indent=2)
            entries.append({"k": k, "q": q, "file": name})
    manifest = {"two_j": args.two_j, "entries": entries}
    with open(out / "tensors.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
    _emit({
        "command": "tensors",
        "two_j": args.two_j,
        "out": str(args.out),
        "files": [e["file"] for e in entries] + ["tensors.json"],
    })
    return EXIT_PASS


def cmd_tomo(args: argparse.Namespace) -> int:
    if args.trials < 0:
        raise ValueError("--trials must be nonnegative")
    if args.shots == "exact":
        shots = None
    else:
        try:
            shots = int(args.shots)
        except ValueError:
            raise ValueError(f"--shots must be an integer or 'exact': {args.shots!r}")
        if shots < 1:
            raise ValueError("--shots must be positive")
    family = _auto_family(args.dim)
    opset = build_set(family)
    results = []
    for trial in range(args.trials):
        rho = random_density(args.dim, _derive_seed(args.seed, trial, 0))
        record = probabilities(rho, family)
        if shots is not None:
            record = sample_shots(record, shots, _derive_seed(args.seed, trial, 1))
        report = reconstruct_from_record(
            record, opset, project=args.project, reference=rho)
        entry = report.to_dict()
        entry["trial"] = trial
        del entry["fidelity"]  # reference states are mixed
        results.append(entry)
    distances = [r["trace_distance"] for r in results]
    aggregate = None
    if distances:
        aggregate = {
            "count": len(distances),
            "mean_trace_distance": float(np.mean(distances)),
            "median_trace_distance": float(np.median(distances)),
            "max_trace_distance": float(np.max(distances)),
        }
    _emit({
        "command": "tomo",
        "dim": args.dim,
        "seed": args.seed,
        "shots": shots,
        "trials": args.trials,
        "projected": bool(args.project),
        "results": results,
        "aggregate": aggregate,
    })
    return EXIT_PASS


def cmd_tables(args: argparse.Namespace) -> int:
    _print_tables(sys.stdout)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mubkit",
        description="mutually unbiased bases and commuting operator classes")
    parser.add_argument(
        "--tol", type=float, default=None,
        help="verification tolerance (default: MUBKIT_TOL env var or 1e-10)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_mub = sub.add_parser("mub", help="build and verify a MUB family")
    p_mub.add_argument("--dim", type=int, required=True)
    p_mub.add_argument("--source", choices=("builtin", "generated"),
                       default="builtin",
                       help="built-in tables (d = 2..5) or the quadratic-phase"
                            " construction (odd prime d)")
    p_mub.add_argument("--out", default=None, help="directory for JSON export")
    p_mub.set_defaults(func=cmd_mub)

    p_ops = sub.add_parser("operators", help="build the commuting-class operator set")
    p_ops.add_argument("--dim", type=int, required=True)
    p_ops.add_argument("--out", default=None, help="directory for JSON export")
    p_ops.set_defaults(func=cmd_operators)

    p_ver = sub.add_parser("verify", help="verify exported JSON files")
    p_ver.add_argument("--in", required=True, help="directory holding the export")
    p_ver.set_defaults(func=cmd_verify)

    p_ten = sub.add_parser("tensors", help="export spherical tensor matrices")
    p_ten.add_argument("--two-j", type=int, required=True, dest="two_j",
                       help="twice the spin (integer)")
    p_ten.add_argument("--k", type=int, default=None, help="single rank to export")
    p_ten.add_argument("--q", type=int, default=None,
                       help="single component to export")
    p_ten.add_argument("--out", required=True, help="directory for JSON export")
    p_ten.set_defaults(func=cmd_tensors)

    p_tomo = sub.add_parser("tomo", help="reconstruction trials on random states")
    p_tomo.add_argument("--dim", type=int, required=True)
    p_tomo.add_argument("--seed", type=int, default=0)
    p_tomo.add_argument("--shots", default="exact",
                        help="shots per basis, or 'exact' for noiseless records")
    p_tomo.add_argument("--trials", type=int, default=10)
    p_tomo.add_argument("--project", action="store_true",
                        help="project estimates onto the physical state space")
    p_tomo.set_defaults(func=cmd_tomo)

    p_tab = sub.add_parser("tables", help="print built-in bases and operators")
    p_tab.set_defaults(func=cmd_tables)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedDimensionError as exc:
        _emit_error("unsupported", str(exc), dim=exc.dim)
        return EXIT_UNSUPPORTED
    except _LoadError as exc:
        _emit_error("io", str(exc))
        return EXIT_IO
    except OSError as exc:
        _emit_error("io", str(exc))
        return EXIT_IO
    except ValueError as exc:
        _emit_error("invalid", str(exc))
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    raise SystemExit(main())
