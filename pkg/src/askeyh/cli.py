"""Command-line interface.

Exit status: 0 on success, 1 when ``verify`` finds a failing invariant, 2 on
configuration errors (bad parameter file or values, backend mismatch,
coinciding eigenvalues).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .class_forms import ClosedFormRecurrence, ClosedFormUnavailable, closed_recurrence
from .core import HCollisionError, OperatorSpec, build_u, extract_recurrence, l_build
from .moments import discrete_weights, generalized_moments, standard_moments
from .numerics import Backend, ScalarParseError, ToleranceContext, field_for, format_scalar
from .presets import UnknownFamilyError, get_family, instantiate, list_families
from .sequences import (
    ClassSpec,
    InvalidClassError,
    SequenceParams,
    params_from_mapping,
    params_to_mapping,
    validate_spectrum,
)
from .suite import run_suite

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    N: int = 10
    param_file: str | None = None
    preset: str | None = None
    values: dict = field(default_factory=dict)
    backend: Backend = Backend.EXACT
    epsilon: float = 1e-9
    fmt: str = "json"
    out: str | None = None
    J: int | None = None
    preset_action: str | None = None
    preset_name: str | None = None


def parse_values(text: str | None) -> dict:
    """'k=v,k2=v2' -> {'k': 'v', 'k2': 'v2'} (values stay text)."""
    out: dict = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, val = item.partition("=")
        if not sep or not key.strip() or not val.strip():
            raise ConfigError(f"malformed value {item!r}; expected name=value")
        out[key.strip()] = val.strip()
    return out


def _load(cfg: RunConfig, ctx: ToleranceContext) -> tuple[ClassSpec, SequenceParams, int, list]:
    """(class, params, working depth, notes) with the spectrum checked to depth N + 1."""
    f = field_for(cfg.backend)
    notes: list = []
    finite = False
    if cfg.param_file and cfg.preset:
        raise ConfigError("give either --param-file or --preset, not both")
    if cfg.param_file:
        try:
            data = json.loads(Path(cfg.param_file).read_text())
        except FileNotFoundError:
            raise ConfigError(f"parameter file not found: {cfg.param_file}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"parameter file is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("parameter file must hold a JSON object")
        cls, params = params_from_mapping(data, f)
    elif cfg.preset:
        values = dict(cfg.values)
        scale = values.pop("scale", 1)
        a0 = values.pop("a0", 0)
        desc = get_family(cfg.preset)
        finite = desc.finite
        if desc.complex_valued and f.exact:
            raise ConfigError(f"{desc.name} has complex parameters; rerun with --backend float")
        cls, params = instantiate(cfg.preset, values, scale=scale, a0=a0, field=f)
    else:
        raise ConfigError("give --param-file or --preset")

    N = cfg.N
    report = validate_spectrum(cls, params, N + 1, ctx)
    if not report.ok:
        j, k = report.first_collision()
        capped = k - 2
        if not finite or capped < 1:
            raise HCollisionError(j, k)
        notes.append(f"finite spectrum: h_{j} == h_{k}; depth capped at N={capped}")
        N = capped
    elif report.status.value == "DISAGREE":
        notes.append(f"algebraic distinctness condition fails at {report.algebraic_failures} "
                     "although the eigenvalues are distinct up to the working depth")
    return cls, params, N, notes


def _rows_csv(header: list, rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _fmt(v) -> str:
    return "" if v is None else format_scalar(v)


def _emit(cfg: RunConfig, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2)


def cmd_build(cfg, spec, N, notes) -> int:
    C, U = build_u(spec, N)
    extraction = extract_recurrence(l_build(spec, N), spec.ctx)
    if cfg.fmt == "csv":
        rows = [[n, k, _fmt(C[n, k]), _fmt(U[n, k])] for n in range(N + 1) for k in range(n + 1)]
        _emit(cfg, _rows_csv(["n", "k", "c", "u"], rows))
    else:
        _emit(cfg, _json({
            "N": N,
            "status": extraction.status.value,
            "tridiagonal": extraction.tridiagonal,
            "degenerate_at": extraction.degenerate_at,
            "C": [[_fmt(v) for v in r] for r in C.rows()],
            "u": [[_fmt(v) for v in r] for r in U.rows()],
            "notes": notes,
        }))
    if extraction.degenerate_at:
        print(f"status DEGENERATE: alpha vanishes at n={extraction.degenerate_at}", file=sys.stderr)
    return EXIT_OK


def recurrence_rows(spec: OperatorSpec, N: int) -> list[dict]:
    """Closed-form and matrix recurrence coefficients for n = 0..N."""
    rec = extract_recurrence(l_build(spec, N), spec.ctx).recurrence
    cf = ClosedFormRecurrence(spec.cls, spec.params, spec.ctx) if spec.cls is not None else None
    rows = []
    for n in range(N + 1):
        alpha = beta = sigma = residual = None
        if cf is not None:
            try:
                alpha, sigma, beta = closed_recurrence(cf, n)
            except ClosedFormUnavailable:
                pass
        if sigma is not None:
            diffs = [abs(sigma - rec.sigma[n])]
            if alpha is not None:
                diffs.append(abs(alpha - rec.alpha[n]))
            residual = spec.field(max(diffs))
        rows.append({"n": n, "alpha": alpha, "beta": beta, "sigma": sigma,
                     "alpha_matrix": rec.alpha[n], "beta_matrix": rec.beta[n], "residual": residual})
    return rows


def cmd_recurrence(cfg, spec, N, notes) -> int:
    rows = recurrence_rows(spec, N)
    keys = ["n", "alpha", "beta", "sigma", "alpha_matrix", "beta_matrix", "residual"]
    if cfg.fmt == "csv":
        _emit(cfg, _rows_csv(keys, [[r["n"]] + [_fmt(r[k]) for k in keys[1:]] for r in rows]))
    else:
        _emit(cfg, _json({"N": N, "rows": [{"n": r["n"], **{k: None if r[k] is None else _fmt(r[k])
                                                          for k in keys[1:]}} for r in rows],
                          "notes": notes}))
    return EXIT_OK


def cmd_moments(cfg, spec, N, notes) -> int:
    m = generalized_moments(spec, N)
    mu = standard_moments(m, spec.x, N, spec.field)
    if cfg.fmt == "csv":
        _emit(cfg, _rows_csv(["n", "m", "mu"], [[n, _fmt(m[n]), _fmt(mu[n])] for n in range(N + 1)]))
    else:
        _emit(cfg, _json({"N": N, "m": [_fmt(v) for v in m], "mu": [_fmt(v) for v in mu], "notes": notes}))
    return EXIT_OK


def cmd_weights(cfg, spec, N, notes) -> int:
    J = cfg.J if cfg.J is not None else N
    m = generalized_moments(spec, J)
    wt = discrete_weights(spec, m, J)
    if cfg.fmt == "csv":
        rows = [[k, _fmt(spec.x(k)), _fmt(wt.r[k]), repr(wt.tails[k])] for k in range(J + 1)]
        _emit(cfg, _rows_csv(["k", "x", "r", "last_term"], rows))
        print(f"convergence {wt.convergence.value}; tail estimate {wt.tail_estimate!r}; "
              f"system residual {wt.system_residual!r}", file=sys.stderr)
    else:
        _emit(cfg, _json({
            "J": J,
            "x": [_fmt(spec.x(k)) for k in range(J + 1)],
            "r": [_fmt(v) for v in wt.r],
            "last_term": wt.tails,
            "tail_estimate": wt.tail_estimate,
            "convergence": wt.convergence.value,
            "system_residual": wt.system_residual,
            "notes": notes + wt.notes,
        }))
    return EXIT_OK


def cmd_verify(cfg, spec, N, notes) -> int:
    result = run_suite(spec, N, spec.ctx)
    result.notes = notes + result.notes
    if cfg.fmt == "csv":
        rows = [[r.check, r.passed, r.evaluated, _fmt(r.max_residual), len(r.failures)] for r in result.reports]
        _emit(cfg, _rows_csv(["check", "passed", "evaluated", "max_residual", "failures"], rows))
    else:
        _emit(cfg, _json(result.to_dict()))
    if not result.passed:
        failed = ", ".join(r.check for r in result.reports if not r.passed)
        print(f"verification failed: {failed}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_preset(cfg) -> int:
    if cfg.preset_action == "list":
        fams = list_families()
        if cfg.fmt == "csv":
            rows = [[d.name, d.tag.value, " ".join(d.slots + (("q",) if d.needs_q else ())),
                     d.scale_slot, d.complex_valued, d.finite] for d in fams]
            _emit(cfg, _rows_csv(["name", "class", "slots", "scale_slot", "complex", "finite"], rows))
        else:
            _emit(cfg, _json([{"name": d.name, "class": d.tag.value,
                               "slots": list(d.slots) + (["q"] if d.needs_q else []),
                               "scale_slot": d.scale_slot, "complex": d.complex_valued,
                               "finite": d.finite} for d in fams]))
        return EXIT_OK
    if not cfg.preset_name:
        raise ConfigError("preset show needs a family name")
    desc = get_family(cfg.preset_name)
    values = dict(cfg.values)
    scale = values.pop("scale", 1)
    a0 = values.pop("a0", 0)
    f = field_for(cfg.backend)
    if desc.complex_valued and f.exact:
        raise ConfigError(f"{desc.name} has complex parameters; rerun with --backend float")
    cls, params = instantiate(desc.name, values, scale=scale, a0=a0, field=f)
    _emit(cfg, _json(params_to_mapping(cls, params)))
    return EXIT_OK


_COMMANDS = {
    "build": cmd_build,
    "recurrence": cmd_recurrence,
    "moments": cmd_moments,
    "weights": cmd_weights,
    "verify": cmd_verify,
}


def run(cfg: RunConfig) -> int:
    if cfg.N < 1:
        raise ConfigError("--N must be at least 1")
    if cfg.command == "preset":
        return cmd_preset(cfg)
    ctx = ToleranceContext(cfg.epsilon)
    cls, params, N, notes = _load(cfg, ctx)
    for note in notes:
        print(note, file=sys.stderr)
    spec = OperatorSpec.from_params(cls, params, ctx)
    return _COMMANDS[cfg.command](cfg, spec, N, notes)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--param-file", help="JSON parameter file")
    common.add_argument("--preset", help="named family (see 'preset list')")
    common.add_argument("--values", help="comma-separated name=value pairs; also q, scale, a0")
    common.add_argument("--N", type=int, default=10, help="depth (default 10)")
    common.add_argument("--backend", choices=[b.value for b in Backend], default=Backend.EXACT.value)
    common.add_argument("--epsilon", type=float, default=1e-9,
                        help="relative zero tolerance for the float backend")
    common.add_argument("--format", dest="fmt", choices=["json", "csv"], default="json")
    common.add_argument("--out", help="write to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="askeyh", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="C rows and monomial coefficients of u_n")
    sub.add_parser("recurrence", parents=[common], help="alpha, beta, sigma per n")
    sub.add_parser("moments", parents=[common], help="generalized and standard moments")
    w = sub.add_parser("weights", parents=[common], help="truncated discrete weights")
    w.add_argument("--J", type=int, help="truncation index (default N)")
    sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p = sub.add_parser("preset", parents=[common], help="catalog of named families")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            N=args.N,
            param_file=args.param_file,
            preset=args.preset,
            values=parse_values(args.values),
            backend=Backend(args.backend),
            epsilon=args.epsilon,
            fmt=args.fmt,
            out=args.out,
            J=getattr(args, "J", None),
            preset_action=getattr(args, "action", None),
            preset_name=getattr(args, "name", None),
        )
        return run(cfg)
    except HCollisionError as exc:
        j, k = exc.pair
        print(f"error: eigenvalues collide: h_{j} == h_{k}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, ScalarParseError, UnknownFamilyError, InvalidClassError, ValueError,
            TypeError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
