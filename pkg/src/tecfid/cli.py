"""Command line interface.

Subcommands: validate, tecost, fmin, verify, sweep-depolarizing,
random-suite, teur, export.  Channels come either from a JSON file
(``--channel-file``) or an inline family spec (``--family``), e.g.::

    depolarizing:n=3,q=0.2   dephasing:n=2   identity:n=2
    random:n=3,d=2,seed=7    xrot:omega=1.5707963267948966

Exit status: 0 success / verification passed, 1 verification failed,
2 malformed input.  Report commands (sweep-depolarizing, random-suite)
render a PNG figure next to the CSV written via ``--out`` unless
``--no-fig`` is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__, channels, fidelity, tecost
from .errors import ChannelParseError, TecfidError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2

_CONFIG_KEYS = {
    "format": str,
    "seed": int,
    "restarts": int,
    "iters": int,
    "tol": float,
    "hbar": float,
}


@dataclass(frozen=True)
class VerifyReport:
    """Both solvers on one channel plus the clamped-cosine identity check.
    ``passed`` compares ``|fmin - max(cos_cost, 0)|`` against ``tolerance``;
    ``lower_bound_ok`` records the one-sided bound ``fmin >= cos_cost - 1e-7``."""

    channel: str
    fmin_value: float
    cos_cost: float
    clamped_cos: float
    abs_gap: float
    tolerance: float
    passed: bool
    lower_bound_ok: bool
    fmin_converged: bool
    cost_converged: bool
    fmin_seconds: float
    cost_seconds: float


def verify_channel(
    channel: channels.KrausChannel,
    descriptor: str = "channel",
    fid_options: fidelity.SolverOptions | None = None,
    cost_options: tecost.CostOptions | None = None,
    tol: float = 1e-6,
) -> VerifyReport:
    """Run both solvers independently and compare the results."""
    t0 = time.perf_counter()
    fres = fidelity.fmin_descent(channel, fid_options)
    t1 = time.perf_counter()
    cres = tecost.channel_cost(channel, cost_options)
    t2 = time.perf_counter()
    clamped = max(cres.cos_value, 0.0)
    gap = abs(fres.value - clamped)
    return VerifyReport(
        channel=descriptor,
        fmin_value=fres.value,
        cos_cost=cres.cos_value,
        clamped_cos=clamped,
        abs_gap=gap,
        tolerance=tol,
        passed=bool(gap <= tol),
        lower_bound_ok=bool(fres.value >= cres.cos_value - 1e-7),
        fmin_converged=fres.converged,
        cost_converged=cres.converged,
        fmin_seconds=t1 - t0,
        cost_seconds=t2 - t1,
    )


# ---------------------------------------------------------------------------
# Channel sources
# ---------------------------------------------------------------------------


def _family_params(rest: str, spec: str) -> dict[str, str]:
    params: dict[str, str] = {}
    if not rest:
        return params
    for part in rest.split(","):
        key, eq, val = part.partition("=")
        if not eq or not key.strip():
            raise ChannelParseError(f"malformed family spec {spec!r}: bad item {part!r}")
        params[key.strip()] = val.strip()
    return params


def _param_int(params: dict[str, str], key: str, spec: str, default=None) -> int:
    if key not in params:
        if default is not None:
            return default
        raise ChannelParseError(f"family spec {spec!r} is missing {key!r}")
    try:
        return int(params[key])
    except ValueError as exc:
        raise ChannelParseError(f"family spec {spec!r}: {key} must be an integer") from exc


def _param_float(params: dict[str, str], key: str, spec: str) -> float:
    if key not in params:
        raise ChannelParseError(f"family spec {spec!r} is missing {key!r}")
    try:
        return float(params[key])
    except ValueError as exc:
        raise ChannelParseError(f"family spec {spec!r}: {key} must be a number") from exc


def parse_family(spec: str) -> tuple[channels.KrausChannel, str]:
    """Build a channel from an inline family spec; returns (channel, canonical
    descriptor)."""
    name, _, rest = spec.partition(":")
    name = name.strip().lower()
    params = _family_params(rest, spec)
    if name == "identity":
        n = _param_int(params, "n", spec)
        return channels.identity_channel(n), f"identity:n={n}"
    if name == "dephasing":
        n = _param_int(params, "n", spec)
        return channels.dephasing(n), f"dephasing:n={n}"
    if name == "depolarizing":
        n = _param_int(params, "n", spec)
        q = _param_float(params, "q", spec)
        return channels.depolarizing(n, q), f"depolarizing:n={n},q={q:g}"
    if name == "random":
        n = _param_int(params, "n", spec)
        d = _param_int(params, "d", spec)
        seed = _param_int(params, "seed", spec, default=0)
        return channels.random_channel(n, d, seed), f"random:n={n},d={d},seed={seed}"
    if name == "xrot":
        omega = _param_float(params, "omega", spec)
        u = np.array(
            [
                [np.cos(omega), -1j * np.sin(omega)],
                [-1j * np.sin(omega), np.cos(omega)],
            ],
            dtype=np.complex128,
        )
        return channels.unitary_channel(u), f"xrot:omega={omega:g}"
    raise ChannelParseError(f"unknown channel family {name!r}")


def _load_channel(args) -> tuple[channels.KrausChannel, str]:
    if args.channel_file:
        ch = channels.read_channel_file(
            args.channel_file,
            completeness_tol=1e-6,
            allow_incomplete=getattr(args, "allow_incomplete", False),
        )
        return ch, str(args.channel_file)
    return parse_family(args.family)


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _g17(x) -> str:
    return f"{float(x):.17g}"


def _pairs(v: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v).reshape(-1)]


def _cvec_human(v: np.ndarray) -> str:
    parts = [f"{z.real:.10g}{z.imag:+.10g}j" for z in np.asarray(v).reshape(-1)]
    return "[" + ", ".join(parts) + "]"


def _cvec_csv(v) -> str:
    if v is None:
        return ""
    return ";".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in np.asarray(v).reshape(-1))


def _human_block(items: list[tuple[str, str]]) -> str:
    width = max(len(k) for k, _ in items)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in items)


def _csv_single(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(payload.keys())
    writer.writerow(payload.values())
    return buf.getvalue()


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _wrap_json(command: str, descriptor: str | None, seed: int, result: dict) -> str:
    return json.dumps(
        {"command": command, "channel": descriptor, "seed": seed, "result": result},
        indent=2,
    )


def _fidelity_payload(res: fidelity.FidelityResult) -> dict:
    return {
        "value": res.value,
        "minimizer": _pairs(res.minimizer),
        "optimal_w": None if res.optimal_w is None else _pairs(res.optimal_w),
        "iterations": res.iterations,
        "restarts_used": res.restarts_used,
        "converged": res.converged,
        "gradient_norm": res.gradient_norm,
        "possibly_zero": res.possibly_zero,
    }


def _tecost_payload(res: tecost.TECostResult) -> dict:
    return {
        "cos_value": res.cos_value,
        "angle": res.angle,
        "optimal_v": _pairs(res.optimal_v),
        "witness": _pairs(res.witness),
        "converged": res.converged,
        "regime": res.regime,
        "certificate_gap": res.certificate_gap,
    }


def _verify_payload(rep: VerifyReport) -> dict:
    return {
        "channel": rep.channel,
        "fmin_value": rep.fmin_value,
        "cos_cost": rep.cos_cost,
        "clamped_cos": rep.clamped_cos,
        "abs_gap": rep.abs_gap,
        "tolerance": rep.tolerance,
        "passed": rep.passed,
        "lower_bound_ok": rep.lower_bound_ok,
        "fmin_converged": rep.fmin_converged,
        "cost_converged": rep.cost_converged,
        "fmin_seconds": rep.fmin_seconds,
        "cost_seconds": rep.cost_seconds,
    }


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _fid_options(args) -> fidelity.SolverOptions:
    return fidelity.SolverOptions(
        restarts=args.restarts if args.restarts is not None else 32,
        max_iters=args.iters if args.iters is not None else 10_000,
        grad_tol=args.tol if getattr(args, "_tol_is_grad", False) and args.tol is not None else 1e-10,
        seed=args.seed,
    )


def _cost_options(args) -> tecost.CostOptions:
    return tecost.CostOptions(
        iters=args.iters if args.iters is not None else 20_000,
        restarts=args.restarts if args.restarts is not None else 64,
        tol=args.tol if getattr(args, "_tol_is_cert", False) and args.tol is not None else 1e-9,
        seed=args.seed,
        hbar=args.hbar,
    )


def cmd_validate(args) -> int:
    ch = channels.read_channel_file(args.path, allow_incomplete=True)
    tol = args.tol if args.tol is not None else 1e-6
    residual = ch.completeness_defect()
    choi_min = float(np.linalg.eigvalsh(ch.choi())[0])
    valid = residual <= tol and choi_min >= -1e-9
    payload = {
        "n": ch.n,
        "d": ch.d,
        "completeness_residual": residual,
        "choi_min_eigenvalue": choi_min,
        "tolerance": tol,
        "valid": valid,
    }
    if args.format == "json":
        _emit(_wrap_json("validate", str(args.path), args.seed, payload), args.out)
    elif args.format == "csv":
        payload_s = {k: (_g17(v) if isinstance(v, float) else v) for k, v in payload.items()}
        _emit(_csv_single(payload_s), args.out)
    else:
        items = [(k, _g17(v) if isinstance(v, float) else str(v)) for k, v in payload.items()]
        _emit(_human_block([("file", str(args.path))] + items), args.out)
    return EXIT_OK if valid else EXIT_FAIL


def cmd_tecost(args) -> int:
    args._tol_is_cert = True
    ch, desc = _load_channel(args)
    res = tecost.channel_cost(ch, _cost_options(args))
    payload = _tecost_payload(res)
    if args.format == "json":
        _emit(_wrap_json("tecost", desc, args.seed, payload), args.out)
    elif args.format == "csv":
        row = dict(payload)
        row["optimal_v"] = _cvec_csv(res.optimal_v)
        row["witness"] = _cvec_csv(res.witness)
        row = {k: (_g17(v) if isinstance(v, float) else v) for k, v in row.items()}
        _emit(_csv_single({"channel": desc, "seed": args.seed, **row}), args.out)
    else:
        items = [
            ("channel", desc),
            ("seed", str(args.seed)),
            ("cos_value", _g17(res.cos_value)),
            ("angle", _g17(res.angle)),
            ("optimal_v", _cvec_human(res.optimal_v)),
            ("witness", _cvec_human(res.witness)),
            ("converged", str(res.converged)),
            ("regime", res.regime),
            ("certificate_gap", _g17(res.certificate_gap)),
        ]
        _emit(_human_block(items), args.out)
    return EXIT_OK


def cmd_fmin(args) -> int:
    args._tol_is_grad = True
    ch, desc = _load_channel(args)
    res = fidelity.fmin_descent(ch, _fid_options(args))
    payload = _fidelity_payload(res)
    if args.format == "json":
        _emit(_wrap_json("fmin", desc, args.seed, payload), args.out)
    elif args.format == "csv":
        row = dict(payload)
        row["minimizer"] = _cvec_csv(res.minimizer)
        row["optimal_w"] = _cvec_csv(res.optimal_w)
        row = {k: (_g17(v) if isinstance(v, float) else v) for k, v in row.items()}
        _emit(_csv_single({"channel": desc, "seed": args.seed, **row}), args.out)
    else:
        items = [
            ("channel", desc),
            ("seed", str(args.seed)),
            ("value", _g17(res.value)),
            ("minimizer", _cvec_human(res.minimizer)),
            ("optimal_w", "undefined" if res.optimal_w is None else _cvec_human(res.optimal_w)),
            ("iterations", str(res.iterations)),
            ("restarts_used", str(res.restarts_used)),
            ("converged", str(res.converged)),
            ("gradient_norm", _g17(res.gradient_norm)),
            ("possibly_zero", str(res.possibly_zero)),
        ]
        _emit(_human_block(items), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    ch, desc = _load_channel(args)
    tol = args.tol if args.tol is not None else 1e-6
    rep = verify_channel(ch, desc, _fid_options(args), _cost_options(args), tol)
    payload = _verify_payload(rep)
    if args.format == "json":
        _emit(_wrap_json("verify", desc, args.seed, payload), args.out)
    elif args.format == "csv":
        row = {k: (_g17(v) if isinstance(v, float) else v) for k, v in payload.items()}
        _emit(_csv_single({"seed": args.seed, **row}), args.out)
    else:
        items = [("seed", str(args.seed))] + [
            (k, _g17(v) if isinstance(v, float) else str(v)) for k, v in payload.items()
        ]
        status = "PASS" if rep.passed else "FAIL"
        _emit(_human_block(items) + f"\nverdict  {status}", args.out)
    return EXIT_OK if rep.passed else EXIT_FAIL


_SWEEP_COLUMNS = [
    "q",
    "fmin_solver",
    "fmin_closed",
    "cost_solver",
    "cost_closed",
    "no_entanglement_fidelity",
    "fmin_gap",
    "cost_gap",
]


def sweep_depolarizing_rows(
    n: int,
    qs,
    fid_options: fidelity.SolverOptions | None = None,
    cost_options: tecost.CostOptions | None = None,
    seed: int = 0,
) -> list[dict]:
    """Solver-vs-closed-form table over a grid of noise parameters.  The
    no-ancilla column documents that the fidelity without entanglement stays
    strictly above the worst case except at q = 1."""
    rows = []
    ss = np.random.SeedSequence(seed)
    for q, child in zip(qs, ss.spawn(len(qs))):
        sub = child.spawn(2)
        ch = channels.depolarizing(n, q)
        fopts = fid_options or fidelity.SolverOptions(seed=sub[0])
        copts = cost_options or tecost.CostOptions(seed=sub[1])
        fres = fidelity.fmin_descent(ch, fopts)
        cres = tecost.channel_cost(ch, copts)
        fmin_closed = fidelity.depolarizing_fmin_closed_form(n, q)
        cost_closed = tecost.depolarizing_cost_closed_form(n, q)
        rows.append(
            {
                "q": float(q),
                "fmin_solver": fres.value,
                "fmin_closed": fmin_closed,
                "cost_solver": cres.angle,
                "cost_closed": cost_closed,
                "no_entanglement_fidelity": fidelity.depolarizing_no_ancilla_fidelity(n, q),
                "fmin_gap": abs(fres.value - fmin_closed),
                "cost_gap": abs(cres.angle - cost_closed),
            }
        )
    return rows


def _figure_target(out: str, fig: str | None) -> str:
    if fig:
        return fig
    base = out[:-4] if out.lower().endswith(".csv") else out
    return base + ".png"


def cmd_sweep(args) -> int:
    n = args.n
    if args.q:
        qs = [float(x) for x in args.q.split(",")]
    else:
        count = args.q_count if args.q_count is not None else 21
        lo = -1.0 / (n * n - 1)
        qs = list(np.linspace(lo, 1.0, count))
    rows = sweep_depolarizing_rows(n, qs, seed=args.seed)
    if args.format == "json":
        text = _wrap_json("sweep-depolarizing", f"depolarizing:n={n}", args.seed, {"rows": rows})
    elif args.format == "human":
        header = "  ".join(c.rjust(12) for c in _SWEEP_COLUMNS)
        lines = [header]
        for r in rows:
            lines.append("  ".join(f"{r[c]:12.6g}" for c in _SWEEP_COLUMNS))
        text = "\n".join(lines)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_SWEEP_COLUMNS)
        for r in rows:
            writer.writerow([_g17(r[c]) for c in _SWEEP_COLUMNS])
        text = buf.getvalue()
    _emit(text, args.out)
    if (args.out and not args.no_fig) or args.fig:
        from . import plots

        target = _figure_target(args.out or f"sweep-n{n}.csv", args.fig)
        plots.render_sweep(rows, n, target)
        if args.out:
            print(f"figure written to {target}")
    return EXIT_OK


_SUITE_COLUMNS = [
    "n",
    "d",
    "trial",
    "fmin_value",
    "cos_cost",
    "clamped_cos",
    "abs_gap",
    "lower_bound_ok",
    "passed",
]


def random_suite_records(
    n_list,
    d_list,
    trials: int,
    seed: int = 0,
    tol: float = 1e-6,
) -> list[dict]:
    """Identity check over seeded random channels; one record per trial,
    ordered by (n, d, trial).  Each trial receives independently split
    streams for the channel and both solvers."""
    records = []
    ss = np.random.SeedSequence(seed)
    combos = [(n, d) for n in n_list for d in d_list]
    children = ss.spawn(len(combos) * trials)
    idx = 0
    for n, d in combos:
        for trial in range(trials):
            sub = children[idx].spawn(3)
            idx += 1
            ch = channels.random_channel(n, d, sub[0])
            rep = verify_channel(
                ch,
                f"random:n={n},d={d},trial={trial}",
                fidelity.SolverOptions(seed=sub[1]),
                tecost.CostOptions(seed=sub[2]),
                tol,
            )
            records.append(
                {
                    "n": n,
                    "d": d,
                    "trial": trial,
                    "fmin_value": rep.fmin_value,
                    "cos_cost": rep.cos_cost,
                    "clamped_cos": rep.clamped_cos,
                    "abs_gap": rep.abs_gap,
                    "lower_bound_ok": rep.lower_bound_ok,
                    "passed": rep.passed,
                }
            )
    return records


def _int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ChannelParseError(f"{flag} must be a comma-separated integer list") from exc


def cmd_random_suite(args) -> int:
    tol = args.tol if args.tol is not None else 1e-6
    n_list = _int_list(args.n_list, "--n-list")
    d_list = _int_list(args.d_list, "--d-list")
    t0 = time.perf_counter()
    records = random_suite_records(n_list, d_list, args.trials, args.seed, tol)
    elapsed = time.perf_counter() - t0
    failures = sum(1 for r in records if not r["passed"])
    max_gap = max(r["abs_gap"] for r in records)
    summary = {
        "trials": len(records),
        "failures": failures,
        "max_abs_gap": max_gap,
        "tolerance": tol,
        "seconds": elapsed,
    }
    if args.format == "json":
        text = _wrap_json(
            "random-suite", None, args.seed, {"records": records, "summary": summary}
        )
        _emit(text, args.out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_SUITE_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r["n"],
                    r["d"],
                    r["trial"],
                    _g17(r["fmin_value"]),
                    _g17(r["cos_cost"]),
                    _g17(r["clamped_cos"]),
                    _g17(r["abs_gap"]),
                    str(r["lower_bound_ok"]).lower(),
                    str(r["passed"]).lower(),
                ]
            )
        _emit(buf.getvalue(), args.out)
        lines = [
            ("trials", str(len(records))),
            ("failures", str(failures)),
            ("max_abs_gap", _g17(max_gap)),
            ("tolerance", _g17(tol)),
            ("seconds", f"{elapsed:.2f}"),
        ]
        if args.out:
            print(_human_block([("seed", str(args.seed))] + lines))
    if (args.out and not args.no_fig) or args.fig:
        from . import plots

        target = _figure_target(args.out or "random-suite.csv", args.fig)
        plots.render_suite(records, tol, target)
        if args.out:
            print(f"figure written to {target}")
    return EXIT_OK if failures == 0 else EXIT_FAIL


def _teur_interval(args) -> tuple[float, float]:
    if args.spread is not None:
        return args.spread / 2.0, -args.spread / 2.0
    if args.e_max is None or args.e_min is None:
        raise ChannelParseError("provide either --spread or both --e-max and --e-min")
    return args.e_max, args.e_min


def cmd_teur(args) -> int:
    hbar = args.hbar
    action = args.action
    if action == "product":
        e_max, e_min = _teur_interval(args)
        cost = tecost.cost_energy_product(e_max, e_min, args.time, hbar)
        payload = {
            "e_max": e_max,
            "e_min": e_min,
            "time": args.time,
            "hbar": hbar,
            "cost": cost,
            "fidelity_floor": max(float(np.cos(cost)), 0.0),
        }
    elif action == "fastest":
        e_max, e_min = _teur_interval(args)
        t = tecost.fastest_state_time(args.fidelity, e_max, e_min, hbar)
        payload = {
            "fidelity": args.fidelity,
            "e_max": e_max,
            "e_min": e_min,
            "hbar": hbar,
            "time": t,
        }
    elif action == "orth":
        e_max, e_min = _teur_interval(args)
        payload = {
            "e_max": e_max,
            "e_min": e_min,
            "hbar": hbar,
            "time": tecost.orthogonalization_time(e_max, e_min, hbar),
        }
    elif action == "estimates":
        mean_t, spread_t = tecost.orthogonalization_estimates(args.epsilon, hbar)
        payload = {
            "epsilon": args.epsilon,
            "hbar": hbar,
            "mean_energy_time": mean_t,
            "spread_time": spread_t,
            "ratio": spread_t / mean_t,
        }
    else:  # saturate
        eps = args.epsilon
        if eps <= 0:
            raise ChannelParseError(f"--epsilon must be positive, got {eps}")
        t = args.time if args.time is not None else np.pi * hbar / (2.0 * eps)
        h = np.array([[eps, 0.0], [0.0, -eps]], dtype=np.complex128)
        plus = np.array([1.0, 1.0], dtype=np.complex128) / np.sqrt(2.0)
        rep = tecost.teur_bound_check(h, plus, t, hbar)
        payload = {
            "epsilon": eps,
            "e_max": rep.e_max,
            "e_min": rep.e_min,
            "time": rep.time,
            "hbar": rep.hbar,
            "cost": rep.cost,
            "fidelity": rep.fidelity,
            "delta_e": rep.delta_e,
            "bound_satisfied": rep.bound_satisfied,
        }

    if args.format == "json":
        _emit(_wrap_json(f"teur-{action}", None, args.seed, payload), args.out)
    elif args.format == "csv":
        row = {k: (_g17(v) if isinstance(v, float) else v) for k, v in payload.items()}
        _emit(_csv_single(row), args.out)
    else:
        items = [(k, _g17(v) if isinstance(v, float) else str(v)) for k, v in payload.items()]
        _emit(_human_block(items), args.out)
    if action == "saturate" and not payload["bound_satisfied"]:
        return EXIT_FAIL
    return EXIT_OK


def cmd_export(args) -> int:
    ch, desc = parse_family(args.family)
    channels.write_channel_file(args.out_path, ch)
    print(f"{desc} written to {args.out_path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser / config
# ---------------------------------------------------------------------------


def _read_config(path) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, eq, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if not eq or key not in _CONFIG_KEYS:
                raise ChannelParseError(f"{path}:{lineno}: bad config line {raw.strip()!r}")
            try:
                values[key] = _CONFIG_KEYS[key](val)
            except ValueError as exc:
                raise ChannelParseError(f"{path}:{lineno}: bad value for {key}") from exc
    if "format" in values and values["format"] not in ("human", "json", "csv"):
        raise ChannelParseError(f"{path}: format must be human, json or csv")
    return values


def _apply_config(args) -> None:
    cfg = _read_config(args.config) if getattr(args, "config", None) else {}
    for key in ("format", "seed", "restarts", "iters", "tol", "hbar"):
        if getattr(args, key, None) is None and key in cfg:
            setattr(args, key, cfg[key])
    if args.format is None:
        table = getattr(args, "func", None) in (cmd_sweep, cmd_random_suite)
        args.format = "csv" if table and getattr(args, "out", None) else "human"
    if args.seed is None:
        args.seed = 0
    if args.hbar is None:
        args.hbar = 1.0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["human", "json", "csv"], default=None)
    common.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    common.add_argument("--restarts", type=int, default=None)
    common.add_argument("--iters", type=int, default=None)
    common.add_argument("--tol", type=float, default=None, help="command tolerance")
    common.add_argument("--hbar", type=float, default=None)
    common.add_argument("--out", default=None, help="write output to this file")
    common.add_argument("--config", default=None, help="key=value defaults file")

    chan = argparse.ArgumentParser(add_help=False)
    group = chan.add_mutually_exclusive_group(required=True)
    group.add_argument("--channel-file", help="JSON channel description")
    group.add_argument("--family", help="inline family spec, e.g. depolarizing:n=2,q=0.5")
    chan.add_argument(
        "--allow-incomplete",
        action="store_true",
        help="accept Kraus sets that are not trace preserving",
    )

    parser = argparse.ArgumentParser(
        prog="tecfid",
        description="Time-energy cost and worst-case entanglement fidelity of quantum channels.",
    )
    parser.add_argument("--version", action="version", version=f"tecfid {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a channel file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("tecost", parents=[common, chan], help="time-energy cost of a channel")
    p.set_defaults(func=cmd_tecost)

    p = sub.add_parser("fmin", parents=[common, chan], help="worst-case entanglement fidelity")
    p.set_defaults(func=cmd_fmin)

    p = sub.add_parser(
        "verify", parents=[common, chan], help="check fmin against the clamped cosine of the cost"
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser(
        "sweep-depolarizing",
        parents=[common],
        help="solver vs closed form over a q grid (CSV + figure)",
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", help="comma-separated q values")
    p.add_argument("--q-count", type=int, default=None, help="grid size (default 21)")
    p.add_argument("--fig", default=None, help="explicit figure path")
    p.add_argument("--no-fig", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser(
        "random-suite",
        parents=[common],
        help="identity check over seeded random channels (CSV + figure)",
    )
    p.add_argument("--n-list", default="2,3,4")
    p.add_argument("--d-list", default="1,2,3,4")
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--fig", default=None)
    p.add_argument("--no-fig", action="store_true")
    p.set_defaults(func=cmd_random_suite)

    p = sub.add_parser("teur", parents=[common], help="time-energy uncertainty calculators")
    p.add_argument("action", choices=["product", "fastest", "orth", "estimates", "saturate"])
    p.add_argument("--e-max", type=float, default=None)
    p.add_argument("--e-min", type=float, default=None)
    p.add_argument("--spread", type=float, default=None, help="e_max - e_min (centered)")
    p.add_argument("--time", type=float, default=None)
    p.add_argument("--fidelity", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.set_defaults(func=cmd_teur)

    p = sub.add_parser("export", parents=[common], help="write a family channel to a file")
    p.add_argument("--family", required=True)
    p.add_argument("out_path")
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        if args.cmd == "teur":
            if args.action == "product" and args.time is None:
                raise ChannelParseError("teur product requires --time")
            if args.action == "fastest" and args.fidelity is None:
                raise ChannelParseError("teur fastest requires --fidelity")
        return args.func(args)
    except (TecfidError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
