"""Command-line front end.

Subcommands:
  solve   one game value (omega, omega_star, omega_ow_classical, ...)
  lift    the four lift quantities and their quotients for one game
  reduce  sampled input reduction of a family game with distortion reports
  report  aggregate result records into CSV with a quotient summary

Exit codes: 0 success, 2 enumeration guard exceeded, 3 invalid input,
4 partial aggregation.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, family, lift, reduction, solvers
from .games import (GameError, GuardExceededError, XorGame, game_from_file,
                    game_from_json)

QUANTITIES = ("omega", "omega_star", "omega_ow_classical", "omega_ow_quantum",
              "bell_classical", "bell_quantum_lower",
              "distributional_complexity")


def _fmt(value):
    """17-significant-digit floats for byte-identical round-trips."""
    if isinstance(value, float):
        return float(f"{value:.17g}")
    if isinstance(value, dict):
        return {k: _fmt(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_fmt(v) for v in value]
    if isinstance(value, np.ndarray):
        return _fmt(value.tolist())
    if isinstance(value, (np.floating,)):
        return _fmt(float(value))
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def _emit(record: dict, out: str | None):
    text = json.dumps(_fmt(record), indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _load_game(args) -> tuple[XorGame, dict]:
    if args.game and args.family:
        raise GameError("give either --game or --family, not both")
    if args.game:
        return game_from_file(args.game), {"game": args.game}
    if args.family:
        spec = dict(kv.split("=") for kv in args.family.split(","))
        n = int(spec["n"])
        return game_from_json({"family": "rademacher", "n": n}), {"family_n": n}
    raise GameError("a game source is required (--game PATH or --family n=N)")


def _family_n(source: dict) -> int | None:
    return source.get("family_n")


def _certificate_summary(cert) -> dict:
    if cert is None:
        return {}
    name = type(cert).__name__
    out = {"type": name}
    if hasattr(cert, "k"):
        out.update(k=int(cert.k), alice_sign=cert.alice_sign.tolist(),
                   alice_msg=cert.alice_msg.tolist(),
                   bob_sign=cert.bob_sign.tolist())
    elif hasattr(cert, "d"):
        out.update(d=int(cert.d), selfadjoint=bool(cert.selfadjoint))
    elif hasattr(cert, "dim"):
        out.update(dim=int(cert.dim))
    elif hasattr(cert, "alice"):
        out.update(alice=cert.alice.tolist(), bob=cert.bob.tolist(),
                   sign=int(cert.sign))
    return out


def _record(quantity, value, exact, params, cert=None, seed=None,
            elapsed=0.0, extra=None) -> dict:
    rec = {"quantity": quantity, "value": value, "exact": exact,
           "parameters": params, "certificate": _certificate_summary(cert),
           "seed": seed, "elapsed_seconds": elapsed,
           "artifact_version": __version__}
    if extra:
        rec.update(extra)
    return rec


def cmd_solve(args) -> dict:
    g, source = _load_game(args)
    params = {**source, "k": args.k, "d": args.d, "restarts": args.restarts,
              "tol": args.tol, "guard": args.guard, "eps": args.eps}
    q = args.quantity
    if q == "omega":
        rep = solvers.classical_value_exact(g, guard=args.guard)
    elif q == "omega_star":
        rep = solvers.quantum_value_seesaw(g, dim=args.d or 0,
                                           restarts=args.restarts,
                                           tol=args.tol, seed=args.seed)
    elif q == "omega_ow_classical":
        try:
            rep = solvers.ow_classical_value_exact(g, args.k, guard=args.guard)
        except GuardExceededError:
            if not args.heuristic:
                raise
            rep = solvers.ow_classical_value_local(g, args.k,
                                                   restarts=args.restarts,
                                                   seed=args.seed)
    elif q == "omega_ow_quantum":
        rep = solvers.ow_quantum_value_seesaw(
            g, args.d, restarts=args.restarts, tol=args.tol, seed=args.seed,
            selfadjoint=not args.general)
    elif q == "distributional_complexity":
        res = solvers.distributional_complexity_ow(
            g, args.eps, args.k, guard=args.guard, restarts=args.restarts,
            seed=args.seed)
        return _record(q, res.k, not res.heuristic_used, params, seed=args.seed,
                       extra={"bits": res.bits,
                              "values": {str(k): v for k, v in res.values.items()},
                              "heuristic": res.heuristic_used})
    else:
        raise GameError(f"quantity {q!r} not available via solve")
    return _record(q, rep.value, rep.exact, params, cert=rep.certificate,
                   seed=args.seed, elapsed=rep.elapsed_seconds)


def cmd_lift(args) -> dict:
    g, source = _load_game(args)
    d = args.d
    t0 = time.perf_counter()
    q_rep = solvers.ow_quantum_value_seesaw(g, d, restarts=args.restarts,
                                            tol=args.tol, seed=args.seed)
    try:
        c_rep = solvers.ow_classical_value_exact(g, d * d, guard=args.guard)
    except GuardExceededError:
        if not args.heuristic:
            raise
        c_rep = solvers.ow_classical_value_local(g, d * d,
                                                 restarts=args.restarts,
                                                 seed=args.seed)
    functional = lift.build_lifted_functional(g, d * d)
    try:
        bell_c = solvers.bell_classical_value_exact(functional,
                                                    guard=args.guard)
    except GuardExceededError:
        if not args.heuristic:
            raise
        bell_c = None
    lifted = lift.teleportation_strategy(g, q_rep.certificate)
    bell_q = lift.evaluate_bell(functional, lifted)
    replay = q_rep.certificate.evaluate(g).real
    residual = abs(bell_q - replay)
    rec = _record("lift", None, bell_c is not None and c_rep.exact,
                  {**source, "d": d, "restarts": args.restarts,
                   "tol": args.tol, "guard": args.guard},
                  seed=args.seed, elapsed=time.perf_counter() - t0)
    rec.update({
        "omega_ow_quantum": q_rep.value,
        "omega_ow_classical_2logd": c_rep.value,
        "bell_classical": None if bell_c is None else bell_c.value,
        "bell_quantum_lower": abs(bell_q),
        "teleportation_residual": residual,
        "quotient_game": (q_rep.value / c_rep.value if c_rep.value > 0
                          else float("inf")),
        "quotient_bell": (abs(bell_q) / bell_c.value
                          if bell_c is not None and bell_c.value > 0
                          else None),
    })
    return rec


def cmd_reduce(args) -> dict:
    fg = family.build_family_game(args.n)
    if args.m is None:
        dim = (args.n ** 2) * (args.d ** 2)
        args.m = 16 * dim * dim
    if args.sweep:
        rows = []
        for m in args.sweep:
            _, rep = reduction.reduce_game(fg, args.d, m, seed=args.seed,
                                           restarts=args.restarts,
                                           trials=args.trials, eps=args.eps)
            rows.append({"m": m,
                         "pass_fraction_rows": rep.distortion_rows.pass_fraction,
                         "pass_fraction_cols": rep.distortion_cols.pass_fraction,
                         "quotient_reduced": rep.quotient_reduced})
        return {"quantity": "reduction_sweep", "n": args.n, "d": args.d,
                "rows": rows, "seed": args.seed,
                "artifact_version": __version__}
    reduced, rep = reduction.reduce_game(fg, args.d, args.m, seed=args.seed,
                                         restarts=args.restarts,
                                         trials=args.trials, eps=args.eps)
    rec = _record("reduction_report", rep.quotient_reduced, False,
                  {"n": args.n, "d": args.d, "m": args.m, "eps": args.eps,
                   "trials": args.trials}, seed=args.seed)
    rec.update({
        "normalizer": rep.normalizer,
        "original": rep.original,
        "reduced": rep.reduced,
        "heuristic": rep.heuristic,
        "distortion_rows": vars(rep.distortion_rows),
        "distortion_cols": vars(rep.distortion_cols),
        "reduced_game": reduced.to_json() if args.emit_game else None,
    })
    return rec


def cmd_report(args) -> int:
    paths = sorted(Path(args.records).glob("*.json"))
    if not paths:
        print("no record files found", file=sys.stderr)
        return 3
    rows, skipped = [], 0
    for p in paths:
        try:
            rec = json.loads(p.read_text())
            rows.append({"file": p.name,
                         "quantity": rec.get("quantity"),
                         "value": rec.get("value"),
                         "exact": rec.get("exact"),
                         "seed": rec.get("seed"),
                         "family_n": (rec.get("parameters") or {}).get("family_n"),
                         "elapsed_seconds": rec.get("elapsed_seconds")})
        except (json.JSONDecodeError, AttributeError):
            print(f"warning: skipping malformed record {p}", file=sys.stderr)
            skipped += 1
    out = Path(args.out) if args.out else None
    lines = []
    writer_target = out.open("w", newline="") if out else sys.stdout
    try:
        w = csv.DictWriter(writer_target, fieldnames=list(rows[0].keys()))
        w.writeheader()
        for r in rows:
            w.writerow(r)
    finally:
        if out:
            writer_target.close()

    # quotient summary per family n: see-saw quantum vs local/exact classical
    by_n: dict[int, dict] = {}
    for r in rows:
        n = r["family_n"]
        if n is None or r["value"] is None:
            continue
        slot = by_n.setdefault(int(n), {})
        if r["quantity"] == "omega_ow_quantum":
            slot["quantum"] = r["value"]
        elif r["quantity"] == "omega_ow_classical":
            slot["classical"] = r["value"]
    if by_n:
        summary = ["", "n,omega_ow_quantum,omega_ow_classical,ratio,"
                      "upper_bound_k8,upper_bound_vacuous"]
        for n in sorted(by_n):
            slot = by_n[n]
            qv, cv = slot.get("quantum"), slot.get("classical")
            ratio = qv / cv if qv and cv else ""
            bound = family.khintchine_upper_bound(n, 8)
            summary.append(
                f"{n},{qv if qv is not None else ''},"
                f"{cv if cv is not None else ''},{ratio},"
                f"{bound.value:.17g},{bound.vacuous}")
        text = "\n".join(summary) + "\n"
        if out:
            with out.open("a") as fh:
                fh.write(text)
        else:
            print(text, end="")
    return 4 if skipped else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="xorcomm", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--game", help="path to a game JSON file")
        sp.add_argument("--family", help="family spec, e.g. n=2")
        sp.add_argument("--k", type=int, default=2)
        sp.add_argument("--d", type=int, default=2)
        sp.add_argument("--restarts", type=int, default=32)
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--guard", type=int, default=solvers.DEFAULT_GUARD)
        sp.add_argument("--eps", type=float, default=0.5)
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--heuristic", action="store_true",
                        help="fall back to local search past guards")
        sp.add_argument("--jobs", type=int, default=1,
                        help="worker count (solvers are deterministic "
                             "regardless of this setting)")

    sp = sub.add_parser("solve", help="compute one game value")
    common(sp)
    sp.add_argument("--quantity", choices=QUANTITIES, required=True)
    sp.add_argument("--general", action="store_true",
                    help="general-matrix (non-self-adjoint) see-saw")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("lift", help="lift quantities and quotients")
    common(sp)
    sp.set_defaults(func=cmd_lift)

    sp = sub.add_parser("reduce", help="sampled input reduction")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--sweep", type=lambda s: [int(v) for v in s.split(",")],
                    default=None, help="comma-separated m values -> CSV rows")
    sp.add_argument("--emit-game", action="store_true")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("report", help="aggregate records to CSV")
    sp.add_argument("--records", required=True, help="directory of JSON records")
    sp.add_argument("--out", help="CSV output path (default stdout)")
    sp.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.func is cmd_report:
            return cmd_report(args)
        record = args.func(args)
        _emit(record, args.out)
        return 0
    except GuardExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (GameError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
