"""Command-line interface: seal, open, verify, attack, bounds.

Every command takes an explicit --seed (environment fallbacks are
deliberately not supported) and embeds the resolved configuration, seed and
artifact version in its JSON output, so reruns are byte-identical.

Exit codes: 0 success/accept, 1 verifier reject, 2 usage or schema error,
3 infeasible parameters or uncorrectable syndrome.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .bounds import (InfeasibleParameters, SecurityParameters, alpha_of,
                     binary_entropy_inverse, holevo_bound_ie, leak_bound_sweep,
                     parameter_search, psi_bound_sweep)
from .codes import UncorrectableError
from .exact import (exact_detection, exact_detection_random_z,
                    placement_leak_exact, placement_templates)
from .seal import SealParameters, open_seal, random_state_prep, seal, verify
from .serialize import (SchemaError, attach_key, key_to_dict, load_code,
                        load_key, load_package, package_to_dict, read_json,
                        resolve_prep, write_json)
from .util import derive_rng, make_rng

# fixed spawn-key for the decoy-prep stream, distinct from trial indices
_DECOY_STREAM = 987654321

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3


def _build_params(args, rng_seed: int) -> tuple[SealParameters, tuple, dict]:
    message_code = load_code(args.code)
    decoy_code = load_code(args.decoy)
    prep_rng = derive_rng(rng_seed, _DECOY_STREAM)
    message_prep = resolve_prep(args.prep, prep_rng)
    decoy_preps = None
    if getattr(args, "decoy_prep", "zero") == "random":
        t = message_code.t
        decoy_preps = tuple(random_state_prep(prep_rng) for _ in range(t))
    params = SealParameters(message_code=message_code, decoy_code=decoy_code,
                            seed=rng_seed, decoy_preps=decoy_preps)
    config = {"command": None, "code": args.code, "decoy": args.decoy,
              "prep": args.prep, "decoy_prep": getattr(args, "decoy_prep", "zero"),
              "seed": rng_seed, "artifact_version": __version__}
    return params, message_prep, config


def cmd_seal(args) -> int:
    params, message_prep, config = _build_params(args, args.seed)
    config["command"] = "seal"
    config["substrate"] = args.substrate
    sealed = seal(message_prep, params, substrate=args.substrate)
    write_json(args.out, package_to_dict(sealed, config=config))
    write_json(args.key_out, key_to_dict(sealed.key))
    print(f"sealed package -> {args.out}")
    print(f"verifier key   -> {args.key_out}")
    return EXIT_OK


def cmd_open(args) -> int:
    sealed = load_package(args.package)
    rng = make_rng(args.seed)
    report = {"command": "open", "package": str(args.package), "seed": args.seed,
              "artifact_version": __version__}
    try:
        result = open_seal(sealed, rng)
    except UncorrectableError as exc:
        report["uncorrectable_syndrome"] = list(exc.syndrome)
        _emit(args.out, report)
        print(f"uncorrectable syndrome {exc.syndrome}", file=sys.stderr)
        return EXIT_INFEASIBLE
    report["syndrome"] = list(result.syndrome)
    report["correction"] = result.correction.label
    report["recovered_index"] = result.recovered_index
    from .dense import DenseState
    if isinstance(sealed.state, DenseState):
        rho = sealed.state.qubit_density(result.recovered_index)
        report["recovered_density"] = [[v.real, v.imag] for v in rho.ravel()]
        report["oracle_fidelity"] = result.recovered_fidelity(sealed.message_prep)
    if args.save_state:
        write_json(args.save_state, package_to_dict(sealed, config={
            "command": "open", "derived_from": str(args.package), "seed": args.seed}))
    _emit(args.out, report)
    return EXIT_OK


def cmd_verify(args) -> int:
    sealed = attach_key(load_package(args.package), load_key(args.key))
    rng = make_rng(args.seed)
    report = verify(sealed, mode=args.mode, rng=rng)
    doc = {"command": "verify", "package": str(args.package), "key": str(args.key),
           "mode": args.mode, "seed": args.seed, "artifact_version": __version__}
    doc.update(report.to_dict())
    _emit(args.out, doc)
    print("accept" if report.accept else "reject")
    return EXIT_OK if report.accept else EXIT_REJECT


def cmd_attack(args) -> int:
    from .attacks import (enumerate_passing, mixture_from_spec, parse_strategy,
                          passing_via_group, run_attack_trials)
    params, message_prep, config = _build_params(args, args.seed)
    config["command"] = "attack"
    config["strategy"] = args.strategy
    config["trials"] = args.trials
    config["mode"] = args.mode
    n_public = params.message_code.n
    if args.strategy.startswith("mixture:"):
        entries = read_json(args.strategy.split(":", 1)[1])
        strategy = mixture_from_spec(entries, n_public)
    else:
        strategy = parse_strategy(args.strategy, n_public)

    stats = run_attack_trials(strategy, message_prep, params, args.trials,
                              args.seed, mode=args.mode, parallel=args.parallel)
    report = {"config": config, **stats.to_dict()}

    exact_rate = None
    if args.exact:
        templates = placement_templates(params, message_prep)
        if strategy is None:
            exact_rate = exact_detection_random_z(params, message_prep, templates=templates)
        else:
            exact_rate = exact_detection(strategy, params, message_prep, templates=templates)
        leak = placement_leak_exact(strategy, params, message_prep,
                                    templates=templates) if strategy is not None else None
        a = 1.0 - exact_rate
        bound = holevo_bound_ie(a, params.t)
        report["exact"] = {
            "detection_rate": exact_rate,
            "pass_probability": a,
            "leak_bound_tight": bound.tight,
            "leak_bound_loose": bound.loose,
        }
        if leak is not None:
            report["exact"]["placement_leak"] = leak.to_dict()
            report["exact"]["leak_within_bound"] = bool(
                leak.mutual_info_bits <= holevo_bound_ie(leak.pass_probability,
                                                         params.t).tight + 1e-9)
    if args.exhaustive:
        sealed = seal(message_prep, params)
        passing = enumerate_passing(sealed.key)
        group = passing_via_group(sealed.key)
        report["exhaustive"] = {
            "scan_count": len(passing),
            "group_count": len(group),
            "agree": {p.bits().tobytes() for p in passing} == group,
        }

    _emit(args.out, report)
    if args.csv:
        _write_csv(args.csv, [_attack_csv_row(report, exact_rate)])
        if args.figure is None:
            args.figure = str(Path(args.csv).with_suffix(".png"))
    if args.figure:
        from .figures import render_attack_convergence
        render_attack_convergence(stats.history, args.figure, exact=exact_rate)
        print(f"figure -> {args.figure}")
    print(f"pass rate {stats.pass_rate:.6f}, detection rate {stats.detection_rate:.6f}")
    return EXIT_OK


def _attack_csv_row(report: dict, exact_rate) -> dict:
    return {"strategy": report["config"]["strategy"],
            "trials": report["trials"],
            "pass_rate": report["pass_rate"],
            "detection_rate": report["detection_rate"],
            "wilson99_low": report["detection_wilson99"][0],
            "wilson99_high": report["detection_wilson99"][1],
            "exact_detection": "" if exact_rate is None else exact_rate,
            "transcripts_digest": report["transcripts_digest"]}


def cmd_bounds(args) -> int:
    doc = {"command": "bounds", "epsilon_p": args.epsilon_p,
           "epsilon_i": args.epsilon_i, "rate": args.rate,
           "artifact_version": __version__}
    if args.alpha_only:
        doc["alpha_zero"] = alpha_of(0.0, args.rate)
        doc["alpha"] = alpha_of(args.epsilon_p, args.rate)
        doc["entropy_inverse_half"] = binary_entropy_inverse(0.5)
        _emit(args.out, doc)
        print(f"alpha(0) = {doc['alpha_zero']:.6f}, alpha({args.epsilon_p}) = {doc['alpha']:.6f}")
        return EXIT_OK
    sec = SecurityParameters(epsilon_p=args.epsilon_p, epsilon_i=args.epsilon_i)
    try:
        report = parameter_search(sec, rate=args.rate)
    except InfeasibleParameters as exc:  # pragma: no cover - search returns reports
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    doc.update(report.to_dict())
    _emit(args.out, doc)
    if args.sweep_dir:
        _emit_sweeps(args, report)
    if not report.feasible:
        print(f"infeasible: {report.reason}", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(f"minimal n = {report.n_min} (t = {report.t}, d = {report.d}), "
          f"message-information bound {report.i_psi_bound:.3g} < {args.epsilon_i:g}")
    return EXIT_OK


def _emit_sweeps(args, report) -> None:
    from .figures import render_leak_bound_sweep, render_psi_bound_sweep
    outdir = Path(args.sweep_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    n_hi = max(200, int((report.n_min or 200) * 1.25))
    step = max(1, n_hi // 400)
    psi_rows = psi_bound_sweep(args.epsilon_p, rate=args.rate, n_max=n_hi, step=step)
    psi_csv = outdir / "psi_bound_sweep.csv"
    _write_csv(psi_csv, psi_rows)
    render_psi_bound_sweep(psi_rows, psi_csv.with_suffix(".png"),
                           epsilon_i=args.epsilon_i, n_min=report.n_min)
    t = report.t or 1
    leak_rows = leak_bound_sweep(t)
    leak_csv = outdir / "leak_bound_sweep.csv"
    _write_csv(leak_csv, leak_rows)
    render_leak_bound_sweep(leak_rows, leak_csv.with_suffix(".png"), t=t)
    print(f"sweeps -> {psi_csv}, {leak_csv} (+ figures)")


def _write_csv(path, rows: list[dict]) -> None:
    if not rows:
        raise ValueError("no rows to write")
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


def _emit(path, doc: dict) -> None:
    if path:
        write_json(path, doc)
        print(f"report -> {path}")
    else:
        print(json.dumps(doc, indent=2, sort_keys=True))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qseal",
        description="Seal a qubit inside a stabilizer codeword with hidden decoys; "
                    "open, verify, attack and analyze.")
    parser.add_argument("--version", action="version", version=f"qseal {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_code_args(p):
        p.add_argument("--code", default="steane7",
                       help="message code: steane7, perfect5 or a JSON code file")
        p.add_argument("--decoy", default="perfect5",
                       help="decoy code: steane7, perfect5 or a JSON code file")
        p.add_argument("--prep", default="zero",
                       help="message prep: zero|one|plus|i|random")
        p.add_argument("--decoy-prep", default="zero", choices=["zero", "random"],
                       help="decoy block preparations")

    p_seal = sub.add_parser("seal", help="seal a message and write package + key files")
    add_code_args(p_seal)
    p_seal.add_argument("--seed", type=int, required=True)
    p_seal.add_argument("--substrate", default="auto", choices=["auto", "tableau", "dense"])
    p_seal.add_argument("--out", required=True, help="public package file")
    p_seal.add_argument("--key-out", required=True, help="verifier key file")
    p_seal.set_defaults(fn=cmd_seal)

    p_open = sub.add_parser("open", help="error-correct the public word and read the message")
    p_open.add_argument("--package", required=True)
    p_open.add_argument("--seed", type=int, required=True)
    p_open.add_argument("--out", help="report JSON path (default: stdout)")
    p_open.add_argument("--save-state", help="write the post-open package here")
    p_open.set_defaults(fn=cmd_open)

    p_verify = sub.add_parser("verify", help="syndrome-test all blocks with the verifier key")
    p_verify.add_argument("--package", required=True)
    p_verify.add_argument("--key", required=True)
    p_verify.add_argument("--seed", type=int, required=True)
    p_verify.add_argument("--mode", default="original", choices=["original", "revised"])
    p_verify.add_argument("--out", help="report JSON path (default: stdout)")
    p_verify.set_defaults(fn=cmd_verify)

    p_attack = sub.add_parser("attack", help="run an attack strategy over many trials")
    add_code_args(p_attack)
    p_attack.add_argument("--strategy", required=True,
                          help="identity | pauli:<label> | z-measure:<pos|random> | "
                               "x-measure:<pos> | full-open | mixture:<file.json>")
    p_attack.add_argument("--trials", type=int, default=1000)
    p_attack.add_argument("--seed", type=int, required=True)
    p_attack.add_argument("--mode", default="original", choices=["original", "revised"])
    p_attack.add_argument("--exact", action="store_true",
                          help="also compute exact rates/leak on the dense oracle")
    p_attack.add_argument("--exhaustive", action="store_true",
                          help="cross-check passing-strategy enumeration (n <= 8)")
    p_attack.add_argument("--parallel", type=int, default=None,
                          help="run trials across this many processes")
    p_attack.add_argument("--out", help="report JSON path (default: stdout)")
    p_attack.add_argument("--csv", help="summary CSV path")
    p_attack.add_argument("--figure", help="convergence figure path (PNG)")
    p_attack.set_defaults(fn=cmd_attack)

    p_bounds = sub.add_parser("bounds", help="evaluate the security bounds and search n")
    p_bounds.add_argument("--epsilon-p", type=float, required=True)
    p_bounds.add_argument("--epsilon-i", type=float, required=True)
    p_bounds.add_argument("--rate", type=float, default=0.055,
                          help="withheld fraction t/n (default 0.055)")
    p_bounds.add_argument("--alpha-only", action="store_true",
                          help="report the asymptotic ratio only, no search")
    p_bounds.add_argument("--out", help="report JSON path (default: stdout)")
    p_bounds.add_argument("--sweep-dir", help="write sweep CSVs and figures here")
    p_bounds.set_defaults(fn=cmd_bounds)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UncorrectableError as exc:
        print(f"uncorrectable: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except InfeasibleParameters as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
