"""Command-line entry point: ``orbicert <subcommand> ...``.

Exit codes: 0 pass, 1 fail, 2 input error, 3 incomplete or undecided.
"""

from __future__ import annotations

import argparse
import sys

from . import certify as _certify
from . import differentials as diff
from .arrangement import (
    check_linear_general_position,
    check_quadric_general_position,
    normalize,
)
from .exactalg import default_prime, is_prime, rank
from .fermat import SamplingError, build_cover, relation_residuals, sample_points, standard_lines_exist
from .textio import (
    InputError,
    arrangement_from_dict,
    cover_from_dict,
    cover_to_dict,
    is_cover_record,
    normalized_to_dict,
    poly_to_dict,
    read_json,
    write_json,
)

OK, FAIL, INPUT_ERROR, INCOMPLETE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _emit(args, record: dict, lines: list[str]) -> None:
    record = dict(record)
    record["config"] = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    if getattr(args, "output", None):
        write_json(args.output, record)
    for line in lines:
        print(line)


def _load_cover(args):
    data = read_json(args.input)
    if is_cover_record(data):
        cov = cover_from_dict(data)
        if args.m is not None and args.m != cov.m:
            raise UsageError(f"--m {args.m} disagrees with the cover file (m = {cov.m})")
        return cov
    if args.m is None:
        raise UsageError("--m is required when the input is an arrangement")
    return build_cover(normalize(arrangement_from_dict(data)), args.m)


def _need_seed(args, flag: str) -> None:
    if args.seed is None:
        raise UsageError(f"{flag} needs --seed")


def _prime(args, m: int) -> int:
    p = default_prime(m) if args.prime is None else args.prime
    if not is_prime(p) or (p - 1) % m:
        raise UsageError(f"prime {p} must be a prime with p = 1 mod {m}")
    return p


# --- subcommands --------------------------------------------------------------


def cmd_check(args) -> int:
    arr = arrangement_from_dict(read_json(args.input))
    if args.randomized:
        _need_seed(args, "--randomized")
        lin = check_linear_general_position(arr, "randomized", args.seed, args.trials)
    else:
        lin = check_linear_general_position(arr)
    rec = {"linear": {"holds": lin.holds, "reason": lin.reason, "witness": lin.witness, "provenance": lin.provenance}}
    lines = [f"linear general position: {lin.holds} ({lin.reason})"]
    if lin.witness:
        lines.append(f"  dependent subset: {list(lin.witness)}")
    verdicts = [lin.holds]
    if args.quadrics:
        q = check_quadric_general_position(arr)
        rec["quadric"] = {"holds": q.holds, "reason": q.reason}
        lines.append(f"quadric general position: {q.holds} ({q.reason})")
        verdicts.append(q.holds)
    _emit(args, rec, lines)
    if False in verdicts:
        return FAIL
    return INCOMPLETE if None in verdicts else OK


def cmd_normalize(args) -> int:
    arr = arrangement_from_dict(read_json(args.input))
    na = normalize(arr, args.pivot)
    rec = normalized_to_dict(na)
    _emit(args, rec, [f"pivot {list(na.pivot)}; A is {na.k} x {na.n + 1}"] + ["  " + " ".join(r) for r in rec["A"]])
    return OK


def cmd_cover(args) -> int:
    cov = build_cover(normalize(arrangement_from_dict(read_json(args.input))), args.m)
    rec = cover_to_dict(cov)
    rec["equations"] = [f.pretty() + " = 0" for f in cov.equations()]
    _emit(args, rec, [f"Fermat cover n={cov.n} k={cov.k} m={cov.m} in P^{cov.N}"] + ["  " + e for e in rec["equations"]])
    return OK


def cmd_differential(args) -> int:
    cov = _load_cover(args)
    rows = tuple(args.rows) if args.rows else diff.default_rows(cov)
    sigma = diff.generate_sigma(cov, rows, args.chart)
    t = 2 * cov.n + 1 - cov.m
    rec = {"cover": cover_to_dict(cov), "rows": list(rows), "chart": args.chart, "twist": t, "sigma": poly_to_dict(sigma)}
    _emit(args, rec, [f"sigma on chart {args.chart}, rows {list(rows)}, twist Z_{args.chart}^{t}:", "  " + sigma.pretty()])
    return OK


def _exact_identities(cov, rows) -> tuple[dict, list[str]]:
    sec = diff.generate_section(cov, rows)
    rec, lines = {}, []
    cr = diff.verify_cramer_annihilation(cov, rows)
    rec["cramer_annihilation"] = cr
    lines.append(f"cramer annihilation: {cr}")
    comp = {f"0,{c}": diff.verify_chart_compatibility(sec, 0, c) for c in range(1, cov.N + 1)}
    rec["chart_compatibility"] = comp
    lines.append("chart compatibility: " + " ".join(f"({k}) {v}" for k, v in comp.items()))
    bw = diff.verify_bw_factorization(cov)
    rec["bw_factorization"] = {f"{j},{i}": v for (j, i), v in sorted(bw.pairs.items())}
    lines.append(f"B/W factorization: {sum(bw.pairs.values())}/{len(bw.pairs)} pairs")
    rec["passed"] = cr and all(comp.values()) and bw.holds
    return rec, lines


def _sampled_identities(cov, rows, p, samples, seed) -> tuple[dict, list[str]]:
    sec = diff.generate_section(cov, rows)
    pts = sample_points(cov, samples, p, seed)
    rel = sum(not any(relation_residuals(cov, pt)) for pt in pts)
    comp = {c: sum(diff.sampled_compatibility(sec, c, pt) for pt in pts) for c in range(1, cov.N + 1)}
    rk = sum(rank(diff.B_at(cov, pt)) == rank(diff.W_at(pt, cov.n)) for pt in pts)
    rec = {
        "relations_vanish": rel,
        "chart_compatibility": {f"0,{c}": v for c, v in comp.items()},
        "rank_B_equals_rank_W": rk,
        "provenance": {"prime": p, "seed": seed, "trials": samples},
    }
    rec["passed"] = rel == samples and all(v == samples for v in comp.values()) and rk == samples
    lines = [
        f"sampled over F_{p}, seed {seed}, {samples} points",
        f"relations vanish: {rel}/{samples}",
        "chart compatibility: " + " ".join(f"(0,{c}) {v}/{samples}" for c, v in comp.items()),
        f"rank B = rank W: {rk}/{samples}",
    ]
    return rec, lines


def cmd_verify_identities(args) -> int:
    cov = _load_cover(args)
    rows = tuple(args.rows) if args.rows else diff.default_rows(cov)
    rec, lines = {"cover": cover_to_dict(cov), "rows": list(rows)}, []
    passed = True
    if args.sampled:
        _need_seed(args, "--sampled")
        r, ln = _sampled_identities(cov, rows, _prime(args, cov.m), args.samples, args.seed)
        rec["sampled"] = r
        lines += ln
        passed &= r["passed"]
    if args.exact or not args.sampled:
        r, ln = _exact_identities(cov, rows)
        rec["exact"] = r
        lines += ln
        passed &= r["passed"]
    _emit(args, rec, lines + [f"verdict: {'pass' if passed else 'fail'}"])
    return OK if passed else FAIL


def cmd_baselocus(args) -> int:
    _need_seed(args, "baselocus-sample")
    cov = _load_cover(args)
    rep = diff.baselocus_evidence(cov, _prime(args, cov.m), args.samples, args.seed)
    rec = rep.as_dict()
    rec["witnesses"] = rep.witnesses
    lines = [
        f"prime {rep.p}, seed {rep.seed}, {rep.samples} samples ({rep.draws} draws)",
        f"B/W factorization (exact): {rep.bw_exact}",
        f"rank W >= n: {rep.rank_bound_ok}/{rep.samples}",
        f"rank B = rank W: {rep.rank_equal_ok}/{rep.samples}",
        f"some sigma minor nonzero: {rep.sigma_nonzero_ok}/{rep.samples}",
        f"counterexamples: {len(rep.counterexamples)}",
        f"evidence only: {rep.note}",
    ]
    _emit(args, rec, lines)
    return OK if rep.passed else FAIL


def cmd_standard_lines(args) -> int:
    exists, part = standard_lines_exist(args.n, args.k)
    rec = {"n": args.n, "k": args.k, "exist": exists, "witness": None if part is None else [list(b) for b in part]}
    if exists:
        line = "standard lines exist; partition " + " | ".join("{" + ",".join(map(str, b)) + "}" for b in part)
    else:
        line = "none exist"
    _emit(args, rec, [line])
    return OK


def cmd_thresholds(args) -> int:
    t = _certify.thresholds(args.n, args.m)
    _emit(args, t, [f"{k}={v}" for k, v in t.items()])
    return OK


def cmd_certify(args) -> int:
    if args.with_evidence:
        _need_seed(args, "--with-evidence")
    arr = arrangement_from_dict(read_json(args.input))
    if arr.multiplicities is None:
        raise UsageError("certify needs multiplicities in the input file")
    cert = _certify.certify_hyperbolicity(
        arr, args.with_evidence, args.prime, args.samples, args.seed if args.seed is not None else 0, args.limit
    )
    text = cert.to_json()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    print(f"verdict: {cert.verdict}")
    for f in cert.failures():
        print(f"  failed {f.name}: {f.reason}" + (f" witness={f.witness}" if f.witness is not None else ""))
    if not args.output:
        sys.stdout.write(text)
    return cert.exit_code


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="orbicert", description="Exact checks for hyperplane arrangements, Fermat covers and their symmetric differentials.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help):
        p = sub.add_parser(name, help=help, description=help)
        p.set_defaults(func=func)
        return p

    def rand(p, samples=100):
        p.add_argument("--prime", type=int, help="prime with p = 1 mod m (default: smallest such prime >= 2^20)")
        p.add_argument("--samples", type=int, default=samples, help=f"number of sampled points (default {samples})")
        p.add_argument("--seed", type=int, help="random seed; required for any sampled mode")

    p = add("check", cmd_check, "linear (and optionally quadric) general position of an arrangement")
    p.add_argument("--input", required=True, help="arrangement JSON file")
    p.add_argument("--quadrics", action="store_true", help="also check general position with respect to quadrics")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true", help="check every (n+1)-subset (default)")
    g.add_argument("--randomized", action="store_true", help="check random subsets; never certifies")
    p.add_argument("--seed", type=int, help="seed for --randomized")
    p.add_argument("--trials", type=int, default=1000, help="subsets tried by --randomized (default 1000)")
    p.add_argument("--output", help="write a JSON report here")

    p = add("normalize", cmd_normalize, "coordinate change making n+1 hyperplanes the coordinate ones")
    p.add_argument("--input", required=True, help="arrangement JSON file")
    p.add_argument("--pivot", type=_ints, help="comma-separated pivot indices (default: first independent subset)")
    p.add_argument("--output", help="write the normalized arrangement here")

    p = add("cover", cmd_cover, "Fermat cover of an arrangement")
    p.add_argument("--input", required=True, help="arrangement JSON file")
    p.add_argument("--m", type=int, required=True, help="ramification order")
    p.add_argument("--output", help="write the cover file here")

    p = add("differential", cmd_differential, "chart expression of the determinantal symmetric differential")
    p.add_argument("--input", required=True, help="arrangement or cover JSON file")
    p.add_argument("--m", type=int, help="ramification order (required for arrangements)")
    p.add_argument("--rows", type=_ints, help="comma-separated rows j_1..j_n in n+1..n+k (default n+1..2n)")
    p.add_argument("--chart", type=int, default=0, help="chart index c in 0..n+k (default 0)")
    p.add_argument("--output", help="write the polynomial here")

    p = add("verify-identities", cmd_verify_identities, "verify the Cramer, chart and B/W identities")
    p.add_argument("--input", required=True, help="arrangement or cover JSON file")
    p.add_argument("--m", type=int, help="ramification order (required for arrangements)")
    p.add_argument("--rows", type=_ints, help="comma-separated rows (default n+1..2n)")
    p.add_argument("--exact", action="store_true", help="exact verification modulo the cover ideal (default)")
    p.add_argument("--sampled", action="store_true", help="evaluate at sampled points over F_p")
    rand(p)
    p.add_argument("--output", help="write a JSON report here")

    p = add("baselocus-sample", cmd_baselocus, "sampled rank evidence for the base-locus statement")
    p.add_argument("--input", required=True, help="arrangement or cover JSON file")
    p.add_argument("--m", type=int, help="ramification order (required for arrangements)")
    rand(p, 1000)
    p.add_argument("--output", help="write a JSON report here")

    p = add("standard-lines", cmd_standard_lines, "whether generic Fermat complete intersections contain standard lines")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--output", help="write a JSON report here")

    p = add("thresholds", cmd_thresholds, "degree and multiplicity thresholds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, help="multiplicity for the bigness bound (m >= 3)")
    p.add_argument("--output", help="write a JSON report here")

    p = add("certify", cmd_certify, "stratified hyperbolicity certificate")
    p.add_argument("--input", required=True, help="arrangement JSON file with multiplicities")
    p.add_argument("--output", help="write the certificate here (default: stdout)")
    p.add_argument("--with-evidence", action="store_true", help="attach sampled base-locus evidence per stratum")
    rand(p)
    p.add_argument("--limit", type=int, default=10**4, help="maximum number of strata examined (default 10000)")
    return ap


def dispatch(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    try:
        return args.func(args)
    except (InputError, UsageError, diff.PreconditionError, SamplingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
