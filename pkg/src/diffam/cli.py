"""Command-line entry point.

Exit codes: 0 computed / holds, 1 violation or certified counterexample,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from diffam import __version__, kernels
from diffam import concentration as conc
from diffam import diff, junta, search, shadow
from diffam.family import SetFamily, are_cross_intersecting, diversity, is_intersecting, mu_p
from diffam.textio import FamilyFormatError, file_digest, format_family, read_family, write_family


EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _manifest(args, started: float) -> dict:
    flags = {k: v for k, v in vars(args).items() if k not in ("func",) and v is not None}
    inputs = {}
    for key in ("family", "family2", "defining"):
        path = getattr(args, key, None)
        if path:
            inputs[path] = file_digest(path)
    return {
        "subcommand": args.command,
        "flags": flags,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "backend": kernels.BACKEND,
        "wall_time_seconds": round(time.perf_counter() - started, 6),
        "inputs": inputs,
    }


def _emit(args, payload: dict, started: float) -> None:
    payload = {**payload, "manifest": _manifest(args, started)}
    text = json.dumps(payload, indent=2, default=str)
    print(text)


def _write_out(args, family: SetFamily, what: str) -> None:
    header = [f"diffam {__version__}: {what}", f"command: {args.command}"]
    if getattr(args, "seed", None) is not None:
        header.append(f"seed: {args.seed}")
    if args.out:
        write_family(args.out, family, header)
    else:
        sys.stdout.write(format_family(family, header))


# family sources ----------------------------------------------------------

def _add_family_source(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("family source (pick one)")
    g.add_argument("--family", help="family file in the text format")
    g.add_argument("--star", type=int, metavar="X", help="full star of X in C([n], k)")
    g.add_argument("--ap", type=int, metavar="P", help="the A_P(n, k) family")
    g.add_argument("--fano", action="store_true", help="Fano plane on [7]")
    g.add_argument("--triangle", action="store_true", help="{12, 13, 23} on [n]")
    g.add_argument("--all-k-sets", action="store_true", help="every k-subset of [n]")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)


def _family(args) -> SetFamily:
    chosen = [bool(args.family), args.star is not None, args.ap is not None, args.fano,
              args.triangle, args.all_k_sets]
    if sum(chosen) != 1:
        raise UsageError("give exactly one family source")
    if args.family:
        return read_family(args.family, args.n)
    if args.fano:
        return junta.fano_plane()
    if args.triangle:
        return junta.triangle(args.n or 3)
    if args.n is None or args.k is None:
        raise UsageError("--n and --k are required for constructed families")
    if args.star is not None:
        return junta.full_star(args.n, args.k, args.star)
    if args.ap is not None:
        return junta.build_a_p(args.n, args.k, args.ap)
    return SetFamily.all_k_sets(args.n, args.k)


# subcommands --------------------------------------------------------------

def cmd_construct(args, started):
    f = _family(args)
    _write_out(args, f, f"constructed family, {len(f)} sets")
    return EXIT_OK


def _diff_like(args, started, kind):
    f = _family(args)
    report = diff.diff_report(f, kind)
    _emit(args, report.to_json(), started)
    return EXIT_VIOLATION if report.verdict == "violated" else EXIT_OK


def cmd_diff(args, started):
    return _diff_like(args, started, "diff")


def cmd_sd(args, started):
    return _diff_like(args, started, "sd")


def cmd_shadow(args, started):
    f = _family(args)
    s = shadow.shadow(f, args.i)
    if args.out:
        _write_out(args, s, f"level-{args.i} shadow")
    _emit(args, {"i": args.i, "size": len(s)}, started)
    return EXIT_OK


def cmd_kk(args, started):
    f = _family(args)
    k = f.uniform_k
    if k is None:
        raise UsageError("kk needs a uniform family")
    levels = [args.i] if args.i is not None else list(range(k))
    results = {str(i): shadow.kk_verify(f, i).to_json() for i in levels}
    _emit(args, {"levels": results}, started)
    return EXIT_OK if all(r["holds"] for r in results.values()) else EXIT_VIOLATION


def cmd_crossint(args, started):
    f = _family(args)
    g = read_family(args.family2, f.n)
    pairwise = are_cross_intersecting(f, g)
    katona = shadow.katona_criterion(f, g)
    _emit(args, {"pairwise": pairwise, "katona": katona, "agree": pairwise == katona}, started)
    return EXIT_OK if pairwise == katona else EXIT_VIOLATION


def cmd_junta(args, started):
    if (args.p is None) == (args.defining is None):
        raise UsageError("give exactly one of --p or --defining")
    if args.p is not None:
        j = junta.as_junta(args.p)
    else:
        d = read_family(args.defining)
        j = junta.Junta(d.n, d)
    levels = junta.junta_levels(j)
    count = junta.junta_diff_count(j, args.n, args.k)
    out = {
        "width": j.width,
        "defining": j.defining.sets(),
        "levels": {str(i): len(levels.levels[i]) for i in range(j.width + 1)},
        "junta_count": str(count),
        "star_rhs": str(diff.conjecture_rhs(args.n, args.k)),
    }
    code = EXIT_OK
    if args.brute:
        fam = junta.junta_family(j, args.n, args.k)
        brute = diff.difference_size(fam)
        out["brute_force"] = str(brute)
        out["agree"] = brute == count
        code = EXIT_OK if brute == count else EXIT_VIOLATION
    _emit(args, out, started)
    return code


def cmd_gap(args, started):
    n, k = args.n, args.k
    gain, loss = junta.ak_gain_loss(n, k)
    out = {
        "a3_gap": str(junta.a3_gap(n, k)),
        "a3_threshold": junta.a3_threshold(k),
        "a3_closed_form": str(junta.a3_closed_form(n, k)),
        "star_rhs": str(diff.conjecture_rhs(n, k)),
        "ak_gain": str(gain),
        "ak_loss": str(loss),
        "hm_bound": str(junta.hm_bound(n, k)),
    }
    _emit(args, out, started)
    return EXIT_OK


def cmd_scan(args, started):
    rows = junta.scan_ap_counterexamples(args.k, args.c, args.p)
    manifest = json.dumps(_manifest(args, started), default=str, sort_keys=True)
    text = junta.scan_to_csv(rows, [f"manifest: {manifest}"])
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_concentration(args, started):
    m = args.m
    if args.family:
        g = read_family(args.family, m)
    else:
        g = junta.full_star(m, args.l, args.star or 1)
    workers = 1 if args.deterministic else max(1, args.threads)
    if args.mode == "matching":
        reports = conc.verify_matching_conc(g, args.t, args.a, args.samples, args.seed, workers)
    else:
        reports = [conc.verify_complement_conc(g, args.lprime, args.t, args.a, args.samples,
                                               args.seed, tail, workers)
                   for tail in ("lower", "upper")]
    _emit(args, {"reports": [r.to_json() for r in reports]}, started)
    return EXIT_VIOLATION if any(r.verdict == "violated" for r in reports) else EXIT_OK


def cmd_verify(args, started):
    rep = search.verify_conjecture(args.n, args.k, args.mode, args.budget, args.seed, args.kind,
                                   args.budget_seconds)
    if args.out and rep.worst_family is not None:
        _write_out(args, rep.worst_family,
                   f"{rep.mode} {rep.kind} search at n={args.n} k={args.k}: value {rep.max_value}, rhs {rep.rhs}")
    _emit(args, rep.to_json(), started)
    return EXIT_VIOLATION if rep.verdict == "counterexample-found" else EXIT_OK


def cmd_hillclimb(args, started):
    res = search.hill_climb(args.n, args.k, args.objective, args.iters, args.seed, args.restarts)
    rhs = diff.conjecture_rhs(args.n, args.k) if args.objective == "diff" else diff.sd_rhs(args.n, args.k)
    if args.out:
        _write_out(args, res.family, f"hill-climb {args.objective} score {res.score}")
    _emit(args, {"score": str(res.score), "rhs": str(rhs), "trace": res.trace,
                 "evaluations": res.evaluations, "family": res.family.sets()}, started)
    return EXIT_OK


def cmd_certify(args, started):
    f = _family(args)
    ok = search.certify_counterexample(f, args.kind)
    _emit(args, {"kind": args.kind, "certified": ok, "size": len(f)}, started)
    return EXIT_VIOLATION if ok else EXIT_OK


def cmd_extend(args, started):
    f = _family(args)
    g = diff.maximal_extension(f)
    d = diff.difference_family(g)
    half = Fraction(1, 2)
    out = {
        "size": len(g),
        "partition": diff.partition_check(g),
        "mu_half_G": str(mu_p(g, half)),
        "mu_half_DG": str(mu_p(d, half)),
    }
    if args.out:
        _write_out(args, g, "maximal intersecting extension")
    _emit(args, out, started)
    return EXIT_OK if out["partition"] else EXIT_VIOLATION


def cmd_measure(args, started):
    f = _family(args)
    p = Fraction(args.p) if args.exact else float(args.p)
    out = {"n": f.n, "size": len(f), "intersecting": is_intersecting(f), "mu_p": str(mu_p(f, p))}
    if len(f):
        out["diversity"], out["diversity_witness"] = diversity(f)
    _emit(args, out, started)
    return EXIT_OK


def cmd_lemma_check(args, started):
    out = search.lemma_parameter_check(args.n, args.k)
    _emit(args, out, started)
    ok = out["epsilon_below_0.88"] and out["tail_identity_holds"]
    return EXIT_OK if ok else EXIT_VIOLATION


# parser ---------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the produced family / table here")
    common.add_argument("--budget-seconds", type=float, default=None)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--deterministic", action="store_true",
                        help="force single-stream sampling (bit-exact reruns)")

    parser = _Parser(prog="diffam", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    _add_family_source(add("construct", cmd_construct, "build a named family"))
    _add_family_source(add("diff", cmd_diff, "difference family report"))
    _add_family_source(add("sd", cmd_sd, "symmetric-difference family report"))
    p = add("shadow", cmd_shadow, "level shadow of a uniform family")
    _add_family_source(p)
    p.add_argument("--i", type=int, required=True)
    p = add("kk", cmd_kk, "Lovasz-form Kruskal-Katona check")
    _add_family_source(p)
    p.add_argument("--i", type=int)
    p = add("crossint", cmd_crossint, "pairwise vs shadow cross-intersection test")
    _add_family_source(p)
    p.add_argument("--family2", required=True)
    p = add("junta", cmd_junta, "closed-form junta difference count")
    p.add_argument("--p", type=int)
    p.add_argument("--defining", help="defining family file on [width]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--brute", action="store_true", help="also brute-force |D|")
    p = add("gap", cmd_gap, "A_3 gap, threshold and A_k gain/loss")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p = add("scan", cmd_scan, "scan A_p against the star over n = ck")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", type=float, nargs="+", required=True)
    p.add_argument("--p", type=int, nargs="+")
    p = add("concentration", cmd_concentration, "Monte Carlo concentration check")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--lprime", type=int, default=0)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--mode", choices=("matching", "complement"), default="matching")
    p.add_argument("--family", help="l-uniform family on [m] (default: star of --star)")
    p.add_argument("--star", type=int)
    p = add("verify", cmd_verify, "search for violators of the star bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=search.MODES, default="exhaustive-maximal")
    p.add_argument("--kind", choices=("diff", "sd"), default="diff")
    p.add_argument("--budget", type=int, default=search.DEFAULT_CAP)
    p = add("hillclimb", cmd_hillclimb, "seeded local search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--objective", choices=("diff", "sd"), default="diff")
    p.add_argument("--iters", type=int, default=20_000)
    p.add_argument("--restarts", type=int, default=20)
    p = add("certify", cmd_certify, "certify a counterexample family")
    _add_family_source(p)
    p.add_argument("--kind", choices=("diff", "sd"), default="diff")
    p = add("extend", cmd_extend, "maximal intersecting extension and partition check")
    _add_family_source(p)
    p = add("measure", cmd_measure, "size, p-measure and diversity")
    _add_family_source(p)
    p.add_argument("--p", default="0.5")
    p.add_argument("--exact", action="store_true", help="rational arithmetic for --p")
    p = add("lemma-check", cmd_lemma_check, "arithmetic audit of the large-n parameters")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    started = time.perf_counter()
    try:
        return args.func(args, started)
    except (UsageError, FamilyFormatError, ValueError, OSError) as exc:
        print(f"diffam {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
