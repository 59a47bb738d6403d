"""Command-line interface: search, chain, verify-local, certify, report.

Exit codes: 0 ok, 1 failed certificate or check, 2 usage error,
3 empty search, 4 precision unstable.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass

from . import records
from .local import UnstableError

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_EMPTY, EXIT_UNSTABLE = 0, 1, 2, 3, 4

log = logging.getLogger("isotower")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    out: str
    d_max: int = 50
    ell: int = 1
    depth: int = 2
    house_bound: int = 5
    precision: int | None = None
    jobs: int = 1
    verbose: int = 0

    def validate(self) -> None:
        for name in ("d_max", "ell", "house_bound", "jobs"):
            if getattr(self, name) < (0 if name == "ell" else 1):
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.depth < 0:
            raise UsageError("--depth must be >= 0")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


# -- commands ----------------------------------------------------------------------


def candidate_record(c) -> dict:
    from .chains import prime_record

    return {
        "d": c.d,
        "a": [str(x) for x in c.a],
        "b": [str(x) for x in c.b],
        "ram_real": list(c.ram.real),
        "ram_finite": [prime_record(P) for P in c.ram.finite],
        "type_number": c.type_number,
    }


def cmd_search(cfg: RunConfig, args) -> int:
    from .quatalg import search_algebras

    hits = search_algebras(cfg.d_max, cfg.ell, jobs=cfg.jobs)
    obj = records.seal({
        "kind": "candidates",
        "d_max": cfg.d_max,
        "ell": cfg.ell,
        "candidates": [candidate_record(c) for c in hits],
    })
    records.write_atomic(cfg.out, records.dumps(obj))
    log.info("%d candidates written to %s", len(hits), cfg.out)
    return EXIT_OK if hits else EXIT_EMPTY


def cmd_chain(cfg: RunConfig, args) -> int:
    from .chains import (
        algebra_from_record,
        build_chain_family,
        class_field_of,
        family_to_dict,
        find_frobenius_primes,
        maximal_order,
        verify_theorem_conditions,
    )

    cands = records.load(args.candidates, "candidates")["candidates"]
    if not cands:
        raise UsageError("candidate file is empty")
    if not 0 <= args.index < len(cands):
        raise UsageError(f"--index must be in [0, {len(cands)})")
    if cfg.depth > 4 and not args.allow_deep:
        raise UsageError("depth above 4 needs --allow-deep")
    B = algebra_from_record(cands[args.index])
    G = class_field_of(B)
    A = find_frobenius_primes(G, G.rank, B)
    R0 = maximal_order(B)
    F = build_chain_family(R0, A, cfg.depth, max_depth=cfg.depth if args.allow_deep else 4)
    report = verify_theorem_conditions(F)
    records.write_atomic(cfg.out, records.dumps(family_to_dict(F, report)))
    for it in report.failures():
        log.error("condition %d at level %d failed: %s (%s)", it.condition, it.level, it.subject, it.detail)
    return EXIT_OK if report.passed else EXIT_FAILED


def _local_row(task):
    from .local import build_R2m, norm_one_generated_ring, normalizer_search, unramified_ext

    p, m, N = task
    R = build_R2m(unramified_ext(p), m, N)
    nr = normalizer_search(R, N)
    no = norm_one_generated_ring(R, N)
    expected = ["1", "u"]
    norm_ok = sorted(nr.classes) == expected if m >= 1 else True
    return {
        "p": p,
        "m": m,
        "precision": N,
        "normalizer_norm_classes": sorted(nr.classes),
        "candidates": nr.candidates,
        "norm_classes_ok": norm_ok,
        "norm_one_ring_equal": no.equal,
        "unit_basis_size": len(no.unit_basis),
        "ok": norm_ok and no.equal,
    }


def cmd_verify_local(cfg: RunConfig, args) -> int:
    from .arith import is_prime

    tasks = []
    for p in args.p:
        if p == 2 or not is_prime(p):
            raise UsageError(f"--p needs odd primes, got {p}")
        for m in args.m:
            if m < 0:
                raise UsageError("--m values must be >= 0")
            N = cfg.precision if cfg.precision is not None else 2 * m + 4
            if N < 2 * m + 3:
                raise UsageError(f"precision {N} below the minimum 2m+3 = {2 * m + 3}")
            tasks.append((p, m, N))
    if cfg.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            rows = list(ex.map(_local_row, tasks))
    else:
        rows = [_local_row(t) for t in tasks]
    ok = all(r["ok"] for r in rows)
    obj = records.seal({"kind": "local-report", "rows": rows, "verdict": "PASS" if ok else "FAILED"})
    records.write_atomic(cfg.out, records.dumps(obj))
    for r in rows:
        print(f"p={r['p']} m={r['m']} N={r['precision']} classes={{{', '.join(r['normalizer_norm_classes'])}}} "
              f"norm-one-ring={'equal' if r['norm_one_ring_equal'] else 'SMALLER'} {'PASS' if r['ok'] else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_certify(cfg: RunConfig, args) -> int:
    from .cert import certify_isospectral
    from .chains import family_from_dict

    try:
        chain = records.load(args.chain, "chain-family")
    except records.IntegrityError as exc:
        log.error("integrity error in %s: %s", args.chain, exc)
        return EXIT_FAILED
    F = family_from_dict(chain)
    cert = certify_isospectral(F, cfg.house_bound, chain["content_hash"], jobs=cfg.jobs)
    records.write_atomic(cfg.out, records.dumps(cert))
    for f in cert["failures"]:
        log.error("%s", f)
    return EXIT_OK if cert["verdict"] == "PASS" else EXIT_FAILED


def cmd_report(cfg: RunConfig, args) -> int:
    from .cert import tower_report
    from .chains import family_from_dict

    try:
        cert = records.load(args.certificate, "certificate")
        chain = records.load(args.chain, "chain-family")
    except records.IntegrityError as exc:
        log.error("integrity error: %s", exc)
        return EXIT_FAILED
    if cert["verdict"] != "PASS":
        log.error("certificate verdict is %s; no report", cert["verdict"])
        return EXIT_FAILED
    if cert["chain_hash"] != chain["content_hash"]:
        log.error("certificate does not belong to this chain file")
        return EXIT_FAILED
    rep = tower_report(family_from_dict(chain), cert["content_hash"])
    records.write_atomic(cfg.out, records.dumps(rep))
    for lv in rep["levels"]:
        print(f"level {lv['from']} -> {lv['to']}: degree {lv['degree']}, cumulative {lv['cumulative']}")
    return EXIT_OK


COMMANDS = {
    "search": (cmd_search, "candidates.json"),
    "chain": (cmd_chain, "chain.json"),
    "verify-local": (cmd_verify_local, "local-report.json"),
    "certify": (cmd_certify, "certificate.json"),
    "report": (cmd_report, "tower-report.json"),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isotower", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--out", help="output file (written atomically)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", parents=[common], help="search quaternion algebras over Q(sqrt d)")
    s.add_argument("--dmax", type=int, default=50)
    s.add_argument("--ell", type=int, default=1, help="target 2-rank of the class field group")

    c = sub.add_parser("chain", parents=[common], help="build and verify a chain family")
    c.add_argument("--candidates", required=True)
    c.add_argument("--index", type=int, default=0)
    c.add_argument("--depth", type=int, default=2)
    c.add_argument("--allow-deep", action="store_true", help="permit depth above 4")

    v = sub.add_parser("verify-local", parents=[common], help="check the local propositions on a (p, m) grid")
    v.add_argument("--p", type=_int_list, default=[3, 5, 7])
    v.add_argument("--m", type=_int_list, default=[1, 2])
    v.add_argument("--precision", type=int, default=None, help="override N (default 2m+4)")

    ce = sub.add_parser("certify", parents=[common], help="certify a chain family")
    ce.add_argument("--chain", required=True)
    ce.add_argument("--house-bound", type=int, default=5)

    r = sub.add_parser("report", parents=[common], help="tower report from a PASS certificate")
    r.add_argument("--certificate", required=True)
    r.add_argument("--chain", required=True)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s: %(message)s")
    func, default_out = COMMANDS[args.command]
    cfg = RunConfig(
        command=args.command,
        out=args.out or default_out,
        d_max=getattr(args, "dmax", 50),
        ell=getattr(args, "ell", 1),
        depth=getattr(args, "depth", 2),
        house_bound=getattr(args, "house_bound", 5),
        precision=getattr(args, "precision", None),
        jobs=args.jobs,
        verbose=args.verbose,
    )
    try:
        cfg.validate()
        return func(cfg, args)
    except UsageError as exc:
        print(f"isotower {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnstableError as exc:
        print(f"isotower {args.command}: unstable: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except FileNotFoundError as exc:
        print(f"isotower {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
