"""Command line entry point: ``f4lehmer <verb> [options]``.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage/I/O/schema error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import cache
from .coxeter import BadWord, EnumerationBound, GroupTable, WrongType, parse_word
from .embedding import (
    CertificateFailure,
    ShapeMismatch,
    prove_no_lehmer_code,
    search_full_lehmer_code,
    verify_certificate,
)
from .posets import is_m_sequence
from .qpoly import QPoly, q_analog_factorization
from .weak import (
    StructureFailure,
    build_pal_lattice,
    build_weak_code,
    multicomplex_for_interval,
    unimodal_elements,
    verify_weak_code,
)

log = logging.getLogger("f4lehmer")

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    group_type: str = "F4"
    command: str = "build"
    thread_count: int = 1
    cache_path: str | None = None
    output_format: str = "text"
    time_budget: float | None = None
    no_cache: bool = False

    def __post_init__(self):
        if self.thread_count < 1:
            raise ValueError("thread count must be >= 1")


def _table(cfg: RunConfig) -> GroupTable:
    return cache.get_table(cfg.group_type, cfg.cache_path, use_cache=not cfg.no_cache)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def exponents(table: GroupTable) -> list[int] | None:
    factors = q_analog_factorization(QPoly.from_degrees(int(x) for x in table.length))
    return None if factors is None else [n - 1 for n in factors]


# ---------------------------------------------------------------------------

def cmd_build(cfg: RunConfig, args) -> int:
    table = _table(cfg)
    info = {
        "type": cfg.group_type,
        "size": table.size,
        "exponents": exponents(table),
        "max_length": int(table.length.max()),
        "reflections": len(table.reflections),
    }
    if cfg.output_format == "json":
        _emit(_dumps(info), args.out)
    else:
        exps = ",".join(map(str, info["exponents"] or []))
        _emit(f"{cfg.group_type}: size {info['size']}, exponents {exps}, "
              f"max length {info['max_length']}, reflections {info['reflections']}\n", args.out)
    return EXIT_OK


def cmd_no_lehmer(cfg: RunConfig, args) -> int:
    table = _table(cfg)
    t0 = time.perf_counter()
    try:
        cert = prove_no_lehmer_code(table, max_rank=args.max_rank)
    except CertificateFailure as exc:
        log.error("no certificate: %s", exc)
        return EXIT_CHECK
    elapsed = time.perf_counter() - t0
    if cfg.time_budget is not None and elapsed > cfg.time_budget:
        log.warning("pipeline took %.1fs, over the %.1fs budget", elapsed, cfg.time_budget)
    print(f"{cert.embedding_count} embeddings, {len(cert.classes)} classes, "
          f"{cert.family_witness_count} single-family and {cert.hall_witness_count} Hall witnesses",
          file=sys.stderr)
    _emit(_dumps(cert.to_json(table)), args.out)
    return EXIT_OK


def cmd_verify_cert(cfg: RunConfig, args) -> int:
    try:
        data = json.loads(Path(args.path).read_text())
        mat = tuple(tuple(r) for r in data["coxeter_matrix"])
        table = cache.get_table(mat, cfg.cache_path, use_cache=not cfg.no_cache)
        problems = verify_certificate(data, table, recheck_enumeration=not args.quick)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        log.error("cannot read certificate: %s", exc)
        return EXIT_USAGE
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return EXIT_CHECK
    print("certificate verified", file=sys.stderr)
    return EXIT_OK


def cmd_weak_verify(cfg: RunConfig, args) -> int:
    table = _table(cfg)
    report = verify_weak_code(build_weak_code(table))
    if cfg.output_format == "json":
        _emit(_dumps(report.to_dict(table)), args.out)
    else:
        _emit(
            f"L1 injective: {report.injective[1]} (image size {report.image_size[1]})\n"
            f"L2 injective: {report.injective[2]} (image size {report.image_size[2]})\n"
            f"condition 1: {report.condition1}\n"
            f"condition 2: {report.condition2}\n"
            f"multicomplex intervals: L1 {report.multicomplex_count[1]}, L2 {report.multicomplex_count[2]}\n"
            f"condition 3: {report.condition3}\n",
            args.out,
        )
    return EXIT_OK if report.ok else EXIT_CHECK


def cmd_interval(cfg: RunConfig, args) -> int:
    table = _table(cfg)
    w = table.from_word1(parse_word(args.word))
    mc = multicomplex_for_interval(build_weak_code(table), w)
    if cfg.output_format == "json":
        _emit(_dumps(mc.to_dict(table)), args.out)
    else:
        maxima = " ".join("(" + ",".join(map(str, m)) + ")" for m in mc.maxima)
        _emit(
            f"w = {table.word_str(w) or 'e'}\n"
            f"|[e,w]| = {len(mc.points)}\n"
            f"code L{mc.which}, automorphism {mc.automorphism}\n"
            f"maxima: {maxima}\n"
            f"f-polynomial: {mc.f_polynomial}\n",
            args.out,
        )
    return EXIT_OK


def cmd_figures(cfg: RunConfig, args) -> int:
    table = _table(cfg)
    try:
        lat = build_pal_lattice(build_weak_code(table))
    except StructureFailure as exc:
        log.error("%s", exc)
        return EXIT_CHECK
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "pal_sorted.dot").write_text(lat.dot_sorted)
    (out / "pal_unimodal.dot").write_text(lat.dot_image)
    (out / "pal_report.json").write_text(_dumps(lat.to_dict(table)))
    print(f"wrote {out / 'pal_sorted.dot'}, {out / 'pal_unimodal.dot'}, {out / 'pal_report.json'}", file=sys.stderr)
    return EXIT_OK


def cmd_pal(cfg: RunConfig, args) -> int:
    table = _table(cfg)
    code = build_weak_code(table)
    lat = build_pal_lattice(code, strict=False)
    if cfg.output_format == "json":
        _emit(_dumps(lat.to_dict(table)), args.out)
        return EXIT_OK
    lines = [f"|Pal| = {len(lat.polynomials)}, |U(L1)| = {len(lat.unimodal)}, "
             f"|U(L2)| = {len(unimodal_elements(code, 2))}"]
    for w, t in zip(lat.unimodal, lat._codes):
        lines.append(f"{table.word_str(w) or 'e':>40}  L1={t}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_msequence(cfg: RunConfig, args) -> int:
    ok = is_m_sequence(args.seq)
    print("true" if ok else "false")
    return EXIT_OK


def cmd_search_code(cfg: RunConfig, args) -> int:
    table = _table(cfg)
    caps = [int(c) for c in args.caps.split(",")] if args.caps else exponents(table)
    if caps is None:
        log.error("cannot read exponents; pass --caps")
        return EXIT_USAGE
    try:
        code = search_full_lehmer_code(table, caps)
    except ShapeMismatch as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    if code is None:
        print(f"no Lehmer code for {cfg.group_type} against box {tuple(caps)}", file=sys.stderr)
        payload = {"type": cfg.group_type, "caps": caps, "found": False, "code": None}
    else:
        payload = {
            "type": cfg.group_type, "caps": caps, "found": True,
            "code": [[list(x), w, table.word_str(w)] for x, w in zip(code.source.elements, code.assignment)],
        }
    if cfg.output_format == "json":
        _emit(_dumps(payload), args.out)
    elif code is not None:
        lines = [f"{'(' + ','.join(map(str, x)) + ')':>14}  {table.word_str(w) or 'e'}"
                 for x, w in zip(code.source.elements, code.assignment)]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "no-lehmer": cmd_no_lehmer,
    "verify-cert": cmd_verify_cert,
    "weak-verify": cmd_weak_verify,
    "interval": cmd_interval,
    "figures": cmd_figures,
    "pal": cmd_pal,
    "msequence": cmd_msequence,
    "search-code": cmd_search_code,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", dest="group_type", default="F4", help="Coxeter type (F4, H3, A3, B2, ...)")
    common.add_argument("--threads", type=int, default=1, help="worker count (output does not depend on it)")
    common.add_argument("--cache", default=None, help=f"cache directory (default ${cache.ENV_CACHE_DIR} or ~/.cache/f4lehmer)")
    common.add_argument("--no-cache", action="store_true", help="always rebuild the group table")
    common.add_argument("--time-budget", type=float, default=None, help="warn if the run exceeds this many seconds")
    common.add_argument("-o", "--out", default=None, help="write output to this file instead of stdout")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--dot", dest="fmt", action="store_const", const="dot")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")

    p = argparse.ArgumentParser(prog="f4lehmer", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="build or load a group table and summarize it")
    s = sub.add_parser("no-lehmer", parents=[common], help="certify that F4 has no Lehmer code")
    s.add_argument("--max-rank", type=int, default=6)
    s = sub.add_parser("verify-cert", parents=[common], help="replay a certificate")
    s.add_argument("path")
    s.add_argument("--quick", action="store_true", help="skip re-enumerating the embeddings")
    sub.add_parser("weak-verify", parents=[common], help="check the weak Lehmer code conditions")
    s = sub.add_parser("interval", parents=[common], help="multicomplex for a lower interval [e,w]")
    s.add_argument("word", help='1-based generator word, e.g. "4 3 1 2 3 4 2 1" ("" for e)')
    s = sub.add_parser("figures", parents=[common], help="write both Pal lattice Hasse diagrams as DOT")
    s.add_argument("--out-dir", default=".")
    sub.add_parser("pal", parents=[common], help="list Pal(F4) and the unimodal elements")
    s = sub.add_parser("msequence", parents=[common], help="Macaulay test for a sequence")
    s.add_argument("seq", nargs="+", type=int)
    s = sub.add_parser("search-code", parents=[common], help="search for a full Lehmer code")
    s.add_argument("--caps", default=None, help="comma-separated box caps (default: the exponents)")
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            group_type=args.group_type,
            command=args.command,
            thread_count=args.threads,
            cache_path=args.cache,
            output_format=args.fmt or "text",
            time_budget=args.time_budget,
            no_cache=args.no_cache,
        )
        return COMMANDS[args.command](cfg, args)
    except (BadWord, WrongType, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except (EnumerationBound, cache.CacheError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
