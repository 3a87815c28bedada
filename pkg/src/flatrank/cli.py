"""flatrank command-line interface.

Subcommands: rank, construct, verify {oddtown,fw,rainbow,bollobas,badbox},
experiment {exhaustive,random-semidiagonal,badbox-sample,oddtown-search}.

Exit codes: 0 = success / verified; 1 = hypothesis fails or a bound check is
violated; 2 = usage, parse, or cap errors.  Reports go to stdout as JSON and,
with --out, to a file in canonical bytes (atomic write).  FLATRANK_THREADS
caps chunk-level parallelism of the experiment sweeps.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import __version__
from .field import FieldDescriptor, GF2, make_binary_field, make_prime_field
from .formats import (
    badbox_from_document,
    badbox_to_document,
    configuration_from_document,
    digest_bytes,
    digest_params,
    hypergraph_from_document,
    load_document,
    make_report,
    save_document,
    set_family_from_document,
    setpair_from_document,
    tensor_from_document,
    tensor_to_document,
    tuple_family_from_document,
)
from .fw import (
    IntersectionPolynomial,
    SamplerExhausted,
    complete_graph_config,
    eval_h,
    find_config_witness,
    fw_flattening_bound,
    fw_size_bound,
    fw_tensor,
    is_config_satisfying,
    sample_badbox_family,
    verify_badbox_free,
)
from .rainbow import bollobas_verify, certify_no_rainbow_bound
from .search import (
    Rng,
    exhaustive_min_mfrank,
    random_cross_oddtown_search,
    random_semidiagonal_sweep,
)
from .setfam import verify_oddtown_chain
from .tensor import (
    axis_constant_construction,
    flattening_rank,
    is_semi_diagonal,
    max_flattening_rank,
    partition_construction,
    sum_flattening_ranks,
)


class VerificationFailed(Exception):
    """Raised when a verify pipeline finds its hypothesis or a bound broken."""


def _threads() -> int:
    raw = os.environ.get("FLATRANK_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"FLATRANK_THREADS must be an integer, got {raw!r}")


def _parse_field(spec: str) -> FieldDescriptor:
    spec = spec.strip().lower()
    if spec in ("gf2", "gf(2)", "2"):
        return GF2
    if spec.startswith("prime:"):
        return make_prime_field(int(spec.split(":", 1)[1]))
    if spec.startswith("binary:"):
        return make_binary_field(int(spec.split(":", 1)[1]))
    raise ValueError(f"unknown field spec {spec!r}; use gf2, prime:P, or binary:K")


def _read_file_digest(path: str) -> str:
    with open(path, "rb") as fh:
        return digest_bytes(fh.read())


def _emit(report: dict, out: str | None, csv_path: str | None = None) -> None:
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    if out:
        save_document(out, report)
    if csv_path:
        results = report.get("results", {})
        flat = {k: v for k, v in results.items() if isinstance(v, (int, float, str, bool)) or v is None}
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(list(flat))
            writer.writerow([flat[k] for k in flat])


def _cmd_rank(args) -> int:
    doc = load_document(args.tensor)
    t = tensor_from_document(doc)
    results: dict = {"dims": list(t.dims), "field": t.field.to_document()}
    if args.axis is not None:
        results["axis"] = args.axis
        results["frank"] = flattening_rank(t, args.axis)
    elif args.max:
        results["mfrank"] = max_flattening_rank(t)
        results["franks"] = [flattening_rank(t, i) for i in range(t.ndim)]
    else:
        results["sum_franks"] = sum_flattening_ranks(t)
        results["franks"] = [flattening_rank(t, i) for i in range(t.ndim)]
    _emit(make_report("rank", _read_file_digest(args.tensor), results), args.out)
    return 0


def _cmd_construct(args) -> int:
    field = _parse_field(args.field)
    if args.kind == "partition":
        t = partition_construction(args.a, args.d, field)
        meta = {"construction": "partition", "a": args.a, "d": args.d}
    else:
        if args.axis is None:
            raise ValueError("axis-constant construction needs --axis")
        t = axis_constant_construction(args.a, args.d, args.axis, field)
        meta = {"construction": "axis-constant", "a": args.a, "d": args.d, "axis": args.axis}
    doc = tensor_to_document(t, metadata=meta, sparse=args.sparse)
    if args.out:
        save_document(args.out, doc)
    else:
        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    return 0


def _cmd_verify(args) -> int:
    if args.target == "oddtown":
        fam = tuple_family_from_document(load_document(args.input))
        results = verify_oddtown_chain(fam)
        report = make_report("verify oddtown", _read_file_digest(args.input), results)
        _emit(report, args.out)
        if not results["verified"]:
            raise VerificationFailed("cross-Oddtown chain failed; see report")
        return 0

    if args.target == "fw":
        fam = set_family_from_document(load_document(args.input))
        cfg = configuration_from_document(load_document(args.config))
        distinct = args.distinct
        results: dict = {
            "size": len(fam.members),
            "k": cfg.k,
            "p": cfg.p,
            "size_bound": fw_size_bound(cfg, fam.n),
            "flattening_bounds": [fw_flattening_bound(cfg, fam.n, j) for j in range(cfg.k)],
        }
        satisfying = is_config_satisfying(fam, cfg, distinct=distinct)
        results["satisfying"] = satisfying
        if not satisfying:
            poly = IntersectionPolynomial(p=cfg.p, L=cfg.L)
            results["size_violations"] = [
                pos
                for pos, mask in enumerate(fam.members)
                if eval_h(poly, mask.bit_count() % cfg.p) == 0
            ]
            witness = find_config_witness(fam, cfg, distinct=distinct)
            results["witness"] = list(witness) if witness else None
            report = make_report("verify fw", _read_file_digest(args.input), results)
            _emit(report, args.out)
            raise VerificationFailed("family is not configuration-satisfying")
        if fam.members:
            t = fw_tensor(fam, cfg)
            franks = [flattening_rank(t, j) for j in range(cfg.k)]
            results.update(
                {
                    "semi_diagonal": is_semi_diagonal(t),
                    "franks": franks,
                    "franks_within_bounds": all(
                        fr <= b for fr, b in zip(franks, results["flattening_bounds"])
                    ),
                    "size_bound_ok": len(fam.members) <= results["size_bound"],
                }
            )
            ok = (
                results["semi_diagonal"]
                and results["franks_within_bounds"]
                and results["size_bound_ok"]
            )
        else:
            ok = True
        results["verified"] = ok
        report = make_report("verify fw", _read_file_digest(args.input), results)
        _emit(report, args.out)
        if not ok:
            raise VerificationFailed("configuration bound chain failed; see report")
        return 0

    if args.target == "rainbow":
        h = hypergraph_from_document(load_document(args.input))
        field = make_binary_field(args.field_k) if args.field_k else None
        results = certify_no_rainbow_bound(h, field)
        report = make_report("verify rainbow", _read_file_digest(args.input), results)
        _emit(report, args.out)
        if not results["verified"]:
            if results.get("rainbow_matching"):
                raise VerificationFailed("hypergraph contains a full-size rainbow matching")
            raise VerificationFailed("rainbow bound chain failed; see report")
        return 0

    if args.target == "bollobas":
        system = setpair_from_document(load_document(args.input))
        results = bollobas_verify(system)
        report = make_report("verify bollobas", _read_file_digest(args.input), results)
        _emit(report, args.out)
        if not results["verified"]:
            raise VerificationFailed("set-pair verification failed; see report")
        return 0

    # badbox
    fam = badbox_from_document(load_document(args.input))
    k = args.k if args.k else fam.k
    free = verify_badbox_free(fam.members_factors, k)
    flat = fam.flat_family()
    cfg = complete_graph_config(k)
    satisfying = is_config_satisfying(flat, cfg, distinct="positions")
    results = {
        "t": fam.t,
        "s": fam.s,
        "k": k,
        "size": len(fam.members_factors),
        "badbox_free": free,
        "config_satisfying": satisfying,
        "verified": free and satisfying,
    }
    report = make_report("verify badbox", _read_file_digest(args.input), results)
    _emit(report, args.out)
    if not results["verified"]:
        raise VerificationFailed("bad-box family failed verification")
    return 0


def _cmd_experiment(args) -> int:
    threads = _threads()
    if args.kind == "exhaustive":
        rep = exhaustive_min_mfrank(args.a, args.d, threads=threads)
        predicted = -(-args.a // (args.d - 1))
        results = rep.to_document()
        results["predicted_min_mfrank"] = predicted
        results["matches_prediction"] = rep.min_mfrank == predicted
        report = make_report(
            "experiment exhaustive",
            digest_params({"a": args.a, "d": args.d}),
            results,
        )
        _emit(report, args.out, args.csv)
        if not results["matches_prediction"]:
            raise VerificationFailed("exhaustive minimum disagrees with the predicted bound")
        return 0

    if args.kind == "random-semidiagonal":
        field = _parse_field(args.field)
        rep = random_semidiagonal_sweep(
            args.a, args.d, args.count, args.seed, field=field, threads=threads
        )
        report = make_report(
            "experiment random-semidiagonal",
            digest_params(
                {"a": args.a, "d": args.d, "count": args.count, "field": field.to_document()}
            ),
            rep.to_document(),
            seed=args.seed,
        )
        _emit(report, args.out, args.csv)
        if rep.violations:
            raise VerificationFailed(f"{rep.violations} tensors violated the rank bound")
        return 0

    if args.kind == "badbox-sample":
        try:
            fam = sample_badbox_family(args.t, args.s, args.seed, max_attempts=args.max_attempts)
        except SamplerExhausted as exc:
            report = make_report(
                "experiment badbox-sample",
                digest_params({"t": args.t, "s": args.s}),
                {"failed_attempts": exc.attempts, "family": None},
                seed=args.seed,
            )
            _emit(report, args.out, args.csv)
            raise VerificationFailed(str(exc))
        results = {
            "family": badbox_to_document(fam),
            "size": len(fam.members_factors),
            "k": fam.k,
            "attempts": fam.attempts,
        }
        report = make_report(
            "experiment badbox-sample",
            digest_params({"t": args.t, "s": args.s}),
            results,
            seed=args.seed,
        )
        _emit(report, args.out, args.csv)
        return 0

    # oddtown-search
    rep = random_cross_oddtown_search(args.n, args.d, args.budget, Rng(args.seed))
    report = make_report(
        "experiment oddtown-search",
        digest_params({"n": args.n, "d": args.d, "budget": args.budget}),
        rep.to_document(),
        seed=args.seed,
    )
    _emit(report, args.out, args.csv)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flatrank", description=__doc__)
    parser.add_argument("--version", action="version", version=f"flatrank {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser("rank", help="flattening ranks of a tensor document")
    p_rank.add_argument("tensor", help="tensor JSON file")
    mode = p_rank.add_mutually_exclusive_group(required=True)
    mode.add_argument("--axis", type=int, help="0-based axis for a single flattening rank")
    mode.add_argument("--max", action="store_true", help="max-flattening rank")
    mode.add_argument("--sum", action="store_true", help="sum of all flattening ranks")
    p_rank.add_argument("--out", help="write the report to this file")
    p_rank.set_defaults(func=_cmd_rank)

    p_con = sub.add_parser("construct", help="write an extremal construction tensor")
    p_con.add_argument("kind", choices=["partition", "axis-constant"])
    p_con.add_argument("--a", type=int, required=True, help="axis size")
    p_con.add_argument("--d", type=int, required=True, help="tensor order")
    p_con.add_argument("--axis", type=int, help="collapsed axis (axis-constant only)")
    p_con.add_argument("--field", default="gf2", help="gf2 | prime:P | binary:K")
    p_con.add_argument("--sparse", action="store_true", help="write sparse entries")
    p_con.add_argument("--out", help="output tensor file (default stdout)")
    p_con.set_defaults(func=_cmd_construct)

    p_ver = sub.add_parser("verify", help="run a bound-chain verifier")
    p_ver.add_argument(
        "target", choices=["oddtown", "fw", "rainbow", "bollobas", "badbox"]
    )
    p_ver.add_argument("input", help="input document")
    p_ver.add_argument("--config", help="configuration file (fw)")
    p_ver.add_argument(
        "--distinct",
        choices=["sets", "positions"],
        default="sets",
        help="distinctness semantics for fw witnesses",
    )
    p_ver.add_argument("--field-k", type=int, help="binary field degree override (rainbow)")
    p_ver.add_argument("--k", type=int, help="clique order override (badbox)")
    p_ver.add_argument("--out", help="write the report to this file")
    p_ver.set_defaults(func=_cmd_verify)

    p_exp = sub.add_parser("experiment", help="seeded sweeps and samplers")
    p_exp.add_argument(
        "kind",
        choices=["exhaustive", "random-semidiagonal", "badbox-sample", "oddtown-search"],
    )
    p_exp.add_argument("--a", type=int, help="axis size")
    p_exp.add_argument("--d", type=int, help="tensor order / tuple width")
    p_exp.add_argument("--n", type=int, help="ground-set size (oddtown-search)")
    p_exp.add_argument("--t", type=int, help="factor ground size (badbox-sample)")
    p_exp.add_argument("--s", type=int, help="number of factors (badbox-sample)")
    p_exp.add_argument("--count", type=int, help="sample count (random-semidiagonal)")
    p_exp.add_argument("--budget", type=int, help="candidate budget (oddtown-search)")
    p_exp.add_argument("--seed", type=int, help="RNG seed (required for randomized kinds)")
    p_exp.add_argument("--field", default="gf2", help="gf2 | prime:P | binary:K")
    p_exp.add_argument("--max-attempts", type=int, default=1000)
    p_exp.add_argument("--out", help="write the report to this file")
    p_exp.add_argument("--csv", help="also write a flat CSV summary")
    p_exp.set_defaults(func=_cmd_experiment)
    return parser


def _validate_experiment_args(args) -> None:
    need = {
        "exhaustive": ["a", "d"],
        "random-semidiagonal": ["a", "d", "count", "seed"],
        "badbox-sample": ["t", "s", "seed"],
        "oddtown-search": ["n", "d", "budget", "seed"],
    }[args.kind]
    missing = [name for name in need if getattr(args, name) is None]
    if missing:
        raise ValueError(f"experiment {args.kind} requires --" + ", --".join(missing))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "experiment":
            _validate_experiment_args(args)
        if args.command == "verify" and args.target == "fw" and not args.config:
            raise ValueError("verify fw requires --config")
        return args.func(args)
    except VerificationFailed as exc:
        print(f"flatrank: verification failed: {exc}", file=sys.stderr)
        return 1
    except (ValueError, IndexError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"flatrank: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
