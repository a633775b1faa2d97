"""Command-line front end: ``families``, ``certify`` and ``lemmas``.

Every command writes a UTF-8 JSON report with sorted keys, exact rationals as
"num/den" strings and a top-level schema_version.  Reports contain no
timestamps, so identical invocations produce identical bytes.

Exit codes: 0 pass, 1 fail, 2 usage error, 3 undecided.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from itertools import combinations_with_replacement

from . import __version__
from .bounds import (
    CodimProblem,
    beta_class0,
    beta_sharp,
    bound_report,
    codim_lower_bound,
    codim_sharp_report,
    epsilon_zeta_check,
    fraction_str,
    lemma25_check,
    mu_bruteforce,
)
from .family import (
    FamilyDescriptor,
    FamilyInstance,
    classify_point,
    degree_of_V,
    enumerate_descriptors,
    index_check,
    sample_instance,
    taylor_frame,
    validate_descriptor,
)
from .graphs import lemma15_holds, lemma15_is_equality, lemma16_holds, lemma_census, path_counts
from .groebner import DEFAULT_MAX_PAIRS
from .poly import MERSENNE_31, GF, PrimeField
from .regularity import CAVEAT, DIMENSION_READING, is_regular
from .seeds import derive

SCHEMA_VERSION = 1
EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_UNDECIDED = 0, 1, 2, 3
FAULTS = ("lemma15", "lemma16", "beta")


class UsageError(Exception):
    pass


def dump_report(report: dict, path: str | None) -> str:
    text = json.dumps({"schema_version": SCHEMA_VERSION, **report}, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if path and path != "-":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


def families_report(M: int) -> dict:
    if M < 4:
        raise UsageError("--dim must be at least 4")
    entries = []
    for desc in enumerate_descriptors(M):
        ok, problems = validate_descriptor(desc)
        entries.append(
            {
                "descriptor": desc.to_json(),
                "degV": degree_of_V(desc),
                "index_check": index_check(desc),
                "admissible": ok,
                "problems": problems,
            }
        )
    return {"command": "families", "M": M, "count": len(entries), "families": entries, "version": __version__}


def _descriptor_checks(desc: FamilyDescriptor, beta_fault: bool = False) -> dict:
    b0 = min(beta_class0(desc, i) for i in range(desc.m))
    if beta_fault:
        b0 -= desc.M
    out = {"beta_class0": fraction_str(b0), "beta_class0_ok": b0 >= desc.M + 1}
    if 2 in desc.l:
        bs = beta_sharp(desc)
        out.update(beta_sharp=fraction_str(bs), beta_sharp_ok=bs >= desc.M, codim_sharp=codim_sharp_report(desc))
    out["epsilon_zeta_ok"] = epsilon_zeta_check(desc.M, desc.k)
    return out


def _random_point(n: int, seed: int, prime: int) -> tuple:
    rng = random.Random(seed)
    return (1,) + tuple(rng.randrange(prime) for _ in range(n - 1))


def _load_family(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read family file: {exc}") from exc
    try:
        if "f" in data and "g" in data:
            return FamilyInstance.from_json(data), data.get("points", [])
        return FamilyDescriptor.from_json(data.get("descriptor", data)), None
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed family file: {exc}") from exc


def _parse_point(raw, domain) -> tuple:
    return tuple(domain.convert(Fraction(x)) if isinstance(x, str) else domain.convert(x) for x in raw)


def certify_report(
    family,
    points,
    *,
    samples: int,
    seed: int,
    prime: int,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    slice_trials: int = 8,
    graphs_max_n: int = 8,
) -> tuple[dict, int]:
    desc = family.descriptor if isinstance(family, FamilyInstance) else family
    ok, problems = validate_descriptor(desc)
    report = {
        "command": "certify",
        "descriptor": desc.to_json(),
        "admissible": ok,
        "problems": problems,
        "version": __version__,
        "seed": seed,
        "prime": prime,
        "notes": [CAVEAT, DIMENSION_READING],
    }
    if not ok:
        report["pass"] = False
        return report, EXIT_FAIL
    if prime <= 2 ** (2 * max(desc.l)) or prime % 2 == 0:
        raise UsageError(f"--prime must be an odd prime above 2^(2 max l) = {2 ** (2 * max(desc.l))}")

    bounds = bound_report(desc)
    report["degV"] = bounds.degV
    report["bounds"] = bounds.to_json()

    regs = []
    if isinstance(family, FamilyInstance):
        inst = family
        if not isinstance(inst.domain, PrimeField):
            F = GF(prime)
            inst = FamilyInstance(desc, tuple(f.change_domain(F) for f in inst.f), tuple(g.change_domain(F) for g in inst.g), F)
        report["prime"] = inst.domain.p
        for idx, raw in enumerate(points or []):
            pt = _parse_point(raw, inst.domain)
            entry = {"index": idx}
            try:
                classify_point(inst, pt)
                rep = is_regular(taylor_frame(inst, pt), max_pairs=max_pairs, slice_trials=slice_trials, seed=derive(seed, idx))
                entry.update(rep.to_json())
            except (ValueError, ArithmeticError) as exc:
                entry.update({"point": [str(x) for x in pt], "pass": False, "verdict": "error", "error": str(exc)})
            regs.append(entry)
    else:
        F = GF(prime)
        for e in range(desc.m + 1):
            for idx in range(samples):
                point_seed = derive(seed, e, idx)
                pt = _random_point(desc.nvars, derive(point_seed, 0), prime)
                inst, _ = sample_instance(desc, pt, e, derive(point_seed, 1), F)
                rep = is_regular(taylor_frame(inst, pt), max_pairs=max_pairs, slice_trials=slice_trials, seed=derive(point_seed, 2))
                regs.append({"index": idx, **rep.to_json()})
    report["regularity"] = regs
    report["regularity_contingent"] = not regs
    failing = [r for r in regs if not r["pass"] and r.get("verdict") != "undecided"]
    undecided = [r for r in regs if r.get("verdict") == "undecided"]
    report["failing_points"] = [{"index": r["index"], "class": r.get("class"), "point": r["point"]} for r in failing]

    census = lemma_census(graphs_max_n)
    checks = _descriptor_checks(desc)
    lemmas_clean = census.clean and all(v for k, v in checks.items() if k.endswith("_ok"))
    report["lemmas"] = {"graphs_checked": census.total, "graphs_clean": census.clean, **checks, "pass": lemmas_clean}

    overall = ok and bounds.passed and lemmas_clean and not failing and not undecided
    report["pass"] = overall
    if failing or not (bounds.passed and lemmas_clean):
        return report, EXIT_FAIL
    if undecided:
        return report, EXIT_UNDECIDED
    return report, EXIT_PASS


def _codim_sweep(max_len: int = 8, max_entry: int = 6) -> dict:
    """Prefix-sum codimension bound against a subset-minimum oracle."""
    checked = mismatches = 0
    for length in range(1, max_len + 1):
        for m_list in combinations_with_replacement(range(2, max_entry + 1), length):
            problem = CodimProblem(length, length - 1, m_list)
            oracle = min((mu_bruteforce(m_list, j + 1) - j) * (length - j) + 1 for j in range(length))
            checked += 1
            if codim_lower_bound(problem) != oracle:
                mismatches += 1
    return {"degree_lists": checked, "mismatches": mismatches}


def _lemma16_without_slack(graph) -> bool:
    # the "+ 1" dropped: the top two vertices then violate it
    p = path_counts(graph)
    return all(p[i] <= sum(p[i + 2 :]) for i in range(len(p)))


def lemmas_report(graphs_max_n: int, degrees_max_m: int, fault: str | None = None) -> tuple[dict, int]:
    if graphs_max_n < 1 or degrees_max_m < 1:
        raise UsageError("bounds must be at least 1")
    l15 = lemma15_holds
    l16 = lemma16_holds
    if fault == "lemma15":
        # strict inequality: the equality cases become counterexamples
        l15 = lambda g: lemma15_holds(g) and not lemma15_is_equality(g)
    if fault == "lemma16":
        l16 = _lemma16_without_slack
    census = lemma_census(graphs_max_n, lemma15=l15, lemma16=l16)

    beta_counter = []
    descriptors = 0
    for M in range(4, degrees_max_m + 1):
        for desc in enumerate_descriptors(M):
            descriptors += 1
            checks = _descriptor_checks(desc, beta_fault=fault == "beta")
            if not all(v for k, v in checks.items() if k.endswith("_ok")):
                beta_counter.append({"descriptor": desc.to_json(), **checks})

    lemma25_bad = []
    tuples = 0
    for c in range(1, 6):
        for s in combinations_with_replacement(range(2, 9), c):
            tuples += 1
            for part in ("i", "ii"):
                if not lemma25_check(part, s):
                    lemma25_bad.append({"part": part, "s": list(s)})

    ez_bad = [
        {"M": M, "k": k}
        for M in range(4, max(degrees_max_m, 4) + 1)
        for k in range(1, (M - 1) // 2 + 1)
        if not epsilon_zeta_check(M, k)
    ]
    codim = _codim_sweep()
    clean = census.clean and not beta_counter and not lemma25_bad and not ez_bad and not codim["mismatches"]
    report = {
        "command": "lemmas",
        "version": __version__,
        "fault_injected": fault,
        "graphs": census.to_json(),
        "descriptors": {"max_M": degrees_max_m, "checked": descriptors, "counterexamples": beta_counter},
        "lemma25": {"tuples": tuples, "counterexamples": lemma25_bad},
        "epsilon_zeta": {"max_M": max(degrees_max_m, 4), "counterexamples": ez_bad},
        "codim": codim,
        "pass": clean,
    }
    return report, EXIT_PASS if clean else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="itercover", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    fam = sub.add_parser("families", help="enumerate admissible descriptors of one dimension")
    fam.add_argument("--dim", type=int, required=True)
    fam.add_argument("--out", default="-")

    cert = sub.add_parser("certify", help="bounds plus sampled regularity for one family")
    cert.add_argument("--family", required=True, help="descriptor or instance JSON")
    cert.add_argument("--samples", type=int, default=4)
    cert.add_argument("--seed", type=int, default=0)
    cert.add_argument("--prime", type=int, default=MERSENNE_31)
    cert.add_argument("--max-pairs", type=int, default=DEFAULT_MAX_PAIRS)
    cert.add_argument("--slice-trials", type=int, default=8)
    cert.add_argument("--out", default="-")

    lem = sub.add_parser("lemmas", help="exhaustive checks of the combinatorial inequalities")
    lem.add_argument("--graphs-max-n", type=int, default=8)
    lem.add_argument("--degrees-max-m", type=int, default=30)
    lem.add_argument("--inject-fault", choices=FAULTS, default=None, help="corrupt one check (harness self-test)")
    lem.add_argument("--out", default="-")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        if args.command == "families":
            dump_report(families_report(args.dim), args.out)
            return EXIT_PASS
        if args.command == "certify":
            if args.samples < 0:
                raise UsageError("--samples must be non-negative")
            family, points = _load_family(args.family)
            report, code = certify_report(
                family,
                points,
                samples=args.samples,
                seed=args.seed,
                prime=args.prime,
                max_pairs=args.max_pairs,
                slice_trials=args.slice_trials,
            )
            dump_report(report, args.out)
            return code
        report, code = lemmas_report(args.graphs_max_n, args.degrees_max_m, args.inject_fault)
        dump_report(report, args.out)
        return code
    except UsageError as exc:
        print(f"itercover: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
