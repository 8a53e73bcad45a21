# Copyright 2025 Egidio Pulicanò
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import argparse
import logging
import sys
import time
from dataclasses import replace
from typing import Callable, Optional, Sequence

from bv.algebra import bv_compose, bv_dims, check_bv_relations, ger_dims
from bv.formality import formality_report
from bv.terms import bv_normal_form, element_to_json, read_element
from cli.parser import build_parser
from cli.report import ReportBundle
from cli.verify import verify_all
from cohomology.betti import (
    betti_open,
    count_bar,
    count_conf,
    count_open,
    fld,
    flc_top,
    ld,
    mbar,
)
from cohomology.poincare import PoincarePolynomial, one_plus_t
from cohomology.weights import acyclicity_certificate, build_e1, purity_check
from data_manager.report_saver import ReportSaver
from operad.axioms import AxiomReport
from operad.comm import check_comm_axioms
from operad.flc import check_flc_axioms, flc_comp
from operad.trees import check_graft_axioms, divisor_count, enumerate_trees, strata_by_grafting
from utils.exceptions import DimensionMismatchError, FreenessViolationError, PurityViolationError
from utils.load_preferences import PreferencesLoader, RuntimeSettings
from utils.log_setup import configure_logging
from utils.primes import interpolation_primes, merge_primes, parse_primes

logger = logging.getLogger(__name__)

VERDICT_ERRORS = (PurityViolationError, FreenessViolationError, DimensionMismatchError)
DOMAIN_ERRORS = (ValueError, KeyError, FileNotFoundError, OSError)
GRAFT_CROSSCHECK_ARITY = 6


# ----------------------------------------------------------------------
# Helpers
# ----------------------------------------------------------------------


def _table_rows(poly: PoincarePolynomial) -> list[list[int]]:
    return [[k, b] for k, b in enumerate(poly.to_list())]


def _add_axiom_reports(bundle: ReportBundle, reports: Sequence[AxiomReport]) -> None:
    for report in reports:
        detail = f"{report.checked} instances"
        if report.failures:
            detail += f"; first failure: {report.failures[0]}"
        bundle.add_check(report.name, report.passed, detail)
    bundle.add_table(
        "axioms",
        ["identity", "checked", "failed"],
        [[r.name, r.checked, r.failed] for r in reports],
    )
    bundle.data["axioms"] = [r.as_dict() for r in reports]


def _signed_value(table: PoincarePolynomial, dim: int, q: int) -> int:
    return sum((-1) ** k * table[k] * q ** (dim - k) for k in range(dim + 1))


def _proper_value(table: PoincarePolynomial, dim: int, q: int) -> int:
    return sum(table[2 * k] * q ** k for k in range(dim + 1))


def _monomial_text(entries) -> str:
    return " * ".join(s if e == 1 else f"{s}^{e}" for s, e in entries) or "1"


# ----------------------------------------------------------------------
# Handlers
# ----------------------------------------------------------------------


def cmd_strata(args: argparse.Namespace, settings: RuntimeSettings) -> ReportBundle:
    n = args.n
    bundle = ReportBundle("strata", {"n": n, "codim": args.codim})
    codims = [args.codim] if args.codim is not None else list(range(max(n - 1, 1)))
    census = []
    trees = []
    for c in codims:
        found = enumerate_trees(n, c)
        census.append([c, len(found)])
        trees.extend([c, str(t)] for t in found)
        if n <= GRAFT_CROSSCHECK_ARITY:
            grafted = strata_by_grafting(n, c) if c <= n - 2 else set()
            bundle.add_check(
                f"codim {c} by grafting",
                grafted == set(found),
                f"{len(found)} enumerated, {len(grafted)} grafted",
            )
    if 1 in codims:
        expected = divisor_count(n)
        found = dict((c, k) for c, k in census)[1]
        bundle.add_check("boundary divisors", found == expected, f"{found} = {expected} bipartitions")
    bundle.add_table("census", ["codim", "strata"], census)
    bundle.add_table("trees", ["codim", "tree"], trees)
    return bundle


def cmd_flc_compose(args: argparse.Namespace, settings: RuntimeSettings) -> ReportBundle:
    m, n, i = args.m, args.n, args.i
    bundle = ReportBundle("flc compose", {"m": m, "n": n, "i": i})
    f = flc_comp(m, n, i)
    bundle.add_table("matching", ["target", "source monomial"], [[label, _monomial_text(e)] for label, e in f.rows])
    matrix = f.exponent_matrix
    bundle.add_table(
        "exponent_matrix",
        ["target"] + list(f.source.bundles),
        [[label] + [int(matrix[r, c]) for c in range(matrix.cols)] for r, (label, _) in enumerate(f.rows)],
    )
    bundle.add_check(
        "fiber bookkeeping",
        f.source.fiber_dim == f.target.fiber_dim + 1,
        f"{f.source.fiber_dim} = {f.target.fiber_dim} + 1",
    )
    image = f.stratum_image
    if m >= 2 and n >= 2:
        bundle.add_check("image codimension", image.codim >= 1, f"{image} has codimension {image.codim}")
    bundle.data["map"] = f.to_json()
    bundle.data["stratum_image"] = image.to_json() if image is not None else None
    return bundle


def cmd_flc_axioms(args: argparse.Namespace, settings: RuntimeSettings) -> ReportBundle:
    bundle = ReportBundle("flc check-axioms", {"max_arity": args.max_arity, "strata_arity": args.strata_arity})
    reports = check_graft_axioms(args.max_arity)
    reports += check_flc_axioms(args.max_arity, args.strata_arity)
    reports += check_comm_axioms("free", args.max_arity)
    _add_axiom_reports(bundle, reports)
    return bundle


def _counts(space: str, n: int) -> tuple[str, Optional[Callable[[int], int]], int]:
    """Counted space label, its count as a function of q, and the degree of its counting polynomial."""
    if space == "open":
        return f"M_0,{n}", lambda p: count_open(n, p), n - 3
    if space == "mbar":
        return f"Mbar_0,{n}", lambda p: count_bar(n, p), n - 3
    if space in ("ld", "fld"):
        return f"Conf_{n}", lambda p: count_conf(n, p), n
    if n == 1:
        return "pt", None, 0
    return f"M_0,{n + 1}", lambda p: count_open(n + 1, p), n - 2


def cmd_betti(args: argparse.Namespace, settings: RuntimeSettings) -> ReportBundle:
    space, n = args.space, args.n
    extra = parse_primes(args.primes) if args.primes else []
    bundle = ReportBundle("betti", {"space": space, "n": n, "primes": extra})
    compute = {"open": betti_open, "mbar": mbar, "fld": fld, "ld": ld, "flc": flc_top}[space]
    table = compute(n, extra or None, settings.workers)
    bundle.add_table("betti", ["k", "b_k"], _table_rows(table))
    bundle.data["coefficients"] = table.to_list()
    bundle.data["poincare"] = str(table)

    label, count, dim = _counts(space, n)
    if count is not None:
        primes = merge_primes(interpolation_primes(dim), extra)
        base = table
        if space == "fld":
            base = ld(n, extra or None, settings.workers)
        elif space == "flc":
            base = betti_open(n + 1, extra or None, settings.workers)
        rows = []
        for p in primes:
            value = count(p)
            expected = _proper_value(base, dim, p) if space == "mbar" else _signed_value(base, dim, p)
            rows.append([p, value, expected])
            bundle.add_check(f"|{label}(F_{p})|", value == expected, f"{value} = {expected}")
        bundle.add_table("counts", ["q", f"|{label}(F_q)|", "from table"], rows)
    if space == "fld":
        little = ld(n, extra or None, settings.workers)
        bundle.add_check("circle factors", table == one_plus_t(n) * little, f"{table} = (1 + t)^{n} ({little})")
    if space == "flc" and n >= 2:
        framed = fld(n, extra or None, settings.workers)
        bundle.add_check("realization = FLD", table == framed, f"{table} = {framed}")
    return bundle


def cmd_purity(args: argparse.Namespace, settings: RuntimeSettings) -> ReportBundle:
    n = args.n
    bundle = ReportBundle("purity", {"n": n})
    e1 = build_e1(n)
    report = purity_check(n, e1)
    bundle.add_table(
        "e1",
        ["weight"] + [f"p={p}" for p in range(e1.dim + 1)],
        [[2 * q] + e1.row(q) for q in range(e1.dim + 1)],
    )
    bundle.add_table("census", ["codim", "strata"], [[p, c] for p, c in enumerate(e1.census)])
    for row in report.rows:
        bundle.add_check(f"weight {row.weight}", row.holds, f"{row.text} (b = {row.betti})")
    bundle.data["level"] = report.level
    bundle.data["rows"] = [row.to_json() for row in report.rows]
    return bundle


def cmd_acyclic(args: argparse.Namespace, settings: RuntimeSettings) -> ReportBundle:
    if args.space == "p1":
        if args.points is None:
            raise ValueError("acyclic --space p1 needs --points")
        value = args.points
    else:
        if args.n is None:
            raise ValueError("acyclic --space flc needs --n")
        value = args.n
    bundle = ReportBundle("acyclic", {"space": args.space, "value": value})
    cert = acyclicity_certificate(args.space, value)
    bundle.add_table(
        "dims",
        ["q", "hodge", "betti"],
        [[k, h, b] for k, (h, b) in enumerate(zip(cert.hodge_dims, cert.betti_dims))],
    )
    if cert.coherent:
        bundle.add_table("coherent", ["q", "h0", "h1"], [[k, h0, h1] for k, (h0, h1) in enumerate(cert.coherent)])
    bundle.add_check(
        f"{cert.space} proper acyclic",
        cert.passed,
        f"hodge {list(cert.hodge_dims)} = betti {list(cert.betti_dims)}",
    )
    bundle.data["certificate"] = cert.to_json()
    return bundle


def _element_table(bundle: ReportBundle, name: str, element) -> None:
    payload = element_to_json(element)
    bundle.add_table(
        name,
        ["monomial", "coefficient", "degree"],
        [[t["monomial"], t["coefficient"], t["degree"]] for t in payload["terms"]],
    )


def cmd_bv_compose(args: argparse.Namespace, settings: RuntimeSettings) -> ReportBundle:
    bundle = ReportBundle("bv compose", {"expr_file": args.expr_file, "slot": args.slot, "with": args.with_file})
    a = read_element(args.expr_file)
    b = read_element(args.with_file)
    result = bv_compose(a, b, args.slot)
    _element_table(bundle, "result", result)
    bundle.add_check("normal form", bv_normal_form(result) == result, str(result))
    if not a.is_zero and not b.is_zero and len(a.degrees()) == 1 and len(b.degrees()) == 1 and not result.is_zero:
        bundle.add_check(
            "degree",
            result.degrees() == [a.degree + b.degree],
            f"{result.degrees()} = [{a.degree} + {b.degree}]",
        )
    bundle.data["outer"] = element_to_json(a)
    bundle.data["inner"] = element_to_json(b)
    bundle.data["result"] = element_to_json(result)
    return bundle


def cmd_bv_normal_form(args: argparse.Namespace, settings: RuntimeSettings) -> ReportBundle:
    bundle = ReportBundle("bv normal-form", {"expr_file": args.expr_file})
    element = read_element(args.expr_file)
    _element_table(bundle, "normal_form", element)
    bundle.add_check("idempotent", bv_normal_form(element) == element, str(element))
    bundle.data["element"] = element_to_json(element)
    return bundle


def cmd_bv_dims(args: argparse.Namespace, settings: RuntimeSettings) -> ReportBundle:
    n = args.n
    bundle = ReportBundle("bv dims", {"n": n})
    bv, ger = bv_dims(n), ger_dims(n)
    length = max(len(bv), len(ger))
    bundle.add_table("dims", ["k", "BV", "Ger"], [[k, bv[k], ger[k]] for k in range(length)])
    framed, little = fld(n, None, settings.workers), ld(n, None, settings.workers)
    bundle.add_check("BV = FLD", bv == framed, f"{bv.to_list()} = {framed.to_list()}")
    bundle.add_check("Ger = LD", ger == little, f"{ger.to_list()} = {little.to_list()}")
    bundle.data["bv"] = bv.to_list()
    bundle.data["ger"] = ger.to_list()
    return bundle


def cmd_bv_relations(args: argparse.Namespace, settings: RuntimeSettings) -> ReportBundle:
    bundle = ReportBundle("bv relations", {"max_arity": args.max_arity})
    _add_axiom_reports(bundle, check_bv_relations(args.max_arity))
    return bundle


def cmd_formality_report(args: argparse.Namespace, settings: RuntimeSettings) -> ReportBundle:
    n = args.n
    bundle = ReportBundle("formality report", {"n": n})
    report = formality_report(n)
    model = report.model
    bundle.add_table(
        "dims",
        ["k", "H0 Omega^k", "BV", "(1+t)^n LD"],
        [[k, d, report.bv[k], (one_plus_t(n) * report.pushout)[k]] for k, d in enumerate(model.dims)],
    )
    bundle.add_table(
        "cocompositions",
        ["outer", "inner", "dims"],
        [[m, k, list(d)] for m, k, d in model.cocompositions],
    )
    bundle.add_check("zero differential", model.zero_differential, f"{len(model.differential)} zero maps")
    bundle.add_check("identity morphism", model.identity_morphism, f"dims {list(model.dims)}")
    bundle.add_check(
        "pushout",
        report.pushout == report.ger,
        f"FLC_{n} / (1 + t)^{n} = {report.pushout.to_list()} = LD_{n}",
    )
    bundle.data["report"] = report.to_json()
    return bundle


def cmd_verify_all(args: argparse.Namespace, settings: RuntimeSettings) -> ReportBundle:
    max_n = args.max_n if args.max_n is not None else settings.max_n
    return verify_all(max_n, workers=settings.workers, seed=args.seed)


HANDLERS: dict[tuple, Callable[[argparse.Namespace, RuntimeSettings], ReportBundle]] = {
    ("strata", None): cmd_strata,
    ("flc", "compose"): cmd_flc_compose,
    ("flc", "check-axioms"): cmd_flc_axioms,
    ("betti", None): cmd_betti,
    ("purity", None): cmd_purity,
    ("acyclic", None): cmd_acyclic,
    ("bv", "compose"): cmd_bv_compose,
    ("bv", "normal-form"): cmd_bv_normal_form,
    ("bv", "dims"): cmd_bv_dims,
    ("bv", "relations"): cmd_bv_relations,
    ("formality", "report"): cmd_formality_report,
    ("verify-all", None): cmd_verify_all,
}


# ----------------------------------------------------------------------
# Entry point
# ----------------------------------------------------------------------


def resolve_settings(args: argparse.Namespace) -> RuntimeSettings:
    """
    Settings file first, then command line overrides.

    Raises:
        FileNotFoundError: If an explicit --config file is missing.
        RuntimeError: If the TOML is malformed.
        ValueError: If a value is out of range.
    """
    config = getattr(args, "config", None)
    settings = PreferencesLoader(config, required=config is not None).load_runtime_settings()
    overrides = {}
    if getattr(args, "format", None):
        overrides["output_format"] = args.format
    if getattr(args, "log_level", None):
        overrides["log_level"] = args.log_level.upper()
    if getattr(args, "workers", None) is not None:
        if args.workers < 1:
            raise ValueError(f"--workers must be positive, got {args.workers}")
        overrides["workers"] = args.workers
    return replace(settings, **overrides)


def run(argv: Sequence[str]) -> int:
    """
    Parse argv, run one subcommand and print its report.

    Returns:
        int: 0 if every verdict passed, 1 on a failing verdict, 2 on usage
        or parameter errors.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0

    try:
        settings = resolve_settings(args)
        configure_logging(settings.log_level)
    except (RuntimeError, *DOMAIN_ERRORS) as e:
        print(f"{parser.prog}: error: {e}", file=sys.stderr)
        return 2

    key = (args.command, getattr(args, "action", None))
    handler = HANDLERS[key]
    logger.info("Running %s", " ".join(k for k in key if k))
    start = time.perf_counter()
    try:
        bundle = handler(args, settings)
    except VERDICT_ERRORS as e:
        bundle = ReportBundle(" ".join(k for k in key if k), {})
        bundle.add_check(type(e).__name__, False, str(e))
    except DOMAIN_ERRORS as e:
        print(f"{parser.prog}: error: {e}", file=sys.stderr)
        return 2
    if getattr(args, "timing", False):
        bundle.wall_time = time.perf_counter() - start

    print(bundle.render(settings.output_format))
    out = getattr(args, "out", None)
    if out:
        try:
            with ReportSaver(out) as saver:
                saver.save(bundle)
        except DOMAIN_ERRORS as e:
            print(f"{parser.prog}: error: {e}", file=sys.stderr)
            return 2
    for check in bundle.failures():
        print(f"FAILED {check.name}: {check.detail}", file=sys.stderr)
    return 0 if bundle.passed else 1
