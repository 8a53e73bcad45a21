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

from utils.load_preferences import WORKERS_ENV

SPACES = ("open", "mbar", "fld", "ld", "flc")
ACYCLIC_SPACES = ("p1", "flc")
PROG = "logdisks"


def _common_flags() -> argparse.ArgumentParser:
    """
    Flags accepted both before and after the subcommand.

    Defaults are suppressed so a subcommand never overwrites a value given
    before it; `commands.resolve_settings` fills in what is missing.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default=argparse.SUPPRESS, help="Output format")
    common.add_argument("--out", default=argparse.SUPPRESS, help="Also write the report to a .json or .xlsx file")
    common.add_argument("--config", default=argparse.SUPPRESS, help="TOML settings file")
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS, help="Report wall time")
    common.add_argument("--log-level", default=argparse.SUPPRESS, help="Logging level, e.g. DEBUG")
    common.add_argument(
        "--workers", type=int, default=argparse.SUPPRESS, help=f"Processes for counting sweeps (overrides {WORKERS_ENV})"
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Exact checks for the log-geometric model of the framed little disks operad.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    strata = sub.add_parser("strata", parents=[common], help="Boundary strata of Mbar_{0,n+1} as stable trees")
    strata.add_argument("--n", type=int, required=True, help="Operad arity n >= 2")
    strata.add_argument("--codim", type=int, default=None, help="Only this codimension")

    flc = sub.add_parser("flc", parents=[common], help="FLC operad compositions and axioms")
    flc_sub = flc.add_subparsers(dest="action", metavar="ACTION", required=True)
    compose = flc_sub.add_parser("compose", parents=[common], help="The map FLC_n x FLC_m -> FLC_{n+m-1} at slot i")
    compose.add_argument("--m", type=int, required=True, help="Inner arity")
    compose.add_argument("--n", type=int, required=True, help="Outer arity")
    compose.add_argument("--i", type=int, required=True, help="Slot 1..n")
    axioms = flc_sub.add_parser("check-axioms", parents=[common], help="Operad identities for trees and FLC")
    axioms.add_argument("--max-arity", type=int, default=4)
    axioms.add_argument("--strata-arity", type=int, default=3, help="Check stratum charts up to this arity")

    betti = sub.add_parser("betti", parents=[common], help="Betti tables from point counts")
    betti.add_argument("--space", choices=SPACES, required=True)
    betti.add_argument("--n", type=int, required=True, help="Marks for open/mbar, arity for fld/ld/flc")
    betti.add_argument("--primes", default=None, help="Extra primes, comma separated")

    purity = sub.add_parser("purity", parents=[common], help="Weight-row identities of the E1 table of M_{0,n}")
    purity.add_argument("--n", type=int, required=True, help="Number of marks, 4..8")

    acyclic = sub.add_parser("acyclic", parents=[common], help="Proper-acyclicity certificate")
    acyclic.add_argument("--space", choices=ACYCLIC_SPACES, required=True)
    acyclic.add_argument("--points", type=int, default=None, help="Number of points on P^1")
    acyclic.add_argument("--n", type=int, default=None, help="FLC arity")

    bv = sub.add_parser("bv", parents=[common], help="BV operad rewriting")
    bv_sub = bv.add_subparsers(dest="action", metavar="ACTION", required=True)
    bv_compose = bv_sub.add_parser("compose", parents=[common], help="Partial composition of two JSON terms")
    bv_compose.add_argument("--expr-file", required=True, help="Outer term")
    bv_compose.add_argument("--slot", type=int, required=True)
    bv_compose.add_argument("--with", dest="with_file", required=True, help="Inner term")
    normal = bv_sub.add_parser("normal-form", parents=[common], help="Normal form of a JSON term")
    normal.add_argument("--expr-file", required=True)
    bv_dims = bv_sub.add_parser("dims", parents=[common], help="Graded dimensions of BV(n) and Ger(n)")
    bv_dims.add_argument("--n", type=int, required=True)
    relations = bv_sub.add_parser("relations", parents=[common], help="BV relation suite")
    relations.add_argument("--max-arity", type=int, default=3)

    formality = sub.add_parser("formality", parents=[common], help="Formal cooperad model")
    formality_sub = formality.add_subparsers(dest="action", metavar="ACTION", required=True)
    report = formality_sub.add_parser("report", parents=[common], help="Certificate bundle for arity n")
    report.add_argument("--n", type=int, required=True)

    verify = sub.add_parser("verify-all", parents=[common], help="Run every acceptance check")
    verify.add_argument("--max-n", type=int, default=None, help="Arity bound (settings [verify] max_n by default)")
    verify.add_argument("--seed", type=int, default=0, help="Seed for the randomized checks")

    return parser
