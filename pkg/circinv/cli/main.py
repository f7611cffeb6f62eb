"""
The `circinv` command line.

    circinv factor 6 2
    circinv invariant 2 "x0^2 - x1^2" --express
    circinv invariant 30 --gap-witness
    circinv kernel 12 2 3 "w0*w2 - z0*z2*z4" --certificate
    circinv decompose 6 1,1,1,1,1,1
    circinv counterexample 30
    circinv verify-all 10 --json

Exit codes: 0 pass, 1 fail, 2 usage or parse error, 3 expansion guard tripped.
"""
import argparse
import asyncio
import sys
import time
from typing import Any, Callable, Dict, List, Optional

from circinv.algebra.expression import parse_poly, tokenize
from circinv.algebra.multipoly import Basis, Poly, apply_operator
from circinv.cli.report import (
    EXIT_FAIL,
    EXIT_GUARD,
    EXIT_USAGE,
    Report,
    encode_coefficient,
    encode_genpoly,
    encode_poly,
    error_report,
)
from circinv.cli.suites import SUITES, VerifyParams, run_suites
from circinv.config import Limits
from circinv.errors import CircinvError, ExpansionTooLarge, InvariantViolation
from circinv.theory.circulant import BlockSpec, theta_block, verify_factorization
from circinv.theory.ideal import InKernel, kernel_membership, parse_genpoly, verify_certificate
from circinv.theory.invariants import (
    express_in_generators,
    gap_witness,
    is_invariant,
    is_sl_invariant,
)
from circinv.theory.lattice import (
    Member,
    NonMember,
    counterexample,
    decompose,
    in_Vn,
    monoid_member_oracle,
)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _read_expression(text: str) -> str:
    return sys.stdin.read() if text == "-" else text


def detect_basis(text: str) -> Basis:
    """Y when the expression mentions a y-variable, X otherwise."""
    for token in tokenize(text):
        if token.kind == "var" and token.text.startswith("y"):
            return Basis.Y
    return Basis.X


def cmd_factor(args: argparse.Namespace, limits: Limits) -> Report:
    report = Report("factor", {"n": args.n, "p": args.p, "basis": args.basis})
    result = verify_factorization(args.n, args.p, Basis(args.basis), limits)
    report.details.update(
        holds=result.holds, left_terms=result.left_terms, right_terms=result.right_terms
    )
    report.say(f"Theta_{args.n} = product of {args.n // args.p} blocks Theta_{args.p} ({args.basis}-basis)")
    report.say(f"left terms: {result.left_terms}")
    report.say(f"right terms: {result.right_terms}")
    if result.first_mismatch is not None:
        alpha, left, right = result.first_mismatch
        report.verdict = "fail"
        report.details["first_mismatch"] = {
            "exponents": list(alpha),
            "left": encode_coefficient(left),
            "right": encode_coefficient(right),
        }
        report.say(f"first mismatch at {alpha}: {left} != {right}")
    if args.emit_blocks:
        blocks = []
        for i in range(args.n // args.p):
            block = theta_block(BlockSpec(args.n, args.p, i), limits)
            blocks.append(encode_poly(block))
            report.say(f"Theta_{args.p}(y({args.p})_{i}) = {block}")
        report.details["blocks"] = blocks
    return report


def _gap_witness_report(args: argparse.Namespace) -> Report:
    report = Report("invariant", {"n": args.n, "gap_witness": True})
    witness = gap_witness(args.n, args.budget)
    in_rn = isinstance(witness.oracle, Member)
    report.details.update(
        alpha=list(witness.alpha),
        monomial=str(witness.monomial),
        invariant=witness.invariant,
        in_Rn=in_rn,
        oracle=type(witness.oracle).__name__,
    )
    report.say(f"witness: {witness.monomial}")
    report.say(f"invariant: {str(witness.invariant).lower()}")
    report.say(f"in R_n: {str(in_rn).lower()}")
    if not witness.invariant or not isinstance(witness.oracle, NonMember):
        report.verdict = "fail"
    return report


def cmd_invariant(args: argparse.Namespace, limits: Limits) -> Report:
    if args.gap_witness:
        return _gap_witness_report(args)
    if args.expression is None:
        raise argparse.ArgumentTypeError("an expression is required unless --gap-witness is given")
    text = _read_expression(args.expression)
    basis = detect_basis(text)
    f = parse_poly(text, args.n, basis)
    report = Report(
        "invariant",
        {
            "n": args.n,
            "basis": f.basis.value,
            "expression": encode_poly(f),
            "express": args.express,
            "sl": args.sl,
        },
    )
    invariant = is_invariant(f).invariant
    report.details["invariant"] = invariant
    report.say(f"polynomial: {f}")
    report.say(f"invariant: {str(invariant).lower()}")
    if not invariant:
        image = apply_operator("D", f)
        alpha, coeff = image.sorted_terms()[0]
        report.details["witness"] = {"exponents": list(alpha), "coeff": encode_coefficient(coeff)}
        report.say(f"witness: D(f) has the term {Poly.monomial(f.n, f.basis, alpha, coeff)}")
        report.verdict = "fail"
    if args.express:
        expression = express_in_generators(f, limits)
        report.details["expression"] = str(expression)
        report.say(f"expression: {expression}")
    if args.sl:
        sl = is_sl_invariant(f, limits)
        report.details["sl_invariant"] = sl
        report.say(f"SL-invariant: {str(sl).lower()}")
        report.verdict = "pass" if sl else "fail"
    return report


def cmd_kernel(args: argparse.Namespace, limits: Limits) -> Report:
    text = _read_expression(args.expression)
    F = parse_genpoly(text, args.n, args.p, args.q)
    report = Report(
        "kernel",
        {
            "n": args.n,
            "p": args.p,
            "q": args.q,
            "expression": encode_genpoly(F),
            "certificate": args.certificate,
        },
    )
    result = kernel_membership(F, want_certificate=args.certificate)
    report.say(f"polynomial: {F}")
    if isinstance(result, InKernel):
        report.details["in_kernel"] = True
        report.say("in kernel: true")
        if result.certificate is not None:
            verified = verify_certificate(F, result.certificate)
            report.details["certificate"] = [encode_genpoly(g) for g in result.certificate.cofactors]
            report.details["certificate_verified"] = verified
            report.say(str(result.certificate))
            report.say(f"certificate verified: {str(verified).lower()}")
            if not verified:
                report.verdict = "fail"
        return report
    report.verdict = "fail"
    report.details["in_kernel"] = False
    report.details["witness"] = {
        "monomial": str(result.witness),
        "coeff": encode_coefficient(result.coefficient),
    }
    report.say("in kernel: false")
    report.say(f"witness: {result.witness} with coefficient {result.coefficient}")
    return report


def _parse_vector(parts: List[str]) -> List[int]:
    entries = [e for part in parts for e in part.replace(",", " ").split()]
    try:
        return [int(e) for e in entries]
    except ValueError:
        raise argparse.ArgumentTypeError(f"exponent vectors are integers, got {' '.join(parts)!r}")


def cmd_decompose(args: argparse.Namespace, limits: Limits) -> Report:
    alpha = _parse_vector(args.alpha)
    report = Report("decompose", {"n": args.n, "alpha": alpha})
    decomposition = decompose(alpha, args.n)
    report.details["decomposition"] = {str(gid): k for gid, k in sorted(decomposition.coeffs.items())}
    report.say(f"alpha = {decomposition}")
    return report


def cmd_counterexample(args: argparse.Namespace, limits: Limits) -> Report:
    report = Report("counterexample", {"n": args.n, "budget": args.budget})
    alpha = counterexample(args.n)
    oracle = monoid_member_oracle(alpha, args.n, args.budget)
    member = in_Vn(alpha)
    report.details.update(
        alpha=list(alpha), in_Vn=member, oracle=type(oracle).__name__, bound=getattr(oracle, "bound", None)
    )
    report.say(f"alpha' = {alpha}")
    report.say(f"in V_n: {str(member).lower()}")
    report.say(f"oracle: {type(oracle).__name__}")
    if not member or not isinstance(oracle, NonMember):
        report.verdict = "fail"
    return report


def cmd_verify_all(args: argparse.Namespace, limits: Limits) -> Report:
    params = VerifyParams(n_max=args.n_max, limits=limits, samples=args.samples, seed=args.seed)
    report = Report("verify-all", {"n_max": args.n_max, "samples": args.samples, "seed": args.seed})
    suites = asyncio.run(run_suites(params, args.suite, with_debug=args.debug))
    report.details["suites"] = {
        suite.name: {
            "passed": suite.passed,
            "cases": suite.cases,
            "failures": [f"{case.case}: {case.detail}" for case in suite.failures],
            "error": suite.error,
        }
        for suite in suites
    }
    for suite in suites:
        report.timings_ms[suite.name] = round(suite.elapsed_ms, 3)
        report.say(str(suite))
    if not all(suite.passed for suite in suites):
        report.verdict = "fail"
    return report


Command = Callable[[argparse.Namespace, Limits], Report]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--max-n", type=_positive_int, default=None, help="X-basis expansion guard, overrides CIRCINV_MAX_N")
    common.add_argument("--output", metavar="PATH", default=None, help="write the report to PATH instead of stdout")

    parser = argparse.ArgumentParser(
        prog="circinv",
        description="Exact verification of the invariant theory of circulant determinants.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    factor = commands.add_parser("factor", parents=[common], help="check the block factorization of the circulant determinant")
    factor.add_argument("n", type=_positive_int)
    factor.add_argument("p", type=_positive_int)
    factor.add_argument("--basis", choices=["X", "Y"], default="X")
    factor.add_argument("--emit-blocks", action="store_true", help="print every block determinant")
    factor.set_defaults(run=cmd_factor)

    invariant = commands.add_parser("invariant", parents=[common], help="test a polynomial for invariance")
    invariant.add_argument("n", type=_positive_int)
    invariant.add_argument("expression", nargs="?", help="polynomial in x<k> or y<k>, '-' reads stdin")
    invariant.add_argument("--express", action="store_true", help="rewrite in the block determinants")
    invariant.add_argument("--sl", action="store_true", help="test invariance under determinant-one circulants")
    invariant.add_argument("--gap-witness", action="store_true", help="show an invariant outside the generated subring")
    invariant.add_argument("--budget", type=_positive_int, default=64)
    invariant.set_defaults(run=cmd_invariant)

    kernel = commands.add_parser(
        "kernel",
        parents=[common],
        help="decide membership in the relation ideal",
        description="p and q may be any coprime pair with pq dividing n, unlike the generators of R_n,"
        " which only use prime divisors.",
    )
    kernel.add_argument("n", type=_positive_int)
    kernel.add_argument("p", type=_positive_int)
    kernel.add_argument("q", type=_positive_int)
    kernel.add_argument("expression", help="polynomial in z<i> and w<j>, '-' reads stdin")
    kernel.add_argument("--certificate", action="store_true", help="print and verify the cofactors")
    kernel.set_defaults(run=cmd_kernel)

    decomposition = commands.add_parser("decompose", parents=[common], help="decompose an exponent vector into generators")
    decomposition.add_argument("n", type=_positive_int)
    decomposition.add_argument("alpha", nargs="+", help="entries separated by commas or spaces")
    decomposition.set_defaults(run=cmd_decompose)

    gap = commands.add_parser("counterexample", parents=[common], help="the lattice point outside the generator monoid")
    gap.add_argument("n", type=_positive_int)
    gap.add_argument("--budget", type=_positive_int, default=64)
    gap.set_defaults(run=cmd_counterexample)

    verify = commands.add_parser("verify-all", parents=[common], help="run every property suite up to an order")
    verify.add_argument("n_max", type=_positive_int)
    verify.add_argument("--suite", action="append", choices=sorted(SUITES), help="run only this suite, repeatable")
    verify.add_argument("--samples", type=_positive_int, default=20)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--debug", action="store_true", help="print every check output as it happens")
    verify.set_defaults(run=cmd_verify_all)

    return parser


def _params(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"run", "json", "output", "command", "max_n"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def run(args: argparse.Namespace) -> Report:
    command: Command = args.run
    start = time.perf_counter()
    try:
        limits = Limits.from_env(args.max_n)
        report = command(args, limits)
    except ExpansionTooLarge as e:
        report = error_report(args.command, _params(args), e, EXIT_GUARD)
    except InvariantViolation as e:
        report = error_report(args.command, _params(args), e, EXIT_FAIL)
    except (CircinvError, argparse.ArgumentTypeError) as e:
        report = error_report(args.command, _params(args), e, EXIT_USAGE)
    report.timings_ms["total"] = round((time.perf_counter() - start) * 1000, 3)
    return report


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    report = run(args)
    if args.json:
        text = report.to_json()
    else:
        text = report.to_text(color=args.output is None and sys.stdout.isatty())
    if args.output is not None:
        with open(args.output, "w") as f:
            f.write(text + "\n")
    else:
        print(text)
    return report.exit_code
