"""
Reports produced by the command line, rendered as text or JSON.

Text output never contains timings, so running the same command twice prints the same
bytes. Timings only appear in the `timings_ms` field of the JSON form.
"""
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional

from colorama import Fore

from circinv.algebra.cyclotomic import CycElement
from circinv.algebra.multipoly import Poly
from circinv.theory.ideal import GenPoly

Verdict = Literal["pass", "fail", "error"]

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_GUARD = 3


def encode_coefficient(c: CycElement) -> Dict[str, Any]:
    """
    `num`/`den` hold the value when the coefficient is rational (null otherwise), `zeta_coords`
    always holds the power-basis coordinates, all as exact decimal strings.

    >>> encode_coefficient(CycElement(3, [1, 2]))
    {'num': None, 'den': None, 'zeta_coords': ['1', '2']}
    """
    if c.is_rational():
        value = c.rational_value()
        num: Optional[str] = str(value.numerator)
        den: Optional[str] = str(value.denominator)
    else:
        num = den = None
    return {"num": num, "den": den, "zeta_coords": [str(x) for x in c.coeffs]}


def encode_poly(f: Poly) -> List[Dict[str, Any]]:
    return [
        {"exponents": list(alpha), "coeff": encode_coefficient(c)}
        for alpha, c in f.sorted_terms()
    ]


def encode_genpoly(F: GenPoly) -> List[Dict[str, Any]]:
    """Same shape as `encode_poly`, with the z exponents followed by the w exponents."""
    return [
        {"exponents": list(c) + list(d), "coeff": encode_coefficient(coeff)}
        for (c, d), coeff in F.sorted_terms()
    ]


@dataclass
class Report:
    """
    The outcome of one command.

    Attributes
    ----------
    command : str
        The subcommand name.

    params : Dict[str, Any]
        The order and the other parameters the command ran with.

    verdict : str
        "pass", "fail" or "error". A "fail" always carries a witness in `details`.

    details : Dict[str, Any]
        JSON-ready payload: term counts, witnesses, certificates and so on.

    lines : List[str]
        The human readable rendering of `details`, in order.

    timings_ms : Dict[str, float]
        Wall-clock timings, kept apart from everything compared between runs.
    """

    command: str
    params: Dict[str, Any]
    verdict: Verdict = "pass"
    details: Dict[str, Any] = field(default_factory=dict)
    lines: List[str] = field(default_factory=list)
    timings_ms: Dict[str, float] = field(default_factory=dict)

    def say(self, line: str) -> None:
        self.lines.append(line)

    @property
    def exit_code(self) -> int:
        if self.verdict == "pass":
            return EXIT_PASS
        if self.verdict == "fail":
            return EXIT_FAIL
        return self.details.get("exit_code", EXIT_USAGE)

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "params": self.params,
            "verdict": self.verdict,
            "details": {k: v for k, v in self.details.items() if k != "exit_code"},
            "timings_ms": self.timings_ms,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    def to_text(self, color: bool = False) -> str:
        verdict = self.verdict.upper()
        if color:
            tint = {"pass": Fore.GREEN, "fail": Fore.RED}.get(self.verdict, Fore.YELLOW)
            verdict = f"{tint}{verdict}{Fore.RESET}"
        return "\n".join([*self.lines, f"verdict: {verdict}"])


def error_report(
    command: str, params: Dict[str, Any], error: Exception, exit_code: int
) -> Report:
    report = Report(command, params, verdict="error")
    report.details["error"] = {"type": type(error).__name__, "message": str(error)}
    report.details["exit_code"] = exit_code
    report.say(f"error: {type(error).__name__}: {error}")
    return report
