"""
Resource guards for exact expansions.

X-basis expansions (circulant determinants, basis changes) grow combinatorially with the
order, so they are refused above `max_n_x`. Y-basis identities only multiply monomials and
stay available up to `max_n_y`.
"""
import os
from dataclasses import dataclass, replace
from typing import Optional

from circinv.errors import ExpansionTooLarge, InvalidOrder

ENV_MAX_N = "CIRCINV_MAX_N"

DEFAULT_MAX_N_X = 16
DEFAULT_MAX_N_Y = 30


@dataclass(frozen=True)
class Limits:
    """
    Attributes
    ----------
    max_n_x : int
        Largest order for which X-basis polynomials are expanded.

    max_n_y : int
        Largest order accepted by the Y-basis identity checks, never smaller than `max_n_x`.
    """

    max_n_x: int = DEFAULT_MAX_N_X
    max_n_y: int = DEFAULT_MAX_N_Y

    @staticmethod
    def from_env(max_n: Optional[int] = None) -> "Limits":
        """
        Reads `CIRCINV_MAX_N` from the environment, an explicit `max_n` (the CLI `--max-n`) wins.

        >>> Limits.from_env(max_n=20)
        Limits(max_n_x=20, max_n_y=30)
        """
        if max_n is None:
            raw = os.environ.get(ENV_MAX_N)
            if raw is not None and raw.strip():
                try:
                    max_n = int(raw)
                except ValueError:
                    raise InvalidOrder(f"{ENV_MAX_N} must be an integer, got {raw!r}")
        if max_n is None:
            return Limits()
        if max_n < 1:
            raise InvalidOrder(f"the expansion guard must be positive, got {max_n}")
        return replace(Limits(), max_n_x=max_n, max_n_y=max(DEFAULT_MAX_N_Y, max_n))


def check_expansion(n: int, basis: str, limits: Optional[Limits] = None) -> None:
    """
    Raises `ExpansionTooLarge` when order `n` is past the guard of the given basis ("X" or "Y").
    """
    limits = limits or Limits.from_env()
    bound = limits.max_n_x if basis == "X" else limits.max_n_y
    if n > bound:
        raise ExpansionTooLarge(
            f"order {n} exceeds the {basis}-basis expansion guard ({bound}), raise it with --max-n or {ENV_MAX_N}"
        )
