"""
circinv

This is the top level module of circinv, an exact symbolic toolkit for the invariant theory of
circulant determinants. The main types and operations are made available to be imported from here:

>>> from circinv import Poly, Basis, parse_poly, is_invariant # etc

Polynomials
===========

Everything is computed exactly over the cyclotomic field Q(ζₙ). `CycElement` stores an element in
reduced power-basis form, and `Poly` is a sparse polynomial in n variables tagged with its basis:
the original variables xᵢ (`Basis.X`) or the eigenvalues of the circulant matrix,

    yᵢ = ∑ⱼ ζₙ^{ij} xⱼ   (`Basis.Y`).

The circulant determinant Θₙ is y₀y₁⋯y_{n−1} on the eigenbasis, and the two cyclic-shift
derivations D and Δ act diagonally there. Use `to_y` and `to_x` to move between the two, they are
refused above the expansion guard (`Limits`, `CIRCINV_MAX_N`).

Core Concepts
-------------

`circulant_det`, `theta_block`, `verify_factorization`:
    Θₙ, the block determinants Θₚ(y⁽ᵖ⁾ᵢ) and the exact check that Θₙ is their product for every
    divisor p of n.

`is_invariant`, `express_in_generators`, `gap_witness`, `is_sl_invariant`:
    Invariance under D and Δ, the rewriting of an invariant in the block determinants when n has at
    most two prime factors, the invariant that escapes them when n has three, and invariance under
    the circulants of determinant one.

`decompose`, `monoid_member_oracle`, `counterexample`:
    The exponent lattice Vₙ behind the invariant ring: exact decomposition into the generator
    vectors v⁽ᵖ⁾ᵢ, an exhaustive bounded search used as an independent oracle, and the lattice
    point outside the generator monoid.

`kernel_membership`, `verify_certificate`:
    Membership in the kernel of ρ′ on the abstract generators zᵢ, wⱼ, with a certificate writing the
    input as a combination of the binomial relations tᵢ.

Checks
------

Verification runs are built from `Check`s, composable asynchronous steps that yield
`CheckOutput`s as they go. `Check.map`, `Check.and_then`, `Check.collect` and `Check.on_error`
compose them, `gather_checks` runs several at once, and `debug` prints everything that flows
through a check:

    >>> from circinv import Check, collect_final_output
    >>> import asyncio
    ...
    >>> async def example():
    ...     rank = Check[int, int]("RankCheck", lambda n: len(basis_Sn(n)))
    ...     return await collect_final_output(rank.map(lambda r: r == 6 - 2)(6))
    ...
    >>> asyncio.run(example())
    [True]

The `circinv` command line (`circinv.cli`) runs every property suite this way with
`circinv verify-all`.
"""

from circinv.algebra.cyclotomic import CycElement, cyclotomic_poly, euler_phi, zeta_power
from circinv.algebra.expression import parse_poly
from circinv.algebra.multipoly import Basis, Poly, apply_operator, to_x, to_y
from circinv.config import Limits
from circinv.core.check import Check, CheckOutput, SingleOutputCheck, gather_checks
from circinv.errors import CircinvError
from circinv.theory.circulant import (
    BlockSpec,
    circulant_det,
    theta_block,
    verify_factorization,
    verify_monomial_identity,
)
from circinv.theory.ideal import (
    GenPoly,
    kernel_membership,
    kernel_rho_trivial,
    parse_genpoly,
    relations,
    verify_certificate,
)
from circinv.theory.invariants import (
    express_in_generators,
    gap_witness,
    is_invariant,
    is_sl_invariant,
)
from circinv.theory.lattice import (
    basis_Sn,
    counterexample,
    decompose,
    generators_Tn,
    in_Vn,
    monoid_member_oracle,
    sigma,
    tau,
)
from circinv.utils.async_generator import as_async_generator, collect, gather
from circinv.utils.check import collect_final_output, debug, filter_final_output

__all__ = (
    "CycElement",
    "cyclotomic_poly",
    "euler_phi",
    "zeta_power",
    "parse_poly",
    "Basis",
    "Poly",
    "apply_operator",
    "to_x",
    "to_y",
    "Limits",
    "Check",
    "CheckOutput",
    "SingleOutputCheck",
    "gather_checks",
    "CircinvError",
    "BlockSpec",
    "circulant_det",
    "theta_block",
    "verify_factorization",
    "verify_monomial_identity",
    "GenPoly",
    "kernel_membership",
    "kernel_rho_trivial",
    "parse_genpoly",
    "relations",
    "verify_certificate",
    "express_in_generators",
    "gap_witness",
    "is_invariant",
    "is_sl_invariant",
    "basis_Sn",
    "counterexample",
    "decompose",
    "generators_Tn",
    "in_Vn",
    "monoid_member_oracle",
    "sigma",
    "tau",
    "as_async_generator",
    "collect",
    "gather",
    "collect_final_output",
    "debug",
    "filter_final_output",
)
