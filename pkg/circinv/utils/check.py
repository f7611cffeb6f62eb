"""
Utils for working with Check outputs
"""
from typing import Any, AsyncGenerator, Callable, List, TypeVar, cast

from colorama import Fore

from circinv.core.check import Check, CheckOutput
from circinv.utils.async_generator import collect

T = TypeVar("T")
U = TypeVar("U")


def debug(
    check: Callable[[T], AsyncGenerator[CheckOutput[U], Any]]
) -> Check[T, U]:
    """
    A helper for debugging verification pipelines. Wrap any check, or a whole pipeline, with
    `debug` to print out everything that goes through it and its nested checks.

    >>> from circinv.core.check import Check
    >>> from circinv.utils.check import collect_final_output
    >>> import asyncio
    ...
    >>> async def debug_pipeline():
    ...     orders = Check[int, int]("OrdersCheck", lambda n: n + 1)
    ...     await collect_final_output(debug(orders.map(lambda k: k * 2))(2))
    ...
    >>> asyncio.run(debug_pipeline())
    <BLANKLINE>
    <BLANKLINE>
    \x1b[32m> OrdersCheck\x1b[39m
    <BLANKLINE>
    3
    <BLANKLINE>
    <BLANKLINE>
    \x1b[32m> OrdersCheck@map\x1b[39m
    <BLANKLINE>
    6
    """

    async def debug(input: T) -> AsyncGenerator[CheckOutput[U], Any]:
        last_check = ""
        async for output in check(input):
            if output.check != last_check:
                print("\n", end="", flush=True)
                last_check = output.check
                print(f"\n{Fore.GREEN}> {output.check}{Fore.RESET}\n")
            if isinstance(output.data, Exception):
                print(f"{Fore.RED}Exception:{Fore.RESET} {output.data}", flush=True)
            else:
                print(output.data, flush=True)
            yield output

    next_name = "@debug"
    if hasattr(check, "name"):
        next_name = f"{check.name}@debug"  # type: ignore
    return Check[T, U](next_name, debug)


async def filter_final_output(
    async_iterable: AsyncGenerator[CheckOutput[T], Any]
) -> AsyncGenerator[T, Any]:
    """
    Filters only the final output values of a Check's outputs.

    >>> from circinv.core.check import Check
    >>> import asyncio
    ...
    >>> async def only_final_outputs():
    ...     square = Check[int, int]("SquareCheck", lambda n: n * n).map(lambda s: s + 1)
    ...     async for final_output in filter_final_output(square(3)):
    ...         print(final_output)
    ...
    >>> asyncio.run(only_final_outputs())
    10
    """
    async for output in async_iterable:
        if output.final:
            yield cast(T, output.data)


async def collect_final_output(
    async_iterable: AsyncGenerator[CheckOutput[T], Any]
) -> List[T]:
    """
    Blocks until the check is done, then returns its final output values as a list.
    """
    return await collect(filter_final_output(async_iterable))
