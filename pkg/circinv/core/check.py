"""
Core Check module
"""
import asyncio
from dataclasses import dataclass
from typing import (
    Any,
    AsyncGenerator,
    Callable,
    Generator,
    Generic,
    Iterable,
    Iterator,
    List,
    Optional,
    Tuple,
    TypeVar,
    Union,
    cast,
)

from circinv.utils._typing import unwrap
from circinv.utils.async_generator import as_async_generator, gather

T = TypeVar("T")
U = TypeVar("U")
V = TypeVar("V")

_DONE = object()


@dataclass
class CheckOutput(Generic[T]):
    """
    CheckOutput is a data class that represents the output of a Check at each step.

    Attributes
    ----------
    check : str
        The name of the check that produced this output. This helps in identifying
        which part of a verification pipeline the output is coming from.

    data : Union[T, Any]
        The actual output data produced by the check. This will be type T for final check output,
        but can be also be of any type produced by any step of the whole pipeline.

    final : bool
        A boolean flag indicating whether this output is the final output of the check.
        Only the outputs at the end of the pipeline are marked as "final".

    Example
    -------

    >>> from circinv.core.check import Check
    >>> import asyncio
    ...
    >>> async def example():
    ...     square_check = Check[int, int]("SquareCheck", lambda n: n * n)
    ...     parity_check = square_check.map(lambda square: square % 2 == 0)
    ...
    ...     async for output in parity_check(3):
    ...         print(output)
    ...
    >>> asyncio.run(example())
    CheckOutput(check='SquareCheck', data=9, final=False)
    CheckOutput(check='SquareCheck@map', data=False, final=True)
    """

    check: str
    data: Union[T, Any]
    final: bool


CheckResult = Union[
    AsyncGenerator[CheckOutput[U], Any], AsyncGenerator[U, Any], Iterator[U], U
]


class Check(Generic[T, U]):
    """
    A named verification step: calling it with an input produces an async generator of
    `CheckOutput`s.

    The wrapped function may return a plain value, a generator or an async generator. With
    `in_executor=True` the function, and each step of a returned generator, runs in the
    default thread pool so that long exact computations do not block the event loop.
    """

    _call: Callable[[T], CheckResult[U]]

    def __init__(
        self,
        name: str,
        call: Callable[[T], CheckResult[U]],
        in_executor: bool = False,
    ) -> None:
        self.name = name
        self._call = call
        self.in_executor = in_executor

    def __call__(self, input: T) -> AsyncGenerator[CheckOutput[U], Any]:
        if self.in_executor:
            return self._wrap(self._call_in_executor(input))
        return self._wrap(self._call(input))

    async def _call_in_executor(self, input: T) -> AsyncGenerator[U, Any]:
        loop = asyncio.get_running_loop()
        result = await loop.run_in_executor(None, self._call, input)
        if isinstance(result, AsyncGenerator):
            async for value in result:
                yield value
        elif isinstance(result, Generator):
            while True:
                value = await loop.run_in_executor(None, next, result, _DONE)
                if value is _DONE:
                    return
                yield value
        else:
            yield cast(U, result)

    def _wrap(
        self,
        value: CheckResult[V],
        final: Optional[bool] = None,
        name: Optional[str] = None,
    ) -> AsyncGenerator[CheckOutput[V], Any]:
        async def _wrap(
            values: Union[AsyncGenerator[CheckOutput[V], Any], AsyncGenerator[V, Any]],
        ) -> AsyncGenerator[CheckOutput[V], Any]:
            async for value in values:
                yield self._output_wrap(value, final=final, name=name)

        if isinstance(value, AsyncGenerator):
            return _wrap(value)
        if isinstance(value, Generator):
            return _wrap(as_async_generator(*value))
        return _wrap(as_async_generator(value))

    def _output_wrap(
        self, value: Union[CheckOutput[V], V], final=None, name=None
    ) -> CheckOutput[V]:
        if isinstance(value, CheckOutput):
            final = final if final is not None else value.final
            return CheckOutput[V](check=value.check, data=value.data, final=final)

        final = final if final is not None else True
        return CheckOutput[V](
            check=self.name if name is None else name, data=value, final=final
        )

    async def _reyield(
        self, async_iterable: AsyncGenerator[CheckOutput[U], Any]
    ) -> AsyncGenerator[Tuple[List[U], CheckOutput[U]], Any]:
        values: List[U] = []
        async for u in async_iterable:
            u_rewrapped = self._output_wrap(u, final=False)
            if u.final:
                values.append(u.data)
            yield (values, u_rewrapped)

    def map(self, fn: Callable[[U], V]) -> "Check[T, V]":
        """
        Maps the output of the current check through a function as they arrive.

        This method is non-blocking, each final value is mapped as soon as it is produced.

        Example:

        >>> from circinv.core.check import Check
        >>> from circinv.utils.check import collect_final_output
        >>> import asyncio
        ...
        >>> async def example():
        ...     orders_check = Check[int, int]("OrdersCheck", lambda n: (k for k in range(1, n + 1)))
        ...     squares = orders_check.map(lambda k: k * k)
        ...     return await collect_final_output(squares(4))
        ...
        >>> asyncio.run(example())
        [1, 4, 9, 16]
        """

        next_name = f"{self.name}@map"

        async def map(input: T) -> AsyncGenerator[CheckOutput[V], Any]:
            prev_len_values = 0
            async for values, to_reyield in self._reyield(self(input)):
                yield cast(CheckOutput[V], to_reyield)
                if len(values) > prev_len_values:
                    prev_len_values = len(values)
                    yield self._output_wrap(fn(values[-1]), name=next_name)

        return Check[T, V](next_name, lambda input: map(input))

    def and_then(
        self,
        next: Callable[[Iterable[U]], CheckResult[V]],
    ) -> "Check[T, V]":
        """
        Processes the collected outputs of the current check through a function or another check.

        Unlike `map`, this waits for the current check to finish and passes the list of all its
        final outputs at once.

        Example:

        >>> from circinv.core.check import Check
        >>> from circinv.utils.check import collect_final_output
        >>> import asyncio
        ...
        >>> async def example():
        ...     orders_check = Check[int, int]("OrdersCheck", lambda n: (k for k in range(1, n + 1)))
        ...     total_check = orders_check.and_then(lambda orders: sum(orders))
        ...     return await collect_final_output(total_check(4))
        ...
        >>> asyncio.run(example())
        [10]
        """

        next_name = f"{self.name}@and_then"
        if hasattr(next, "name"):
            next_name = next.name  # type: ignore

        async def and_then(
            input: T,
        ) -> AsyncGenerator[CheckOutput[V], Any]:
            iter_u: Iterable[U] = []
            async for values, to_reyield in self._reyield(self(input)):
                yield cast(CheckOutput[V], to_reyield)
                iter_u = values

            iter_v = self._wrap(next(iter_u), name=next_name)
            async for v in iter_v:
                yield v

        return Check[T, V](next_name, and_then)

    def collect(self: "Check[T, U]") -> "SingleOutputCheck[T, List[U]]":
        """
        Collects all the outputs produced by the check and returns them as a list.

        Example:

        >>> from circinv.core.check import Check
        >>> from circinv.utils.check import collect_final_output
        >>> import asyncio
        ...
        >>> async def example():
        ...     orders_check = Check[int, int]("OrdersCheck", lambda n: (k for k in range(1, n + 1)))
        ...     return await collect_final_output(orders_check.collect()(3))
        ...
        >>> asyncio.run(example())
        [[1, 2, 3]]
        """

        next_name = f"{self.name}@collect"

        async def _collect(
            input: T,
        ) -> AsyncGenerator[CheckOutput[List[U]], Any]:
            iter_u: Iterable[U] = []
            async for values, to_reyield in self._reyield(self(input)):
                yield cast(CheckOutput[List[U]], to_reyield)
                iter_u = values

            yield self._output_wrap(iter_u, name=next_name)

        return SingleOutputCheck[T, List[U]](next_name, _collect)

    def on_error(
        self,
        handler: Callable[[Exception], Union[AsyncGenerator[CheckOutput[V], Any], V]],
    ) -> "Check[T, Union[U, V]]":
        """
        Handles any uncaught exceptions that might occur during the execution of the current check.

        The `handler` receives the exception and returns a value used as the output instead, the
        exception itself is still re-yielded as a non-final output so it shows up in `debug`.

        Example:

        >>> from circinv.core.check import Check
        >>> from circinv.utils.check import collect_final_output
        >>> import asyncio
        ...
        >>> async def example():
        ...     broken_check = Check[int, int]("BrokenCheck", lambda n: n // 0)
        ...     safe_check = broken_check.on_error(lambda e: f"failed: {type(e).__name__}")
        ...     return await collect_final_output(safe_check(1))
        ...
        >>> asyncio.run(example())
        ['failed: ZeroDivisionError']
        """

        next_name = f"{self.name}@on_error"

        async def on_error(
            input: T,
        ) -> AsyncGenerator[CheckOutput[Union[U, V]], Any]:
            try:
                async for output in self(input):
                    yield cast(CheckOutput[Union[U, V]], output)
            except Exception as e:
                yield cast(CheckOutput[Union[U, V]], self._output_wrap(e, final=False))
                async for output in self._wrap(handler(e), name=next_name):
                    yield cast(CheckOutput[Union[U, V]], output)

        return Check[T, Union[U, V]](next_name, lambda input: on_error(input))


class SingleOutputCheck(Check[T, U]):
    """A check that produces exactly one final value."""

    async def _reyield(
        self, async_iterable: AsyncGenerator[CheckOutput[U], Any]
    ) -> AsyncGenerator[Tuple[Optional[U], CheckOutput[U]], Any]:  # type: ignore
        final_value: Optional[U] = None
        async for u in async_iterable:
            u_rewrapped = self._output_wrap(u, final=False)
            if u.final:
                final_value = u.data
            yield (final_value, u_rewrapped)

    def map(self, fn: Callable[[U], V]) -> "SingleOutputCheck[T, V]":
        """
        Similar to `Check.map`, applied to the single final output.
        """

        next_name = f"{self.name}@map"

        async def map(input: T) -> AsyncGenerator[CheckOutput[V], Any]:
            final_u: Optional[U] = None
            async for value, to_reyield in self._reyield(self(input)):
                yield cast(CheckOutput[V], to_reyield)
                final_u = value

            yield self._output_wrap(fn(unwrap(final_u)), name=next_name)

        return SingleOutputCheck[T, V](next_name, lambda input: map(input))

    def on_error(
        self,
        handler: Callable[[Exception], Union[AsyncGenerator[CheckOutput[V], Any], V]],
    ) -> "SingleOutputCheck[T, Union[U, V]]":
        """
        Similar to `Check.on_error`, keeping the single output guarantee.
        """

        next_name = f"{self.name}@on_error"

        async def on_error(
            input: T,
        ) -> AsyncGenerator[CheckOutput[Union[U, V]], Any]:
            try:
                async for output in self(input):
                    yield cast(CheckOutput[Union[U, V]], output)
            except Exception as e:
                yield cast(CheckOutput[Union[U, V]], self._output_wrap(e, final=False))
                async for output in self._wrap(handler(e), name=next_name):
                    yield cast(CheckOutput[Union[U, V]], output)

        return SingleOutputCheck[T, Union[U, V]](
            next_name, lambda input: on_error(input)
        )


async def gather_checks(checks: List[Check[T, U]], input: T) -> List[List[U]]:
    """
    Runs several checks concurrently on the same input and returns the final outputs of each,
    in the order the checks were given.

    >>> import asyncio
    >>> double = Check[int, int]("Double", lambda n: 2 * n)
    >>> square = Check[int, int]("Square", lambda n: n * n)
    >>> asyncio.run(gather_checks([double, square], 5))
    [[10], [25]]
    """

    outputs = await gather([check(input) for check in checks])
    return [
        [cast(U, output.data) for output in check_outputs if output.final]
        for check_outputs in outputs
    ]
