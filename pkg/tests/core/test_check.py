import asyncio
import io
import threading
import unittest
from contextlib import redirect_stdout
from typing import Any, AsyncGenerator, List

from circinv.core.check import Check, CheckOutput, SingleOutputCheck, gather_checks
from circinv.utils.async_generator import as_async_generator, collect
from circinv.utils.check import collect_final_output, debug, filter_final_output


class CheckTestCase(unittest.IsolatedAsyncioTestCase):
    async def test_it_is_callable_with_single_value_return(self):
        degree_check = Check[int, int]("DegreeCheck", lambda n: n - 1)

        result = await collect(degree_check(7))
        self.assertEqual(
            result,
            [CheckOutput(check="DegreeCheck", data=6, final=True)],
        )

    async def test_it_is_callable_with_async_iterable_return(self):
        divisors_check = Check[int, int](
            "DivisorsCheck", lambda n: as_async_generator(*[d for d in range(1, n + 1) if n % d == 0])
        )

        result = await collect(divisors_check(6))
        self.assertEqual(
            result,
            [
                CheckOutput(check="DivisorsCheck", data=1, final=True),
                CheckOutput(check="DivisorsCheck", data=2, final=True),
                CheckOutput(check="DivisorsCheck", data=3, final=True),
                CheckOutput(check="DivisorsCheck", data=6, final=True),
            ],
        )

    async def test_it_is_callable_with_generator_return(self):
        orders_check = Check[int, int]("OrdersCheck", lambda n: (k for k in range(2, n)))

        result = await collect_final_output(orders_check(5))
        self.assertEqual(result, [2, 3, 4])

    async def test_it_is_mappable_as_values_arrive(self):
        orders_check = Check[int, int]("OrdersCheck", lambda n: as_async_generator(n, n + 1))
        check = orders_check.map(lambda k: k * 2).map(lambda k: f"n={k}")

        result = await collect(check(3))
        self.assertEqual(
            result,
            [
                CheckOutput(check="OrdersCheck", data=3, final=False),
                CheckOutput(check="OrdersCheck@map", data=6, final=False),
                CheckOutput(check="OrdersCheck@map@map", data="n=6", final=True),
                CheckOutput(check="OrdersCheck", data=4, final=False),
                CheckOutput(check="OrdersCheck@map", data=8, final=False),
                CheckOutput(check="OrdersCheck@map@map", data="n=8", final=True),
            ],
        )

    async def test_it_is_thenable(self):
        orders_check = Check[int, int]("OrdersCheck", lambda n: as_async_generator(n, n + 1))
        check = orders_check.and_then(lambda orders: sum(orders))

        result = await collect(check(3))
        self.assertEqual(
            result,
            [
                CheckOutput(check="OrdersCheck", data=3, final=False),
                CheckOutput(check="OrdersCheck", data=4, final=False),
                CheckOutput(check="OrdersCheck@and_then", data=7, final=True),
            ],
        )

    async def test_it_is_thenable_with_another_check(self):
        orders_check = Check[int, int]("OrdersCheck", lambda n: as_async_generator(n, n + 1))
        total_check = Check[List[int], int]("TotalCheck", lambda orders: sum(orders))

        result = await collect_final_output(orders_check.and_then(total_check)(3))
        self.assertEqual(result, [7])

    async def test_it_collects_the_outputs_to_a_list(self):
        check: SingleOutputCheck[int, List[int]] = (
            Check[int, int]("RangeCheck", lambda start: as_async_generator(*range(start, 5)))
            .map(lambda k: k + 1)
            .collect()
        )

        result = await collect(check(0))
        self.assertEqual(len(result), 11)
        for i in range(0, 5):
            self.assertEqual(result[2 * i], CheckOutput(check="RangeCheck", data=i, final=False))
            self.assertEqual(
                result[2 * i + 1],
                CheckOutput(check="RangeCheck@map", data=i + 1, final=False),
            )
        self.assertEqual(
            result[-1],
            CheckOutput(check="RangeCheck@map@collect", data=[1, 2, 3, 4, 5], final=True),
        )

    async def test_it_maps_a_collected_check_once(self):
        check = (
            Check[int, int]("RangeCheck", lambda n: as_async_generator(*range(n)))
            .collect()
            .map(lambda ks: len(ks))
        )

        self.assertIsInstance(check, SingleOutputCheck)
        result = await collect_final_output(check(4))
        self.assertEqual(result, [4])

    async def test_it_handles_errors(self):
        def raising_function(n: int):
            raise ValueError(f"order {n} is not supported")

        check = Check[int, str]("FailingCheck", raising_function).on_error(
            lambda err: f"error: {err}"
        )

        result = await collect(check(7))
        self.assertEqual(
            str(result[0]),
            str(
                CheckOutput(
                    check="FailingCheck",
                    data=ValueError("order 7 is not supported"),
                    final=False,
                )
            ),
        )
        self.assertEqual(
            result[1],
            CheckOutput(
                check="FailingCheck@on_error",
                data="error: order 7 is not supported",
                final=True,
            ),
        )

    async def test_it_handles_errors_happening_mid_generation(self):
        def cases(n: int):
            yield "n=1"
            raise ArithmeticError(f"case {n} broke")

        check = (
            Check[int, str]("CasesCheck", cases)
            .collect()
            .on_error(lambda err: [f"error: {err}"])
        )

        result = await collect_final_output(check(2))
        self.assertEqual(result, [["error: case 2 broke"]])

    async def test_it_does_not_handle_errors_raised_after_the_handler(self):
        check = (
            Check[int, int]("OrderCheck", lambda n: n)
            .on_error(lambda err: -1)
            .and_then(lambda orders: [o // 0 for o in orders])
        )

        with self.assertRaises(ZeroDivisionError):
            await collect(check(3))

    async def test_it_runs_blocking_calls_in_the_executor(self):
        main_thread = threading.get_ident()
        threads = []

        def blocking_cases(n: int):
            for k in range(n):
                threads.append(threading.get_ident())
                yield k * k

        check = Check[int, int]("SquaresCheck", blocking_cases, in_executor=True)

        result = await collect_final_output(check(4))
        self.assertEqual(result, [0, 1, 4, 9])
        self.assertEqual(len(threads), 4)
        self.assertNotIn(main_thread, threads)

    async def test_it_runs_plain_values_in_the_executor(self):
        check = Check[int, int]("SquareCheck", lambda n: n * n, in_executor=True)

        result = await collect(check(5))
        self.assertEqual(result, [CheckOutput(check="SquareCheck", data=25, final=True)])

    async def test_it_gathers_checks_in_the_given_order(self):
        async def slow_double(n: int) -> AsyncGenerator[int, Any]:
            await asyncio.sleep(0.05)
            yield 2 * n

        checks = [
            Check[int, int]("SlowDouble", slow_double),
            Check[int, int]("Square", lambda n: n * n),
            Check[int, int]("Range", lambda n: as_async_generator(*range(n))),
        ]

        result = await gather_checks(checks, 3)
        self.assertEqual(result, [[6], [9], [0, 1, 2]])

    async def test_it_filters_the_final_outputs(self):
        check = Check[int, int]("OrdersCheck", lambda n: as_async_generator(n, n + 1)).map(
            lambda k: -k
        )

        result = await collect(filter_final_output(check(1)))
        self.assertEqual(result, [-1, -2])


class DebugTestCase(unittest.IsolatedAsyncioTestCase):
    async def test_it_prints_every_output_with_its_check_name(self):
        check = debug(Check[int, int]("RankCheck", lambda n: n - 2).map(lambda r: r == 4))

        printed = io.StringIO()
        with redirect_stdout(printed):
            result = await collect_final_output(check(6))

        self.assertEqual(result, [True])
        self.assertIn("> RankCheck", printed.getvalue())
        self.assertIn("> RankCheck@map", printed.getvalue())
        self.assertIn("True", printed.getvalue())

    async def test_it_prints_exceptions(self):
        def raising_function(n: int):
            raise ValueError("no blocks")

        check = debug(Check[int, int]("BlocksCheck", raising_function).on_error(lambda err: 0))

        printed = io.StringIO()
        with redirect_stdout(printed):
            result = await collect_final_output(check(1))

        self.assertEqual(result, [0])
        self.assertIn("Exception:", printed.getvalue())
        self.assertIn("no blocks", printed.getvalue())
