from typing import Optional, TypeVar, cast

T = TypeVar("T")


def unwrap(val: Optional[T]) -> T:
    return cast(T, val)
