"""
The growth hierarchy behind the lower bounds: Ack_k, t, e, f*, A_k, delta_k and m_k, all exact.
Values past the iteration limits become hyper TowerInts carrying a proven lower bound.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Optional, Tuple, Union

from regforge.common.errors import IncomparableError, InputError, NonIntegerExponentError
from regforge.common.reports import GrowthReport, InequalityCheck
from regforge.modules.growth.tower import TowerInt, add_int, compact, divide_pow2, mul_pow2, power, two_to

logger = logging.getLogger(__name__)

ITERATION_LIMIT = 64
T_INDEX_LIMIT = 32
A_INDEX_LIMIT = 8

Index = Union[int, TowerInt]
IndexMap = Callable[[TowerInt], Index]


def _index(i: Index, minimum: int, name: str) -> TowerInt:
    i = TowerInt.of(i)
    if i.reciprocal or (i.kind == "int" and i.value < minimum):
        raise InputError(f"{name} needs an index >= {minimum}, got {i}")
    return i


@lru_cache(maxsize=None)
def ack(k: int, x: Index) -> TowerInt:
    """Ack_1(x) = 2^x; Ack_{k+1}(n) applies Ack_k n times to 1."""
    if k < 1:
        raise InputError(f"Ack_k needs k >= 1, got {k}")
    x = _index(x, 0, "Ack_k")
    if k == 1:
        return two_to(x)
    steps = x.value if x.kind == "int" else None
    value = TowerInt.of(1)
    for _ in range(ITERATION_LIMIT if steps is None else min(steps, ITERATION_LIMIT)):
        value = ack(k - 1, value)
    if steps is not None and steps <= ITERATION_LIMIT:
        return value
    return TowerInt.hyper(f"Ack_{k}({compact(x)})", value)


def e_fn(i: Index) -> TowerInt:
    """e(i) = 2^(i+10)"""
    return two_to(add_int(_index(i, 1, "e"), 10))


@lru_cache(maxsize=None)
def _t_int(i: int) -> TowerInt:
    if i == 1:
        return two_to(200)
    previous = _t_int(i - 1)
    try:
        return two_to(divide_pow2(previous, e_fn(i - 1)))
    except NonIntegerExponentError:
        logger.error("✗ t(%d)/e(%d) is not a power of two", i - 1, i - 1)
        raise


def t_fn(i: Index) -> TowerInt:
    """t(1) = 2^200 and t(i+1) = 2^(t(i)/e(i))."""
    i = _index(i, 1, "t")
    if i.kind == "int" and i.value <= T_INDEX_LIMIT:
        return _t_int(i.value)
    return TowerInt.hyper(f"t({compact(i)})", _t_int(T_INDEX_LIMIT))


def f_star(f: IndexMap, i: Index) -> TowerInt:
    """f*(i) = t(f(i))/e(i); at least f(i) whenever f(i) >= i."""
    i = _index(i, 1, "f*")
    value = TowerInt.of(f(i))
    if i.kind != "int":
        return TowerInt.hyper(f"t({compact(value)})/e({compact(i)})", value)
    return divide_pow2(t_fn(value), e_fn(i))


@lru_cache(maxsize=None)
def _a_int(k: int, i: int) -> TowerInt:
    if i == 1:
        return two_to(two_to(3 * k + 2))
    return A_fn(k - 1, A_star(k, i - 1))


def A_fn(k: int, i: Index) -> TowerInt:  # pylint: disable=invalid-name
    """A_2(i) = i; A_k(1) = 2^(2^(3k+2)) and A_k(i+1) = A_{k-1}(A_k*(i))."""
    if k < 2:
        raise InputError(f"A_k needs k >= 2, got {k}")
    i = _index(i, 1, "A_k")
    if k == 2:
        return i
    if i.kind == "int" and i.value <= A_INDEX_LIMIT:
        return _a_int(k, i.value)
    return TowerInt.hyper(f"A_{k}({compact(i)})", _a_int(k, 1))


def A_star(k: int, i: Index) -> TowerInt:  # pylint: disable=invalid-name
    return f_star(lambda j: A_fn(k, j), i)


def delta_fn(k: int) -> TowerInt:
    """delta_k = 2^(-8^k)"""
    if k < 1:
        raise InputError(f"delta_k needs k >= 1, got {k}")
    return two_to(8 ** k).inverse()


def c_fn(k: int) -> TowerInt:
    """c = 2^(-32^k), the density scale of the lower-bound hypergraph."""
    return two_to(32 ** k).inverse()


def alpha_fn(k: int) -> TowerInt:
    """alpha_k = 2^(-16^k)"""
    return two_to(16 ** k).inverse()


def m_fn(k: int, i: Index) -> TowerInt:
    """m_k(i) = A_2*(A_3*(...A_k*(i)...))"""
    if k < 2:
        raise InputError(f"m_k needs k >= 2, got {k}")
    value = _index(i, 1, "m_k")
    for j in range(k, 1, -1):
        value = A_star(j, value)
    return value


def standard_index_maps(k: int, s: int) -> List[Tuple[int, TowerInt, TowerInt]]:
    """(j, A_k*(j), A_k(j)) for j = 1..s: which refinement and which vertex level step j selects."""
    return [(j, A_star(k, j), A_fn(k, j)) for j in range(1, s + 1)]


def check_index_maps(k: int, s: int, chain_length: int) -> List[Tuple[int, int, int]]:
    """Materialize the index maps, failing when an index runs past a chain of the given length."""
    chosen = []
    for j, f_index, v_index in standard_index_maps(k, s):
        for name, index in (("A_k*", f_index), ("A_k", v_index)):
            try:
                inside = index <= chain_length
            except IncomparableError:
                inside = False
            if not inside:
                raise InputError(f"index-out-of-range: {name}({j}) = {index} exceeds chain length {chain_length}; "
                                 "supply toy index maps")
        chosen.append((j, int(f_index), int(v_index)))
    return chosen


def _check(checks: List[InequalityCheck], name: str, test: Callable[[], bool], detail: str,
           k: Optional[int] = None, i: Optional[int] = None) -> None:
    try:
        status = "pass" if test() else "fail"
    except IncomparableError as e:
        status, detail = "symbolic", f"{detail}: {e}"
    checks.append(InequalityCheck(name=name, k=k, i=i, status=status, detail=detail))
    if status == "fail":
        logger.error("✗ %s failed (k=%s, i=%s): %s", name, k, i, detail)


def verify_inequalities(k_max: int = 3, i_max: int = 4) -> GrowthReport:
    """Check every stated inequality among the growth functions by exact exponent comparison."""
    if k_max < 2 or i_max < 1:
        raise InputError("verify_inequalities needs k_max >= 2 and i_max >= 1")
    checks: List[InequalityCheck] = []
    for i in range(2, i_max + 1):
        _check(checks, "monotone", lambda i=i: t_fn(i) >= mul_pow2(t_fn(i - 1), 2) and t_fn(i).is_power_of_two(),
               "t(i) >= 4 t(i-1) and t(i) is a power of two", i=i)
    for i in range(1, i_max + 1):
        _check(checks, "t-over-e", lambda i=i: divide_pow2(t_fn(i), e_fn(i)).is_power_of_two(),
               "t(i)/e(i) is a positive power of two", i=i)
        _check(checks, "f-star", lambda i=i: f_star(lambda j: j, i) >= i, "f*(i) >= f(i) for f = identity", i=i)
        _check(checks, "m-2", lambda i=i: m_fn(2, i) >= i + 1, "m_2(i) >= i + 1", k=2, i=i)
    for k in range(3, k_max + 1):
        _check(checks, "A-base", lambda k=k: A_fn(k, 1) == power(delta_fn(k), Fraction(-4)),
               "A_k(1) = delta_k^-4", k=k, i=1)
        for i in range(1, min(i_max, 3) + 1):
            _check(checks, "A-vs-Ack", lambda k=k, i=i: A_fn(k, i) >= ack(k, i), "A_k(i) >= Ack_k(i)", k=k, i=i)
        _check(checks, "delta-bound",
               lambda k=k: (power(delta_fn(k), Fraction(1, 4)) == power(delta_fn(k - 1), 2)
                            and power(delta_fn(k), Fraction(1, 4)) <= mul_pow2(delta_fn(k - 1), -64)),
               "delta_k^(1/4) = delta_{k-1}^2 <= 2^-64 delta_{k-1}", k=k)
        _check(checks, "t1-bound",
               lambda k=k: -A_fn(k, 1).log2_fraction() / 6 <= delta_fn(k).log2_fraction() / 2,
               "1/A_k(1)^(1/6) <= delta_k^(1/2)", k=k)
    report = GrowthReport(checks=checks)
    logger.info("%s Growth inequalities: %d checks, %d failed", "✓" if report.passed else "✗",
                len(checks), sum(1 for c in checks if c.status == "fail"))
    return report
