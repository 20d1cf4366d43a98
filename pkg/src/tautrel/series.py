"""Truncated formal power series over exact rationals, in one or two variables.

Truncation orders are explicit and checked on every binary operation;
there is no silent order coercion.  Use ``truncate``/``shift`` to move
between orders deliberately.  All values are immutable by convention.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator

__all__ = [
    "UniSeries",
    "BiSeries",
    "binomial_series_coeffs",
    "binomial_unit_pow",
    "coeff_via_change_of_vars",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def binomial_series_coeffs(c: Fraction, e: Fraction, order: int) -> list[Fraction]:
    """Coefficients of (1 + c*v)^e through v^order, for any rational exponent e.

    The k-th coefficient is e(e-1)...(e-k+1)/k! * c^k, computed
    incrementally so half-integer exponents stay exact.
    """
    c = Fraction(c)
    e = Fraction(e)
    out = [_ONE]
    acc = _ONE
    for k in range(1, order + 1):
        acc = acc * (e - (k - 1)) / k * c
        out.append(acc)
    return out


class UniSeries:
    """Series sum_{k<=order} coeffs[k] * var^k, dense coefficient list."""

    __slots__ = ("var", "order", "coeffs")

    def __init__(self, var: str, order: int, coeffs: Iterable[Fraction]):
        if order < 0:
            raise ValueError("order must be >= 0")
        cs = [Fraction(c) for c in coeffs]
        if len(cs) != order + 1:
            raise ValueError(f"need {order + 1} coefficients, got {len(cs)}")
        self.var = var
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, var: str, order: int) -> "UniSeries":
        return cls(var, order, [_ZERO] * (order + 1))

    @classmethod
    def from_terms(cls, var: str, order: int, terms: dict[int, Fraction]) -> "UniSeries":
        cs = [_ZERO] * (order + 1)
        for k, v in terms.items():
            if not 0 <= k <= order:
                raise ValueError(f"exponent {k} outside truncation order {order}")
            cs[k] = Fraction(v)
        return cls(var, order, cs)

    def coeff(self, k: int) -> Fraction:
        if not 0 <= k <= self.order:
            raise ValueError(f"exponent {k} outside truncation order {self.order}")
        return self.coeffs[k]

    def _check(self, other: "UniSeries") -> None:
        if self.var != other.var or self.order != other.order:
            raise ValueError(
                f"series mismatch: ({self.var!r}, {self.order}) vs"
                f" ({other.var!r}, {other.order})"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UniSeries):
            return NotImplemented
        return (
            self.var == other.var
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __add__(self, other: "UniSeries") -> "UniSeries":
        self._check(other)
        return UniSeries(
            self.var, self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __sub__(self, other: "UniSeries") -> "UniSeries":
        self._check(other)
        return UniSeries(
            self.var, self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __neg__(self) -> "UniSeries":
        return UniSeries(self.var, self.order, [-a for a in self.coeffs])

    def scale(self, r: Fraction) -> "UniSeries":
        r = Fraction(r)
        return UniSeries(self.var, self.order, [r * a for a in self.coeffs])

    def __mul__(self, other: "UniSeries") -> "UniSeries":
        self._check(other)
        n = self.order
        out = [_ZERO] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return UniSeries(self.var, n, out)

    def exp(self) -> "UniSeries":
        """exp of a series with zero constant term, via E' = a' E."""
        if self.coeffs[0]:
            raise ValueError("exp requires zero constant term")
        n = self.order
        a = self.coeffs
        e = [_ONE] + [_ZERO] * n
        for k in range(1, n + 1):
            s = sum(m * a[m] * e[k - m] for m in range(1, k + 1))
            e[k] = Fraction(s, k)
        return UniSeries(self.var, n, e)

    def derivative(self) -> "UniSeries":
        if self.order == 0:
            return UniSeries.zero(self.var, 0)
        return UniSeries(
            self.var,
            self.order - 1,
            [k * self.coeffs[k] for k in range(1, self.order + 1)],
        )

    def truncate(self, order: int) -> "UniSeries":
        if order > self.order:
            raise ValueError("cannot truncate to a larger order")
        return UniSeries(self.var, order, self.coeffs[: order + 1])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self) -> str:
        return f"UniSeries({self.var!r}, {self.order}, {list(self.coeffs)})"


class BiSeries:
    """Sparse bivariate series: map (i, j) -> nonzero Fraction within orders."""

    __slots__ = ("vars", "orders", "coeffs")

    def __init__(
        self,
        vars: tuple[str, str],
        orders: tuple[int, int],
        coeffs: dict[tuple[int, int], Fraction],
    ):
        n1, n2 = orders
        if n1 < 0 or n2 < 0:
            raise ValueError("orders must be >= 0")
        clean: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in coeffs.items():
            if not 0 <= i <= n1 or not 0 <= j <= n2:
                raise ValueError(f"exponent ({i}, {j}) outside orders {orders}")
            v = Fraction(v)
            if v:
                clean[(i, j)] = v
        self.vars = (vars[0], vars[1])
        self.orders = (n1, n2)
        self.coeffs = clean

    @classmethod
    def zero(cls, vars: tuple[str, str], orders: tuple[int, int]) -> "BiSeries":
        return cls(vars, orders, {})

    @classmethod
    def one(cls, vars: tuple[str, str], orders: tuple[int, int]) -> "BiSeries":
        return cls(vars, orders, {(0, 0): _ONE})

    def coeff(self, i: int, j: int) -> Fraction:
        n1, n2 = self.orders
        if not 0 <= i <= n1 or not 0 <= j <= n2:
            raise ValueError(f"exponent ({i}, {j}) outside orders {self.orders}")
        return self.coeffs.get((i, j), _ZERO)

    def _check(self, other: "BiSeries") -> None:
        if self.vars != other.vars or self.orders != other.orders:
            raise ValueError(
                f"series mismatch: {self.vars}@{self.orders} vs"
                f" {other.vars}@{other.orders}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BiSeries):
            return NotImplemented
        return (
            self.vars == other.vars
            and self.orders == other.orders
            and self.coeffs == other.coeffs
        )

    def __add__(self, other: "BiSeries") -> "BiSeries":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, _ZERO) + v
        return BiSeries(self.vars, self.orders, out)

    def __sub__(self, other: "BiSeries") -> "BiSeries":
        return self + (-other)

    def __neg__(self) -> "BiSeries":
        return BiSeries(self.vars, self.orders, {k: -v for k, v in self.coeffs.items()})

    def scale(self, r: Fraction) -> "BiSeries":
        r = Fraction(r)
        if not r:
            return BiSeries.zero(self.vars, self.orders)
        return BiSeries(self.vars, self.orders, {k: r * v for k, v in self.coeffs.items()})

    def __mul__(self, other: "BiSeries") -> "BiSeries":
        self._check(other)
        n1, n2 = self.orders
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), v1 in self.coeffs.items():
            for (i2, j2), v2 in other.coeffs.items():
                i, j = i1 + i2, j1 + j2
                if i <= n1 and j <= n2:
                    key = (i, j)
                    out[key] = out.get(key, _ZERO) + v1 * v2
        return BiSeries(self.vars, self.orders, out)

    def exp(self) -> "BiSeries":
        """exp by summed powers; every power raises the total degree."""
        if self.coeffs.get((0, 0)):
            raise ValueError("exp requires zero constant term")
        n1, n2 = self.orders
        result = BiSeries.one(self.vars, self.orders)
        power = BiSeries.one(self.vars, self.orders)
        fact = 1
        for n in range(1, n1 + n2 + 1):
            power = power * self
            if not power.coeffs:
                break
            fact *= n
            result = result + power.scale(Fraction(1, fact))
        return result

    def derivative(self, axis: int) -> "BiSeries":
        """Formal derivative along axis 0 or 1; that order drops by one."""
        n1, n2 = self.orders
        if axis == 0:
            orders = (max(n1 - 1, 0), n2)
            terms = {
                (i - 1, j): i * v for (i, j), v in self.coeffs.items() if i >= 1
            }
        elif axis == 1:
            orders = (n1, max(n2 - 1, 0))
            terms = {
                (i, j - 1): j * v for (i, j), v in self.coeffs.items() if j >= 1
            }
        else:
            raise ValueError("axis must be 0 or 1")
        return BiSeries(self.vars, orders, terms)

    def shift(self, axis: int, amount: int) -> "BiSeries":
        """Multiply by var[axis]**amount; the truncation order grows to match."""
        if amount < 0:
            raise ValueError("shift amount must be >= 0")
        n1, n2 = self.orders
        if axis == 0:
            orders = (n1 + amount, n2)
            terms = {(i + amount, j): v for (i, j), v in self.coeffs.items()}
        elif axis == 1:
            orders = (n1, n2 + amount)
            terms = {(i, j + amount): v for (i, j), v in self.coeffs.items()}
        else:
            raise ValueError("axis must be 0 or 1")
        return BiSeries(self.vars, orders, terms)

    def truncate(self, orders: tuple[int, int]) -> "BiSeries":
        n1, n2 = orders
        if n1 > self.orders[0] or n2 > self.orders[1]:
            raise ValueError("cannot truncate to larger orders")
        return BiSeries(
            self.vars,
            orders,
            {(i, j): v for (i, j), v in self.coeffs.items() if i <= n1 and j <= n2},
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self) -> Iterator[tuple[int, int, Fraction]]:
        for (i, j) in sorted(self.coeffs):
            yield i, j, self.coeffs[(i, j)]

    def dump(self) -> str:
        """Debug dump: one term per line, "i j num/den", sorted by (i, j)."""
        return "\n".join(f"{i} {j} {v}" for i, j, v in self.terms())

    def __repr__(self) -> str:
        return f"BiSeries({self.vars}, {self.orders}, {len(self.coeffs)} terms)"


def binomial_unit_pow(
    c: Fraction,
    e: Fraction,
    vars: tuple[str, str],
    orders: tuple[int, int],
    axis: int = 1,
) -> BiSeries:
    """(1 + c*v)^e as a BiSeries, where v is the variable on the given axis."""
    order = orders[axis]
    cs = binomial_series_coeffs(c, e, order)
    if axis == 0:
        terms = {(k, 0): v for k, v in enumerate(cs)}
    else:
        terms = {(0, k): v for k, v in enumerate(cs)}
    return BiSeries(vars, orders, terms)


def coeff_via_change_of_vars(p: BiSeries, a: int, d: int) -> Fraction:
    """Extract the (a, d) coefficient of p through the substituted variables.

    Substitute w = -u/(1+4u) and x = y*(1+4u)^(-1/2) into p(x, w), multiply
    by (1+4u)^((a+2d-2)/2), take the coefficient of y^a u^d, and flip the
    sign by (-1)^d.  The result equals the directly extracted coefficient
    of x^a w^d; computing it this way exercises the substitution route.
    """
    n1, n2 = p.orders
    if a > n1 or d > n2:
        raise ValueError(f"series truncated below ({a}, {d})")
    # Only x-degree a survives extraction at y^a; each monomial x^a w^j maps
    # to y^a (-1)^j u^j (1+4u)^(-a/2 - j); with the prefactor the u-part is
    # (1+4u)^(d - 1 - j).
    total = _ZERO
    for j in range(0, d + 1):
        v = p.coeffs.get((a, j))
        if not v:
            continue
        expo = Fraction(d - 1 - j)
        cs = binomial_series_coeffs(Fraction(4), expo, d - j)
        total += v * (-1) ** j * cs[d - j]
    return total * (-1) ** d
