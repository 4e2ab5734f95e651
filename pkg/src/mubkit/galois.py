"""Arithmetic in GF(p^n) for odd primes p.

Elements are polynomials in ``t`` of degree < n with coefficients mod p,
stored low-to-high. The integer ``sum(c_i * p**i)`` is an element's index;
enumeration and modulus selection both follow that index order.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product

from .errors import DomainError

MAX_ORDER = 81


def _is_prime(p):
    if p < 2:
        return False
    return all(p % k for k in range(2, int(p**0.5) + 1))


def _poly_rem(a, b, p):
    """Remainder of ``a`` modulo monic ``b`` over GF(p); lists are low-to-high."""
    a = list(a)
    nb = len(b)
    while len(a) >= nb:
        lead = a[-1]
        if lead:
            shift = len(a) - nb
            for i, bc in enumerate(b):
                a[shift + i] = (a[shift + i] - lead * bc) % p
        a.pop()
    return a


def is_irreducible(coeffs, p):
    """Trial division of a monic polynomial by every monic polynomial of degree <= n/2."""
    n = len(coeffs) - 1
    for k in range(1, n // 2 + 1):
        for low in product(range(p), repeat=k):
            if not any(_poly_rem(coeffs, [*low, 1], p)):
                return False
    return True


@dataclass(frozen=True)
class GaloisField:
    p: int
    n: int
    modulus: tuple  # monic, low-to-high, length n + 1

    @property
    def order(self):
        return self.p**self.n

    def __repr__(self):
        return f"GF({self.p}^{self.n}, modulus={_poly_str(self.modulus)})"

    def __call__(self, value):
        """Element from an index in ``[0, q)`` or a coefficient sequence."""
        if isinstance(value, int):
            if not 0 <= value < self.order:
                raise DomainError(f"index {value} outside [0, {self.order})")
            coeffs = []
            for _ in range(self.n):
                value, c = divmod(value, self.p)
                coeffs.append(c)
            return FieldElement(tuple(coeffs), self)
        coeffs = tuple(int(c) for c in value)
        if len(coeffs) != self.n:
            raise DomainError(f"expected {self.n} coefficients, got {len(coeffs)}")
        if any(not 0 <= c < self.p for c in coeffs):
            raise DomainError(f"coefficients must lie in [0, {self.p})")
        return FieldElement(coeffs, self)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    @cached_property
    def _elements(self):
        return tuple(self(i) for i in range(self.order))


@dataclass(frozen=True)
class FieldElement:
    coeffs: tuple
    field: GaloisField

    @property
    def index(self):
        return sum(c * self.field.p**i for i, c in enumerate(self.coeffs))

    def __repr__(self):
        return _poly_str(self.coeffs)

    def __add__(self, other):
        return f_add(self, other)

    def __mul__(self, other):
        return f_mul(self, other)

    def __neg__(self):
        p = self.field.p
        return FieldElement(tuple((-c) % p for c in self.coeffs), self.field)

    def __sub__(self, other):
        return f_add(self, -other)

    def __pow__(self, k):
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return any(self.coeffs)


def _poly_str(coeffs):
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        terms.append(str(c) if i == 0 else (mono if c == 1 else f"{c}{mono}"))
    return "+".join(terms) or "0"


def field_build(p, n):
    """GF(p^n) with the first monic irreducible modulus in index order."""
    if not isinstance(p, int) or p == 2 or not _is_prime(p):
        raise DomainError(f"p must be an odd prime, got {p}")
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if p**n > MAX_ORDER:
        raise DomainError(f"field order {p}^{n} exceeds the supported maximum {MAX_ORDER}")
    for idx in range(p**n):
        low = [(idx // p**i) % p for i in range(n)]
        candidate = (*low, 1)
        if is_irreducible(candidate, p):
            return GaloisField(p, n, candidate)
    raise AssertionError("an irreducible polynomial of every degree exists")


def _check_same(a, b):
    if a.field != b.field:
        raise DomainError(f"elements belong to different fields: {a.field} vs {b.field}")


def f_add(a, b):
    _check_same(a, b)
    p = a.field.p
    return FieldElement(tuple((x + y) % p for x, y in zip(a.coeffs, b.coeffs)), a.field)


def f_mul(a, b):
    _check_same(a, b)
    field = a.field
    p, n = field.p, field.n
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                prod[i + j] = (prod[i + j] + x * y) % p
    rem = _poly_rem(prod, field.modulus, p)
    rem += [0] * (n - len(rem))
    return FieldElement(tuple(rem), field)


def f_trace(a):
    """Absolute trace ``a + a^p + ... + a^(p^(n-1))`` as an integer residue."""
    p = a.field.p
    total, frob = a, a
    for _ in range(a.field.n - 1):
        frob = frob**p
        total = total + frob
    if any(total.coeffs[1:]):
        raise AssertionError(f"trace {total} left the prime subfield")
    return total.coeffs[0]


def f_enumerate(field):
    """All field elements in index order, zero first."""
    return list(field._elements)
