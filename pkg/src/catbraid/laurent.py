"""Exact arithmetic over Z[q, q^-1] and its fraction field.

Laurent polynomials are stored sparsely as ``{exponent: coefficient}`` with
integer (arbitrary-precision) coefficients and no stored zeros.  The fraction
field extension ``RatFunc`` exists for divided-power module actions, where
division by quantum factorials is unavoidable.
"""

from __future__ import annotations

from fractions import Fraction


class NotDivisible(ArithmeticError):
    """Raised by :func:`divide_exact` when no exact quotient exists."""


class LaurentPoly:
    """An element of Z[q, q^-1].

    INPUT:
    - ``coeffs``: a dict {exponent: coefficient}; zero coefficients are dropped.

    The class is immutable in spirit: no method mutates ``self``.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs=None):
        if coeffs is None:
            coeffs = {}
        self.coeffs = {int(e): int(c) for e, c in coeffs.items() if c != 0}
        self._hash = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def q(cls, exponent=1):
        """The monomial q^exponent."""
        return cls({exponent: 1})

    @classmethod
    def from_int(cls, n):
        return cls({0: n})

    # -- ring structure -----------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            if len(self.coeffs) == 1:
                ((e, c),) = self.coeffs.items()
                if c in (1, -1):
                    return LaurentPoly({n * e: c if n % 2 else 1})
            raise NotDivisible("negative powers only defined for unit monomials")
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparisons / hashing ------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.from_int(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self.coeffs.items())))
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    # -- structure -------------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        """Top exponent, or None for the zero polynomial."""
        return max(self.coeffs) if self.coeffs else None

    def valuation(self):
        """Bottom exponent, or None for the zero polynomial."""
        return min(self.coeffs) if self.coeffs else None

    def bar(self):
        """The bar involution q -> q^-1 (exponent negation)."""
        return LaurentPoly({-e: c for e, c in self.coeffs.items()})

    def evaluate(self, value):
        """Substitute a concrete (Fraction or int) value for q."""
        value = Fraction(value)
        total = Fraction(0)
        for e, c in self.coeffs.items():
            total += c * value**e
        return total

    # -- presentation ------------------------------------------------------

    def __repr__(self):
        return f"LaurentPoly({render(self)!r})"

    def __str__(self):
        return render(self)


def _coerce(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.from_int(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")


def qint(a):
    """Quantum integer [a] = (q^a - q^-a)/(q - q^-1).

    INPUT:
    - ``a``: any integer; [-a] = -[a], [0] = 0.

    OUTPUT:
    - a LaurentPoly: q^(a-1) + q^(a-3) + ... + q^(1-a) for a > 0.
    """
    if a == 0:
        return LaurentPoly.zero()
    if a < 0:
        return -qint(-a)
    return LaurentPoly({a - 1 - 2 * m: 1 for m in range(a)})


def qfact(a):
    """Quantum factorial [a]! = [1][2]...[a]; [0]! = 1."""
    if a < 0:
        raise ValueError("qfact requires a >= 0")
    out = LaurentPoly.one()
    for m in range(1, a + 1):
        out = out * qint(m)
    return out


def qbinom(a, b):
    """Quantum binomial [a choose b] as an exact LaurentPoly (a >= b >= 0)."""
    if b < 0 or b > a:
        return LaurentPoly.zero()
    num = LaurentPoly.one()
    for m in range(a - b + 1, a + 1):
        num = num * qint(m)
    return divide_exact(num, qfact(b))


def bar(p):
    """Bar involution on Z[q,q^-1]: q -> q^-1."""
    return p.bar()


def divide_exact(p, d):
    """Exact division in Z[q,q^-1]: return r with r*d == p.

    Raises :class:`NotDivisible` when no Laurent-polynomial quotient exists.
    Division proceeds top-down on exponents after normalizing out the
    denominator's valuation (units q^n are invertible).
    """
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return LaurentPoly.zero()
    # shift both so the divisor is an honest polynomial with nonzero constant
    vd = d.valuation()
    dd = {e - vd: c for e, c in d.coeffs.items()}
    vp = p.valuation()
    rem = {e - vp: c for e, c in p.coeffs.items()}
    dtop = max(dd)
    dlead = dd[dtop]
    quot = {}
    while rem:
        rtop = max(rem)
        if rtop < dtop:
            raise NotDivisible(f"{p} is not divisible by {d}")
        c, r = divmod(rem[rtop], dlead)
        if r != 0:
            raise NotDivisible(f"{p} is not divisible by {d}")
        shift = rtop - dtop
        quot[shift] = c
        for e, dc in dd.items():
            e2 = e + shift
            nv = rem.get(e2, 0) - c * dc
            if nv == 0:
                rem.pop(e2, None)
            else:
                rem[e2] = nv
    return LaurentPoly({e + vp - vd: c for e, c in quot.items()})


def render(p):
    """Render ``a_n*q^n + ...`` in descending exponent order."""
    if p.is_zero():
        return "0"
    parts = []
    for e in sorted(p.coeffs, reverse=True):
        c = p.coeffs[e]
        if e == 0:
            term = str(c)
        elif e == 1:
            term = f"{c}*q"
        else:
            term = f"{c}*q^{e}"
        parts.append(term)
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


def parse(text):
    """Exact round-trip parser for :func:`render` output.

    Accepts strings like ``"2*q^3 - q + 5"``; whitespace-insensitive.
    """
    text = text.strip().replace("^-", "^~").replace("-", "+-")
    text = text.replace("^~", "^-").replace(" ", "")
    if text.startswith("+-"):
        text = text[1:]
    coeffs = {}
    for chunk in text.split("+"):
        if not chunk:
            continue
        if "q" in chunk:
            head, _, tail = chunk.partition("q")
            head = head.rstrip("*")
            if head in ("", "-"):
                c = -1 if head == "-" else 1
            else:
                c = int(head)
            if tail.startswith("^"):
                e = int(tail[1:])
            elif tail == "":
                e = 1
            else:
                raise ValueError(f"bad term {chunk!r}")
        else:
            c = int(chunk)
            e = 0
        coeffs[e] = coeffs.get(e, 0) + c
    return LaurentPoly(coeffs)


class RatFunc:
    """Element of Q(q) as a LaurentPoly pair num/den.

    Equality is cross-multiplication equality; reduction is best-effort
    (integer content, common q-power, exact-division probe) rather than a full
    polynomial gcd — enough to keep the battery-sized computations small.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, int):
            num = LaurentPoly.from_int(num)
        if isinstance(num, Fraction):
            den0 = LaurentPoly.from_int(num.denominator)
            num = LaurentPoly.from_int(num.numerator)
            if den is not None:
                raise TypeError("Fraction input takes no denominator")
            den = den0
        if den is None:
            den = LaurentPoly.one()
        if isinstance(den, int):
            den = LaurentPoly.from_int(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _reduce(num, den)

    @classmethod
    def q(cls, exponent=1):
        return cls(LaurentPoly.q(exponent))

    def __add__(self, other):
        other = _coerce_rf(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_coerce_rf(other))

    def __rsub__(self, other):
        return _coerce_rf(other) + (-self)

    def __mul__(self, other):
        other = _coerce_rf(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_rf(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _coerce_rf(other) / self

    def __pow__(self, n):
        if n < 0:
            return RatFunc(self.den, self.num) ** (-n)
        out = RatFunc(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = _coerce_rf(other)
        except TypeError:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        # hash through a canonical-enough form: reduce was already applied,
        # then normalize sign and content one more time for safety.
        n, d = self.num, self.den
        if d.coeffs and d.coeffs[max(d.coeffs)] < 0:
            n, d = -n, -d
        return hash((tuple(sorted(n.coeffs.items())), tuple(sorted(d.coeffs.items()))))

    def __bool__(self):
        return not self.num.is_zero()

    def is_zero(self):
        return self.num.is_zero()

    def bar(self):
        return RatFunc(self.num.bar(), self.den.bar())

    def as_laurent(self):
        """Clear to Z[q,q^-1] when possible; raises NotDivisible otherwise."""
        return divide_exact(self.num, self.den)

    def evaluate(self, value):
        return self.num.evaluate(value) / self.den.evaluate(value)

    def __repr__(self):
        if self.den == LaurentPoly.one():
            return f"RatFunc({render(self.num)!r})"
        return f"RatFunc({render(self.num)!r}, {render(self.den)!r})"


def _coerce_rf(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (int, Fraction, LaurentPoly)):
        return RatFunc(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to RatFunc")


def _igcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _reduce(num, den):
    """Best-effort reduction: probe exact division, strip content and q-powers."""
    if num.is_zero():
        return LaurentPoly.zero(), LaurentPoly.one()
    try:
        return divide_exact(num, den), LaurentPoly.one()
    except NotDivisible:
        pass
    try:
        r = divide_exact(den, num)
        # num/den = 1/r
        return LaurentPoly.one() * _sign(r), _abs_poly(r)
    except NotDivisible:
        pass
    content = 0
    for c in list(num.coeffs.values()) + list(den.coeffs.values()):
        content = _igcd(content, abs(c))
    if content > 1:
        num = LaurentPoly({e: c // content for e, c in num.coeffs.items()})
        den = LaurentPoly({e: c // content for e, c in den.coeffs.items()})
    shift = den.valuation()
    if shift:
        num = num * LaurentPoly.q(-shift)
        den = den * LaurentPoly.q(-shift)
    return num, den


def _sign(p):
    return -1 if p.coeffs[max(p.coeffs)] < 0 else 1


def _abs_poly(p):
    return -p if _sign(p) < 0 else p
