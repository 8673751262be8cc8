"""Exact sparse multivariate polynomials over the rationals.

Coefficients are ``gmpy2.mpq`` values.  Monomials are exponent tuples indexed
by a :class:`VarTable`, which also carries the weighted grading used for the
fiber variables.  Parameters always have weight zero in that grading.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd as igcd
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from gmpy2 import mpq, mpz

from . import kernels

Exponent = Tuple[int, ...]

Rational = mpq
ZERO = mpq(0)
ONE = mpq(1)


class NegInf:
    """Weighted degree of the zero polynomial."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "-inf"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __add__(self, other):
        return self

    __radd__ = __add__


NEG_INF = NegInf()


def to_rational(x) -> mpq:
    if isinstance(x, type(ONE)):
        return x
    if isinstance(x, (int, type(mpz(0)))):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(Fraction(x).numerator, Fraction(x).denominator)
    raise TypeError(f"not an exact rational: {x!r}")


def is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, type(ONE), type(mpz(0))))


class StructuralError(ValueError):
    pass


class VarTable:
    """Ordered variables with fiber/parameter roles and fiber weights."""

    __slots__ = ("names", "weights", "roles", "_index")

    def __init__(self, names: Sequence[str], weights=None, roles=None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise StructuralError("variable names must be unique")
        for n in names:
            if not re.fullmatch(r"[a-zA-Z][a-zA-Z0-9_]*", n):
                raise StructuralError(f"bad variable name {n!r}")
        if roles is None:
            roles = ("fiber",) * len(names)
        roles = tuple(roles)
        if any(r not in ("fiber", "parameter") for r in roles):
            raise StructuralError("roles must be 'fiber' or 'parameter'")
        if weights is None:
            weights = tuple(1 if r == "fiber" else 0 for r in roles)
        weights = tuple(int(w) for w in weights)
        if len(weights) != len(names) or len(roles) != len(names):
            raise StructuralError("names, weights and roles differ in length")
        if any(w < 0 for w in weights):
            raise StructuralError("weights must be non-negative")
        # parameters never contribute to the fiber grading
        weights = tuple(0 if r == "parameter" else w for w, r in zip(weights, roles))
        self.names = names
        self.weights = weights
        self.roles = roles
        self._index = {n: i for i, n in enumerate(names)}

    @classmethod
    def fiber_params(cls, fiber: Mapping[str, int], params: Sequence[str] = ()):
        names = list(fiber) + list(params)
        weights = list(fiber.values()) + [0] * len(params)
        roles = ["fiber"] * len(fiber) + ["parameter"] * len(params)
        return cls(names, weights, roles)

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return self is other or (
            isinstance(other, VarTable)
            and self.names == other.names
            and self.weights == other.weights
            and self.roles == other.roles
        )

    def __hash__(self):
        return hash((self.names, self.weights, self.roles))

    def __repr__(self):
        return f"VarTable({list(self.names)}, weights={list(self.weights)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise StructuralError(f"unknown variable {name!r}") from None

    def __contains__(self, name):
        return name in self._index

    @property
    def fiber(self) -> Tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.roles) if r == "fiber")

    @property
    def params(self) -> Tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.roles) if r == "parameter")

    def wdeg(self, e: Exponent) -> int:
        return sum(w * k for w, k in zip(self.weights, e))


class MonomialOrder:
    """Weighted-degree-then-reverse-lex (default) or lexicographic order.

    ``priority`` lists variable indices from most to least significant.  For
    the graded order the sort key is (fiber weighted degree, parameter total
    degree, reverse-lex), which is a multiplicative well-order even though
    parameters carry weight zero.
    """

    __slots__ = ("kind", "priority", "ring", "key")

    def __init__(self, ring: VarTable, kind: str = "wdeg-revlex", priority=None):
        if kind not in ("wdeg-revlex", "lex"):
            raise ValueError(f"unknown order kind {kind!r}")
        if priority is None:
            priority = [i for i in range(len(ring)) if ring.roles[i] == "fiber"]
            priority += [i for i in range(len(ring)) if ring.roles[i] == "parameter"]
        priority = tuple(ring.index(p) if isinstance(p, str) else p for p in priority)
        if sorted(priority) != list(range(len(ring))):
            raise ValueError("priority must be a permutation of the variables")
        self.kind = kind
        self.priority = priority
        self.ring = ring
        if kind == "lex":
            pr = priority

            def key(e):
                return tuple(e[i] for i in pr)
        else:
            w = ring.weights
            par = ring.params
            rev = tuple(reversed(priority))

            def key(e):
                return (
                    sum(a * b for a, b in zip(w, e)),
                    sum(e[i] for i in par),
                    tuple(-e[i] for i in rev),
                )
        self.key = key

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and self.kind == other.kind
            and self.priority == other.priority
            and self.ring == other.ring
        )

    def __hash__(self):
        return hash((self.kind, self.priority, self.ring))


_ORDER_CACHE: Dict[VarTable, MonomialOrder] = {}


def canonical_order(ring: VarTable) -> MonomialOrder:
    o = _ORDER_CACHE.get(ring)
    if o is None:
        o = _ORDER_CACHE[ring] = MonomialOrder(ring)
    return o


class MultiPoly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to mpq."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: VarTable, terms: Mapping[Exponent, object] = None, _clean=False):
        self.ring = ring
        if terms is None:
            terms = {}
        elif not _clean:
            n = len(ring)
            t = {}
            for e, c in terms.items():
                e = tuple(int(k) for k in e)
                if len(e) != n or any(k < 0 for k in e):
                    raise StructuralError(f"bad exponent {e} for {ring}")
                c = to_rational(c)
                if c:
                    t[e] = t.get(e, ZERO) + c
            terms = {e: c for e, c in t.items() if c}
        self.terms = terms
        self._hash = None

    # constructors
    @classmethod
    def const(cls, ring, c):
        c = to_rational(c)
        return cls(ring, {(0,) * len(ring): c} if c else {}, _clean=True)

    @classmethod
    def var(cls, ring, name, power=1):
        e = [0] * len(ring)
        e[ring.index(name)] = power
        return cls(ring, {tuple(e): ONE}, _clean=True)

    @classmethod
    def monomial(cls, ring, e, c=1):
        c = to_rational(c)
        return cls(ring, {tuple(e): c} if c else {}, _clean=True)

    def gens(self):
        return [MultiPoly.var(self.ring, n) for n in self.ring.names]

    # basic predicates
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> mpq:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms.get((0,) * len(self.ring), ZERO)

    def __len__(self):
        return len(self.terms)

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise StructuralError("polynomials live over different variable tables")
            return other
        if is_scalar(other):
            return MultiPoly.const(self.ring, other)
        return NotImplemented

    # arithmetic
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MultiPoly(self.ring, kernels.add_terms(self.terms, o.terms), _clean=True)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MultiPoly(self.ring, kernels.add_terms(self.terms, o.terms, -1), _clean=True)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if is_scalar(other):
            c = to_rational(other)
            if not c:
                return MultiPoly(self.ring, {}, _clean=True)
            return MultiPoly(self.ring, {e: v * c for e, v in self.terms.items()}, _clean=True)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MultiPoly(self.ring, kernels.mul_terms(self.terms, o.terms), _clean=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if is_scalar(other):
            c = to_rational(other)
            if not c:
                raise ZeroDivisionError("division by zero")
            return self * (ONE / c)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        q = exact_divide(self, o)
        if q is None:
            raise ArithmeticError("inexact polynomial division")
        return q

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MultiPoly.const(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        if is_scalar(other):
            return self.is_constant() and self.constant_value() == to_rational(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # structure
    def wdeg(self):
        """Fiber weighted degree; ``NEG_INF`` for zero."""
        if not self.terms:
            return NEG_INF
        return max(self.ring.wdeg(e) for e in self.terms)

    def total_degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def degree_in(self, name) -> int:
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def leading_part(self):
        if not self.terms:
            return self
        d = self.wdeg()
        w = self.ring.wdeg
        return MultiPoly(self.ring, {e: c for e, c in self.terms.items() if w(e) == d}, _clean=True)

    def homogeneous_part(self, d):
        w = self.ring.wdeg
        return MultiPoly(self.ring, {e: c for e, c in self.terms.items() if w(e) == d}, _clean=True)

    def is_homogeneous(self, weights=None) -> bool:
        if weights is None:
            weights = self.ring.weights
        degs = {sum(a * b for a, b in zip(weights, e)) for e in self.terms}
        return len(degs) <= 1

    def leading_term(self, order: MonomialOrder = None):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        order = order or canonical_order(self.ring)
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def sorted_terms(self, order: MonomialOrder = None):
        order = order or canonical_order(self.ring)
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def variables(self):
        n = len(self.ring)
        used = [False] * n
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return [self.ring.names[i] for i in range(n) if used[i]]

    def diff(self, name, times=1):
        i = self.ring.index(name)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k >= times:
                f = 1
                for j in range(times):
                    f *= k - j
                e2 = e[:i] + (k - times,) + e[i + 1:]
                out[e2] = c * f
        return MultiPoly(self.ring, out, _clean=True)

    # evaluation and substitution
    def evaluate(self, point: Mapping[str, object]) -> "MultiPoly":
        """Substitute rationals for some variables; the rest stay symbolic."""
        idx = {}
        for name, v in point.items():
            idx[self.ring.index(name)] = to_rational(v)
        if not idx:
            return self
        out: Dict[Exponent, mpq] = {}
        for e, c in self.terms.items():
            val = c
            e2 = list(e)
            for i, v in idx.items():
                k = e[i]
                if k:
                    val = val * v ** k
                    e2[i] = 0
            if val:
                e2 = tuple(e2)
                s = out.get(e2)
                out[e2] = val if s is None else s + val
        return MultiPoly(self.ring, {e: c for e, c in out.items() if c}, _clean=True)

    def __call__(self, **point):
        return self.evaluate(point)

    def value_at(self, point: Mapping[str, object]) -> mpq:
        """Full evaluation to a rational (every occurring variable assigned)."""
        return self.evaluate(point).constant_value()

    def eval_values(self, values: Sequence) -> object:
        """Evaluate at a full point with arbitrary ring values (e.g. complex)."""
        return kernels.eval_terms(self.terms, list(values))

    def subs(self, mapping: Mapping[str, "MultiPoly"]) -> "MultiPoly":
        """Substitute polynomials (over the same table) for variables."""
        idx = {self.ring.index(n): (p if isinstance(p, MultiPoly) else MultiPoly.const(self.ring, p))
               for n, p in mapping.items()}
        powers: Dict[Tuple[int, int], MultiPoly] = {}

        def pw(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = idx[i] ** k
            return powers[key]

        result: Dict[Exponent, mpq] = {}
        for e, c in self.terms.items():
            e2 = list(e)
            factor = None
            for i in idx:
                if e[i]:
                    p = pw(i, e[i])
                    factor = p if factor is None else factor * p
                    e2[i] = 0
            mono = MultiPoly(self.ring, {tuple(e2): c}, _clean=True)
            term = mono if factor is None else mono * factor
            result = kernels.add_terms(result, term.terms)
        return MultiPoly(self.ring, result, _clean=True)

    def change_ring(self, ring: VarTable) -> "MultiPoly":
        """Re-index into another table by variable names (must cover used vars)."""
        if ring == self.ring:
            return self
        src = self.ring.names
        pos = []
        for i, n in enumerate(src):
            pos.append(ring.index(n) if n in ring else None)
        out = {}
        m = len(ring)
        for e, c in self.terms.items():
            e2 = [0] * m
            for i, k in enumerate(e):
                if k:
                    j = pos[i]
                    if j is None:
                        raise StructuralError(f"variable {src[i]!r} missing from target table")
                    e2[j] = k
            out[tuple(e2)] = c
        return MultiPoly(ring, out, _clean=True)

    def coefficients_in(self, names: Sequence[str]) -> Dict[Exponent, "MultiPoly"]:
        """Split as sum of monomials in ``names`` times polynomials in the rest."""
        ids = [self.ring.index(n) for n in names]
        out: Dict[Exponent, Dict[Exponent, mpq]] = {}
        for e, c in self.terms.items():
            k = tuple(e[i] for i in ids)
            e2 = list(e)
            for i in ids:
                e2[i] = 0
            out.setdefault(k, {})[tuple(e2)] = c
        return {k: MultiPoly(self.ring, v, _clean=True) for k, v in out.items()}

    def content(self) -> mpq:
        """Positive rational c with self/c integral and primitive."""
        if not self.terms:
            return ONE
        num = 0
        den = 1
        for c in self.terms.values():
            num = igcd(num, int(c.numerator))
            d = int(c.denominator)
            den = den * d // igcd(den, d)
        return mpq(num, den)

    def primitive(self) -> "MultiPoly":
        """Integral primitive associate with positive canonical leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_term()[1] < 0:
            c = -c
        return self * (ONE / c)

    def monic(self) -> "MultiPoly":
        return self * (ONE / self.leading_term()[1])

    # printing
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r})"


def format_rational(c: mpq) -> str:
    if c.denominator == 1:
        return str(int(c.numerator))
    return f"{int(c.numerator)}/{int(c.denominator)}"


def format_monomial(ring: VarTable, e: Exponent) -> str:
    parts = []
    for n, k in zip(ring.names, e):
        if k == 1:
            parts.append(n)
        elif k > 1:
            parts.append(f"{n}^{k}")
    return "*".join(parts)


def format_poly(p: MultiPoly, order: MonomialOrder = None) -> str:
    if not p.terms:
        return "0"
    out = []
    for e, c in p.sorted_terms(order):
        m = format_monomial(p.ring, e)
        neg = c < 0
        a = -c if neg else c
        if not m:
            body = format_rational(a)
        elif a == 1:
            body = m
        else:
            body = f"{format_rational(a)}*{m}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# ---------------------------------------------------------------- parsing

class ParseError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|([a-zA-Z][a-zA-Z0-9_]*)|(.))")


def _tokenize(text):
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            toks.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3))
            toks.append(("op", ch, m.start(3)))
        pos = m.end()
    toks.append(("end", None, n))
    return toks


class _Parser:
    def __init__(self, text, ring):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise ParseError(f"expected {op!r}", t[2])

    def parse(self):
        p = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError("unexpected trailing input", t[2])
        return p

    def expr(self):
        p = self.term()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                q = self.term()
                p = p + q if t[1] == "+" else p - q
            else:
                return p

    def term(self):
        p = self.unary()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "*/":
                self.take()
                q = self.unary()
                if t[1] == "*":
                    p = p * q
                else:
                    if not q.is_constant() or q.is_zero():
                        raise ParseError("division only by nonzero constants", t[2])
                    p = p * (ONE / q.constant_value())
            else:
                return p

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            p = self.unary()
            return -p if t[1] == "-" else p
        return self.power()

    def power(self):
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            e = self.take()
            if e[0] != "int":
                raise ParseError("exponent must be a non-negative integer literal", e[2])
            base = base ** e[1]
            t = self.peek()
            if t[0] == "op" and t[1] == "^":
                raise ParseError("chained exponent", t[2])
        return base

    def atom(self):
        t = self.take()
        if t[0] == "int":
            return MultiPoly.const(self.ring, t[1])
        if t[0] == "name":
            if t[1] not in self.ring:
                raise ParseError(f"unknown variable {t[1]!r}", t[2])
            nxt = self.peek()
            if nxt[0] in ("int", "name") or (nxt[0] == "op" and nxt[1] == "("):
                raise ParseError("implicit multiplication is not allowed", nxt[2])
            return MultiPoly.var(self.ring, t[1])
        if t[0] == "op" and t[1] == "(":
            p = self.expr()
            self.expect(")")
            return p
        raise ParseError("unexpected token", t[2])


def parse_poly(text: str, ring: VarTable) -> MultiPoly:
    return _Parser(text, ring).parse()


# ---------------------------------------------------------------- division

def divide_track(p: MultiPoly, divisors: Sequence[MultiPoly], order: MonomialOrder = None):
    """Multivariate division with cofactors.

    Returns ``(cofactors, remainder)`` with p = sum(cofactor_i*divisor_i) + remainder
    and no remainder term divisible by a divisor's leading monomial.
    """
    ring = p.ring
    order = order or canonical_order(ring)
    key = order.key
    if any(g.is_zero() for g in divisors):
        raise ValueError("zero divisor")
    lts = [g.leading_term(order) for g in divisors]
    cof = [dict() for _ in divisors]
    rem: Dict[Exponent, mpq] = {}
    work = dict(p.terms)
    n = len(ring)
    while work:
        e = max(work, key=key)
        c = work[e]
        for i, (le, lc) in enumerate(lts):
            if all(e[j] >= le[j] for j in range(n)):
                shift = tuple(e[j] - le[j] for j in range(n))
                q = c / lc
                cof[i][shift] = cof[i].get(shift, ZERO) + q
                kernels.addmul_inplace(work, divisors[i].terms, -q, shift)
                break
        else:
            rem[e] = c
            del work[e]
    cofs = [MultiPoly(ring, {e: c for e, c in d.items() if c}, _clean=True) for d in cof]
    return cofs, MultiPoly(ring, rem, _clean=True)


def exact_divide(p: MultiPoly, q: MultiPoly):
    """p/q if q divides p exactly, else None."""
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if p.is_zero():
        return p
    if q.is_constant():
        return p * (ONE / q.constant_value())
    if len(q.terms) == 1:
        (qe, qc), = q.terms.items()
        out = {}
        for e, c in p.terms.items():
            d = tuple(a - b for a, b in zip(e, qe))
            if min(d) < 0:
                return None
            out[d] = c / qc
        return MultiPoly(p.ring, out, _clean=True)
    (cof,), rem = divide_track(p, [q])
    if rem:
        return None
    return cof


# ---------------------------------------------------------------- gcd

def _univariate(p: MultiPoly, i: int) -> Dict[int, MultiPoly]:
    out: Dict[int, Dict[Exponent, mpq]] = {}
    for e, c in p.terms.items():
        k = e[i]
        out.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
    return {k: MultiPoly(p.ring, v, _clean=True) for k, v in out.items()}


def _from_univariate(u: Dict[int, MultiPoly], i: int, ring) -> MultiPoly:
    terms = {}
    for k, c in u.items():
        for e, v in c.terms.items():
            terms[e[:i] + (k,) + e[i + 1:]] = v
    return MultiPoly(ring, terms, _clean=True)


def _udeg(u):
    return max(u) if u else -1


def _prem(a, b, ring):
    """Pseudo-remainder of univariate dicts (coefficients MultiPoly)."""
    db = _udeg(b)
    lb = b[db]
    r = dict(a)
    dr = _udeg(r)
    k = dr - db + 1
    while r and dr >= db:
        lr = r[dr]
        # r = lb*r - lr*x^(dr-db)*b
        new = {}
        for j, c in r.items():
            new[j] = c * lb
        for j, c in b.items():
            jj = j + dr - db
            v = new.get(jj)
            new[jj] = -(lr * c) if v is None else v - lr * c
        r = {j: c for j, c in new.items() if c}
        dr = _udeg(r)
        k -= 1
    if k > 0 and r:
        f = lb ** k
        r = {j: c * f for j, c in r.items()}
    return r


def _content_u(u, seed=None):
    """gcd of the coefficients of ``u`` (and of ``seed`` if given)."""
    g = seed
    for c in sorted(u.values(), key=len):
        g = c if g is None else poly_gcd(g, c)
        if g.is_constant():
            return MultiPoly.const(c.ring, 1)
    return g


def _monomial_gcd(p: MultiPoly) -> Exponent:
    it = iter(p.terms)
    m = list(next(it))
    for e in it:
        m = [min(a, b) for a, b in zip(m, e)]
    return tuple(m)


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Greatest common divisor, integral primitive with positive leading coefficient.

    Subresultant pseudo-remainder sequence in a main variable, recursing on
    contents.  Monomial factors and trivial divisibility are peeled off first.
    """
    if p.ring != q.ring:
        raise StructuralError("gcd over different variable tables")
    ring = p.ring
    if p.is_zero():
        return q.primitive()
    if q.is_zero():
        return p.primitive()
    if p.is_constant() or q.is_constant():
        return MultiPoly.const(ring, 1)
    if len(p.terms) > len(q.terms):
        p, q = q, p
    # monomial parts
    mp, mq = _monomial_gcd(p), _monomial_gcd(q)
    if any(mp) or any(mq):
        m = tuple(min(a, b) for a, b in zip(mp, mq))
        p = exact_divide(p, MultiPoly.monomial(ring, mp))
        q = exact_divide(q, MultiPoly.monomial(ring, mq))
        g = poly_gcd(p, q)
        return (g * MultiPoly.monomial(ring, m)).primitive()
    if len(p.terms) == 1 or len(q.terms) == 1:
        return MultiPoly.const(ring, 1)
    pp = p.primitive()
    if exact_divide(q, pp) is not None:
        return pp
    n = len(ring)
    degp = [0] * n
    degq = [0] * n
    for e in p.terms:
        for i, k in enumerate(e):
            if k > degp[i]:
                degp[i] = k
    for e in q.terms:
        for i, k in enumerate(e):
            if k > degq[i]:
                degq[i] = k
    # a variable present in only one operand: the gcd lies in its coefficients
    for j in range(n):
        if degp[j] and not degq[j]:
            return _content_u(_univariate(p, j), q).primitive()
        if degq[j] and not degp[j]:
            return _content_u(_univariate(q, j), p).primitive()
    common = [i for i in range(n) if degp[i]]
    i = min(common, key=lambda j: (max(degp[j], degq[j]), degp[j] + degq[j]))
    up = _univariate(p, i)
    uq = _univariate(q, i)
    c = _content_u(up)
    if not c.is_constant():
        c = _content_u(uq, c)
    if _udeg(up) < _udeg(uq):
        up, uq = uq, up
    g = _subresultant(up, uq, ring)
    gp = _from_univariate(g, i, ring)
    gp = exact_divide(gp, _content_u(g)) if _udeg(g) > 0 else MultiPoly.const(ring, 1)
    return (gp * c).primitive()


def _subresultant(a, b, ring):
    one = MultiPoly.const(ring, 1)
    g = one
    h = one
    while True:
        delta = _udeg(a) - _udeg(b)
        r = _prem(a, b, ring)
        if not r:
            return b
        if _udeg(r) == 0:
            return {0: one}
        a = b
        div = g * h ** delta
        b = {k: v / div for k, v in r.items()}
        g = a[_udeg(a)]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g ** delta) / (h ** (delta - 1))


# ---------------------------------------------------------------- rational functions

class RationalFunction:
    """num/den in lowest terms; den integral primitive with positive leading coefficient."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly = None, _reduced=False):
        if den is None:
            den = MultiPoly.const(num.ring, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    @property
    def ring(self):
        return self.num.ring

    @classmethod
    def const(cls, ring, c):
        return cls(MultiPoly.const(ring, c), MultiPoly.const(ring, 1), _reduced=True)

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_polynomial(self):
        return self.den.is_constant()

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction(other, MultiPoly.const(other.ring, 1), _reduced=True)
        if is_scalar(other):
            return RationalFunction.const(self.ring, other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            if self.den.is_constant():
                return RationalFunction(self.num + o.num, self.den, _reduced=True)
            return RationalFunction(self.num + o.num, self.den)
        # a polynomial plus a reduced fraction stays reduced
        if self.den.is_constant():
            return RationalFunction(self.num * o.den + o.num, o.den, _reduced=True)
        if o.den.is_constant():
            return RationalFunction(self.num + o.num * self.den, self.den, _reduced=True)
        g = poly_gcd(self.den, o.den)
        d1 = self.den / g
        d2 = o.den / g
        return RationalFunction(self.num * d2 + o.num * d1, d1 * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if is_scalar(other):
            return RationalFunction(self.num * to_rational(other), self.den, _reduced=True) \
                if to_rational(other) else RationalFunction.const(self.ring, 0)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.den.is_constant() and o.den.is_constant():
            return RationalFunction(self.num * o.num, self.den, _reduced=True)
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        n = (self.num / g1) * (o.num / g2)
        d = (self.den / g2) * (o.den / g1)
        return RationalFunction(n, d)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        if is_scalar(other):
            c = to_rational(other)
            if not c:
                raise ZeroDivisionError("division by zero")
            return RationalFunction(self.num * (ONE / c), self.den, _reduced=True)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n, _reduced=True)

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, RationalFunction) else other
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def diff(self, name):
        return RationalFunction(self.num.diff(name) * self.den - self.num * self.den.diff(name),
                                self.den * self.den)

    def evaluate(self, point):
        n = self.num.evaluate(point)
        d = self.den.evaluate(point)
        if d.is_zero():
            raise ZeroDivisionError("denominator vanishes at the point")
        return RationalFunction(n, d)

    def value_at(self, point) -> mpq:
        d = self.den.value_at(point)
        if not d:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.num.value_at(point) / d

    def as_poly(self) -> MultiPoly:
        if not self.den.is_constant():
            raise ArithmeticError("not a polynomial")
        return self.num * (ONE / self.den.constant_value())

    def __str__(self):
        if self.den.is_constant():
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _normalize(num: MultiPoly, den: MultiPoly):
    ring = num.ring
    if num.is_zero():
        return num, MultiPoly.const(ring, 1)
    if den.is_constant():
        return num * (ONE / den.constant_value()), MultiPoly.const(ring, 1)
    g = poly_gcd(num, den)
    if not g.is_constant():
        num = num / g
        den = den / g
    if den.is_constant():
        return num * (ONE / den.constant_value()), MultiPoly.const(ring, 1)
    dp = den.primitive()
    f = den.leading_term()[1] / dp.leading_term()[1]
    return num * (ONE / f), dp


def poly_ring(spec: str) -> VarTable:
    """Small helper: 'x:8,y:9,w:6;a,b' -> fiber weights then parameters."""
    fiber, _, params = spec.partition(";")
    fw = {}
    for item in filter(None, (s.strip() for s in fiber.split(","))):
        n, _, w = item.partition(":")
        fw[n.strip()] = int(w) if w else 1
    ps = [s.strip() for s in params.split(",") if s.strip()]
    return VarTable.fiber_params(fw, ps)


def polys(ring: VarTable, *texts: str) -> Iterable[MultiPoly]:
    return [parse_poly(t, ring) for t in texts]
