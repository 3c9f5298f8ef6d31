"""Exact arithmetic in F = F_p(t_1, ..., t_m).

Polynomials are sparse maps from exponent tuples to residues in ``1..p-1``.
Monomials are ordered graded-lexicographically, variable 0 most significant.
Rational functions are kept as reduced fractions whose denominator has
leading coefficient 1, so equal elements have identical representations.
"""

import os
from operator import add, sub

from .errors import DivisionByZero, FieldMismatch, NotAPthPower, SemanticError

try:
    import flint
    from flint.utils.flint_exceptions import DomainError as _FlintDomainError
except ImportError:  # pragma: no cover - exercised only without python-flint
    flint = None

# PFORMS_BACKEND=python forces the pure recursive gcd and division
_USE_FLINT = flint is not None and os.environ.get("PFORMS_BACKEND", "").lower() != "python"
_CTX = {}
_FLINT_MIN_TERMS = 3


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _gkey(e):
    return (sum(e), e)


# ---------------------------------------------------------------------------
# term-dict kernels; every function takes and returns plain dicts

def _lead(f):
    return max(f, key=_gkey)


def _add(f, g, p):
    if len(f) < len(g):
        f, g = g, f
    r = dict(f)
    for e, c in g.items():
        v = (r.get(e, 0) + c) % p
        if v:
            r[e] = v
        else:
            r.pop(e, None)
    return r


def _neg(f, p):
    return {e: p - c for e, c in f.items()}


def _sub(f, g, p):
    r = dict(f)
    for e, c in g.items():
        v = (r.get(e, 0) - c) % p
        if v:
            r[e] = v
        else:
            r.pop(e, None)
    return r


def _scale(f, c, p):
    c %= p
    if not c:
        return {}
    if c == 1:
        return f
    return {e: v * c % p for e, v in f.items()}


def _mul(f, g, p):
    if _USE_FLINT and len(f) * len(g) >= 64 and len(next(iter(f))) > 0:
        ctx = _ctx(len(next(iter(f))), p)
        return _from_flint(_to_flint(f, ctx) * _to_flint(g, ctx))
    if len(f) == 1 and len(g) == 1:
        (e1, c1), = f.items()
        (e2, c2), = g.items()
        return {tuple(map(add, e1, e2)): c1 * c2 % p}
    r = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(map(add, e1, e2))
            r[e] = r.get(e, 0) + c1 * c2
    return {e: c % p for e, c in r.items() if c % p}


def _mulmono(f, d):
    return {tuple(map(add, e, d)): c for e, c in f.items()}


def _divmono(f, d):
    return {tuple(map(sub, e, d)): c for e, c in f.items()}


def _min_exp(f):
    it = iter(f)
    lo = list(next(it))
    for e in it:
        for i, x in enumerate(e):
            if x < lo[i]:
                lo[i] = x
    return tuple(lo)


def _divexact(f, g, p):
    """Quotient of f by g; raises ValueError if g does not divide f."""
    if not g:
        raise DivisionByZero("polynomial division by zero")
    if not f:
        return {}
    if len(g) > 1 and _flint_ok(f, g):
        ctx = _ctx(len(next(iter(f))), p)
        try:
            return _from_flint(_to_flint(f, ctx) / _to_flint(g, ctx))
        except _FlintDomainError:
            raise ValueError("inexact division") from None
    if len(g) == 1:
        (eg, cg), = g.items()
        inv = pow(cg, p - 2, p)
        out = {}
        for e, c in f.items():
            d = tuple(map(sub, e, eg))
            if min(d) < 0:
                raise ValueError("inexact division")
            out[d] = c * inv % p
        return out
    eg = _lead(g)
    inv = pow(g[eg], p - 2, p)
    gs = [(e, c) for e, c in g.items() if e != eg]
    r = dict(f)
    q = {}
    while r:
        er = _lead(r)
        d = tuple(map(sub, er, eg))
        if min(d) < 0:
            raise ValueError("inexact division")
        c = r.pop(er) * inv % p
        q[d] = c
        for e, cc in gs:
            t = tuple(map(add, e, d))
            v = (r.get(t, 0) - c * cc) % p
            if v:
                r[t] = v
            else:
                r.pop(t, None)
    return q


def _vars(f):
    out = set()
    for e in f:
        for i, x in enumerate(e):
            if x:
                out.add(i)
    return out


def _deg_in(f, v):
    return max(e[v] for e in f)


def _coeffs_in(f, v):
    """Split f = sum_k c_k * t_v^k; returns {k: c_k} with t_v removed from c_k."""
    out = {}
    for e, c in f.items():
        k = e[v]
        if k:
            e = e[:v] + (0,) + e[v + 1:]
        out.setdefault(k, {})[e] = c
    return out


def _content_in(f, v, p):
    g = {}
    for c in _coeffs_in(f, v).values():
        g = _gcd_prs(g, c, p)
        if len(g) == 1 and not any(next(iter(g))):
            break
    return g


def _pp_in(f, v, p):
    c = _content_in(f, v, p)
    if len(c) == 1 and not any(next(iter(c))):
        return f
    return _divexact(f, c, p)


def _prem(a, b, v, p):
    db = _deg_in(b, v)
    lcb = _coeffs_in(b, v)[db]
    m = len(next(iter(b)))
    r = a
    while r:
        dr = _deg_in(r, v)
        if dr < db:
            break
        lcr = _coeffs_in(r, v)[dr]
        shift = tuple(dr - db if i == v else 0 for i in range(m))
        r = _sub(_mul(lcb, r, p), _mul(_mulmono(lcr, shift), b, p), p)
    return r


def _is_const(f):
    return len(f) == 1 and not any(next(iter(f)))


def _ctx(m, p):
    key = (m, p)
    ctx = _CTX.get(key)
    if ctx is None:
        ctx = _CTX[key] = flint.nmod_mpoly_ctx.get(tuple(f"t{i}" for i in range(m)), modulus=p)
    return ctx


def _to_flint(f, ctx):
    return ctx.from_dict(f)


def _from_flint(g):
    return {tuple(map(int, e)): int(c) for e, c in g.to_dict().items()}


def _flint_ok(f, g):
    return _USE_FLINT and len(next(iter(f))) > 0 and len(f) + len(g) >= _FLINT_MIN_TERMS


def _gcd(f, g, p):
    """A gcd of f and g (not normalized); gcd(0, 0) = 0."""
    if not f:
        return g
    if not g:
        return f
    if _flint_ok(f, g):
        ctx = _ctx(len(next(iter(f))), p)
        return _from_flint(_to_flint(f, ctx).gcd(_to_flint(g, ctx)))
    return _gcd_prs(f, g, p)


def _gcd_prs(f, g, p):
    """Monomial content, then the primitive pseudo-remainder sequence."""
    if not f:
        return g
    if not g:
        return f
    a = _min_exp(f)
    b = _min_exp(g)
    mono = tuple(map(min, a, b))
    if any(a):
        f = _divmono(f, a)
    if any(b):
        g = _divmono(g, b)
    core = _gcd_core(f, g, p)
    return _mulmono(core, mono) if any(mono) else core


def _gcd_core(f, g, p):
    # f, g nonzero and free of monomial factors
    m = len(next(iter(f)))
    one = {(0,) * m: 1}
    if f == g:
        return f
    while True:
        if len(f) == 1 or len(g) == 1:
            return one
        vf, vg = _vars(f), _vars(g)
        only = vf - vg
        if only:
            f = _content_in(f, min(only), p)
            f = _divmono(f, _min_exp(f))
            continue
        only = vg - vf
        if only:
            g = _content_in(g, min(only), p)
            g = _divmono(g, _min_exp(g))
            continue
        break
    v = min(vf, key=lambda i: max(_deg_in(f, i), _deg_in(g, i)))
    cf = _content_in(f, v, p)
    cg = _content_in(g, v, p)
    c = _gcd_prs(cf, cg, p)
    pf = f if _is_const(cf) else _divexact(f, cf, p)
    pg = g if _is_const(cg) else _divexact(g, cg, p)
    if _deg_in(pf, v) < _deg_in(pg, v):
        pf, pg = pg, pf
    while True:
        r = _prem(pf, pg, v, p)
        if not r:
            break
        if _deg_in(r, v) == 0:
            return c
        pf, pg = pg, _pp_in(r, v, p)
    return _mul(c, pg, p)


def _monic(f, p):
    if not f:
        return f
    lc = f[_lead(f)]
    return _scale(f, pow(lc, p - 2, p), p)


# ---------------------------------------------------------------------------

class Field:
    """F_p(t_1, ..., t_m) with named variables."""

    __slots__ = ("p", "vars", "m", "_index")

    def __init__(self, p, vars=()):
        if not isinstance(p, int) or not is_prime(p):
            raise SemanticError(f"characteristic {p!r} is not prime")
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise SemanticError("variable names must be distinct")
        self.p = p
        self.vars = vars
        self.m = len(vars)
        self._index = {v: i for i, v in enumerate(vars)}

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p and self.vars == other.vars

    def __hash__(self):
        return hash((self.p, self.vars))

    def __repr__(self):
        return f"Field({self.p}, {list(self.vars)})"

    def __str__(self):
        return f"F_{self.p}({', '.join(self.vars)})"

    @property
    def zero_exp(self):
        return (0,) * self.m

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise SemanticError(f"unknown variable {name!r}") from None

    def poly(self, terms):
        p = self.p
        return Polynomial(self, {e: c % p for e, c in terms.items() if c % p})

    def const(self, c):
        c %= self.p
        return RationalFunction._raw(self, {self.zero_exp: c} if c else {}, {self.zero_exp: 1})

    def zero(self):
        return self.const(0)

    def one(self):
        return self.const(1)

    def gen(self, i):
        e = tuple(1 if j == i else 0 for j in range(self.m))
        return RationalFunction._raw(self, {e: 1}, {self.zero_exp: 1})

    @property
    def gens(self):
        return tuple(self.gen(i) for i in range(self.m))

    def __getitem__(self, name):
        return self.gen(self.index(name))

    def __call__(self, value):
        if isinstance(value, RationalFunction):
            if value.field != self:
                raise FieldMismatch(f"{value} lives in {value.field}, not {self}")
            return value
        if isinstance(value, Polynomial):
            return RationalFunction(value, Polynomial(self, {self.zero_exp: 1}))
        if isinstance(value, int):
            return self.const(value)
        if isinstance(value, str):
            from .parse import parse_expr
            return parse_expr(value, self)
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def parse(self, text):
        from .parse import parse_expr
        return parse_expr(text, self)

    def extend(self, names):
        return Field(self.p, self.vars + tuple(names))

    def is_subfield_of(self, other):
        return self.p == other.p and all(v in other._index for v in self.vars)


class Polynomial:
    __slots__ = ("field", "terms")

    def __init__(self, field, terms):
        self.field = field
        self.terms = terms

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or _is_const(self.terms)

    def leading_term(self):
        e = _lead(self.terms)
        return e, self.terms[e]

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def _wrap(self, terms):
        return Polynomial(self.field, terms)

    def __add__(self, other):
        return self._wrap(_add(self.terms, other.terms, self.field.p))

    def __sub__(self, other):
        return self._wrap(_sub(self.terms, other.terms, self.field.p))

    def __neg__(self):
        return self._wrap(_neg(self.terms, self.field.p))

    def __mul__(self, other):
        if isinstance(other, int):
            return self._wrap(_scale(self.terms, other, self.field.p))
        return self._wrap(_mul(self.terms, other.terms, self.field.p))

    __rmul__ = __mul__

    def __pow__(self, k):
        result = {self.field.zero_exp: 1}
        base = self.terms
        p = self.field.p
        while k:
            if k & 1:
                result = _mul(result, base, p)
            k >>= 1
            if k:
                base = _mul(base, base, p)
        return self._wrap(result)

    def divexact(self, other):
        return self._wrap(_divexact(self.terms, other.terms, self.field.p))

    def monic(self):
        return self._wrap(_monic(self.terms, self.field.p))

    def gcd(self, other):
        return poly_gcd(self, other)

    def derivative(self, i):
        p = self.field.p
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            v = c * k % p
            if v:
                out[e[:i] + (k - 1,) + e[i + 1:]] = v
        return self._wrap(out)

    def pth_root(self):
        p = self.field.p
        out = {}
        for e, c in self.terms.items():
            if any(x % p for x in e):
                raise NotAPthPower(f"{self} is not a {p}-th power")
            out[tuple(x // p for x in e)] = c
        return self._wrap(out)

    def __str__(self):
        return _poly_str(self.terms, self.field)

    def __repr__(self):
        return f"Polynomial({self})"


def poly_gcd(f, g):
    """Monic gcd of two polynomials; gcd(0, 0) = 0."""
    if f.field != g.field:
        raise FieldMismatch("polynomials over different fields")
    p = f.field.p
    return Polynomial(f.field, _monic(_gcd(f.terms, g.terms, p), p))


def _mono_str(e, names):
    parts = []
    for i, x in enumerate(e):
        if x == 1:
            parts.append(names[i])
        elif x:
            parts.append(f"{names[i]}^{x}")
    return "*".join(parts)


def _poly_str(terms, field):
    if not terms:
        return "0"
    out = []
    for e in sorted(terms, key=_gkey, reverse=True):
        c = terms[e]
        mono = _mono_str(e, field.vars)
        if not mono:
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c}*{mono}")
    return " + ".join(out)


class RationalFunction:
    """Element of F_p(t_1..t_m) as a reduced fraction with monic denominator."""

    __slots__ = ("field", "num", "den", "_h")

    def __init__(self, num, den=None):
        field = num.field
        if den is None:
            den = Polynomial(field, {field.zero_exp: 1})
        if den.field != field:
            raise FieldMismatch("numerator and denominator over different fields")
        n, d = _reduce(num.terms, den.terms, field.p)
        self.field = field
        self.num = Polynomial(field, n)
        self.den = Polynomial(field, d)
        self._h = None

    @classmethod
    def _raw(cls, field, n, d):
        self = object.__new__(cls)
        self.field = field
        self.num = Polynomial(field, n)
        self.den = Polynomial(field, d)
        self._h = None
        return self

    # -- predicates -------------------------------------------------------
    def is_zero(self):
        return not self.num.terms

    def __bool__(self):
        return bool(self.num.terms)

    def is_one(self):
        return _is_const(self.num.terms) and self.num.terms[self.field.zero_exp] == 1 and _is_const(self.den.terms)

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self):
        return _is_const(self.den.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.const(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (self.field == other.field and self.num.terms == other.num.terms
                and self.den.terms == other.den.terms)

    def __hash__(self):
        if self._h is None:
            self._h = hash((frozenset(self.num.terms.items()), frozenset(self.den.terms.items())))
        return self._h

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.field != self.field:
                raise FieldMismatch(f"{other.field} vs {self.field}")
            return other
        if isinstance(other, int):
            return self.field.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _rf_add(self, other, False)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _rf_add(self, other, True)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RationalFunction._raw(self.field, _neg(self.num.terms, self.field.p), self.den.terms)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _rf_mul(self, other)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num.terms:
            raise DivisionByZero("inverse of zero")
        p = self.field.p
        n, d = self.den.terms, self.num.terms
        lc = d[_lead(d)]
        if lc != 1:
            inv = pow(lc, p - 2, p)
            n, d = _scale(n, inv, p), _scale(d, inv, p)
        return RationalFunction._raw(self.field, n, d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _rf_mul(self, other.inverse())

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        p = self.field.p
        num = Polynomial(self.field, self.num.terms) ** k
        den = Polynomial(self.field, self.den.terms) ** k
        return RationalFunction._raw(self.field, num.terms, den.terms)

    # -- calculus ------------------------------------------------------------
    def derivative(self, i):
        """Partial derivative with respect to variable index i (0-based)."""
        if not 0 <= i < self.field.m:
            raise IndexError(f"variable index {i} out of range")
        n, d = self.num, self.den
        dn, dd = n.derivative(i), d.derivative(i)
        if not dd.terms:
            if not dn.terms:
                return self.field.zero()
            return RationalFunction(dn, d)
        return RationalFunction(dn * d - n * dd, d * d)

    def pth_root(self):
        """r with r^p = self; raises NotAPthPower when self is not in F^p."""
        try:
            n = self.num.pth_root()
            d = self.den.pth_root()
        except NotAPthPower:
            raise NotAPthPower(f"{self} is not a {self.field.p}-th power") from None
        return RationalFunction._raw(self.field, n.terms, d.terms)

    def is_pth_power(self):
        p = self.field.p
        return all(x % p == 0 for e in self.num.terms for x in e) and \
            all(x % p == 0 for e in self.den.terms for x in e)

    # -- structural ------------------------------------------------------------
    def subs(self, values):
        """Substitute {var index: RationalFunction or int} and return the result."""
        f = self.field
        vals = {i: f(v) for i, v in values.items()}

        def ev(terms):
            total = f.zero()
            for e, c in terms.items():
                term = f.const(c)
                rest = list(e)
                for i, v in vals.items():
                    if e[i]:
                        term = term * v ** e[i]
                        rest[i] = 0
                if not term:
                    continue
                term = term * RationalFunction._raw(f, {tuple(rest): 1}, {f.zero_exp: 1})
                total = total + term
            return total

        return ev(self.num.terms) / ev(self.den.terms)

    def embed(self, target):
        """The same element read in a field with more variables."""
        src = self.field
        if src == target:
            return self
        if not src.is_subfield_of(target):
            raise FieldMismatch(f"cannot embed {src} into {target}")
        pos = [target.index(v) for v in src.vars]

        def move(terms):
            out = {}
            for e, c in terms.items():
                t = [0] * target.m
                for i, x in zip(pos, e):
                    t[i] = x
                out[tuple(t)] = c
            return out

        return RationalFunction._raw(target, move(self.num.terms), move(self.den.terms))

    def __str__(self):
        if _is_const(self.den.terms):
            return _poly_str(self.num.terms, self.field)
        n = _poly_str(self.num.terms, self.field)
        d = _poly_str(self.den.terms, self.field)
        if len(self.num.terms) > 1:
            n = f"({n})"
        if len(self.den.terms) > 1 or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RationalFunction({self})"


def _reduce(n, d, p):
    if not d:
        raise DivisionByZero("zero denominator")
    m = len(next(iter(d)))
    if not n:
        return {}, {(0,) * m: 1}
    g = _gcd(n, d, p)
    if not _is_const(g):
        n = _divexact(n, g, p)
        d = _divexact(d, g, p)
    lc = d[_lead(d)]
    if lc != 1:
        inv = pow(lc, p - 2, p)
        n, d = _scale(n, inv, p), _scale(d, inv, p)
    return n, d


def _rf_add(a, b, negate):
    f = a.field
    p = f.p
    bn = _neg(b.num.terms, p) if negate else b.num.terms
    if not bn:
        return a
    if not a.num.terms:
        return RationalFunction._raw(f, bn, b.den.terms)
    d1, d2 = a.den.terms, b.den.terms
    if _is_const(d1) and _is_const(d2):
        return RationalFunction._raw(f, _add(a.num.terms, bn, p), d1)
    if d1 == d2:
        n = _add(a.num.terms, bn, p)
        if not n:
            return f.zero()
        g = _gcd(n, d1, p)
        if _is_const(g):
            return RationalFunction._raw(f, n, d1)
        n, d = _divexact(n, g, p), _divexact(d1, g, p)
        return RationalFunction._raw(f, *_normalize(n, d, p))
    g = _gcd(d1, d2, p)
    if _is_const(g):
        n = _add(_mul(a.num.terms, d2, p), _mul(bn, d1, p), p)
        if not n:
            return f.zero()
        return RationalFunction._raw(f, n, _mul(d1, d2, p))
    d1g = _divexact(d1, g, p)
    d2g = _divexact(d2, g, p)
    n = _add(_mul(a.num.terms, d2g, p), _mul(bn, d1g, p), p)
    if not n:
        return f.zero()
    d = _mul(d1, d2g, p)
    g2 = _gcd(n, g, p)
    if not _is_const(g2):
        n, d = _divexact(n, g2, p), _divexact(d, g2, p)
    return RationalFunction._raw(f, *_normalize(n, d, p))


def _normalize(n, d, p):
    lc = d[_lead(d)]
    if lc != 1:
        inv = pow(lc, p - 2, p)
        return _scale(n, inv, p), _scale(d, inv, p)
    return n, d


def _rf_mul(a, b):
    f = a.field
    p = f.p
    if not a.num.terms or not b.num.terms:
        return f.zero()
    n1, d1, n2, d2 = a.num.terms, a.den.terms, b.num.terms, b.den.terms
    if _is_const(d1) and _is_const(d2):
        return RationalFunction._raw(f, _mul(n1, n2, p), d1)
    g1 = _gcd(n1, d2, p)
    g2 = _gcd(n2, d1, p)
    if not _is_const(g1):
        n1, d2 = _divexact(n1, g1, p), _divexact(d2, g1, p)
    if not _is_const(g2):
        n2, d1 = _divexact(n2, g2, p), _divexact(d1, g2, p)
    return RationalFunction._raw(f, *_normalize(_mul(n1, n2, p), _mul(d1, d2, p), p))


def rf_arith(a, b, op):
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two field elements."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(a, i):
    return a.derivative(i)


def pth_root(a):
    return a.pth_root()
