"""Exact Gaussian elimination over F_p(t_1..t_m).

Rows are cleared of denominators and kept primitive (entries share no common
polynomial factor), so elimination is fraction-free and only the final
reduced echelon form divides. Pivots are chosen deterministically: the first
nonzero column of each reduced row, rows taken in input order.
"""

from .field import (Polynomial, RationalFunction, _ctx, _divexact, _from_flint, _gcd, _is_const, _mul,
                    _neg, _sub, _to_flint, _USE_FLINT)


class _DictOps:
    """Polynomials as term dicts, using the kernels in ``field``."""

    def __init__(self, field):
        self.field = field
        self.p = field.p

    def lift(self, terms):
        return terms

    def lower(self, x):
        return x

    def mul(self, a, b):
        return _mul(a, b, self.p)

    def sub(self, a, b):
        return _sub(a, b, self.p)

    def neg(self, a):
        return _neg(a, self.p)

    def gcd(self, a, b):
        return _gcd(a, b, self.p)

    def div(self, a, b):
        return _divexact(a, b, self.p)

    def is_unit(self, a):
        return _is_const(a)


class _FlintOps:
    """Native nmod_mpoly arithmetic; elements never leave flint during elimination."""

    def __init__(self, field):
        self.field = field
        self.ctx = _ctx(field.m, field.p)

    def lift(self, terms):
        return _to_flint(terms, self.ctx)

    def lower(self, x):
        return _from_flint(x)

    def mul(self, a, b):
        return a * b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def gcd(self, a, b):
        return a.gcd(b)

    def div(self, a, b):
        return a / b

    def is_unit(self, a):
        return a.is_constant()


def _ops(field):
    return _FlintOps(field) if _USE_FLINT and field.m > 0 else _DictOps(field)


def _field_of(vec):
    for x in vec:
        if x:
            return x.field
    return None


class Echelon:
    """Incremental row echelon form over polynomial rows."""

    def __init__(self, ncols, field=None):
        self.ncols = ncols
        self.field = field
        self._ops = _ops(field) if field is not None else None
        self.rows = []  # (pivot, primitive polynomial row) in insertion order

    @property
    def rank(self):
        return len(self.rows)

    def _setup(self, vec):
        if self._ops is None:
            field = _field_of(vec)
            if field is None:
                return False
            self.field = field
            self._ops = _ops(field)
        return True

    def _lift(self, vec):
        """Clear denominators of a rational row; None entries stand for zero."""
        ops = self._ops
        p = self.field.p
        den = None
        for x in vec:
            if x and not _is_const(x.den.terms):
                d = x.den.terms
                den = d if den is None else _mul(den, _divexact(d, _gcd(den, d, p), p), p)
        out = []
        for x in vec:
            if not x:
                out.append(None)
                continue
            t = x.num.terms
            if den is not None:
                t = _mul(t, _divexact(den, x.den.terms, p), p)
            out.append(ops.lift(t))
        return self._primitive(out)

    def _primitive(self, row):
        ops = self._ops
        g = None
        for x in row:
            if x is not None:
                g = x if g is None else ops.gcd(g, x)
                if ops.is_unit(g):
                    return row
        if g is None:
            return row
        return [None if x is None else ops.div(x, g) for x in row]

    def _reduce_poly(self, v):
        ops = self._ops
        for piv, row in self.rows:
            c = v[piv]
            if c is None:
                continue
            lead = row[piv]
            out = []
            for a, b in zip(v, row):
                if b is None:
                    out.append(None if a is None else ops.mul(a, lead))
                elif a is None:
                    out.append(ops.neg(ops.mul(c, b)))
                else:
                    x = ops.sub(ops.mul(a, lead), ops.mul(c, b))
                    out.append(x if x else None)
            v = self._primitive(out)
        return v

    def _prepare(self, vec):
        if len(vec) != self.ncols:
            raise ValueError(f"expected {self.ncols} entries, got {len(vec)}")
        if not self._setup(vec):
            return None
        return self._reduce_poly(self._lift(vec))

    def add(self, vec):
        """Insert ``vec``; return True if it raised the rank."""
        v = self._prepare(vec)
        if v is None:
            return False
        for piv, x in enumerate(v):
            if x is not None:
                self.rows.append((piv, v))
                return True
        return False

    def contains(self, vec):
        v = self._prepare(vec)
        return v is None or all(x is None for x in v)

    def rref(self):
        """Fully reduced rows sorted by pivot column, pivot entries equal to 1."""
        if not self.rows:
            return [], []
        ops = self._ops
        rows = sorted(self.rows, key=lambda r: r[0])
        pivots = [piv for piv, _ in rows]
        out = [list(r) for _, r in rows]
        for i in range(len(out) - 1, -1, -1):
            piv = pivots[i]
            lead = out[i][piv]
            for k in range(i):
                c = out[k][piv]
                if c is None:
                    continue
                new = []
                for a, b in zip(out[k], out[i]):
                    if b is None:
                        new.append(None if a is None else ops.mul(a, lead))
                    elif a is None:
                        new.append(ops.neg(ops.mul(c, b)))
                    else:
                        x = ops.sub(ops.mul(a, lead), ops.mul(c, b))
                        new.append(x if x else None)
                out[k] = self._primitive(new)
        F = self.field
        zero = F.zero()
        result = []
        for piv, row in zip(pivots, out):
            den = ops.lower(row[piv])
            result.append([zero if x is None else _ratio(F, ops.lower(x), den) for x in row])
        return pivots, result


def _ratio(F, num, den):
    return RationalFunction(Polynomial(F, num), Polynomial(F, den))


def rank(rows, ncols=None):
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    ech = Echelon(ncols)
    for r in rows:
        ech.add(r)
        if ech.rank == ncols:
            break
    return ech.rank


def rref(rows, ncols):
    ech = Echelon(ncols)
    for r in rows:
        if ech.rank == ncols:
            break
        ech.add(r)
    return ech.rref()


def nullspace(rows, ncols, field):
    """Basis of {c : sum_j row[j] * c[j] = 0 for every row}."""
    pivots, red = rref(rows, ncols)
    piv_set = set(pivots)
    zero, one = field.zero(), field.one()
    basis = []
    for f in range(ncols):
        if f in piv_set:
            continue
        vec = [zero] * ncols
        vec[f] = one
        for piv, row in zip(pivots, red):
            if row[f]:
                vec[piv] = -row[f]
        basis.append(vec)
    return basis


def solve_in_span(target, vectors, field):
    """Coefficients lam with sum lam_i * vectors[i] = target, or None."""
    n = len(vectors)
    if n == 0:
        return [] if not any(target) else None
    ncols = len(target)
    # augmented: columns of the system are the vectors
    rows = [[vectors[i][j] for i in range(n)] + [target[j]] for j in range(ncols)]
    pivots, red = rref(rows, n + 1)
    if n in pivots:
        return None
    lam = [field.zero()] * n
    for piv, row in zip(pivots, red):
        lam[piv] = row[n]
    return lam
