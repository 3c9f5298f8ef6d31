"""Differential forms Omega^n(F) over F = F_p(t_1..t_m) and their annihilators.

A degree-n form is stored sparsely on the basis dt_I, I a strictly increasing
tuple of 0-based variable indices. Annihilators are computed two ways: a
brute-force linear solve, and the closed generator descriptions for the
disjoint, power and mixed configurations.
"""

from dataclasses import dataclass, field as dc_field
from itertools import combinations, product
from math import comb

from .errors import DegreeMismatch, EmptyNormSet, FieldMismatch, HypothesisViolated, ZeroArgument
from .linalg import Echelon, nullspace
from .plinear import differential_vector, p_basis_of, p_degree, relative_adjoin_basis


def _merge_sign(I, J):
    """Sign and merged index tuple of dt_I ^ dt_J, or (0, None) on collision."""
    inversions = 0
    for i in I:
        for j in J:
            if i == j:
                return 0, None
            if i > j:
                inversions += 1
    return (-1 if inversions & 1 else 1), tuple(sorted(I + J))


class DifferentialForm:
    __slots__ = ("field", "degree", "terms")

    def __init__(self, field, degree, terms=None):
        self.field = field
        self.degree = degree
        self.terms = {I: c for I, c in (terms or {}).items() if c}

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, field, degree):
        return cls(field, degree, {})

    @classmethod
    def scalar(cls, a):
        return cls(a.field, 0, {(): a})

    @classmethod
    def basis(cls, field, I):
        return cls(field, len(I), {tuple(I): field.one()})

    @classmethod
    def from_vector(cls, field, degree, vec):
        cols = list(combinations(range(field.m), degree))
        return cls(field, degree, dict(zip(cols, vec)))

    # -- algebra ----------------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        if not self.terms and not other.terms:
            return self.field == other.field
        return self.field == other.field and self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def _check(self, other):
        if other.field != self.field:
            raise FieldMismatch("forms over different fields")
        if other.degree != self.degree and self.terms and other.terms:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree}")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for I, c in other.terms.items():
            terms[I] = terms[I] + c if I in terms else c
        deg = self.degree if self.terms else other.degree
        return DifferentialForm(self.field, deg, terms)

    def __neg__(self):
        return DifferentialForm(self.field, self.degree, {I: -c for I, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, a):
        a = self.field(a)
        if not a:
            return DifferentialForm.zero(self.field, self.degree)
        return DifferentialForm(self.field, self.degree, {I: c * a for I, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, a):
        return self * self.field(a).inverse()

    def wedge(self, other):
        if other.field != self.field:
            raise FieldMismatch("forms over different fields")
        out = {}
        for I, a in self.terms.items():
            for J, b in other.terms.items():
                s, K = _merge_sign(I, J)
                if not s:
                    continue
                c = a * b if s > 0 else -(a * b)
                out[K] = out[K] + c if K in out else c
        return DifferentialForm(self.field, self.degree + other.degree, out)

    def coefficient(self, I):
        return self.terms.get(tuple(I), self.field.zero())

    def vector(self):
        zero = self.field.zero()
        return [self.terms.get(I, zero) for I in combinations(range(self.field.m), self.degree)]

    def embed(self, target):
        src = self.field
        pos = [target.index(v) for v in src.vars]
        terms = {}
        for I, c in self.terms.items():
            J = tuple(pos[i] for i in I)
            order = sorted(range(len(J)), key=J.__getitem__)
            inv = sum(1 for a in range(len(order)) for b in range(a + 1, len(order)) if order[a] > order[b])
            c = c.embed(target)
            terms[tuple(sorted(J))] = -c if inv & 1 else c
        return DifferentialForm(target, self.degree, terms)

    def to_json(self):
        return [{"indices": [i + 1 for i in I], "coeff": str(c)} for I, c in sorted(self.terms.items())]

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.field.vars
        parts = []
        for I, c in sorted(self.terms.items()):
            basis = "^".join("d" + names[i] for i in I)
            if not basis:
                parts.append(f"({c})")
            elif c.is_one():
                parts.append(basis)
            else:
                parts.append(f"({c})*{basis}")
        return " + ".join(parts)

    def __repr__(self):
        return f"DifferentialForm({self})"


def wedge(*forms):
    out = forms[0]
    for w in forms[1:]:
        out = out.wedge(w)
    return out


def form_from_json(field, data, degree=None):
    from .parse import parse_expr
    terms = {}
    for item in data:
        I = tuple(i - 1 for i in item["indices"])
        if degree is None:
            degree = len(I)
        terms[I] = parse_expr(item["coeff"], field)
    return DifferentialForm(field, degree or 0, terms)


def d_of_element(a):
    """da = sum_i (da/dt_i) dt_i."""
    return DifferentialForm(a.field, 1, {(i,): c for i, c in enumerate(differential_vector(a))})


def d_operator(omega):
    """Exterior derivative Omega^{n-1} -> Omega^n: d(f dt_I) = df ^ dt_I."""
    F = omega.field
    out = DifferentialForm.zero(F, omega.degree + 1)
    for I, c in omega.terms.items():
        out = out + d_of_element(c).wedge(DifferentialForm.basis(F, I))
    return out


def log_form(*elements):
    """(da_1/a_1) ^ ... ^ (da_n/a_n)."""
    if not elements:
        raise ValueError("log_form needs at least one element")
    F = elements[0].field
    out = DifferentialForm.scalar(F.one())
    for a in elements:
        if not a:
            raise ZeroArgument("logarithmic form of zero")
        out = out.wedge(d_of_element(a) / a)
        if not out:
            return DifferentialForm.zero(F, len(elements))
    return out


def wedge_of_differentials(elements, field=None):
    F = field or elements[0].field
    out = DifferentialForm.scalar(F.one())
    for a in elements:
        out = out.wedge(d_of_element(a))
        if not out:
            return DifferentialForm.zero(F, len(elements))
    return out


# ---------------------------------------------------------------------------
# set wedges d S_1 ^ ... ^ d S_r

def _projective_key(w):
    I = min(w.terms)
    lead = w.terms[I]
    if lead.is_one():
        return w
    return w / lead


def transversal_wedges(sets, field=None):
    """Distinct nonzero wedges ds_1 ^ ... ^ ds_r, s_i in sets[i] (up to scaling)."""
    sets = [list(S) for S in sets]
    F = field or next(a.field for S in sets for a in S)
    partial = [DifferentialForm.scalar(F.one())]
    cache = {}
    for S in sets:
        nxt = []
        seen = set()
        for w in partial:
            for a in S:
                if a not in cache:
                    cache[a] = d_of_element(a)
                v = w.wedge(cache[a])
                if not v:
                    continue
                key = _projective_key(v)
                if key in seen:
                    continue
                seen.add(key)
                nxt.append(v)
        partial = nxt
        if not partial:
            break
    return partial


def power_wedges(S, r):
    """The set of r-fold wedges ds_1 ^ ... ^ ds_r with s_i in S."""
    return transversal_wedges([S] * r)


def set_wedge_nonzero(sets):
    """(True, witness) if some transversal of the per-set p-bases has a nonzero wedge."""
    bases = [p_basis_of(S).basis for S in sets]
    if any(not b for b in bases):
        return False, None
    F = bases[0][0].field
    d = {a: d_of_element(a) for b in bases for a in b}
    for choice in product(*bases):
        w = DifferentialForm.scalar(F.one())
        for a in choice:
            w = w.wedge(d[a])
            if not w:
                break
        if w:
            return True, choice
    return False, None


# ---------------------------------------------------------------------------
# subspaces

class SubspaceBasis:
    """A subspace of Omega^n(F) in reduced row echelon form (columns: dt_I in lex order)."""

    __slots__ = ("field", "degree", "rows", "pivots")

    def __init__(self, field, degree, vectors=()):
        self.field = field
        self.degree = degree
        ncols = comb(field.m, degree) if 0 <= degree <= field.m else 0
        ech = Echelon(ncols)
        for v in vectors:
            if ech.rank == ncols:
                break
            ech.add(v)
        pivots, rows = ech.rref()
        self.pivots = tuple(pivots)
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def from_forms(cls, field, degree, forms):
        for w in forms:
            if w.terms and w.degree != degree:
                raise DegreeMismatch(f"form of degree {w.degree} in a degree-{degree} subspace")
        return cls(field, degree, (w.vector() for w in forms))

    @classmethod
    def full(cls, field, degree):
        ncols = comb(field.m, degree) if 0 <= degree <= field.m else 0
        one, zero = field.one(), field.zero()
        return cls(field, degree, ([one if i == j else zero for j in range(ncols)] for i in range(ncols)))

    @property
    def ambient_dim(self):
        return comb(self.field.m, self.degree) if 0 <= self.degree <= self.field.m else 0

    @property
    def dim(self):
        return len(self.rows)

    def is_full(self):
        return self.dim == self.ambient_dim

    @property
    def forms(self):
        return [DifferentialForm.from_vector(self.field, self.degree, r) for r in self.rows]

    def contains(self, w):
        if not w:
            return True
        if w.degree != self.degree:
            raise DegreeMismatch(f"form of degree {w.degree} vs subspace of degree {self.degree}")
        ech = Echelon(self.ambient_dim)
        for r in self.rows:
            ech.add(r)
        return ech.contains(w.vector())

    def __eq__(self, other):
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return self.field == other.field and self.degree == other.degree and self.rows == other.rows

    def __hash__(self):
        return hash((self.degree, self.rows))

    def to_json(self):
        return {"degree": self.degree, "dimension": self.dim, "ambient_dimension": self.ambient_dim,
                "full_space": self.is_full(), "basis": [w.to_json() for w in self.forms]}

    def __str__(self):
        if not self.rows:
            return "{0}"
        return "span{" + ", ".join(str(w) for w in self.forms) + "}"

    def __repr__(self):
        return f"SubspaceBasis(degree={self.degree}, {self})"


def subspace_equal(A, B):
    if A.degree != B.degree:
        raise DegreeMismatch(f"degrees {A.degree} and {B.degree}")
    return A == B


def ann_bruteforce(U, n, field=None):
    """{w in Omega^n : w ^ u = 0 for all u in U}, solved as a linear system over F."""
    U = [u for u in U]
    F = field or (U[0].field if U else None)
    if F is None:
        raise ValueError("a field is required when U is empty")
    if n < 0 or n > F.m:
        return SubspaceBasis(F, n)
    U = [u for u in U if u]
    if not U:
        return SubspaceBasis.full(F, n)
    r = U[0].degree
    if any(u.degree != r for u in U):
        raise DegreeMismatch("annihilated forms must share one degree")
    if n + r > F.m:
        return SubspaceBasis.full(F, n)
    cols = list(combinations(range(F.m), n))
    targets = list(combinations(range(F.m), n + r))
    tpos = {J: k for k, J in enumerate(targets)}
    zero = F.zero()
    rows = []
    for u in U:
        block = [[zero] * len(cols) for _ in targets]
        for ci, I in enumerate(cols):
            for K, c in u.terms.items():
                s, J = _merge_sign(I, K)
                if s:
                    block[tpos[J]][ci] = c if s > 0 else -c
        rows.extend(row for row in block if any(row))
    return SubspaceBasis(F, n, nullspace(rows, len(cols), F))


# ---------------------------------------------------------------------------
# closed generator descriptions

@dataclass(frozen=True)
class GeneratorItem:
    """One summand of a generator description.

    style "omega": d(prefix_1) ^ ... ^ d(prefix_k) ^ Omega^{tail}(F).
    style "nu": [dy_1/y_1 ^ ... ^ dy_w/y_w | y_i in F^p(prefix)^*] ^ nu_{tail}(F),
    w = ``width``.
    """

    prefix: tuple
    tail_degree: int
    style: str = "omega"
    conditional: bool = False
    width: int = None

    @property
    def slots(self):
        return len(self.prefix) if self.width is None else self.width

    def to_json(self):
        out = {"prefix": [str(a) for a in self.prefix], "tail_degree": self.tail_degree,
               "style": self.style, "conditional": self.conditional}
        if self.style == "nu":
            out["width"] = self.slots
        return out

    def describe(self, field):
        tail = f"Omega^{self.tail_degree}(F)" if self.style == "omega" else f"nu_{self.tail_degree}(F)"
        if self.style == "omega":
            head = " ^ ".join(f"d({a})" for a in self.prefix)
            return f"{head} ^ {tail}" if head else tail
        gens = ", ".join(str(a) for a in self.prefix)
        ys = " ^ ".join(f"dy{i}/y{i}" for i in range(1, self.slots + 1))
        fld = f"F^{field.p}({gens})*" if gens else f"F^{field.p}*"
        flag = f" [conditional: F^{field.p - 1}=F]" if self.conditional else ""
        if not ys:
            return tail + flag
        return f"[{ys} | y_i in {fld}] ^ {tail}{flag}"


@dataclass
class GeneratorSet:
    field: object
    degree: int
    items: list = dc_field(default_factory=list)
    nu_items: list = dc_field(default_factory=list)
    case: str = ""

    def to_json(self):
        return {"degree": self.degree, "case": self.case,
                "items": [g.to_json() for g in self.items],
                "nu_items": [g.to_json() for g in self.nu_items]}

    def describe(self):
        if not self.items:
            return "{0}"
        return " + ".join(g.describe(self.field) for g in self.items)


def _item(prefix, n, **kw):
    return GeneratorItem(tuple(prefix), n - len(prefix), **kw)


def _nu_item(gens, width, n, p):
    return GeneratorItem(tuple(gens), n - width, style="nu", conditional=p > 2, width=width)


def _expand_omega(prefix, tail, F, out):
    if tail < 0 or tail > F.m:
        return
    head = wedge_of_differentials(prefix, F)
    if not head:
        return
    for J in combinations(range(F.m), tail):
        w = head.wedge(DifferentialForm.basis(F, J))
        if w:
            out.append(w)


def expand_generator_set(g, style="omega"):
    """Explicit basis of the described subspace (nu items: their Omega-span only)."""
    F = g.field
    forms = []
    items = g.items if style == "omega" else g.nu_items
    for it in items:
        if it.style == "omega":
            _expand_omega(it.prefix, it.tail_degree, F, forms)
        else:
            for sub in combinations(it.prefix, it.slots):
                _expand_omega(sub, it.tail_degree, F, forms)
    return SubspaceBasis.from_forms(F, g.degree, forms)


def sample_log_generators(item, field, limit=8):
    """A few concrete logarithmic generators of a nu item: gens' subsets wedged with dlog t_J."""
    F = field
    out = []
    if item.tail_degree < 0 or item.tail_degree > F.m:
        return out
    gens = list(item.prefix)
    tails = list(combinations(range(F.m), item.tail_degree))
    for ys in combinations(gens, item.slots):
        for J in tails:
            elems = list(ys) + [F.gen(j) for j in J]
            out.append(log_form(*elems) if elems else DifferentialForm.scalar(F.one()))
            if len(out) >= limit:
                return out
    return out


def _bases(sets):
    return [p_basis_of(S).basis for S in sets]


def ann_closed_disjoint(sets, n):
    """Sum of d a_i1 ^ ... ^ d a_ik_i ^ Omega^{n-k_i} when p-degrees add up."""
    sets = [list(S) for S in sets]
    if not sets or any(not S for S in sets):
        raise HypothesisViolated("need at least one nonempty set")
    F = sets[0][0].field
    bases = _bases(sets)
    ks = [len(b) for b in bases]
    if min(ks) < 1:
        raise HypothesisViolated("every set needs p-degree >= 1")
    if p_degree([a for S in sets for a in S]) != sum(ks):
        raise HypothesisViolated("p-degree of the union is not the sum of the p-degrees")
    items = [_item(b, n) for b in bases if n - len(b) >= 0]
    return GeneratorSet(F, n, items, case="disjoint")


def ann_closed_power(S, r, n):
    """Annihilator of the r-fold wedges of dS."""
    S = list(S)
    if r < 1:
        raise HypothesisViolated("r must be at least 1")
    if not S:
        raise EmptyNormSet("empty set")
    F = S[0].field
    basis = p_basis_of(S).basis
    k = len(basis)
    if k == 0:
        raise EmptyNormSet("the set has p-degree 0")
    if r > k:
        return GeneratorSet(F, n, [GeneratorItem((), n)] if 0 <= n else [],
                            [GeneratorItem((), n, style="nu", width=0)] if 0 <= n else [],
                            case="power-full")
    t = k - r + 1
    items = [GeneratorItem(sub, n - t) for sub in combinations(basis, t)] if n >= t else []
    nu = [_nu_item(basis, t, n, F.p)] if n >= t else []
    return GeneratorSet(F, n, items, nu, case="power")


def ann_closed_mixed(prefix_sets, last, n):
    """Annihilator of dS_1 ^ ... ^ dS_r ^ dS_{r+1} with pdeg(S_i) = 1 for i <= r."""
    prefix_sets = [list(S) for S in prefix_sets]
    last = list(last)
    if not last or any(not S for S in prefix_sets):
        raise HypothesisViolated("sets must be nonempty")
    F = last[0].field
    a = []
    for S in prefix_sets:
        b = p_basis_of(S).basis
        if len(b) != 1:
            raise HypothesisViolated("prefix sets must have p-degree 1")
        a.append(b[0])
    ok, _ = set_wedge_nonzero(prefix_sets + [last])
    if not ok:
        raise HypothesisViolated("the set wedge is {0}")
    e = relative_adjoin_basis(a, last)
    if len(e) < 1:
        raise HypothesisViolated("no new p-basis elements in the last set")
    ell = len(e)
    items = [_item([ai], n) for ai in a if n >= 1]
    if n >= ell:
        items.append(_item(e, n))
    nu = []
    if a and n >= 1:
        nu.append(_nu_item(a, 1, n, F.p))
    if n >= ell:
        nu.append(_nu_item(list(a) + list(e), ell, n, F.p))
    return GeneratorSet(F, n, items, nu, case="mixed")
