"""F^p-linear algebra on F: p-independence, p-degree and p-bases.

Everything here is decided by ranks of differentials: a finite set is
p-independent exactly when the vectors (da_1, ..., da_k) in the dt-basis are
F-linearly independent, and a lies in F^p(B) exactly when da lies in the
F-span of the db, b in B.
"""

from typing import NamedTuple

from .errors import InputNotPIndependent
from .field import RationalFunction, _divmono
from .linalg import Echelon, rank


def differential_vector(a):
    """Coordinates of da in the basis dt_1, ..., dt_m."""
    return [a.derivative(i) for i in range(a.field.m)]


def _field_of(elements):
    for a in elements:
        return a.field
    return None


def p_degree(S):
    S = list(S)
    if not S:
        return 0
    m = S[0].field.m
    return rank([differential_vector(a) for a in S], m)


def p_independent(S):
    """True iff the listed elements are p-independent (duplicates count as dependent)."""
    S = list(S)
    return p_degree(S) == len(S)


class PBasisResult(NamedTuple):
    basis: tuple
    pdeg: int


def p_basis_indices(S, start=()):
    """Positions of a greedy p-basis of F^p(S) within S (input order, first wins).

    ``start`` elements are assumed p-independent and are placed in the
    echelon first without being reported.
    """
    S = list(S)
    field = _field_of(S) or _field_of(start)
    if field is None:
        return []
    ech = Echelon(field.m)
    for a in start:
        ech.add(differential_vector(a))
    picked = []
    for i, a in enumerate(S):
        if ech.rank == field.m:
            break
        if ech.add(differential_vector(a)):
            picked.append(i)
    return picked


def p_basis_of(S, start=()):
    """Greedy p-basis of F^p(S), scanning S in order."""
    S = list(S)
    basis = tuple(S[i] for i in p_basis_indices(S, start))
    return PBasisResult(basis, len(basis))


def member_fp_adjoin(a, B):
    """Is a in F^p(B)?"""
    B = list(B)
    if not B:
        return a.is_pth_power()
    ech = Echelon(a.field.m)
    for b in B:
        ech.add(differential_vector(b))
    return ech.contains(differential_vector(a))


def relative_adjoin_basis(A, S):
    """e_1..e_l from S with F^p(A)(S) = F^p(A)(e_1..e_l) and A + e p-independent."""
    A = list(A)
    if not p_independent(A):
        raise InputNotPIndependent(f"{[str(a) for a in A]} is not p-independent")
    return p_basis_of(S, start=A).basis


def fp_coordinates(a):
    """Map each reduced exponent e in [0, p)^m to v_e with a = sum_e v_e^p t^e."""
    F = a.field
    p = F.p
    den = a.den
    g = (a.num * den ** (p - 1)).terms
    classes = {}
    for e, c in g.items():
        r = tuple(x % p for x in e)
        classes.setdefault(r, {})[e] = c
    out = {}
    den_rf = RationalFunction._raw(F, den.terms, {F.zero_exp: 1})
    for r in sorted(classes):
        shifted = _divmono(classes[r], r)
        root = {tuple(x // p for x in e): c for e, c in shifted.items()}
        v = RationalFunction(F.poly(root)) / den_rf
        if v:
            out[r] = v
    return out


def _coordinate_rows(elements):
    coords = [fp_coordinates(a) for a in elements]
    keys = sorted({k for c in coords for k in c})
    F = elements[0].field
    zero = F.zero()
    return [[c.get(k, zero) for k in keys] for c in coords], len(keys)


def fp_rank(elements):
    """dim over F^p of span_{F^p}(elements)."""
    elements = list(elements)
    if not elements:
        return 0
    rows, ncols = _coordinate_rows(elements)
    return rank(rows, ncols)


def fp_span_basis(elements):
    """Indices of a greedy F^p-linearly independent subset spanning the same space."""
    elements = list(elements)
    if not elements:
        return []
    rows, ncols = _coordinate_rows(elements)
    ech = Echelon(ncols)
    return [i for i, r in enumerate(rows) if ech.add(r)]
