"""Quasilinear p-forms, norm fields and Omega-kernels of function field towers.

The kernel of Omega^n(F) -> Omega^n(F(phi_1, ..., phi_r)) is the annihilator
of the transversal wedges of the norm-field p-bases of a maximal
"wedge-independent" subtower phi_1..phi_s. The extension fields themselves
are never built; only the polynomials T_i are, in F(X_ij), to cross-check
the transversal criterion.
"""

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import NamedTuple

from .errors import (CaseNotCovered, InputNotPIndependent, InternalCheckFailed,
                     NormDegreeCollapsed, ZeroForm)
from .forms import (GeneratorItem, GeneratorSet, SubspaceBasis, _item, _nu_item, ann_bruteforce,
                    expand_generator_set, sample_log_generators, set_wedge_nonzero, transversal_wedges)
from .linalg import solve_in_span
from .plinear import (differential_vector, fp_rank, fp_span_basis, member_fp_adjoin, p_basis_indices,
                      p_basis_of, p_degree, p_independent, relative_adjoin_basis)


class PForm:
    """Diagonal quasilinear p-form <a_1, ..., a_n>_p."""

    __slots__ = ("field", "entries")

    def __init__(self, entries, field=None):
        entries = list(entries)
        if field is None:
            if not entries:
                raise ValueError("a p-form needs at least one entry")
            field = entries[0].field
        self.field = field
        self.entries = tuple(field(a) for a in entries)
        if not self.entries:
            raise ValueError("a p-form needs at least one entry")

    @property
    def dim(self):
        return len(self.entries)

    def is_zero(self):
        return not any(self.entries)

    def scaled(self, x):
        return PForm([x * a for a in self.entries], self.field)

    def perp(self, other):
        return PForm(self.entries + other.entries, self.field)

    def __eq__(self, other):
        return isinstance(other, PForm) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def to_json(self):
        return {"entries": [str(a) for a in self.entries]}

    def __str__(self):
        return "<" + ", ".join(str(a) for a in self.entries) + f">_{self.field.p}"

    def __repr__(self):
        return f"PForm({self})"


class AnisotropicDecomposition(NamedTuple):
    anisotropic_part: PForm
    defect: int


@dataclass(frozen=True)
class NormFieldInfo:
    scale: object
    basis: tuple
    p: int

    @property
    def k(self):
        return len(self.basis)

    @property
    def ndeg(self):
        return self.p ** self.k

    def to_json(self):
        return {"scale": str(self.scale), "basis": [str(a) for a in self.basis], "ndeg": self.ndeg}


def pform_isometric(phi, psi):
    """Same dimension and the same F^p-span of entries."""
    if phi.dim != psi.dim:
        return False
    r1 = fp_rank(phi.entries)
    r2 = fp_rank(psi.entries)
    return r1 == r2 == fp_rank(phi.entries + psi.entries)


def pform_anisotropic_part(phi):
    keep = fp_span_basis(phi.entries)
    if not keep:
        # D^0 = {0}: the anisotropic part is the zero-dimensional form
        return AnisotropicDecomposition(None, phi.dim)
    return AnisotropicDecomposition(PForm([phi.entries[i] for i in keep], phi.field), phi.dim - len(keep))


def _leading_index(phi):
    for i, a in enumerate(phi.entries):
        if a:
            return i
    raise ZeroForm(f"{phi} is the zero form")


def norm_quotients(phi):
    i0 = _leading_index(phi)
    a0 = phi.entries[i0]
    inv = a0.inverse()
    return a0, [a * inv for j, a in enumerate(phi.entries) if j != i0]


def norm_field(phi):
    a0, quotients = norm_quotients(phi)
    return NormFieldInfo(a0, p_basis_of(quotients).basis, phi.field.p)


def ndeg_over_extension(phi, A):
    """Norm degree of phi over F(p-th roots of A)."""
    A = list(A)
    if not p_independent(A):
        raise InputNotPIndependent(f"{[str(a) for a in A]} is not p-independent")
    _, quotients = norm_quotients(phi)
    return phi.field.p ** (p_degree(A + quotients) - len(A))


def irreducibility_criterion(phi):
    """phi(X) is irreducible iff its norm degree exceeds 1."""
    return norm_field(phi).ndeg > 1


# ---------------------------------------------------------------------------
# towers

@dataclass(frozen=True)
class TowerForm:
    """A tower member scaled to <1, a_1, ..., a_n>_p with its norm-field p-basis first."""

    index: int
    scale: object
    entries: tuple
    k: int

    @property
    def basis(self):
        return self.entries[:self.k]

    @property
    def pform(self):
        return PForm((self.scale.field.one(),) + self.entries, self.scale.field)

    def to_json(self):
        return {"input_index": self.index, "scale": str(self.scale),
                "scaled_entries": ["1"] + [str(a) for a in self.entries],
                "norm_basis": [str(a) for a in self.basis], "ndeg_exponent": self.k}


@dataclass
class FFTowerDescriptor:
    field: object
    forms: list          # selected s forms first, then the rest with ndeg > 1
    s: int
    witness: tuple
    pruned: list = dc_field(default_factory=list)   # ndeg-1 forms, purely transcendental
    ext_vars: list = dc_field(default_factory=list)
    _wedges: list = dc_field(default=None, repr=False, compare=False)

    @property
    def selected(self):
        return self.forms[:self.s]

    def to_json(self):
        return {"s": self.s, "witness": [str(a) for a in self.witness or ()],
                "forms": [f.to_json() for f in self.forms],
                "pruned": [f.to_json() for f in self.pruned],
                "extended_vars": self.ext_vars}


def _tower_form(phi, index):
    i0 = _leading_index(phi)
    a0 = phi.entries[i0]
    inv = a0.inverse()
    rest = [a * inv for j, a in enumerate(phi.entries) if j != i0]
    picked = p_basis_indices(rest)
    others = [j for j in range(len(rest)) if j not in picked]
    entries = tuple(rest[j] for j in picked + others)
    return TowerForm(index, a0, entries, len(picked))


def normalize_tower(forms):
    F = forms[0].field
    scaled = [_tower_form(phi, i) for i, phi in enumerate(forms)]
    pruned = [f for f in scaled if f.k == 0]
    live = [f for f in scaled if f.k > 0]
    selected, rest = [], []
    for f in live:
        ok, _ = set_wedge_nonzero([g.basis for g in selected] + [f.basis])
        (selected if ok else rest).append(f)
    witness = set_wedge_nonzero([g.basis for g in selected])[1] if selected else ()
    ordered = selected + rest
    taken = set(F.vars)
    ext = []
    for i, f in enumerate(ordered, 1):
        names = []
        for j in range(1, len(f.entries) + 1):
            name = f"X{i}_{j}"
            while name in taken:
                name = "_" + name
            taken.add(name)
            names.append(name)
        ext.append(names)
    return FFTowerDescriptor(F, ordered, len(selected), witness, pruned, ext)


@dataclass
class TPolynomials:
    """T_i = a_i1 X_i1^p + ... in F(X) and the coefficients q_ij of dT_i in the d a_ij."""

    field: object        # the extended field F(X_ij)
    T: list
    q: list              # q[i][j] for j < k_i
    X: list              # X[i][j] generators of the extended field
    basis: list          # basis[i] = embedded a_i1..a_ik_i

    def differential_check(self):
        """dT_i == sum_j q_ij d a_ij exactly in the extended field."""
        from .forms import d_of_element
        for Ti, qi, bi in zip(self.T, self.q, self.basis):
            rhs = d_of_element(self.field.zero())
            for qij, a in zip(qi, bi):
                rhs = rhs + d_of_element(a) * qij
            if d_of_element(Ti) != rhs:
                return False
        return True

    def substitution_check(self):
        """For every j <= k_i some 0/1 assignment of the X_i* sends q_ij to 1 and q_ih to 0."""
        E = self.field
        for Xi, qi in zip(self.X, self.q):
            idx = [E.index(str(x)) for x in Xi]
            for j in range(len(qi)):
                values = {v: (1 if t == j else 0) for t, v in enumerate(idx)}
                for h, qh in enumerate(qi):
                    if qh.subs(values) != (1 if h == j else 0):
                        return False
        return True


def build_T_polynomials(tower):
    F = tower.field
    p = F.p
    names = [n for group in tower.ext_vars for n in group]
    E = F.extend(names)
    T, Q, Xs, B = [], [], [], []
    for f, group in zip(tower.forms, tower.ext_vars):
        X = [E[n] for n in group]
        a = [x.embed(E) for x in f.entries]
        Ti = E.zero()
        for aj, Xj in zip(a, X):
            Ti = Ti + aj * Xj ** p
        k = f.k
        base = [differential_vector(x) for x in f.basis]
        q = [X[j] ** p for j in range(k)]
        for t in range(k, len(f.entries)):
            lam = solve_in_span(differential_vector(f.entries[t]), base, F)
            if lam is None:
                raise InternalCheckFailed("entry outside the norm field span")
            for j in range(k):
                if lam[j]:
                    q[j] = q[j] + lam[j].embed(E) * X[t] ** p
        T.append(Ti)
        Q.append(q)
        Xs.append(X)
        B.append(a[:k])
    return TPolynomials(E, T, Q, Xs, B)


def lemma43_crosscheck(tower):
    """p-independence of the T_i in F(X) agrees with the transversal wedge criterion."""
    if not tower.forms:
        return True
    tp = build_T_polynomials(tower)
    bases = [f.basis for f in tower.forms]
    agree = p_independent(tp.T) == set_wedge_nonzero(bases)[0]
    s = tower.s
    prefix = p_independent(tp.T[:s]) and set_wedge_nonzero(bases[:s])[0]
    return agree and prefix


def kernel_wedges(tower):
    """Transversal wedges d a_1j_1 ^ ... ^ d a_sj_s of the selected forms."""
    if tower.s == 0:
        return []
    if tower._wedges is None:
        tower._wedges = transversal_wedges([f.basis for f in tower.selected], tower.field)
    return list(tower._wedges)


def omega_kernel_ffe(tower, n):
    """Omega^n(F(phi_1..phi_r)/F) as the annihilator of the transversal wedges."""
    F = tower.field
    if tower.s == 0:
        return SubspaceBasis(F, n)
    return ann_bruteforce(kernel_wedges(tower), n, F)


def _same_norm_field(f, g):
    return f.k == g.k and all(member_fp_adjoin(a, f.basis) for a in g.basis)


def _nu_sanity(gset):
    if not gset.nu_items:
        return
    kernel = expand_generator_set(gset)
    for item in gset.nu_items:
        for w in sample_log_generators(item, gset.field):
            if not kernel.contains(w):
                raise InternalCheckFailed(f"logarithmic generator {w} outside the Omega-kernel")


def omega_kernel_closed(tower, n, check=True):
    """Closed generator description of the kernel, or CaseNotCovered."""
    F = tower.field
    p = F.p
    if tower.s == 0:
        return GeneratorSet(F, n, [], [], case="trivial")
    sel = tower.selected
    ks = [f.k for f in sel]
    union = [a for f in sel for a in f.basis]
    if p_degree(union) == sum(ks):
        gset = GeneratorSet(F, n, [_item(f.basis, n) for f in sel if n >= f.k], [], case="a")
    elif len(tower.forms) >= 2 and all(_same_norm_field(tower.forms[0], g) for g in tower.forms[1:]):
        r = len(tower.forms)
        basis = tower.forms[0].basis
        k = len(basis)
        t = 1 if r >= k else k - r + 1
        items = [GeneratorItem(sub, n - t) for sub in combinations(basis, t)] if n >= t else []
        nu = [_nu_item(basis, t, n, p)] if n >= t else []
        gset = GeneratorSet(F, n, items, nu, case="b")
    elif sum(1 for k in ks if k > 1) == 1:
        last = next(f for f in sel if f.k > 1)
        a = [f.basis[0] for f in sel if f.k == 1]
        e = relative_adjoin_basis(a, last.basis)
        ell = len(e)
        if ell < 1:
            raise InternalCheckFailed("case (c) produced l = 0")
        items = [_item([ai], n) for ai in a if n >= 1]
        nu = [_nu_item(a, 1, n, p)] if n >= 1 else []
        if n >= ell:
            items.append(_item(e, n))
            nu.append(_nu_item(a + list(e), ell, n, p))
        gset = GeneratorSet(F, n, items, nu, case="c")
    else:
        raise CaseNotCovered("no closed form applies to this tower; use omega_kernel_ffe")
    if check:
        _nu_sanity(gset)
    return gset


class ModularExtensionDescriptor(NamedTuple):
    elements: tuple
    exponents: tuple


def kernel_modular_insep(ext, n):
    """Kernel for F(b_1^(1/p^m_1), ...): sum d b_i ^ Omega^{n-1}(F)."""
    b = list(ext.elements)
    if not b:
        raise InputNotPIndependent("no elements")
    if len(ext.exponents) != len(b) or any(m < 1 for m in ext.exponents):
        raise ValueError("exponents must be positive, one per element")
    if not p_independent(b):
        raise InputNotPIndependent(f"{[str(x) for x in b]} is not p-independent")
    F = b[0].field
    return GeneratorSet(F, n, [_item([x], n) for x in b] if n >= 1 else [], [], case="modular")


def compositum_wedges(A, phi):
    """d a_1 ^ ... ^ d a_s ^ d c for c in the norm-field p-basis of phi."""
    A = list(A)
    return transversal_wedges([[a] for a in A] + [list(norm_field(phi).basis)], phi.field)


def omega_kernel_compositum(A, phi, n, check=True):
    """Kernel of F(p-th roots of A)(phi)/F in closed form."""
    A = list(A)
    F = phi.field
    if not p_independent(A):
        raise InputNotPIndependent(f"{[str(a) for a in A]} is not p-independent")
    if ndeg_over_extension(phi, A) <= 1:
        raise NormDegreeCollapsed(f"{phi} has norm degree 1 over the root extension")
    _, quotients = norm_quotients(phi)
    e = relative_adjoin_basis(A, quotients)
    ell = len(e)
    if ell < 1:
        raise InternalCheckFailed("compositum produced l = 0")
    items = [_item([a], n) for a in A if n >= 1]
    nu = [_nu_item(A, 1, n, F.p)] if A and n >= 1 else []
    if n >= ell:
        items.append(_item(e, n))
        nu.append(_nu_item(A + list(e), ell, n, F.p))
    gset = GeneratorSet(F, n, items, nu, case="compositum")
    if check:
        _nu_sanity(gset)
    return gset


def omega_kernel_compositum_ffe(A, phi, n):
    return ann_bruteforce(compositum_wedges(A, phi), n, phi.field)
