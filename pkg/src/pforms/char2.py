"""Bilinear forms in characteristic 2 via the Kato map.

Pfister forms <<a_1, ..., a_n>> are sent to logarithmic forms
da_1/a_1 ^ ... ^ da_n/a_n. A sampled Witt-kernel generator is accepted when
its image annihilates every defining wedge of the kernel, which is an exact
computation over F.
"""

import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations, islice, product

from .errors import (CaseNotCovered, DegreeMismatch, InputNot2Independent, NormDegreeCollapsed,
                     WrongCharacteristic, ZeroSlot)
from .forms import expand_generator_set, log_form
from .plinear import member_fp_adjoin, p_degree, p_independent, relative_adjoin_basis
from .quasilinear import (PForm, compositum_wedges, kernel_modular_insep, kernel_wedges, ndeg_over_extension,
                          norm_quotients, normalize_tower, omega_kernel_compositum, omega_kernel_ffe)


def _require_char2(field):
    if field.p != 2:
        raise WrongCharacteristic(f"bilinear forms need characteristic 2, got {field.p}")


class PfisterForm:
    """<<a_1, ..., a_n>> = <1, a_1> (x) ... (x) <1, a_n>."""

    __slots__ = ("field", "slots")

    def __init__(self, slots, field=None):
        slots = list(slots)
        field = field or slots[0].field
        self.field = field
        self.slots = tuple(field(a) for a in slots)
        if any(not a for a in self.slots):
            raise ZeroSlot("Pfister slots must be nonzero")

    @property
    def fold(self):
        return len(self.slots)

    def __eq__(self, other):
        return isinstance(other, PfisterForm) and self.slots == other.slots

    def __hash__(self):
        return hash(self.slots)

    def __str__(self):
        return "<<" + ", ".join(str(a) for a in self.slots) + ">>"

    def __repr__(self):
        return f"PfisterForm({self})"


class BilinearDiagonal:
    __slots__ = ("field", "entries")

    def __init__(self, entries, field=None):
        entries = list(entries)
        field = field or entries[0].field
        self.field = field
        self.entries = tuple(field(a) for a in entries)
        if not self.entries or any(not a for a in self.entries):
            raise ZeroSlot("diagonal entries must be nonzero")

    def __str__(self):
        return "<" + ", ".join(str(a) for a in self.entries) + ">"


def pfister_anisotropic(pi):
    """Anisotropic iff the slots are 2-independent; otherwise the form is metabolic."""
    _require_char2(pi.field)
    return p_independent(pi.slots)


def polar_form(b):
    """The 2-form v -> b(v, v)."""
    return PForm(b.entries, b.field)


def kato_e(pi):
    if any(not a for a in pi.slots):
        raise ZeroSlot("Pfister slots must be nonzero")
    return log_form(*pi.slots)


def verify_generator(pi, wedges, n=None):
    """True iff e(pi) ^ w = 0 for every defining wedge w."""
    if n is not None and pi.fold != n:
        raise DegreeMismatch(f"{pi.fold}-fold form against degree-{n} annihilator")
    degrees = {w.degree for w in wedges if w}
    if len(degrees) > 1:
        raise DegreeMismatch("defining wedges have mixed degrees")
    image = kato_e(pi)
    return all(not image.wedge(w) for w in wedges)


# ---------------------------------------------------------------------------
# sampling

def _random_poly(field, rng, bound):
    total = field.zero()
    for _ in range(rng.randint(1, 2)):
        term = field.const(rng.randrange(field.p))
        for v in field.gens:
            term = term * v ** rng.randint(0, bound)
        total = total + term
    return total


def sample_pool(gens, field, rng, count, bound=1):
    """Nonzero elements of F^2(gens): monomials in gens with exponents < 2*bound, then
    ``count`` random combinations sum_e c_e^2 gens^e with deg c_e <= bound."""
    gens = list(gens)
    monomials = []
    for exps in product(range(2 * bound), repeat=len(gens)):
        if not any(exps):
            continue
        y = field.one()
        for g, e in zip(gens, exps):
            y = y * g ** e
        monomials.append(y)
    randoms = []
    tries = 0
    while len(randoms) < count and tries < 50 * count + 50:
        tries += 1
        y = field.zero()
        for exps in product((0, 1), repeat=len(gens)):
            c = _random_poly(field, rng, bound)
            mono = field.one()
            for g, e in zip(gens, exps):
                if e:
                    mono = mono * g
            y = y + c * c * mono
        if y:
            randoms.append(y)
    return monomials, randoms


@dataclass
class Family:
    gens: tuple          # generators of the field the slots range over (over F^2)
    width: int           # number of Pfister slots

    def describe(self):
        ys = ", ".join(f"y{i}" for i in range(1, self.width + 1))
        g = ", ".join(str(a) for a in self.gens)
        return f"<<{ys}>> with y_i in F^2({g})^*"

    def to_json(self):
        return {"field_generators": [str(a) for a in self.gens], "width": self.width,
                "description": self.describe()}


@dataclass
class WittKernelDescription:
    case: str
    params: dict
    families: list
    wedges: list
    samples: list = dc_field(default_factory=list)
    verified: list = dc_field(default_factory=list)
    extra: dict = dc_field(default_factory=dict)

    @property
    def all_verified(self):
        return all(self.verified)

    def to_json(self):
        params = {k: ([str(x) for x in v] if isinstance(v, (list, tuple)) else v)
                  for k, v in self.params.items()}
        return {"case": self.case, "params": params,
                "families": [f.to_json() for f in self.families],
                "defining_wedges": [w.to_json() for w in self.wedges],
                "samples": [{"family": fi, "generator": [str(a) for a in pi.slots], "verified": ok}
                            for (fi, pi), ok in zip(self.samples, self.verified)],
                "all_verified": self.all_verified, **self.extra}


def _sample_family(fam, field, rng, budget, bound):
    monomials, randoms = sample_pool(fam.gens, field, rng, budget, bound)
    det = list(islice(combinations(monomials, fam.width), (budget + 1) // 2))
    out = [PfisterForm(ys, field) for ys in det]
    pool = monomials + randoms
    while len(out) < budget and pool:
        ys = [rng.choice(randoms) if randoms and rng.random() < 0.7 else rng.choice(pool)
              for _ in range(fam.width)]
        out.append(PfisterForm(ys, field))
    return out


def _fill(desc, field, rng, budget, bound):
    for fi, fam in enumerate(desc.families):
        for pi in _sample_family(fam, field, rng, budget, bound):
            desc.samples.append((fi, pi))
            desc.verified.append(verify_generator(pi, desc.wedges))
    return desc


def witt_kernel_generators(forms, budget=10, rng=None, bound=1):
    """Generators of W(F(b_1, ..., b_r)/F) in the repeated-form and p-degree-1-prefix cases."""
    forms = list(forms)
    F = forms[0].field
    _require_char2(F)
    rng = rng if rng is not None else random.Random(0)
    tower = normalize_tower([polar_form(b) for b in forms])
    wedges = kernel_wedges(tower)
    if tower.s == 0:
        return WittKernelDescription("trivial", {"s": 0}, [], [])
    sel = tower.selected
    first = tower.forms[0]
    same = all(f.k == first.k and all(member_fp_adjoin(a, first.basis) for a in f.basis)
               for f in tower.forms[1:])
    ks = [f.k for f in sel]
    if same:
        r, k = len(tower.forms), first.k
        t = 1 if r >= k else k - r + 1
        desc = WittKernelDescription("pfister-power", {"r": r, "k": k, "t": t, "s": tower.s,
                                                        "a": list(first.basis)},
                                     [Family(tuple(first.basis), t)], wedges)
    elif sum(1 for k in ks if k > 1) <= 1:
        last = next((f for f in sel if f.k > 1), sel[-1])
        a = [f.basis[0] for f in sel if f is not last]
        e = relative_adjoin_basis(a, last.basis)
        ell = len(e)
        fams = []
        if a:
            fams.append(Family(tuple(a), 1))
        fams.append(Family(tuple(a) + tuple(e), ell))
        desc = WittKernelDescription("pdeg1-prefix", {"s": tower.s, "a": a, "e": list(e), "l": ell},
                                     fams, wedges)
    else:
        raise CaseNotCovered("no generator family is known for this tower")
    return _fill(desc, F, rng, budget, bound)


def compositum_additivity(A, phi, field):
    """Degrees n where the compositum kernel differs from the sum of the two sub-kernels."""
    from .forms import SubspaceBasis
    from .quasilinear import ModularExtensionDescriptor
    differs = []
    tower = normalize_tower([phi])
    for n in range(1, field.m + 1):
        whole = expand_generator_set(omega_kernel_compositum(A, phi, n, check=False))
        k1 = expand_generator_set(kernel_modular_insep(ModularExtensionDescriptor(tuple(A), (1,) * len(A)), n))
        k2 = omega_kernel_ffe(tower, n)
        summed = SubspaceBasis(field, n, list(k1.rows) + list(k2.rows))
        if summed != whole:
            differs.append(n)
    return differs


def witt_kernel_compositum_generators(A, b, budget=10, rng=None, bound=1):
    """Generators of W(F(sqrt a_1, ..., sqrt a_s)(b)/F)."""
    A = list(A)
    F = b.field
    _require_char2(F)
    rng = rng if rng is not None else random.Random(0)
    if not p_independent(A):
        raise InputNot2Independent(f"{[str(a) for a in A]} is not 2-independent")
    phi = polar_form(b)
    if ndeg_over_extension(phi, A) <= 1:
        raise NormDegreeCollapsed(f"{phi} has norm degree 1 over F(sqrt A)")
    _, quotients = norm_quotients(phi)
    e = relative_adjoin_basis(A, quotients)
    fams = [Family(tuple(A), 1), Family(tuple(A) + tuple(e), len(e))]
    desc = WittKernelDescription("compositum", {"a": A, "e": list(e), "l": len(e)}, fams,
                                 compositum_wedges(A, phi))
    diff = compositum_additivity(A, phi, F)
    desc.extra["additive_split"] = not diff
    desc.extra["non_additive_degrees"] = diff
    return _fill(desc, F, rng, budget, bound)
