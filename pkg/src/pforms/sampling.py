"""Seeded random instances for cross-validation campaigns.

Every generator takes an explicit ``random.Random``; nothing here touches
global random state.
"""

from itertools import product

from .errors import PFormsError
from .field import Field
from .forms import set_wedge_nonzero
from .plinear import p_basis_of, p_degree, p_independent
from .quasilinear import PForm, ndeg_over_extension, normalize_tower

VAR_NAMES = ("x", "y", "z", "w")


def random_field(rng, primes=(2, 3), max_vars=4, min_vars=2):
    return Field(rng.choice(primes), VAR_NAMES[:rng.randint(min_vars, max_vars)])


def random_monomial(F, rng, var_idx=None, max_deg=2):
    idx = list(range(F.m)) if var_idx is None else list(var_idx)
    a = F.const(rng.randrange(1, F.p))
    for i in idx:
        a = a * F.gen(i) ** rng.randint(0, max_deg)
    return a


def random_element(F, rng, var_idx=None, max_deg=2, max_terms=2, fraction=0.15):
    """A small nonzero element, optionally a quotient, built from the variables in var_idx."""
    while True:
        a = F.zero()
        for _ in range(rng.randint(1, max_terms)):
            a = a + random_monomial(F, rng, var_idx, max_deg)
        if a and rng.random() < fraction:
            d = random_monomial(F, rng, var_idx, 1)
            if rng.random() < 0.5:
                d = d + F.one()
            if d:
                a = a / d
        if a:
            return a


def random_pth_power(F, rng, max_deg=1):
    return random_element(F, rng, max_deg=max_deg, max_terms=2, fraction=0.0) ** F.p


def _in_vars(F, rng, var_idx):
    a = random_element(F, rng, var_idx)
    if rng.random() < 0.3:
        a = a * random_pth_power(F, rng)
    if rng.random() < 0.2:
        a = a + random_pth_power(F, rng)
    return a


def disjoint_instance(rng, F, max_sets=3, max_size=3):
    """Sets S_1..S_r with pdeg(union) = sum pdeg(S_i), each >= 1."""
    while True:
        r = rng.randint(1, min(max_sets, F.m))
        order = list(range(F.m))
        rng.shuffle(order)
        cuts = sorted(rng.sample(range(1, F.m), r - 1)) if r > 1 else []
        groups = [order[i:j] for i, j in zip([0] + cuts, cuts + [F.m])]
        sets = [[_in_vars(F, rng, g) for _ in range(rng.randint(1, max_size))] for g in groups]
        ks = [p_degree(S) for S in sets]
        if min(ks) >= 1 and p_degree([a for S in sets for a in S]) == sum(ks):
            return sets


def pdeg1_set(F, rng, max_size=3):
    """A set S with F^p(S) = F^p(a) for a random non-p-th power a."""
    while True:
        a = random_element(F, rng, max_deg=2)
        if not a.is_pth_power():
            break
    p = F.p
    out = []
    for _ in range(rng.randint(1, max_size)):
        j = rng.randint(1, p - 1)
        y = a ** j * random_pth_power(F, rng)
        if rng.random() < 0.5:
            y = y + random_pth_power(F, rng)
        out.append(y)
    return out


def power_instance(rng, F, max_size=3):
    while True:
        S = [random_element(F, rng) for _ in range(rng.randint(1, max_size))]
        k = p_degree(S)
        if k >= 1:
            return S, rng.randint(1, k + 1)


def mixed_instance(rng, F, max_prefix=2, max_size=3):
    while True:
        r = rng.randint(1, max_prefix)
        prefix = [pdeg1_set(F, rng, max_size) for _ in range(r)]
        last = [random_element(F, rng) for _ in range(rng.randint(1, max_size))]
        if set_wedge_nonzero(prefix + [last])[0]:
            return prefix, last


def random_pform(F, rng, max_dim=4, pool=()):
    while True:
        entries = []
        for _ in range(rng.randint(1, max_dim)):
            u = rng.random()
            if u < 0.1:
                entries.append(F.zero())
            elif u < 0.2:
                entries.append(random_pth_power(F, rng))
            elif u < 0.4 and pool:
                entries.append(rng.choice(pool) * random_pth_power(F, rng))
            else:
                entries.append(random_element(F, rng, fraction=0.1))
        phi = PForm(entries, F)
        if not phi.is_zero():
            return phi


def random_tower(rng, F, max_forms=3, max_dim=4):
    forms = []
    pool = []
    for _ in range(rng.randint(1, max_forms)):
        phi = random_pform(F, rng, max_dim, pool)
        pool.extend(a for a in phi.entries if a)
        forms.append(phi)
    return forms


def _invertible_mod_p(k, p, rng):
    while True:
        M = [[rng.randrange(p) for _ in range(k)] for _ in range(k)]
        A = [row[:] for row in M]
        ok = True
        for c in range(k):
            piv = next((r for r in range(c, k) if A[r][c] % p), None)
            if piv is None:
                ok = False
                break
            A[c], A[piv] = A[piv], A[c]
            inv = pow(A[c][c], p - 2, p)
            for r in range(c + 1, k):
                f = A[r][c] * inv % p
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[c])]
        if ok:
            return M


def alternative_basis(basis, rng):
    """Another p-basis of F^p(basis).

    Element i is u_i^p * prod_j b_j^M[i][j] + v_i^p for a random matrix M invertible mod p; its
    logarithmic differential is u-scaled row i of M, so the result is again a p-basis.
    """
    basis = list(basis)
    if not basis:
        return []
    F = basis[0].field
    p = F.p
    k = len(basis)
    while True:
        M = _invertible_mod_p(k, p, rng)
        out = []
        for row in M:
            y = F.const(rng.randrange(1, p))
            for b, e in zip(basis, row):
                y = y * b ** e
            if rng.random() < 0.5:
                y = y * random_pth_power(F, rng)
            if rng.random() < 0.5:
                y = y + random_pth_power(F, rng)
            out.append(y)
        if p_independent(out):
            return out


def independent_set(F, rng, k, var_idx=None, max_deg=2):
    """k small random p-independent elements."""
    while True:
        S = [random_element(F, rng, var_idx, max_deg=max_deg, fraction=0.1) for _ in range(k)]
        if p_independent(S):
            return S


def _scaled_form(entries, rng):
    F = entries[0].field
    x = random_element(F, rng, fraction=0.1)
    return PForm([a * x for a in entries], F)


def dressed_form(basis, rng, max_dim=4):
    """A p-form <1, ...> whose norm field is F^p(basis): an alternative basis plus extra members."""
    F = basis[0].field
    entries = [F.one()] + alternative_basis(basis, rng)
    if len(entries) < max_dim and rng.random() < 0.5:
        y = F.one()
        for b in rng.sample(basis, min(2, len(basis))):
            y = y * b
        entries.append(y * random_monomial(F, rng, max_deg=1) ** F.p)
    rng.shuffle(entries)
    return _scaled_form(entries, rng)


def tower_case_a(rng, F):
    """Forms whose norm fields have additive p-degree."""
    sets = disjoint_instance(rng, F, max_sets=3, max_size=3)
    return [dressed_form(p_basis_of_list(S), rng) for S in sets]


def tower_case_b(rng, F, r_at_least_k):
    """r copies of one norm field, each copy with its own presentation."""
    if r_at_least_k:
        k = rng.randint(2, min(3, F.m))
        r = rng.randint(k, 3)
    else:
        k = 3
        r = 2
    basis = independent_set(F, rng, k, max_deg=1)
    return [dressed_form(basis, rng) for _ in range(r)]


def tower_case_c(rng, F):
    """p-degree-1 forms followed by one larger form that overlaps them."""
    while True:
        r = rng.randint(1, 2)
        prefix = [pdeg1_set(F, rng, 2) for _ in range(r)]
        a = [S[0] for S in prefix]
        last = [rng.choice(a) * random_pth_power(F, rng)] + [random_element(F, rng) for _ in range(rng.randint(1, 2))]
        if p_degree(last) < 2 or not set_wedge_nonzero(prefix + [last])[0]:
            continue
        ks = [1] * r + [p_degree(last)]
        if p_degree(a + last) == sum(ks):
            continue
        forms = [_scaled_form([F.one()] + S, rng) for S in prefix] + [_scaled_form([F.one()] + last, rng)]
        tower = normalize_tower(forms)
        if tower.s == len(forms):
            return forms


def compositum_instance(rng, F):
    while True:
        A = independent_set(F, rng, rng.randint(1, min(2, F.m - 1)))
        phi = random_pform(F, rng, max_dim=3)
        if any(not a for a in phi.entries[:1]) or phi.is_zero():
            continue
        if ndeg_over_extension(phi, A) > 1:
            return A, phi


def collapsed_compositum_instance(rng, F):
    """A and a form whose norm field lies in F^p(A)."""
    A = independent_set(F, rng, rng.randint(1, min(2, F.m)))
    entries = [F.one()]
    for _ in range(rng.randint(1, 3)):
        y = random_pth_power(F, rng)
        for a in A:
            y = y * a ** rng.randrange(F.p)
        entries.append(y)
    return A, _scaled_form(entries, rng)


def p_basis_of_list(S):
    return list(p_basis_of(S).basis)


def safe(fn, *args):
    try:
        return fn(*args)
    except PFormsError:
        return None
