"""Randomized cross-validation of closed forms against brute force.

Each ``check_*`` function draws one instance from an explicit ``random.Random``
and returns a ``CheckResult``. On failure the payload is enough to rebuild the
instance by hand.
"""

from dataclasses import dataclass, field as dc_field
from itertools import permutations

from . import sampling as smp
from .char2 import (BilinearDiagonal, PfisterForm, verify_generator, witt_kernel_compositum_generators,
                    witt_kernel_generators)
from .field import Field
from .forms import (SubspaceBasis, ann_bruteforce, ann_closed_disjoint, ann_closed_mixed, ann_closed_power,
                    expand_generator_set, power_wedges, transversal_wedges)
from .plinear import p_independent
from .quasilinear import (lemma43_crosscheck, normalize_tower, omega_kernel_closed, omega_kernel_compositum,
                          omega_kernel_compositum_ffe, omega_kernel_ffe)

ANN_CASES = ("disjoint", "power", "mixed")
CLOSED_KERNEL_CASES = ("a", "b-r<k", "b-r>=k", "c", "compositum")
WITT_CASES = ("pfister-power", "pdeg1-prefix", "compositum")


@dataclass
class CheckResult:
    ok: bool
    payload: dict = dc_field(default_factory=dict)
    counts: dict = dc_field(default_factory=dict)


def _field_json(F):
    return {"p": F.p, "vars": list(F.vars)}


def _strs(xs):
    return [str(a) for a in xs]


def check_annihilator(case, rng, max_vars=4, max_n=3):
    """expand(closed form) == ann_bruteforce(transversal wedges) for one random instance."""
    F = smp.random_field(rng, max_vars=max_vars)
    n = rng.randint(0, min(max_n, F.m))
    if case == "disjoint":
        sets = smp.disjoint_instance(rng, F)
        closed = ann_closed_disjoint(sets, n)
        U = transversal_wedges(sets, F)
        inst = {"sets": [_strs(S) for S in sets]}
    elif case == "power":
        S, r = smp.power_instance(rng, F)
        closed = ann_closed_power(S, r, n)
        U = power_wedges(S, r)
        inst = {"set": _strs(S), "r": r}
    elif case == "mixed":
        prefix, last = smp.mixed_instance(rng, F)
        closed = ann_closed_mixed(prefix, last, n)
        U = transversal_wedges(prefix + [last], F)
        inst = {"sets": [_strs(S) for S in prefix + [last]]}
    else:
        raise ValueError(f"unknown annihilator case {case!r}")
    expanded = expand_generator_set(closed)
    brute = ann_bruteforce(U, n, F)
    ok = expanded == brute
    payload = {} if ok else {**_field_json(F), "case": case, "n": n, **inst,
                             "closed": expanded.to_json(), "bruteforce": brute.to_json()}
    return CheckResult(ok, payload, {"full_space": int(closed.case == "power-full")})


def _pforms_json(forms):
    return [_strs(phi.entries) for phi in forms]


def check_tower(rng, max_vars=4, max_forms=3, max_dim=4):
    """Kernel identity against alternative p-bases and the T-polynomial independence criterion."""
    F = smp.random_field(rng, max_vars=max_vars)
    forms = smp.random_tower(rng, F, max_forms, max_dim)
    tower = normalize_tower(forms)
    alt = [smp.alternative_basis(f.basis, rng) for f in tower.selected]
    U = transversal_wedges(alt, F) if alt else []
    kernel_ok = True
    for n in range(0, F.m + 1):
        K = omega_kernel_ffe(tower, n)
        K2 = ann_bruteforce(U, n, F) if alt else SubspaceBasis(F, n)
        if K != K2:
            kernel_ok = False
            break
    lemma_ok = lemma43_crosscheck(tower)
    ok = kernel_ok and lemma_ok
    payload = {} if ok else {**_field_json(F), "forms": _pforms_json(forms),
                             "alternative_bases": [_strs(b) for b in alt],
                             "kernel_identity": kernel_ok, "independence_criterion": lemma_ok}
    return CheckResult(ok, payload, {"kernel_identity": int(kernel_ok), "independence_criterion": int(lemma_ok),
                                     "s": tower.s})


def check_order_invariance(rng, max_vars=4):
    """Permuting and rescaling the forms leaves the canonical kernel unchanged."""
    F = smp.random_field(rng, max_vars=max_vars)
    forms = smp.random_tower(rng, F)
    n = rng.randint(1, min(3, F.m))
    K = omega_kernel_ffe(normalize_tower(forms), n)
    perms = list(permutations(range(len(forms))))
    order = rng.choice(perms)
    moved = [forms[i].scaled(smp.random_element(F, rng)) for i in order]
    K2 = omega_kernel_ffe(normalize_tower(moved), n)
    ok = K == K2
    payload = {} if ok else {**_field_json(F), "n": n, "forms": _pforms_json(forms),
                             "moved": _pforms_json(moved)}
    return CheckResult(ok, payload)


def closed_kernel_instance(case, rng):
    """A constructed tower (or root list plus form) for one closed-kernel case."""
    if case == "compositum":
        F = smp.random_field(rng)
        A, phi = smp.compositum_instance(rng, F)
        return F, (A, phi)
    if case == "b-r<k":
        F = smp.random_field(rng, min_vars=3, max_vars=3)
    else:
        F = smp.random_field(rng)
    if case == "a":
        forms = smp.tower_case_a(rng, F)
    elif case == "b-r<k":
        forms = smp.tower_case_b(rng, F, False)
    elif case == "b-r>=k":
        forms = smp.tower_case_b(rng, F, True)
    elif case == "c":
        forms = smp.tower_case_c(rng, F)
    else:
        raise ValueError(f"unknown closed-kernel case {case!r}")
    return F, forms


def check_closed_kernel(case, rng):
    """Closed generator sets expand to the brute-force kernel in every degree."""
    F, inst = closed_kernel_instance(case, rng)
    expected = {"a": "a", "b-r<k": "b", "b-r>=k": "b", "c": "c", "compositum": "compositum"}[case]
    bad = []
    if case == "compositum":
        A, phi = inst
        for n in range(0, F.m + 1):
            g = omega_kernel_compositum(A, phi, n)
            if g.case != expected or expand_generator_set(g) != omega_kernel_compositum_ffe(A, phi, n):
                bad.append(n)
        desc = {"roots": _strs(A), "form": _strs(phi.entries)}
    else:
        tower = normalize_tower(inst)
        for n in range(0, F.m + 1):
            g = omega_kernel_closed(tower, n)
            if g.case != expected or expand_generator_set(g) != omega_kernel_ffe(tower, n):
                bad.append(n)
        desc = {"forms": _pforms_json(inst)}
    ok = not bad
    return CheckResult(ok, {} if ok else {**_field_json(F), "case": case, "failing_degrees": bad, **desc})


def _corruption_counts(desc, prefix, E):
    """Replace the first slot of each eligible sample by the fresh variable w.

    A corrupted sample can only be expected to fail when its remaining slots together with
    the prefix generators are 2-independent; otherwise it legitimately stays in the kernel.
    """
    wedges = [w.embed(E) for w in desc.wedges]
    fresh = E["w"]
    eligible = rejected = 0
    for _, pi in desc.samples:
        rest = list(pi.slots[1:])
        if not p_independent(list(prefix) + rest):
            continue
        eligible += 1
        bad = PfisterForm([fresh] + [a.embed(E) for a in rest], E)
        rejected += not verify_generator(bad, wedges)
    return eligible, rejected


def check_witt(case, rng, budget=6):
    """Sampled Pfister generators verify; corrupted ones are rejected."""
    G = Field(2, ("x", "y", "z"))
    E = G.extend(["w"])
    if case == "pfister-power":
        if rng.random() < 0.6:
            forms = smp.tower_case_b(rng, G, rng.random() < 0.5)
        else:
            forms = [smp.dressed_form(smp.independent_set(G, rng, rng.randint(1, 3)), rng)]
        desc = witt_kernel_generators([BilinearDiagonal(f.entries) for f in forms], budget, rng)
        prefix = []
    elif case == "pdeg1-prefix":
        forms = smp.tower_case_c(rng, G)
        desc = witt_kernel_generators([BilinearDiagonal([a for a in f.entries if a]) for f in forms], budget, rng)
        prefix = desc.params.get("a", [])
    elif case == "compositum":
        A, phi = smp.compositum_instance(rng, G)
        desc = witt_kernel_compositum_generators(A, BilinearDiagonal([a for a in phi.entries if a]), budget, rng)
        prefix = A
    else:
        raise ValueError(f"unknown Witt case {case!r}")
    eligible, rejected = _corruption_counts(desc, prefix, E)
    ok = desc.case == case and desc.all_verified and rejected == eligible
    counts = {"samples": len(desc.verified), "verified": sum(desc.verified),
              "corrupted": eligible, "rejected": rejected}
    return CheckResult(ok, {} if ok else {"case": case, "report": desc.to_json(), **counts}, counts)


CAMPAIGNS = {
    **{c: (lambda rng, c=c: check_annihilator(c, rng)) for c in ANN_CASES},
    "tower": check_tower,
    "order": check_order_invariance,
    **{f"kernel-{c}": (lambda rng, c=c: check_closed_kernel(c, rng)) for c in CLOSED_KERNEL_CASES},
    **{f"witt-{c}": (lambda rng, c=c: check_witt(c, rng)) for c in WITT_CASES},
}


def run_campaign(name, rng, count):
    """Run ``count`` checks; stop at the first failure and return its payload."""
    check = CAMPAIGNS[name]
    totals = {}
    for i in range(count):
        res = check(rng)
        for k, v in res.counts.items():
            totals[k] = totals.get(k, 0) + v
        if not res.ok:
            return {"instances": i + 1, "passed": i, "ok": False, "counterexample": res.payload, "totals": totals}
    return {"instances": count, "passed": count, "ok": True, "totals": totals}
