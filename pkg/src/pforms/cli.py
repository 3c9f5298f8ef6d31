"""Command-line frontend.

A job is one JSON object::

    {"p": 2, "vars": ["x", "y"], "command": "kernel", "forms": [["1", "x"], ["1", "y"]], "n": 1}

Common keys: ``p``, ``vars``, ``command``, ``seed``, ``budget``, ``format`` and
``check``. Every other key belongs to the command; unknown keys are rejected.
Field elements are strings in the expression grammar of ``pforms.parse``.

Exit codes: 0 success, 2 parse or semantic error, 3 violated hypothesis,
4 failed cross-check.
"""

import argparse
import json
import random
import sys
from dataclasses import dataclass, field as dc_field

from . import campaign
from .char2 import (BilinearDiagonal, PfisterForm, kato_e, pfister_anisotropic, witt_kernel_compositum_generators,
                    witt_kernel_generators)
from .errors import (CaseNotCovered, DegreeMismatch, DivisionByZero, FieldMismatch, InternalCheckFailed,
                     ParseError, PFormsError, SemanticError, WrongCharacteristic)
from .field import Field
from .forms import (ann_bruteforce, ann_closed_disjoint, ann_closed_mixed, ann_closed_power, expand_generator_set,
                    form_from_json, power_wedges, transversal_wedges, wedge_of_differentials)
from .quasilinear import (ModularExtensionDescriptor, PForm, irreducibility_criterion, kernel_modular_insep,
                          ndeg_over_extension, norm_field, normalize_tower, omega_kernel_closed,
                          omega_kernel_compositum, omega_kernel_compositum_ffe, omega_kernel_ffe,
                          pform_anisotropic_part, pform_isometric)

COMMANDS = ("ann", "kernel", "pform", "witt", "crosscheck")
COMMON_KEYS = ("p", "vars", "command", "seed", "budget", "format", "check")
FORMATS = ("json", "text")
ANN_MODES = ("auto", "disjoint", "mixed", "power", "bruteforce")

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_CHECK = 0, 2, 3, 4

# value kinds: "expr", "exprs", "exprs2" (list of lists), "int", "str", "strs", "dforms", "modular"
SCHEMAS = {
    "ann": {"n": "int", "sets": "exprs2", "set": "exprs", "r": "int", "forms": "dforms", "mode": "str"},
    "kernel": {"n": "int", "forms": "exprs2", "roots": "exprs", "form": "exprs", "modular": "modular"},
    "pform": {"entries": "exprs", "compare": "exprs", "roots": "exprs"},
    "witt": {"forms": "exprs2", "roots": "exprs", "form": "exprs", "pfister": "exprs"},
    "crosscheck": {"cases": "strs", "count": "int"},
}


@dataclass
class JobSpec:
    p: int
    vars: tuple
    command: str
    params: dict = dc_field(default_factory=dict)
    seed: int = 0
    budget: int = None
    format: str = "json"
    check: bool = False

    @property
    def field(self):
        return Field(self.p, self.vars)


# ---------------------------------------------------------------------------
# parsing

def _where(path):
    return "".join(f"[{k}]" if isinstance(k, int) else f".{k}" for k in path).lstrip(".")


def _expr(value, F, path):
    if not isinstance(value, str):
        raise ParseError(f"{_where(path)}: expected an expression string")
    try:
        return F.parse(value)
    except ParseError as e:
        raise ParseError(f"{_where(path)}: {e.args[0].rsplit(' (line', 1)[0]}", e.line, e.column) from None
    except (SemanticError, DivisionByZero) as e:
        raise type(e)(f"{_where(path)}: {e}") from None


def _list(value, path):
    if not isinstance(value, list):
        raise SemanticError(f"{_where(path)}: expected a list")
    return value


def _int(value, path, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SemanticError(f"{_where(path)}: expected an integer")
    if minimum is not None and value < minimum:
        raise SemanticError(f"{_where(path)}: must be at least {minimum}")
    return value


def _convert(kind, value, F, path):
    if kind == "expr":
        return _expr(value, F, path)
    if kind == "exprs":
        return [_expr(v, F, path + [i]) for i, v in enumerate(_list(value, path))]
    if kind == "exprs2":
        return [_convert("exprs", v, F, path + [i]) for i, v in enumerate(_list(value, path))]
    if kind == "int":
        return _int(value, path, 0)
    if kind == "str":
        if not isinstance(value, str):
            raise SemanticError(f"{_where(path)}: expected a string")
        return value
    if kind == "strs":
        return [_convert("str", v, F, path + [i]) for i, v in enumerate(_list(value, path))]
    if kind == "dforms":
        out = []
        for i, w in enumerate(_list(value, path)):
            terms = _list(w, path + [i])
            for j, t in enumerate(terms):
                if not isinstance(t, dict) or set(t) != {"indices", "coeff"}:
                    raise SemanticError(f"{_where(path + [i, j])}: expected {{indices, coeff}}")
                idx = _list(t["indices"], path + [i, j, "indices"])
                if any(isinstance(k, bool) or not isinstance(k, int) or not 1 <= k <= F.m for k in idx) \
                        or sorted(set(idx)) != idx:
                    raise SemanticError(f"{_where(path + [i, j, 'indices'])}: "
                                        f"need strictly increasing indices in 1..{F.m}")
                _expr(t["coeff"], F, path + [i, j, "coeff"])
            degrees = {len(t["indices"]) for t in terms}
            if len(degrees) > 1:
                raise SemanticError(f"{_where(path + [i])}: terms of mixed degree")
            out.append(form_from_json(F, terms, degrees.pop() if degrees else 0))
        return out
    if kind == "modular":
        if not isinstance(value, dict) or set(value) != {"elements", "exponents"}:
            raise SemanticError(f"{_where(path)}: expected {{elements, exponents}}")
        elements = _convert("exprs", value["elements"], F, path + ["elements"])
        exps = [_int(v, path + ["exponents", i], 1) for i, v in enumerate(_list(value["exponents"],
                                                                             path + ["exponents"]))]
        if len(exps) != len(elements):
            raise SemanticError(f"{_where(path)}: one exponent per element")
        return ModularExtensionDescriptor(tuple(elements), tuple(exps))
    raise AssertionError(kind)


def _require_one_of(command, params, groups):
    present = [g for g in groups if all(k in params for k in g)]
    if len(present) != 1:
        names = " | ".join("+".join(g) for g in groups)
        raise SemanticError(f"{command}: give exactly one of {names}")
    used = set(present[0])
    stray = [k for g in groups for k in g if k in params and k not in used]
    if stray:
        raise SemanticError(f"{command}: {', '.join(sorted(set(stray)))} not allowed with {'+'.join(present[0])}")
    return present[0]


def _validate(command, params):
    if command == "ann":
        if "n" not in params:
            raise SemanticError("ann: missing n")
        shape = _require_one_of(command, params, (("sets",), ("set", "r"), ("forms",)))
        mode = params.get("mode")
        if mode is not None:
            if mode not in ANN_MODES:
                raise SemanticError(f"ann: mode must be one of {', '.join(ANN_MODES)}")
            if shape == ("set", "r") and mode not in ("auto", "power", "bruteforce"):
                raise SemanticError(f"ann: mode {mode} needs 'sets'")
            if shape == ("sets",) and mode == "power":
                raise SemanticError("ann: mode power needs 'set' and 'r'")
            if shape == ("forms",) and mode not in ("auto", "bruteforce"):
                raise SemanticError(f"ann: mode {mode} needs 'sets' or 'set'")
        if shape == ("sets",) and (not params["sets"] or any(not S for S in params["sets"])):
            raise SemanticError("ann: sets must be nonempty lists")
        if shape == ("set", "r") and not params["set"]:
            raise SemanticError("ann: set must be nonempty")
    elif command == "kernel":
        if "n" not in params:
            raise SemanticError("kernel: missing n")
        _require_one_of(command, params, (("forms",), ("roots", "form"), ("modular",)))
        for phi in params.get("forms", []):
            if not phi:
                raise SemanticError("kernel: forms must be nonempty lists")
        if "form" in params and not params["form"]:
            raise SemanticError("kernel: form must be nonempty")
    elif command == "pform":
        if not params.get("entries"):
            raise SemanticError("pform: entries must be a nonempty list")
        if "compare" in params and not params["compare"]:
            raise SemanticError("pform: compare must be a nonempty list")
    elif command == "witt":
        _require_one_of(command, params, (("forms",), ("roots", "form"), ("pfister",)))
        for key in ("form", "pfister"):
            if key in params and not params[key]:
                raise SemanticError(f"witt: {key} must be nonempty")
        for phi in params.get("forms", []):
            if not phi:
                raise SemanticError("witt: forms must be nonempty lists")
    elif command == "crosscheck":
        for name in params.get("cases", []):
            if name not in campaign.CAMPAIGNS:
                raise SemanticError(f"crosscheck: unknown case {name!r}; known: {', '.join(campaign.CAMPAIGNS)}")


def job_from_dict(data):
    if not isinstance(data, dict):
        raise SemanticError("a job must be a JSON object")
    for key in ("p", "vars", "command"):
        if key not in data:
            raise SemanticError(f"missing required field {key!r}")
    command = data["command"]
    if command not in COMMANDS:
        raise SemanticError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    schema = SCHEMAS[command]
    unknown = sorted(k for k in data if k not in COMMON_KEYS and k not in schema)
    if unknown:
        raise SemanticError(f"unknown field(s) for {command}: {', '.join(unknown)}")
    p = _int(data["p"], ["p"])
    names = _convert("strs", data["vars"], None, ["vars"])
    F = Field(p, names)
    seed = _int(data.get("seed", 0), ["seed"], 0)
    budget = data.get("budget")
    if budget is not None:
        budget = _int(budget, ["budget"], 1)
    fmt = data.get("format", "json")
    if fmt not in FORMATS:
        raise SemanticError(f"format must be one of {', '.join(FORMATS)}")
    check = data.get("check", False)
    if not isinstance(check, bool):
        raise SemanticError("check must be true or false")
    params = {k: _convert(schema[k], v, F, [k]) for k, v in data.items() if k in schema}
    _validate(command, params)
    return JobSpec(p, tuple(names), command, params, seed, budget, fmt, check)


def parse_job(text):
    """Parse a JSON job; syntax errors carry the line and column of the offending character."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    return job_from_dict(data)


def _dump_value(kind, value):
    if kind == "expr":
        return str(value)
    if kind == "exprs":
        return [str(a) for a in value]
    if kind == "exprs2":
        return [[str(a) for a in S] for S in value]
    if kind == "dforms":
        return [w.to_json() for w in value]
    if kind == "modular":
        return {"elements": [str(a) for a in value.elements], "exponents": list(value.exponents)}
    return value


def job_to_dict(job):
    out = {"p": job.p, "vars": list(job.vars), "command": job.command, "seed": job.seed,
           "format": job.format, "check": job.check}
    if job.budget is not None:
        out["budget"] = job.budget
    schema = SCHEMAS[job.command]
    for k, v in job.params.items():
        out[k] = _dump_value(schema[k], v)
    return out


def serialize_job(job):
    """Canonical JSON text of a job; parse_job(serialize_job(j)) reproduces j."""
    return json.dumps(job_to_dict(job), sort_keys=True)


# ---------------------------------------------------------------------------
# running

def _subspace(S):
    out = S.to_json()
    out["basis_text"] = [str(w) for w in S.forms]
    return out


def _closed(gset):
    return {"case": gset.case, "description": gset.describe(), "generators": gset.to_json()}


def _check_block(closed_space, brute):
    return {"bruteforce": _subspace(brute), "agrees": closed_space == brute}


def _run_ann(job, F):
    P = job.params
    n = P["n"]
    mode = P.get("mode", "auto")
    report = {"n": n}
    if "forms" in P or mode == "bruteforce":
        if "forms" in P:
            U = P["forms"]
        elif "set" in P:
            U = power_wedges(P["set"], P["r"])
        else:
            U = transversal_wedges(P["sets"], F)
        report.update(case="bruteforce", annihilator=_subspace(ann_bruteforce(U, n, F)))
        return report, True
    if "set" in P:
        gset = ann_closed_power(P["set"], P["r"], n)
        U = power_wedges(P["set"], P["r"])
    else:
        sets = P["sets"]
        U = transversal_wedges(sets, F)
        gset = None
        if mode in ("auto", "disjoint"):
            try:
                gset = ann_closed_disjoint(sets, n)
            except PFormsError:
                if mode == "disjoint":
                    raise
        if gset is None and mode in ("auto", "mixed") and len(sets) >= 2:
            try:
                gset = ann_closed_mixed(sets[:-1], sets[-1], n)
            except PFormsError:
                if mode == "mixed":
                    raise
        if gset is None and mode == "mixed":
            raise SemanticError("ann: mode mixed needs at least two sets")
        if gset is None:
            report.update(case="bruteforce", closed=None,
                          annihilator=_subspace(ann_bruteforce(U, n, F)))
            return report, True
    space = expand_generator_set(gset)
    report.update(case=gset.case, closed=_closed(gset), annihilator=_subspace(space))
    ok = True
    if job.check:
        report["check"] = _check_block(space, ann_bruteforce(U, n, F))
        ok = report["check"]["agrees"]
    return report, ok


def _run_kernel(job, F):
    P = job.params
    n = P["n"]
    report = {"n": n}
    if "modular" in P:
        ext = P["modular"]
        gset = kernel_modular_insep(ext, n)
        space = expand_generator_set(gset)
        report.update(case=gset.case, closed=_closed(gset), kernel=_subspace(space))
        if job.check:
            report["check"] = _check_block(space, ann_bruteforce([wedge_of_differentials(ext.elements, F)], n, F))
            return report, report["check"]["agrees"]
        return report, True
    if "roots" in P:
        A, phi = P["roots"], PForm(P["form"], F)
        gset = omega_kernel_compositum(A, phi, n)
        space = expand_generator_set(gset)
        report.update(case=gset.case, closed=_closed(gset), kernel=_subspace(space))
        if job.check:
            report["check"] = _check_block(space, omega_kernel_compositum_ffe(A, phi, n))
            return report, report["check"]["agrees"]
        return report, True
    tower = normalize_tower([PForm(e, F) for e in P["forms"]])
    report["tower"] = tower.to_json()
    try:
        gset = omega_kernel_closed(tower, n)
    except CaseNotCovered as e:
        report.update(case="uncovered", closed=None, note=str(e), kernel=_subspace(omega_kernel_ffe(tower, n)))
        return report, True
    space = expand_generator_set(gset)
    report.update(case=gset.case, closed=_closed(gset), kernel=_subspace(space))
    if job.check:
        report["check"] = _check_block(space, omega_kernel_ffe(tower, n))
        return report, report["check"]["agrees"]
    return report, True


def _run_pform(job, F):
    P = job.params
    phi = PForm(P["entries"], F)
    aniso = pform_anisotropic_part(phi)
    report = {"form": phi.to_json(), "dimension": phi.dim, "defect": aniso.defect,
              "anisotropic_part": None if aniso.anisotropic_part is None else aniso.anisotropic_part.to_json()}
    if phi.is_zero():
        report.update(norm_field=None, irreducible=False)
    else:
        report.update(norm_field=norm_field(phi).to_json(), irreducible=irreducibility_criterion(phi))
    if "compare" in P:
        report["isometric"] = pform_isometric(phi, PForm(P["compare"], F))
    if "roots" in P:
        report["ndeg_over_roots"] = ndeg_over_extension(phi, P["roots"])
    return report, True


def _witt_budget(job):
    return job.budget if job.budget is not None else 6


def _run_witt(job, F):
    if F.p != 2:
        raise WrongCharacteristic(f"witt jobs need p = 2, got {F.p}")
    P = job.params
    if "pfister" in P:
        pi = PfisterForm(P["pfister"], F)
        e = kato_e(pi)
        return {"pfister": [str(a) for a in pi.slots], "fold": pi.fold, "anisotropic": pfister_anisotropic(pi),
                "kato_e": str(e), "kato_e_terms": e.to_json()}, True
    rng = random.Random(job.seed)
    if "roots" in P:
        desc = witt_kernel_compositum_generators(P["roots"], BilinearDiagonal(P["form"], F), _witt_budget(job), rng)
    else:
        desc = witt_kernel_generators([BilinearDiagonal(e, F) for e in P["forms"]], _witt_budget(job), rng)
    return desc.to_json(), desc.all_verified


def _run_crosscheck(job, F):
    P = job.params
    names = P.get("cases") or list(campaign.CAMPAIGNS)
    count = P.get("count", job.budget if job.budget is not None else 5)
    results = {}
    ok = True
    for name in names:
        res = campaign.run_campaign(name, random.Random(f"{job.seed}:{name}"), count)
        results[name] = res
        ok = ok and res["ok"]
    return {"count": count, "results": results, "all_passed": ok}, ok


RUNNERS = {"ann": _run_ann, "kernel": _run_kernel, "pform": _run_pform, "witt": _run_witt,
           "crosscheck": _run_crosscheck}


def run_job(job):
    """Run a job; return (report dict, ok). ok is False only when a cross-check disagreed."""
    F = job.field
    body, ok = RUNNERS[job.command](job, F)
    report = {"command": job.command, "field": {"p": F.p, "vars": list(F.vars)}, "seed": job.seed,
              "status": "ok" if ok else "check_failed", "result": body}
    return report, ok


# ---------------------------------------------------------------------------
# output

INPUT_ERRORS = (ParseError, SemanticError, DivisionByZero, WrongCharacteristic, FieldMismatch, DegreeMismatch)


def exit_code_for(err):
    if isinstance(err, InternalCheckFailed):
        return EXIT_CHECK
    if isinstance(err, INPUT_ERRORS):
        return EXIT_INPUT
    return EXIT_HYPOTHESIS


def error_report(err):
    return {"status": "error",
            "error": {"code": err.code, "message": str(err),
                      "line": getattr(err, "line", None), "column": getattr(err, "column", None)}}


def render_json(report):
    return json.dumps(report, sort_keys=True, indent=2)


def _text_lines(value, indent=0):
    pad = "  " * indent
    if isinstance(value, dict):
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)) and v:
                yield f"{pad}{k}:"
                yield from _text_lines(v, indent + 1)
            else:
                yield f"{pad}{k}: {_scalar(v)}"
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)) and v:
                yield f"{pad}-"
                yield from _text_lines(v, indent + 1)
            else:
                yield f"{pad}- {_scalar(v)}"
    else:
        yield f"{pad}{_scalar(value)}"


def _scalar(v):
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v == [] or v == {}:
        return "(empty)"
    return str(v)


def render_text(report):
    return "\n".join(_text_lines(report))


def build_parser():
    ap = argparse.ArgumentParser(prog="pforms", description="Differential-form annihilators and kernels of "
                                 "function field towers of quasilinear p-forms.")
    src = ap.add_mutually_exclusive_group()
    src.add_argument("--input", metavar="FILE", help="read the JSON job from FILE")
    src.add_argument("--stdin", action="store_true", help="read the JSON job from standard input (default)")
    fmt = ap.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", help="JSON report")
    fmt.add_argument("--text", dest="format", action="store_const", const="text", help="plain text report")
    ap.add_argument("--seed", type=int, help="random seed (non-negative), overrides the job")
    ap.add_argument("--budget", type=int, help="samples per family or instances per campaign")
    ap.add_argument("--check", action="store_true", help="compare closed forms against brute force")
    return ap


def main(argv=None, stdin=None, stdout=None):
    args = build_parser().parse_args(argv)
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    fmt = args.format or "json"
    try:
        if args.input:
            try:
                with open(args.input, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as e:
                raise SemanticError(f"cannot read {args.input}: {e.strerror}") from None
        else:
            text = stdin.read()
        job = parse_job(text)
        if args.format is None:
            fmt = job.format
        if args.seed is not None:
            if args.seed < 0:
                raise SemanticError("--seed must be non-negative")
            job.seed = args.seed
        if args.budget is not None:
            if args.budget < 1:
                raise SemanticError("--budget must be positive")
            job.budget = args.budget
        job.check = job.check or args.check
        report, ok = run_job(job)
        code = EXIT_OK if ok else EXIT_CHECK
    except PFormsError as err:
        report, code = error_report(err), exit_code_for(err)
    stdout.write((render_text(report) if fmt == "text" else render_json(report)) + "\n")
    return code


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
