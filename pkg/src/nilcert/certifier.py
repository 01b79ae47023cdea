"""Certification pipelines.

Each pipeline runs a fixed sequence of named checks and records inputs,
verdicts and witnesses in a Certificate.  The first failing check halts the
pipeline; nothing after it is reported.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from . import lawkit
from .exactpoly import IntPoly, ModPoly, engel_exponent, p_part, product_annihilator, semple_search
from .lawkit import (
    build_Tk,
    check_law_on_subset,
    compose_law,
    derive_annihilator_f,
    is_conjugation_closed,
    width,
    word_values,
)
from .pcgroup import (
    burnside_generators,
    class_of_action,
    derived_series,
    derived_subgroup,
    exponent_mod,
    gamma,
    is_powerful,
    lower_central_series,
    nilpotency_class,
    power_subgroup,
    relative_class,
    subgroup_as_group,
)
from .sections import (
    AbelianSection,
    apply_poly,
    engel_mod_p_check,
    engel_power_check,
    enumerate_abelian_normal_sections,
    stratified_engel_check,
    verify_annihilation,
)
from .words import Law, PositiveLaw, Word

DEFAULT_SEMPLE_BOUNDS = (8, 32, 8)
# product annihilators above this degree are not searched for Semple data
MAX_H_DEGREE = 4096

PASSED = "passed"
REFUTED = "refuted"
EXHAUSTED = "exhausted"
EXIT_CODES = {PASSED: 0, REFUTED: 1, EXHAUSTED: 2}


def default_budget():
    env = os.environ.get("NILCERT_BUDGET")
    return int(env) if env else lawkit.LAW_BUDGET


@dataclass
class Check:
    name: str
    anchor: str
    inputs: dict
    verdict: str  # "pass", "fail" or "exhausted"
    witness: object = None

    def to_dict(self):
        return {
            "name": self.name,
            "anchor": self.anchor,
            "inputs": self.inputs,
            "verdict": self.verdict,
            "witness": self.witness,
        }


@dataclass
class Certificate:
    instance: dict
    checks: list = field(default_factory=list)
    quantities: dict = field(default_factory=dict)
    verdict: str = PASSED
    flags: dict = field(default_factory=dict)

    @property
    def failed_check(self):
        for c in self.checks:
            if c.verdict != "pass":
                return c
        return None

    @property
    def exit_code(self):
        return EXIT_CODES[self.verdict]

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {
            "instance": self.instance,
            "checks": [c.to_dict() for c in self.checks],
            "quantities": self.quantities,
            "verdict": self.verdict,
            "flags": self.flags,
        }

    def to_json(self):
        return json.dumps(_jsonable(self.to_dict()), indent=2, sort_keys=False)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if hasattr(x, "to_list"):
        return x.to_list()
    return x


class _Halt(Exception):
    pass


class _Recorder:
    def __init__(self, cert, G):
        self.cert = cert
        self.G = G

    def fmt(self, x):
        return self.G.format(int(x))

    def record(self, name, anchor, ok, inputs=None, witness=None, exhausted=False):
        verdict = "exhausted" if exhausted else ("pass" if ok else "fail")
        self.cert.checks.append(Check(name, anchor, _jsonable(inputs or {}), verdict,
                                      _jsonable(witness)))
        if exhausted:
            self.cert.verdict = EXHAUSTED
            raise _Halt()
        if not ok:
            self.cert.verdict = REFUTED
            raise _Halt()


def _poly(P):
    return P.to_list()


# -- metabelian engine ------------------------------------------------------------


def metabelian_engine(G, T, f, section, acting, level=1, m=None, semple_bounds=None,
                      rec=None, cert=None, label=""):
    """Engel data for the action of ``acting`` (a subgroup of G generated by
    the normal subset T) on the abelian section ``section``.

    ``f`` must annihilate the section under every t in T u T^-1.  Records
    the product annihilator h, r, (q, k, l), s, n and the checks derived
    from them; returns the quantities as a dict.
    """
    if cert is None:
        cert = Certificate({"group": G.name})
    if rec is None:
        rec = _Recorder(cert, G)
    semple_bounds = semple_bounds or DEFAULT_SEMPLE_BOUNDS
    A = section
    p = G.prime
    pre = f"{label}" if label else ""
    T = np.asarray(T)
    out = {"level": level, "section": A.describe(), "f_level": _poly(f)}
    Q = acting
    Qel = Q.elements()

    # elements of T commute pairwise modulo the section numerator
    Kset = A.K.elements()
    a, b = np.meshgrid(T, T, indexing="ij")
    comms = G.comm_arrays(a.ravel(), b.ravel())
    bad = np.nonzero(~np.isin(comms, Kset))[0]
    wit = None if not len(bad) else [rec.fmt(a.ravel()[bad[0]]), rec.fmt(b.ravel()[bad[0]])]
    rec.record(pre + "T commutes modulo A", "commuting hypothesis for the section",
               not len(bad), {"|T|": len(T), "section": A.describe()}, wit)

    res = verify_annihilation(A, f, T)
    rec.record(pre + "f annihilates A on T", "annihilator on T u T^-1",
               bool(res), {"f": _poly(f), "section": A.describe()},
               None if res else {"t": rec.fmt(res.witness[0]), "a": rec.fmt(res.witness[1])})

    if m is None:
        m = width(G, T)
    out["m"] = m

    # h = product annihilator; the smallest number of factors m' <= m for
    # which h kills A under every element of the acting group is used
    h = None
    for mm in range(1, max(m, 1) + 1):
        if f.degree**mm > MAX_H_DEGREE and mm > 1:
            break
        cand = product_annihilator(f, mm)
        if all(apply_poly(A, cand, int(g)).is_zero() for g in Qel):
            h, used = cand, mm
            break
    if h is None:
        rec.record(pre + "h annihilates A on the acting group", "product annihilator",
                   False, {"f": _poly(f), "m": m, "max_degree": MAX_H_DEGREE}, None,
                   exhausted=True)
    out["h"] = _poly(h)
    out["h_factors"] = used
    out["h_provenance"] = ("product annihilator with m factors" if used == m else
                           f"product annihilator with {used} of {m} factors, "
                           "verified on every element")
    rec.record(pre + "h annihilates A on the acting group", "product annihilator",
               True, {"f": _poly(f), "factors": used, "degree": h.degree,
                      "degree_bound": f.degree**m})

    c = max(class_of_action(A.K, A.L, Q), 1)
    ee = engel_exponent(h, c, p)
    r = ee.r
    out.update(c=c, r=r)
    bez = ee.u * ModPoly.x_minus_one_power(p, c) + ee.v * h.mod_p(p)
    rec.record(pre + "Bezout identity", "gcd with a power of X - 1",
               bez == ModPoly.x_minus_one_power(p, r),
               {"c": c, "p": p, "r": r, "u": ee.u.to_list(), "v": ee.v.to_list()})

    for g in Qel:
        res = engel_mod_p_check(A, int(g), r)
        if not res:
            rec.record(pre + "[A,_r g] <= A^p", "Engel condition modulo p", False,
                       {"r": r}, {"g": rec.fmt(g), "a": rec.fmt(res.witness)})
    rec.record(pre + "[A,_r g] <= A^p", "Engel condition modulo p", True,
               {"r": r, "elements": len(Qel)})

    if h.degree > MAX_H_DEGREE // 8:
        rec.record(pre + "semple search", "q X^l (X^k - 1)^l in J", False,
                   {"bounds": list(semple_bounds), "h_degree": h.degree}, None, exhausted=True)
    sem = semple_search(h, *semple_bounds)
    if sem is None:
        rec.record(pre + "semple search", "q X^l (X^k - 1)^l in J", False,
                   {"bounds": list(semple_bounds), "h": _poly(h)}, None, exhausted=True)
    cert_ok = sem.certificate.verify()
    rec.record(pre + "semple search", "q X^l (X^k - 1)^l in J", cert_ok,
               {"bounds": list(semple_bounds), "q": sem.q, "k": sem.k, "l": sem.ell},
               {"certificate": sem.certificate.to_dict()})
    s = p_part(sem.q, p)
    n = s * r + sem.ell
    out.update(q=sem.q, semple_k=sem.k, ell=sem.ell, s=s, n=n)
    rec.record(pre + "n = s r + l", "Engel length", n == s * r + sem.ell,
               {"s": s, "r": r, "l": sem.ell, "n": n})

    gens = burnside_generators(Q)
    out["burnside_generators"] = [rec.fmt(g) for g in gens]
    for g in gens:
        res = stratified_engel_check(A, g, s, r, sem.ell, sem.k)
        rec.record(pre + f"stratified Engel chain for {rec.fmt(g)}",
                   "[A^(p^s), g^k, ..., g^k] = 1 and descent", bool(res),
                   {"s": s, "r": r, "l": sem.ell, "k": sem.k},
                   None if res else {"step": res.step, "detail": str(res.witness)})
    for g in Qel:
        res = engel_power_check(A, int(g), n, sem.k)
        if not res:
            rec.record(pre + "[A,_n g^k] = 1", "Engel condition for k-th powers", False,
                       {"n": n, "k": sem.k}, {"g": rec.fmt(g), "a": rec.fmt(res.witness)})
    rec.record(pre + "[A,_n g^k] = 1", "Engel condition for k-th powers", True,
               {"n": n, "k": sem.k, "elements": len(Qel)})

    kk = sem.k
    powered = [G.pow(g, kk) for g in gens]
    S = G._close(tuple(powered) + A.K.basis)
    index = Q.order // S.order
    d = len(gens)
    rec.record(pre + "|Q : <g_i^k> A| <= k^d", "index of the powered subgroup",
               index <= kk**d, {"k": kk, "d": d, "index": index, "bound": kk**d})
    classes = []
    for g in powered:
        sub = G._close((g,) + A.K.basis)
        classes.append(relative_class(sub, A.L))
    out["index"] = index
    out["powered_subgroup_classes"] = classes
    out["powered_product_class"] = relative_class(S, A.L)
    return out


# -- general pipeline -----------------------------------------------------------------


def _instance_info(G, extra=None):
    info = {"group": G.name, "prime": G.prime, "order": G.order,
            "generators": list(G.names), "relations": G.relations_text()}
    if extra:
        info.update(extra)
    return info


def certify_general(G, T, law, v=None, budget=None, semple_bounds=None, sections="standard",
                    levels=None, f=None, instance=None, cert=None):
    """Run the general pipeline on (G, T, law[, v])."""
    budget = default_budget() if budget is None else budget
    semple_bounds = tuple(semple_bounds or DEFAULT_SEMPLE_BOUNDS)
    T = np.unique(np.asarray(T, dtype=np.int64))
    if cert is None:
        cert = Certificate(instance or _instance_info(G))
    cert.instance.setdefault("pipeline", "certify-general")
    cert.instance.setdefault("law", str(law))
    cert.instance.setdefault("subset", [G.format(int(x)) for x in T])
    if v is not None:
        cert.instance.setdefault("v", str(v))
    cert.instance.setdefault("options", {"budget": budget, "semple_bounds": list(semple_bounds),
                                         "sections": sections, "levels": levels})
    rec = _Recorder(cert, G)
    q = cert.quantities
    flags = cert.flags
    flags.setdefault("law_coverage", "proved")
    if G.prime == 2:
        flags["p=2 variant"] = True
    try:
        _general(G, T, law, v, budget, semple_bounds, sections, levels, f, rec, q, flags)
    except _Halt:
        pass
    return cert


def _general(G, T, law, v, budget, semple_bounds, sections, levels, f_override, rec, q, flags):
    whole = G.whole
    p = G.prime
    # (1) powerful
    Gp = power_subgroup(whole, 4 if p == 2 else p)
    Gd = derived_subgroup(whole)
    bad = [b for b in Gd.basis if b not in Gp]
    rec.record("is_powerful", "hypothesis: G powerful",
               not bad, {"p": p, "compare_with": "G^4" if p == 2 else "G^p"},
               None if not bad else {"commutator not in power subgroup": rec.fmt(bad[0])})

    # (2) T normal and generating, width
    normal = is_conjugation_closed(G, T)
    wit = None
    if not normal:
        for t in T:
            for g in G.generators():
                x = G.conj(int(t), g)
                if x not in set(int(y) for y in T):
                    wit = {"t": rec.fmt(t), "g": rec.fmt(g)}
                    break
            if wit:
                break
    rec.record("T normal", "hypothesis: T normal subset", normal, {"|T|": len(T)}, wit)
    gen = G.subgroup(int(x) for x in T if x).order == G.order
    rec.record("T generates G", "hypothesis: T generates G", gen, {"|T|": len(T)})
    m = width(G, T)
    d = len(burnside_generators(whole))
    q.update(d=d, m=m)
    rec.record("width of T", "finite width of T", True, {"m": m})

    # (3) law on T
    rec.record("law positive", "hypothesis: positive law", isinstance(law, PositiveLaw),
               {"law": str(law)})
    law_res = check_law_on_subset(G, T, law, budget)
    if law_res.coverage == "sampled":
        flags["law_coverage"] = "sampled"
    rec.record("law on T", "hypothesis: positive law on T", law_res.holds,
               {"law": str(law), "coverage": law_res.coverage, "tested": law_res.tested},
               None if law_res.holds else [rec.fmt(x) for x in law_res.counterexample])
    q["law_degree"] = law.degree

    # (4) v on G
    if v is not None:
        vres = check_law_on_subset(G, G.elements(), v, budget)
        if vres.coverage == "sampled":
            flags["law_coverage"] = "sampled"
        rec.record("v on G", "hypothesis: G satisfies v = 1", vres.holds,
                   {"v": str(v), "coverage": vres.coverage, "tested": vres.tested},
                   None if vres.holds else [rec.fmt(x) for x in vres.counterexample])

    # (5) f and the section family
    if f_override is None:
        try:
            f = derive_annihilator_f(law)
        except ValueError as exc:
            rec.record("derive f", "annihilator from the positive law", False,
                       {"law": str(law)}, str(exc))
        flags["f_provenance"] = "derived from the law"
    else:
        f = f_override
        flags["f_provenance"] = "supplied"
    q["f"] = _poly(f)
    rec.record("f monic of degree <= 2n", "annihilator degree", f.is_monic() and f.degree <= 2 * law.degree,
               {"degree": f.degree, "bound": 2 * law.degree})
    fam, coverage = enumerate_abelian_normal_sections(G, full=(sections == "full"))
    flags["section_coverage"] = coverage
    for A in fam:
        res = verify_annihilation(A, f, T)
        if not res:
            rec.record("f annihilates sections", "annihilator on every abelian normal section",
                       False, {"f": _poly(f), "section": A.describe()},
                       {"t": rec.fmt(res.witness[0]), "a": rec.fmt(res.witness[1])})
    rec.record("f annihilates sections", "annihilator on every abelian normal section", True,
               {"f": _poly(f), "sections": len(fam), "coverage": coverage})

    # (6) derived length and the bounded-exponent predicate
    ds = derived_series(whole)
    q["derived_length"] = len(ds) - 1
    if v is not None:
        q["black_k"] = _black_k(G)

    # (7) levels
    lcs = lower_central_series(whole)
    level_data = []
    k = 1
    while True:
        gk = gamma(whole, k)
        gk1 = gamma(whole, k + 1)
        gk1d = derived_subgroup(gk1)
        if levels is None and k > 1 and gamma(whole, k).is_trivial():
            break
        Tk = T if k == 1 else build_Tk(G, T, k).elements
        mk = width(G, Tk)
        bound = m * d ** (k - 1)
        rec.record(f"level {k}: width of T_k", "width of T_k at most m d^(k-1)", mk <= bound,
                   {"k": k, "width": mk, "bound": bound})
        if k == 1:
            A = AbelianSection(derived_subgroup(whole), derived_subgroup(derived_subgroup(whole)))
            acting = whole
            f_level = f
        else:
            A = AbelianSection(gk1, gk1d)
            acting = gk
            f_level = product_annihilator(f, 2)
            rec.record(f"level {k}: pairwise annihilator degree", "degree at most (2n)^2",
                       f_level.degree <= (2 * law.degree) ** 2,
                       {"degree": f_level.degree, "bound": (2 * law.degree) ** 2})
        data = metabelian_engine(G, Tk, f_level, A, acting, level=k, m=mk,
                                 semple_bounds=semple_bounds, rec=rec,
                                 label=f"level {k}: ")
        if k == 1:
            data.update(_nbf_level_one(G, A, data, rec))
        else:
            top = derived_subgroup(gk1)
            qclass = relative_class(gk, top)
            below = relative_class(whole, derived_subgroup(gk))
            total = relative_class(whole, top)
            data["hall"] = {"class_Q": qclass, "class_G_mod_gamma_k_derived": below,
                            "class_G_mod_gamma_k+1_derived": total}
            rec.record(f"level {k}: Hall data", "class of G/gamma_(k+1)(G)' from Q and G/gamma_k(G)'",
                       True, data["hall"])
        level_data.append(data)
        if levels is not None:
            if k >= levels:
                break
        elif gk1d.is_trivial():
            break
        k += 1
    q["levels"] = level_data
    q["observed_class"] = len(lcs) - 1
    rec.record("observed class", "G nilpotent", True, {"class": len(lcs) - 1})


def _nbf_level_one(G, A, data, rec):
    """Class data for G/G'' and the powered subgroup N = <g_i^k> G'."""
    gens = burnside_generators(G.whole)
    kk = data["semple_k"]
    N = G._close(tuple(G.pow(g, kk) for g in gens) + A.K.basis, G.generators())
    c = relative_class(N, A.L)
    e = exponent_mod(G.whole, N)
    cls = relative_class(G.whole, A.L)
    out = {"nbf": {"N_class": c, "exponent_G_mod_N": e, "class_G_mod_G2": cls}}
    rec.record("level 1: class of G/G''", "nilpotent-by-finite step", True, out["nbf"])
    return out


# -- verbal pipeline ----------------------------------------------------------------


def certify_verbal(G, w, law, budget=None, semple_bounds=None, sections="standard",
                   instance=None):
    budget = default_budget() if budget is None else budget
    cert = Certificate(instance or _instance_info(G))
    cert.instance.setdefault("pipeline", "certify-verbal")
    cert.instance.setdefault("word", str(w))
    cert.instance.setdefault("law", str(law))
    rec = _Recorder(cert, G)
    q = cert.quantities
    cert.flags.setdefault("law_coverage", "proved")
    try:
        Gw = word_values(G, w, budget)
        if Gw.sampled:
            cert.flags["word_values_coverage"] = "sampled"
        wG = Gw.subgroup()
        q["|G_w|"] = len(Gw)
        q["|w(G)|"] = wG.order
        q["G_w"] = [G.format(int(x)) for x in Gw.elements]
        rec.record("G_w normal", "word values form a normal subset", Gw.normal or Gw.sampled,
                   {"|G_w|": len(Gw)})
        mw = width(G, Gw.elements)
        q["width_G_w"] = mw
        rec.record("width of G_w", "finite width of G_w", True, {"m": mw})
        res = check_law_on_subset(G, Gw, law, budget)
        rec.record("law on G_w", "hypothesis: positive law on G_w", res.holds,
                   {"law": str(law), "coverage": res.coverage, "tested": res.tested},
                   None if res.holds else [G.format(x) for x in res.counterexample])
        K, embed = subgroup_as_group(wG, name=f"w({G.name})")
        ok = is_powerful(K.whole)
        rec.record("w(G) powerful", "hypothesis: w(G) powerful", ok, {"order": K.order})
        v = compose_law(w, law)
        q["v"] = str(v)
        vres = check_law_on_subset(G, G.elements(), v, budget)
        if vres.coverage == "sampled":
            cert.flags["law_coverage"] = "sampled"
        rec.record("v on G", "composed law v = 1 on G", vres.holds,
                   {"v": str(v), "coverage": vres.coverage, "tested": vres.tested},
                   None if vres.holds else [G.format(x) for x in vres.counterexample])
        back = {int(x): c for c, x in enumerate(embed)}
        Tk = np.array(sorted(back[int(x)] for x in Gw.elements), dtype=np.int64)
        q["observed_class_w(G)"] = nilpotency_class(wG)
        cert.instance["w(G)"] = {"order": K.order, "generators": list(K.names),
                                 "relations": K.relations_text()}
    except _Halt:
        return cert
    sub = certify_general(K, Tk, law, v=v, budget=budget, semple_bounds=semple_bounds,
                          sections=sections, instance={"group": K.name})
    for c in sub.checks:
        c.name = "w(G): " + c.name
        cert.checks.append(c)
    q["w(G)"] = sub.quantities
    cert.flags.update({k: v for k, v in sub.flags.items() if k != "law_coverage"})
    if sub.flags.get("law_coverage") == "sampled":
        cert.flags["law_coverage"] = "sampled"
    cert.verdict = sub.verdict
    return cert


# -- standalone checks ---------------------------------------------------------


def _normal_check(G, N):
    for b in N.basis:
        for g in G.generators():
            if G.conj(b, g) not in N:
                raise ValueError("N is not normal in G")


def hall_check(G, N):
    """(k, c, observed class) with k = class(N) and c = class(G/N')."""
    _normal_check(G, N)
    k = relative_class(N, G.trivial)
    c = relative_class(G.whole, derived_subgroup(N))
    return {"k": k, "c": c, "class": nilpotency_class(G.whole)}


def nbf_powerful_check(G, N):
    """Checks of the nilpotent-by-finite argument for powerful G."""
    _normal_check(G, N)
    cert = Certificate(_instance_info(G, {"pipeline": "nbf", "N": [G.format(b) for b in N.basis]}))
    rec = _Recorder(cert, G)
    q = cert.quantities
    if G.prime == 2:
        cert.flags["p=2 variant"] = True
    try:
        rec.record("is_powerful", "hypothesis: G powerful", is_powerful(G.whole), {"p": G.prime})
        c = relative_class(N, G.trivial)
        e = exponent_mod(G.whole, N)
        q.update(c=c, e=e)
        Ge = power_subgroup(G.whole, e)
        ok = gamma(Ge, c + 1).is_trivial()
        rec.record("gamma_(c+1)(G^e) = 1", "G^e has class at most c", ok, {"c": c, "e": e})
        E = power_subgroup(G.whole, e ** (c + 1))
        cur = E
        for _ in range(c):
            cur = G.commutator(cur, G.whole)
        rec.record("[G^(e^(c+1)), G, ..., G] = 1", "long commutator", cur.is_trivial(),
                   {"c": c, "e^(c+1)": e ** (c + 1)})
        lcs = lower_central_series(G.whole)
        k = 0
        while not gamma(G.whole, k + 1) <= E:
            k += 1
        q["k"] = k
        cls = len(lcs) - 1
        q["class"] = cls
        rec.record("class <= k + c", "class bound", cls <= k + c, {"k": k, "c": c, "class": cls})
        powerful_chain = all(
            gamma(G.whole, i + 1) <= power_subgroup(G.whole, G.prime**i) for i in range(1, cls + 1)
        )
        rec.record("gamma_(i+1) <= G^(p^i)", "powerful structure", powerful_chain, {})
    except _Halt:
        pass
    return cert


def _black_k(G):
    whole = G.whole
    k = 1
    while True:
        P = power_subgroup(whole, factorial(k))
        D = derived_subgroup(P)
        if gamma(D, k).is_trivial():
            return k
        k += 1


def black_check(G, v, budget=None):
    """Least k with gamma_k((G^(k!))') = 1, after checking v = 1 on G."""
    res = check_law_on_subset(G, G.elements(), v, default_budget() if budget is None else budget)
    if not res.holds:
        raise lawkit.PreconditionError("v on G", "the law does not hold on G",
                                       [G.format(x) for x in res.counterexample])
    return _black_k(G)


# -- replay --------------------------------------------------------------------------


def replay(report):
    """Re-run the pipeline recorded in a certificate dict; returns the new
    certificate dict."""
    from .instance import parse_instance
    from .words import Word

    inst = report["instance"]
    parsed = parse_instance(inst["source"])
    G = parsed.group()
    opts = inst.get("options", {})
    if inst["pipeline"] == "certify-general":
        T = [parsed.element(x) for x in inst["subset"]]
        law = Law.parse(inst["law"])
        v = Word.parse(inst["v"]) if inst.get("v") else None
        cert = certify_general(G, T, law, v, budget=opts.get("budget"),
                               semple_bounds=opts.get("semple_bounds"),
                               sections=opts.get("sections", "standard"),
                               levels=opts.get("levels"),
                               f=IntPoly(inst["f"]) if inst.get("f") else None,
                               instance={k: v for k, v in inst.items()})
    elif inst["pipeline"] == "certify-verbal":
        cert = certify_verbal(G, Word.parse(inst["word"]), Law.parse(inst["law"]),
                              budget=opts.get("budget"), semple_bounds=opts.get("semple_bounds"),
                              sections=opts.get("sections", "standard"),
                              instance={k: v for k, v in inst.items()})
    else:
        raise ValueError(f"cannot replay pipeline {inst['pipeline']}")
    return json.loads(cert.to_json())
