"""Builtin algebra presentations and presentation JSON I/O.

Four presentations ship with the package:

* ``affine_new``      -- the affine algebra on c, K, E0, E1, F0, F1 with c
                         central and invertible (the change-of-generators form).
* ``affine_original`` -- the textbook presentation on K0, K1, E_i, F_i.
* ``loop``            -- the level-zero quotient (c = 1) on k, e_i, f_i.
* ``cz``              -- the group algebra of Z on the single generator c.

The mixed straightening data F1*E0 = q^-1 E0*F1 and F0*E1 = q^-1 E1*F0 (and the
K-conjugations of the F generators) do not appear verbatim in the defining
relation set of ``affine_new``; they are consequences of the original relations
under the change of generators.  ``derive_mixed_swap_factors`` recomputes them
inside ``affine_original`` so the frozen values can be cross-checked.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import StructureError
from .ncalg import GeneratorSymbol, NCPoly, Presentation, word_from_runs
from .qscalar import ONE, Q, QINV, LaurentPoly, QScalar, qint

# 1/(q - q^-1), the universal denominator of the E/F straightening tails
_KAPPA = QScalar(LaurentPoly.const(1), LaurentPoly({1: 1, -1: -1}))


def _serre_relator(pres, x, y):
    """x^3 y - [3] x^2 y x + [3] x y x^2 - y x^3."""
    three = qint(3)
    return pres.poly(
        {
            ((x, 3), (y, 1)): ONE,
            ((x, 2), (y, 1), (x, 1)): -three,
            ((x, 1), (y, 1), (x, 2)): three,
            ((y, 1), (x, 3)): -ONE,
        }
    )


def _skew_primitive(pres, name, group_like_runs, left=False):
    """Coproduct table entry x (x) t + 1 (x) x, or x (x) 1 + s (x) x when left."""
    x = pres.word([(name, 1)])
    t = word_from_runs(group_like_runs, pres)
    if left:
        return ((x, (), ONE), (t, x, ONE))
    return ((x, t, ONE), ((), x, ONE))


def _group_like(pres, name):
    w = pres.word([(name, 1)])
    return ((w, w, ONE),)


def _build_affine_new():
    pres = Presentation(
        "affine_new",
        [
            GeneratorSymbol("c", True, "central"),
            GeneratorSymbol("K", True, "cartan"),
            GeneratorSymbol("E0", False, "raising", 1),
            GeneratorSymbol("E1", False, "raising"),
            GeneratorSymbol("F0", False, "lowering", 1),
            GeneratorSymbol("F1", False, "lowering"),
        ],
    )
    for g in ("K", "E0", "E1", "F0", "F1"):
        pres.add_swap(g, "c", ONE)
    pres.add_swap("E0", "K", Q)
    pres.add_swap("E1", "K", QINV)
    pres.add_swap("F0", "K", QINV)
    pres.add_swap("F1", "K", Q)
    # mixed relations, derived from the original presentation (see module docstring)
    pres.add_swap("F1", "E0", QINV)
    pres.add_swap("F0", "E1", QINV)
    pres.add_straighten(
        "F0",
        "E0",
        pres.poly(
            {
                (("E0", 1), ("F0", 1)): Q,
                (): _KAPPA,
                (("c", 2), ("K", -2)): -_KAPPA,
            }
        ),
    )
    pres.add_straighten(
        "F1",
        "E1",
        pres.poly(
            {
                (("E1", 1), ("F1", 1)): Q,
                (): _KAPPA,
                (("K", 2),): -_KAPPA,
            }
        ),
    )
    pres.set_serre([_serre_relator(pres, "E0", "E1"), _serre_relator(pres, "F0", "F1")])
    pres.set_hopf("c", _group_like(pres, "c"), ONE)
    pres.set_hopf("K", _group_like(pres, "K"), ONE)
    zero = QScalar.from_int(0)
    pres.set_hopf("E0", _skew_primitive(pres, "E0", [("c", 1), ("K", -1)]), zero)
    pres.set_hopf("E1", _skew_primitive(pres, "E1", [("K", 1)]), zero)
    pres.set_hopf("F0", _skew_primitive(pres, "F0", [("c", 1), ("K", -1)]), zero)
    pres.set_hopf("F1", _skew_primitive(pres, "F1", [("K", 1)]), zero)
    return pres.finalize()


def _build_loop():
    pres = Presentation(
        "loop",
        [
            GeneratorSymbol("k", True, "cartan"),
            GeneratorSymbol("e0", False, "raising", 1),
            GeneratorSymbol("e1", False, "raising"),
            GeneratorSymbol("f0", False, "lowering", 1),
            GeneratorSymbol("f1", False, "lowering"),
        ],
    )
    pres.add_swap("e0", "k", Q)
    pres.add_swap("e1", "k", QINV)
    pres.add_swap("f0", "k", QINV)
    pres.add_swap("f1", "k", Q)
    pres.add_swap("f1", "e0", QINV)
    pres.add_swap("f0", "e1", QINV)
    pres.add_straighten(
        "f0",
        "e0",
        pres.poly(
            {
                (("e0", 1), ("f0", 1)): Q,
                (): _KAPPA,
                (("k", -2),): -_KAPPA,
            }
        ),
    )
    pres.add_straighten(
        "f1",
        "e1",
        pres.poly(
            {
                (("e1", 1), ("f1", 1)): Q,
                (): _KAPPA,
                (("k", 2),): -_KAPPA,
            }
        ),
    )
    pres.set_serre([_serre_relator(pres, "e0", "e1"), _serre_relator(pres, "f0", "f1")])
    zero = QScalar.from_int(0)
    pres.set_hopf("k", _group_like(pres, "k"), ONE)
    pres.set_hopf("e0", _skew_primitive(pres, "e0", [("k", -1)]), zero)
    pres.set_hopf("e1", _skew_primitive(pres, "e1", [("k", 1)]), zero)
    pres.set_hopf("f0", _skew_primitive(pres, "f0", [("k", -1)]), zero)
    pres.set_hopf("f1", _skew_primitive(pres, "f1", [("k", 1)]), zero)
    return pres.finalize()


def _build_affine_original():
    pres = Presentation(
        "affine_original",
        [
            GeneratorSymbol("K0", True, "cartan"),
            GeneratorSymbol("K1", True, "cartan"),
            GeneratorSymbol("E0", False, "raising", 1),
            GeneratorSymbol("E1", False, "raising"),
            GeneratorSymbol("F0", False, "lowering", 1),
            GeneratorSymbol("F1", False, "lowering"),
        ],
    )
    pres.add_swap("K1", "K0", ONE)
    # K_i E_i = q E_i K_i, K_i E_{i+1} = q^-1 E_{i+1} K_i and the F analogues,
    # rewritten with the E/F letter on the left
    pres.add_swap("E0", "K0", QINV)
    pres.add_swap("E0", "K1", Q)
    pres.add_swap("E1", "K0", Q)
    pres.add_swap("E1", "K1", QINV)
    pres.add_swap("F0", "K0", Q)
    pres.add_swap("F0", "K1", QINV)
    pres.add_swap("F1", "K0", QINV)
    pres.add_swap("F1", "K1", Q)
    pres.add_swap("F1", "E0", ONE)
    pres.add_swap("F0", "E1", ONE)
    pres.add_straighten(
        "F0",
        "E0",
        pres.poly(
            {
                (("E0", 1), ("F0", 1)): ONE,
                (("K0", 1),): -_KAPPA,
                (("K0", -1),): _KAPPA,
            }
        ),
    )
    pres.add_straighten(
        "F1",
        "E1",
        pres.poly(
            {
                (("E1", 1), ("F1", 1)): ONE,
                (("K1", 1),): -_KAPPA,
                (("K1", -1),): _KAPPA,
            }
        ),
    )
    pres.set_serre([_serre_relator(pres, "E0", "E1"), _serre_relator(pres, "F0", "F1")])
    zero = QScalar.from_int(0)
    pres.set_hopf("K0", _group_like(pres, "K0"), ONE)
    pres.set_hopf("K1", _group_like(pres, "K1"), ONE)
    pres.set_hopf("E0", _skew_primitive(pres, "E0", [("K0", 1)]), zero)
    pres.set_hopf("E1", _skew_primitive(pres, "E1", [("K1", 1)]), zero)
    pres.set_hopf("F0", _skew_primitive(pres, "F0", [("K0", -1)], left=True), zero)
    pres.set_hopf("F1", _skew_primitive(pres, "F1", [("K1", -1)], left=True), zero)
    return pres.finalize()


def _build_cz():
    pres = Presentation("cz", [GeneratorSymbol("c", True, "central")])
    pres.set_hopf("c", _group_like(pres, "c"), ONE)
    return pres.finalize()


_BUILDERS = {
    "affine_new": _build_affine_new,
    "affine_original": _build_affine_original,
    "loop": _build_loop,
    "cz": _build_cz,
}


@lru_cache(maxsize=None)
def builtin_presentation(name):
    """The shared immutable instance of a builtin presentation."""
    builder = _BUILDERS.get(name)
    if builder is None:
        raise LookupError(
            f"unknown presentation {name!r}; expected one of {sorted(_BUILDERS)}"
        )
    from .hopf import derive_antipode

    return derive_antipode(builder())


# -- change of generators ------------------------------------------------------

_CHANGE_IMAGES = {
    "E0": (("E0", 1),),
    "E1": (("E1", 1),),
    "K1": (("K", 1),),
    "K0": (("c", 1), ("K", -1)),
    "F1": (("K", -1), ("F1", 1)),
    "F0": (("c", -1), ("K", 1), ("F0", 1)),
}


def change_generators(p):
    """Map an element of affine_original into affine_new.

    Substitutes E_i -> E_i, K_1 -> K, K_0 -> c K^-1, F_1 -> K^-1 F_1 and
    F_0 -> c^-1 K F_0, then normal-orders.  Every relator of the original
    presentation maps to zero.
    """
    src = builtin_presentation("affine_original")
    dst = builtin_presentation("affine_new")
    assert p.pres is src
    out = dst.zero()
    for word, coeff in p.terms.items():
        runs = []
        for name, exp in word:
            img = _CHANGE_IMAGES[name]
            if exp < 0:
                img = tuple((n, -e) for n, e in reversed(img))
                exp = -exp
            runs.extend(img * exp)
        out = out + dst.mono(runs, coeff)
    return out.normal_form()


def original_relators():
    """All defining relators of affine_original as elements (LHS - RHS)."""
    pres = builtin_presentation("affine_original")
    kappa = _KAPPA
    rel = []
    pairs = {"E": ("E0", "E1"), "F": ("F0", "F1"), "K": ("K0", "K1")}
    ks = pairs["K"]
    # K_i X = q^(+-1) X K_i  relations
    for i, k in enumerate(ks):
        for j, e in enumerate(pairs["E"]):
            f = Q if i == j else QINV
            rel.append(pres.mono([(k, 1), (e, 1)]) - pres.mono([(e, 1), (k, 1)], f))
        for j, fgen in enumerate(pairs["F"]):
            f = QINV if i == j else Q
            rel.append(
                pres.mono([(k, 1), (fgen, 1)]) - pres.mono([(fgen, 1), (k, 1)], f)
            )
    rel.append(pres.mono([("K0", 1), ("K1", 1)]) - pres.mono([("K1", 1), ("K0", 1)]))
    # [E_i, F_j] = delta_ij (K_i - K_i^-1)/(q - q^-1)
    for i, e in enumerate(pairs["E"]):
        for j, fgen in enumerate(pairs["F"]):
            com = pres.mono([(e, 1), (fgen, 1)]) - pres.mono([(fgen, 1), (e, 1)])
            if i == j:
                k = ks[i]
                com = com - (pres.mono([(k, 1)], kappa) - pres.mono([(k, -1)], kappa))
            rel.append(com)
    rel.extend(pres.serre_relators)
    return rel


def derive_mixed_swap_factors():
    """Recompute the affine_new mixed swap factors inside affine_original.

    For each pair of new generators (x, y) with x y = lambda * y x expected,
    express both as words in the original presentation, normal-order both
    products there, and read off the proportionality factor.
    """
    src = builtin_presentation("affine_original")
    new_words = {
        "K": (("K1", 1),),
        "E0": (("E0", 1),),
        "E1": (("E1", 1),),
        "F0": (("K0", 1), ("F0", 1)),
        "F1": (("K1", 1), ("F1", 1)),
    }
    out = {}
    for left, right in [("F1", "E0"), ("F0", "E1"), ("F0", "K"), ("F1", "K"),
                        ("E0", "K"), ("E1", "K")]:
        lw, rw = new_words[left], new_words[right]
        xy = src.normal_form(src.mono(lw + rw))
        yx = src.normal_form(src.mono(rw + lw))
        if len(xy.terms) != 1 or len(yx.terms) != 1:
            raise StructureError(f"pair ({left},{right}) is not a pure commutation")
        (w1, c1), = xy.terms.items()
        (w2, c2), = yx.terms.items()
        if w1 != w2:
            raise StructureError(f"pair ({left},{right}) mixes words: {w1} vs {w2}")
        out[(left, right)] = c1 / c2
    return out


# -- presentation JSON I/O -----------------------------------------------------


def export_presentation(pres):
    """JSON-ready dict describing a presentation, round-trippable by load."""
    from .formatting import format_poly, format_scalar, format_word

    data = {
        "name": pres.name,
        "alphabet": [
            {
                "name": g.name,
                "invertible": g.invertible,
                "sort": g.sort,
                "gradeWeight": g.grade_weight,
            }
            for g in pres.alphabet
        ],
        "swapRules": [
            {"left": l, "right": r, "factor": format_scalar(f)}
            for (l, r), f in sorted(pres.swap_rules.items())
        ],
        "straightenRules": [
            {"pattern": [l, r], "result": format_poly(rhs)}
            for (l, r), rhs in sorted(pres.straighten_rules.items())
        ],
        "serre": [format_poly(rel) for rel in pres.serre_relators],
        "hopf": {},
    }
    for g in pres.alphabet:
        entry = pres.hopf.get(g.name)
        if entry is None:
            continue
        data["hopf"][g.name] = {
            "coproduct": [
                {
                    "left": format_word(lw),
                    "right": format_word(rw),
                    "coeff": format_scalar(c),
                }
                for lw, rw, c in entry.coproduct
            ],
            "counit": format_scalar(entry.counit),
            "antipode": None if entry.antipode is None else format_poly(entry.antipode),
        }
    return data


def load_presentation(data):
    """Build a presentation from the JSON schema produced by export_presentation."""
    from .parser import parse_expression, parse_scalar

    pres = Presentation(
        data.get("name", "user"),
        [
            GeneratorSymbol(
                g["name"], bool(g["invertible"]), g["sort"], int(g.get("gradeWeight", 0))
            )
            for g in data["alphabet"]
        ],
    )

    def _as_word(text):
        p = parse_expression(text, pres)
        if len(p.terms) != 1:
            raise StructureError(f"expected a monomial, got {text!r}")
        (w, c), = p.terms.items()
        if c != ONE:
            raise StructureError(f"expected unit coefficient in {text!r}")
        return w

    for rule in data.get("swapRules", ()):
        pres.add_swap(rule["left"], rule["right"], parse_scalar(rule["factor"]))
    for rule in data.get("straightenRules", ()):
        l, r = rule["pattern"]
        pres.add_straighten(l, r, parse_expression(rule["result"], pres))
    pres.set_serre([parse_expression(t, pres) for t in data.get("serre", ())])
    antipodes = {}
    for name, entry in data.get("hopf", {}).items():
        cop = tuple(
            (_as_word(t["left"]), _as_word(t["right"]), parse_scalar(t["coeff"]))
            for t in entry["coproduct"]
        )
        pres.set_hopf(name, cop, parse_scalar(entry["counit"]))
        if entry.get("antipode"):
            antipodes[name] = entry["antipode"]
    pres.finalize()
    for name, text in antipodes.items():
        pres.hopf[name].antipode = parse_expression(text, pres)
    if pres.hopf and not antipodes:
        from .hopf import derive_antipode

        derive_antipode(pres)
    return pres
