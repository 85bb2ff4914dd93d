"""Coproduct, counit and antipode extended from generator tables to the whole
algebra, tensor-power elements, and the Hopf axiom sweep.

The coproduct extends multiplicatively (an algebra map), the antipode
anti-multiplicatively; both are linear.  Tensor legs are normal-ordered
eagerly so equality of tensors is syntactic.
"""

from __future__ import annotations

from .errors import StructureError
from .ncalg import NCPoly, word_concat, word_degree
from .qscalar import ONE, QScalar
from .reports import Report

ZERO_SCALAR = QScalar.from_int(0)


class TensorPoly:
    """QScalar-linear combination of tuples of normal-form words, one leg per
    presentation in `presentations`."""

    __slots__ = ("presentations", "terms")

    def __init__(self, presentations, terms=None):
        self.presentations = tuple(presentations)
        t = {}
        if terms:
            for legs, c in terms.items():
                if c:
                    t[legs] = c
        self.terms = t

    @property
    def rank(self):
        return len(self.presentations)

    @classmethod
    def unit(cls, presentations):
        rank = len(tuple(presentations))
        return cls(presentations, {((),) * rank: ONE})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        assert self.presentations == other.presentations
        t = dict(self.terms)
        for legs, c in other.terms.items():
            s = t.get(legs)
            s = c if s is None else s + c
            if s:
                t[legs] = s
            elif legs in t:
                del t[legs]
        return TensorPoly(self.presentations, t)

    def __neg__(self):
        return TensorPoly(self.presentations, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        if not f:
            return TensorPoly(self.presentations)
        return TensorPoly(self.presentations, {k: c * f for k, c in self.terms.items()})

    def __mul__(self, other):
        """Legwise product with eager normal ordering."""
        assert self.presentations == other.presentations
        press = self.presentations
        out = {}
        for legs1, c1 in self.terms.items():
            for legs2, c2 in other.terms.items():
                base = c1 * c2
                expanded = [(ONE, ())]
                for i, pres in enumerate(press):
                    nf = pres.word_nf(word_concat(legs1[i], legs2[i], pres))
                    expanded = [
                        (c * bc, legs + (bw,))
                        for c, legs in expanded
                        for bw, bc in nf.items()
                    ]
                for c, legs in expanded:
                    s = out.get(legs)
                    s = base * c if s is None else s + base * c
                    if s:
                        out[legs] = s
                    elif legs in out:
                        del out[legs]
        return TensorPoly(press, out)

    def __eq__(self, other):
        return (
            isinstance(other, TensorPoly)
            and self.presentations == other.presentations
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.presentations, tuple(sorted(self.terms.items(), key=repr))))

    def apply_leg(self, i, fn, new_presentations):
        """Replace leg i of every term by its expansion under fn.

        fn maps a word to a {legs-tuple: QScalar} dict (always tuples of words,
        even for a single replacement leg); the result legs are spliced in
        place of leg i.
        """
        out = {}
        for legs, c in self.terms.items():
            for repl, rc in fn(legs[i]).items():
                key = legs[:i] + repl + legs[i + 1 :]
                s = out.get(key)
                s = c * rc if s is None else s + c * rc
                if s:
                    out[key] = s
                elif key in out:
                    del out[key]
        return TensorPoly(new_presentations, out)

    def __repr__(self):
        return f"TensorPoly({[p.name for p in self.presentations]}, {self.terms!r})"


def _tensor_square_cache(pres):
    return pres._ext_caches.setdefault("delta_word", {})


def _delta_word(pres, word):
    """Coproduct of a single word as {(left, right): QScalar} (cached)."""
    cache = _tensor_square_cache(pres)
    hit = cache.get(word)
    if hit is not None:
        return hit
    acc = {((), ()): ONE}
    for name, exp in word:
        entry = pres.hopf.get(name)
        if entry is None:
            raise StructureError(f"generator {name} missing from hopf table of {pres.name}")
        if exp >= 0:
            step = {(lw, rw): c for lw, rw, c in entry.coproduct}
            reps = exp
        else:
            if not pres.is_group_like(name):
                raise StructureError(
                    f"negative power of non-group-like generator {name} in coproduct"
                )
            step = {(((name, -1),), ((name, -1),)): ONE}
            reps = -exp
        for _ in range(reps):
            nxt = {}
            for (l1, r1), c1 in acc.items():
                for (l2, r2), c2 in step.items():
                    base = c1 * c2
                    lnf = pres.word_nf(word_concat(l1, l2, pres))
                    rnf = pres.word_nf(word_concat(r1, r2, pres))
                    for lw, lc in lnf.items():
                        for rw, rc in rnf.items():
                            key = (lw, rw)
                            s = nxt.get(key)
                            add = base * lc * rc
                            s = add if s is None else s + add
                            if s:
                                nxt[key] = s
                            elif key in nxt:
                                del nxt[key]
            acc = nxt
    cache[word] = acc
    return acc


def coproduct(p, pres=None):
    """Algebra-map extension of the generator coproduct table."""
    pres = pres or p.pres
    out = {}
    for w, c in pres.normal_form(p).terms.items():
        for legs, dc in _delta_word(pres, w).items():
            s = out.get(legs)
            s = c * dc if s is None else s + c * dc
            if s:
                out[legs] = s
            elif legs in out:
                del out[legs]
    return TensorPoly((pres, pres), out)


def iterated_coproduct(p, pres=None, n=1):
    """(Delta tensor id^(n-1)) ... Delta p, a rank n+1 tensor."""
    pres = pres or p.pres
    if n < 1:
        raise ValueError("iterated coproduct needs n >= 1")
    t = coproduct(p, pres)
    for _ in range(n - 1):
        t = t.apply_leg(0, lambda w: _delta_word(pres, w), (pres,) + t.presentations)
    return t


def _counit_word(pres, word):
    val = ONE
    for name, exp in word:
        entry = pres.hopf.get(name)
        if entry is None:
            raise StructureError(
                f"generator {name} missing from hopf table of {pres.name}"
            )
        if entry.counit == ONE:
            continue
        if not entry.counit:
            return ZERO_SCALAR
        val = val * entry.counit ** exp
    return val


def counit(p, pres=None):
    """Algebra-map counit; group-likes go to 1, skew-primitives to 0."""
    pres = pres or p.pres
    total = ZERO_SCALAR
    for w, c in pres.normal_form(p).terms.items():
        total = total + c * _counit_word(pres, w)
    return total


def _antipode_word(pres, word):
    """Antipode of a single word as a normal-form {word: coeff} dict (cached)."""
    cache = pres._ext_caches.setdefault("antipode_word", {})
    hit = cache.get(word)
    if hit is not None:
        return hit
    acc = pres.one()
    for name, exp in reversed(word):
        if pres.is_group_like(name):
            factor = NCPoly(pres, {((name, -exp),): ONE})
            acc = pres.multiply(acc, factor)
            continue
        entry = pres.hopf.get(name)
        if entry is None or entry.antipode is None:
            raise StructureError(
                f"antipode of {name} not available in {pres.name}; run derive_antipode"
            )
        for _ in range(exp):
            acc = pres.multiply(acc, entry.antipode)
    cache[word] = acc.terms
    return acc.terms


def antipode(p, pres=None):
    """Anti-algebra-map extension of the generator antipode table."""
    pres = pres or p.pres
    out = pres.zero()
    for w, c in pres.normal_form(p).terms.items():
        out = out + NCPoly(pres, dict(_antipode_word(pres, w))).scale(c)
    return out


def _group_like_word_inverse(pres, word):
    return tuple((n, -e) for n, e in reversed(word))


def derive_antipode(pres):
    """Fill the antipode table from the coproduct shapes and verify the axiom.

    Group-like g gets g^-1.  A skew-primitive with Delta x = x (x) t + 1 (x) x
    gets -x t^-1; the left-handed shape Delta x = x (x) 1 + s (x) x gets
    -s^-1 x.  Any other shape is rejected.
    """
    for g in pres.alphabet:
        entry = pres.hopf.get(g.name)
        if entry is None:
            raise StructureError(f"generator {g.name} has no coproduct in {pres.name}")
        x = ((g.name, 1),)
        if pres.is_group_like(g.name):
            entry.antipode = NCPoly(pres, {((g.name, -1),): ONE})
        elif len(entry.coproduct) == 2:
            terms = {(lw, rw): c for lw, rw, c in entry.coproduct}
            right_t = None
            left_s = None
            for (lw, rw), c in terms.items():
                if c != ONE:
                    raise StructureError(
                        f"skew-primitive coproduct of {g.name} has non-unit coefficient"
                    )
                if lw == x and rw != x:
                    right_t = rw
                elif rw == x and lw != x:
                    left_s = lw
                else:
                    raise StructureError(
                        f"unsupported coproduct shape for {g.name} in {pres.name}"
                    )
            if right_t is None or left_s is None:
                raise StructureError(
                    f"unsupported coproduct shape for {g.name} in {pres.name}"
                )
            for t in (right_t, left_s):
                for name, _ in t:
                    if not pres.is_group_like(name):
                        raise StructureError(
                            f"coproduct companion of {g.name} is not group-like"
                        )
            if left_s == () and right_t != ():
                w = word_concat(x, _group_like_word_inverse(pres, right_t), pres)
            elif right_t == () and left_s != ():
                w = word_concat(_group_like_word_inverse(pres, left_s), x, pres)
            else:
                raise StructureError(
                    f"unsupported coproduct shape for {g.name} in {pres.name}"
                )
            entry.antipode = NCPoly(pres, {w: -ONE})
        else:
            raise StructureError(
                f"unsupported coproduct shape for {g.name} in {pres.name}"
            )
        lhs = _antipode_convolution(pres, pres.gen(g.name), left=True)
        rhs = _antipode_convolution(pres, pres.gen(g.name), left=False)
        target = pres.scalar(entry.counit)
        if not (lhs - target).is_zero() or not (rhs - target).is_zero():
            raise StructureError(f"antipode axiom fails on generator {g.name}")
    pres._ext_caches.pop("antipode_word", None)
    return pres


def _antipode_convolution(pres, p, left):
    """m(S (x) id)Delta p when left, else m(id (x) S)Delta p."""
    out = pres.zero()
    for w, c in pres.normal_form(p).terms.items():
        for (lw, rw), dc in _delta_word(pres, w).items():
            if left:
                part = pres.multiply(
                    NCPoly(pres, dict(_antipode_word(pres, lw))),
                    NCPoly(pres, {rw: ONE}),
                )
            else:
                part = pres.multiply(
                    NCPoly(pres, {lw: ONE}),
                    NCPoly(pres, dict(_antipode_word(pres, rw))),
                )
            out = out + part.scale(c * dc)
    return out


def verify_hopf(pres, max_degree):
    """Axiom sweep: Delta/counit/antipode respect every rule, coassociativity,
    counit laws and the antipode axiom on all basis words up to max_degree."""
    from .formatting import format_poly, format_tensor

    report = Report("hopf", max_degree)

    # structure maps evaluated letterwise on the raw (unordered) pattern must
    # agree with their value on the rule's right-hand side
    rules = [
        ((l, r), pres.mono([(r, 1), (l, 1)], f))
        for (l, r), f in sorted(pres.swap_rules.items())
    ]
    rules += [((l, r), rhs) for (l, r), rhs in sorted(pres.straighten_rules.items())]
    for (l, r), rhs in rules:
        raw = ((l, 1), (r, 1))
        label = f"{l}*{r}"
        report.add_case()
        dl = TensorPoly((pres, pres), _delta_word(pres, raw))
        dr = coproduct(rhs, pres)
        if dl != dr:
            report.fail(f"Delta across {label}", format_tensor(dl), format_tensor(dr))
        report.add_case()
        el, er = _counit_word(pres, raw), counit(rhs, pres)
        if el != er:
            report.fail(f"counit across {label}", repr(el), repr(er))
        report.add_case()
        sl = NCPoly(pres, dict(_antipode_word(pres, raw)))
        sr = antipode(rhs, pres)
        if not (sl - sr).is_zero():
            report.fail(f"antipode across {label}", format_poly(sl), format_poly(sr))

    for w in pres.basis_words(max_degree):
        p = NCPoly(pres, {w: ONE})
        report.add_case()
        left = iterated_coproduct(p, pres, 2)
        d = coproduct(p, pres)
        right = d.apply_leg(1, lambda u: _delta_word(pres, u), (pres,) * 3)
        if left != right:
            report.fail(f"coassociativity at {w}", format_tensor(left), format_tensor(right))

        report.add_case()
        d = coproduct(p, pres)
        from_left = pres.zero()
        from_right = pres.zero()
        for (lw, rw), c in d.terms.items():
            from_left = from_left + NCPoly(pres, {rw: ONE}).scale(
                c * counit(NCPoly(pres, {lw: ONE}), pres)
            )
            from_right = from_right + NCPoly(pres, {lw: ONE}).scale(
                c * counit(NCPoly(pres, {rw: ONE}), pres)
            )
        if not (from_left - p).is_zero() or not (from_right - p).is_zero():
            report.fail(
                f"counit law at {w}", format_poly(from_left), format_poly(from_right)
            )

        report.add_case()
        target = pres.scalar(counit(p, pres))
        sa = _antipode_convolution(pres, p, left=True)
        sb = _antipode_convolution(pres, p, left=False)
        if not (sa - target).is_zero() or not (sb - target).is_zero():
            report.fail(f"antipode axiom at {w}", format_poly(sa), format_poly(sb))
    return report
