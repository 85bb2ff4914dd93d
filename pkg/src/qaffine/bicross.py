"""The cocycle central-extension machinery: loop quotient, section j, grading
coaction beta, convolution inverses, the quantum 2-cocycle chi, the twisted
extension product and cross coproduct on CZ (x) loop, and the verification
sweeps showing the extension reconstructs the affine algebra.

beta and j are defined on the normal-form basis only; every operation here
normal-orders its input before doing anything else.  chi lands in CZ by
construction and the engine asserts this on every evaluation.
"""

from __future__ import annotations

import random
from functools import lru_cache

from .errors import ConsistencyError
from .hopf import TensorPoly, _antipode_word, _counit_word, _delta_word, coproduct
from .ncalg import NCPoly, word_concat, word_degree
from .presentations import builtin_presentation
from .qscalar import ONE, QScalar
from .reports import Report

ZERO_SCALAR = QScalar.from_int(0)

_UP = {"k": "K", "e0": "E0", "e1": "E1", "f0": "F0", "f1": "F1"}
_DOWN = {v: k for k, v in _UP.items()}


@lru_cache(maxsize=None)
def _loop():
    return builtin_presentation("loop")


@lru_cache(maxsize=None)
def _aff():
    return builtin_presentation("affine_new")


@lru_cache(maxsize=None)
def _cz():
    return builtin_presentation("cz")


def _up_word(word):
    return tuple((_UP[n], e) for n, e in word)


def _cz_word(power):
    return (("c", power),) if power else ()


# -- CZ elements ---------------------------------------------------------------


class CZElement:
    """Laurent polynomial in the central group-like c with QScalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for m, c in terms.items():
                if c:
                    t[int(m)] = c
        self.terms = t

    @classmethod
    def unit(cls):
        return cls({0: ONE})

    @classmethod
    def from_scalar(cls, s):
        return cls({0: s})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m)
            s = c if s is None else s + c
            if s:
                t[m] = s
            elif m in t:
                del t[m]
        return CZElement(t)

    def __neg__(self):
        return CZElement({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 + m2
                s = t.get(m)
                add = c1 * c2
                s = add if s is None else s + add
                if s:
                    t[m] = s
                elif m in t:
                    del t[m]
        return CZElement(t)

    def scale(self, f):
        if not f:
            return CZElement()
        return CZElement({m: c * f for m, c in self.terms.items()})

    def counit(self):
        total = ZERO_SCALAR
        for c in self.terms.values():
            total = total + c
        return total

    def __eq__(self, other):
        if isinstance(other, int):
            other = CZElement({0: QScalar.from_int(other)})
        return isinstance(other, CZElement) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def to_poly(self):
        return NCPoly(_cz(), {_cz_word(m): c for m, c in self.terms.items()})

    @classmethod
    def from_poly(cls, p):
        out = {}
        for w, c in p.normal_form().terms.items():
            power = 0
            for name, exp in w:
                if name != "c":
                    raise ConsistencyError(f"not a CZ element: contains {name}")
                power += exp
            out[power] = out.get(power, ZERO_SCALAR) + c
        return cls(out)

    def __repr__(self):
        return f"CZElement({dict(sorted(self.terms.items()))!r})"


# -- quotient, section, grading, coaction ---------------------------------------


def project_loop(p):
    """Hopf algebra map affine_new -> loop: c -> 1 and letters to lowercase."""
    aff, loop = _aff(), _loop()
    assert p.pres is aff
    out = {}
    for w, c in aff.normal_form(p).terms.items():
        runs = [(_DOWN[n], e) for n, e in w if n != "c"]
        key = loop.word(runs)
        s = out.get(key)
        s = c if s is None else s + c
        if s:
            out[key] = s
        elif key in out:
            del out[key]
    return NCPoly(loop, out)


def section_j(p):
    """Linear section of the projection: uppercase each normal-form basis word.

    Not an algebra map; it is defined term by term on the normal-form basis.
    """
    aff, loop = _loop(), _aff()
    assert p.pres is aff
    p = p.normal_form()
    return NCPoly(_aff(), {_up_word(w): c for w, c in p.terms.items()})


def grade(word):
    """Number of e0 and f0 letters of a normal-form loop word."""
    return _loop().grade(word)


def coaction_beta(p):
    """w -> w (x) c^grade(w), termwise on the normal-form basis."""
    loop = _loop()
    assert p.pres is loop
    out = {}
    for w, c in loop.normal_form(p).terms.items():
        out[(w, _cz_word(grade(w)))] = c
    return TensorPoly((loop, _cz()), out)


def _jinv_word(word):
    """j^-1 on one basis word: (S j(w)) * c^grade(w), as affine normal terms."""
    aff = _aff()
    cache = aff._ext_caches.setdefault("jinv_word", {})
    hit = cache.get(word)
    if hit is not None:
        return hit
    g = grade(word)
    out = {}
    for w, c in _antipode_word(aff, _up_word(word)).items():
        key = aff.word([("c", g)] + list(w))
        s = out.get(key)
        s = c if s is None else s + c
        if s:
            out[key] = s
    cache[word] = out
    return out


def j_conv_inverse(p):
    """Convolution inverse of the section: j(h_(1)) j^-1(h_(2)) = eps(h)."""
    loop = _loop()
    assert p.pres is loop
    out = _aff().zero()
    for w, c in loop.normal_form(p).terms.items():
        out = out + NCPoly(_aff(), dict(_jinv_word(w))).scale(c)
    return out


# -- the cocycle -----------------------------------------------------------------


def _as_cz(affine_terms):
    power_map = {}
    for w, c in affine_terms.items():
        power = 0
        for name, exp in w:
            if name != "c":
                raise ConsistencyError(
                    f"cocycle value escaped CZ: word {w} is not a c-power"
                )
            power += exp
        s = power_map.get(power)
        s = c if s is None else s + c
        if s:
            power_map[power] = s
        elif power in power_map:
            del power_map[power]
    return CZElement(power_map)


def _chi_pair(wh, wg):
    """chi on a pair of loop basis words, as a CZElement (cached)."""
    loop, aff = _loop(), _aff()
    cache = loop._ext_caches.setdefault("chi_pair", {})
    hit = cache.get((wh, wg))
    if hit is not None:
        return hit
    acc = {}
    for (h1, h2), ch in _delta_word(loop, wh).items():
        jh1 = _up_word(h1)
        for (g1, g2), cg in _delta_word(loop, wg).items():
            left = aff.word_nf(word_concat(jh1, _up_word(g1), aff))
            outer = ch * cg
            for w, cw in loop.word_nf(word_concat(h2, g2, loop)).items():
                mid = _jinv_word(w)
                for lw, lc in left.items():
                    base = outer * cw * lc
                    for iw, ic in mid.items():
                        for bw, bc in aff.word_nf(word_concat(lw, iw, aff)).items():
                            s = acc.get(bw)
                            add = base * ic * bc
                            s = add if s is None else s + add
                            if s:
                                acc[bw] = s
                            elif bw in acc:
                                del acc[bw]
    value = _as_cz(acc)
    cache[(wh, wg)] = value
    return value


def cocycle_chi(h, g, method="direct"):
    """The quantum 2-cocycle chi(h (x) g), valued in CZ.

    method 'direct' evaluates j(h1) j(g1) (S j((h2 g2)~(1))) (h2 g2)~(2) with
    the inlined beta/antipode pipeline; 'jinv' goes through the public
    j_conv_inverse operation.  Both must agree.
    """
    loop = _loop()
    assert h.pres is loop and g.pres is loop
    h = loop.normal_form(h)
    g = loop.normal_form(g)
    total = CZElement()
    for wh, ch in h.terms.items():
        for wg, cg in g.terms.items():
            if method == "direct":
                val = _chi_pair(wh, wg)
            elif method == "jinv":
                val = _chi_pair_via_jinv(wh, wg)
            else:
                raise ValueError(f"unknown chi method {method!r}")
            total = total + val.scale(ch * cg)
    return total


def _chi_pair_via_jinv(wh, wg):
    loop, aff = _loop(), _aff()
    acc = aff.zero()
    for (h1, h2), ch in _delta_word(loop, wh).items():
        for (g1, g2), cg in _delta_word(loop, wg).items():
            left = aff.multiply(
                section_j(NCPoly(loop, {h1: ONE})), section_j(NCPoly(loop, {g1: ONE}))
            )
            mid = j_conv_inverse(
                loop.multiply(NCPoly(loop, {h2: ONE}), NCPoly(loop, {g2: ONE}))
            )
            acc = acc + aff.multiply(left, mid).scale(ch * cg)
    return _as_cz(aff.normal_form(acc).terms)


def _chiinv_pair(wh, wg):
    """chi^-1 on basis words: j(h1 g1) j^-1(g2) j^-1(h2), projected to CZ."""
    loop, aff = _loop(), _aff()
    cache = loop._ext_caches.setdefault("chiinv_pair", {})
    hit = cache.get((wh, wg))
    if hit is not None:
        return hit
    acc = {}
    for (h1, h2), ch in _delta_word(loop, wh).items():
        for (g1, g2), cg in _delta_word(loop, wg).items():
            outer = ch * cg
            for w, cw in loop.word_nf(word_concat(h1, g1, loop)).items():
                jw = _up_word(w)
                for gw, gc in _jinv_word(g2).items():
                    for lw, lc in aff.word_nf(word_concat(jw, gw, aff)).items():
                        base = outer * cw * gc * lc
                        for hw, hc in _jinv_word(h2).items():
                            for bw, bc in aff.word_nf(word_concat(lw, hw, aff)).items():
                                s = acc.get(bw)
                                add = base * hc * bc
                                s = add if s is None else s + add
                                if s:
                                    acc[bw] = s
                                elif bw in acc:
                                    del acc[bw]
    value = _as_cz(acc)
    cache[(wh, wg)] = value
    return value


def chi_conv_inverse(h, g):
    """Convolution inverse of chi: chi(h1 (x) g1) chi^-1(h2 (x) g2) = eps(h)eps(g)."""
    loop = _loop()
    assert h.pres is loop and g.pres is loop
    total = CZElement()
    for wh, ch in loop.normal_form(h).terms.items():
        for wg, cg in loop.normal_form(g).terms.items():
            total = total + _chiinv_pair(wh, wg).scale(ch * cg)
    return total


def _chi_word_terms(wh, terms):
    """chi(wh (x) -) extended linearly over a {word: coeff} map."""
    total = CZElement()
    for w, c in terms.items():
        total = total + _chi_pair(wh, w).scale(c)
    return total


# -- the extension CZ (x) loop ---------------------------------------------------


class ExtElement:
    """Element of the extension: sum of c^m (x) (loop basis word) terms."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for key, c in terms.items():
                if c:
                    t[key] = c
        self.terms = t

    @classmethod
    def unit(cls):
        return cls({(0, ()): ONE})

    @classmethod
    def from_parts(cls, cz, h):
        """Build sum_m a_m c^m (x) h from a CZElement and a loop element."""
        loop = _loop()
        h = loop.normal_form(h)
        out = {}
        for m, a in cz.terms.items():
            for w, c in h.terms.items():
                out[(m, w)] = a * c
        return cls(out)

    def __add__(self, other):
        t = dict(self.terms)
        for key, c in other.terms.items():
            s = t.get(key)
            s = c if s is None else s + c
            if s:
                t[key] = s
            elif key in t:
                del t[key]
        return ExtElement(t)

    def __neg__(self):
        return ExtElement({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        if not f:
            return ExtElement()
        return ExtElement({k: c * f for k, c in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, ExtElement) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items(), key=repr)))

    def __mul__(self, other):
        return ext_product(self, other)

    def degree(self):
        return max((abs(m) + word_degree(w) for m, w in self.terms), default=0)

    def __repr__(self):
        return f"ExtElement({self.terms!r})"


def _ext_mul_terms(key1, key2):
    """Product of two ext basis elements as a {(m, word): coeff} dict (cached)."""
    loop = _loop()
    cache = loop._ext_caches.setdefault("ext_mul", {})
    hit = cache.get((key1, key2))
    if hit is not None:
        return hit
    (m, wh), (n, wg) = key1, key2
    out = {}
    for (h1, h2), ch in _delta_word(loop, wh).items():
        for (g1, g2), cg in _delta_word(loop, wg).items():
            chi = _chi_pair(h1, g1)
            if chi.is_zero():
                continue
            outer = ch * cg
            for w, cw in loop.word_nf(word_concat(h2, g2, loop)).items():
                for p, cp in chi.terms.items():
                    key = (m + n + p, w)
                    s = out.get(key)
                    add = outer * cw * cp
                    s = add if s is None else s + add
                    if s:
                        out[key] = s
                    elif key in out:
                        del out[key]
    cache[(key1, key2)] = out
    return out


def ext_product(x, y):
    """(a (x) h)(b (x) g) = a b chi(h1 (x) g1) (x) h2 g2, bilinearly."""
    out = ExtElement()
    for k1, c1 in x.terms.items():
        for k2, c2 in y.terms.items():
            out = out + ExtElement(dict(_ext_mul_terms(k1, k2))).scale(c1 * c2)
    return out


class ExtTensor:
    """Tensor power of the extension; keys are tuples of (m, word) pairs."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank, terms=None):
        self.rank = rank
        t = {}
        if terms:
            for key, c in terms.items():
                if c:
                    t[key] = c
        self.terms = t

    def __add__(self, other):
        assert self.rank == other.rank
        t = dict(self.terms)
        for key, c in other.terms.items():
            s = t.get(key)
            s = c if s is None else s + c
            if s:
                t[key] = s
            elif key in t:
                del t[key]
        return ExtTensor(self.rank, t)

    def __sub__(self, other):
        return self + ExtTensor(other.rank, {k: -c for k, c in other.terms.items()})

    def scale(self, f):
        if not f:
            return ExtTensor(self.rank)
        return ExtTensor(self.rank, {k: c * f for k, c in self.terms.items()})

    def __mul__(self, other):
        """Legwise extension product."""
        assert self.rank == other.rank
        out = ExtTensor(self.rank)
        for legs1, c1 in self.terms.items():
            for legs2, c2 in other.terms.items():
                expanded = [(ONE, ())]
                for i in range(self.rank):
                    part = _ext_mul_terms(legs1[i], legs2[i])
                    expanded = [
                        (c * pc, legs + (k,))
                        for c, legs in expanded
                        for k, pc in part.items()
                    ]
                out = out + ExtTensor(
                    self.rank, {legs: c1 * c2 * c for c, legs in expanded}
                )
        return out

    def apply_leg(self, i, fn):
        """Splice fn(key) (a {key-tuple: coeff} dict) in place of leg i."""
        out = {}
        rank = None
        for legs, c in self.terms.items():
            for repl, rc in fn(legs[i]).items():
                key = legs[:i] + repl + legs[i + 1 :]
                rank = len(key)
                s = out.get(key)
                s = c * rc if s is None else s + c * rc
                if s:
                    out[key] = s
                elif key in out:
                    del out[key]
        return ExtTensor(rank if rank is not None else self.rank, out)

    def __eq__(self, other):
        return (
            isinstance(other, ExtTensor)
            and self.rank == other.rank
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"ExtTensor({self.rank}, {self.terms!r})"


def _ext_delta_key(key):
    """Cross coproduct of one ext basis element as {((m,w),(m,w)): coeff}."""
    loop = _loop()
    cache = loop._ext_caches.setdefault("ext_delta", {})
    hit = cache.get(key)
    if hit is not None:
        return hit
    m, w = key
    out = {}
    for (h1, h2), c in _delta_word(loop, w).items():
        k = ((m, h1), (m + grade(h1), h2))
        s = out.get(k)
        s = c if s is None else s + c
        if s:
            out[k] = s
        elif k in out:
            del out[k]
    cache[key] = out
    return out


def ext_coproduct(x):
    """Delta(a (x) h) = a1 (x) h1~(1) (x) a2 h1~(2) (x) h2 on the extension."""
    out = ExtTensor(2)
    for key, c in x.terms.items():
        out = out + ExtTensor(2, dict(_ext_delta_key(key))).scale(c)
    return out


def ext_counit(x):
    total = ZERO_SCALAR
    loop = _loop()
    for (m, w), c in x.terms.items():
        total = total + c * _counit_word(loop, w)
    return total


def phi(x):
    """The comparison map c^m (x) w -> c^m j(w) into affine_new."""
    aff = _aff()
    out = {}
    for (m, w), c in x.terms.items():
        key = aff.word([("c", m)] + list(_up_word(w)))
        s = out.get(key)
        s = c if s is None else s + c
        if s:
            out[key] = s
        elif key in out:
            del out[key]
    return aff.normal_form(NCPoly(aff, out))


# -- verification sweeps ---------------------------------------------------------


def _loop_basis_by_degree(max_degree):
    loop = _loop()
    buckets = [[] for _ in range(max_degree + 1)]
    for w in loop.basis_words(max_degree):
        buckets[word_degree(w)].append(w)
    return buckets


def _cz_format(v):
    from .formatting import format_poly

    return format_poly(v.to_poly())


def verify_cocycle_condition(max_degree=3):
    """Exhaustive twisted-cocycle identity on basis word triples.

    chi(g1 (x) f1) chi(h (x) g2 f2) = chi(h1 (x) g1) chi(h2 g2 (x) f) for every
    triple of loop basis words of total degree <= max_degree, plus the counit
    normalization chi(1 (x) w) = chi(w (x) 1) = eps(w).
    """
    loop = _loop()
    report = Report("cocycle", max_degree)
    buckets = _loop_basis_by_degree(max_degree)

    for w in loop.basis_words(max_degree):
        report.add_case()
        eps = CZElement.from_scalar(_counit_word(loop, w))
        left = _chi_pair((), w)
        right = _chi_pair(w, ())
        if left != eps or right != eps:
            report.fail(
                f"counit normalization at {w}", _cz_format(left), _cz_format(right)
            )

    for dh in range(max_degree + 1):
        for dg in range(max_degree + 1 - dh):
            for df in range(max_degree + 1 - dh - dg):
                for wh in buckets[dh]:
                    d2h = _delta_word(loop, wh)
                    for wg in buckets[dg]:
                        d2g = _delta_word(loop, wg)
                        for wf in buckets[df]:
                            report.add_case()
                            lhs = CZElement()
                            for (g1, g2), cg in d2g.items():
                                for (f1, f2), cf in _delta_word(loop, wf).items():
                                    chi1 = _chi_pair(g1, f1)
                                    if chi1.is_zero():
                                        continue
                                    prod = loop.word_nf(word_concat(g2, f2, loop))
                                    val = _chi_word_terms(wh, prod)
                                    lhs = lhs + (chi1 * val).scale(cg * cf)
                            rhs = CZElement()
                            for (h1, h2), ch in d2h.items():
                                for (g1, g2), cg in d2g.items():
                                    chi1 = _chi_pair(h1, g1)
                                    if chi1.is_zero():
                                        continue
                                    val = CZElement()
                                    for w, cw in loop.word_nf(
                                        word_concat(h2, g2, loop)
                                    ).items():
                                        val = val + _chi_pair(w, wf).scale(cw)
                                    rhs = rhs + (chi1 * val).scale(ch * cg)
                            if lhs != rhs:
                                report.fail(
                                    f"cocycle condition at ({wh}, {wg}, {wf})",
                                    _cz_format(lhs),
                                    _cz_format(rhs),
                                )
    return report


def _delta2_word(pres, w):
    """Rank-3 iterated coproduct terms of one word."""
    cache = pres._ext_caches.setdefault("delta2_word", {})
    hit = cache.get(w)
    if hit is not None:
        return hit
    out = {}
    for (w1, rest), c1 in _delta_word(pres, w).items():
        for (w2, w3), c2 in _delta_word(pres, rest).items():
            key = (w1, w2, w3)
            s = out.get(key)
            add = c1 * c2
            s = add if s is None else s + add
            if s:
                out[key] = s
            elif key in out:
                del out[key]
    cache[w] = out
    return out


def verify_ext_compatibility(max_degree=3, seed=0, samples=25):
    """The comodule-coalgebra compatibility data of the extension.

    Checks, on basis words and pairs of total degree <= max_degree: the
    coaction axiom, compatibility of beta with the coproduct, the beta(hg)
    twisting identity, centrality of the CZ leg, the Delta-chi identity,
    coassociativity and counit laws of the cross coproduct, seeded sampled
    associativity of the twisted product, and that beta fails to be an
    algebra map on the witness pair (f0, e0).
    """
    loop, cz = _loop(), _cz()
    report = Report("ext", max_degree, seed=seed)
    buckets = _loop_basis_by_degree(max_degree)

    for w in loop.basis_words(max_degree):
        p = NCPoly(loop, {w: ONE})
        b = coaction_beta(p)

        report.add_case()
        lhs = b.apply_leg(0, lambda u: {(u, _cz_word(grade(u))): ONE}, (loop, cz, cz))
        rhs = b.apply_leg(1, lambda u: {(u, u): ONE}, (loop, cz, cz))
        if lhs != rhs:
            from .formatting import format_tensor

            report.fail(f"coaction axiom at {w}", format_tensor(lhs), format_tensor(rhs))

        report.add_case()
        lhs = b.apply_leg(0, lambda u: _delta_word(loop, u), (loop, loop, cz))
        rhs_terms = {}
        for (w1, w2), c in _delta_word(loop, w).items():
            key = (w1, w2, _cz_word(grade(w1) + grade(w2)))
            s = rhs_terms.get(key)
            s = c if s is None else s + c
            if s:
                rhs_terms[key] = s
            elif key in rhs_terms:
                del rhs_terms[key]
        rhs = TensorPoly((loop, loop, cz), rhs_terms)
        if lhs != rhs:
            from .formatting import format_tensor

            report.fail(
                f"comodule coalgebra at {w}", format_tensor(lhs), format_tensor(rhs)
            )

    for dh in range(max_degree + 1):
        for dg in range(max_degree + 1 - dh):
            for wh in buckets[dh]:
                for wg in buckets[dg]:
                    ph = NCPoly(loop, {wh: ONE})
                    pg = NCPoly(loop, {wg: ONE})

                    # (ext1): beta(hg) twisted by chi^-1 ... chi
                    report.add_case()
                    lhs = coaction_beta(loop.multiply(ph, pg))
                    rhs_terms = {}
                    for (h1, h2, h3), ch in _delta2_word(loop, wh).items():
                        for (g1, g2, g3), cg in _delta2_word(loop, wg).items():
                            chiinv = _chiinv_pair(h1, g1)
                            if chiinv.is_zero():
                                continue
                            chi = _chi_pair(h3, g3)
                            if chi.is_zero():
                                continue
                            base = ch * cg
                            cz_part = chiinv * chi
                            mid = loop.word_nf(word_concat(h2, g2, loop))
                            shift = grade(h2) + grade(g2)
                            for w, cw in mid.items():
                                for p, cp in cz_part.terms.items():
                                    key = (w, _cz_word(p + shift))
                                    s = rhs_terms.get(key)
                                    add = base * cw * cp
                                    s = add if s is None else s + add
                                    if s:
                                        rhs_terms[key] = s
                                    elif key in rhs_terms:
                                        del rhs_terms[key]
                    rhs = TensorPoly((loop, cz), rhs_terms)
                    if lhs != rhs:
                        from .formatting import format_tensor

                        report.fail(
                            f"(ext1) at ({wh}, {wg})",
                            format_tensor(lhs),
                            format_tensor(rhs),
                        )

                    # (ext3): Delta_CZ chi(h (x) g) as a CZ (x) CZ identity
                    report.add_case()
                    chi_hg = _chi_pair(wh, wg)
                    lhs_cz = {}
                    for p, c in chi_hg.terms.items():
                        lhs_cz[(p, p)] = c
                    rhs_cz = {}
                    for (h1, h2), ch in _delta_word(loop, wh).items():
                        for (g1, g2), cg in _delta_word(loop, wg).items():
                            first = _chi_pair(h1, g1)
                            if first.is_zero():
                                continue
                            second = _chi_pair(h2, g2)
                            if second.is_zero():
                                continue
                            shift = grade(h1) + grade(g1)
                            base = ch * cg
                            for p1, c1 in first.terms.items():
                                for p2, c2 in second.terms.items():
                                    key = (p1, p2 + shift)
                                    s = rhs_cz.get(key)
                                    add = base * c1 * c2
                                    s = add if s is None else s + add
                                    if s:
                                        rhs_cz[key] = s
                                    elif key in rhs_cz:
                                        del rhs_cz[key]
                    if lhs_cz != rhs_cz:
                        report.fail(
                            f"(ext3) at ({wh}, {wg})", repr(lhs_cz), repr(rhs_cz)
                        )

    # (ext2): the CZ leg commutes with 1 (x) a, asserted structurally
    for w in loop.basis_words(min(max_degree, 2)):
        report.add_case()
        b = coaction_beta(NCPoly(loop, {w: ONE}))
        a = TensorPoly((loop, cz), {((), (("c", 1),)): ONE})
        if b * a != a * b:
            report.fail(f"(ext2) at {w}", "[beta(h), 1(x)c]", "0")

    # cross coproduct: coassociativity and counit laws on the ext basis
    for key in _ext_basis(max_degree):
        report.add_case()
        x = ExtElement({key: ONE})
        dx = ext_coproduct(x)
        left = dx.apply_leg(0, _ext_delta_key)
        right = dx.apply_leg(1, _ext_delta_key)
        if left != right:
            report.fail(f"ext coassociativity at {key}", repr(left), repr(right))
        report.add_case()
        from_left = ExtElement()
        from_right = ExtElement()
        for (ka, kb), c in dx.terms.items():
            eps_a = _counit_word(loop, ka[1])  # counit of c^m is 1
            eps_b = _counit_word(loop, kb[1])
            from_left = from_left + ExtElement({kb: c * eps_a})
            from_right = from_right + ExtElement({ka: c * eps_b})
        if from_left != x or from_right != x:
            report.fail(f"ext counit law at {key}", repr(from_left), repr(from_right))

    # seeded sampled associativity of the twisted product (exact checks)
    rng = random.Random(seed)
    pool = _ext_basis(max_degree)
    for _ in range(samples):
        report.add_case()
        kx, ky, kz = (rng.choice(pool) for _ in range(3))
        x, y, z = (ExtElement({k: ONE}) for k in (kx, ky, kz))
        lhs = ext_product(ext_product(x, y), z)
        rhs = ext_product(x, ext_product(y, z))
        if lhs != rhs:
            report.fail(
                f"ext associativity at ({kx}, {ky}, {kz})", repr(lhs), repr(rhs)
            )

    # beta must NOT respect multiplication: exhibit the witness
    report.add_case()
    f0 = _loop().gen("f0")
    e0 = _loop().gen("e0")
    lhs = coaction_beta(f0 * e0)
    rhs = coaction_beta(f0) * coaction_beta(e0)
    if lhs == rhs:
        report.fail(
            "beta multiplicativity witness (f0, e0)",
            "beta(f0 e0) == beta(f0) beta(e0)",
            "expected inequality",
        )
    return report


def _ext_basis(max_degree):
    """Ext basis elements (m, word) with |m| + degree <= max_degree, ordered."""
    loop = _loop()
    out = []
    for d in range(max_degree + 1):
        bucket = []
        for m in range(-max_degree, max_degree + 1):
            rest = d - abs(m)
            if rest < 0:
                continue
            for w in loop.basis_words(max_degree):
                if word_degree(w) == rest:
                    bucket.append((m, w))
        bucket.sort(key=lambda k: (k[0], loop._word_key(k[1])))
        out.extend(bucket)
    return out


def verify_isomorphism(max_degree=3, basis_degree=None, seed=0, samples=15):
    """Phi(c^m (x) w) = c^m j(w) is an isomorphism onto affine_new.

    Checks the algebra and coalgebra map property of Phi on basis pairs and
    elements of total degree <= max_degree, bijectivity of Phi on bases up to
    basis_degree (default max_degree + 1), the Hopf property of the inclusion
    and projection arrows, the j-intertwiner identity, the CZ fixed-point
    characterization under Delta_R = (id (x) project) Delta, and seeded
    sampled pairs of the bialgebra property Delta(x y) = Delta(x) Delta(y).
    """
    from .formatting import format_poly, format_tensor

    loop, aff, cz = _loop(), _aff(), _cz()
    if basis_degree is None:
        basis_degree = max_degree + 1
    report = Report("iso", max_degree, seed=seed)
    basis = _ext_basis(max_degree)

    # algebra map on pairs of total degree <= max_degree
    for i, k1 in enumerate(basis):
        d1 = abs(k1[0]) + word_degree(k1[1])
        for k2 in basis:
            if d1 + abs(k2[0]) + word_degree(k2[1]) > max_degree:
                continue
            report.add_case()
            x = ExtElement({k1: ONE})
            y = ExtElement({k2: ONE})
            lhs = phi(ext_product(x, y))
            rhs = aff.multiply(phi(x), phi(y))
            if not (lhs - rhs).is_zero():
                report.fail(
                    f"Phi algebra map at ({k1}, {k2})",
                    format_poly(lhs),
                    format_poly(rhs),
                )

    # coalgebra map elementwise
    for k in basis:
        report.add_case()
        x = ExtElement({k: ONE})
        dx = ext_coproduct(x)
        lhs_terms = {}
        for (ka, kb), c in dx.terms.items():
            pa, pb = phi(ExtElement({ka: ONE})), phi(ExtElement({kb: ONE}))
            for wa, ca in pa.terms.items():
                for wb, cb in pb.terms.items():
                    key = (wa, wb)
                    s = lhs_terms.get(key)
                    add = c * ca * cb
                    s = add if s is None else s + add
                    if s:
                        lhs_terms[key] = s
                    elif key in lhs_terms:
                        del lhs_terms[key]
        lhs = TensorPoly((aff, aff), lhs_terms)
        rhs = coproduct(phi(x), aff)
        if lhs != rhs:
            report.fail(
                f"Phi coalgebra map at {k}", format_tensor(lhs), format_tensor(rhs)
            )

    # bijectivity on bases up to basis_degree
    report.add_case()
    images = {}
    for k in _ext_basis(basis_degree):
        img = phi(ExtElement({k: ONE}))
        if len(img.terms) != 1 or next(iter(img.terms.values())) != ONE:
            report.fail(f"Phi basis image at {k}", format_poly(img), "a basis word")
            continue
        (w,) = img.terms
        if w in images:
            report.fail(f"Phi injectivity at {k}", repr(w), f"already hit by {images[w]}")
        images[w] = k
    targets = set(aff.basis_words(basis_degree))
    if set(images) != targets:
        missing = sorted(targets - set(images))[:3]
        extra = sorted(set(images) - targets)[:3]
        report.fail(
            f"Phi basis surjectivity at degree {basis_degree}",
            f"missing={missing}",
            f"extra={extra}",
        )

    # Hopf property of the two arrows CZ -> E -> loop
    for m in range(-max_degree, max_degree + 1):
        for n in range(-max_degree, max_degree + 1):
            if abs(m) + abs(n) > max_degree:
                continue
            report.add_case()
            prod = ext_product(ExtElement({(m, ()): ONE}), ExtElement({(n, ()): ONE}))
            if prod != ExtElement({(m + n, ()): ONE}):
                report.fail(f"inclusion algebra map at ({m}, {n})", repr(prod), "c^(m+n)")
        report.add_case()
        dx = ext_coproduct(ExtElement({(m, ()): ONE}))
        if dx != ExtTensor(2, {((m, ()), (m, ())): ONE}):
            report.fail(f"inclusion coalgebra map at {m}", repr(dx), "group-like")

    def pi(x):
        out = loop.zero()
        for (m, w), c in x.terms.items():
            out = out + NCPoly(loop, {w: c})
        return loop.normal_form(out)

    for i, k1 in enumerate(basis):
        d1 = abs(k1[0]) + word_degree(k1[1])
        for k2 in basis:
            if d1 + abs(k2[0]) + word_degree(k2[1]) > max_degree:
                continue
            report.add_case()
            x, y = ExtElement({k1: ONE}), ExtElement({k2: ONE})
            lhs = pi(ext_product(x, y))
            rhs = loop.multiply(pi(x), pi(y))
            if not (lhs - rhs).is_zero():
                report.fail(
                    f"projection algebra map at ({k1}, {k2})",
                    format_poly(lhs),
                    format_poly(rhs),
                )
    for k in basis:
        report.add_case()
        x = ExtElement({k: ONE})
        dx = ext_coproduct(x)
        lhs_terms = {}
        for (ka, kb), c in dx.terms.items():
            for wa, ca in pi(ExtElement({ka: ONE})).terms.items():
                for wb, cb in pi(ExtElement({kb: ONE})).terms.items():
                    key = (wa, wb)
                    s = lhs_terms.get(key)
                    add = c * ca * cb
                    s = add if s is None else s + add
                    if s:
                        lhs_terms[key] = s
                    elif key in lhs_terms:
                        del lhs_terms[key]
        lhs = TensorPoly((loop, loop), lhs_terms)
        rhs = coproduct(pi(x), loop)
        if lhs != rhs:
            report.fail(
                f"projection coalgebra map at {k}",
                format_tensor(lhs),
                format_tensor(rhs),
            )

    # j intertwines Delta_R with the right regular coaction
    for w in loop.basis_words(max_degree):
        report.add_case()
        jw = section_j(NCPoly(loop, {w: ONE}))
        d = coproduct(jw, aff)
        lhs_terms = {}
        for (w1, w2), c in d.terms.items():
            for pw, pc in project_loop(NCPoly(aff, {w2: ONE})).terms.items():
                key = (w1, pw)
                s = lhs_terms.get(key)
                add = c * pc
                s = add if s is None else s + add
                if s:
                    lhs_terms[key] = s
                elif key in lhs_terms:
                    del lhs_terms[key]
        lhs = TensorPoly((aff, loop), lhs_terms)
        rhs_terms = {}
        for (w1, w2), c in _delta_word(loop, w).items():
            key = (_up_word(w1), w2)
            s = rhs_terms.get(key)
            s = c if s is None else s + c
            if s:
                rhs_terms[key] = s
            elif key in rhs_terms:
                del rhs_terms[key]
        rhs = TensorPoly((aff, loop), rhs_terms)
        if lhs != rhs:
            report.fail(
                f"j intertwiner at {w}", format_tensor(lhs), format_tensor(rhs)
            )

    # CZ = fixed points of Delta_R on the degree-bounded slice
    report.add_case()
    from .ncalg import _LinearSpan

    rows = []
    aff_basis = aff.basis_words(max_degree)
    for idx, w in enumerate(aff_basis):
        d = coproduct(NCPoly(aff, {w: ONE}), aff)
        vec = {}
        for (w1, w2), c in d.terms.items():
            for pw, pc in project_loop(NCPoly(aff, {w2: ONE})).terms.items():
                key = ("T", w1, pw)
                s = vec.get(key)
                add = c * pc
                s = add if s is None else s + add
                if s:
                    vec[key] = s
                elif key in vec:
                    del vec[key]
        key = ("T", w, ())
        s = vec.get(key)
        s = -ONE if s is None else s - ONE
        if s:
            vec[key] = s
        elif key in vec:
            del vec[key]
        vec[("I", idx)] = ONE
        rows.append(vec)
    span = _LinearSpan()
    kernel = []
    for vec in rows:
        red = span.reduce(vec)
        t_part = {k: v for k, v in red.items() if k[0] == "T"}
        if not t_part:
            kernel.append({k: v for k, v in red.items() if k[0] == "I"})
        else:
            pivot = sorted(t_part)[0]
            inv = t_part[pivot].inverse()
            span.rows.append((pivot, {k: v * inv for k, v in red.items()}))
    c_power_indices = {
        i for i, w in enumerate(aff_basis) if all(n == "c" for n, _ in w)
    }
    ok = len(kernel) == len(c_power_indices) and all(
        set(i for (_, i) in vec) <= c_power_indices for vec in kernel
    )
    if not ok:
        report.fail(
            f"Delta_R fixed points at degree {max_degree}",
            f"kernel dim {len(kernel)}",
            f"expected c-powers only ({len(c_power_indices)})",
        )

    # seeded sampled bialgebra property: Delta_ext is an algebra map
    rng = random.Random(seed)
    for _ in range(samples):
        report.add_case()
        kx, ky = rng.choice(basis), rng.choice(basis)
        x, y = ExtElement({kx: ONE}), ExtElement({ky: ONE})
        lhs = ext_coproduct(ext_product(x, y))
        rhs = ext_coproduct(x) * ext_coproduct(y)
        if lhs != rhs:
            report.fail(f"Delta_ext algebra map at ({kx}, {ky})", repr(lhs), repr(rhs))
    return report
