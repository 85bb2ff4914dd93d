"""Noncommutative polynomials over Q(q) and the normal-ordering rewrite engine.

Words are run-length encoded tuples ((name, exponent), ...).  A presentation
fixes the alphabet, the block order central < cartan < raising < lowering,
q-commutation swap rules, straightening rules with lower-order tails, Serre
relators, Hopf tables and grading weights.  Normal forms put every word into
block order; the raising and lowering blocks stay free (no internal ordering).

Termination is by the lexicographic measure (E/F degree, lowering-before-
raising inversions, E/F-before-cartan inversions, non-central-before-central
inversions, misordered same-block pairs); every rule application strictly
decreases it, which the engine can assert when `check_measure` is enabled.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import StructureError
from .qscalar import ONE, QScalar
from .reports import Report

SORTS = ("central", "cartan", "raising", "lowering")
SORT_RANK = {s: i for i, s in enumerate(SORTS)}

# When True, every rewrite asserts that the termination measure decreases.
check_measure = False


@dataclass(frozen=True)
class GeneratorSymbol:
    name: str
    invertible: bool
    sort: str
    grade_weight: int = 0

    def __post_init__(self):
        if self.sort not in SORT_RANK:
            raise StructureError(f"unknown sort {self.sort!r} for generator {self.name}")


@dataclass
class HopfEntry:
    """Structure maps of one generator: coproduct terms, counit, antipode."""

    coproduct: tuple  # ((left_word, right_word, QScalar), ...)
    counit: QScalar
    antipode: object = None  # NCPoly, filled by derive_antipode


class NCPoly:
    """Finite QScalar-linear combination of words of one presentation."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres, terms=None):
        self.pres = pres
        t = {}
        if terms:
            for w, c in terms.items():
                if c:
                    t[w] = c
        self.terms = t

    def is_zero(self):
        return not self.normal_form().terms

    def __add__(self, other):
        assert self.pres is other.pres
        t = dict(self.terms)
        for w, c in other.terms.items():
            s = t.get(w)
            s = c if s is None else s + c
            if s:
                t[w] = s
            elif w in t:
                del t[w]
        return NCPoly(self.pres, t)

    def __neg__(self):
        return NCPoly(self.pres, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return self.pres.multiply(self, other)

    def scale(self, f):
        if not f:
            return NCPoly(self.pres)
        return NCPoly(self.pres, {w: c * f for w, c in self.terms.items()})

    def normal_form(self):
        return self.pres.normal_form(self)

    def __eq__(self, other):
        if not isinstance(other, NCPoly) or self.pres is not other.pres:
            return NotImplemented
        return self.normal_form().terms == other.normal_form().terms

    def __hash__(self):
        return hash((id(self.pres), tuple(sorted(self.normal_form().terms))))

    def degree(self):
        return max((word_degree(w) for w in self.terms), default=0)

    def __repr__(self):
        return f"NCPoly({self.pres.name}, {self.terms!r})"


def word_degree(word):
    """Total size of a word: exponents of E/F letters plus |exponents| elsewhere."""
    return sum(abs(e) for _, e in word)


def word_from_runs(runs, pres):
    """Canonical word from a run sequence: merge adjacent equal letters, drop zeros."""
    out = []
    for name, exp in runs:
        if exp == 0:
            continue
        gen = pres.generator(name)
        if exp < 0 and not gen.invertible:
            raise ValueError(f"negative power of non-invertible generator {name}")
        if out and out[-1][0] == name:
            merged = out[-1][1] + exp
            if merged == 0:
                out.pop()
            else:
                out[-1] = (name, merged)
        else:
            out.append((name, exp))
    return tuple(out)


def word_concat(w1, w2, pres):
    return word_from_runs(list(w1) + list(w2), pres)


class Presentation:
    """Immutable algebra presentation plus the rewrite engine and its caches.

    Build with the add_* methods, then finalize().  After finalize the object
    must not be mutated; all engine operations are pure and cache aggressively.
    """

    def __init__(self, name, alphabet):
        self.name = name
        self.alphabet = tuple(alphabet)
        self.by_name = {}
        self.position = {}
        for i, g in enumerate(self.alphabet):
            if g.name in self.by_name:
                raise StructureError(f"duplicate generator name {g.name}")
            self.by_name[g.name] = g
            self.position[g.name] = i
        if [SORT_RANK[g.sort] for g in self.alphabet] != sorted(
            SORT_RANK[g.sort] for g in self.alphabet
        ):
            raise StructureError("alphabet must be listed in block order")
        self.swap_rules = {}
        self.straighten_rules = {}
        self.serre_relators = ()
        self.hopf = {}
        self._finalized = False
        self._nf_cache = {}
        self._basis_cache = {}
        self._ext_caches = {}

    # -- construction ------------------------------------------------------

    def add_swap(self, left, right, factor):
        """Declare left*right = factor * right*left (letter pair, any exponents)."""
        self._check_pattern(left, right)
        self.swap_rules[(left, right)] = factor

    def add_straighten(self, left, right, rhs):
        """Declare left*right = rhs for a pattern with a lower-order tail."""
        self._check_pattern(left, right)
        if self.by_name[left].invertible or self.by_name[right].invertible:
            raise StructureError("straightening patterns must use non-invertible letters")
        self.straighten_rules[(left, right)] = rhs

    def set_serre(self, relators):
        self.serre_relators = tuple(relators)

    def set_hopf(self, name, coproduct, counit):
        self.hopf[name] = HopfEntry(tuple(coproduct), counit)

    def _check_pattern(self, left, right):
        if left not in self.by_name or right not in self.by_name:
            raise StructureError(f"rule pattern ({left}, {right}) uses unknown generators")
        if not self._is_violation(left, right):
            raise StructureError(
                f"rule pattern ({left}, {right}) is already in normal order"
            )

    def finalize(self):
        for (l, r), rhs in self.straighten_rules.items():
            pat = self.measure(((l, 1), (r, 1)))
            for w in rhs.terms:
                if not self.measure(w) < pat:
                    raise StructureError(
                        f"straightening tail {w} does not decrease the order for ({l},{r})"
                    )
        for rel in self.serre_relators:
            sigs = {self._grade_signature(w) for w in rel.terms}
            if len(sigs) != 1:
                raise StructureError("Serre relator is not homogeneous")
        for g in self.alphabet:
            if g.name in self.hopf and g.invertible and not self.is_group_like(g.name):
                raise StructureError(
                    f"invertible generator {g.name} must be group-like"
                )
        self._finalized = True
        return self

    def _grade_signature(self, word):
        counts = {}
        for name, exp in word:
            counts[name] = counts.get(name, 0) + exp
        return tuple(sorted(counts.items()))

    # -- element constructors ---------------------------------------------

    def generator(self, name):
        try:
            return self.by_name[name]
        except KeyError:
            raise StructureError(f"unknown generator {name!r} in {self.name}") from None

    def zero(self):
        return NCPoly(self)

    def one(self):
        return NCPoly(self, {(): ONE})

    def scalar(self, s):
        if isinstance(s, int):
            s = QScalar.from_int(s)
        return NCPoly(self, {(): s}) if s else NCPoly(self)

    def gen(self, name, exp=1):
        self.generator(name)
        return NCPoly(self, {word_from_runs([(name, exp)], self): ONE})

    def word(self, runs):
        return word_from_runs(runs, self)

    def mono(self, runs, coeff=ONE):
        return NCPoly(self, {word_from_runs(runs, self): coeff})

    def poly(self, term_map):
        return NCPoly(self, {word_from_runs(w, self): c for w, c in term_map.items()})

    # -- ordering ----------------------------------------------------------

    def _is_violation(self, n1, n2):
        g1, g2 = self.by_name[n1], self.by_name[n2]
        r1, r2 = SORT_RANK[g1.sort], SORT_RANK[g2.sort]
        if r1 > r2:
            return True
        if r1 == r2 and r1 <= SORT_RANK["cartan"]:
            return self.position[n1] > self.position[n2]
        return False

    def measure(self, word):
        """Lexicographic termination measure of a raw word."""
        letters = [(self.by_name[n], abs(e)) for n, e in word]
        m1 = sum(
            e for g, e in letters if SORT_RANK[g.sort] >= SORT_RANK["raising"]
        )
        m2 = m3 = m4 = m5 = 0
        for i in range(len(letters)):
            gi, ei = letters[i]
            ri = SORT_RANK[gi.sort]
            for j in range(i + 1, len(letters)):
                gj, ej = letters[j]
                rj = SORT_RANK[gj.sort]
                if gi.sort == "lowering" and gj.sort == "raising":
                    m2 += ei * ej
                if ri >= SORT_RANK["raising"] and gj.sort == "cartan":
                    m3 += ei * ej
                if gi.sort != "central" and gj.sort == "central":
                    m4 += ei * ej
                if ri == rj and ri <= SORT_RANK["cartan"] and (
                    self.position[gi.name] > self.position[gj.name]
                ):
                    m5 += ei * ej
        return (m1, m2, m3, m4, m5)

    # -- rewrite engine ------------------------------------------------------

    def _first_violation(self, word):
        for i in range(len(word) - 1):
            if self._is_violation(word[i][0], word[i + 1][0]):
                return i
        return None

    def _apply_at(self, word, i):
        """One rule application at position i; returns [(word, coeff), ...]."""
        n1, e1 = word[i]
        n2, e2 = word[i + 1]
        swap = self.swap_rules.get((n1, n2))
        if swap is not None:
            factor = swap ** (e1 * e2)
            runs = list(word[:i]) + [(n2, e2), (n1, e1)] + list(word[i + 2 :])
            out = [(word_from_runs(runs, self), factor)]
        else:
            rhs = self.straighten_rules.get((n1, n2))
            if rhs is None:
                raise StructureError(
                    f"no rule for adjacent pair ({n1}, {n2}) in {self.name}"
                )
            prefix = list(word[:i])
            if e1 > 1:
                prefix.append((n1, e1 - 1))
            suffix = [] if e2 == 1 else [(n2, e2 - 1)]
            suffix += list(word[i + 2 :])
            out = []
            for w, c in rhs.terms.items():
                nw = word_from_runs(prefix + list(w) + suffix, self)
                out.append((nw, c))
        if check_measure:
            m = self.measure(word)
            for w, _ in out:
                assert self.measure(w) < m, (word, w)
        return out

    def word_nf(self, word):
        """Normal form of a single word as a {word: coeff} dict (cached)."""
        cache = self._nf_cache
        hit = cache.get(word)
        if hit is not None:
            return hit
        stack = [word]
        while stack:
            w = stack[-1]
            if w in cache:
                stack.pop()
                continue
            i = self._first_violation(w)
            if i is None:
                cache[w] = {w: ONE}
                stack.pop()
                continue
            targets = self._apply_at(w, i)
            pending = [t for t, _ in targets if t not in cache]
            if pending:
                stack.extend(pending)
                continue
            acc = {}
            for t, cf in targets:
                for bw, bc in cache[t].items():
                    s = acc.get(bw)
                    s = cf * bc if s is None else s + cf * bc
                    if s:
                        acc[bw] = s
                    elif bw in acc:
                        del acc[bw]
            cache[w] = acc
            stack.pop()
        return cache[word]

    def normal_form(self, p):
        """Linear, idempotent normal ordering of an NCPoly."""
        assert p.pres is self
        acc = {}
        for w, c in p.terms.items():
            for bw, bc in self.word_nf(w).items():
                s = acc.get(bw)
                s = c * bc if s is None else s + c * bc
                if s:
                    acc[bw] = s
                elif bw in acc:
                    del acc[bw]
        return NCPoly(self, acc)

    def multiply(self, p, r):
        """Normal form of the concatenation product."""
        assert p.pres is self and r.pres is self
        acc = {}
        for w1, c1 in p.terms.items():
            for w2, c2 in r.terms.items():
                c = c1 * c2
                for bw, bc in self.word_nf(word_concat(w1, w2, self)).items():
                    s = acc.get(bw)
                    s = c * bc if s is None else s + c * bc
                    if s:
                        acc[bw] = s
                    elif bw in acc:
                        del acc[bw]
        return NCPoly(self, acc)

    def rewrite_first_steps(self, word):
        """All single rule applications available on a raw word."""
        steps = []
        for i in range(len(word) - 1):
            if self._is_violation(word[i][0], word[i + 1][0]):
                targets = self._apply_at(word, i)
                steps.append((i, NCPoly(self, dict(targets))))
        return steps

    # -- structure queries --------------------------------------------------

    def is_group_like(self, name):
        entry = self.hopf.get(name)
        if entry is None:
            return False
        cop = entry.coproduct
        w = ((name, 1),)
        return len(cop) == 1 and cop[0][0] == w and cop[0][1] == w and cop[0][2] == ONE

    def grade(self, word):
        """Sum of grading weights over a word's letters."""
        return sum(self.by_name[n].grade_weight * e for n, e in word)

    # -- basis enumeration ----------------------------------------------------

    def basis_words(self, max_degree):
        """Normal-form basis words of degree <= max_degree, ordered by (degree, word)."""
        hit = self._basis_cache.get(max_degree)
        if hit is not None:
            return hit
        blocks = []
        for sort in SORTS:
            gens = [g for g in self.alphabet if g.sort == sort]
            if gens:
                blocks.append((sort, gens))
        by_degree = [self._block_words(b, max_degree) for b in blocks]
        words = []
        for total in range(max_degree + 1):
            bucket = []
            for split in _compositions(total, len(blocks)):
                parts = [by_degree[i][d] for i, d in enumerate(split)]
                for combo in itertools.product(*parts):
                    runs = [run for part in combo for run in part]
                    bucket.append(word_from_runs(runs, self))
            bucket.sort(key=self._word_key)
            words.extend(bucket)
        self._basis_cache[max_degree] = words
        return words

    def _word_key(self, word):
        return tuple((self.position[n], e) for n, e in word)

    def _block_words(self, block, max_degree):
        """Words of one sort block, indexed by exact degree."""
        sort, gens = block
        out = [[] for _ in range(max_degree + 1)]
        if SORT_RANK[sort] <= SORT_RANK["cartan"]:
            # commuting block: one run per generator, alphabet order
            def rec(i, deg_left, runs):
                if i == len(gens):
                    out[max_degree - deg_left].append(tuple(runs))
                    return
                g = gens[i]
                rec(i + 1, deg_left, runs)
                for d in range(1, deg_left + 1):
                    exps = (d, -d) if g.invertible else (d,)
                    for e in exps:
                        rec(i + 1, deg_left - d, runs + [(g.name, e)])

            rec(0, max_degree, [])
        else:
            # free block: run sequences with distinct adjacent letters
            def rec(deg_left, runs, last):
                out[max_degree - deg_left].append(tuple(runs))
                for g in gens:
                    if g.name == last:
                        continue
                    for d in range(1, deg_left + 1):
                        exps = (d, -d) if g.invertible else (d,)
                        for e in exps:
                            rec(deg_left - d, runs + [(g.name, e)], g.name)

            rec(max_degree, [], None)
        return out


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# -- Serre ideal membership ---------------------------------------------------


class _LinearSpan:
    """Row-reduced span of sparse vectors over QScalar."""

    def __init__(self):
        self.rows = []  # (pivot_key, {key: QScalar})

    def reduce(self, vec):
        vec = dict(vec)
        for pivot, row in self.rows:
            c = vec.get(pivot)
            if c:
                for k, v in row.items():
                    s = vec.get(k)
                    s = -c * v if s is None else s - c * v
                    if s:
                        vec[k] = s
                    elif k in vec:
                        del vec[k]
        return vec

    def add(self, vec):
        """Reduce and insert if independent; returns True if the span grew."""
        vec = self.reduce(vec)
        if not vec:
            return False
        pivot = sorted(vec)[0]
        inv = vec[pivot].inverse()
        row = {k: v * inv for k, v in vec.items()}
        self.rows.append((pivot, row))
        return True

    def contains(self, vec):
        return not self.reduce(vec)


def serre_ideal_membership(p, pres, max_degree):
    """Exact membership of p in the degree-bounded two-sided Serre ideal slice."""
    p = pres.normal_form(p)
    if p.degree() > max_degree:
        raise ValueError(
            f"element degree {p.degree()} exceeds maxDegree {max_degree}"
        )
    if not pres.serre_relators:
        return not p.terms
    span = _LinearSpan()
    for rel in pres.serre_relators:
        rel = pres.normal_form(rel)
        rd = rel.degree()
        if rd > max_degree:
            continue
        outer = pres.basis_words(max_degree - rd)
        for u in outer:
            du = word_degree(u)
            for v in outer:
                if du + rd + word_degree(v) > max_degree:
                    continue
                left = NCPoly(pres, {u: ONE})
                right = NCPoly(pres, {v: ONE})
                span.add(pres.multiply(pres.multiply(left, rel), right).terms)
    return span.contains(p.terms)


# -- local confluence ---------------------------------------------------------


def _signed_letters(pres):
    out = []
    for g in pres.alphabet:
        out.append((g.name, 1))
        if g.invertible:
            out.append((g.name, -1))
    return out


def local_confluence_report(pres, max_degree):
    """Rewrite every small word both ways at every divergent first step.

    For each word of length <= max_degree over signed unit letters and each
    available first rule application, the fully reduced result must agree with
    the engine's own normal form.  Any mismatch is a genuine confluence failure
    of the presentation's rule set.
    """
    report = Report("confluence", max_degree)
    letters = _signed_letters(pres)
    seen = set()
    for length in range(2, max_degree + 1):
        for combo in itertools.product(letters, repeat=length):
            word = word_from_runs(combo, pres)
            if word in seen or len(word) < 2:
                continue
            seen.add(word)
            steps = pres.rewrite_first_steps(word)
            if not steps:
                continue
            base = pres.word_nf(word)
            for pos, poly in steps:
                report.add_case()
                got = pres.normal_form(poly).terms
                if got != base:
                    report.fail(
                        f"{pres.name}: word={word} step at {pos}",
                        repr(sorted(got.items())),
                        repr(sorted(base.items())),
                    )
    return report
