"""Token calculus for the matrix-generator form of the construction.

M tokens are matrix generators with an auxiliary slot, a symbolic spectral
label and an integer central-charge shift on the argument (z * q^(shift*c)).
R tokens are opaque invertible matrices acting on a pair of slots; the only
rewrite between R tokens is commutation across disjoint slots.  The mixed
relation

    M^-_i(z) M^+_j(w) R_ij(z/w) = R_ij(z/w q^-2c) M^+_j(w) M^-_i(z)

drives normal ordering: every adjacent (-,+) pair emits an R token on the far
left and its inverse on the far right.  In the loop quotient (q^c = 1) the
emitted left tokens carry shift 0.

The antipode treats R tokens as scalar matrices: they keep their matrix
positions while the M-word between them is reversed and inverted, matching
the worked matrix computations this module reproduces.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, replace

from .errors import SearchExhaustedError


@dataclass(frozen=True, order=True)
class MToken:
    sign: int  # +1 or -1
    slot: int
    label: str
    cshift: int = 0
    inverted: bool = False

    def text(self, affine=True):
        letter = "M" if affine else "m"
        sgn = "+" if self.sign > 0 else "-"
        arg = self.label
        if self.cshift:
            arg += f"*q^{self.cshift}c"
        body = f"{letter}^{sgn}_{self.slot}({arg})"
        return f"({letter}^{sgn})^-1_{self.slot}({arg})" if self.inverted else body


@dataclass(frozen=True, order=True)
class RToken:
    slots: tuple  # (i, j), i != j
    labels: tuple  # (z_i, z_j) as an ordered ratio z_i / z_j
    cshift: int = 0
    inverted: bool = False

    def __post_init__(self):
        if self.slots[0] == self.slots[1]:
            raise ValueError("R token needs two distinct slots")

    def text(self):
        head = "R^-1" if self.inverted else "R"
        arg = f"{self.labels[0]}/{self.labels[1]}"
        if self.cshift:
            arg += f"; q^{self.cshift}c"
        return f"{head}[{self.slots[0]},{self.slots[1]}]({arg})"

    def to_json(self):
        return {
            "slots": list(self.slots),
            "ratio": list(self.labels),
            "cshift": self.cshift,
            "inv": self.inverted,
        }


@dataclass(frozen=True)
class Summand:
    left: tuple  # RToken sequence
    word: tuple  # MToken sequence
    right: tuple  # RToken sequence


@dataclass(frozen=True)
class RCElement:
    """Formal sum of (left R word, M word, right R word) triples."""

    summands: tuple
    affine: bool = False

    @classmethod
    def from_word(cls, tokens, affine=False):
        return cls((Summand((), tuple(tokens), ()),), affine)

    def single(self):
        assert len(self.summands) == 1
        return self.summands[0]

    def text(self):
        parts = []
        for s in self.summands:
            toks = [t.text() for t in s.left]
            toks += [t.text(self.affine) for t in s.word]
            toks += [t.text() for t in s.right]
            parts.append(" ".join(toks) if toks else "1")
        return " + ".join(parts)


def _check_slots_unique(tokens):
    slots = [t.slot for t in tokens]
    if len(set(slots)) != len(slots):
        raise ValueError(f"duplicate auxiliary slots in M word: {slots}")


def rc_normal_order(e, central_charge_active=True):
    """Put every summand's M word into (+ before -) order, emitting R tokens.

    Same-sign tokens are never reordered; each swap strictly decreases the
    number of (-,+) inversions, so this terminates.
    """
    out = []
    for s in e.summands:
        left, word, right = list(s.left), list(s.word), list(s.right)
        _check_slots_unique(word)
        while True:
            pos = None
            for i in range(len(word) - 1):
                a, b = word[i], word[i + 1]
                if (
                    not a.inverted
                    and not b.inverted
                    and a.sign < 0
                    and b.sign > 0
                ):
                    pos = i
                    break
            if pos is None:
                break
            a, b = word[pos], word[pos + 1]
            shift = a.cshift - b.cshift
            lshift = shift - 2 if central_charge_active else shift
            pair = (a.slot, b.slot)
            labels = (a.label, b.label)
            left.append(RToken(pair, labels, lshift, False))
            right.insert(0, RToken(pair, labels, shift, True))
            word[pos], word[pos + 1] = b, a
        out.append(Summand(tuple(left), tuple(word), tuple(right)))
    return RCElement(tuple(out), e.affine)


def rc_beta(e):
    """Coaction: shift every m^+ argument by q^c and every m^- by q^-c.

    R tokens are scalar matrices and pass through unchanged; for same-sign
    ratios the two shifts would cancel anyway.
    """
    out = []
    for s in e.summands:
        word = tuple(replace(t, cshift=t.cshift + t.sign) for t in s.word)
        out.append(Summand(s.left, word, s.right))
    return RCElement(tuple(out), e.affine)


def rc_j(e):
    """Reinterpret loop tokens as affine tokens (slots, labels, shifts kept)."""
    return RCElement(e.summands, affine=True)


def _antipode_token(t):
    return replace(t, cshift=t.cshift - t.sign, inverted=not t.inverted)


def _antipode_summand(s):
    """Antipode of one summand: R tokens keep their matrix positions, the M
    word is reversed with each token inverted and its shift moved by -sign."""
    word = tuple(_antipode_token(t) for t in reversed(s.word))
    return Summand(s.left, word, s.right)


def rc_antipode(word_tokens):
    """Antipode of an M word: reverse, invert, shift arguments by q^(-+c)."""
    word = tuple(_antipode_token(t) for t in reversed(tuple(word_tokens)))
    return RCElement((Summand((), word, ()),), affine=True)


# -- simplification search ------------------------------------------------------


def _is_inverse_pair(a, b):
    if isinstance(a, MToken) and isinstance(b, MToken):
        return (
            a.sign == b.sign
            and a.slot == b.slot
            and a.label == b.label
            and a.cshift == b.cshift
            and a.inverted != b.inverted
        )
    if isinstance(a, RToken) and isinstance(b, RToken):
        return (
            a.slots == b.slots
            and a.labels == b.labels
            and a.cshift == b.cshift
            and a.inverted != b.inverted
        )
    return False


def _slotset(t):
    return {t.slot} if isinstance(t, MToken) else set(t.slots)


def _disjoint(a, b):
    return not (_slotset(a) & _slotset(b))


def _commutes_past(t, others):
    """A token may travel past `others` iff it is scalar-ish relative to them:
    R tokens commute with anything slot-disjoint; M tokens only with slot-
    disjoint R tokens."""
    for o in others:
        if not _disjoint(t, o):
            return False
        if isinstance(t, MToken) and isinstance(o, MToken):
            return False
    return True


def _rkey(t):
    return (t.slots, t.inverted, t.cshift, t.labels)


def _cleanup(seq):
    """Normalize a token sequence without changing its value.

    Cancels inverse pairs that can legally meet, slides R tokens left past
    slot-disjoint neighbours and key-sorts commuting R pairs, repeatedly.
    States reached by different orders of independent moves collapse to the
    same normal form, which keeps the search space small.
    """
    seq = list(seq)
    while True:
        changed = False
        n = len(seq)
        for i in range(n - 1):
            for j in range(i + 1, n):
                if _is_inverse_pair(seq[i], seq[j]) and _commutes_past(
                    seq[i], seq[i + 1 : j]
                ):
                    del seq[j]
                    del seq[i]
                    changed = True
                    break
            if changed:
                break
        if changed:
            continue
        for i in range(1, len(seq)):
            a, b = seq[i - 1], seq[i]
            if not isinstance(b, RToken) or not _disjoint(a, b):
                continue
            if isinstance(a, MToken) or _rkey(a) > _rkey(b):
                seq[i - 1], seq[i] = b, a
                changed = True
        if not changed:
            return tuple(seq)


def _successors(seq):
    """All one-relation rewrites of a token sequence (cross relations in both
    directions, with and without capturing an adjacent R token, plus disjoint
    commutations)."""
    out = []
    n = len(seq)
    for i in range(n - 1):
        t1, t2 = seq[i], seq[i + 1]
        if isinstance(t1, MToken) and isinstance(t2, MToken):
            if not t1.inverted and not t2.inverted:
                if t1.sign < 0 and t2.sign > 0:
                    a, b = t1, t2
                    s = a.cshift - b.cshift
                    pair, labels = (a.slot, b.slot), (a.label, b.label)
                    captured = False
                    if i + 2 < n:
                        t3 = seq[i + 2]
                        if (
                            isinstance(t3, RToken)
                            and not t3.inverted
                            and t3.slots == pair
                            and t3.labels == labels
                            and t3.cshift == s
                        ):
                            out.append(
                                seq[:i]
                                + (RToken(pair, labels, s - 2, False), b, a)
                                + seq[i + 3 :]
                            )
                            captured = True
                    if not captured:
                        out.append(
                            seq[:i]
                            + (
                                RToken(pair, labels, s - 2, False),
                                b,
                                a,
                                RToken(pair, labels, s, True),
                            )
                            + seq[i + 2 :]
                        )
                elif t1.sign > 0 and t2.sign < 0:
                    b, a = t1, t2
                    s = a.cshift - b.cshift
                    pair, labels = (a.slot, b.slot), (a.label, b.label)
                    out.append(
                        seq[:i]
                        + (
                            RToken(pair, labels, s - 2, True),
                            a,
                            b,
                            RToken(pair, labels, s, False),
                        )
                        + seq[i + 2 :]
                    )
            elif t1.inverted and t2.inverted:
                if t1.sign > 0 and t2.sign < 0:
                    b, a = t1, t2
                    s = a.cshift - b.cshift
                    pair, labels = (a.slot, b.slot), (a.label, b.label)
                    out.append(
                        seq[:i]
                        + (
                            RToken(pair, labels, s, False),
                            a,
                            b,
                            RToken(pair, labels, s - 2, True),
                        )
                        + seq[i + 2 :]
                    )
                elif t1.sign < 0 and t2.sign > 0:
                    a, b = t1, t2
                    s = a.cshift - b.cshift
                    pair, labels = (a.slot, b.slot), (a.label, b.label)
                    out.append(
                        seq[:i]
                        + (
                            RToken(pair, labels, s, True),
                            b,
                            a,
                            RToken(pair, labels, s - 2, False),
                        )
                        + seq[i + 2 :]
                    )
        # capture with R on the left: R(s-2) M^+ M^-  ->  M^- M^+ R(s)
        if (
            isinstance(t1, RToken)
            and not t1.inverted
            and i + 2 < n
            and isinstance(t2, MToken)
            and isinstance(seq[i + 2], MToken)
            and not t2.inverted
            and not seq[i + 2].inverted
            and t2.sign > 0
            and seq[i + 2].sign < 0
        ):
            b, a = t2, seq[i + 2]
            s = a.cshift - b.cshift
            if t1.slots == (a.slot, b.slot) and t1.labels == (a.label, b.label) and (
                t1.cshift == s - 2
            ):
                out.append(
                    seq[:i]
                    + (a, b, RToken(t1.slots, t1.labels, s, False))
                    + seq[i + 3 :]
                )
        # disjoint commutation (any R with a slot-disjoint neighbour)
        if (isinstance(t1, RToken) or isinstance(t2, RToken)) and _disjoint(t1, t2):
            out.append(seq[:i] + (t2, t1) + seq[i + 2 :])
    return out


def _score(seq):
    m_count = sum(1 for t in seq if isinstance(t, MToken))
    inversions = 0
    ms = [t for t in seq if isinstance(t, MToken)]
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            if not ms[i].inverted and not ms[j].inverted:
                if ms[i].sign < 0 and ms[j].sign > 0:
                    inversions += 1
            elif ms[i].inverted and ms[j].inverted:
                if ms[i].sign > 0 and ms[j].sign < 0:
                    inversions += 1
    return (m_count, inversions, len(seq))


def _simplify_to_pure_r(seq, max_depth, max_states):
    """Best-first bounded search for an M-free form of the token sequence."""
    start = _cleanup(seq)
    counter = 0
    frontier = [(_score(start), 0, counter, start)]
    visited = {start}
    while frontier:
        score, depth, _, state = heapq.heappop(frontier)
        if score[0] == 0:
            return state
        if depth >= max_depth:
            continue
        for nxt in _successors(state):
            nxt = _cleanup(nxt)
            if nxt in visited:
                continue
            visited.add(nxt)
            if len(visited) > max_states:
                raise SearchExhaustedError(
                    f"token simplification exceeded {max_states} states"
                )
            counter += 1
            heapq.heappush(frontier, (_score(nxt), depth + 1, counter, nxt))
    raise SearchExhaustedError(
        f"no pure-R form within depth {max_depth}; input may be malformed"
    )


def _validate_sign_pure(tokens, expect_sign=None):
    tokens = tuple(tokens)
    signs = {t.sign for t in tokens}
    if len(signs) > 1:
        raise ValueError("cocycle arguments must be sign-pure M words")
    if expect_sign is not None and tokens and signs != {expect_sign}:
        raise ValueError(f"expected sign {expect_sign:+d} tokens")
    if any(t.inverted for t in tokens):
        raise ValueError("cocycle arguments must not contain inverted tokens")
    if any(t.cshift for t in tokens):
        raise ValueError("cocycle arguments live in the loop calculus (shift 0)")
    return tokens


def rc_cocycle_direct(left_word, right_word, max_depth=12, max_states=200000):
    """chi(left (x) right) evaluated by the full pipeline plus bounded search.

    Both arguments are sign-pure loop M words with distinct slots.  The result
    is the canonicalized pure-R token sequence; failure to reach one raises
    SearchExhaustedError.
    """
    h = _validate_sign_pure(left_word)
    g = _validate_sign_pure(right_word)
    _check_slots_unique(h + g)
    concat = RCElement.from_word(h + g, affine=False)
    ordered = rc_normal_order(concat, central_charge_active=False).single()
    shifted = rc_beta(RCElement((ordered,), False))
    lifted = rc_j(shifted).single()
    s_part = _antipode_summand(lifted)
    # j(h) j(g) * (S of the normal-ordered coacted lift), all in the affine calculus
    seq = tuple(h + g) + s_part.left + s_part.word + s_part.right
    result = _simplify_to_pure_r(seq, max_depth, max_states)
    assert all(isinstance(t, RToken) for t in result)
    return rc_canonicalize(result)


def rc_cocycle_closed(minus_word, plus_word):
    """Closed form of chi(minus (x) plus): the normal-ordering R pattern with
    shift -2 on every left token, followed by the inverse pattern unshifted."""
    h = _validate_sign_pure(minus_word)
    g = _validate_sign_pure(plus_word)
    _check_slots_unique(h + g)
    ordered = rc_normal_order(
        RCElement.from_word(h + g, affine=False), central_charge_active=False
    ).single()
    shifted_left = tuple(replace(t, cshift=t.cshift - 2) for t in ordered.left)
    return rc_canonicalize(shifted_left + ordered.right)


def rc_canonicalize(tokens):
    """Stable-sort adjacent commuting R tokens by (slots, inverted); equality
    of R sequences means equality after this pass."""
    seq = list(tokens)
    changed = True
    while changed:
        changed = False
        for i in range(len(seq) - 1):
            a, b = seq[i], seq[i + 1]
            if (
                isinstance(a, RToken)
                and isinstance(b, RToken)
                and _disjoint(a, b)
                and (a.slots, a.inverted, a.cshift, a.labels)
                > (b.slots, b.inverted, b.cshift, b.labels)
            ):
                seq[i], seq[i + 1] = b, a
                changed = True
    return tuple(seq)


def m_word(signs_slots_labels, affine=False):
    """Convenience builder: [(sign, slot, label), ...] -> MToken tuple."""
    return tuple(MToken(sign, slot, label) for sign, slot, label in signs_slots_labels)
