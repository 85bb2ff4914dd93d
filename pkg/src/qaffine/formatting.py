"""Deterministic plain-text and JSON rendering of scalars, words, polynomials
and tensors.  Text output round-trips through the expression parser; term
order is the basis enumeration order (total degree, then word), so identical
inputs always render to identical bytes.
"""

from __future__ import annotations

from .qscalar import ONE, ONE_POLY, LaurentPoly, QScalar, poly_div_exact, poly_lcm


def _balance(num: LaurentPoly, den: LaurentPoly):
    """Display transform: shift the canonical denominator toward a symmetric
    q-range and make its top coefficient positive, e.g. 1 - q^2 with numerator
    -q displays as q - q^-1 with numerator 1.  Value preserving."""
    if den == ONE_POLY or not den:
        return num, den
    d = den.degree()
    shift = -(d // 2)
    num, den = num.shift(shift), den.shift(shift)
    if den.c[den.degree()] < 0:
        num, den = num.scale(-1), den.scale(-1)
    return num, den


def format_laurent(p: LaurentPoly) -> str:
    if not p:
        return "0"
    parts = []
    for e in sorted(p.c, reverse=True):
        v = p.c[e]
        if e == 0:
            body = str(abs(v))
        else:
            qq = "q" if e == 1 else f"q^{e}"
            a = abs(v)
            body = qq if a == 1 else f"{a}*{qq}"
        if not parts:
            parts.append(body if v > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if v > 0 else f" - {body}")
    return "".join(parts)


def _is_single_term(p: LaurentPoly) -> bool:
    return len(p.c) == 1


def format_scalar(s) -> str:
    """Canonical text for a QScalar, e.g. '1/(q - q^-1)' or 'q^2 + 1 + q^-2'."""
    if not s.num:
        return "0"
    if s.den == ONE_POLY:
        return format_laurent(s.num)
    bnum, bden = _balance(s.num, s.den)
    num = format_laurent(bnum)
    if not _is_single_term(bnum):
        num = f"({num})"
    return f"{num}/({format_laurent(bden)})"


def _scalar_factor(s) -> str:
    """Scalar rendered for use as a '*'-prefix of a word."""
    text = format_scalar(s)
    if s.den == ONE_POLY and not _is_single_term(s.num):
        return f"({text})"
    return text


def format_word(word) -> str:
    if not word:
        return "1"
    parts = []
    for name, exp in word:
        parts.append(name if exp == 1 else f"{name}^{exp}")
    return "*".join(parts)


def _word_key(pres, word):
    return (sum(abs(e) for _, e in word), tuple((pres.position[n], e) for n, e in word))


def _render_terms(parts):
    """Join pre-rendered signed term strings into a sum."""
    out = []
    for text in parts:
        if not out:
            out.append(text)
        elif text.startswith("-"):
            out.append(f" - {text[1:]}")
        else:
            out.append(f" + {text}")
    return "".join(out)


def _term_text(coeff, word_text):
    if word_text == "1":
        return format_scalar(coeff)
    if coeff == ONE:
        return word_text
    if coeff == -ONE:
        return f"-{word_text}"
    return f"{_scalar_factor(coeff)}*{word_text}"


def format_poly(p) -> str:
    """Common-denominator rendering of an NCPoly, '0' for zero."""
    p = p.normal_form()
    if not p.terms:
        return "0"
    pres = p.pres
    items = sorted(p.terms.items(), key=lambda kv: _word_key(pres, kv[0]))
    den = ONE_POLY
    for _, c in items:
        den = poly_lcm(den, c.den)
    if den == ONE_POLY:
        return _render_terms(_term_text(c, format_word(w)) for w, c in items)
    _, bden = _balance(ONE_POLY, den)
    cleared = []
    for w, c in items:
        mult = poly_div_exact(bden, c.den)
        cleared.append((w, QScalar(c.num * mult)))
    inner = _render_terms(_term_text(c, format_word(w)) for w, c in cleared)
    if len(cleared) > 1:
        inner = f"({inner})"
    return f"{inner}/({format_laurent(bden)})"


def format_tensor(t) -> str:
    """Tensor rendered with ' (x) '-separated legs."""
    if not t.terms:
        return "0"
    press = t.presentations
    items = sorted(
        t.terms.items(),
        key=lambda kv: (
            sum(sum(abs(e) for _, e in w) for w in kv[0]),
            tuple(_word_key(press[i], w) for i, w in enumerate(kv[0])),
        ),
    )
    parts = []
    for legs, c in items:
        body = " (x) ".join(format_word(w) for w in legs)
        if c == ONE:
            parts.append(body)
        elif c == -ONE:
            parts.append(f"-{body}")
        else:
            parts.append(f"{_scalar_factor(c)}*{body}")
    return _render_terms(parts)


# -- JSON builders ---------------------------------------------------------


def poly_to_json(p) -> dict:
    p = p.normal_form()
    pres = p.pres
    items = sorted(p.terms.items(), key=lambda kv: _word_key(pres, kv[0]))
    return {
        "type": "poly",
        "presentation": pres.name,
        "terms": [
            {"coeff": format_scalar(c), "word": format_word(w)} for w, c in items
        ],
    }


def tensor_to_json(t) -> dict:
    press = t.presentations
    items = sorted(
        t.terms.items(),
        key=lambda kv: (
            sum(sum(abs(e) for _, e in w) for w in kv[0]),
            tuple(_word_key(press[i], w) for i, w in enumerate(kv[0])),
        ),
    )
    return {
        "type": "tensor",
        "presentations": [p.name for p in press],
        "terms": [
            {"coeff": format_scalar(c), "legs": [format_word(w) for w in legs]}
            for legs, c in items
        ],
    }


def scalar_to_json(s) -> dict:
    return {"type": "scalar", "value": format_scalar(s)}
