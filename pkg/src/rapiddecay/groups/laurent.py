"""Laurent polynomials over F_p and 2x2 matrices over them modulo scalars.

A Laurent polynomial is stored as ``(low, coeffs)``: ``coeffs[i]`` is the
coefficient of ``t**(low + i)``, both end coefficients are nonzero, and the
zero polynomial is ``(0, ())``.
"""

ZERO = (0, ())


def lp(coeffs_by_exp, p):
    """Build a normalized Laurent polynomial from ``{exponent: coeff}``."""
    items = {e: c % p for e, c in coeffs_by_exp.items() if c % p}
    if not items:
        return ZERO
    lo, hi = min(items), max(items)
    return (lo, tuple(items.get(e, 0) for e in range(lo, hi + 1)))


def _trim(low, coeffs):
    i, j = 0, len(coeffs)
    while i < j and coeffs[i] == 0:
        i += 1
    while j > i and coeffs[j - 1] == 0:
        j -= 1
    if i == j:
        return ZERO
    return (low + i, tuple(coeffs[i:j]))


def monomial(c, k, p):
    c %= p
    return (k, (c,)) if c else ZERO


def add(f, g, p):
    if not f[1]:
        return g
    if not g[1]:
        return f
    lo = min(f[0], g[0])
    hi = max(f[0] + len(f[1]), g[0] + len(g[1]))
    out = [0] * (hi - lo)
    for i, c in enumerate(f[1]):
        out[f[0] - lo + i] += c
    for i, c in enumerate(g[1]):
        out[g[0] - lo + i] += c
    return _trim(lo, [c % p for c in out])


def neg(f, p):
    return (f[0], tuple((-c) % p for c in f[1])) if f[1] else ZERO


def mul(f, g, p):
    if not f[1] or not g[1]:
        return ZERO
    out = [0] * (len(f[1]) + len(g[1]) - 1)
    for i, a in enumerate(f[1]):
        if a:
            for j, b in enumerate(g[1]):
                out[i + j] += a * b
    return _trim(f[0] + g[0], [c % p for c in out])


def scale(f, c, k, p):
    """Multiply by the unit ``c * t**k``."""
    if not f[1]:
        return ZERO
    return (f[0] + k, tuple((c * x) % p for x in f[1]))


def degree_span(f):
    """(lowest, highest) exponent of a nonzero polynomial."""
    return f[0], f[0] + len(f[1]) - 1


def to_str(f, var="t"):
    if not f[1]:
        return "0"
    terms = []
    for i, c in enumerate(f[1]):
        if not c:
            continue
        e = f[0] + i
        if e == 0:
            mono = ""
        elif e == 1:
            mono = var
        else:
            mono = f"{var}^{e}"
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}{mono}")
    return "+".join(terms)


# -- 2x2 matrices modulo the centre (unit scalars c*t^k) ------------------

def mat_normalize(m, p):
    """Scale so the first nonzero entry has lowest term ``1 * t**0``."""
    for entry in m:
        if entry[1]:
            k, c = entry[0], entry[1][0]
            cinv = pow(c, p - 2, p)
            return tuple(scale(x, cinv, -k, p) for x in m)
    raise ValueError("zero matrix is not invertible")


def mat_mul(m, n, p):
    a, b, c, d = m
    e, f, g, h = n
    return mat_normalize((
        add(mul(a, e, p), mul(b, g, p), p),
        add(mul(a, f, p), mul(b, h, p), p),
        add(mul(c, e, p), mul(d, g, p), p),
        add(mul(c, f, p), mul(d, h, p), p),
    ), p)


def mat_inv(m, p):
    # adjugate; the determinant is a unit, so this agrees with the inverse mod scalars
    a, b, c, d = m
    return mat_normalize((d, neg(b, p), neg(c, p), a), p)


def mat_det(m, p):
    a, b, c, d = m
    return add(mul(a, d, p), neg(mul(b, c, p), p), p)


def mat_to_str(m):
    return "[[{},{}],[{},{}]]".format(*(to_str(x) for x in m))
