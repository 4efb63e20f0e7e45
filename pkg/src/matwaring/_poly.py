"""Dense univariate polynomials over an exact field.

A polynomial is a list of coefficients, lowest degree first.  Coefficients
only need ``+ - * /`` and comparison with ``0``; in practice they are
:class:`~matwaring.arithmetic.GaussianRational`.
"""


def trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def degree(p):
    p = trim(p)
    if len(p) == 1 and p[0] == 0:
        return -1
    return len(p) - 1


def monic(p):
    p = trim(p)
    lead = p[-1]
    return [c / lead for c in p]


def derivative(p):
    return trim([c * i for i, c in enumerate(p)][1:] or [p[0] * 0])


def sub(p, q):
    n = max(len(p), len(q))
    zero = (p[0] if p else q[0]) * 0
    out = [
        (p[i] if i < len(p) else zero) - (q[i] if i < len(q) else zero)
        for i in range(n)
    ]
    return trim(out)


def divmod_(p, q):
    p = trim(p)
    q = trim(q)
    dq = degree(q)
    if dq < 0:
        raise ZeroDivisionError("polynomial division by zero")
    zero = q[0] * 0
    rem = list(p)
    if degree(rem) < dq:
        return [zero], rem
    quot = [zero] * (len(rem) - dq)
    lead = q[-1]
    for shift in range(len(rem) - 1 - dq, -1, -1):
        coef = rem[shift + dq] / lead
        quot[shift] = coef
        if coef != 0:
            for i, c in enumerate(q):
                rem[shift + i] = rem[shift + i] - coef * c
    return trim(quot), trim(rem[:dq] or [zero])


def exact_div(p, q):
    quot, rem = divmod_(p, q)
    if degree(rem) >= 0:
        raise ArithmeticError("polynomial division is not exact")
    return quot


def gcd(p, q):
    p, q = trim(p), trim(q)
    while degree(q) >= 0:
        p, q = q, divmod_(p, q)[1]
    return monic(p)


def squarefree(p):
    """Yun's algorithm: return ``[(multiplicity, factor), ...]`` with monic
    square-free, pairwise coprime factors whose product (with powers) is
    ``monic(p)``.  Factors of degree 0 are omitted."""
    p = monic(p)
    dp = derivative(p)
    a = gcd(p, dp)
    b = exact_div(p, a)
    c = exact_div(dp, a)
    d = sub(c, derivative(b))
    out = []
    i = 1
    while degree(b) > 0:
        a = gcd(b, d)
        if degree(a) > 0:
            out.append((i, a))
        b = exact_div(b, a)
        c = exact_div(d, a)
        d = sub(c, derivative(b))
        i += 1
    return out


def evaluate(p, x):
    acc = p[-1] * 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def evaluate_with_derivative(p, x):
    """Horner evaluation of ``p(x)`` and ``p'(x)`` together."""
    val = p[-1] * 0
    der = val
    for c in reversed(p):
        der = der * x + val
        val = val * x + c
    return val, der
