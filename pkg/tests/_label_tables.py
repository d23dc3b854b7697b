"""Closed-form label conditions for the first two chain families, written
independently of the classifier's decision tables."""


def _sgn(x, tol):
    return 0 if abs(x) <= tol else (1 if x > 0 else -1)


def m1_label(inv_h, f, g, tol=1e-12):
    """Label of the first chain at time s, from 1/h(s), f(s) and g(s)."""
    x = inv_h
    first, second, third = x + f, x - g, g - f
    zeros = [abs(v) <= tol for v in (first, second, third)]
    if sum(zeros) == 2:
        return "E4"
    if zeros[0]:
        return "E5" if f * f > g * g else "E6"
    if zeros[1]:
        return "E5" if g * g > f * f else "E6"
    if zeros[2]:
        return "E5" if x * x > f * f else "E6"
    d = 2 * x + f - g
    if _sgn(d, tol) == 0:
        return "E8"
    cd = _sgn(third * d, tol)
    # the uniform 2/h(s) coefficient; only its sign matters
    big = _sgn(2 * x * first * second * d, tol)
    if cd > 0 and big > 0:
        return "E7"
    if cd < 0 and big < 0:
        return "E9"
    return "E8"


def m2_label(a, b, tol=1e-12):
    """Label of the second chain below the threshold, from a = psi(s) and b = phi(s)."""
    one_a, one_b, ba = 1 + a, 1 - b, b - a
    zeros = [abs(v) <= tol for v in (one_a, one_b, ba)]
    if sum(zeros) >= 2:
        return "E4"
    if zeros[0]:
        return "E5" if abs(b) < 1 else "E6"
    if zeros[1]:
        return "E5" if abs(a) < 1 else "E6"
    if zeros[2]:
        return "E5" if abs(a) < 1 else "E6"
    d = 2 + a - b
    if _sgn(d, tol) == 0:
        return "E8"
    first = _sgn(one_a * one_b * d, tol)
    second = _sgn(ba * d, tol)
    if first > 0 and second > 0:
        return "E7"
    if first < 0 and second < 0:
        return "E9"
    return "E8"
