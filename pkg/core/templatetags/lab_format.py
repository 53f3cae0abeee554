from django import template

register = template.Library()


@register.filter
def factorization(f):
    """
    Render a Factorization (or a list of (p, e) pairs) as "2 * 5^2".

    Usage: {{ fact|factorization }}
    - Empty factorizations render as "1".
    """
    pairs = getattr(f, "factors", f) or ()
    if not pairs:
        return "1"
    return " * ".join(str(p) if e == 1 else f"{p}^{e}" for p, e in pairs)


@register.filter
def gaussian_factors(pairs):
    """(γ, e) pairs as "(1+i)^1 (2+i)^2"."""
    return " ".join(f"({g})^{e}" for g, e in pairs or ())


@register.filter
def num(value, digits: int = 6):
    """Compact float formatting; ints and blanks pass through."""
    if value is None or value == "":
        return "-"
    if isinstance(value, bool) or isinstance(value, int):
        return str(value)
    try:
        return f"{float(value):.{int(digits)}g}"
    except (TypeError, ValueError):
        return str(value)


@register.filter
def ok(flag):
    return "ok" if flag else "FAILED"
