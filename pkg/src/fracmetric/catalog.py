"""Built-in fractals and their closed-form metric criteria."""
from __future__ import annotations

from fractions import Fraction

from .fractal import FractalSpec

_BUILTINS = {
    "interval": FractalSpec("interval", 2, 2, (((1, 2), (2, 1)),)),
    "gasket": FractalSpec("gasket", 3, 3, (((1, 2), (2, 1)), ((1, 3), (3, 1)), ((2, 3), (3, 2)))),
    # psi_5 fixes the center; P1 is opposite P3 and P2 opposite P4
    "vicsek": FractalSpec("vicsek", 5, 4, (((1, 3), (5, 1)), ((2, 4), (5, 2)),
                                           ((3, 1), (5, 3)), ((4, 2), (5, 4)))),
}

BUILTIN_NAMES = tuple(_BUILTINS)

# each criterion: list of index groups whose ratios must sum to at least 1
_CLOSED_FORMS = {
    "interval": [(1, 2)],
    "gasket": [(1, 2), (1, 3), (2, 3)],
    "vicsek": [(1, 3, 5), (2, 4, 5)],
}


def builtin(name: str) -> FractalSpec:
    try:
        return _BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown builtin fractal {name!r}; choose from {', '.join(BUILTIN_NAMES)}") from None


def closed_form_groups(name: str) -> list[tuple[int, ...]]:
    if name not in _CLOSED_FORMS:
        raise KeyError(f"no closed form for {name!r}")
    return list(_CLOSED_FORMS[name])


def closed_form_metric(name: str, alpha) -> bool:
    """Exact evaluation of the sum-of-ratios criterion for a built-in."""
    groups = closed_form_groups(name)
    alpha = [Fraction(a) for a in alpha]
    return all(sum((alpha[i - 1] for i in g), Fraction(0)) >= 1 for g in groups)
