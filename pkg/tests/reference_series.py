"""Reference invariant-curve coefficients, transcribed as sympy expressions in g = gamma."""
import sympy

g = sympy.Symbol("g")
R = sympy.Rational

S_PINF_6 = [2, -1, -g / 6, -g / 36, -g * (3 * g + 1) / 216, -g * (9 * g + 1) / 1296,
            -g * (6 * g**2 + 18 * g + 1) / 7776]
F_PINF_6 = [2, -1, g / 6, g / 36, -g * (3 * g - 1) / 216, -g * (9 * g - 1) / 1296,
            g * (6 * g**2 - 18 * g + 1) / 7776]

S_PMINF_10 = [
    0, 0, -g / 2, -g / 4, g / 8 * (g - 1), g / 16 * (g - 1), g / 32 * (-1 - 2 * g + 2 * g**2),
    g / 64 * (-1 - 10 * g + 20 * g**2), -g / 128 * (1 + 25 * g - 74 * g**2 + 19 * g**3),
    -g / 256 * (1 + 49 * g - 168 * g**2 + 49 * g**3),
    -g / 512 * (1 + 84 * g - 252 * g**2 - 284 * g**3 + 138 * g**4),
]
F_PMINF_10 = [
    0, 0, g / 2, g / 4, g / 8 * (g + 1), g / 16 * (g + 1), g / 32 * (1 - 2 * g - 2 * g**2),
    g / 64 * (1 - 10 * g - 20 * g**2), -g / 128 * (-1 + 25 * g + 74 * g**2 + 19 * g**3),
    -g / 256 * (-1 + 49 * g + 168 * g**2 + 49 * g**3),
    g / 512 * (1 - 84 * g - 252 * g**2 + 284 * g**3 + 138 * g**4),
]


def as_rationals(expr):
    """Coefficient list (constant first) of a polynomial in g, as Fractions."""
    from fractions import Fraction

    poly = sympy.Poly(sympy.expand(expr), g)
    coeffs = list(reversed(poly.all_coeffs()))
    out = [Fraction(int(c.p), int(c.q)) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def gamma_poly_rationals(poly):
    out = list(poly.coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)
