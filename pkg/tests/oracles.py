"""Independent reference computations used by the tests.

Nothing here imports the package; values are cross-checked against it.
"""
import cmath
import math

import mpmath as mp

OMEGA = cmath.exp(1j * math.pi / 3)


def lobachevsky(theta, dps=30):
    # Л(θ) = Cl2(2θ) / 2
    with mp.workdps(dps):
        return mp.clsin(2, 2 * theta) / 2


def regular_tet_volume():
    return float(3 * lobachevsky(mp.pi / 3))


def bloch_wigner(z, dps=30):
    with mp.workdps(dps):
        z = mp.mpc(z)
        return float(mp.im(mp.polylog(2, z)) + mp.arg(1 - z) * mp.log(abs(z)))


def quadratic_roots(a, b, c):
    disc = cmath.sqrt(b * b - 4 * a * c)
    return (-b + disc) / (2 * a), (-b - disc) / (2 * a)


def fig8_filled_volume(p, q, steps=40, dps=30):
    """Two-shape figure-8 system: z(1-z)w(1-w) = 1, meridian z(1-w),
    longitude z^2(1-z)^2; solved by mpmath along the target ray."""
    with mp.workdps(dps):
        z = w = mp.exp(1j * mp.pi / 3)
        for k in range(1, steps + 1):
            s = mp.mpf(k) / steps

            def f(z, w):
                edge = mp.log(z) + mp.log(1 - z) + mp.log(w) + mp.log(1 - w)
                m = mp.log(z) + mp.log(1 - w)
                l = 2 * (mp.log(z) + mp.log(1 - z))
                return [edge, p * m + q * l - s * 2j * mp.pi]

            z, w = mp.findroot(f, (z, w))
        return bloch_wigner(complex(z), dps) + bloch_wigner(complex(w), dps)


def rotate(p, centre, angle):
    return centre + (p - centre) * cmath.exp(1j * angle)


def napoleon_centres_by_rotation(v0, v1, v2):
    """Apex found by rotating one endpoint about the other by -60 degrees
    for a counterclockwise triangle (so the apex lands outside)."""
    ccw = ((v1 - v0).conjugate() * (v2 - v0)).imag >= 0
    ang = -math.pi / 3 if ccw else math.pi / 3
    out = []
    for a, b in ((v2, v0), (v1, v2), (v0, v1)):
        apex = rotate(b, a, ang)
        out.append((a + b + apex) / 3)
    return tuple(out)


def shoelace(pts):
    n = len(pts)
    return 0.5 * sum(pts[k].real * pts[(k + 1) % n].imag - pts[(k + 1) % n].real * pts[k].imag for k in range(n))


def nearest_winding(value_imag, hint_imag, span=3):
    return min(range(-span, span + 1), key=lambda k: abs(value_imag + 2 * math.pi * k - hint_imag))


# Frozen values from the oracles above (see test_oracles.py).
REGULAR_VOLUME = 1.0149416064096536
FIG8_VOLUME = 2.029883212819307
NAPOLEON_VOLUME = 18.26894891537377
FIG8_FILLED = {(5, 1): 0.9813688288922321, (6, 1): 1.2844853004683543, (7, 1): 1.463776644927239}
