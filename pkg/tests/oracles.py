"""Extended-precision reference values.

Frozen constants were produced by the mpmath routines below at 60 digits;
the tests assert both that the implementation matches the frozen value and
that the frozen value still matches a fresh mpmath evaluation, so a stale
constant cannot hide.
"""

import mpmath as mp

mp.mp.dps = 60


def edge_length_mp(r_a, r_b, phi):
    r_a, r_b, phi = mp.mpf(r_a), mp.mpf(r_b), mp.mpf(phi)
    return mp.acosh(
        mp.cosh(r_a) * mp.cosh(r_b) + mp.cos(phi) * mp.sinh(r_a) * mp.sinh(r_b)
    )


def corner_angle_mp(lengths, t):
    la, lb, lo = lengths[(t + 1) % 3], lengths[(t + 2) % 3], lengths[t]
    return mp.acos(
        (mp.cosh(la) * mp.cosh(lb) - mp.cosh(lo)) / (mp.sinh(la) * mp.sinh(lb))
    )


def triangle_angles_mp(radii, weights):
    lengths = [
        edge_length_mp(radii[(t + 1) % 3], radii[(t + 2) % 3], weights[t])
        for t in range(3)
    ]
    return [corner_angle_mp(lengths, t) for t in range(3)]


# edge_length(1.0, 2.0, pi/3)
EDGE_LENGTH_1_2_PI3 = 2.7606288199639016

# corner angle of the unit-radius equilateral packing, tangency weights
THETA_EQUILATERAL_R1_W0 = 0.6599664042157994

# corner angle of the unit-radius equilateral packing, orthogonal weights
THETA_EQUILATERAL_R1_WPI2 = 0.7894469382770259

# u(1) = ln tanh(1/2)
U_OF_R1 = -0.7719368329053047

# zero-curvature packing of the minimal genus-2 mesh (center, rim radii)
GENUS2_FLAT_RC = 0.9198815281970776
GENUS2_FLAT_RV = 1.5285709194809982

# radius decay envelope at (r0=1, c=14*pi, t=0.1)
DECAY_CURVE_1_14PI_01 = 0.011367366692953467

# constrained grid minimum of the cosine-triple expression, c=-0.7, n=50
COSINE_GRID_MIN_C07_N50 = 0.9000000000000001
