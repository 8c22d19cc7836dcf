import math
import sys
from pathlib import Path

import numpy as np
from hypothesis import assume, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

# configurations are kept a few percent away from the zone boundaries, where
# alpha, N or the loop factor are singular by construction
MARGIN = 0.05


def _split(pt, angle):
    return pt * math.cos(angle), pt * math.sin(angle)


@st.composite
def diffusion_params(draw, with_p3=True):
    E = draw(st.floats(0.2, 20.0))
    V0 = draw(st.floats(0.0, 0.9)) * E
    frac = draw(st.floats(0.0, 1.0 - MARGIN))
    pt = frac * (E - V0)
    angle = draw(st.floats(-math.pi, math.pi)) if with_p3 else 0.0
    p2, p3 = _split(pt, angle)
    L = draw(st.floats(0.01, 50.0))
    return E, V0, p2, p3, L


@st.composite
def klein_params(draw):
    E = draw(st.floats(0.2, 20.0))
    V0 = E * draw(st.floats(1.1, 10.0))
    # head-on Klein incidence has alpha = -1 exactly, a pole of every step amplitude
    frac = draw(st.floats(MARGIN, 1.0 - MARGIN))
    pt = frac * min(E, V0 - E)
    p2, p3 = _split(pt, draw(st.floats(-math.pi, math.pi)))
    L = draw(st.floats(0.01, 50.0))
    return E, V0, p2, p3, L


@st.composite
def evanescent_params(draw):
    E = draw(st.floats(0.2, 20.0))
    V0 = E * draw(st.floats(0.1, 1.9))
    gap = abs(E - V0)
    pt = gap + draw(st.floats(0.01, 0.99)) * (E - gap)
    p2, p3 = _split(pt, draw(st.floats(-math.pi, math.pi)))
    # E - V0 + p3 c = 0 is a pole of alpha
    assume(abs(E - V0 + p3) > 1e-6 * E)
    return E, V0, p2, p3


def sample_diffusion(rng: np.random.Generator, n: int, margin: float = MARGIN):
    """Uniform draws over the same domain as ``diffusion_params``."""
    E = rng.uniform(0.2, 20.0, n)
    V0 = rng.uniform(0.0, 0.9, n) * E
    pt = rng.uniform(0.0, 1.0 - margin, n) * (E - V0)
    ang = rng.uniform(-math.pi, math.pi, n)
    L = rng.uniform(0.01, 50.0, n)
    return np.column_stack([E, V0, pt * np.cos(ang), pt * np.sin(ang), L])


def sample_klein(rng: np.random.Generator, n: int, margin: float = MARGIN):
    E = rng.uniform(0.2, 20.0, n)
    V0 = E * rng.uniform(1.1, 10.0, n)
    pt = rng.uniform(margin, 1.0 - margin, n) * np.minimum(E, V0 - E)
    ang = rng.uniform(-math.pi, math.pi, n)
    L = rng.uniform(0.01, 50.0, n)
    return np.column_stack([E, V0, pt * np.cos(ang), pt * np.sin(ang), L])


def sample_evanescent(rng: np.random.Generator, n: int):
    E = rng.uniform(0.2, 20.0, n)
    V0 = E * rng.uniform(0.1, 1.9, n)
    gap = np.abs(E - V0)
    pt = gap + rng.uniform(0.01, 0.99, n) * (E - gap)
    ang = rng.uniform(-math.pi, math.pi, n)
    return np.column_stack([E, V0, pt * np.cos(ang), pt * np.sin(ang)])
