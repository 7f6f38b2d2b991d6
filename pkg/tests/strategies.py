"""Shared hypothesis strategies."""
from hypothesis import strategies as st

from promlin.corpus import monoid_corpus, tractable_templates
from promlin.eqsys import EquationSystem, Fix, Mul

MONOIDS = [M for _, M in monoid_corpus(8)]
SMALL_MONOIDS = [M for M in MONOIDS if M.size <= 4]


@st.composite
def monoid_and_elements(draw, k=2, pool=MONOIDS):
    M = draw(st.sampled_from(pool))
    return (M, *[draw(st.integers(0, M.size - 1)) for _ in range(k)])


@st.composite
def systems(draw, size: int, constants=None, max_vars: int = 4, max_eqs: int = 5):
    n = draw(st.integers(1, max_vars))
    vs = [f"x{i}" for i in range(n)]
    var = st.sampled_from(vs)
    consts = list(range(size)) if constants is None else list(constants)
    eq = st.builds(Mul, var, var, var)
    if consts:
        eq = eq | st.builds(Fix, var, st.sampled_from(consts))
    return EquationSystem(vs, draw(st.lists(eq, max_size=max_eqs)))


templates = st.sampled_from(list(tractable_templates()))
