import numpy as np
import pytest
from hypothesis import strategies as st

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def record():
    """Collect one pass/fail line per acceptance criterion."""

    def _record(number, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)


unit = st.floats(-1, 1, allow_nan=False, allow_infinity=False)
complex_unit = st.builds(complex, unit, unit)


@st.composite
def normal_forms(draw, normalized=False):
    from crgauss.tensor import NormalForm

    c = 0j if normalized else draw(complex_unit)
    return NormalForm(draw(unit), draw(complex_unit), c)


@st.composite
def su2_elements(draw):
    from crgauss.normalize import SU2Element

    v = np.array(draw(st.lists(st.floats(-1, 1, allow_nan=False), min_size=4, max_size=4)))
    n = np.linalg.norm(v)
    if n < 1e-3:
        v, n = np.array([1.0, 0, 0, 0]), 1.0
    v = v / n
    return SU2Element(complex(v[0], v[1]), complex(v[2], v[3]))


@st.composite
def zetas(draw):
    return np.array([draw(complex_unit), draw(complex_unit)])


@st.composite
def hermitian3(draw):
    d = [draw(unit) for _ in range(3)]
    o = [draw(complex_unit) for _ in range(3)]
    return np.array(
        [
            [d[0], o[0], o[1]],
            [np.conj(o[0]), d[1], o[2]],
            [np.conj(o[1]), np.conj(o[2]), d[2]],
        ],
        dtype=complex,
    )


def random_hermitian(rng, n=3):
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (G + G.conj().T) / 2
