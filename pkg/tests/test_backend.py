"""Parity between the compiled series core and the pure-Python fallback."""

import numpy as np
import pytest

from mharmonic import BACKEND, get_backend

py = get_backend("python")
try:
    cy = get_backend("cython")
    HAVE_CY = True
except ImportError:  # pragma: no cover - build-env dependent
    cy = None
    HAVE_CY = False

needs_cython = pytest.mark.skipif(not HAVE_CY, reason="compiled core not built")


def test_backend_reported():
    assert BACKEND in ("python", "cython")


@needs_cython
@pytest.mark.parametrize(
    "args",
    [
        (1.3, 0.9, 2.4, 0.45 + 0.2j),
        (3.0, 3.0, 4.0, 0.49),
        (-4.0, 2.2, 1.1, 0.8),
        (2.0, 2.0, 7.0, -0.3),
    ],
)
def test_f21_series_parity(args):
    a, b, c, z = args
    va, na, ta, oa = py.f21_series(a, b, c, z, 1e-13, 10000)
    vb, nb, tb, ob = cy.f21_series(a, b, c, z, 1e-13, 10000)
    assert oa == ob and na == nb
    assert abs(va - vb) <= 1e-13 * max(1.0, abs(va))


@needs_cython
def test_f21_log_series_parity():
    import math

    from mharmonic.special import digamma

    a, b, m, z = 2.0, 3.0, 2, 0.85
    w = 1.0 - z
    seeds = (-0.5772156649015329, digamma(m + 1.0), digamma(a + m), digamma(b + m))
    va = py.f21_log_series(a, b, m, w, math.log(w), *seeds, 1e-13, 10000)
    vb = cy.f21_log_series(a, b, m, w, math.log(w), *seeds, 1e-13, 10000)
    assert abs(va[0] - vb[0]) <= 1e-12 * max(1.0, abs(va[0]))


@needs_cython
@pytest.mark.parametrize(
    "fn,args",
    [
        ("f1_shells", (1.3, 0.8, 1.1, 2.0, 0.4 + 0.1j, -0.3)),
        ("f3_shells", (1.3, 0.8, 1.1, 0.9, 2.0, 0.4, 0.35 - 0.2j)),
        ("fd1_shells", (1.5, 0.8, 1.2, 0.9, 2.0, 0.2, 0.15 + 0.1j, 0.15 - 0.1j, 0.25)),
        ("fd1_shells", (-2.0, 2.0, -2.0, 2.0, 2.0, 0.3, 0.2 + 0.2j, 0.2 - 0.2j, 0.6)),
    ],
)
def test_shell_parity(fn, args):
    va = getattr(py, fn)(*args, 1e-12, 300)
    vb = getattr(cy, fn)(*args, 1e-12, 300)
    assert va[3] and vb[3]
    assert abs(va[0] - vb[0]) <= 1e-11 * max(1.0, abs(va[0]))


@needs_cython
def test_pos_grid_parity():
    from mharmonic.special import digamma

    a, b, c = 3.0, 2.0, 7.0
    t = np.linspace(0.0, 0.999, 41)
    seeds = (digamma(a + 2), digamma(b + 2), digamma(3.0))
    va, oka = py.f21_pos_grid(a, b, c, t, 0.1, *seeds, 1e-14, 100000)
    vb, okb = cy.f21_pos_grid(a, b, c, t, 0.1, *seeds, 1e-14, 100000)
    assert oka and okb
    assert np.max(np.abs(va - vb) / np.maximum(np.abs(va), 1.0)) < 1e-12


@needs_cython
def test_forced_backend_selection(monkeypatch):
    import subprocess
    import sys

    code = (
        "import os; os.environ['MHARMONIC_BACKEND']='python';"
        "import mharmonic; print(mharmonic.BACKEND)"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True)
    assert out.stdout.strip() == "python"
