import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hgc import _canon_py, kernel_name
from hgc.graphcore import Flavor, _flat, canonicalize

from strategies import basis_graph, scrambled

FALLBACK_SCRIPT = """
import sys
sys.modules["hgc._canon"] = None  # make the compiled kernel unimportable
import hgc
from hgc import FormalSum, Flavor, Parameters, raw_named_graph
from hgc.complexes import differential
assert hgc.kernel_name() == "python", hgc.kernel_name()
p = Parameters(2, 6)
assert differential(FormalSum.inject(raw_named_graph("L"), p, Flavor.A)) == \\
    FormalSum.inject(raw_named_graph("D"), p, Flavor.A)
print("ok")
"""


def test_pure_python_fallback_is_selected_without_extension():
    out = subprocess.run([sys.executable, "-c", FALLBACK_SCRIPT], capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "ok"


try:
    from hgc import _canon as ext
except ImportError:
    ext = None

needs_ext = pytest.mark.skipif(ext is None, reason="compiled kernel not built")


@needs_ext
def test_compiled_kernel_selected():
    assert kernel_name() == "cython"


@needs_ext
@given(basis_graph(Flavor.APRIME, max_v=4, max_h=4), st.data())
def test_kernels_agree(pg, data):
    p, g = pg
    h = data.draw(scrambled(g))
    args = (*_flat(h), p.n_odd, p.m_odd)
    assert ext.canon_label(*args) == _canon_py.canon_label(*args)


@needs_ext
@given(basis_graph(Flavor.A), st.data())
def test_canonicalize_kernel_switch(pg, data):
    p, g = pg
    h = data.draw(scrambled(g))
    assert canonicalize(h, p, kernel="cython") == canonicalize(h, p, kernel="python")
