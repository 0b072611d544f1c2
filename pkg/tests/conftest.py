import numpy as np
import pytest


def assert_multiset_close(a, b, tol=1e-8):
    """Greedy nearest-neighbour matching of two complex multisets."""
    a = np.asarray(a, dtype=complex).ravel().copy()
    b = np.asarray(b, dtype=complex).ravel().copy()
    assert a.size == b.size, f"sizes differ: {a.size} vs {b.size}"
    remaining = list(range(b.size))
    worst = 0.0
    for x in a:
        dists = [abs(x - b[j]) for j in remaining]
        k = int(np.argmin(dists))
        worst = max(worst, dists[k])
        remaining.pop(k)
    assert worst <= tol, f"multiset mismatch: worst pair distance {worst:.3e} > {tol:.1e}"


@pytest.fixture
def rng():
    return np.random.default_rng(20250808)
