"""Small numeric helpers shared across modules."""

import numpy as np
from scipy.stats import qmc

from .errors import InvalidInput, NumericalDegeneracy

# Relative threshold deciding which coordinate counts as "first nonzero"
# when gauge-fixing a homogeneous vector.
GAUGE_REL_TOL = 1e-9


def check_finite(a, name="array"):
    a = np.asarray(a)
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} contains non-finite entries")
    return a


def gauge_vector(v):
    """Canonical representative of a projective vector.

    Unit Euclidean norm, and the first coordinate whose modulus exceeds
    GAUGE_REL_TOL * max|v_i| is rotated to be real positive.  The result
    is the unique such representative, so equality of projective points
    becomes equality of arrays.
    """
    v = np.asarray(v, dtype=complex)
    nrm = np.linalg.norm(v)
    if nrm < 1e-14:
        raise NumericalDegeneracy("cannot gauge a numerically zero vector")
    v = v / nrm
    mags = np.abs(v)
    lead = int(np.argmax(mags > GAUGE_REL_TOL * mags.max()))
    phase = v[lead] / mags[lead]
    return v * np.conj(phase)


def gauge_rows(m):
    """Row-wise gauge_vector for a 2-d array of homogeneous vectors."""
    m = np.asarray(m, dtype=complex)
    nrm = np.linalg.norm(m, axis=1, keepdims=True)
    if np.any(nrm < 1e-14):
        raise NumericalDegeneracy("zero row in batch gauge")
    m = m / nrm
    mags = np.abs(m)
    lead = np.argmax(mags > GAUGE_REL_TOL * mags.max(axis=1, keepdims=True), axis=1)
    piv = m[np.arange(m.shape[0]), lead]
    return m * np.conj(piv / np.abs(piv))[:, None]


def hermitize(m):
    m = np.asarray(m)
    return 0.5 * (m + np.conj(np.swapaxes(m, -1, -2)))


def expm_antihermitian(x):
    """Matrix exponential of (stacks of) anti-Hermitian matrices via eigh.

    x satisfies x* = -x, so x = i h with h Hermitian and
    exp(x) = V diag(exp(i w)) V*.  Much faster than scipy expm for the
    small stacked matrices used in group-orbit sampling.
    """
    x = np.asarray(x, dtype=complex)
    h = -1j * x
    w, vec = np.linalg.eigh(hermitize(h))
    phase = np.exp(1j * w)
    return np.einsum("...ij,...j,...kj->...ik", vec, phase, np.conj(vec))


def sobol_points(dim, count, seed):
    """Deterministic scrambled-Sobol sample of [0,1)^dim.

    The sequence is extensible: the first k points of a longer draw with
    the same seed equal the shorter draw, which makes refinement of the
    coarse optimizer stage monotone.
    """
    if count <= 0:
        return np.zeros((0, dim))
    eng = qmc.Sobol(d=dim, scramble=True, seed=seed)
    # drawing a power-of-two block and slicing keeps the balance warning
    # quiet without changing the points of the common prefix
    block = 1 << max(0, int(np.ceil(np.log2(count))))
    return eng.random(block)[:count]


def cluster_points(points, tol):
    """Group near-duplicate vectors; returns one representative per cluster."""
    reps = []
    for p in points:
        if not any(np.linalg.norm(p - r) < tol for r in reps):
            reps.append(p)
    return reps


def thread_count():
    """Worker count from CYCLELAB_THREADS; 1 (serial) when unset or bad."""
    import os

    raw = os.environ.get("CYCLELAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_chunked(fn, rows, chunk=256):
    """Apply fn to fixed-size row blocks and concatenate the results.

    The block boundaries never depend on the worker count, so the
    concatenated output is byte-identical whether the blocks run serially
    or on a thread pool.  fn may return an array or a tuple of arrays.
    """
    rows = np.asarray(rows)
    if rows.shape[0] == 0:
        raise InvalidInput("run_chunked needs at least one row")
    blocks = [rows[i:i + chunk] for i in range(0, rows.shape[0], chunk)]
    workers = thread_count()
    if workers == 1 or len(blocks) == 1:
        results = [fn(b) for b in blocks]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(fn, blocks))
    if isinstance(results[0], tuple):
        return tuple(np.concatenate(parts, axis=0) for parts in zip(*results))
    return np.concatenate(results, axis=0)
