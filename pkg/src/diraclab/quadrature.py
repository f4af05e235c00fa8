"""Small Gauss-Legendre toolbox used across the package.

Everything here works on vectorized integrands: ``f(t)`` must accept a 1-d
numpy array and return an array of the same length (real or complex).
"""

import functools

import numpy as np

from .errors import ResolutionError

DEFAULT_ORDER = 8
MAX_ADAPT_DEPTH = 24


@functools.lru_cache(maxsize=None)
def gl_nodes(order=DEFAULT_ORDER):
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


@functools.lru_cache(maxsize=None)
def partial_integration_matrix(order=DEFAULT_ORDER):
    """Matrix B with B[i, j] = integral of the j-th Lagrange basis from x_i to 1.

    Applied to nodal values f(x_j) it returns the tail integrals
    ``int_{x_i}^{1} p(t) dt`` of the interpolating polynomial p.
    """
    x, _ = gl_nodes(order)
    # Vandermonde solve is fine at order 8; the basis stays well conditioned.
    vander = np.vander(x, order, increasing=True)
    coeff_to_nodal_inv = np.linalg.inv(vander)
    powers = np.arange(1, order + 1, dtype=float)
    upper = 1.0 ** powers / powers
    lower = x[:, None] ** powers[None, :] / powers[None, :]
    # integral of t^k from x_i to 1, then back to nodal values
    mono = upper[None, :] - lower
    return mono @ coeff_to_nodal_inv


def cell_nodes(edges, order=DEFAULT_ORDER):
    """All Gauss-Legendre nodes for the cells delimited by ``edges``.

    Returns (nodes, weights) flattened over cells; weights already carry the
    cell half-widths, so a plain dot with f(nodes) integrates over [a, b].
    """
    edges = np.asarray(edges, dtype=float)
    x, w = gl_nodes(order)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def composite_gl(f, edges, order=DEFAULT_ORDER):
    """Integrate f over the union of cells given by ``edges``."""
    nodes, weights = cell_nodes(edges, order)
    return np.sum(f(nodes) * weights)


def adaptive_gl(f, a, b, rel_tol=1e-10, abs_tol=1e-13, order=DEFAULT_ORDER,
                max_depth=MAX_ADAPT_DEPTH):
    """Adaptive Gauss-Legendre on [a, b] with interval bisection.

    The error estimate on each interval compares one panel against its two
    halves; intervals are split until the difference is below tolerance.
    """
    if a == b:
        return 0.0 + 0.0j

    def panel(lo, hi):
        nodes, weights = cell_nodes(np.array([lo, hi]), order)
        return np.sum(f(nodes) * weights)

    total = 0.0 + 0.0j
    stack = [(a, b, panel(a, b), 0)]
    while stack:
        lo, hi, coarse, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = panel(lo, mid)
        right = panel(mid, hi)
        fine = left + right
        err = abs(fine - coarse)
        if err <= max(abs_tol, rel_tol * abs(fine)) or depth >= max_depth:
            if depth >= max_depth and err > 1e3 * max(abs_tol, rel_tol * abs(fine)):
                raise ResolutionError(
                    f"adaptive quadrature stalled on [{lo}, {hi}] (err={err:.2e})")
            total += fine
        else:
            stack.append((lo, mid, left, depth + 1))
            stack.append((mid, hi, right, depth + 1))
    return total


def refine_until_stable(values_fn, start, rel_tol=1e-12, abs_tol=1e-14,
                        max_level=14):
    """Double a resolution parameter until ``values_fn`` stabilizes.

    ``values_fn(n)`` must return a scalar; returns the converged value.
    """
    n = start
    prev = values_fn(n)
    for _ in range(max_level):
        n *= 2
        cur = values_fn(n)
        if abs(cur - prev) <= max(abs_tol, rel_tol * abs(cur)):
            return cur
        prev = cur
    raise ResolutionError("quadrature did not stabilize under refinement")


def merge_edges(*arrays):
    """Union of sorted edge arrays with exact duplicates removed."""
    merged = np.unique(np.concatenate([np.asarray(a, dtype=float)
                                       for a in arrays if len(a)]))
    return merged


def phase_graded_edges(a, b, freq_fn, phase_per_cell, max_cell, max_cells=4_000_000):
    """Cell edges on [a, b] keeping ``freq * width`` below phase_per_cell.

    ``freq_fn`` maps t to a local phase rate (rad per unit length); cells are
    never wider than ``max_cell``.
    """
    if b <= a:
        return np.array([a, b])
    edges = [a]
    t = a
    count = 0
    while t < b:
        freq = float(freq_fn(t + 1e-12))
        w = max_cell if freq <= 0 else min(max_cell, phase_per_cell / freq)
        # freq grows along the cell for chirps; look one cell ahead
        freq_end = float(freq_fn(min(t + w, b)))
        if freq_end > 0:
            w = min(w, phase_per_cell / freq_end)
        t = min(t + w, b)
        edges.append(t)
        count += 1
        if count > max_cells:
            raise ResolutionError("cell grid exceeds the supported size")
    edges[-1] = b
    return np.asarray(edges)
