"""Independent reference computations used by the tests."""

import itertools
import random

import numpy as np

from wittclass.fields import QQ
from wittclass.witt import hilbert_symbol

# Every isotropic diagonal form over Q with dim <= 4 and entries in
# [-10, 10] has a primitive zero with all coordinates in [-SEARCH_BOUND, SEARCH_BOUND];
# the acceptance run checks this bound empirically on every sampled form.
SEARCH_BOUND = 30


def isotropic_vector(coeffs, bound=SEARCH_BOUND):
    """A nonzero integer vector x with sum a_i x_i^2 = 0 and |x_i| <= bound, or None."""
    n = len(coeffs)
    if n < 2:
        return None
    *head, last = [int(a) for a in coeffs]
    r = np.arange(-bound, bound + 1, dtype=np.int64)
    grids = np.meshgrid(*([r] * (n - 1)), indexing="ij")
    s = sum(a * g * g for a, g in zip(head, grids))
    num = -s
    ok = num % last == 0
    y2 = np.where(ok, num // last, -1)
    y = np.where(y2 >= 0, np.round(np.sqrt(np.maximum(y2, 0))).astype(np.int64), -1)
    hit = ok & (y2 >= 0) & (y * y == y2) & (y <= bound)
    nonzero = np.zeros_like(hit)
    for g in grids:
        nonzero |= g != 0
    hit &= nonzero | (y > 0)
    idx = np.argwhere(hit)
    if not len(idx):
        return None
    i = tuple(idx[0])
    vec = [int(g[i]) for g in grids] + [int(y[i])]
    assert sum(a * x * x for a, x in zip(coeffs, vec)) == 0 and any(vec)
    return vec


def random_small_forms(count, seed, max_dim=4, height=10):
    rng = random.Random(seed)
    vals = [v for v in range(-height, height + 1) if v]
    return [
        [rng.choice(vals) for _ in range(rng.randint(1, max_dim))] for _ in range(count)
    ]


def _primes(n):
    n = abs(int(n))
    out, p = set(), 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    if n > 1:
        out.add(n)
    return out


def q_witt_invariants(entries):
    """Classical invariants of a diagonal form over Q that determine its
    Witt class: dim mod 2, signed discriminant, signature and the Hasse
    invariants at all primes involved."""
    entries = [
        int(x.numerator * x.denominator) if hasattr(x, "numerator") else int(x)
        for x in entries
    ]
    n = len(entries)
    det = 1
    for a in entries:
        det *= a
    sdet = (-1) ** (n * (n - 1) // 2) * det
    sig = sum(1 if a > 0 else -1 for a in entries)
    primes = {2}
    for a in entries:
        primes |= _primes(a)
    hasse = {}
    for p in sorted(primes):
        h = 1
        for i, j in itertools.combinations(range(n), 2):
            h *= hilbert_symbol(entries[i], entries[j], p)
        hasse[p] = h
    return n, sdet, sig, hasse


def q_witt_zero_oracle(entries):
    """Witt-zero over Q via Hasse-Minkowski on hyperbolic spaces."""
    n, sdet, sig, hasse = q_witt_invariants(entries)
    if n % 2 or sig != 0:
        return False
    if not QQ.is_square(sdet):
        return False
    m = n // 2
    # a hyperbolic space of dim 2m has Hasse invariant (-1,-1)^{m(m-1)/2} at every prime
    for p, h in hasse.items():
        target = hilbert_symbol(-1, -1, p) ** (m * (m - 1) // 2)
        if h != target:
            return False
    return True
