"""Cap acceptance probabilities and the bound functions built on them.

Normalization: every probability here is over uniform candidate pairs on
the domain, i.e. raw integrals are divided by measure^2. The unnormalized
value is recovered as value * measure^2.

The event estimator exploits an exact identity: a winner can land inside a
cap only when both candidates are inside it, so pairs are drawn inside the
cap and reweighted by (area / measure)^2. This is pure variance reduction;
`sample_mode="domain"` runs the plain estimator over the whole domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCandidates
from .geometry import (
    ALG_EPS,
    GEOM_EPS,
    UNIT_DISK,
    UNIT_SQUARE,
    Cap,
    Domain,
    HalfPlane,
    disk_segment_height,
    make_cap,
    square_cap_sides,
)

E = math.e


@dataclass(frozen=True)
class ProbEstimate:
    """Monte Carlo estimate with its standard error."""

    value: float
    stderr: float
    samples: int


@dataclass(frozen=True)
class CapRatio:
    """One grid point of a lower-bound ratio check."""

    param: object  # delta for disk segments, (a, b) for square triangles
    estimate: ProbEstimate
    bound: float
    ratio: float
    ratio_stderr: float


# ---------------------------------------------------------------------------
# Sampling inside caps
# ---------------------------------------------------------------------------


def sample_cap(cap: Cap, rng: np.random.Generator, n: int) -> np.ndarray:
    """n points uniform on the cap, shape (n, 2)."""
    kind = cap.domain.kind
    if kind == "interval":
        (lo, _), (hi, _) = cap.polygon
        return np.column_stack([lo + (hi - lo) * rng.random(n), np.zeros(n)])
    if kind == "square":
        return _sample_polygon(np.asarray(cap.polygon), rng, n)
    return _sample_disk_cap(cap.half, rng, n)


def _sample_polygon(verts: np.ndarray, rng, n: int) -> np.ndarray:
    """Uniform points in a convex polygon via a triangle fan."""
    v0 = verts[0]
    e1 = verts[1:-1] - v0
    e2 = verts[2:] - v0
    areas = 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    cum = np.cumsum(areas)
    idx = np.searchsorted(cum, rng.random(n) * cum[-1], side="right")
    idx = np.minimum(idx, len(areas) - 1)
    r1 = np.sqrt(rng.random(n))[:, None]
    r2 = rng.random(n)[:, None]
    return v0 + r1 * ((1.0 - r2) * e1[idx] + r2 * e2[idx])


def _sample_disk_cap(half: HalfPlane, rng, n: int) -> np.ndarray:
    """Rejection sampling of the disk cap {n . p <= c} from its bounding box
    in the (normal, tangent) frame; acceptance rate is at least ~2/3."""
    nx, ny = half.normal
    c = half.offset
    w = 1.0 if c > 0.0 else math.sqrt(max(0.0, 1.0 - c * c))
    out = np.empty((n, 2))
    filled = 0
    while filled < n:
        chunk = max(64, int(1.8 * (n - filled)))
        a = rng.random((chunk, 2))
        u = -1.0 + (c + 1.0) * a[:, 0]
        v = -w + 2.0 * w * a[:, 1]
        keep = u * u + v * v <= 1.0
        u, v = u[keep], v[keep]
        take = min(len(u), n - filled)
        out[filled : filled + take, 0] = u[:take] * nx - v[:take] * ny
        out[filled : filled + take, 1] = u[:take] * ny + v[:take] * nx
        filled += take
    return out


# ---------------------------------------------------------------------------
# Vectorized winner determination against a cap-complement hull
# ---------------------------------------------------------------------------


def _bisector_batch(w1: np.ndarray, w2: np.ndarray):
    """Unit normals and offsets of the bisector half-planes toward w1.

    Returns (normals, offsets, ok) where ok flags non-degenerate pairs.
    """
    u = w2 - w1
    ln = np.hypot(u[:, 0], u[:, 1])
    ok = ln >= ALG_EPS
    safe = np.where(ok, ln, 1.0)
    n = u / safe[:, None]
    c = 0.5 * ((w2 * w2).sum(1) - (w1 * w1).sum(1)) / safe
    return n, c, ok


def _abar_support(domain: Domain, abar: Cap, dirs: np.ndarray) -> np.ndarray:
    """Support function of the complement region Abar over unit directions."""
    if domain.kind == "disk":
        n0 = np.array(abar.half.normal)
        feas = dirs @ n0 <= abar.half.offset + GEOM_EPS
        z1 = abar.z1.as_array()
        z2 = abar.z2.as_array()
        on_chord = np.maximum(dirs @ z1, dirs @ z2)
        return np.where(feas, 1.0, on_chord)
    verts = np.asarray(abar.polygon)
    return (dirs @ verts.T).max(axis=1)


def _winner_batch(domain: Domain, abar: Cap, w1, w2) -> np.ndarray:
    """Winner index per pair (0 = none) when the member hull is Abar."""
    n, c, ok = _bisector_batch(w1, w2)
    out = np.zeros(len(w1), dtype=np.int8)
    win1 = ok & (_abar_support(domain, abar, n) <= c + GEOM_EPS)
    win2 = ok & ~win1 & (_abar_support(domain, abar, -n) <= -c + GEOM_EPS)
    out[win1] = 1
    out[win2] = 2
    return out


# ---------------------------------------------------------------------------
# Acceptance probability estimators (Z(A) given hull Abar)
# ---------------------------------------------------------------------------


def acceptance_prob_event(
    cap: Cap, samples: int, seed: int = 0, sample_mode: str = "cap"
) -> ProbEstimate:
    """Probability that a round's winner lands inside the cap, given the
    member hull is the cap's complement.

    Counts candidate pairs whose winner (by the support-function containment
    test) lies in the cap. In the default "cap" mode both candidates are
    drawn inside the cap and the frequency is reweighted by
    (area / measure)^2, which is exact because the winner can only be in the
    cap when the loser is too.
    """
    domain = cap.domain
    abar = make_cap(domain, cap.half.complement())
    rng = np.random.default_rng(seed)
    if sample_mode == "cap":
        w1 = sample_cap(cap, rng, samples)
        w2 = sample_cap(cap, rng, samples)
        hits = _winner_batch(domain, abar, w1, w2) != 0
        scale = (cap.area / domain.measure) ** 2
    elif sample_mode == "domain":
        w1 = domain.sample(rng, samples)
        w2 = domain.sample(rng, samples)
        winner = _winner_batch(domain, abar, w1, w2)
        wx = np.where(winner == 1, w1[:, 0], w2[:, 0])
        wy = np.where(winner == 1, w1[:, 1], w2[:, 1])
        nx, ny = cap.half.normal
        hits = (winner != 0) & (wx * nx + wy * ny <= cap.half.offset + GEOM_EPS)
        scale = 1.0
    else:
        raise ValueError(f"unknown sample_mode {sample_mode!r}")
    p = float(hits.mean())
    stderr = scale * math.sqrt(max(p * (1.0 - p), 0.0) / samples)
    return ProbEstimate(value=scale * p, stderr=stderr, samples=samples)


def acceptance_prob_integral(
    cap: Cap, outer_samples: int, inner_samples: int, seed: int = 0
) -> ProbEstimate:
    """The same probability through the chord-ball integral identity:
    2 * integral over A of vol(B(z1, xi) & B(z2, xi) & A) d xi, normalized
    by measure^2.

    Nested Monte Carlo: xi uniform in A (outer), u uniform in A (inner),
    indicator u in B(z1, xi) & B(z2, xi). The standard error comes from the
    spread of per-xi means, which accounts for both stages.
    """
    rng = np.random.default_rng(seed)
    xi = sample_cap(cap, rng, outer_samples)
    u = sample_cap(cap, rng, outer_samples * inner_samples).reshape(
        outer_samples, inner_samples, 2
    )
    z1 = cap.z1.as_array()
    z2 = cap.z2.as_array()
    r1 = ((xi - z1) ** 2).sum(1)
    r2 = ((xi - z2) ** 2).sum(1)
    d1 = ((u - z1) ** 2).sum(-1)
    d2 = ((u - z2) ** 2).sum(-1)
    ind = (d1 <= r1[:, None]) & (d2 <= r2[:, None])
    per_xi = ind.mean(axis=1)
    scale = 2.0 * cap.area**2 / cap.domain.measure**2
    mean = float(per_xi.mean())
    sd = float(per_xi.std(ddof=1)) if outer_samples > 1 else 0.0
    return ProbEstimate(
        value=scale * mean,
        stderr=scale * sd / math.sqrt(outer_samples),
        samples=outer_samples * inner_samples,
    )


# ---------------------------------------------------------------------------
# Bound functions f_K and their distribution
# ---------------------------------------------------------------------------


def f_disk(w1, w2) -> float:
    """delta(w1, w2)^4: the disk's lower bound on the conditional
    acceptance probability inside the smaller Voronoi cell."""
    return disk_segment_height(w1, w2) ** 4


def f_square(w1, w2) -> float:
    """a^4 * ln(e * b / a) from the largest triangular cap of the smaller
    Voronoi region on the unit square."""
    a, b = square_cap_sides(w1, w2)
    if a <= 0.0:
        return 0.0
    return a**4 * math.log(E * b / a)


_CENTRE = np.array([0.5, 0.5])
_DIHEDRAL_MATS = [
    np.array([[1.0, 0.0], [0.0, 1.0]]),
    np.array([[0.0, -1.0], [1.0, 0.0]]),
    np.array([[-1.0, 0.0], [0.0, -1.0]]),
    np.array([[0.0, 1.0], [-1.0, 0.0]]),
    np.array([[-1.0, 0.0], [0.0, 1.0]]),
    np.array([[1.0, 0.0], [0.0, -1.0]]),
    np.array([[0.0, 1.0], [1.0, 0.0]]),
    np.array([[0.0, -1.0], [-1.0, 0.0]]),
]


def square_ab_batch(w1: np.ndarray, w2: np.ndarray):
    """Vectorized square_cap_sides over pair arrays; returns (a, b, ok).

    Same dihedral normal-form search as the scalar version: for each pair
    try both bisector orientations under the eight square symmetries and
    keep the minority-region frame.
    """
    n, c, ok = _bisector_batch(w1, w2)
    m = len(n)
    a_out = np.zeros(m)
    s_out = np.zeros(m)
    found = np.zeros(m, dtype=bool)
    for side in (1.0, -1.0):
        u = side * n
        cc = side * c
        base = cc - u @ _CENTRE
        for mat in _DIHEDRAL_MATS:
            n2 = u @ mat.T
            c2 = base + n2 @ _CENTRE
            nx, ny = n2[:, 0], np.maximum(n2[:, 1], 0.0)
            valid = (
                ok
                & ~found
                & (n2[:, 0] >= n2[:, 1] - GEOM_EPS)
                & (n2[:, 1] >= -GEOM_EPS)
                & (c2 >= -GEOM_EPS)
                & (c2 <= nx + GEOM_EPS)
            )
            with np.errstate(divide="ignore", invalid="ignore"):
                tri_area = np.where(ny > 0, c2 * c2 / (2.0 * nx * ny), 0.0)
            trap_area = (2.0 * c2 - ny) / (2.0 * nx)
            area = np.where(c2 <= ny, tri_area, trap_area)
            valid &= area <= 0.5 + GEOM_EPS
            if not valid.any():
                continue
            a_out[valid] = np.clip(c2[valid] / nx[valid], 0.0, 1.0)
            s_out[valid] = ny[valid] / nx[valid]
            found |= valid
    with np.errstate(divide="ignore", invalid="ignore"):
        b_out = np.where(s_out > a_out, a_out / np.maximum(s_out, 1e-300), 1.0)
    b_out = np.clip(b_out, a_out, 1.0)
    return a_out, b_out, ok & found


def f_batch(domain: Domain, w1: np.ndarray, w2: np.ndarray) -> np.ndarray:
    """Vectorized f_K over candidate-pair arrays (disk and square only)."""
    if domain.kind == "disk":
        u = w2 - w1
        ln = np.hypot(u[:, 0], u[:, 1])
        ok = ln >= ALG_EPS
        num = np.abs((w2 * w2).sum(1) - (w1 * w1).sum(1))
        delta = 1.0 - num / (2.0 * np.where(ok, ln, 1.0))
        return np.where(ok, delta**4, np.inf)
    if domain.kind == "square":
        a, b, ok = square_ab_batch(w1, w2)
        with np.errstate(divide="ignore", invalid="ignore"):
            f = np.where(a > 0, a**4 * np.log(E * b / np.maximum(a, 1e-300)), 0.0)
        return np.where(ok, f, np.inf)
    raise ValueError(f"f_K is defined on the disk and square only, not {domain.kind}")


def phi_grid(
    domain: Domain,
    lambdas,
    pairs: int,
    seed: int = 0,
    chunk: int = 1 << 19,
) -> list[ProbEstimate]:
    """Phi(lambda) = fraction of uniform candidate pairs with f_K <= lambda,
    evaluated on a whole lambda grid from one pair sample."""
    lam = np.asarray(list(lambdas), dtype=float)
    if lam.size == 0:
        raise ValueError("empty lambda grid")
    rng = np.random.default_rng(seed)
    counts = np.zeros(lam.size, dtype=np.int64)
    done = 0
    while done < pairs:
        n = min(chunk, pairs - done)
        w1 = domain.sample(rng, n)
        w2 = domain.sample(rng, n)
        f = f_batch(domain, w1, w2)
        counts += (f[None, :] <= lam[:, None]).sum(axis=1)
        done += n
    out = []
    for c in counts:
        p = c / pairs
        out.append(
            ProbEstimate(
                value=float(p),
                stderr=math.sqrt(max(p * (1.0 - p), 0.0) / pairs),
                samples=pairs,
            )
        )
    return out


def phi(domain: Domain, lam: float, pairs: int, seed: int = 0) -> ProbEstimate:
    """Single-lambda Phi estimate; see phi_grid."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    return phi_grid(domain, [lam], pairs, seed)[0]


def upper_bound_integral(
    domain: Domain, t: int, pairs: int, seed: int = 0, chunk: int = 1 << 19
) -> ProbEstimate:
    """Monte Carlo mean of exp(-t * f_K) over uniform candidate pairs: the
    round-t acceptance upper bound up to a constant factor."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < pairs:
        n = min(chunk, pairs - done)
        w1 = domain.sample(rng, n)
        w2 = domain.sample(rng, n)
        f = f_batch(domain, w1, w2)
        v = np.exp(-float(t) * f)
        total += float(v.sum())
        total_sq += float((v * v).sum())
        done += n
    mean = total / pairs
    var = max(total_sq / pairs - mean * mean, 0.0)
    return ProbEstimate(
        value=mean, stderr=math.sqrt(var / pairs), samples=pairs
    )


# ---------------------------------------------------------------------------
# Lower-bound ratio grids
# ---------------------------------------------------------------------------


def _derived_seed(seed: int, index: int) -> int:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


def disk_segment_cap(delta: float) -> Cap:
    """The circular segment of height delta as a cap {x <= delta - 1}."""
    return make_cap(UNIT_DISK, HalfPlane((1.0, 0.0), delta - 1.0))


def square_triangle_cap(a: float, b: float) -> Cap:
    """The right-triangle cap with legs a (x axis) and b (y axis)."""
    return make_cap(UNIT_SQUARE, HalfPlane.from_direction(b, a, a * b))


def lower_bound_ratio_disk(
    delta_grid, samples: int, seed: int = 0
) -> list[CapRatio]:
    """Ratios Pr[Z(segment) | complement] / delta^4 over a height grid.

    Heights must satisfy delta <= 1/8, the regime of the segment bound.
    """
    deltas = [float(d) for d in delta_grid]
    if not deltas:
        raise ValueError("empty delta grid")
    for d in deltas:
        if not (0.0 < d <= 0.125 + ALG_EPS):
            raise ValueError(f"delta {d} outside (0, 1/8]")
    out = []
    for i, d in enumerate(deltas):
        cap = disk_segment_cap(d)
        est = acceptance_prob_event(cap, samples, seed=_derived_seed(seed, i))
        bound = d**4
        out.append(
            CapRatio(
                param=d,
                estimate=est,
                bound=bound,
                ratio=est.value / bound,
                ratio_stderr=est.stderr / bound,
            )
        )
    return out


def lower_bound_ratio_square(
    ab_grid, samples: int, seed: int = 0
) -> list[CapRatio]:
    """Ratios of the measured triangular-cap acceptance probability to the
    explicit bound a^4 (1 + ln(b/a)) / 2^11; each ratio should be >= 1."""
    grid = [(float(a), float(b)) for a, b in ab_grid]
    if not grid:
        raise ValueError("empty (a, b) grid")
    for a, b in grid:
        if not (0.0 < a <= b <= 1.0):
            raise ValueError(f"need 0 < a <= b <= 1, got ({a}, {b})")
    out = []
    for i, (a, b) in enumerate(grid):
        cap = square_triangle_cap(a, b)
        est = acceptance_prob_event(cap, samples, seed=_derived_seed(seed, i))
        bound = a**4 * (1.0 + math.log(b / a)) / 2.0**11
        out.append(
            CapRatio(
                param=(a, b),
                estimate=est,
                bound=bound,
                ratio=est.value / bound,
                ratio_stderr=est.stderr / bound,
            )
        )
    return out
