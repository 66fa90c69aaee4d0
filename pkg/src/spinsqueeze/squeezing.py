"""Squeezing parameters for coupled spin-1 pairs and their closed forms.

The coupled squeezing parameter of a pure two-subsystem state, for unit
directions u and v perpendicular to the respective mean-spin directions, is

    xi(u, v) = [ 2 Var(S1.u) + 2 Var(S2.v) + 4 <(S1.u)(x)(S2.v)> ]
               / ( |<S1>| + |<S2>| )

where the cross term is the raw expectation of the tensor product (no mean
subtraction) and xi < 1 signals squeezing.  xi depends on how u and v are
chosen inside the two transverse planes, so every report records the frames
actually used; three frame policies are provided:

* ``Fixed``           -- caller-supplied frames, used as-is
* ``MeanSpinAligned`` -- frames constructed from the mean-spin directions
* ``Optimized``       -- u, v minimizing xi over the transverse circles
                         (over the full direction sphere for a subsystem
                         whose mean spin vanishes)

``xi_oracle`` evaluates the same quantity by explicit summation over
amplitude indices with its own inline operator entries; it shares no linear
algebra with the engine and exists to cross-check it.

The module also carries literal transcriptions of closed-form xi expressions
for five special state families, plus a comparison harness that measures
them against the engine and flags each family MATCH or MISMATCH.  The
transcriptions are kept verbatim even where they disagree with the engine;
the discrepancy report is the record of those gaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spin import SX, SY, SZ, Frame, build_frame, build_frame_xz, cross3
from .states import CoupledState, Spin1State, canonical_squeezed, product

DEGENERATE_MEAN_SPIN = 1e-9
MATCH_TOL = 1e-10
_TIE_TOL = 1e-14

_AXES = (SX, SY, SZ)
# symmetrized products (Sk Sl + Sl Sk)/2, indexed [k][l]
_SYM2 = [[(a @ b + b @ a) / 2.0 for b in _AXES] for a in _AXES]

# Flattened-trace forms: Tr(rho A) = A.T.ravel() . rho.ravel(), so stacking
# the transposed operators turns all moment traces into single matvecs.
_MEAN_FLAT = np.stack([s.T.reshape(9) for s in _AXES])
_SYM_FLAT = np.stack([_SYM2[k][l].T.reshape(9) for k in range(3) for l in range(3)])
_CROSS_FLAT = np.stack(
    [np.kron(_AXES[k], _AXES[l]).T.reshape(81) for k in range(3) for l in range(3)]
)

_ZHAT = np.array([0.0, 0.0, 1.0])


class ZeroDenominatorError(ValueError):
    """A closed-form xi denominator (mean-spin length sum) vanished."""


# --------------------------------------------------------------------------
# frame policies
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Fixed:
    """Evaluate xi along the given frames' n_perp directions."""

    frame1: Frame
    frame2: Frame


@dataclass(frozen=True)
class MeanSpinAligned:
    """Frames built from the normalized mean-spin directions.

    gauge: "default" uses build_frame; "xz" uses build_frame_xz (requires
    mean spins in the x-z half-plane); "auto" picks "xz" whenever the mean
    direction lies in that half-plane and falls back to "default" otherwise.
    A degenerate subsystem (vanishing mean spin) gets the lab frame (n = z).
    """

    gauge: str = "auto"

    def __post_init__(self):
        if self.gauge not in ("default", "xz", "auto"):
            raise ValueError(f"unknown gauge {self.gauge!r}")


@dataclass(frozen=True)
class Optimized:
    """Minimize xi over transverse directions.

    A coarse grid scan (grid_points per angle, first-minimum tie-break at
    1e-14 so equal minima resolve to the lexicographically lowest angles)
    is followed by coordinate-descent refinement with a golden-section line
    search per coordinate, at most refine_iters sweeps (terminating early
    once a sweep no longer improves the minimum).  For a degenerate
    subsystem the search runs over its full direction sphere.
    """

    grid_points: int = 64
    refine_iters: int = 40

    def __post_init__(self):
        if self.grid_points < 8:
            raise ValueError("grid_points must be >= 8")
        if self.refine_iters < 1:
            raise ValueError("refine_iters must be >= 1")


FramePolicy = Fixed | MeanSpinAligned | Optimized


@dataclass(frozen=True)
class SqueezingReport:
    xi: float
    frame1: Frame
    frame2: Frame
    var1: float
    var2: float
    cross: float
    ms1: np.ndarray
    mag1: float
    ms2: np.ndarray
    mag2: float
    valid: bool
    degenerate_subsystems: frozenset[int]

    @property
    def squeezed(self) -> bool:
        # 1e-9 guard: roundoff at the coherent boundary (xi = 1) must not
        # flip the flag.
        return self.valid and self.xi < 1.0 - 1e-9


# --------------------------------------------------------------------------
# engine
# --------------------------------------------------------------------------

class Moments:
    """First and second spin moments of a coupled state.

    mean1/mean2 are the mean-spin vectors; mom1/mom2 the real symmetric
    matrices Re<(Sk Sl + Sl Sk)/2> per subsystem; cross the real matrix
    <Sk (x) Sl>.  Together they determine xi for any direction pair.
    """

    __slots__ = ("mean1", "mag1", "mean2", "mag2", "mom1", "mom2", "cross_mat")

    def __init__(self, state: CoupledState):
        c = state.c
        r1 = (c @ c.conj().T).reshape(9)
        r2 = (c.T @ c.conj()).reshape(9)
        self.mean1 = (_MEAN_FLAT @ r1).real
        self.mean2 = (_MEAN_FLAT @ r2).real
        self.mag1 = float(np.linalg.norm(self.mean1))
        self.mag2 = float(np.linalg.norm(self.mean2))
        self.mom1 = (_SYM_FLAT @ r1).real.reshape(3, 3)
        self.mom2 = (_SYM_FLAT @ r2).real.reshape(3, 3)
        psi = c.reshape(9)
        big = np.outer(psi, psi.conj()).reshape(81)
        self.cross_mat = (_CROSS_FLAT @ big).real.reshape(3, 3)

    def variance(self, subsystem: int, direction: np.ndarray) -> float:
        m = self.mean1 if subsystem == 1 else self.mean2
        mom = self.mom1 if subsystem == 1 else self.mom2
        var = float(direction @ mom @ direction) - float(m @ direction) ** 2
        if -1e-12 <= var < 0.0:
            var = 0.0
        return var

    def cross_correlation(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(u @ self.cross_mat @ v)

    def xi_parts(self, u: np.ndarray, v: np.ndarray) -> tuple[float, float, float, float]:
        var1 = self.variance(1, u)
        var2 = self.variance(2, v)
        cross = self.cross_correlation(u, v)
        xi = (2.0 * var1 + 2.0 * var2 + 4.0 * cross) / (self.mag1 + self.mag2)
        return xi, var1, var2, cross


def _golden_min(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Argmin of a unimodal-enough f on [lo, hi] by golden-section search."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
    return (a + b) / 2.0


def _first_min_index(values: np.ndarray) -> tuple:
    """Index of the first entry within 1e-14 of the minimum, row-major."""
    flat = values.ravel()
    target = float(flat.min()) + _TIE_TOL
    idx = int(np.argmax(flat <= target))
    return np.unravel_index(idx, values.shape)


def _sphere_dir(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


class _PlaneAxis:
    """Transverse circle of one subsystem: d(phi) = cos(phi) a + sin(phi) b."""

    ndim = 1

    def __init__(self, frame: Frame):
        self.a = frame.n_perp
        self.b = frame.n_perp2

    def direction(self, params) -> np.ndarray:
        (phi,) = params
        return math.cos(phi) * self.a + math.sin(phi) * self.b

    def grid(self, n: int) -> list[np.ndarray]:
        return [np.arange(n) * (2.0 * math.pi / n)]

    def directions_grid(self, grids) -> np.ndarray:
        (phi,) = grids
        return np.outer(np.cos(phi), self.a) + np.outer(np.sin(phi), self.b)

    def bracket(self, k: int, center: float, span: float) -> tuple[float, float]:
        return center - span, center + span


class _SphereAxis:
    """Full direction sphere, parametrized (theta, phi)."""

    ndim = 2

    def direction(self, params) -> np.ndarray:
        theta, phi = params
        return _sphere_dir(np.asarray(theta), np.asarray(phi))

    def grid(self, n: int) -> list[np.ndarray]:
        return [np.linspace(0.0, math.pi, n), np.arange(n) * (2.0 * math.pi / n)]

    def directions_grid(self, grids) -> np.ndarray:
        theta, phi = np.meshgrid(grids[0], grids[1], indexing="ij")
        return _sphere_dir(theta, phi).reshape(-1, 3)

    def bracket(self, k: int, center: float, span: float) -> tuple[float, float]:
        if k == 0:  # polar angle stays in [0, pi]
            return max(0.0, center - span), min(math.pi, center + span)
        return center - span, center + span


_SCAN = np.arange(256) * (2.0 * math.pi / 256)
_SCAN_COS, _SCAN_SIN = np.cos(_SCAN), np.sin(_SCAN)
_SCAN_COS2, _SCAN_SIN2 = np.cos(2.0 * _SCAN), np.sin(2.0 * _SCAN)
_SCAN_STEP = 2.0 * math.pi / 256


def _optimize_plane_plane(mom: Moments, frame1: Frame, frame2: Frame, policy: Optimized):
    """Joint in-plane minimization via the harmonic form of the numerator.

    With u(s) = cos(s) a1 + sin(s) b1 and v(t) likewise, the numerator is
    base + p cos2s + q sin2s + r cos2t + w sin2t + [cos s, sin s] K [cos t,
    sin t]^T (means vanish transverse to the mean spin, so the variances are
    pure second harmonics).  Coarse grid, then coordinate descent where each
    coordinate is re-minimized globally (dense scan plus golden section).
    """
    a1, b1 = frame1.n_perp, frame1.n_perp2
    a2, b2 = frame2.n_perp, frame2.n_perp2
    m1, m2, cm = mom.mom1, mom.mom2, mom.cross_mat
    pa, pb, pc = float(a1 @ m1 @ a1), float(b1 @ m1 @ b1), float(a1 @ m1 @ b1)
    qa, qb, qc = float(a2 @ m2 @ a2), float(b2 @ m2 @ b2), float(a2 @ m2 @ b2)
    k00, k01 = 4.0 * float(a1 @ cm @ a2), 4.0 * float(a1 @ cm @ b2)
    k10, k11 = 4.0 * float(b1 @ cm @ a2), 4.0 * float(b1 @ cm @ b2)
    # constant term (pa+pb+qa+qb) dropped: only the argmin is needed here
    p, q = pa - pb, 2.0 * pc
    r, w = qa - qb, 2.0 * qc

    n = policy.grid_points
    ang = np.arange(n) * (2.0 * math.pi / n)
    cs, sn = np.cos(ang), np.sin(ang)
    s_part = p * np.cos(2.0 * ang) + q * np.sin(2.0 * ang)
    t_part = r * np.cos(2.0 * ang) + w * np.sin(2.0 * ang)
    kmat = np.array([[k00, k01], [k10, k11]])
    cross = np.stack([cs, sn], axis=1) @ kmat @ np.stack([cs, sn], axis=0)
    i, j = _first_min_index(s_part[:, None] + t_part[None, :] + cross)
    s, t = float(ang[i]), float(ang[j])

    def value(s: float, t: float) -> float:
        return (
            p * math.cos(2.0 * s) + q * math.sin(2.0 * s)
            + r * math.cos(2.0 * t) + w * math.sin(2.0 * t)
            + math.cos(s) * (k00 * math.cos(t) + k01 * math.sin(t))
            + math.sin(s) * (k10 * math.cos(t) + k11 * math.sin(t))
        )

    def remin(p2, q2, a_, b_):
        # global min of f(x) = p2 cos2x + q2 sin2x + a_ cos x + b_ sin x:
        # dense scan for the basin, then Newton on f' (falls back to golden
        # section if the local curvature is unusable)
        vals = p2 * _SCAN_COS2 + q2 * _SCAN_SIN2 + a_ * _SCAN_COS + b_ * _SCAN_SIN
        x = float(_SCAN[int(np.argmin(vals))])
        scale = abs(p2) + abs(q2) + abs(a_) + abs(b_) + 1e-300
        for _ in range(30):
            s2, c2 = math.sin(2.0 * x), math.cos(2.0 * x)
            s1, c1 = math.sin(x), math.cos(x)
            d1 = -2.0 * p2 * s2 + 2.0 * q2 * c2 - a_ * s1 + b_ * c1
            d2 = -4.0 * p2 * c2 - 4.0 * q2 * s2 - a_ * c1 - b_ * s1
            if d2 <= 0.0:
                break
            step = d1 / d2
            if abs(step) > _SCAN_STEP:
                break
            x -= step
            if abs(step) <= 1e-14 or abs(d1) <= 1e-15 * scale:
                return x
        def f(y):
            return (p2 * math.cos(2.0 * y) + q2 * math.sin(2.0 * y)
                    + a_ * math.cos(y) + b_ * math.sin(y))
        return _golden_min(f, x - _SCAN_STEP, x + _SCAN_STEP, tol=1e-12)

    best = value(s, t)
    for _ in range(policy.refine_iters):
        s = remin(p, q,
                  k00 * math.cos(t) + k01 * math.sin(t),
                  k10 * math.cos(t) + k11 * math.sin(t))
        t = remin(r, w,
                  k00 * math.cos(s) + k10 * math.sin(s),
                  k01 * math.cos(s) + k11 * math.sin(s))
        now = value(s, t)
        if best - now < 1e-15:
            best = min(best, now)
            break
        best = now
    u = math.cos(s) * a1 + math.sin(s) * b1
    v = math.cos(t) * a2 + math.sin(t) * b2
    return u, v


def _optimize_directions(mom: Moments, axis1, axis2, policy: Optimized):
    """Joint minimization of the xi numerator over both direction sets."""
    n = policy.grid_points
    grids1, grids2 = axis1.grid(n), axis2.grid(n)
    dirs1 = axis1.directions_grid(grids1)  # (N1, 3)
    dirs2 = axis2.directions_grid(grids2)  # (N2, 3)

    var1 = np.einsum("ik,kl,il->i", dirs1, mom.mom1, dirs1) - (dirs1 @ mom.mean1) ** 2
    var2 = np.einsum("ik,kl,il->i", dirs2, mom.mom2, dirs2) - (dirs2 @ mom.mean2) ** 2
    cross = dirs1 @ mom.cross_mat @ dirs2.T
    numer = 2.0 * var1[:, None] + 2.0 * var2[None, :] + 4.0 * cross

    shape1 = tuple(len(g) for g in grids1)
    shape2 = tuple(len(g) for g in grids2)
    i, j = _first_min_index(numer.reshape(np.prod(shape1), np.prod(shape2)))
    p1 = [float(g[k]) for g, k in zip(grids1, np.unravel_index(i, shape1))]
    p2 = [float(g[k]) for g, k in zip(grids2, np.unravel_index(j, shape2))]

    def numerator(params1, params2) -> float:
        u = axis1.direction(params1)
        v = axis2.direction(params2)
        return (
            2.0 * (float(u @ mom.mom1 @ u) - float(mom.mean1 @ u) ** 2)
            + 2.0 * (float(v @ mom.mom2 @ v) - float(mom.mean2 @ v) ** 2)
            + 4.0 * float(u @ mom.cross_mat @ v)
        )

    coords = [(1, k) for k in range(axis1.ndim)] + [(2, k) for k in range(axis2.ndim)]
    spans = {1: 2.0 * math.pi / n, 2: 2.0 * math.pi / n}
    best = numerator(p1, p2)
    for _ in range(policy.refine_iters):
        for which, k in coords:
            params = p1 if which == 1 else p2
            axis = axis1 if which == 1 else axis2

            def line(x, _params=params, _k=k, _which=which):
                saved = _params[_k]
                _params[_k] = x
                val = numerator(p1, p2)
                _params[_k] = saved
                return val

            lo, hi = axis.bracket(k, params[k], spans[which])
            params[k] = _golden_min(line, lo, hi)
        improved_to = numerator(p1, p2)
        if best - improved_to < 1e-15:
            best = min(best, improved_to)
            break
        best = improved_to
    return axis1.direction(p1), axis2.direction(p2)


def _frame_from_transverse(n_dir: np.ndarray | None, t: np.ndarray) -> Frame:
    """Frame whose n_perp is the transverse direction t.

    When the mean direction n_dir is known it becomes the frame's n and the
    triad is completed right-handed; for a degenerate subsystem an arbitrary
    completion around t is used.
    """
    t = t / np.linalg.norm(t)
    if n_dir is None:
        h = build_frame(t).n_perp
        return Frame(cross3(t, h), t, h)
    n = n_dir / np.linalg.norm(n_dir)
    # remove any rounding component of t along n so the triad is exact
    t = t - float(t @ n) * n
    t = t / np.linalg.norm(t)
    return Frame(n, t, cross3(n, t))


def _aligned_frame(direction: np.ndarray, gauge: str) -> Frame:
    if gauge == "xz":
        return build_frame_xz(direction)
    if gauge == "auto" and abs(direction[1]) <= 1e-9 and direction[2] >= -1e-12:
        return build_frame_xz(direction)
    return build_frame(direction)


def _invalid_report(mom: Moments) -> SqueezingReport:
    lab = build_frame(_ZHAT)
    u = lab.n_perp
    return SqueezingReport(
        xi=float("nan"),
        frame1=lab,
        frame2=lab,
        var1=mom.variance(1, u),
        var2=mom.variance(2, u),
        cross=mom.cross_correlation(u, u),
        ms1=mom.mean1,
        mag1=mom.mag1,
        ms2=mom.mean2,
        mag2=mom.mag2,
        valid=False,
        degenerate_subsystems=frozenset({1, 2}),
    )


def squeezing_report(state: CoupledState, policy: FramePolicy | None = None) -> SqueezingReport:
    """Evaluate the coupled squeezing parameter under a frame policy.

    Default policy is Optimized().  When both mean spins vanish the
    denominator is undefined: the report carries xi = nan and valid = False.
    A single degenerate subsystem is flagged but still evaluated (its
    direction search runs over the whole sphere under Optimized, and
    MeanSpinAligned substitutes the lab frame).
    """
    if policy is None:
        policy = Optimized()
    mom = Moments(state)
    degenerate = frozenset(
        i for i, mag in ((1, mom.mag1), (2, mom.mag2)) if mag < DEGENERATE_MEAN_SPIN
    )
    if len(degenerate) == 2:
        return _invalid_report(mom)

    if isinstance(policy, Fixed):
        frame1, frame2 = policy.frame1, policy.frame2
        u, v = frame1.n_perp, frame2.n_perp
    elif isinstance(policy, MeanSpinAligned):
        frames = []
        for i, (mean, mag) in enumerate(((mom.mean1, mom.mag1), (mom.mean2, mom.mag2)), start=1):
            if i in degenerate:
                frames.append(build_frame(_ZHAT))
            else:
                frames.append(_aligned_frame(mean / mag, policy.gauge))
        frame1, frame2 = frames
        u, v = frame1.n_perp, frame2.n_perp
    elif isinstance(policy, Optimized):
        if not degenerate:
            base1 = build_frame(mom.mean1 / mom.mag1)
            base2 = build_frame(mom.mean2 / mom.mag2)
            u, v = _optimize_plane_plane(mom, base1, base2, policy)
        else:
            axis1 = _SphereAxis() if 1 in degenerate else _PlaneAxis(build_frame(mom.mean1 / mom.mag1))
            axis2 = _SphereAxis() if 2 in degenerate else _PlaneAxis(build_frame(mom.mean2 / mom.mag2))
            u, v = _optimize_directions(mom, axis1, axis2, policy)
        frame1 = _frame_from_transverse(None if 1 in degenerate else mom.mean1 / mom.mag1, u)
        frame2 = _frame_from_transverse(None if 2 in degenerate else mom.mean2 / mom.mag2, v)
        u, v = frame1.n_perp, frame2.n_perp
    else:
        raise TypeError(f"unknown frame policy {policy!r}")

    xi, var1, var2, cross = mom.xi_parts(u, v)
    return SqueezingReport(
        xi=xi,
        frame1=frame1,
        frame2=frame2,
        var1=var1,
        var2=var2,
        cross=cross,
        ms1=mom.mean1,
        mag1=mom.mag1,
        ms2=mom.mean2,
        mag2=mom.mag2,
        valid=True,
        degenerate_subsystems=degenerate,
    )


# --------------------------------------------------------------------------
# independent oracle
# --------------------------------------------------------------------------

def xi_oracle(state: CoupledState, frame1: Frame, frame2: Frame) -> float:
    """The squeezing parameter by explicit summation over amplitude indices.

    Spin matrix entries are written out inline and all sums run over the 9
    amplitudes (81 index pairs for the quadratic terms) in plain Python
    complex arithmetic; no linear-algebra code is shared with the engine.
    """
    c = [[complex(state.c[i, j]) for j in range(3)] for i in range(3)]
    r = 1.0 / math.sqrt(2.0)
    sx = ((0.0, r, 0.0), (r, 0.0, r), (0.0, r, 0.0))
    sy = ((0.0, -1j * r, 0.0), (1j * r, 0.0, -1j * r), (0.0, 1j * r, 0.0))
    sz = ((1.0, 0.0, 0.0), (0.0, 0.0, 0.0), (0.0, 0.0, -1.0))

    def dir_matrix(d):
        return [
            [d[0] * sx[i][j] + d[1] * sy[i][j] + d[2] * sz[i][j] for j in range(3)]
            for i in range(3)
        ]

    def square(m):
        return [
            [sum(m[i][k] * m[k][j] for k in range(3)) for j in range(3)] for i in range(3)
        ]

    def exp_sub1(m):
        total = 0j
        for i in range(3):
            for ip in range(3):
                for j in range(3):
                    total += c[i][j].conjugate() * m[i][ip] * c[ip][j]
        return total

    def exp_sub2(m):
        total = 0j
        for j in range(3):
            for jp in range(3):
                for i in range(3):
                    total += c[i][j].conjugate() * m[j][jp] * c[i][jp]
        return total

    def exp_cross(m1, m2):
        total = 0j
        for i in range(3):
            for j in range(3):
                for ip in range(3):
                    for jp in range(3):
                        total += c[i][j].conjugate() * m1[i][ip] * m2[j][jp] * c[ip][jp]
        return total

    mean1 = [exp_sub1(m).real for m in (sx, sy, sz)]
    mean2 = [exp_sub2(m).real for m in (sx, sy, sz)]
    mag1 = math.sqrt(sum(x * x for x in mean1))
    mag2 = math.sqrt(sum(x * x for x in mean2))

    a = dir_matrix([float(x) for x in frame1.n_perp])
    b = dir_matrix([float(x) for x in frame2.n_perp])
    var1 = exp_sub1(square(a)).real - exp_sub1(a).real ** 2
    var2 = exp_sub2(square(b)).real - exp_sub2(b).real ** 2
    cross = exp_cross(a, b).real
    return (2.0 * var1 + 2.0 * var2 + 4.0 * cross) / (mag1 + mag2)


# --------------------------------------------------------------------------
# single-subsystem criteria
# --------------------------------------------------------------------------

def _single_moments(s: Spin1State):
    rho = np.outer(s.amps, s.amps.conj())
    mean = np.array([np.trace(rho @ m).real for m in _AXES])
    mom = np.array([[np.trace(rho @ _SYM2[k][l]).real for l in range(3)] for k in range(3)])
    return mean, mom


def _min_transverse_variance(s: Spin1State) -> tuple[float, float]:
    """(min in-plane variance, mean-spin length) for one spin-1 state.

    For zero mean spin the minimum runs over the whole sphere (smallest
    eigenvalue of the second-moment matrix).
    """
    mean, mom = _single_moments(s)
    mag = float(np.linalg.norm(mean))
    if mag < DEGENERATE_MEAN_SPIN:
        return float(np.linalg.eigvalsh(mom).min()), mag
    frame = build_frame(mean / mag)
    a, b = frame.n_perp, frame.n_perp2
    pa = float(a @ mom @ a) - float(mean @ a) ** 2
    qb = float(b @ mom @ b) - float(mean @ b) ** 2
    rab = float(a @ mom @ b) - float(mean @ a) * float(mean @ b)
    mid = (pa + qb) / 2.0
    rad = math.hypot((pa - qb) / 2.0, rab)
    return mid - rad, mag


def ku_parameter(s: Spin1State) -> float:
    """Single-system squeezing versus the coherent transverse noise s/2
    (s = 1): min in-plane variance divided by 1/2."""
    min_var, _ = _min_transverse_variance(s)
    return min_var / 0.5


def puri_parameter(s: Spin1State) -> float:
    """Single-system squeezing versus half the mean-spin length.

    Undefined (raises) for zero mean spin.
    """
    min_var, mag = _min_transverse_variance(s)
    if mag < DEGENERATE_MEAN_SPIN:
        raise ValueError("Puri parameter undefined: mean spin vanishes")
    return min_var / (mag / 2.0)


# --------------------------------------------------------------------------
# closed forms (literal transcriptions)
# --------------------------------------------------------------------------

def xi_product_pair(theta1: float, theta2: float) -> float:
    """Closed form for canonical_squeezed(theta1) x canonical_squeezed(theta2):

        xi = [ (1+cos t1)/(3+cos t1) + (1+cos t2)/(3+cos t2) ]
             / [ |sqrt(2(1+cos t1))/(3+cos t1)| + |sqrt(2(1+cos t2))/(3+cos t2)| ]
    """
    c1, c2 = math.cos(theta1), math.cos(theta2)
    num = (1.0 + c1) / (3.0 + c1) + (1.0 + c2) / (3.0 + c2)
    den = abs(math.sqrt(2.0 * (1.0 + c1)) / (3.0 + c1)) + abs(
        math.sqrt(2.0 * (1.0 + c2)) / (3.0 + c2)
    )
    if den <= 1e-300:
        raise ZeroDenominatorError("mean-spin lengths vanish for these angles")
    return num / den


def xi_coherent_times_squeezed(theta: float) -> float:
    """Closed form for coherent(m=+1) x canonical_squeezed(theta):

        xi = [ 1 + (1+cos t)/(3+cos t) ] / [ 1 + |sqrt(2(1+cos t))/(3+cos t)| ]
    """
    ct = math.cos(theta)
    num = 1.0 + (1.0 + ct) / (3.0 + ct)
    den = 1.0 + abs(math.sqrt(2.0 * (1.0 + ct)) / (3.0 + ct))
    return num / den


def xi_config1(c11: float, c22: float, c33: float) -> float:
    """Closed form for the diagonal configuration (c11, c22, c33):

        xi = [ c11^2 + 2 c22^2 + c33^2 - 2 (c11 c22 - c22 c33) ] / |c11^2 - c33^2|
    """
    den = abs(c11 * c11 - c33 * c33)
    if den <= 1e-12:
        raise ZeroDenominatorError("|c11^2 - c33^2| vanishes")
    num = c11 * c11 + 2.0 * c22 * c22 + c33 * c33 - 2.0 * (c11 * c22 - c22 * c33)
    return num / den


def xi_config2(c11: float, c13: float, c22: float) -> float:
    """Closed form for the configuration (c11, c13, c22):

        xi = [ c11^2 + c13^2 + 2 c22^2 - c11 c13 + 2 c13 c22 - 2 c22 c11 ]
             / [ |c11^2 + c13^2| + |c11^2 - c13^2| ]
    """
    den = abs(c11 * c11 + c13 * c13) + abs(c11 * c11 - c13 * c13)
    if den <= 1e-12:
        raise ZeroDenominatorError("mean-spin lengths vanish")
    num = (
        c11 * c11
        + c13 * c13
        + 2.0 * c22 * c22
        - c11 * c13
        + 2.0 * c13 * c22
        - 2.0 * c22 * c11
    )
    return num / den


def xi_config3(c12: complex, c21: complex, c23: complex) -> float:
    """Closed form for the configuration (c12, c21, c23):

        xi = [ 3 c12^2 + 3 c21^2 + 3 c23^2 - 2 c21 c23 + 4 c12 c21 - 4 c12 c23 ]
             / [ |c12|^2 + |c21^2 - c23^2| ]

    For complex amplitudes the printed numerator is a complex expression; it
    is evaluated as written and nan is returned when the result has a
    non-negligible imaginary part (recorded as UNDEFINED by the harness).
    """
    c12, c21, c23 = complex(c12), complex(c21), complex(c23)
    den = abs(c12) ** 2 + abs(c21 * c21 - c23 * c23)
    if den <= 1e-12:
        raise ZeroDenominatorError("mean-spin lengths vanish")
    num = (
        3.0 * c12 * c12
        + 3.0 * c21 * c21
        + 3.0 * c23 * c23
        - 2.0 * c21 * c23
        + 4.0 * c12 * c21
        - 4.0 * c12 * c23
    )
    val = num / den
    if abs(val.imag) > 1e-9 * max(1.0, abs(val.real)):
        return float("nan")
    return val.real


FAMILIES = ("product_pair", "coherent_squeezed", "config1", "config2", "config3")


def closed_form_xi(family: str, params: tuple) -> float:
    if family == "product_pair":
        return xi_product_pair(*params)
    if family == "coherent_squeezed":
        return xi_coherent_times_squeezed(*params)
    if family == "config1":
        return xi_config1(*params)
    if family == "config2":
        return xi_config2(*params)
    if family == "config3":
        return xi_config3(*params)
    raise ValueError(f"unknown family {family!r}")


def family_state(family: str, params: tuple) -> CoupledState:
    """The coupled state a closed-form family row refers to."""
    if family == "product_pair":
        t1, t2 = params
        return product(canonical_squeezed(t1), canonical_squeezed(t2))
    if family == "coherent_squeezed":
        (t,) = params
        return product(Spin1State.basis(1), canonical_squeezed(t))
    c = np.zeros((3, 3), dtype=complex)
    if family == "config1":
        c[0, 0], c[1, 1], c[2, 2] = params
    elif family == "config2":
        c[0, 0], c[0, 2], c[1, 1] = params
    elif family == "config3":
        c[0, 1], c[1, 0], c[1, 2] = params
    else:
        raise ValueError(f"unknown family {family!r}")
    return CoupledState.normalized(c)


@dataclass(frozen=True)
class DiscrepancyRecord:
    family: str
    params: tuple
    closed_form: float
    engine: float
    abs_diff: float
    flag: str  # MATCH | MISMATCH | UNDEFINED


def compare_closed_forms(family: str, params: tuple, policy: FramePolicy) -> DiscrepancyRecord:
    """One engine-versus-closed-form comparison row."""
    try:
        closed = closed_form_xi(family, params)
    except ZeroDenominatorError:
        closed = float("nan")
    report = squeezing_report(family_state(family, params), policy)
    engine = report.xi if report.valid else float("nan")
    if math.isnan(closed) or math.isnan(engine):
        return DiscrepancyRecord(family, params, closed, engine, float("nan"), "UNDEFINED")
    diff = abs(closed - engine)
    flag = "MATCH" if diff <= MATCH_TOL else "MISMATCH"
    return DiscrepancyRecord(family, params, closed, engine, diff, flag)


def _family_policy(family: str) -> FramePolicy:
    # The product families use the aligned in-plane frames the closed forms
    # were derived in; the sparse configurations are compared against the
    # strongest (optimized) engine value.
    if family in ("product_pair", "coherent_squeezed"):
        return MeanSpinAligned(gauge="auto")
    return Optimized()


def standard_comparison_grids() -> dict[str, list[tuple]]:
    """Canonical parameter grids for the discrepancy report (deterministic)."""
    grids: dict[str, list[tuple]] = {}
    t = np.linspace(0.1, 3.0, 30)
    grids["product_pair"] = [(float(a), float(b)) for a in t for b in t]
    grids["coherent_squeezed"] = [(float(a),) for a in np.linspace(0.05, 3.1, 100)]
    ab = np.linspace(0.1, 3.0, 15)
    grids["config1"] = [
        tuple(np.array([math.sin(a) * math.cos(b), math.sin(a) * math.sin(b), math.cos(b)]))
        for a in ab
        for b in ab
    ]
    grids["config2"] = grids["config1"]
    ab3 = np.linspace(0.1, 3.0, 12)
    phases = ((0.0, 0.0), (0.7, 1.9))
    grids["config3"] = [
        (
            complex(math.cos(a)),
            math.sin(a) * math.cos(b) * complex(math.cos(p1), math.sin(p1)),
            math.sin(a) * math.sin(b) * complex(math.cos(p2), math.sin(p2)),
        )
        for p1, p2 in phases
        for a in ab3
        for b in ab3
    ]
    return grids


def run_standard_comparisons() -> dict[str, list[DiscrepancyRecord]]:
    """Run the full engine-versus-closed-form comparison over the canonical
    grids; returns records per family."""
    out: dict[str, list[DiscrepancyRecord]] = {}
    for family, grid in standard_comparison_grids().items():
        policy = _family_policy(family)
        out[family] = [compare_closed_forms(family, params, policy) for params in grid]
    return out


def family_summary(records: list[DiscrepancyRecord]) -> tuple[str, float, int]:
    """(flag, max abs_diff over defined rows, defined-row count) for a family."""
    diffs = [r.abs_diff for r in records if r.flag != "UNDEFINED"]
    if not diffs:
        return "UNDEFINED", float("nan"), 0
    max_diff = max(diffs)
    flag = "MATCH" if max_diff <= MATCH_TOL else "MISMATCH"
    return flag, max_diff, len(diffs)
