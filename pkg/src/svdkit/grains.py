"""Crystal grain populations, ellipsoid fits and crystal size distributions.

Grains nucleate as ``round(exp(alpha * t))`` new crystals at each step ``t``
and grow at a constant rate along three axes in a fixed ratio (prism 1:1:5,
plate 1:5:5, cuboid 1:3:5).  Each grain is stored as a cloud of boundary
points.  Its size is measured through an ellipsoid ``{x : (x-c)^T A (x-c) <= 1}``
whose radii are ``1/sqrt(sigma_i)`` for the singular values of ``A``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .core import svd
from .errors import (
    ConvergenceFailure,
    DegenerateInput,
    InsufficientData,
    InvalidKind,
    MismatchedFrames,
    ParameterError,
    SingularShape,
)

D = 3
MAX_KHACHIYAN_ITER = 100_000


class Shape(enum.Enum):
    PRISM = (1.0, 1.0, 5.0)
    PLATE = (1.0, 5.0, 5.0)
    CUBOID = (1.0, 3.0, 5.0)

    @property
    def ratios(self) -> np.ndarray:
        return np.array(self.value)

    @classmethod
    def parse(cls, name) -> "Shape":
        if isinstance(name, cls):
            return name
        try:
            return cls[str(name).upper()]
        except KeyError:
            raise ParameterError(f"unknown crystal shape {name!r}") from None


class Kind(enum.Enum):
    ENCLOSING = "enclosing"
    INSCRIBED = "inscribed"
    MEAN = "mean"


class Selector(enum.Enum):
    """Which diameter measures a grain: radii are sorted long to short."""

    LONG = 0
    INTERMEDIATE = 1
    SHORT = 2

    @classmethod
    def parse(cls, name) -> "Selector":
        if isinstance(name, cls):
            return name
        try:
            return cls[str(name).upper()]
        except KeyError:
            raise ParameterError(f"unknown diameter selector {name!r}") from None


@dataclass(frozen=True)
class GrowthParams:
    alpha: float = 0.5
    steps: int = 8
    growth_rate: float | Sequence[float] = 1.0
    shape: Shape = Shape.PRISM
    noise: float = 0.0
    seed: int = 0
    points_per_grain: int = 5000
    domain: float = 100.0

    def validate(self) -> None:
        if int(self.steps) != self.steps or self.steps < 1:
            raise ParameterError(f"steps must be a positive integer, got {self.steps}")
        rate = np.broadcast_to(np.asarray(self.growth_rate, dtype=float), (D,))
        if not np.all(rate > 0):
            raise ParameterError(f"growth rates must be positive, got {self.growth_rate}")
        if not 0.0 <= self.noise <= 0.5:
            raise ParameterError(f"noise must lie in [0, 0.5], got {self.noise}")
        if not math.isfinite(self.alpha):
            raise ParameterError("alpha must be finite")
        if self.points_per_grain < 8:
            raise ParameterError("points_per_grain must be at least 8")


@dataclass(frozen=True, eq=False)
class Grain:
    points: np.ndarray
    birth_step: int


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    shape: np.ndarray
    center: np.ndarray
    kind: Kind = Kind.ENCLOSING

    def contains(self, points, tol: float = 0.0) -> np.ndarray:
        d = np.atleast_2d(points) - self.center
        return np.einsum("ij,jk,ik->i", d, self.shape, d) <= 1.0 + tol

    @classmethod
    def from_geometry(cls, radii, orientation, center, kind: Kind) -> "Ellipsoid":
        R = np.asarray(orientation, dtype=float)
        shape = (R / np.asarray(radii, dtype=float) ** 2) @ R.T
        return cls(0.5 * (shape + shape.T), np.asarray(center, dtype=float), kind)


@dataclass(frozen=True, eq=False)
class EllipsoidGeometry:
    radii: np.ndarray
    orientation: np.ndarray

    @property
    def diameters(self) -> np.ndarray:
        return 2.0 * self.radii


@dataclass(frozen=True, eq=False)
class CsdReport:
    bin_edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray
    sizes: np.ndarray
    slope: float
    intercept: float
    r_squared: float
    degenerate: bool = False


def _nuclei_per_step(alpha: float, steps: int) -> list[int]:
    return [int(round(math.exp(alpha * t))) for t in range(1, steps + 1)]


def box_surface_points(half_dims, n_points: int = 5000) -> np.ndarray:
    """Lattice points on the surface of an axis-aligned box centred at the origin.

    The lattice spacing is chosen so that roughly ``n_points`` points land on
    the six faces; every edge gets at least two points so the corners are
    always present.
    """
    h = np.asarray(half_dims, dtype=float)
    area = 8.0 * (h[0] * h[1] + h[1] * h[2] + h[0] * h[2])
    spacing = math.sqrt(area / n_points)
    counts = [max(2, int(round(2.0 * hi / spacing)) + 1) for hi in h]
    axes = [np.linspace(-hi, hi, c) for hi, c in zip(h, counts)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    idx = np.stack(np.meshgrid(*[np.arange(c) for c in counts], indexing="ij"), axis=-1)
    on_face = np.zeros(grid.shape[:3], dtype=bool)
    for ax, c in enumerate(counts):
        on_face |= (idx[..., ax] == 0) | (idx[..., ax] == c - 1)
    return grid[on_face]


def generate_population(params: GrowthParams) -> list[Grain]:
    """Grow a free-floating population of grains.

    A grain born at step ``t`` has grown for ``steps - t + 1`` steps, so its
    half-diameters are ``growth_rate * ratios * age``.  Grains are placed at
    random centres inside a cube of side ``domain``; with ``noise > 0`` each
    boundary point is pushed radially by a random relative amount.
    """
    params.validate()
    shape = Shape.parse(params.shape)
    rng = np.random.default_rng(params.seed)
    rate = np.broadcast_to(np.asarray(params.growth_rate, dtype=float), (D,))
    grains = []
    for t, count in enumerate(_nuclei_per_step(params.alpha, params.steps), start=1):
        age = params.steps - t + 1
        half = rate * shape.ratios * age
        base = box_surface_points(half, params.points_per_grain)
        for _ in range(count):
            center = rng.uniform(0.0, params.domain, size=D)
            pts = base
            if params.noise > 0:
                pts = pts * (1.0 + params.noise * rng.uniform(-1.0, 1.0, size=(len(pts), 1)))
            grains.append(Grain(pts + center, t))
    return grains


def _check_cloud(points) -> np.ndarray:
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or P.shape[1] != D:
        raise DegenerateInput(f"expected an n x 3 point array, got shape {P.shape}")
    if P.shape[0] < D + 1:
        raise DegenerateInput(f"need at least {D + 1} points, got {P.shape[0]}")
    if not np.all(np.isfinite(P)):
        raise DegenerateInput("point cloud contains NaN or Inf")
    centered = P - P.mean(axis=0)
    scale = np.abs(centered).max()
    if scale == 0:
        raise DegenerateInput("all points coincide")
    sigma = svd(centered / scale).sigma
    if sigma[-1] <= 1e-10 * sigma[0]:
        raise DegenerateInput("points do not span three dimensions")
    return P


def _hull_vertices(P: np.ndarray) -> np.ndarray:
    try:
        return P[ConvexHull(P).vertices]
    except QhullError as exc:  # pragma: no cover - flat clouds are caught earlier
        raise DegenerateInput(str(exc).splitlines()[0]) from exc


def khachiyan_weights(P: np.ndarray, tol: float, max_iter: int = MAX_KHACHIYAN_ITER):
    """Dual weights of the minimum-volume enclosing ellipsoid of the rows of ``P``.

    Points are lifted to ``(x, 1)`` in ``d = D + 1`` dimensions and carry
    weights ``u`` (uniform to start).  With ``M_i`` the lifted Mahalanobis
    value of point ``i``, each iteration either moves weight towards the
    point of largest ``M`` with step ``(M - d) / (d (M - 1))`` (Khachiyan) or,
    when the smallest ``M`` among weighted points is further from ``d``,
    takes weight away from that point (Todd-Yildirim away step).  Iteration
    stops once ``max M - d <= D * tol``, which keeps every point within
    ``1 + tol`` of the recovered ellipsoid.  Returns ``(u, iterations)``.
    """
    n = P.shape[0]
    d = P.shape[1] + 1
    Q = np.hstack([P, np.ones((n, 1))])
    u = np.full(n, 1.0 / n)
    for it in range(1, max_iter + 1):
        X = (Q.T * u) @ Q
        M = np.einsum("ij,ji->i", Q, np.linalg.solve(X, Q.T))
        j = int(np.argmax(M))
        M_up = M[j]
        if M_up - d <= (d - 1) * tol:
            return u, it
        support = np.flatnonzero(u > 0)
        k = support[np.argmin(M[support])]
        M_down = M[k]
        if M_up / d - 1.0 >= 1.0 - M_down / d:
            step = (M_up - d) / (d * (M_up - 1.0))
            u *= 1.0 - step
            u[j] += step
        else:
            step = min((d - M_down) / (d * (M_down - 1.0)), u[k] / (1.0 - u[k]))
            u *= 1.0 + step
            u[k] -= step
            if u[k] < 1e-300:
                u[k] = 0.0
    raise ConvergenceFailure(f"Khachiyan iteration did not reach tol={tol} in {max_iter} iterations")


def mvee(points, tol: float = 1e-7) -> Ellipsoid:
    """Minimum-volume enclosing ellipsoid of a 3-D point cloud.

    Only the convex-hull vertices can carry weight, so the iteration runs on
    those.  Every input point satisfies ``(p - c)^T A (p - c) <= 1 + tol``.
    """
    if not tol > 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    P = _hull_vertices(_check_cloud(points))
    u, _ = khachiyan_weights(P, tol)
    c = P.T @ u
    cov = (P.T * u) @ P - np.outer(c, c)
    A = np.linalg.inv(cov) / D
    return Ellipsoid(0.5 * (A + A.T), c, Kind.ENCLOSING)


def geometry(e: Ellipsoid) -> EllipsoidGeometry:
    """Radii ``1/sqrt(sigma_i)`` (longest first) and orientation ``V`` of an ellipsoid."""
    U, sigma, V = svd(e.shape)
    if sigma[-1] <= 0 or sigma[-1] <= sigma[0] * 1e-14:
        raise SingularShape(f"shape matrix is singular (sigma = {sigma.tolist()})")
    # sigma descends, so the radii come out ascending; reverse both
    radii = 1.0 / np.sqrt(sigma[::-1])
    R = np.array(V[:, ::-1], copy=True)
    if np.linalg.det(R) < 0:
        R[:, -1] *= -1
    return EllipsoidGeometry(radii, R)


def inscribed(e: Ellipsoid) -> Ellipsoid:
    """Enclosing ellipsoid shrunk by ``1/D`` about its centre.

    By John's theorem the result lies inside the convex hull of the points
    the enclosing ellipsoid was fitted to.
    """
    if e.kind is not Kind.ENCLOSING:
        raise InvalidKind(f"inscribed() needs an enclosing ellipsoid, got {e.kind.value}")
    return Ellipsoid(e.shape * D**2, e.center.copy(), Kind.INSCRIBED)


def mean_ellipsoid(enclosing: Ellipsoid, inner: Ellipsoid, atol: float = 1e-8) -> Ellipsoid:
    """Ellipsoid whose radii are the axis-wise mean of two co-framed ellipsoids."""
    if not np.allclose(enclosing.center, inner.center, rtol=0, atol=atol):
        raise MismatchedFrames("ellipsoid centres differ")
    g1 = geometry(enclosing)
    R = g1.orientation
    # the frames agree when the first ellipsoid's axes also diagonalise the second
    # shape; this stays well defined when radii repeat
    B = R.T @ inner.shape @ R
    off = B - np.diag(np.diag(B))
    if np.abs(off).max() > atol * np.abs(B).max() or np.any(np.diag(B) <= 0):
        raise MismatchedFrames("ellipsoid orientations differ")
    radii = 0.5 * (g1.radii + 1.0 / np.sqrt(np.diag(B)))
    return Ellipsoid.from_geometry(radii, g1.orientation, enclosing.center, Kind.MEAN)


def fit_ellipsoid(points, kind: Kind | str = Kind.ENCLOSING, tol: float = 1e-7) -> Ellipsoid:
    kind = Kind(kind)
    outer = mvee(points, tol)
    if kind is Kind.ENCLOSING:
        return outer
    inner = inscribed(outer)
    if kind is Kind.INSCRIBED:
        return inner
    return mean_ellipsoid(outer, inner)


def fit_all(points, tol: float = 1e-7) -> dict[Kind, Ellipsoid]:
    """Enclosing, inscribed and mean ellipsoids from a single enclosing fit."""
    outer = mvee(points, tol)
    inner = inscribed(outer)
    return {Kind.ENCLOSING: outer, Kind.INSCRIBED: inner, Kind.MEAN: mean_ellipsoid(outer, inner)}


def grain_diameters(grains: Sequence[Grain], kind: Kind | str = Kind.INSCRIBED, tol: float = 1e-7) -> np.ndarray:
    """``len(grains) x 3`` array of diameters, longest first."""
    return np.array([geometry(fit_ellipsoid(g.points, kind, tol)).diameters for g in grains])


def all_diameters(grains: Sequence[Grain], tol: float = 1e-7) -> dict[Kind, np.ndarray]:
    """Diameters for every ellipsoid kind, fitting each grain only once."""
    out: dict[Kind, list] = {k: [] for k in Kind}
    for g in grains:
        for kind, e in fit_all(g.points, tol).items():
            out[kind].append(geometry(e).diameters)
    return {k: np.array(v) for k, v in out.items()}


def csd_from_sizes(sizes) -> CsdReport:
    """Histogram sizes into ``ceil(sqrt(N))`` bins and fit ln(density) against size."""
    sizes = np.asarray(sizes, dtype=float)
    if sizes.size < 5:
        raise InsufficientData(f"need at least 5 grains, got {sizes.size}")
    n_bins = math.ceil(math.sqrt(sizes.size))
    lo, hi = sizes.min(), sizes.max()
    if hi - lo <= 1e-12 * max(abs(hi), 1.0):
        edges = np.array([lo - 0.5, lo + 0.5]) if lo == 0 else np.array([lo * 0.5, lo * 1.5])
        counts = np.array([sizes.size])
        density = counts / np.diff(edges)
        return CsdReport(edges, counts, density, sizes, math.nan, math.nan, math.nan, degenerate=True)
    counts, edges = np.histogram(sizes, bins=n_bins, range=(lo, hi))
    density = counts / np.diff(edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    nz = counts > 0
    if np.count_nonzero(nz) < 2:
        return CsdReport(edges, counts, density, sizes, math.nan, math.nan, math.nan, degenerate=True)
    x, y = centers[nz], np.log(density[nz])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss_tot if ss_tot > 0 else 1.0
    if np.count_nonzero(nz) == 2:
        r2 = 1.0
    return CsdReport(edges, counts, density, sizes, float(slope), float(intercept), float(min(max(r2, 0.0), 1.0)))


def csd(
    grains: Sequence[Grain],
    selector: Selector | str = Selector.SHORT,
    kind: Kind | str = Kind.INSCRIBED,
    tol: float = 1e-7,
) -> CsdReport:
    """Crystal size distribution of one diameter of the fitted ellipsoids."""
    if len(grains) < 5:
        raise InsufficientData(f"need at least 5 grains, got {len(grains)}")
    selector = Selector.parse(selector)
    diam = grain_diameters(grains, kind, tol)
    return csd_from_sizes(diam[:, selector.value])
