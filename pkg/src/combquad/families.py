"""Parametric two- and three-point rule families and their sign-region maps.

The two-point family with nodes (t0, t1) has degree >= 1 by construction; its
defect at t^2 is 2/3 + 2*t0*t1, zero exactly on a hyperbola where the degree
rises to 2 (or to 3 at the two symmetric surd points).  The three-point family
is exact through t^2 and classified by the sign of its value on t^3.  Region
rasters sample these classifiers exactly on a rational lattice and serialize
as PGM or CSV.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import DomainError
from .exact import ExactScalar, exactify, scalar_pow, surd_canonicalize
from .numeric import worker_limit
from .rules import QuadRule


class Family(Enum):
    TWO_POINT = "two-point"
    THREE_POINT_SLICE = "three-point-slice"


class RegionLabel(Enum):
    POSITIVE_DEG1 = "positive-deg1"
    NEGATIVE_DEG1 = "negative-deg1"
    DEG2_POSITIVE = "deg2-positive"
    DEG2_NEGATIVE = "deg2-negative"
    DEGREE_AT_LEAST_3 = "degree-at-least-3"
    INVALID = "invalid"


_PGM_BYTES = {
    "positive": 255,
    "negative": 0,
    "boundary": 128,
    "invalid": 64,
}


def _in_unit_interval(x: ExactScalar) -> bool:
    return (x - 1).sign() <= 0 and (x + 1).sign() >= 0


def two_point_rule(t0, t1) -> QuadRule:
    """Two-point rule exact on 1 and t: weights 2*t1/(t1-t0), -2*t0/(t1-t0)."""
    t0, t1 = exactify(t0), exactify(t1)
    if t0 == t1:
        raise DomainError(f"families: coincident nodes t0 = t1 = {t0}")
    diff = t1 - t0
    w0 = (2 * t1) / diff
    w1 = (-2 * t0) / diff
    return QuadRule([(t0, w0), (t1, w1)], f"two-point({t0}, {t1})")


def _two_point_data(t0, t1) -> tuple[RegionLabel, ExactScalar]:
    t0, t1 = exactify(t0), exactify(t1)
    zero = exactify(0)
    if t0 == t1 or not (_in_unit_interval(t0) and _in_unit_interval(t1)):
        return RegionLabel.INVALID, zero
    gamma2 = Fraction(2, 3) + 2 * t0 * t1
    s = gamma2.sign()
    if s > 0:
        return RegionLabel.POSITIVE_DEG1, gamma2
    if s < 0:
        return RegionLabel.NEGATIVE_DEG1, gamma2
    # on the hyperbola: degree >= 2, classified by the moment of the nodal
    # cubic (t - t0)^2 (t - t1)
    mu3 = -(Fraction(4, 3) * t0 + Fraction(2, 3) * t1 + 2 * scalar_pow(t0, 2) * t1)
    cs = mu3.sign()
    if cs > 0:
        return RegionLabel.DEG2_POSITIVE, gamma2
    if cs < 0:
        return RegionLabel.DEG2_NEGATIVE, gamma2
    return RegionLabel.DEGREE_AT_LEAST_3, gamma2


def two_point_classify(t0, t1) -> RegionLabel:
    """Region label of the two-point family at (t0, t1)."""
    return _two_point_data(t0, t1)[0]


def _omega(t0: ExactScalar, t1: ExactScalar, t2: ExactScalar):
    d10 = t1 - t0
    d20 = t2 - t0
    d21 = t2 - t1
    if d10.is_zero() or d20.is_zero() or d21.is_zero():
        raise DomainError("families: three-point nodes must be pairwise distinct")
    w0 = (2 * (1 + 3 * t1 * t2)) / (3 * d10 * d20)
    w1 = -(2 * (1 + 3 * t0 * t2)) / (3 * d10 * d21)
    w2 = (2 * (1 + 3 * t0 * t1)) / (3 * d20 * d21)
    return w0, w1, w2


def three_point_weights(t0, t1, t2) -> QuadRule:
    """Unique weights making the three-point rule exact on 1, t and t^2."""
    t0, t1, t2 = exactify(t0), exactify(t1), exactify(t2)
    w0, w1, w2 = _omega(t0, t1, t2)
    return QuadRule(
        [(t0, w0), (t1, w1), (t2, w2)], f"three-point({t0}, {t1}, {t2})"
    )


def three_point_sign(t0, t1, t2) -> ExactScalar:
    """Value of the three-point rule on t^3.

    Negative means a positive rule, positive means a negative rule and zero
    means the degree is at least 3.
    """
    t0, t1, t2 = exactify(t0), exactify(t1), exactify(t2)
    w0, w1, w2 = _omega(t0, t1, t2)
    return (
        scalar_pow(t0, 3) * w0 + scalar_pow(t1, 3) * w1 + scalar_pow(t2, 3) * w2
    )


def _three_point_data(t0, t1, t2) -> tuple[RegionLabel, ExactScalar]:
    t0, t1, t2 = exactify(t0), exactify(t1), exactify(t2)
    zero = exactify(0)
    if t0 == t1 or t1 == t2 or t0 == t2:
        return RegionLabel.INVALID, zero
    if not all(_in_unit_interval(t) for t in (t0, t1, t2)):
        return RegionLabel.INVALID, zero
    p = three_point_sign(t0, t1, t2)
    s = p.sign()
    if s < 0:
        return RegionLabel.DEG2_POSITIVE, p
    if s > 0:
        return RegionLabel.DEG2_NEGATIVE, p
    return RegionLabel.DEGREE_AT_LEAST_3, p


def gauss3() -> QuadRule:
    """Three-point Gauss-Legendre rule: nodes 0, +/-sqrt(3/5), weights 8/9, 5/9."""
    node = surd_canonicalize(Fraction(3, 5))
    return QuadRule(
        [(-node, Fraction(5, 9)), (0, Fraction(8, 9)), (node, Fraction(5, 9))],
        "gauss-legendre-3",
    )


# -- region rasters ------------------------------------------------------------


@dataclass(frozen=True)
class RasterSpec:
    family: Family
    grid_size: int
    fixed_coordinate: Fraction | None = None
    boundary_band: Fraction = Fraction(1, 1000)

    def __post_init__(self):
        if self.grid_size < 2:
            raise DomainError(f"families: grid_size must be >= 2, got {self.grid_size}")
        if self.boundary_band <= 0:
            raise DomainError("families: boundary_band must be > 0")
        if self.family is Family.THREE_POINT_SLICE:
            if self.fixed_coordinate is None:
                raise DomainError(
                    "families: three-point slices need a fixed t2 coordinate"
                )
            t2 = exactify(Fraction(self.fixed_coordinate))
            if not _in_unit_interval(t2):
                raise DomainError("families: fixed coordinate outside [-1, 1]")


def lattice_coords(grid_size: int) -> tuple[Fraction, ...]:
    """Exact lattice -1 + i * 2/(grid_size - 1), i = 0..grid_size-1."""
    step = Fraction(2, grid_size - 1)
    return tuple(Fraction(-1) + i * step for i in range(grid_size))


@dataclass(frozen=True)
class Raster:
    """Exact region map on a rational lattice.

    Rows run top to bottom over descending t1; columns run left to right over
    ascending t0.  The boundary flags mark cells whose classifier magnitude is
    below the spec's band; they affect only the PGM rendering.
    """

    spec: RasterSpec
    labels: tuple[tuple[RegionLabel, ...], ...]
    boundary: tuple[tuple[bool, ...], ...]
    coords: tuple[Fraction, ...]

    def cell_index(self, t0, t1) -> tuple[int, int]:
        """(row, col) of the lattice cell nearest to the point."""
        g = self.spec.grid_size
        step = Fraction(2, g - 1)

        def snap(x):
            i = round((Fraction(x) + 1) / step)
            return min(max(i, 0), g - 1)

        return g - 1 - snap(t1), snap(t0)

    def label_at(self, t0, t1) -> RegionLabel:
        r, c = self.cell_index(t0, t1)
        return self.labels[r][c]

    def to_pgm_bytes(self) -> bytes:
        g = self.spec.grid_size
        header = f"P5\n{g} {g}\n255\n".encode("ascii")
        data = bytearray()
        for row_labels, row_boundary in zip(self.labels, self.boundary):
            for label, band in zip(row_labels, row_boundary):
                data.append(_pgm_byte(label, band))
        return header + bytes(data)

    def to_csv_text(self) -> str:
        lines = []
        g = self.spec.grid_size
        for r in range(g):
            t1 = self.coords[g - 1 - r]
            for c in range(g):
                t0 = self.coords[c]
                lines.append(f"{t0},{t1},{self.labels[r][c].value}")
        return "\n".join(lines) + "\n"


def _pgm_byte(label: RegionLabel, band: bool) -> int:
    if label is RegionLabel.INVALID:
        return _PGM_BYTES["invalid"]
    if band or label is RegionLabel.DEGREE_AT_LEAST_3:
        return _PGM_BYTES["boundary"]
    if label in (RegionLabel.POSITIVE_DEG1, RegionLabel.DEG2_POSITIVE):
        return _PGM_BYTES["positive"]
    return _PGM_BYTES["negative"]


def region_raster(spec: RasterSpec) -> Raster:
    """Classify every lattice cell exactly; the band never alters labels."""
    coords = lattice_coords(spec.grid_size)
    g = spec.grid_size
    band = Fraction(spec.boundary_band)
    if spec.family is Family.TWO_POINT:
        classifier = _two_point_data
        fixed = ()
    else:
        t2 = Fraction(spec.fixed_coordinate)
        classifier = _three_point_data
        fixed = (t2,)

    def compute_row(r: int):
        t1 = coords[g - 1 - r]
        labels = []
        flags = []
        for c in range(g):
            label, value = classifier(coords[c], t1, *fixed)
            labels.append(label)
            flags.append(abs(value) < band)
        return tuple(labels), tuple(flags)

    workers = worker_limit()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(compute_row, range(g)))
    else:
        rows = [compute_row(r) for r in range(g)]
    return Raster(
        spec=spec,
        labels=tuple(rw[0] for rw in rows),
        boundary=tuple(rw[1] for rw in rows),
        coords=coords,
    )
