"""Discretizations of unit spheres with a known covering radius.

Nodes are taken modulo the symmetry ``|P(c w)| = |P(w)|`` for ``|c| = 1``
(sign in the real case, phase in the complex case), so a node set covers
the sphere when every unit vector is within ``covering_radius`` of
``c * node`` for some node and some unimodular ``c``.  The radius bounds
the chordal distance.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .forms import Field


@dataclass(frozen=True, eq=False)
class SphereGrid:
    field: Field
    dim: int
    nodes: np.ndarray
    covering_radius: float
    kind: str
    resolution: int
    params: dict = dc_field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.nodes)

    def refined(self) -> "SphereGrid":
        """Same family at twice the resolution; contains every current node."""
        return make_grid(self.field, self.dim, 2 * self.resolution)

    def to_dict(self) -> dict:
        return {"field": self.field.value, "dim": self.dim, "kind": self.kind,
                "resolution": self.resolution, "nodes": len(self.nodes),
                "covering_radius": self.covering_radius}


def circle_grid(n: int) -> SphereGrid:
    """``n`` directions ``(cos t, sin t)``, ``t = pi j / n`` on the half circle."""
    t = np.pi * np.arange(n) / n
    nodes = np.column_stack([np.cos(t), np.sin(t)])
    return SphereGrid(Field.REAL, 2, nodes, np.pi / (2 * n), "circle", n, {"angles": t})


def real_sphere_grid(n: int) -> SphereGrid:
    """Latitude/longitude grid on the half sphere of R^3.

    Polar angles ``pi i / n`` (i = 0..n), azimuths ``pi j / n`` (j < n);
    the two poles appear once.  Covering radius ``pi/(2n) + pi/(2n)``.
    """
    theta = np.pi * np.arange(n + 1) / n
    phi = np.pi * np.arange(n) / n
    pts = [np.array([0.0, 0.0, 1.0])]
    for th in theta[1:-1]:
        s, c = np.sin(th), np.cos(th)
        for ph in phi:
            pts.append(np.array([s * np.cos(ph), s * np.sin(ph), c]))
    nodes = np.array(pts)
    return SphereGrid(Field.REAL, 3, nodes, np.pi / n, "latlong", n)


def complex_sphere_grid(n: int) -> SphereGrid:
    """Nodes ``(cos t, e^{i s} sin t)`` with ``t = (pi/2) i/n``, ``s = 2 pi j/(4n)``.

    The overall phase is quotiented out, so the first coordinate is real
    and nonnegative.  Covering radius ``pi/(4n) + pi/(4n)``.
    """
    theta = 0.5 * np.pi * np.arange(n + 1) / n
    phi = 2.0 * np.pi * np.arange(4 * n) / (4 * n)
    pts = [np.array([1.0, 0.0], dtype=np.complex128)]
    angles = [(0.0, 0.0)]
    for th in theta[1:-1]:
        for ph in phi:
            pts.append(np.array([np.cos(th), np.exp(1j * ph) * np.sin(th)]))
            angles.append((th, ph))
    pts.append(np.array([0.0, 1.0], dtype=np.complex128))
    angles.append((0.5 * np.pi, 0.0))
    return SphereGrid(Field.COMPLEX, 2, np.array(pts), np.pi / (2 * n), "complex-torus", n,
                      {"angles": np.array(angles), "dtheta": 0.5 * np.pi / n, "dphi": 2.0 * np.pi / (4 * n)})


def make_grid(field, dim: int, n: int) -> SphereGrid:
    field = Field(field)
    if field is Field.REAL and dim == 2:
        return circle_grid(n)
    if field is Field.REAL and dim == 3:
        return real_sphere_grid(n)
    if field is Field.COMPLEX and dim == 2:
        return complex_sphere_grid(n)
    from .errors import UnsupportedError
    raise UnsupportedError(f"no sphere grid for {field.value} dimension {dim}")
