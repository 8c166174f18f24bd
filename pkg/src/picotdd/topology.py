"""Deterministic random network layouts: pico cells dropped into the
sectors of a hexagonal macro grid, users dropped into each pico disc.

Macro sites provide geometry only; they never transmit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class PlacementError(RuntimeError):
    """Raised when a node cannot be placed after the retry budget."""


@dataclass
class NetworkLayout:
    """Positions (meters) and serving assignments of one network drop.

    Node indexing is global: pico i has node index i, UE j has node index
    n_picos + j. UEs are grouped per cell, ``ues_per_pico`` consecutive
    indices per pico, in pico order.
    """

    site_xy: np.ndarray          # (n_sites, 2)
    pico_xy: np.ndarray          # (n_picos, 2)
    ue_xy: np.ndarray            # (n_ues, 2)
    serving: np.ndarray          # (n_ues,) pico index per UE
    pico_sector: np.ndarray = field(default_factory=lambda: np.zeros(0, int))
    isd_m: float = 500.0
    pico_radius_m: float = 40.0

    @property
    def n_picos(self) -> int:
        return len(self.pico_xy)

    @property
    def n_ues(self) -> int:
        return len(self.ue_xy)

    @property
    def n_nodes(self) -> int:
        return self.n_picos + self.n_ues

    def ue_node(self, ue_index: int) -> int:
        return self.n_picos + ue_index

    def ues_of_cell(self, pico_index: int) -> np.ndarray:
        """UE indices served by one pico."""
        return np.flatnonzero(self.serving == pico_index)

    def all_xy(self) -> np.ndarray:
        """Positions of all nodes in global node order."""
        return np.vstack([self.pico_xy, self.ue_xy])

    def dump_table(self) -> str:
        """Plain-text table of all nodes: id, kind, x, y, serving id."""
        lines = ["id\tkind\tx_m\ty_m\tserving"]
        for i, (x, y) in enumerate(self.pico_xy):
            lines.append(f"{i}\tpico\t{x:.3f}\t{y:.3f}\t-")
        for j, (x, y) in enumerate(self.ue_xy):
            lines.append(
                f"{self.ue_node(j)}\tue\t{x:.3f}\t{y:.3f}\t{self.serving[j]}"
            )
        return "\n".join(lines) + "\n"


def distance(a, b) -> float:
    """Euclidean distance between two 2-D points in meters."""
    ax, ay = a
    bx, by = b
    if not all(math.isfinite(v) for v in (ax, ay, bx, by)):
        raise ValueError("coordinates must be finite")
    return math.hypot(ax - bx, ay - by)


def _hex_sites(n_sites: int, isd_m: float) -> np.ndarray:
    """First `n_sites` positions of a hexagonal grid walked ring by ring."""
    a1 = np.array([isd_m, 0.0])
    a2 = np.array([isd_m / 2.0, isd_m * math.sqrt(3.0) / 2.0])
    coords = [np.zeros(2)]
    ring = 1
    # Axial-coordinate ring walk: start at (ring, 0), take `ring` steps in
    # each of the six neighbor directions.
    steps = [(-1, 1), (-1, 0), (0, -1), (1, -1), (1, 0), (0, 1)]
    while len(coords) < n_sites:
        q, r = ring, 0
        for dq, dr in steps:
            for _ in range(ring):
                coords.append(q * a1 + r * a2)
                q, r = q + dq, r + dr
                if len(coords) >= n_sites:
                    break
            if len(coords) >= n_sites:
                break
        ring += 1
    return np.array(coords[:n_sites])


# Unit vectors toward the six neighbors of a hex-grid site; the Voronoi
# cell is the set of points whose projection on each stays below ISD/2.
_NEIGHBOR_DIRS = np.array(
    [[math.cos(k * math.pi / 3.0), math.sin(k * math.pi / 3.0)] for k in range(6)]
)


def _in_hex_cell(offset_xy: np.ndarray, isd_m: float) -> bool:
    return bool(np.all(_NEIGHBOR_DIRS @ offset_xy <= isd_m / 2.0 + 1e-9))


def _sector_of(offset_xy: np.ndarray) -> int:
    angle = math.atan2(offset_xy[1], offset_xy[0]) % (2.0 * math.pi)
    return int(angle / (2.0 * math.pi / 3.0)) % 3


def generate_layout(
    n_sites: int,
    picos_per_sector: int,
    ues_per_pico: int,
    seed: int,
    isd_m: float = 500.0,
    pico_radius_m: float = 40.0,
    min_pico_pico_m: float = 40.0,
    min_pico_ue_m: float = 10.0,
    min_ue_ue_m: float = 3.0,
    max_tries: int = 20000,
) -> NetworkLayout:
    """Drop picos_per_sector picos into each 120-degree sector of every
    site and ues_per_pico UEs uniformly into each pico disc.

    Fully determined by the arguments including `seed`.
    """
    if min(n_sites, picos_per_sector, ues_per_pico) < 1:
        raise ValueError("all counts must be >= 1")
    if pico_radius_m <= min_pico_ue_m:
        raise ValueError("pico radius must exceed the pico-UE minimum distance")

    rng = np.random.default_rng(np.random.SeedSequence((seed, 0)))
    sites = _hex_sites(n_sites, isd_m)
    hex_circumradius = isd_m / math.sqrt(3.0)

    pico_xy = []
    pico_sector = []
    for site in sites:
        for sector in range(3):
            for _ in range(picos_per_sector):
                for attempt in range(max_tries):
                    # Uniform in the circumcircle, then accept if inside the
                    # hexagonal cell and the wanted sector wedge.
                    r = hex_circumradius * math.sqrt(rng.random())
                    theta = 2.0 * math.pi * rng.random()
                    offset = np.array([r * math.cos(theta), r * math.sin(theta)])
                    if not _in_hex_cell(offset, isd_m):
                        continue
                    if _sector_of(offset) != sector:
                        continue
                    candidate = site + offset
                    if pico_xy:
                        d = np.linalg.norm(np.array(pico_xy) - candidate, axis=1)
                        if d.min() < min_pico_pico_m:
                            continue
                    pico_xy.append(candidate)
                    pico_sector.append(sector)
                    break
                else:
                    raise PlacementError(
                        f"could not place pico after {max_tries} tries "
                        f"(site at {site}, sector {sector})"
                    )
    pico_xy = np.array(pico_xy)

    ue_xy = []
    serving = []
    for pico_index, pico in enumerate(pico_xy):
        for _ in range(ues_per_pico):
            for attempt in range(max_tries):
                r = pico_radius_m * math.sqrt(rng.random())
                theta = 2.0 * math.pi * rng.random()
                candidate = pico + np.array([r * math.cos(theta), r * math.sin(theta)])
                d_pico = np.linalg.norm(pico_xy - candidate, axis=1)
                if d_pico.min() < min_pico_ue_m:
                    continue
                if ue_xy:
                    d_ue = np.linalg.norm(np.array(ue_xy) - candidate, axis=1)
                    if d_ue.min() < min_ue_ue_m:
                        continue
                ue_xy.append(candidate)
                serving.append(pico_index)
                break
            else:
                raise PlacementError(
                    f"could not place UE after {max_tries} tries (pico {pico_index})"
                )

    return NetworkLayout(
        site_xy=sites,
        pico_xy=pico_xy,
        ue_xy=np.array(ue_xy),
        serving=np.array(serving, dtype=int),
        pico_sector=np.array(pico_sector, dtype=int),
        isd_m=isd_m,
        pico_radius_m=pico_radius_m,
    )
