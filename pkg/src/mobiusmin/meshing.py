"""Annulus and Moebius-strip meshes of the immersion, OBJ export, and a
graph-theoretic orientability test.

The quotient by I(z) = -1/conj(z) has fundamental domain {1 <= |z| < rho};
on the unit circle I restricts to z -> -z, so the quotient mesh samples
the rings 1 <= r <= rho(1 - inset) and glues grid node (r=1, theta) to
(r=1, theta + pi).  Faces reference the canonical node of each glued pair,
which produces genuine Moebius connectivity; the partner samples stay in
the vertex list (unreferenced) and the identified index pairs are recorded
so the gluing error ||X(e^(i theta)) - X(-e^(i theta))|| stays checkable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .immersion import ImmersionData


@dataclass
class Mesh:
    vertices: np.ndarray  # (V, 3) float64
    faces: np.ndarray  # (F, 3) int64, indices into vertices
    quotient_pairs: tuple[tuple[int, int], ...] = ()
    metadata: dict = field(default_factory=dict)

    def max_quotient_gap(self) -> float:
        if not self.quotient_pairs:
            return 0.0
        gaps = [
            float(np.linalg.norm(self.vertices[i] - self.vertices[j]))
            for i, j in self.quotient_pairs
        ]
        return max(gaps)


def build_mesh(
    imm: ImmersionData,
    n_r: int,
    n_theta: int,
    boundary_inset: float = 0.02,
    quotient: bool = True,
    metadata: dict | None = None,
) -> Mesh:
    """Sample X on a polar grid and triangulate.

    quotient=False: rings span [(1/rho)(1+inset), rho(1-inset)], faces wrap
    around theta; the result is an annulus (orientable).
    quotient=True: rings span [1, rho(1-inset)] with the antipodal gluing
    on the r = 1 ring; the result is a Moebius strip (nonorientable).
    """
    if n_r < 2:
        raise ParameterError("n_r must be >= 2")
    if n_theta < 8 or n_theta % 2:
        raise ParameterError("n_theta must be an even integer >= 8")
    if not 0.0 < boundary_inset < 0.5:
        raise ParameterError("boundary_inset must lie in (0, 0.5)")
    r_in, r_out = imm.annulus
    if quotient:
        radii = np.geomspace(1.0, r_out * (1.0 - boundary_inset), n_r)
    else:
        radii = np.geomspace(
            r_in * (1.0 + boundary_inset), r_out * (1.0 - boundary_inset), n_r
        )
    angles = np.exp(2j * np.pi * np.arange(n_theta) / n_theta)
    grid = np.outer(radii, angles)
    vertices = imm.position_many(grid.ravel())

    def vid(i: int, j: int) -> int:
        return i * n_theta + j % n_theta

    half = n_theta // 2
    pairs: list[tuple[int, int]] = []
    if quotient:
        pairs = [(vid(0, j), vid(0, j + half)) for j in range(half)]

    def canonical(i: int, j: int) -> int:
        j %= n_theta
        if quotient and i == 0 and j >= half:
            j -= half
        return vid(i, j)

    faces = []
    for i in range(n_r - 1):
        for j in range(n_theta):
            v00 = canonical(i, j)
            v01 = canonical(i, j + 1)
            v10 = canonical(i + 1, j)
            v11 = canonical(i + 1, j + 1)
            faces.append((v00, v01, v11))
            faces.append((v00, v11, v10))
    return Mesh(
        vertices=np.asarray(vertices, dtype=np.float64),
        faces=np.asarray(faces, dtype=np.int64),
        quotient_pairs=tuple(pairs),
        metadata=dict(metadata or {}),
    )


def is_orientable(faces) -> bool:
    """Propagate face orientations across shared edges; orientable iff no
    contradiction arises.

    Two faces sharing an edge are consistently oriented when they traverse
    it in opposite directions; a sign assignment on faces must flip across
    every same-direction adjacency.  A breadth-first sweep either finds a
    global assignment or proves there is none.
    """
    faces = np.asarray(faces, dtype=np.int64)
    edge_uses: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for f_idx, (a, b, c) in enumerate(faces):
        for u, v in ((a, b), (b, c), (c, a)):
            key = (min(u, v), max(u, v))
            direction = 1 if u < v else -1
            edge_uses.setdefault(key, []).append((f_idx, direction))
    adjacency: dict[int, list[tuple[int, int]]] = {i: [] for i in range(len(faces))}
    for uses in edge_uses.values():
        if len(uses) > 2:
            raise ParameterError("non-manifold edge (more than two incident faces)")
        if len(uses) == 2:
            (f1, d1), (f2, d2) = uses
            # opposite traversal (d1 != d2): same sign; same traversal: flip
            relation = -1 if d1 == d2 else 1
            adjacency[f1].append((f2, relation))
            adjacency[f2].append((f1, relation))
    signs = [0] * len(faces)
    for start in range(len(faces)):
        if signs[start]:
            continue
        signs[start] = 1
        queue = [start]
        while queue:
            f = queue.pop()
            for g, rel in adjacency[f]:
                want = signs[f] * rel
                if signs[g] == 0:
                    signs[g] = want
                    queue.append(g)
                elif signs[g] != want:
                    return False
    return True


def export_obj(mesh: Mesh, path) -> None:
    """Write the mesh as deterministic OBJ text.

    Header comments carry the metadata ("# key=value"), vertices are
    printed with 17 significant digits (doubles round-trip exactly), faces
    are 1-based.  Output bytes are a pure function of the mesh.
    """
    lines = ["# mobiusmin mesh"]
    for key in sorted(mesh.metadata):
        lines.append(f"# {key}={mesh.metadata[key]}")
    for v in mesh.vertices:
        lines.append("v %.17g %.17g %.17g" % (v[0], v[1], v[2]))
    for f in mesh.faces:
        lines.append("f %d %d %d" % (f[0] + 1, f[1] + 1, f[2] + 1))
    data = ("\n".join(lines) + "\n").encode("ascii")
    with open(path, "wb") as fh:
        fh.write(data)


def load_obj(path) -> tuple[np.ndarray, np.ndarray]:
    """Parse vertices and faces back from an OBJ file."""
    vertices, faces = [], []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                vertices.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(x.split("/")[0]) - 1 for x in parts[1:4]])
    return (
        np.asarray(vertices, dtype=np.float64),
        np.asarray(faces, dtype=np.int64),
    )
