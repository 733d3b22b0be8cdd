"""Simplicial mesh topology and structured mesh generators.

The connectivity of a :class:`Mesh` is fixed for the whole computation, only the vertex coordinates change. Every
element is a simplex with ``d + 1`` vertices; the local face ``i`` of an element is the facet opposite to its local
vertex ``i``. In two dimensions the vertices of face ``i`` are the local vertices ``i + 1`` and ``i + 2`` (modulo 3),
which for a counterclockwise element traverses the face in counterclockwise direction.
"""

from __future__ import annotations

import dataclasses
import functools
import typing as t

import numpy as np
from scipy import sparse

__all__ = (
    'VERTEX_FIXED',
    'VERTEX_INTERIOR',
    'VERTEX_SLIDING',
    'Mesh',
    'generate_criss_cross',
    'generate_interval',
)

VERTEX_INTERIOR = 0
VERTEX_SLIDING = 1
VERTEX_FIXED = 2

Rectangle = tuple[tuple[float, float], tuple[float, float]]


def _face_local_vertices(dimension: int) -> np.ndarray:
    """Return the local vertex indices of each local face of a simplex."""
    if dimension == 1:
        return np.array([[1], [0]])
    return np.array([[1, 2], [2, 0], [0, 1]])


@dataclasses.dataclass(frozen=True, eq=False)
class Mesh:
    """Simplicial mesh of intervals or triangles with neighbor, face and boundary tables."""

    points: np.ndarray
    """Initial vertex coordinates, shape ``(n_vertices, d)``."""

    cells: np.ndarray
    """Element to vertex table, shape ``(n_elements, d + 1)``, positively oriented."""

    neighbors: np.ndarray
    """Element across each local face, ``-1`` on the boundary, shape ``(n_elements, d + 1)``."""

    neighbor_faces: np.ndarray
    """Local face index of the shared face in the neighbor, ``-1`` on the boundary."""

    face_shifts: np.ndarray
    """Translation bringing the neighbor next to the element, nonzero only across periodic faces."""

    face_tags: np.ndarray
    """Index into :attr:`boundary_names` for faces on the domain boundary, ``-1`` for interior faces."""

    boundary_names: tuple[str, ...]
    """Names of the boundary segments."""

    faces: np.ndarray
    """Face to vertex table, shape ``(n_faces, d)``."""

    face_elements: np.ndarray
    """The two elements incident to each face, second entry ``-1`` on the boundary."""

    vertex_kinds: np.ndarray
    """Classification of each vertex: interior, sliding along a boundary segment or fixed."""

    vertex_tangents: np.ndarray
    """Unit tangent of the boundary segment of sliding vertices, zero otherwise."""

    vertex_mates: np.ndarray
    """Canonical vertex of each periodic equivalence class, the vertex itself if not periodic."""

    @classmethod
    def from_cells(
        cls,
        points: np.ndarray,
        cells: np.ndarray,
        *,
        mates: np.ndarray | None = None,
        tagger: t.Callable[[np.ndarray], str] | None = None,
    ) -> Mesh:
        """Construct a mesh from coordinates and connectivity, deriving all topological tables.

        :param points: vertex coordinates of shape ``(n_vertices, d)``.
        :param cells: element to vertex table of shape ``(n_elements, d + 1)``.
        :param mates: optional canonical vertex for each vertex, used to glue periodic faces.
        :param tagger: callable returning the boundary segment name for a boundary face midpoint.
        :raises ValueError: if the mesh is degenerate or non-conforming.
        """
        points = np.array(points, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        cells = np.array(cells, dtype=np.int64)
        dimension = points.shape[1]

        if dimension not in (1, 2) or cells.shape[1] != dimension + 1:
            raise ValueError(f'unsupported mesh: points of dimension {dimension} with cells of shape {cells.shape}')

        cells = _orient(points, cells)
        mates = np.arange(len(points)) if mates is None else np.asarray(mates, dtype=np.int64)
        local = _face_local_vertices(dimension)
        n_elements = len(cells)

        neighbors = np.full((n_elements, dimension + 1), -1, dtype=np.int64)
        neighbor_faces = np.full((n_elements, dimension + 1), -1, dtype=np.int64)
        face_shifts = np.zeros((n_elements, dimension + 1, dimension))

        registry: dict[tuple[int, ...], list[tuple[int, int]]] = {}
        for element in range(n_elements):
            for face in range(dimension + 1):
                key = tuple(sorted(mates[cells[element, local[face]]]))
                registry.setdefault(key, []).append((element, face))

        faces = []
        face_elements = []
        for key, incident in registry.items():
            if len(incident) > 2:
                raise ValueError(f'non-conforming mesh: face {key} shared by {len(incident)} elements')
            (element, face) = incident[0]
            faces.append(cells[element, local[face]])
            if len(incident) == 1:
                face_elements.append((element, -1))
                continue
            (other, other_face) = incident[1]
            face_elements.append((element, other))
            neighbors[element, face], neighbor_faces[element, face] = other, other_face
            neighbors[other, other_face], neighbor_faces[other, other_face] = element, face
            own = points[cells[element, local[face]]].mean(axis=0)
            opposite = points[cells[other, local[other_face]]].mean(axis=0)
            face_shifts[element, face] = own - opposite
            face_shifts[other, other_face] = opposite - own

        on_boundary = (neighbors < 0) | np.any(face_shifts != 0.0, axis=2)
        names: list[str] = []
        face_tags = np.full((n_elements, dimension + 1), -1, dtype=np.int64)
        for element, face in zip(*np.nonzero(on_boundary)):
            midpoint = points[cells[element, local[face]]].mean(axis=0)
            name = tagger(midpoint) if tagger is not None else 'boundary'
            if name not in names:
                names.append(name)
            face_tags[element, face] = names.index(name)

        kinds, tangents = _classify_vertices(points, cells, local, on_boundary)

        return cls(
            points=points,
            cells=cells,
            neighbors=neighbors,
            neighbor_faces=neighbor_faces,
            face_shifts=face_shifts,
            face_tags=face_tags,
            boundary_names=tuple(names),
            faces=np.array(faces, dtype=np.int64),
            face_elements=np.array(face_elements, dtype=np.int64),
            vertex_kinds=kinds,
            vertex_tangents=tangents,
            vertex_mates=mates,
        )

    @property
    def dimension(self) -> int:
        """Return the spatial dimension."""
        return int(self.points.shape[1])

    @property
    def n_elements(self) -> int:
        """Return the number of elements."""
        return len(self.cells)

    @property
    def n_vertices(self) -> int:
        """Return the number of vertices."""
        return len(self.points)

    @property
    def face_local_vertices(self) -> np.ndarray:
        """Return the local vertex indices of each local face."""
        return _face_local_vertices(self.dimension)

    @property
    def is_periodic(self) -> bool:
        """Return whether any faces are glued periodically."""
        return bool(np.any(self.vertex_mates != np.arange(self.n_vertices)))

    def boundary_mask(self, name: str) -> np.ndarray:
        """Return a boolean ``(n_elements, d + 1)`` mask of the faces on the named boundary segment.

        :raises KeyError: if the mesh has no boundary segment with that name.
        """
        try:
            index = self.boundary_names.index(name)
        except ValueError as exception:
            raise KeyError(f'mesh has no boundary segment `{name}`, available: {self.boundary_names}') from exception
        return self.face_tags == index

    @functools.cached_property
    def vertex_adjacency(self) -> sparse.csr_matrix:
        """Return the symmetric vertex adjacency matrix (vertices sharing an element)."""
        rows = []
        cols = []
        for a in range(self.dimension + 1):
            for b in range(self.dimension + 1):
                if a != b:
                    rows.append(self.cells[:, a])
                    cols.append(self.cells[:, b])
        row = np.concatenate(rows)
        col = np.concatenate(cols)
        matrix = sparse.csr_matrix((np.ones(len(row)), (row, col)), shape=(self.n_vertices, self.n_vertices))
        matrix.data[:] = 1.0
        return matrix

    @functools.cached_property
    def vertex_elements(self) -> tuple[np.ndarray, np.ndarray]:
        """Return the element patch of every vertex in compressed ``(indptr, indices)`` form."""
        vertices = self.cells.ravel()
        elements = np.repeat(np.arange(self.n_elements), self.dimension + 1)
        order = np.argsort(vertices, kind='stable')
        counts = np.bincount(vertices, minlength=self.n_vertices)
        indptr = np.concatenate(([0], np.cumsum(counts)))
        return indptr, elements[order]

    def patch(self, vertex: int) -> np.ndarray:
        """Return the elements containing the given vertex."""
        indptr, indices = self.vertex_elements
        return indices[indptr[vertex] : indptr[vertex + 1]]

    def domain_volume(self, coordinates: np.ndarray | None = None) -> float:
        """Return the measure of the domain covered by the mesh."""
        coordinates = self.points if coordinates is None else coordinates
        vertices = coordinates[self.cells]
        edges = vertices[:, 1:, :] - vertices[:, :1, :]
        return float(np.sum(np.abs(np.linalg.det(np.swapaxes(edges, 1, 2)))) / (1 if self.dimension == 1 else 2))

    def constrain_to_boundary(self, coordinates: np.ndarray) -> np.ndarray:
        """Return a copy of the coordinates with boundary vertices put back on their boundary segment.

        Fixed vertices are reset to their initial location; sliding vertices are projected onto the line through their
        initial location along the segment tangent. Periodic mates are reset to their canonical vertex shifted by the
        constant period vector.
        """
        result = np.array(coordinates, dtype=float)
        fixed = self.vertex_kinds == VERTEX_FIXED
        result[fixed] = self.points[fixed]

        sliding = self.vertex_kinds == VERTEX_SLIDING
        tangent = self.vertex_tangents[sliding]
        offset = result[sliding] - self.points[sliding]
        along = np.sum(offset * tangent, axis=1, keepdims=True)
        result[sliding] = self.points[sliding] + along * tangent

        mated = self.vertex_mates != np.arange(self.n_vertices)
        canonical = self.vertex_mates[mated]
        result[mated] = result[canonical] + (self.points[mated] - self.points[canonical])
        return result


def _orient(points: np.ndarray, cells: np.ndarray) -> np.ndarray:
    """Return the cells reordered to have positive signed volume."""
    cells = cells.copy()
    vertices = points[cells]
    edges = np.swapaxes(vertices[:, 1:, :] - vertices[:, :1, :], 1, 2)
    signed = np.linalg.det(edges)

    if np.any(signed == 0.0):
        raise ValueError(f'degenerate elements in mesh: {np.nonzero(signed == 0.0)[0].tolist()}')

    flip = signed < 0
    if cells.shape[1] == 2:
        cells[flip] = cells[flip][:, ::-1]
    else:
        cells[flip, 1], cells[flip, 2] = cells[flip, 2], cells[flip, 1].copy()
    return cells


def _classify_vertices(
    points: np.ndarray, cells: np.ndarray, local: np.ndarray, on_boundary: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Classify the vertices as interior, sliding or fixed from the boundary faces."""
    n_vertices, dimension = points.shape
    kinds = np.full(n_vertices, VERTEX_INTERIOR, dtype=np.int8)
    tangents = np.zeros((n_vertices, dimension))

    directions: dict[int, list[np.ndarray]] = {}
    for element, face in zip(*np.nonzero(on_boundary)):
        vertices = cells[element, local[face]]
        if dimension == 1:
            kinds[vertices] = VERTEX_FIXED
            continue
        segment = points[vertices[1]] - points[vertices[0]]
        segment = segment / np.linalg.norm(segment)
        for vertex in vertices:
            directions.setdefault(int(vertex), []).append(segment)

    for vertex, segments in directions.items():
        reference = segments[0]
        collinear = all(abs(reference[0] * other[1] - reference[1] * other[0]) < 1e-12 for other in segments)
        if collinear:
            kinds[vertex] = VERTEX_SLIDING
            tangents[vertex] = reference
        else:
            kinds[vertex] = VERTEX_FIXED

    return kinds, tangents


def generate_interval(n: int, a: float, b: float, *, periodic: bool = False) -> Mesh:
    """Return a uniform mesh of ``n`` elements on the interval ``[a, b]``.

    :param n: number of elements.
    :param a: left end of the interval.
    :param b: right end of the interval.
    :param periodic: glue the two end points.
    :raises ValueError: if ``n < 1`` or ``a >= b``.
    """
    if n < 1:
        raise ValueError(f'number of elements should be at least 1, got {n}')
    if not a < b:
        raise ValueError(f'invalid interval [{a}, {b}]')

    points = np.linspace(a, b, n + 1)[:, None]
    cells = np.column_stack((np.arange(n), np.arange(1, n + 1)))
    mates = np.arange(n + 1)
    if periodic:
        mates[n] = 0

    def tagger(midpoint: np.ndarray) -> str:
        return 'left' if abs(midpoint[0] - a) <= abs(midpoint[0] - b) else 'right'

    return Mesh.from_cells(points, cells, mates=mates, tagger=tagger)


def generate_criss_cross(
    nx: int,
    ny: int,
    domain: Rectangle = ((0.0, 1.0), (0.0, 1.0)),
    *,
    periodic: bool = False,
    holes: t.Sequence[Rectangle] = (),
) -> Mesh:
    """Return a criss-cross triangulation of a rectangle, each grid cell split into four triangles.

    The vertices are the ``(nx + 1) * (ny + 1)`` grid corners followed by the ``nx * ny`` cell centers. Grid cells whose
    center lies in one of the ``holes`` are removed, which allows meshing unions of rectangles such as the forward
    facing step.

    :param nx: number of grid cells in the first direction.
    :param ny: number of grid cells in the second direction.
    :param domain: the rectangle ``((x0, x1), (y0, y1))``.
    :param periodic: glue opposite sides of the rectangle.
    :param holes: rectangles to remove from the domain.
    :raises ValueError: if ``nx`` or ``ny`` is smaller than one or the rectangle is degenerate.
    """
    if nx < 1 or ny < 1:
        raise ValueError(f'number of cells should be at least 1 in each direction, got {nx}x{ny}')
    (x0, x1), (y0, y1) = domain
    if not (x0 < x1 and y0 < y1):
        raise ValueError(f'degenerate rectangle {domain}')
    if periodic and holes:
        raise ValueError('periodic meshes with holes are not supported')

    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    grid_x, grid_y = np.meshgrid(xs, ys)
    centers_x, centers_y = np.meshgrid(0.5 * (xs[:-1] + xs[1:]), 0.5 * (ys[:-1] + ys[1:]))
    points = np.vstack(
        (
            np.column_stack((grid_x.ravel(), grid_y.ravel())),
            np.column_stack((centers_x.ravel(), centers_y.ravel())),
        )
    )

    def corner(i: int, j: int) -> int:
        return j * (nx + 1) + i

    cells = []
    for j in range(ny):
        for i in range(nx):
            center = np.array([centers_x[j, i], centers_y[j, i]])
            if any(_inside(center, hole) for hole in holes):
                continue
            c = (nx + 1) * (ny + 1) + j * nx + i
            p00, p10, p11, p01 = corner(i, j), corner(i + 1, j), corner(i + 1, j + 1), corner(i, j + 1)
            cells.extend(([p00, p10, c], [p10, p11, c], [p11, p01, c], [p01, p00, c]))

    mates = np.arange(len(points))
    if periodic:
        for j in range(ny + 1):
            for i in range(nx + 1):
                mates[corner(i, j)] = corner(i % nx, j % ny)

    cells_array = np.array(cells, dtype=np.int64)
    used = np.unique(cells_array)
    renumber = np.full(len(points), -1, dtype=np.int64)
    renumber[used] = np.arange(len(used))
    tolerance = 1e-10 * max(x1 - x0, y1 - y0)

    def tagger(midpoint: np.ndarray) -> str:
        if abs(midpoint[0] - x0) < tolerance:
            return 'left'
        if abs(midpoint[0] - x1) < tolerance:
            return 'right'
        if abs(midpoint[1] - y0) < tolerance:
            return 'bottom'
        if abs(midpoint[1] - y1) < tolerance:
            return 'top'
        return 'step'

    return Mesh.from_cells(points[used], renumber[cells_array], mates=renumber[mates[used]], tagger=tagger)


def _inside(point: np.ndarray, rectangle: Rectangle) -> bool:
    (x0, x1), (y0, y1) = rectangle
    return bool(x0 < point[0] < x1 and y0 < point[1] < y1)
