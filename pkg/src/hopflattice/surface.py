"""Closed oriented surfaces as combinatorial maps.

Darts are half-edges.  ``edge_pair`` (alpha) swaps the two darts of an edge,
``vertex_rot`` (sigma) sends a dart to the next dart counterclockwise around
its tail vertex.  The face permutation is ``phi = sigma^-1 o alpha``; its
orbits traverse each face counterclockwise, with the face on the left.

The face of a dart ``d`` is the corner between ``d`` and ``sigma(d)`` at the
tail of ``d``; a site ``(v, p)`` is anchored at a dart ``d`` with tail ``v``
and face ``p``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace

from .errors import InvalidSite, SitesNotDisjoint, SpecError, UnknownSurface


def _orbits(perm):
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        orbit = []
        d = start
        while not seen[d]:
            seen[d] = True
            orbit.append(d)
            d = perm[d]
        out.append(tuple(orbit))
    return out


def _inverse(perm):
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return tuple(inv)


def _is_permutation(perm):
    return sorted(perm) == list(range(len(perm)))


@dataclass(frozen=True)
class Site:
    vertex: int
    face: int
    anchor_dart: int


@dataclass(frozen=True, eq=False)
class CellDecomposition:
    edge_pair: tuple
    vertex_rot: tuple
    positive_dart: tuple
    name: str = ""
    face_perm: tuple = field(init=False)
    vertices: tuple = field(init=False)
    faces: tuple = field(init=False)
    edges: tuple = field(init=False)
    vertex_of: tuple = field(init=False)
    face_of: tuple = field(init=False)
    edge_of: tuple = field(init=False)

    def __post_init__(self):
        alpha, sigma = tuple(self.edge_pair), tuple(self.vertex_rot)
        n = len(alpha)
        if n == 0 or n % 2:
            raise SpecError(f"need a positive even number of darts, got {n}")
        if not _is_permutation(alpha) or any(alpha[d] == d or alpha[alpha[d]] != d for d in range(n)):
            raise SpecError("edge_pair must be a fixed-point-free involution")
        if len(sigma) != n or not _is_permutation(sigma):
            raise SpecError("vertex_rot must be a permutation of the darts")
        sigma_inv = _inverse(sigma)
        phi = tuple(sigma_inv[alpha[d]] for d in range(n))
        edges = tuple(sorted((min(d, alpha[d]), max(d, alpha[d])) for d in range(n) if d < alpha[d]))
        pos = tuple(self.positive_dart)
        if len(pos) != len(edges) or any(p not in e for p, e in zip(pos, edges)):
            raise SpecError("positive_dart must pick one dart of every edge")
        vertices = tuple(_orbits(sigma))
        faces = tuple(_orbits(phi))
        vertex_of, face_of, edge_of = [0] * n, [0] * n, [0] * n
        for i, orb in enumerate(vertices):
            for d in orb:
                vertex_of[d] = i
        for i, orb in enumerate(faces):
            for d in orb:
                face_of[d] = i
        for i, (a, b) in enumerate(edges):
            edge_of[a] = edge_of[b] = i
        for key, val in (("edge_pair", alpha), ("vertex_rot", sigma), ("positive_dart", pos),
                         ("face_perm", phi), ("vertices", vertices), ("faces", faces),
                         ("edges", edges), ("vertex_of", tuple(vertex_of)),
                         ("face_of", tuple(face_of)), ("edge_of", tuple(edge_of))):
            object.__setattr__(self, key, val)
        if not self._connected():
            raise SpecError("the map is not connected")
        if self.euler_characteristic % 2 or self.euler_characteristic > 2:
            raise SpecError(f"Euler characteristic {self.euler_characteristic} is not 2 - 2g")

    def _connected(self):
        seen = {0}
        stack = [0]
        while stack:
            d = stack.pop()
            for e in (self.edge_pair[d], self.vertex_rot[d]):
                if e not in seen:
                    seen.add(e)
                    stack.append(e)
        return len(seen) == self.n_darts

    @property
    def n_darts(self):
        return len(self.edge_pair)

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_faces(self):
        return len(self.faces)

    @property
    def counts(self):
        return self.n_vertices, self.n_edges, self.n_faces

    @property
    def euler_characteristic(self):
        return self.n_vertices - self.n_edges + self.n_faces

    @property
    def genus(self):
        return (2 - self.euler_characteristic) // 2

    def is_positive(self, d):
        return self.positive_dart[self.edge_of[d]] == d

    def vertex_darts(self, d):
        """Darts around the tail of d counterclockwise, starting after d and ending with d."""
        out = []
        x = self.vertex_rot[d]
        while True:
            out.append(x)
            if x == d:
                return out
            x = self.vertex_rot[x]

    def face_darts(self, d):
        """Darts of the face of d in counterclockwise traversal order, starting with d."""
        out = [d]
        x = self.face_perm[d]
        while x != d:
            out.append(x)
            x = self.face_perm[x]
        return out

    def incident(self, vertex, face):
        return any(self.face_of[d] == face for d in self.vertices[vertex])

    def vertex_edges(self, v):
        return {self.edge_of[d] for d in self.vertices[v]}

    def face_edges(self, p):
        return {self.edge_of[d] for d in self.faces[p]}

    def site(self, vertex, face, anchor_dart=None):
        """A validated site; the anchor defaults to the first incidence of ``face`` at ``vertex``."""
        if not (0 <= vertex < self.n_vertices and 0 <= face < self.n_faces):
            raise InvalidSite(f"no vertex {vertex} or face {face}")
        if anchor_dart is None:
            candidates = [d for d in self.vertices[vertex] if self.face_of[d] == face]
            if not candidates:
                raise InvalidSite(f"vertex {vertex} is not incident to face {face}")
            anchor_dart = candidates[0]
        s = Site(vertex, face, anchor_dart)
        self.check_site(s)
        return s

    def check_site(self, s):
        d = s.anchor_dart
        if not 0 <= d < self.n_darts:
            raise InvalidSite(f"anchor dart {d} out of range")
        if self.vertex_of[d] != s.vertex or self.face_of[d] != s.face:
            raise InvalidSite(f"anchor dart {d} does not lie at vertex {s.vertex} on face {s.face}")

    def sites_at_vertex(self, v):
        return [Site(v, self.face_of[d], d) for d in self.vertices[v]]

    def sites_at_face(self, p):
        return [Site(self.vertex_of[d], p, d) for d in self.faces[p]]

    def to_dict(self):
        return {"edge_pair": list(self.edge_pair), "vertex_rot": list(self.vertex_rot),
                "positive_dart": list(self.positive_dart), "name": self.name}


def from_dict(data, name=None):
    try:
        return CellDecomposition(tuple(int(x) for x in data["edge_pair"]),
                                 tuple(int(x) for x in data["vertex_rot"]),
                                 tuple(int(x) for x in data["positive_dart"]),
                                 name if name is not None else data.get("name", ""))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"bad cell decomposition data: {exc}") from exc


def from_json(path):
    with open(path) as fh:
        return from_dict(json.load(fh), name=str(path))


def from_face_words(words, name=""):
    """Build a map from faces given as signed edge sequences, counterclockwise.

    Edge ``e`` (1-based) with sign + is traversed along its positive dart
    ``2(e-1)``, with sign - along ``2(e-1)+1``.
    """
    n_edges = max(abs(x) for w in words for x in w)
    n = 2 * n_edges
    dart = lambda x: 2 * (abs(x) - 1) + (0 if x > 0 else 1)
    phi = [None] * n
    for w in words:
        ds = [dart(x) for x in w]
        for i, d in enumerate(ds):
            if phi[d] is not None:
                raise SpecError(f"dart {d} appears twice in the face words")
            phi[d] = ds[(i + 1) % len(ds)]
    if any(p is None for p in phi):
        raise SpecError("every dart must appear in exactly one face")
    alpha = tuple(d ^ 1 for d in range(n))
    phi_inv = _inverse(phi)
    sigma = tuple(alpha[phi_inv[d]] for d in range(n))
    return CellDecomposition(alpha, sigma, tuple(2 * e for e in range(n_edges)), name)


def from_vertex_faces(faces, name=""):
    """Faces as counterclockwise vertex cycles; edge {u, w} is oriented from min to max."""
    index = {}
    words = []
    for f in faces:
        w = []
        for u, x in zip(f, f[1:] + f[:1]):
            key = (min(u, x), max(u, x))
            if key not in index:
                index[key] = len(index) + 1
            w.append(index[key] if u < x else -index[key])
        words.append(w)
    return from_face_words(words, name)


def torus_grid(N, M):
    if N < 2 or M < 2:
        raise UnknownSurface("torus grids need N, M >= 2")
    h = lambda i, j: 1 + (i % N) + N * (j % M)
    v = lambda i, j: 1 + N * M + (i % N) + N * (j % M)
    words = [[h(i, j), v(i + 1, j), -h(i, j + 1), -v(i, j)] for j in range(M) for i in range(N)]
    return from_face_words(words, f"torus:grid-{N}x{M}")


_TETRA = [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)]
_CUBE = [(0, 1, 3, 2), (4, 6, 7, 5), (0, 4, 5, 1), (2, 3, 7, 6), (0, 2, 6, 4), (1, 5, 7, 3)]

STANDARD_SURFACES = ("sphere:tetrahedron", "sphere:cube", "sphere:bigon", "torus:square-1v",
                     "torus:grid-NxM", "genus2:octagon-1v")


def build_standard(name):
    if name == "sphere:tetrahedron":
        return from_vertex_faces(_TETRA, name)
    if name == "sphere:cube":
        return from_vertex_faces(_CUBE, name)
    if name == "sphere:bigon":
        return from_face_words([[1, -2], [2, -1]], name)
    if name == "torus:square-1v":
        return from_face_words([[1, 2, -1, -2]], name)
    if name == "genus2:octagon-1v":
        return from_face_words([[1, 2, -1, -2, 3, 4, -3, -4]], name)
    m = re.fullmatch(r"torus:grid-(\d+)x(\d+)", name)
    if m:
        return torus_grid(int(m.group(1)), int(m.group(2)))
    raise UnknownSurface(f"unknown surface {name!r}; known: {', '.join(STANDARD_SURFACES)}")


def parse_surface(spec):
    """A standard name, or ``json:<path>`` for a custom map."""
    if spec.startswith("json:"):
        return from_json(spec[5:])
    return build_standard(spec)


def dual_decomposition(C):
    """Dual map on the same darts: rotation phi, same pairing.

    Dart d of the dual crosses the edge of d from the face on its left to the
    face on its right.  The dual edge is oriented 90 degrees counterclockwise
    from the primal one, so its positive dart is alpha of the primal positive dart.
    """
    pos = tuple(C.edge_pair[d] for d in C.positive_dart)
    return CellDecomposition(C.edge_pair, C.face_perm, pos,
                             f"dual({C.name})" if C.name else "dual")


def dual_site(C, D, s):
    """The site of ``D = dual_decomposition(C)`` occupying the same corner as ``s``."""
    C.check_site(s)
    d = C.edge_pair[C.vertex_rot[s.anchor_dart]]
    return D.site(D.vertex_of[d], D.face_of[d], d)


def flip_edge(C, e):
    pos = list(C.positive_dart)
    pos[e] = C.edge_pair[pos[e]]
    return replace(C, positive_dart=tuple(pos))


def disjoint_sites(C, sites):
    for s in sites:
        C.check_site(s)
    for i, s in enumerate(sites):
        for t in sites[i + 1:]:
            if C.incident(s.vertex, t.face) or C.incident(t.vertex, s.face):
                return False
    return True


def require_disjoint(C, sites):
    if not disjoint_sites(C, sites):
        raise SitesNotDisjoint("sites must be pairwise disjoint")


def auto_sites(C, n):
    """Greedy choice of n pairwise disjoint sites, in dart order."""
    chosen = []
    for d in range(C.n_darts):
        s = Site(C.vertex_of[d], C.face_of[d], d)
        if disjoint_sites(C, chosen + [s]):
            chosen.append(s)
            if len(chosen) == n:
                return chosen
    raise SitesNotDisjoint(f"{C.name}: no {n} pairwise disjoint sites")


def parse_sites(C, spec):
    """``auto:<n>``, or ``;``-separated ``v,p`` or ``v,p,dart`` triples."""
    spec = (spec or "").strip()
    if not spec:
        return []
    if spec.startswith("auto:"):
        return auto_sites(C, int(spec[5:]))
    sites = []
    for part in spec.split(";"):
        try:
            nums = [int(x) for x in part.split(",")]
        except ValueError as exc:
            raise SpecError(f"bad site {part!r}") from exc
        if len(nums) not in (2, 3):
            raise SpecError(f"bad site {part!r}")
        sites.append(C.site(*nums))
    return sites
