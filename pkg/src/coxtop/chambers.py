"""Finite chamber systems and buildings.

A chamber system over the generators of a Coxeter matrix is a finite set
of chambers with one partition (the s-panels) per generator.  Residues of
type T are the connected components under the panels with types in T.

Constructors provided: the thin building (the group itself, panels =
cosets of the order-2 subgroups), rank-2 generalized digons (complete
bipartite incidence), the flag building of a projective plane of order 2
or 3, and products.  ``verify_building`` checks the panel-size axiom,
the generalized-polygon structure of rank-2 residues (girth 2m, diameter
m of the panel incidence graph), and consistency of the W-valued
distance obtained from minimal galleries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .coxmatrix import INF, CoxeterError, CoxeterMatrix, is_spherical, parse_coxeter_matrix
from .groups import enumerate_group


class ChamberError(ValueError):
    """Malformed chamber system input."""


@dataclass(frozen=True)
class Residue:
    type: frozenset
    chambers: tuple  # sorted chamber indices


@dataclass(frozen=True)
class ChamberSystem:
    matrix: CoxeterMatrix
    panels: dict = field(compare=False)  # label -> tuple of frozensets of indices
    size: int = 0
    chamber_names: tuple = ()  # optional, for reports

    def __post_init__(self):
        for s in self.matrix.labels:
            blocks = self.panels.get(s)
            if blocks is None:
                raise ChamberError(f"missing panel partition for generator {s!r}")
            seen = set()
            for b in blocks:
                if seen & b:
                    raise ChamberError(f"{s}-panels overlap")
                seen |= b
            if seen != set(range(self.size)):
                raise ChamberError(f"{s}-panels do not cover the chambers")

    def panel_of(self, s, i):
        for b in self.panels[s]:
            if i in b:
                return b
        raise KeyError(i)

    def neighbors(self, i, T):
        out = set()
        for s in T:
            out |= self.panel_of(s, i)
        out.discard(i)
        return out

    def element_table(self):
        """The full group table of the (finite) type; cached per instance."""
        cached = getattr(self, "_table", None)
        if cached is None:
            cached = enumerate_group(self.matrix, self.matrix.labels)
            object.__setattr__(self, "_table", cached)
        return cached

    def to_text(self):
        lines = [self.matrix.to_text().rstrip("\n")]
        lines.append(f"chambers {self.size}")
        for s in self.matrix.labels:
            blocks = sorted(self.panels[s], key=min)
            body = " ".join("{" + ",".join(map(str, sorted(b))) + "}" for b in blocks)
            lines.append(f"panel {s}: {body}")
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {
            "type": self.matrix.to_json(),
            "chambers": self.size,
            "panels": {
                s: [sorted(b) for b in sorted(self.panels[s], key=min)]
                for s in self.matrix.labels
            },
        }


def parse_chamber_system(text):
    """Parse the chamber-system format: the type matrix lines, then
    ``chambers <n>`` and one ``panel <s>: {i,j,...} ...`` line per generator."""
    head_lines = []
    body = []
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("chambers") or stripped.startswith("panel"):
            body.append(stripped)
        else:
            head_lines.append(stripped)
    matrix = parse_coxeter_matrix("\n".join(head_lines))
    size = None
    panels = {}
    for line in body:
        if line.startswith("chambers"):
            size = int(line.split()[1])
            continue
        rest = line[len("panel") :].strip()
        name, _, blocks_text = rest.partition(":")
        s = name.strip()
        if s not in matrix.labels:
            raise ChamberError(f"panel for unknown generator {s!r}")
        blocks = []
        for tok in blocks_text.split():
            if not (tok.startswith("{") and tok.endswith("}")):
                raise ChamberError(f"bad panel block {tok!r}")
            blocks.append(frozenset(int(x) for x in tok[1:-1].split(",") if x))
        panels[s] = tuple(blocks)
    if size is None:
        raise ChamberError("missing 'chambers <n>' line")
    return ChamberSystem(matrix, panels, size)


def residues(system, T):
    """Partition into T-connected components, sorted by smallest chamber."""
    T = [s for s in system.matrix.labels if s in set(T)]
    parent = list(range(system.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in T:
        for block in system.panels[s]:
            it = iter(sorted(block))
            first = find(next(it))
            for other in it:
                parent[find(other)] = first
    groups = {}
    for i in range(system.size):
        groups.setdefault(find(i), []).append(i)
    comps = sorted(groups.values(), key=lambda g: g[0])
    return [Residue(frozenset(T), tuple(sorted(g))) for g in comps]


def residue_partition_map(system, T):
    """chamber index -> residue index, residues ordered by smallest member."""
    out = [None] * system.size
    for r_index, r in enumerate(residues(system, T)):
        for c in r.chambers:
            out[c] = r_index
    return out


# ------------------------------------------------------------ constructors


def thin_building(mat, T=None):
    """The group W_T as a building: panels are the cosets {w, ws}."""
    if T is None:
        T = mat.labels
    T = mat.sorted_subset(T)
    table = enumerate_group(mat, T)
    sub = mat.restrict(T)
    panels = {}
    for k, s in enumerate(T):
        blocks = set()
        for i in range(len(table)):
            j = table.mult[i][k]
            blocks.add(frozenset((i, j)))
        panels[s] = tuple(sorted(blocks, key=min))
    names = tuple("".join(e.word) if e.word else "e" for e in table.elements)
    system = ChamberSystem(sub, panels, len(table), names)
    object.__setattr__(system, "_table", table)
    return system


def digon_building(p, q, labels=("s", "t")):
    """Rank-2 building of type m=2: chambers are cells of a p x q grid.

    The s-panels fix the second coordinate (size p) and the t-panels fix
    the first (size q); the panel incidence graph is complete bipartite.
    """
    if p < 2 or q < 2:
        raise ChamberError("digon parameters must be >= 2")
    s, t = labels
    mat = CoxeterMatrix((s, t), {})
    idx = {(i, j): i * q + j for i in range(p) for j in range(q)}
    panels = {
        s: tuple(frozenset(idx[(i, j)] for i in range(p)) for j in range(q)),
        t: tuple(frozenset(idx[(i, j)] for j in range(q)) for i in range(p)),
    }
    names = tuple(f"{i},{j}" for i in range(p) for j in range(q))
    return ChamberSystem(mat, panels, p * q, names)


def _projective_plane(q):
    """Points and lines of PG(2, q) over the prime field, q in {2, 3}."""
    if q not in (2, 3):
        raise ChamberError("projective planes are built for q in {2, 3} only")

    def normalize(v):
        for x in v:
            if x % q != 0:
                inv = pow(x, q - 2, q)
                return tuple((inv * y) % q for y in v)
        return None

    points = sorted(
        {normalize(v) for v in product(range(q), repeat=3)} - {None}
    )
    lines = points[:]  # lines are kernels of covectors; same normal forms
    incidence = {
        (pt, ln): sum(a * b for a, b in zip(pt, ln)) % q == 0
        for pt in points
        for ln in lines
    }
    return points, lines, incidence


def projective_plane_building(q, labels=("s", "t")):
    """Chambers are incident point-line flags; type is the 3-gon (m=3)."""
    s, t = labels
    points, lines, incidence = _projective_plane(q)
    flags = [(pt, ln) for pt in points for ln in lines if incidence[(pt, ln)]]
    idx = {f: i for i, f in enumerate(flags)}
    mat = CoxeterMatrix((s, t), {frozenset((s, t)): 3})
    s_panels = []
    for pt in points:
        s_panels.append(frozenset(idx[(pt, ln)] for ln in lines if incidence[(pt, ln)]))
    t_panels = []
    for ln in lines:
        t_panels.append(frozenset(idx[(pt, ln)] for pt in points if incidence[(pt, ln)]))
    names = tuple(f"p{points.index(pt)}|l{lines.index(ln)}" for pt, ln in flags)
    return ChamberSystem(
        mat, {s: tuple(s_panels), t: tuple(t_panels)}, len(flags), names
    )


def fano_building(labels=("s", "t")):
    return projective_plane_building(2, labels)


def product_building(a, b):
    """Chambers = pairs; panels act on one factor; cross labels commute."""
    if set(a.matrix.labels) & set(b.matrix.labels):
        raise ChamberError("generator label collision in product")
    labels = a.matrix.labels + b.matrix.labels
    entries = dict(a.matrix.entries)
    entries.update(b.matrix.entries)
    mat = CoxeterMatrix(labels, entries)
    nb = b.size
    panels = {}
    for s in a.matrix.labels:
        blocks = []
        for block in a.panels[s]:
            for j in range(nb):
                blocks.append(frozenset(i * nb + j for i in block))
        panels[s] = tuple(blocks)
    for s in b.matrix.labels:
        blocks = []
        for i in range(a.size):
            for block in b.panels[s]:
                blocks.append(frozenset(i * nb + j for j in block))
        panels[s] = tuple(blocks)
    names = tuple(
        f"{a.chamber_names[i] if a.chamber_names else i}*"
        f"{b.chamber_names[j] if b.chamber_names else j}"
        for i in range(a.size)
        for j in range(nb)
    )
    return ChamberSystem(mat, panels, a.size * nb, names)


# ------------------------------------------------------------- W-distance


def gallery_distances(system, start, table=None):
    """For every chamber, the set of group elements realized by minimal
    galleries from ``start``; in a building each set is a singleton."""
    if table is None:
        table = system.element_table()
    labels = system.matrix.labels
    dist = {start: 0}
    elems = {start: {0}}
    frontier = [start]
    while frontier:
        nxt = []
        for i in frontier:
            for k, s in enumerate(labels):
                for j in system.panel_of(s, i):
                    if j == i:
                        continue
                    d = dist.get(j)
                    if d is None:
                        dist[j] = dist[i] + 1
                        elems[j] = set()
                        nxt.append(j)
                    if dist[j] == dist[i] + 1:
                        elems[j] |= {table.mult[w][k] for w in elems[i]}
        frontier = nxt
    return dist, elems


def w_distance(system, i, j, table=None):
    """The group element delta(i, j) read off minimal galleries.

    Raises ChamberError when different minimal galleries disagree or the
    gallery length is not the word length (the system is not a building).
    """
    if table is None:
        table = system.element_table()
    dist, elems = gallery_distances(system, i, table)
    if j not in dist:
        raise ChamberError("chambers lie in different connected components")
    found = elems[j]
    if len(found) != 1:
        raise ChamberError(f"minimal galleries from {i} to {j} realize {len(found)} elements")
    w = next(iter(found))
    if table.elements[w].length != dist[j]:
        raise ChamberError("minimal gallery type is not a reduced word")
    return table.elements[w]


# ------------------------------------------------------------ verification


def _bipartite_girth_diameter(edges, left, right):
    """Girth and diameter of the bipartite multigraph with the given edge
    multiset; edges are (left_vertex, right_vertex) pairs."""
    adjacency = {("L", x): [] for x in left}
    adjacency.update({("R", y): [] for y in right})
    for x, y in edges:
        adjacency[("L", x)].append(("R", y))
        adjacency[("R", y)].append(("L", x))
    # multi-edges give girth 2
    girth = None
    from collections import Counter

    counts = Counter(edges)
    if any(c > 1 for c in counts.values()):
        girth = 2
    simple = {u: sorted(set(vs)) for u, vs in adjacency.items()}
    # girth by BFS from every vertex on the simple graph
    for src in sorted(simple):
        dist = {src: 0}
        parent = {src: None}
        frontier = [src]
        while frontier:
            nxt = []
            for u in frontier:
                for v in simple[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        parent[v] = u
                        nxt.append(v)
                    elif parent[u] != v and dist[v] >= dist[u]:
                        cycle = dist[u] + dist[v] + 1
                        if girth is None or cycle < girth:
                            girth = cycle
            frontier = nxt
    # diameter on the simple graph
    diameter = 0
    connected = True
    for src in sorted(simple):
        dist = {src: 0}
        frontier = [src]
        while frontier:
            nxt = []
            for u in frontier:
                for v in simple[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        if len(dist) != len(simple):
            connected = False
        else:
            diameter = max(diameter, max(dist.values()))
    return girth, (diameter if connected else None)


@dataclass
class BuildingReport:
    panel_sizes_ok: bool
    panel_failures: list
    residue_checks: list  # dicts per (pair, residue)
    residues_ok: bool
    distance_ok: bool
    distance_note: str
    passed: bool

    def to_json(self):
        return {
            "panel_sizes_ok": self.panel_sizes_ok,
            "panel_failures": self.panel_failures,
            "residue_checks": self.residue_checks,
            "residues_ok": self.residues_ok,
            "distance_ok": self.distance_ok,
            "distance_note": self.distance_note,
            "passed": self.passed,
        }


def verify_building(system, check_distance=True):
    """Necessary building axioms at desk scale.

    (a) every panel has at least two chambers; (b) every rank-2 residue
    with finite label m is a generalized m-gon (panel incidence graph has
    girth 2m and diameter m); (c) for finite type, minimal galleries
    define a single-valued distance with delta(x,y) = delta(y,x)^-1.
    """
    failures = []
    for s in system.matrix.labels:
        for b in system.panels[s]:
            if len(b) < 2:
                failures.append({"generator": s, "panel": sorted(b)})
    panel_ok = not failures

    residue_checks = []
    residues_ok = True
    for s, t in combinations(system.matrix.labels, 2):
        m = system.matrix.m(s, t)
        if m is INF:
            continue
        for r in residues(system, (s, t)):
            chamber_set = set(r.chambers)
            s_blocks = sorted(
                {system.panel_of(s, c) for c in r.chambers}, key=min
            )
            t_blocks = sorted(
                {system.panel_of(t, c) for c in r.chambers}, key=min
            )
            s_index = {b: i for i, b in enumerate(s_blocks)}
            t_index = {b: i for i, b in enumerate(t_blocks)}
            edges = [
                (s_index[system.panel_of(s, c)], t_index[system.panel_of(t, c)])
                for c in sorted(chamber_set)
            ]
            girth, diameter = _bipartite_girth_diameter(
                edges, range(len(s_blocks)), range(len(t_blocks))
            )
            ok = girth == 2 * m and diameter == m
            residues_ok &= ok
            residue_checks.append(
                {
                    "pair": [s, t],
                    "m": m,
                    "residue_min_chamber": r.chambers[0],
                    "girth": girth,
                    "expected_girth": 2 * m,
                    "diameter": diameter,
                    "expected_diameter": m,
                    "ok": ok,
                }
            )

    distance_ok = True
    note = "skipped"
    if check_distance:
        if is_spherical(system.matrix, system.matrix.labels):
            note = "checked"
            try:
                table = system.element_table()
                for i in range(system.size):
                    dist, elems = gallery_distances(system, i, table)
                    if len(dist) != system.size:
                        distance_ok = False
                        note = "disconnected"
                        break
                    for j, found in elems.items():
                        if len(found) != 1:
                            distance_ok = False
                            note = f"ambiguous distance between {i} and {j}"
                            break
                        w = next(iter(found))
                        if table.elements[w].length != dist[j]:
                            distance_ok = False
                            note = f"non-reduced gallery between {i} and {j}"
                            break
                    if not distance_ok:
                        break
                if distance_ok:
                    # symmetry: delta(i,j) = delta(j,i)^-1 on a sample frame
                    _, elems0 = gallery_distances(system, 0, table)
                    for j, found in elems0.items():
                        w = next(iter(found))
                        _, back = gallery_distances(system, j, table)
                        v = next(iter(back[0]))
                        if table.inverse(w) != v:
                            distance_ok = False
                            note = f"distance not inverse-symmetric at {j}"
                            break
            except CoxeterError as exc:
                distance_ok = False
                note = str(exc)
        else:
            note = "type is infinite; distance check skipped"
    passed = panel_ok and residues_ok and distance_ok
    return BuildingReport(
        panel_ok, failures, residue_checks, residues_ok, distance_ok, note, passed
    )
