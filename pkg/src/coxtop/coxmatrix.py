"""Coxeter matrices, sphericity and the poset of spherical subsets.

A Coxeter matrix over a generator list S assigns to each unordered pair
{s, t} a label m(s, t) that is an integer >= 2 or infinity (stored as
None); diagonal entries are implicitly 1.  A subset T of S is *spherical*
when the group it generates is finite.

Two independent finiteness oracles are provided:

* ``is_spherical`` splits T into irreducible components and matches each
  component's labelled diagram against the classification of finite
  diagrams (A, B, D, E6/E7/E8, F4, H3, H4 and the dihedral I2(m)).  It is
  exact for every label, including m >= 7.
* ``cosine_gram_definite`` checks positive definiteness of the matrix with
  unit diagonal and off-diagonal entries -cos(pi/m) by exact leading
  principal minors in Q(sqrt2, sqrt3, sqrt5).  It is restricted to labels
  in {2, 3, 4, 5, 6, infinity}.

The two must agree wherever both apply; the test suite sweeps this.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .qfield import SUPPORTED_LABELS, four_cos_int

INF = None  # label for m = infinity


class CoxeterError(ValueError):
    """Raised for malformed Coxeter matrix input."""


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric matrix of labels m(s, t) over an ordered generator list."""

    labels: tuple
    entries: dict = field(compare=False)  # frozenset({s,t}) -> int | None

    def __post_init__(self):
        if not self.labels:
            raise CoxeterError("empty generator list")
        if len(set(self.labels)) != len(self.labels):
            raise CoxeterError("duplicate generator label")
        for pair, m in self.entries.items():
            if not pair <= set(self.labels):
                raise CoxeterError(f"unknown label in pair {sorted(pair)}")
            if len(pair) != 2:
                raise CoxeterError("entries must be keyed by unordered pairs")
            if m is not INF and (not isinstance(m, int) or m < 2):
                raise CoxeterError(f"label m={m} must be an integer >= 2 or infinity")

    @property
    def rank(self):
        return len(self.labels)

    def m(self, s, t):
        if s == t:
            return 1
        return self.entries.get(frozenset((s, t)), 2)

    def index(self, s):
        return self.labels.index(s)

    def subset_key(self, T):
        """Canonical sort key for subsets of the generators."""
        idx = tuple(sorted(self.index(s) for s in T))
        return (len(idx), idx)

    def sorted_subset(self, T):
        return tuple(sorted(T, key=self.index))

    def components(self, T):
        """Irreducible components of T: s, t connected iff m(s,t) != 2."""
        T = list(self.sorted_subset(T))
        seen = set()
        comps = []
        for root in T:
            if root in seen:
                continue
            comp = []
            stack = [root]
            seen.add(root)
            while stack:
                u = stack.pop()
                comp.append(u)
                for v in T:
                    if v not in seen and self.m(u, v) != 2:
                        seen.add(v)
                        stack.append(v)
            comps.append(self.sorted_subset(comp))
        return comps

    def restrict(self, T):
        """The Coxeter matrix induced on a subset of the generators."""
        T = self.sorted_subset(T)
        sub = {}
        for s, t in combinations(T, 2):
            m = self.m(s, t)
            if m != 2:
                sub[frozenset((s, t))] = m
        return CoxeterMatrix(T, sub)

    def to_text(self):
        lines = ["gens " + " ".join(self.labels)]
        for s, t in combinations(self.labels, 2):
            m = self.m(s, t)
            if m != 2:
                lines.append(f"{s} {t} {'inf' if m is INF else m}")
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {
            "gens": list(self.labels),
            "pairs": [
                [s, t, "inf" if self.m(s, t) is INF else self.m(s, t)]
                for s, t in combinations(self.labels, 2)
                if self.m(s, t) != 2
            ],
        }


def parse_coxeter_matrix(text):
    """Parse the line-oriented matrix format.

    First non-comment line: ``gens <name>...``.  Then ``<name> <name> <m>``
    with m a decimal integer >= 2 or the token ``inf``.  ``#`` starts a
    comment.  Unlisted pairs default to 2 (absent diagram edge).
    """
    labels = None
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if labels is None:
            if parts[0] != "gens" or len(parts) < 2:
                raise CoxeterError(f"line {lineno}: expected 'gens <name>...'")
            labels = tuple(parts[1:])
            continue
        if len(parts) != 3:
            raise CoxeterError(f"line {lineno}: expected '<name> <name> <m>'")
        s, t, mtok = parts
        for name in (s, t):
            if name not in labels:
                raise CoxeterError(f"line {lineno}: unknown label {name!r}")
        if s == t:
            raise CoxeterError(f"line {lineno}: diagonal entries are fixed at 1")
        if mtok == "inf":
            m = INF
        else:
            try:
                m = int(mtok)
            except ValueError:
                raise CoxeterError(f"line {lineno}: bad label {mtok!r}") from None
            if m < 2:
                raise CoxeterError(f"line {lineno}: off-diagonal entry {m} < 2")
        key = frozenset((s, t))
        if key in entries and entries[key] != m:
            raise CoxeterError(f"line {lineno}: conflicting duplicate for {s},{t}")
        entries[key] = m
    if labels is None:
        raise CoxeterError("no 'gens' line found")
    return CoxeterMatrix(labels, entries)


def _finite_irreducible(mat, comp):
    """Classification of connected labelled diagrams of finite type."""
    n = len(comp)
    if n == 1:
        return True
    pairs = list(combinations(comp, 2))
    if any(mat.m(s, t) is INF for s, t in pairs):
        return False
    if n == 2:
        return True  # I2(m), m finite
    edges = [(s, t, mat.m(s, t)) for s, t in pairs if mat.m(s, t) >= 3]
    if len(edges) != n - 1:
        return False  # connected with a cycle, or disconnected (impossible here)
    deg = {s: 0 for s in comp}
    for s, t, _ in edges:
        deg[s] += 1
        deg[t] += 1
    big = [(s, t, m) for s, t, m in edges if m >= 4]
    branch = [s for s in comp if deg[s] >= 3]
    if len(big) >= 2 or any(deg[s] >= 4 for s in comp) or len(branch) >= 2:
        return False
    if not big:
        if not branch:
            return True  # type A_n
        # Tree with a single degree-3 vertex: arm lengths decide D/E.
        arms = sorted(_arm_lengths(edges, branch[0]))
        if arms[0] == 1 and arms[1] == 1:
            return True  # type D_n
        return arms in ([1, 2, 2], [1, 2, 3], [1, 2, 4])  # E6, E7, E8
    if branch:
        return False
    # A path with exactly one label >= 4.
    (s, t, m) = big[0]
    at_end = deg[s] == 1 or deg[t] == 1
    if m == 4:
        return at_end or n == 4  # B_n, or F4 (the middle edge of a 4-chain)
    if m == 5:
        return at_end and n in (3, 4)  # H3, H4
    return False  # m >= 6 has no finite type of rank >= 3


def _arm_lengths(edges, center):
    adj = {}
    for s, t, _ in edges:
        adj.setdefault(s, []).append(t)
        adj.setdefault(t, []).append(s)
    lengths = []
    for start in adj[center]:
        ln = 1
        prev, cur = center, start
        while True:
            nxt = [v for v in adj[cur] if v != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            ln += 1
        lengths.append(ln)
    return lengths


def is_spherical(mat, T):
    """True iff the subgroup generated by T is finite."""
    T = set(T)
    if not T <= set(mat.labels):
        raise CoxeterError(f"subset {sorted(T)} not contained in the generators")
    return all(_finite_irreducible(mat, comp) for comp in mat.components(T))


@dataclass(frozen=True)
class SphericalPoset:
    """All spherical subsets, ordered by inclusion."""

    matrix: CoxeterMatrix
    members: tuple  # frozensets, sorted by (size, label indices)

    def __contains__(self, T):
        return frozenset(T) in set(self.members)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    @property
    def max_cardinality(self):
        return max(len(T) for T in self.members)

    def supersets(self, T, strict=False):
        T = frozenset(T)
        return [U for U in self.members if T < U or (not strict and T == U)]

    def full_set_spherical(self):
        return frozenset(self.matrix.labels) in set(self.members)

    def to_json(self):
        return [sorted(T, key=self.matrix.index) for T in self.members]


def spherical_poset(mat):
    """Enumerate spherical subsets breadth-first from the empty set.

    Correct because sphericity is inherited by subsets, so every spherical
    set is reachable by single-generator extensions of a smaller one.
    """
    found = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for T in frontier:
            for s in mat.labels:
                if s in T:
                    continue
                U = T | {s}
                if U not in found and is_spherical(mat, U):
                    found.add(U)
                    nxt.append(U)
        frontier = nxt
    members = tuple(sorted(found, key=mat.subset_key))
    return SphericalPoset(mat, members)


def cosine_gram_definite(mat, T):
    """Positive definiteness of the cosine Gram matrix on T, exactly.

    The matrix has unit diagonal and off-diagonal -cos(pi/m(s,t)), with
    the value -1 at infinite labels.  Scaling by 4 keeps every entry an
    integer vector over the field basis, so the leading-minor signs are
    computed in pure integer arithmetic.
    """
    T = mat.sorted_subset(T)
    for s, t in combinations(T, 2):
        if mat.m(s, t) not in SUPPORTED_LABELS:
            raise CoxeterError(
                f"label m({s},{t})={mat.m(s, t)} outside the exact-arithmetic set"
            )
    n = len(T)
    if n == 0:
        return True
    four = four_cos_int(2) + 4  # the integer 4 as a field element
    rows = []
    for s in T:
        rows.append([four if s == t else -four_cos_int(mat.m(s, t)) for t in T])
    for k in range(1, n + 1):
        if _det_leibniz(rows, k).sign() <= 0:
            return False
    return True


def _det_leibniz(rows, k):
    """Determinant of the leading k x k block by expansion along row 0."""
    if k == 1:
        return rows[0][0]
    return _det_expand([row[:k] for row in rows[:k]])


def _det_expand(mat):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    total = None
    for j in range(n):
        a = mat[0][j]
        if a.is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = a * _det_expand(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        from .qfield import ZERO

        return ZERO
    return total
