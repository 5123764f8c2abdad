"""Exact integer linear algebra: Smith and Hermite forms, quotients,
complements, and cohomology of cochain complexes of free abelian groups.

Matrices are plain lists of lists of Python ints (rows of equal length).
Everything is arbitrary precision; pivoting is deterministic (smallest
nonzero absolute value, ties broken in row-major order) so witnesses are
reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class TorsionObstruction(ValueError):
    """A submodule that was required to be a direct summand is not one."""


# ----------------------------------------------------------------- matrices


def zeros(r, c):
    return [[0] * c for _ in range(r)]


def identity(n):
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def copy_matrix(a):
    return [row[:] for row in a]


def shape(a):
    return (len(a), len(a[0]) if a else 0)


def matmul(a, b):
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValueError(f"shape mismatch {ra}x{ca} times {rb}x{cb}")
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a):
    return [list(row) for row in zip(*a)] if a else []


def columns(a):
    return [list(col) for col in zip(*a)] if a else []


def from_columns(cols, nrows=None):
    if not cols:
        return [[] for _ in range(nrows or 0)]
    return [list(row) for row in zip(*cols)]


def is_zero_matrix(a):
    return all(x == 0 for row in a for x in row)


def hstack(a, b):
    if not a:
        return copy_matrix(b)
    if not b:
        return copy_matrix(a)
    return [ra + rb for ra, rb in zip(a, b)]


# ------------------------------------------------------------- determinant


def determinant(a):
    """Bareiss fraction-free determinant of a square integer matrix."""
    n, m = shape(a)
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    mat = copy_matrix(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if mat[k][k] == 0:
            for i in range(k + 1, n):
                if mat[i][k] != 0:
                    mat[k], mat[i] = mat[i], mat[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = mat[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                mat[i][j] = (mat[i][j] * pivot - mat[i][k] * mat[k][j]) // prev
            mat[i][k] = 0
        prev = pivot
    return sign * mat[n - 1][n - 1]


# ------------------------------------------------------------- Smith form


@dataclass
class SNFResult:
    """U * A * V = D with U, V unimodular and D diagonal, d1 | d2 | ...

    ``uinv`` and ``vinv`` are maintained alongside so callers can move
    between the two bases without solving anything.
    """

    U: list
    D: list
    V: list
    uinv: list
    vinv: list

    def diagonal(self):
        r, c = shape(self.D)
        return [self.D[i][i] for i in range(min(r, c))]

    def rank(self):
        return sum(1 for d in self.diagonal() if d != 0)

    def invariant_factors(self):
        return [d for d in self.diagonal() if d > 1]


def _min_abs_pivot(a, start):
    rows, cols = shape(a)
    best = None
    for i in range(start, rows):
        for j in range(start, cols):
            x = a[i][j]
            if x != 0 and (best is None or abs(x) < abs(best[2])):
                best = (i, j, x)
                if abs(x) == 1:
                    return best
    return best


def smith_normal_form(a):
    """Deterministic Smith normal form with unimodular transforms.

    >>> snf = smith_normal_form([[2, 0], [0, 3]])
    >>> snf.diagonal()
    [1, 6]
    """
    rows, cols = shape(a)
    D = copy_matrix(a)
    U = identity(rows)
    uinv = identity(rows)
    V = identity(cols)
    vinv = identity(cols)

    def row_add(i, j, k):  # row_i += k * row_j  (on D and U); uinv col j -= k*col i
        D[i] = [x + k * y for x, y in zip(D[i], D[j])]
        U[i] = [x + k * y for x, y in zip(U[i], U[j])]
        for r in range(rows):
            uinv[r][j] -= k * uinv[r][i]

    def col_add(j, i, k):  # col_j += k * col_i
        for r in range(rows):
            D[r][j] += k * D[r][i]
        for r in range(cols):
            V[r][j] += k * V[r][i]
        vinv[i] = [x - k * y for x, y in zip(vinv[i], vinv[j])]

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for r in range(rows):
            uinv[r][i], uinv[r][j] = uinv[r][j], uinv[r][i]

    def col_swap(i, j):
        for r in range(rows):
            D[r][i], D[r][j] = D[r][j], D[r][i]
        for r in range(cols):
            V[r][i], V[r][j] = V[r][j], V[r][i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def row_negate(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]
        for r in range(rows):
            uinv[r][i] = -uinv[r][i]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        found = _min_abs_pivot(D, t)
        if found is None:
            break
        pi, pj, _ = found
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        # clear column t then row t; repeat until both are clean
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, rows):
                if D[i][t] != 0:
                    q = D[i][t] // D[t][t]
                    row_add(i, t, -q)
                    if D[i][t] != 0:  # remainder smaller than pivot: swap up
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, cols):
                if D[t][j] != 0:
                    q = D[t][j] // D[t][t]
                    col_add(j, t, -q)
                    if D[t][j] != 0:
                        col_swap(t, j)
                        dirty = True
        # divisibility: D[t][t] must divide everything below-right
        pivot = D[t][t]
        fix = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if D[i][j] % pivot != 0:
                    fix = i
                    break
            if fix is not None:
                break
        if fix is not None:
            row_add(t, fix, 1)
            continue
        if pivot < 0:
            row_negate(t)
        t += 1
    return SNFResult(U, D, V, uinv, vinv)


# ------------------------------------------------------------ Hermite form


def column_hermite(a):
    """Canonical column Hermite form of the lattice spanned by the columns.

    Returns (H, pivot_rows): H has full column rank, each column's leading
    nonzero (at pivot_rows[j]) is positive, entries above a pivot are zero
    by echelon shape and entries to the left of a pivot in its pivot row
    are reduced into [0, pivot).
    """
    rows, cols = shape(a)
    work = columns(a)
    work = [c for c in work if any(c)]
    H = []
    pivots = []
    r = 0
    while work and r < rows:
        here = [c for c in work if c[r] != 0]
        rest = [c for c in work if c[r] == 0]
        if not here:
            r += 1
            continue
        # gcd-combine everything with support in row r into one column
        base = here[0]
        for c in here[1:]:
            base, c = _gcd_steps(base, c, r)
            if any(c):
                rest.append(c)
        if base[r] < 0:
            base = [-x for x in base]
        H.append(base)
        pivots.append(r)
        work = rest
        r += 1
    # reduce entries of earlier columns at later pivot rows
    for j in range(len(H)):
        for k in range(j + 1, len(H)):
            p = pivots[k]
            q = H[j][p] // H[k][p]
            if q:
                H[j] = [x - q * y for x, y in zip(H[j], H[k])]
    return from_columns(H, rows), pivots


def _gcd_steps(u, v, r):
    """Column operations making v[r] = 0, keeping the span."""
    while v[r] != 0:
        if abs(v[r]) < abs(u[r]) or u[r] == 0:
            u, v = v, u
        q = v[r] // u[r]
        v = [x - q * y for x, y in zip(v, u)]
    return u, v


def lattice_rank(a):
    return len(column_hermite(a)[1])


def hermite_coordinates(H, pivots, v):
    """Coordinates of v in the Hermite basis, or None if not in the lattice."""
    cols = columns(H)
    v = list(v)
    coords = [0] * len(cols)
    for j, p in enumerate(pivots):
        if v[p] % cols[j][p] != 0:
            return None
        q = v[p] // cols[j][p]
        coords[j] = q
        if q:
            v = [x - q * y for x, y in zip(v, cols[j])]
    if any(v):
        return None
    return coords


def hermite_reduce(H, pivots, v):
    """Canonical representative of v modulo the column lattice of H."""
    cols = columns(H)
    v = list(v)
    for j, p in enumerate(pivots):
        q = v[p] // cols[j][p]
        if q:
            v = [x - q * y for x, y in zip(v, cols[j])]
    return v


# -------------------------------------------------- quotients, complements


OMEGA = "omega"  # marker for countably infinite rank


@dataclass(frozen=True)
class AbGroup:
    """A finitely generated abelian group: free rank plus invariant factors.

    The free rank may be the marker ``"omega"`` for countably infinite,
    used only in symbolic reports about infinite buildings.
    """

    free: object = 0  # int or OMEGA
    torsion: tuple = ()

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError(f"torsion {self.torsion} violates divisibility")

    def is_zero(self):
        return self.free == 0 and not self.torsion

    def is_free(self):
        return not self.torsion

    def __str__(self):
        parts = []
        if self.free == OMEGA:
            parts.append("Z^omega")
        elif self.free == 1:
            parts.append("Z")
        elif self.free:
            parts.append(f"Z^{self.free}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"free_rank": self.free, "torsion": list(self.torsion)}

    def direct_sum(self, other):
        if self.free == OMEGA or other.free == OMEGA:
            free = OMEGA
        else:
            free = self.free + other.free
        return AbGroup(free, _merge_torsion(self.torsion, other.torsion))

    def tensor_free(self, rank):
        """Tensor with a free group of the given rank (int or omega)."""
        if rank == 0:
            return AbGroup()
        if rank == OMEGA:
            free = OMEGA if self.free != 0 else 0
            if self.torsion:
                raise ValueError("omega multiples of torsion are not representable")
            return AbGroup(free, ())
        free = OMEGA if self.free == OMEGA else self.free * rank
        return AbGroup(free, _merge_torsion(*([self.torsion] * rank)))


def _merge_torsion(*lists):
    merged = sorted(d for lst in lists for d in lst)
    # resort into a divisibility chain via elementary divisors
    primary = {}
    for d in merged:
        f = _factor(d)
        for p, e in f.items():
            primary.setdefault(p, []).append(e)
    chains = []
    for p, exps in primary.items():
        exps.sort(reverse=True)
        for i, e in enumerate(exps):
            while len(chains) <= i:
                chains.append(1)
            chains[i] *= p**e
    chains.sort()
    return tuple(chains)


def _factor(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def quotient_structure(n, basis_matrix):
    """Structure of Z^n modulo the column span of basis_matrix."""
    if not basis_matrix or not basis_matrix[0]:
        return AbGroup(n, ())
    if len(basis_matrix) != n:
        raise ValueError("ambient rank does not match matrix rows")
    snf = smith_normal_form(basis_matrix)
    diag = snf.diagonal()
    rank = sum(1 for d in diag if d != 0)
    torsion = tuple(d for d in diag if d > 1)
    return AbGroup(n - rank, torsion)


def direct_complement(n, basis_matrix):
    """A complement C with span(B) + span(C) = Z^n as a direct sum.

    Requires the quotient Z^n / span(B) to be torsion free.  The
    complement is deterministic: the Smith change of basis supplies the
    missing coordinate directions, and each one is reduced to its
    canonical representative modulo the column lattice of B.
    """
    if not basis_matrix or not basis_matrix[0]:
        return identity(n)
    snf = smith_normal_form(basis_matrix)
    diag = snf.diagonal()
    if any(d > 1 for d in diag):
        raise TorsionObstruction(
            f"quotient has invariant factors {[d for d in diag if d > 1]}"
        )
    rank = sum(1 for d in diag if d != 0)
    H, pivots = column_hermite(basis_matrix)
    comp_cols = []
    uinv_cols = columns(snf.uinv)
    for j in range(rank, n):
        comp_cols.append(hermite_reduce(H, pivots, uinv_cols[j]))
    return from_columns(comp_cols, n)


def submodule_quotient(n, big_gens, small_gens):
    """Structure of span(big) / span(small) inside Z^n.

    ``small`` must be contained in ``big``; generators are columns.
    """
    Hb, pivots = column_hermite(big_gens) if big_gens and big_gens[0] else ([], [])
    rank_big = len(pivots)
    if rank_big == 0:
        if small_gens and small_gens[0] and not is_zero_matrix(small_gens):
            raise ValueError("small module not contained in the zero module")
        return AbGroup(0, ())
    coords = []
    for col in columns(small_gens) if small_gens and small_gens[0] else []:
        c = hermite_coordinates(Hb, pivots, col)
        if c is None:
            raise ValueError("generator of the small module lies outside the big one")
        coords.append(c)
    return quotient_structure(rank_big, from_columns(coords, rank_big))


# --------------------------------------------------------- cochain complexes


@dataclass
class CochainComplex:
    """Free cochain complex: per-degree ranks and coboundary matrices.

    ``maps[k]`` has shape (dims[k+1], dims[k]) and sends degree k to
    degree k+1.  Degrees may be any integers (degree -1 appears for
    augmented complexes).
    """

    dims: dict
    maps: dict = field(default_factory=dict)

    def validate(self):
        for k, m in self.maps.items():
            r, c = shape(m)
            if c != self.dims.get(k, 0) or r != self.dims.get(k + 1, 0):
                raise ValueError(f"map at degree {k} has shape {r}x{c}")
        for k in self.maps:
            if k + 1 in self.maps:
                comp = matmul(self.maps[k + 1], self.maps[k])
                if not is_zero_matrix(comp):
                    raise ValueError(f"d^{k+1} d^{k} != 0")
        return self

    def euler_characteristic(self):
        return sum((-1) ** k * n for k, n in self.dims.items())

    def cohomology(self):
        """Kernel modulo image in every degree, as a GradedGroup."""
        out = {}
        degrees = sorted(self.dims)
        for k in degrees:
            n = self.dims[k]
            if n == 0:
                continue
            dk = self.maps.get(k)
            rank_out = 0
            if dk is not None and self.dims.get(k + 1, 0) > 0:
                rank_out = smith_normal_form(dk).rank()
            dprev = self.maps.get(k - 1)
            rank_in = 0
            torsion = ()
            if dprev is not None and self.dims.get(k - 1, 0) > 0:
                snf = smith_normal_form(dprev)
                rank_in = snf.rank()
                torsion = tuple(d for d in snf.diagonal() if d > 1)
            free = n - rank_out - rank_in
            if free or torsion:
                out[k] = AbGroup(free, torsion)
        return GradedGroup(out)


@dataclass(frozen=True)
class GradedGroup:
    """Finitely many abelian groups indexed by degree; zeros are omitted."""

    groups: dict  # degree -> AbGroup

    def __post_init__(self):
        object.__setattr__(
            self, "groups", {k: g for k, g in self.groups.items() if not g.is_zero()}
        )

    def __getitem__(self, k):
        return self.groups.get(k, AbGroup())

    def __eq__(self, other):
        if not isinstance(other, GradedGroup):
            return NotImplemented
        return self.groups == other.groups

    def __bool__(self):
        return bool(self.groups)

    def degrees(self):
        return sorted(self.groups)

    def top_degree(self):
        return max(self.groups) if self.groups else None

    def concentrated_in(self, degree):
        return all(k == degree for k in self.groups)

    def is_free(self):
        return all(g.is_free() for g in self.groups.values())

    def total_free_rank(self):
        ranks = [g.free for g in self.groups.values()]
        if OMEGA in ranks:
            return OMEGA
        return sum(ranks)

    def shifted(self, offset):
        return GradedGroup({k + offset: g for k, g in self.groups.items()})

    def direct_sum(self, other):
        out = dict(self.groups)
        for k, g in other.groups.items():
            out[k] = out.get(k, AbGroup()).direct_sum(g)
        return GradedGroup(out)

    def tensor_free(self, rank):
        return GradedGroup({k: g.tensor_free(rank) for k, g in self.groups.items()})

    def euler_characteristic(self):
        return sum((-1) ** k * g.free for k, g in self.groups.items())

    def __str__(self):
        if not self.groups:
            return "0"
        return "; ".join(f"H^{k} = {self.groups[k]}" for k in self.degrees())

    def to_json(self):
        return {str(k): self.groups[k].to_json() for k in self.degrees()}


ZERO_GRADED = GradedGroup({})
