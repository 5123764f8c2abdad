"""Headline reports: compactly supported cohomology of the standard
realization, virtual cohomological dimension, duality status, filtration
gradeds, and descent-class growth series.

For a finite (spherical) type the report is assembled exactly from a
concrete chamber system.  For an infinite type the local groups
H(K, K^{S-T}) are exact while multiplicities are symbolic: the empty
type always contributes multiplicity one in the thin case (only the
identity has empty descent set), every other spherical type is reported
as countably infinite (``omega``), optionally refined by the exact
length-graded counts #{w : In(w) = T, l(w) = i} up to a truncation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chambers import thin_building
from .complexes import davis_chamber, punctured_nerve_homology, relative_cohomology
from .coxmatrix import is_spherical, spherical_poset
from .decomposition import BuildingDecomposition
from .groups import enumerate_ball
from .intlinalg import OMEGA, GradedGroup


@dataclass(frozen=True)
class GrowthSeries:
    """Truncated counts of elements with a fixed descent set, by length."""

    type: tuple
    coefficients: tuple

    def to_json(self):
        return {"T": list(self.type), "coefficients": list(self.coefficients)}


def thin_multiplicity_series(matrix, T, radius):
    """a_i = #{w : l(w) = i, In(w) = T} for i <= radius."""
    T = frozenset(T)
    if not is_spherical(matrix, T):
        raise ValueError(f"{sorted(T)} is not a spherical subset")
    ball = enumerate_ball(matrix, radius)
    counts = [0] * (radius + 1)
    for e in ball.elements:
        if e.descents == T:
            counts[e.length] += 1
    return GrowthSeries(tuple(sorted(T, key=matrix.index)), tuple(counts))


@dataclass
class HcContribution:
    type: tuple
    local: GradedGroup  # H(K, K^{S-T})
    multiplicity: object  # int or OMEGA
    series: GrowthSeries | None = None

    def graded(self):
        if self.multiplicity == 0:
            return GradedGroup({})
        return self.local.tensor_free(self.multiplicity)

    def to_json(self):
        out = {
            "T": list(self.type),
            "local": self.local.to_json(),
            "multiplicity": self.multiplicity,
        }
        if self.series is not None:
            out["series"] = self.series.to_json()
        return out


@dataclass
class HcReport:
    matrix_labels: tuple
    thickness: str
    w_finite: bool
    contributions: list
    totals: GradedGroup

    def to_json(self):
        degrees = sorted(
            set(self.totals.degrees())
            | {k for c in self.contributions for k in c.local.degrees()}
        )
        rows = []
        for k in degrees:
            rows.append(
                {
                    "degree": k,
                    "total": self.totals[k].to_json(),
                    "contributions": [
                        {
                            "T": list(c.type),
                            "local": c.local[k].to_json(),
                            "multiplicity": c.multiplicity,
                        }
                        for c in self.contributions
                        if not c.local[k].is_zero()
                    ],
                }
            )
        return {
            "gens": list(self.matrix_labels),
            "thickness": self.thickness,
            "w_finite": self.w_finite,
            "degrees": rows,
            "contributions": [c.to_json() for c in self.contributions],
        }


def _local_groups(matrix):
    K = davis_chamber(matrix)
    S = set(matrix.labels)
    out = []
    for T in spherical_poset(matrix):
        sub = K.mirror_union(S - set(T))
        out.append((T, relative_cohomology(K.complex, sub)))
    return out


def hc_standard_realization(matrix, thickness="thin", growth_radius=None):
    """Per-degree report for the compactly supported cohomology of the
    standard realization.

    ``thickness`` is ``"thin"``, a concrete ChamberSystem of matching
    type, or ``("regular", {s: q_s})`` for a symbolic thick building
    (infinite type only; multiplicities are then not quantified).
    """
    w_finite = is_spherical(matrix, matrix.labels)
    locals_ = _local_groups(matrix)

    concrete = None
    label = None
    if thickness == "thin":
        label = "thin"
        if w_finite:
            concrete = thin_building(matrix)
    elif isinstance(thickness, tuple) and thickness and thickness[0] == "regular":
        label = "regular"
        if w_finite:
            raise ValueError(
                "regular thick reports are symbolic and need an infinite type; "
                "pass a concrete chamber system instead"
            )
        sizes = thickness[1]
        for s in matrix.labels:
            if sizes.get(s, 2) < 2:
                raise ValueError("regular panel sizes must be at least 2")
    else:
        label = "concrete"
        concrete = thickness
        if concrete.matrix.labels != matrix.labels or any(
            concrete.matrix.m(s, t) != matrix.m(s, t)
            for s in matrix.labels
            for t in matrix.labels
        ):
            raise ValueError("chamber system type does not match the matrix")

    contributions = []
    if concrete is not None:
        dec = BuildingDecomposition(concrete)
        for T, local in locals_:
            mult = dec.splitting_rank(T)
            contributions.append(
                HcContribution(tuple(sorted(T, key=matrix.index)), local, mult)
            )
    else:
        for T, local in locals_:
            if label == "thin" and len(T) == 0:
                mult = 1  # only the identity has empty descent set
            else:
                mult = OMEGA
            series = None
            if growth_radius is not None and label == "thin":
                series = thin_multiplicity_series(matrix, T, growth_radius)
            contributions.append(
                HcContribution(tuple(sorted(T, key=matrix.index)), local, mult, series)
            )

    totals = GradedGroup({})
    for c in contributions:
        totals = totals.direct_sum(c.graded())
    return HcReport(matrix.labels, label, w_finite, contributions, totals)


@dataclass
class VcdReport:
    value: int
    w_finite: bool
    witnesses: list  # types T achieving the maximum

    def to_json(self):
        return {
            "vcd": self.value,
            "w_finite": self.w_finite,
            "witness_types": [list(T) for T in self.witnesses],
        }


def vcd(matrix):
    """max over spherical T of the top degree with H(K, K^{S-T}) nonzero.

    Torsion counts as nonvanishing.  For a finite group the convention
    value 0 is reported with a flag.
    """
    w_finite = is_spherical(matrix, matrix.labels)
    if w_finite:
        return VcdReport(0, True, [])
    best = 0
    witnesses = []
    for T, local in _local_groups(matrix):
        top = local.top_degree()
        if top is None:
            continue
        if top > best:
            best = top
            witnesses = [tuple(sorted(T, key=matrix.index))]
        elif top == best:
            witnesses.append(tuple(sorted(T, key=matrix.index)))
    return VcdReport(best, False, witnesses)


@dataclass
class DualityReport:
    is_duality: bool
    dimension: int | None
    offending: list  # [T, reason] entries
    details: list  # per T: degrees of the reduced groups of K^{S-T}

    def to_json(self):
        return {
            "is_duality": self.is_duality,
            "dimension": self.dimension,
            "offending": self.offending,
            "details": self.details,
        }


def duality_check(matrix):
    """Free-and-concentrated test for the punctured nerve cohomology.

    Passes when every reduced group of K^{S-T} over spherical T is free
    abelian and all the nonzero ones sit in one common degree n-1; the
    empty subcomplex (T the full set, finite types) counts as degree -1.
    Reports the offending types otherwise.
    """
    punctured = punctured_nerve_homology(matrix)
    details = []
    offending = []
    degrees_seen = set()
    for T in spherical_poset(matrix):
        r = punctured[T]
        T_sorted = sorted(T, key=matrix.index)
        if r.empty_complex:
            details.append({"T": T_sorted, "degrees": [-1], "empty_complex": True})
            degrees_seen.add(-1)
            continue
        degs = r.groups.degrees()
        details.append({"T": T_sorted, "degrees": degs, "empty_complex": False})
        if not r.groups.is_free():
            offending.append([T_sorted, "torsion in the punctured cohomology"])
        if len(degs) > 1:
            offending.append([T_sorted, f"spread over degrees {degs}"])
        degrees_seen.update(degs)
    if len(degrees_seen) > 1:
        spread = sorted(degrees_seen)
        for entry in details:
            if entry["degrees"] and entry["degrees"] != [max(spread)]:
                offending.append(
                    [entry["T"], f"degree {entry['degrees']} below the top {max(spread)}"]
                )
    is_duality = not offending and bool(degrees_seen)
    dimension = (max(degrees_seen) + 1) if is_duality else None
    return DualityReport(is_duality, dimension, offending, details)


@dataclass
class GradedModuleReport:
    rows: list  # per p: {"p": p, "graded": GradedGroup}
    totals: GradedGroup
    matches_hc: bool

    def to_json(self):
        return {
            "rows": [{"p": p, "graded": g.to_json()} for p, g in self.rows],
            "totals": self.totals.to_json(),
            "matches_hc": self.matches_hc,
        }


def graded_module_report(matrix, system):
    """Associated-graded ranks: per p, the sum over |T| = p of
    H(K, K^{S-T}) tensored with D^T; the rows must total the realization
    cohomology of the standard realization."""
    dec = BuildingDecomposition(system)
    locals_ = dict((frozenset(T), g) for T, g in _local_groups(matrix))
    max_p = dec.poset.max_cardinality
    rows = []
    totals = GradedGroup({})
    for p in range(max_p + 1):
        graded = GradedGroup({})
        for T in dec.poset:
            if len(T) != p:
                continue
            d = dec.d_quotient(T)
            if d.torsion:
                raise ValueError(f"D^{sorted(T)} has torsion {d.torsion}")
            graded = graded.direct_sum(locals_[T].tensor_free(d.free))
        rows.append((p, graded))
        totals = totals.direct_sum(graded)
    hc = hc_standard_realization(matrix, system)
    return GradedModuleReport(rows, totals, totals == hc.totals)
