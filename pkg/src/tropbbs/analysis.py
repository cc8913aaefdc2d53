"""State -> curve -> Jacobian pipeline in one call."""
from __future__ import annotations

from dataclasses import dataclass

from .curve import CornerLocus, MetricGraph, SpecialPoints, corner_locus, locate_special_points, split_multiplicity
from .jacobian import PeriodData, TranslationVectors, fundamental_cycle, period_matrix, translation_vectors
from .spectral import SpectralData, spectral_data


@dataclass
class Analysis:
    spectral: SpectralData
    locus: CornerLocus
    graph: MetricGraph
    special: SpecialPoints
    periods: PeriodData
    vectors: TranslationVectors
    Fpp: int
    Fp: int

    @property
    def genus(self) -> int:
        return self.graph.genus


def analyze(s, basis=None, routes=None) -> Analysis:
    """Full analysis of a state.

    ``basis`` and ``routes`` override the spanning-tree cycle basis and the
    default Abel-Jacobi paths; pass a callable ``graph -> (basis, routes)``
    as ``basis`` to build both from the metric graph (as
    :func:`tropbbs.fixtures.example2_basis` does).
    """
    sd = spectral_data(s)
    locus = corner_locus(sd.charpoly_trop)
    g = split_multiplicity(locus)
    sp = locate_special_points(s, sd, g)
    if callable(basis):
        basis, routes = basis(g)
    pd = period_matrix(g, basis)
    tv = translation_vectors(pd, sp, routes)
    Fpp, Fp = fundamental_cycle(pd, tv.T, sd.d)
    return Analysis(sd, locus, g, sp, pd, tv, Fpp, Fp)
