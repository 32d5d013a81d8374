from itertools import combinations

import pytest

from neighborly.analyze import (ANALYSES, diameter, dual_deletion_check, edge_valence_matrices, entry_report,
                                facet_ridge_graph, graph_from_edges, has_hamiltonian_circuit, minimal_nonfaces,
                                nonfaces, quotient_keys, sstar_max_k, universal_edges)
from neighborly.chirotope import alternating, simplex
from neighborly.errors import UsageError
from neighborly.faces import facets, faces_from_covectors, faces_from_facets
from neighborly.subsets import mask_of


def gale_evenness(r, n):
    """Facets of the cyclic polytope: (r-1)-sets whose interior gaps are even."""
    out = []
    for F in combinations(range(n), r - 1):
        s = set(F)
        ok = True
        for a, b in combinations([e for e in range(n) if e not in s], 2):
            between = sum(1 for x in F if a < x < b)
            if between % 2:
                ok = False
                break
        if ok:
            out.append(F)
    return out


@pytest.mark.parametrize("r,n", [(3, 6), (4, 7), (5, 8), (5, 10), (6, 9), (7, 10)])
def test_cyclic_facets_follow_gale_evenness(r, n):
    assert facets(alternating(r, n)) == gale_evenness(r, n)


@pytest.mark.parametrize("r,n", [(3, 5), (4, 6), (5, 7)])
def test_faces_from_facets_match_covector_oracle(r, n):
    chi = alternating(r, n)
    assert faces_from_facets(chi) == faces_from_covectors(chi)


@pytest.mark.parametrize("n", [7, 8, 9, 10])
def test_cyclic_universal_edges_are_consecutive_pairs(n):
    ue = set(universal_edges(alternating(5, n)))
    assert ue == {tuple(sorted((i, (i + 1) % n))) for i in range(n)}


def test_universal_edges_need_odd_rank():
    with pytest.raises(UsageError):
        universal_edges(alternating(4, 7))


def test_simplex_facet_graph_is_complete():
    g = facet_ridge_graph(simplex(5))
    assert g.order == 5 and all(len(a) == 4 for a in g.adj)
    assert diameter(g) == 1
    assert has_hamiltonian_circuit(g)


def test_hamiltonian_search_on_known_graphs():
    petersen = [(i, (i + 1) % 5) for i in range(5)] + [(5 + i, 5 + (i + 2) % 5) for i in range(5)] + \
               [(i, i + 5) for i in range(5)]
    assert not has_hamiltonian_circuit(graph_from_edges(10, petersen))
    assert has_hamiltonian_circuit(graph_from_edges(6, [(i, (i + 1) % 6) for i in range(6)]))
    k23 = [(a, b) for a in (0, 1) for b in (2, 3, 4)]
    assert not has_hamiltonian_circuit(graph_from_edges(5, k23))
    two_triangles = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]
    assert not has_hamiltonian_circuit(graph_from_edges(6, two_triangles))
    with pytest.raises(UsageError):
        has_hamiltonian_circuit(graph_from_edges(2, [(0, 1)]))


def test_diameter_of_paths_and_errors():
    assert diameter(graph_from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])) == 4
    with pytest.raises(ValueError):
        diameter(graph_from_edges(3, [(0, 1)]))
    with pytest.raises(ValueError):
        diameter(graph_from_edges(0, []))


def test_missing_faces_of_a_quadrilateral_and_a_simplex():
    square = alternating(3, 4)
    assert minimal_nonfaces(square) == sorted([mask_of((0, 2)), mask_of((1, 3))])
    assert minimal_nonfaces(simplex(4)) == [mask_of(range(4))]
    nf = nonfaces(square)
    assert mask_of((0, 2)) in nf and mask_of((0, 1, 2)) in nf and mask_of((0, 1)) not in nf


def test_edge_valence_conventions_on_a_quadrilateral():
    A, M = edge_valence_matrices(alternating(3, 4))
    assert [A[i][i] for i in range(4)] == [2, 2, 2, 2]
    assert A[0][1] == 1 and A[0][2] == 0
    assert M[0][2] == 1 and M[0][0] == 1 and M[0][1] == 0
    A0, M0 = edge_valence_matrices(alternating(3, 4), diagonal="zero")
    assert all(A0[i][i] == 0 and M0[i][i] == 0 for i in range(4))
    with pytest.raises(UsageError):
        edge_valence_matrices(simplex(3), diagonal="x")
    with pytest.raises(UsageError):
        edge_valence_matrices(simplex(3), missing="x")


def test_facet_avoidance_number():
    assert sstar_max_k(simplex(5)) == 1
    # cyclic 4-polytope with 8 vertices: every pair misses some facet
    assert sstar_max_k(alternating(5, 8)) >= 2


def test_quotients_and_dual_deletion():
    chi = alternating(7, 10)
    keys = quotient_keys(chi, 1)
    assert 1 <= len(keys) <= 10
    with pytest.raises(UsageError):
        quotient_keys(chi, 5)
    assert dual_deletion_check(simplex(5)) == []
    assert set(dual_deletion_check(alternating(5, 10))) <= set(range(10))


def test_entry_report_fields():
    rec = entry_report(alternating(5, 8), b"\x05\x08")
    assert rec["key"] == "0508"
    assert {"facets", "universal_edge_count", "diameter", "hamiltonian", "detA", "detM", "sstar_k"} <= set(rec)
    assert rec["universal_edge_count"] == 8 and rec["hamiltonian"] is True
    assert rec["facets"][0] == [e + 1 for e in facets(alternating(5, 8))[0]]
    even = entry_report(alternating(6, 9), analyses=["universal_edges"])
    assert even == {"universal_edge_count": None}
    assert set(ANALYSES) >= {"facets", "det"}
