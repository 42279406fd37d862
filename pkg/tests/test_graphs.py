import pytest
from hypothesis import given, settings, strategies as st

from mmphf_lab.caps import EnumerationCaps
from mmphf_lab.errors import EnumerationCapExceeded, InvalidVertexError
from mmphf_lab.graphs import (
    ConflictSpec,
    ExplicitSpec,
    ProductSpec,
    ShiftSpec,
    adjacent,
    bron_kerbosch_maximal_sets,
    build_graph,
    explicit_graph,
    flatten_product_vertex,
    independent_set_of,
    is_independent_set,
    iter_label_functions,
    k_fold_conflict,
    maximal_independent_sets,
    product,
    product_maximal_sets_bits,
    to_dimacs,
    vertex_count,
)

from oracles import count_conflict_edges, networkx_maximal_independent_sets


def k_spec(n):
    return ExplicitSpec(
        tuple(range(n)), tuple((i, j) for i in range(n) for j in range(i + 1, n))
    )


def c5_spec():
    return ExplicitSpec(tuple(range(5)), tuple((i, (i + 1) % 5) for i in range(5)))


class TestAdjacency:
    def test_shared_element_different_slots(self):
        spec = ConflictSpec(2, 5)
        assert adjacent(spec, (1, 3), (3, 5))

    def test_shared_element_same_slot(self):
        spec = ConflictSpec(2, 5)
        assert not adjacent(spec, (1, 3), (1, 5))

    def test_disjoint_tuples(self):
        spec = ConflictSpec(2, 4)
        assert not adjacent(spec, (1, 2), (3, 4))

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidVertexError):
            adjacent(ConflictSpec(2, 4), (1, 2, 3), (1, 2))

    def test_not_increasing_rejected(self):
        with pytest.raises(InvalidVertexError):
            adjacent(ConflictSpec(2, 4), (3, 2), (1, 2))

    def test_outside_universe_rejected(self):
        with pytest.raises(InvalidVertexError):
            adjacent(ConflictSpec(2, 4, offset=4), (1, 2), (5, 6))

    def test_shift_successor(self):
        spec = ShiftSpec(2, 5)
        assert adjacent(spec, (1, 2), (2, 3))
        assert adjacent(spec, (2, 3), (1, 2))
        assert not adjacent(spec, (1, 2), (3, 4))

    @given(st.integers(2, 3), st.integers(0, 200), st.integers(0, 200))
    @settings(max_examples=60, deadline=None)
    def test_symmetric_irreflexive(self, m, i, j):
        spec = ConflictSpec(m, m + 3)
        verts = list(build_graph(spec).vertices)
        v, w = verts[i % len(verts)], verts[j % len(verts)]
        assert adjacent(spec, v, w) == adjacent(spec, w, v)
        assert not adjacent(spec, v, v)


class TestBuildGraph:
    def test_conflict_2_4_counts(self):
        g = build_graph(ConflictSpec(2, 4))
        # oracle: pairwise recount over all 15 pairs
        assert count_conflict_edges(g.vertices) == 4
        assert (g.n, len(g.edges)) == (6, 4)

    def test_shift_2_4_counts(self):
        g = build_graph(ShiftSpec(2, 4))
        assert g.n == 6
        # one edge per increasing triple a < b < c
        triples = [(a, b, c) for a in range(1, 5) for b in range(a + 1, 5) for c in range(b + 1, 5)]
        assert len(g.edges) == len(triples) == 4
        for (a, b, c) in triples:
            i, j = g.index[(a, b)], g.index[(b, c)]
            assert g.has_edge(i, j)

    def test_conflict_m1_edgeless(self):
        g = build_graph(ConflictSpec(1, 5))
        assert (g.n, len(g.edges)) == (5, 0)

    def test_cap_exceeded(self):
        with pytest.raises(EnumerationCapExceeded) as exc:
            build_graph(ConflictSpec(4, 100))
        assert exc.value.cap_name == "max_vertices"

    def test_offset_universe(self):
        g = build_graph(ConflictSpec(2, 3, offset=10))
        assert g.vertices[0] == (11, 12)
        assert g.vertices[-1] == (12, 13)

    def test_shift_subgraph_of_conflict(self):
        for (n, u) in [(2, 6), (2, 8), (3, 6)]:
            shift = build_graph(ShiftSpec(n, u))
            conflict = ConflictSpec(n, u)
            for (i, j) in shift.edges:
                assert adjacent(conflict, shift.vertices[i], shift.vertices[j])


class TestProduct:
    def test_k3_k2_is_complete(self):
        g = build_graph(product(k_spec(3), k_spec(2)))
        assert g.n == 6
        assert len(g.edges) == 15

    def test_identity_factor(self):
        single = ExplicitSpec(("x",), ())
        g1 = build_graph(c5_spec())
        g2 = build_graph(product(c5_spec(), single))
        assert g2.n == g1.n
        mapped = {(v, "x"): v for v in g1.vertices}
        for (i, j) in g2.edges:
            a, b = g2.vertices[i], g2.vertices[j]
            assert g1.has_edge(g1.index[mapped[a]], g1.index[mapped[b]])
        assert len(g2.edges) == len(g1.edges)

    def test_two_fold_conflict_matches_flat_adjacency(self):
        spec = k_fold_conflict(2, 2, M=4)
        g = build_graph(spec)
        assert g.n == vertex_count(spec) == 36
        flat = ConflictSpec(4, 8)  # concatenated tuples live in [1, 8]
        for i in range(g.n):
            for j in range(i + 1, g.n):
                v = flatten_product_vertex(g.vertices[i])
                w = flatten_product_vertex(g.vertices[j])
                assert g.has_edge(i, j) == adjacent(flat, v, w)

    def test_product_vertex_count(self):
        spec = product(ConflictSpec(2, 4), ConflictSpec(2, 5))
        assert vertex_count(spec) == 6 * 10

    def test_maximal_sets_of_product_are_products(self):
        # exhaustive cross-check on two small factors
        f1, f2 = c5_spec(), k_spec(3)
        g1, g2 = build_graph(f1), build_graph(f2)
        mis1 = bron_kerbosch_maximal_sets(g1.adj_bits)
        mis2 = bron_kerbosch_maximal_sets(g2.adj_bits)
        composed = set(product_maximal_sets_bits(mis1, mis2, g2.n))
        direct = set(bron_kerbosch_maximal_sets(build_graph(product(f1, f2)).adj_bits))
        assert composed == direct

    def test_independent_sets_have_independent_projections(self):
        f1, f2 = c5_spec(), k_spec(2)
        pg = build_graph(product(f1, f2))
        g1, g2 = build_graph(f1), build_graph(f2)
        for mask in bron_kerbosch_maximal_sets(pg.adj_bits):
            members = [pg.vertices[i] for i in _bits(mask)]
            proj1 = {v[0] for v in members}
            proj2 = {v[1] for v in members}
            assert is_independent_set(g1, proj1)
            assert is_independent_set(g2, proj2)


def _bits(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class TestLabelFunctions:
    def test_example_split_labelling(self):
        f = {1: 1, 2: 1, 3: 2, 4: 2}
        iset = independent_set_of(f, ConflictSpec(2, 4))
        assert iset == frozenset({(1, 3), (1, 4), (2, 3), (2, 4)})

    def test_constant_one_m1(self):
        f = {e: 1 for e in range(1, 6)}
        assert independent_set_of(f, ConflictSpec(1, 5)) == frozenset(
            {(e,) for e in range(1, 6)}
        )

    def test_no_element_for_first_slot(self):
        f = {e: 2 for e in range(1, 5)}
        assert independent_set_of(f, ConflictSpec(2, 4)) == frozenset()

    @pytest.mark.parametrize("m,M", [(2, 4), (2, 6), (2, 8), (3, 4), (3, 5)])
    def test_every_label_set_is_independent(self, m, M):
        spec = ConflictSpec(m, M)
        g = build_graph(spec)
        for f in iter_label_functions(spec):
            assert is_independent_set(g, independent_set_of(f, spec))

    def test_label_function_cap(self):
        with pytest.raises(EnumerationCapExceeded) as exc:
            list(iter_label_functions(ConflictSpec(2, 30)))
        assert exc.value.cap_name == "max_label_functions"


class TestMaximalIndependentSets:
    @pytest.mark.parametrize("m,M", [(2, 4), (2, 5), (2, 6), (3, 4), (3, 5)])
    def test_label_route_matches_generic_enumerators(self, m, M):
        spec = ConflictSpec(m, M)
        g = build_graph(spec)
        via_labels = set(maximal_independent_sets(spec))
        via_bk = {
            frozenset(g.vertices[i] for i in _bits(mask))
            for mask in bron_kerbosch_maximal_sets(g.adj_bits)
        }
        via_nx = {
            frozenset(g.vertices[i] for i in s)
            for s in networkx_maximal_independent_sets(g.n, g.edges)
        }
        assert via_labels == via_bk == via_nx

    def test_conflict_1_3_single_set(self):
        sets = maximal_independent_sets(ConflictSpec(1, 3))
        assert sets == [frozenset({(1,), (2,), (3,)})]

    def test_maximality_and_independence(self):
        spec = ConflictSpec(2, 4)
        g = build_graph(spec)
        for iset in maximal_independent_sets(spec):
            assert is_independent_set(g, iset)
            for v in g.vertices:
                if v not in iset:
                    assert any(adjacent(spec, v, w) for w in iset)

    def test_explicit_graph_route(self):
        sets = maximal_independent_sets(c5_spec())
        expected = {frozenset({i, (i + 2) % 5}) for i in range(5)}
        assert {frozenset(s) for s in sets} == expected


class TestExplicit:
    def test_edge_references_unknown_vertex(self):
        with pytest.raises(ValueError):
            ExplicitSpec((1, 2), ((1, 3),))

    def test_self_loop_rejected(self):
        with pytest.raises(ValueError):
            ExplicitSpec((1, 2), ((1, 1),))

    def test_explicit_graph_builder(self):
        g = explicit_graph("abc", [("a", "b")])
        assert g.n == 3 and len(g.edges) == 1


class TestDimacs:
    def test_format(self):
        g = build_graph(ConflictSpec(2, 4))
        text = to_dimacs(g, comment="demo")
        lines = text.strip().splitlines()
        assert lines[0] == "c demo"
        assert lines[1] == "p edge 6 4"
        assert len(lines) == 2 + 4
        for ln in lines[2:]:
            tag, a, b = ln.split()
            assert tag == "e" and 1 <= int(a) < int(b) <= 6


class TestValidation:
    def test_bad_conflict_spec(self):
        with pytest.raises(ValueError):
            ConflictSpec(0, 4)
        with pytest.raises(ValueError):
            ConflictSpec(3, 2)

    def test_caps_validation(self):
        with pytest.raises(ValueError):
            EnumerationCaps(max_vertices=0)
