import random
from fractions import Fraction

import pytest

from conftest import (
    complete_graph,
    cycle_graph,
    disjoint_triangles,
    path_graph,
    random_graph,
    random_partite_graph,
)
from santagap import topology as tp
from santagap.allocation_graph import (
    build_H,
    build_J,
    compute_fat,
    compute_m,
    restrict,
)
from santagap.graphs import Graph, graph_from_json, graph_to_json
from santagap.instance import parse_instance
from santagap.lp_core import (
    build_dual_basic,
    clp_feasible,
    compute_t_star,
    enumerate_thin_configurations,
    hypothesis_holds_basic,
    verify_dual,
)


# -- independence complexes ---------------------------------------------------

def test_complex_edgeless_single_facet():
    comp = tp.independence_complex(Graph(range(4), []))
    assert comp.facets == (frozenset({0, 1, 2, 3}),)


def test_complex_complete_graph_singletons():
    comp = tp.independence_complex(complete_graph(4))
    assert sorted(comp.facets, key=sorted) == [frozenset({i}) for i in range(4)]


def test_complex_c5_is_a_five_cycle():
    comp = tp.independence_complex(cycle_graph(5))
    assert len(comp.facets) == 5
    assert all(len(f) == 2 for f in comp.facets)
    # the five nonadjacent pairs form a cycle themselves
    assert set(comp.facets) == {
        frozenset({i, (i + 2) % 5}) for i in range(5)
    }


def test_facets_are_maximal_independent_sets():
    rng = random.Random(8)
    for _ in range(30):
        g = random_graph(rng, 7)
        comp = tp.independence_complex(g)
        facets = set(comp.facets)
        for f in facets:
            assert all(not g.has_edge(u, v) for u in f for v in f if u < v)
            for v in g.vertices:
                if v not in f:
                    assert any(g.has_edge(v, u) for u in f)
        assert {v for f in facets for v in f} == set(g.vertices)


# -- eta ------------------------------------------------------------------------

def test_eta_goldens():
    assert tp.eta(Graph([], [])) == 0
    assert tp.eta(Graph([0], [])) == tp.INF
    assert tp.eta(cycle_graph(5)) == 2
    for n in (2, 3, 4):
        assert tp.eta(complete_graph(n)) == 1
    for k in (1, 2, 3):
        assert tp.eta(disjoint_triangles(k)) == k


def test_eta_matches_full_homology_profile():
    rng = random.Random(14)
    graphs = [cycle_graph(5), path_graph(5), disjoint_triangles(2)]
    graphs += [random_graph(rng, 7) for _ in range(20)]
    for g in graphs:
        profile = tp.homology_profile(g)
        assert tp.eta(g) == tp.eta_from_profile(profile)


def _brute_homology_ranks(g: Graph) -> dict:
    """Oracle: enumerate every independent set by bitmask filtering and
    reduce boundary matrices with a plain row-echelon pass over 0/1 lists.
    Shares nothing with the production enumeration or elimination."""
    n = len(g.vertices)
    idx = {v: i for i, v in enumerate(g.vertices)}
    if n == 0:
        return {-1: 1}
    independent = []
    for mask in range(1 << n):
        members = [i for i in range(n) if (mask >> i) & 1]
        ok = True
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                if g.has_edge(g.vertices[members[a]], g.vertices[members[b]]):
                    ok = False
        if ok:
            independent.append(tuple(members))
    by_dim: dict[int, list[tuple]] = {}
    for simplex in independent:
        by_dim.setdefault(len(simplex) - 1, []).append(simplex)
    top = max(by_dim)

    def rank_rows(matrix: list[list[int]]) -> int:
        matrix = [row[:] for row in matrix]
        rank, col = 0, 0
        width = len(matrix[0]) if matrix else 0
        for col in range(width):
            pivot = next(
                (r for r in range(rank, len(matrix)) if matrix[r][col]), None
            )
            if pivot is None:
                continue
            matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
            for r in range(len(matrix)):
                if r != rank and matrix[r][col]:
                    matrix[r] = [x ^ y for x, y in zip(matrix[r], matrix[rank])]
            rank += 1
        return rank

    def boundary_rank(d: int) -> int:
        if d == 0:
            return 1 if by_dim.get(0) else 0  # augmentation row
        lower = {s: i for i, s in enumerate(by_dim.get(d - 1, []))}
        upper = by_dim.get(d, [])
        if not upper:
            return 0
        matrix = []
        for s in upper:
            row = [0] * len(lower)
            for omit in range(len(s)):
                face = s[:omit] + s[omit + 1 :]
                row[lower[face]] ^= 1
            matrix.append(row)
        return rank_rows(matrix)

    ranks = {-1: 0}
    for d in range(0, top + 1):
        dim_d = len(by_dim.get(d, []))
        ranks[d] = dim_d - boundary_rank(d) - boundary_rank(d + 1)
    return ranks


def test_homology_against_independent_brute_force():
    rng = random.Random(777)
    graphs = [cycle_graph(5), complete_graph(3), disjoint_triangles(2), path_graph(4)]
    graphs += [random_graph(rng, 6) for _ in range(25)]
    for g in graphs:
        expected = _brute_homology_ranks(g)
        got = tp.homology_profile(g).ranks
        # the production profile reports -1..dim; compare the union support
        for d in set(expected) | set(got):
            assert expected.get(d, 0) == got.get(d, 0), (g.key, d)


def test_eta_disjoint_union_inequality():
    rng = random.Random(15)
    for _ in range(15):
        g1 = random_graph(rng, 4)
        g2 = random_graph(rng, 4)
        shift = len(g1.vertices)
        union = Graph(
            list(range(len(g1.vertices) + len(g2.vertices))),
            list(g1.edges) + [(u + shift, v + shift) for u, v in g2.edges],
        )
        assert tp.eta(union) >= tp.eta(g1) + 1  # g2 nonempty


def test_eta_isomorphism_invariant():
    rng = random.Random(16)
    for _ in range(10):
        g = random_graph(rng, 7)
        perm = list(range(len(g.vertices)))
        rng.shuffle(perm)
        relabeled = Graph(
            [perm[v] for v in g.vertices],
            [(perm[u], perm[v]) for u, v in g.edges],
        )
        assert tp.eta(g) == tp.eta(relabeled)


def test_eta_at_least_agrees_with_eta():
    rng = random.Random(17)
    for _ in range(20):
        g = random_graph(rng, 6)
        value = tp.eta(g)
        for t in range(0, 5):
            assert tp.eta_at_least(g, t) == (value >= t)


# -- delete / explode -----------------------------------------------------------

def test_delete_keeps_vertices():
    g = path_graph(2)
    d = g.delete_edge((0, 1))
    assert len(d.vertices) == 2 and not d.edges


def test_explode_c5_leaves_one_vertex():
    g = cycle_graph(5)
    assert len(g.explode_edge((0, 1)).vertices) == 1


def test_explode_k4_leaves_nothing():
    assert len(complete_graph(4).explode_edge((0, 1)).vertices) == 0


def test_edge_must_exist():
    g = path_graph(3)
    with pytest.raises(Exception):
        g.delete_edge((0, 2))


# -- classify -------------------------------------------------------------------

def test_classify_c5_edges_deletable_only():
    g = cycle_graph(5)
    for e in g.edges:
        cls = tp.classify_edge(g, e)
        assert cls.deletable and not cls.explodable


def test_classify_k2_edge_explodable():
    g = complete_graph(2)
    cls = tp.classify_edge(g, (0, 1))
    assert cls.explodable
    assert cls.eta_before == 1 and cls.eta_exploded == 0
    assert not cls.deletable  # deleting isolates both endpoints


def test_meshulam_every_edge_classifies():
    rng = random.Random(18)
    for _ in range(60):
        g = random_graph(rng, 8)
        for e in g.edges:
            cls = tp.classify_edge(g, e)
            assert cls.deletable or cls.explodable
            assert cls.eta_before >= min(cls.eta_deleted, cls.eta_exploded + 1)


# -- execute --------------------------------------------------------------------

def test_execute_empty_sequence():
    g = cycle_graph(5)
    res = tp.execute_sequence(g, ())
    assert res.valid and res.ell == 0 and res.eta_drop_certified


def test_execute_c5_double_deletion_trace():
    g = cycle_graph(5)
    steps = (
        tp.DeStep(tp.DELETE, (0, 1)),
        tp.DeStep(tp.DELETE, (2, 3)),  # middle edge of the remaining path
    )
    res = tp.execute_sequence(g, steps)
    assert res.valid and res.ell == 0
    # final graph is P2 + P3
    comps = sorted(len(c) for c in _components(res.final))
    assert comps == [2, 3]
    assert res.eta_start == 2 and res.eta_final == 2
    assert res.eta_drop_certified


def test_execute_rejects_illegal_explosion():
    g = cycle_graph(5)
    res = tp.execute_sequence(g, (tp.DeStep(tp.EXPLODE, (0, 1)),))
    assert not res.valid and res.failed_at == 0


def test_execute_reports_missing_edge():
    g = path_graph(3)
    res = tp.execute_sequence(g, (tp.DeStep(tp.DELETE, (0, 2)),))
    assert not res.valid and res.failed_at == 0


def test_executed_sequences_drop_eta_by_ell():
    """Random legal executions always satisfy eta(start) >= eta(end) + ell."""
    rng = random.Random(19)
    for _ in range(20):
        g = random_graph(rng, 7)
        steps = []
        cur = g
        for _ in range(rng.randint(1, 4)):
            if not cur.edges:
                break
            e = rng.choice(cur.edges)
            cls = tp.classify_edge(cur, e)
            if cls.explodable and rng.random() < 0.5:
                steps.append(tp.DeStep(tp.EXPLODE, e))
                cur = cur.explode_edge(e)
            elif cls.deletable:
                steps.append(tp.DeStep(tp.DELETE, e))
                cur = cur.delete_edge(e)
            elif cls.explodable:
                steps.append(tp.DeStep(tp.EXPLODE, e))
                cur = cur.explode_edge(e)
        res = tp.execute_sequence(g, tuple(steps))
        assert res.valid
        assert res.eta_start >= res.eta_final + res.ell


def _components(g: Graph):
    seen = set()
    comps = []
    for v in g.vertices:
        if v in seen:
            continue
        stack, comp = [v], set()
        while stack:
            u = stack.pop()
            if u in comp:
                continue
            comp.add(u)
            stack.extend(g.neighbors(u))
        seen |= comp
        comps.append(comp)
    return comps


# -- covers ----------------------------------------------------------------------

def _tiny_allocation_graph():
    """K2 over hyperedges {a,b}^p1 and {b,c}^p2."""
    u = ("p1", ("a", "b"))
    v = ("p2", ("b", "c"))
    return Graph([u, v], [(u, v)]), u, v


def test_basic_cover_single_explosion():
    g, u, v = _tiny_allocation_graph()
    seq = tp.DeSequence(g, (tp.DeStep(tp.EXPLODE, (u, v)),))
    record = tp.basic_cover(seq)
    assert record.cover == frozenset({"a", "b", "c"})
    assert record.star_verified


def test_deletion_only_cover_is_empty_and_cheap():
    g, u, v = _tiny_allocation_graph()
    seq = tp.DeSequence(g, (tp.DeStep(tp.DELETE, (u, v)),))
    record = tp.basic_cover(seq)
    assert record.cover == frozenset()
    values = {"a": Fraction(1, 2), "b": Fraction(1, 2), "c": Fraction(1, 2)}
    assert tp.is_cheap(values, record.cover, 0, Fraction(1, 2))


def test_shrink_cover_finds_shared_resource():
    g, u, v = _tiny_allocation_graph()
    end = g.explode_edge((u, v))
    shrunk = tp.shrink_cover(g, end, frozenset({"a", "b", "c"}))
    assert shrunk == frozenset({"b"})
    assert tp.verify_star(g, end, shrunk)
    assert not tp.verify_star(g, end, frozenset({"c"}))


def test_gamma_and_average_cost():
    cover = frozenset({"a", "b", "c", "d", "e", "f", "g"})
    assert tp.is_gamma(cover, 3, Fraction(7, 3))
    assert not tp.is_gamma(cover, 2, Fraction(7, 3))
    assert tp.average_cost(cover, 3) == Fraction(7, 3)
    with pytest.raises(tp.SequenceError):
        tp.average_cost(cover, 0)


def test_two_values_gamma_shape():
    # j explosions covered by 2j+1 thin resources is a (2j+1)/j sequence
    for j in (2, 3):
        cover = frozenset(f"t{i}" for i in range(2 * j + 1))
        assert tp.is_gamma(cover, j, Fraction(2 * j + 1, j))


def test_basic_cover_always_satisfies_star(shared_halves):
    """Random legal sequences on a thin allocation graph keep every
    cover-disjoint vertex alive."""
    rng = random.Random(53)
    j = build_J(build_H(shared_halves, Fraction(1), Fraction(2, 3)))
    for _ in range(10):
        cur = j.graph
        steps = []
        for _ in range(rng.randint(1, 5)):
            if not cur.edges:
                break
            e = rng.choice(cur.edges)
            cls = tp.classify_edge(cur, e)
            if cls.explodable and rng.random() < 0.6:
                steps.append(tp.DeStep(tp.EXPLODE, e))
                cur = cur.explode_edge(e)
            elif cls.deletable:
                steps.append(tp.DeStep(tp.DELETE, e))
                cur = cur.delete_edge(e)
        seq = tp.DeSequence(j.graph, tuple(steps))
        record = tp.basic_cover(seq)
        assert record.star_verified
        shrunk = tp.shrink_cover(j.graph, record.end, record.cover)
        assert shrunk <= record.cover
        assert tp.verify_star(j.graph, record.end, shrunk)


# -- search ----------------------------------------------------------------------

def test_search_ko_trivial_on_isolated():
    g = Graph([0, 1, 2], [(0, 1)])
    out = tp.search_de_sequence(g, "ko")
    assert out.found and len(out.sequence.steps) == 0


def test_search_edgeless_on_c5_and_replay():
    g = cycle_graph(5)
    out = tp.search_de_sequence(g, "edgeless", budget=20000)
    assert out.found
    res = tp.execute_sequence(g, out.sequence)
    assert res.valid and not res.final.edges


def test_search_ko_conclusive_negative_on_k2():
    # eta(K2) = 1 finite, so no KO-sequence exists; search space is tiny
    out = tp.search_de_sequence(complete_graph(2), "ko", budget=1000)
    assert not out.found and out.conclusive


def test_search_cheap_single_explosion():
    g, u, v = _tiny_allocation_graph()
    values = {"a": Fraction(1, 2), "b": Fraction(1, 2), "c": Fraction(1, 2)}
    out = tp.search_de_sequence(g, "cheap", values=values, m=Fraction(1, 2))
    assert out.found and out.sequence.ell == 1


def test_search_respects_budget():
    g = cycle_graph(6)
    out = tp.search_de_sequence(g, "ko", budget=1)
    assert not out.found and not out.conclusive


# -- hall check -------------------------------------------------------------------

def test_hall_check_empty_part_fails():
    g = Graph(["a1"], [])
    res = tp.hall_eta_check(g, {"P1": ("a1",), "P2": ()})
    assert not res.holds and res.violating_U == ("P2",)


def test_hall_check_edgeless_holds():
    g = Graph(["a", "b"], [])
    res = tp.hall_eta_check(g, {"P1": ("a",), "P2": ("b",)})
    assert res.holds


def test_hall_check_bipartite_encoding():
    # J(B) for B satisfying Hall: parts V_x = {y^x : y in N(x)},
    # edges between equal-y vertices of different parts
    B = {"x1": ["y1", "y2"], "x2": ["y2", "y3"], "x3": ["y1", "y3"]}
    parts = {x: tuple((x, (y,)) for y in ys) for x, ys in B.items()}
    vertices = [v for vs in parts.values() for v in vs]
    edges = [
        (u, v)
        for i, u in enumerate(vertices)
        for v in vertices[i + 1 :]
        if u[0] != v[0] and u[1] == v[1]
    ]
    g = Graph(vertices, edges)
    res = tp.hall_eta_check(g, parts)
    assert res.holds
    # disjoint-cliques structure: eta(J(B)|_U) >= |N(U)| >= |U|
    for U, expect in ((("x1",), 2), (("x1", "x2"), 3)):
        keep = {v for x in U for v in parts[x]}
        assert tp.eta(g.induced(keep)) >= len(U)


def test_eta_hall_criterion_implies_transversal():
    """hall_eta_check => an independent transversal exists (mini suite)."""
    from santagap.allocation_graph import AllocationGraph

    rng = random.Random(20)
    checked = 0
    for _ in range(40):
        g, parts = random_partite_graph(rng)
        res = tp.hall_eta_check(g, parts)
        if not res.holds:
            continue
        checked += 1
        assert _brute_force_transversal(g, parts), (g.vertices, g.edges, parts)
    assert checked >= 5


def _brute_force_transversal(g: Graph, parts: dict) -> bool:
    import itertools

    for combo in itertools.product(*(parts[p] for p in sorted(parts))):
        if all(
            not g.has_edge(u, v)
            for u, v in itertools.combinations(combo, 2)
        ):
            return True
    return False


# -- four-phase driver ---------------------------------------------------------

def test_four_phase_on_edgeless_graph():
    g = Graph([], [])
    res = tp.four_phase_driver({}, g, Fraction(1, 2))
    assert res.outcome == "edgeless" and res.ledger.ell == 0


def test_four_phase_fat_only_instance():
    inst = parse_instance("players p1 p2\nresource f 1\ncovets p1 f\ncovets p2 f\n")
    h = build_H(inst, Fraction(1), Fraction(1, 2))
    j = build_J(h)
    res = tp.four_phase_driver(inst, j, compute_m(inst, Fraction(1), Fraction(1, 2)))
    assert res.outcome == "edgeless"
    assert res.ledger.ell == 0


def test_four_phase_accounting_on_shared_halves(shared_halves):
    inst = shared_halves
    t = compute_t_star(inst).t_star
    assert t == 1
    alpha = Fraction(2, 3)
    j = build_J(build_H(inst, t, alpha))
    m = compute_m(inst, t, alpha)
    res = tp.four_phase_driver(inst, j, m, search_budget=600, step_budget=600)
    assert res.outcome in ("KO", "edgeless")
    checks = res.ledger.checks(inst, m.m)
    assert all(checks.values()), checks
    replay = tp.execute_sequence(res.sequence.start, res.sequence)
    assert replay.valid and replay.ell == res.ledger.ell
    assert replay.eta_start >= replay.eta_final + replay.ell


def test_cover_dual_accounting_all_player_sets(shared_halves):
    """The cover/dual accounting argument, end to end, for every player set."""
    inst = shared_halves
    t = compute_t_star(inst).t_star
    alpha = Fraction(2, 3)
    h = build_H(inst, t, alpha)
    j = build_J(h)
    m = compute_m(inst, t, alpha)
    fat = compute_fat(inst, t, alpha)
    assert clp_feasible(inst, t).feasible
    for U in (("p1",), ("p2",), ("p1", "p2")):
        sub = restrict(j, U)
        out = tp.search_de_sequence(sub.graph, "edgeless", budget=30000)
        assert out.found, f"no edgeless sequence found for U={U}"
        seq = out.sequence
        replay = tp.execute_sequence(sub.graph, seq)
        assert replay.valid
        record = tp.basic_cover(seq)
        assert record.star_verified
        W, ell = record.cover, replay.ell
        # per-explosion cover bound v(e u f) <= 3m
        assert inst.value(W) <= 3 * m.m * ell
        if replay.final.vertices:
            # KO branch: an isolated vertex survives, eta(start) is infinite
            assert replay.final.has_isolated_vertex()
            assert tp.eta(sub.graph) == tp.INF
            continue
        f_u = fat.fat_for(inst, U)
        need = len(U) - len(f_u)
        c_dual = t - m.m
        assert hypothesis_holds_basic(inst, t, U, W, c_dual, fat.fat_set)
        sol = build_dual_basic(inst, U, W, c_dual, fat.fat_set)
        check = verify_dual(inst, t, sol)
        assert check.feasible
        assert check.objective <= 0  # weak duality at a feasible target
        assert inst.value(W) >= c_dual * need
        assert ell >= Fraction(c_dual * need, 3 * m.m)


def test_four_phase_random_two_value_suite():
    """Driver runs on a batch of feasible (1, 1/4) instances: outcome is
    always decisive at this scale, ledgers satisfy their inequalities, and
    the executed sequence replays as legal."""
    from santagap.instance import gen_two_value

    rng = random.Random(5150)
    ran = 0
    for trial in range(60):
        inst = gen_two_value(
            rng.randint(2, 3),
            Fraction(1, 4),
            {
                "num_fat": rng.randint(1, 2),
                "num_thin": rng.randint(3, 5),
                "density": rng.choice([0.6, 0.8, 1.0]),
            },
            seed=trial,
        )
        t = Fraction(1)
        if not clp_feasible(inst, t).feasible:
            continue
        alpha = Fraction(1, 2)
        j = build_J(build_H(inst, t, alpha))
        if j.vertex_count() > 14:
            continue
        m = compute_m(inst, t, alpha)
        if m.m == 0:
            continue
        ran += 1
        res = tp.four_phase_driver(inst, j, m, search_budget=400, step_budget=400)
        assert res.outcome in ("KO", "edgeless")
        checks = res.ledger.checks(inst, m.m)
        assert all(checks.values()), (trial, checks)
        replay = tp.execute_sequence(res.sequence.start, res.sequence)
        assert replay.valid
        assert replay.eta_start >= replay.eta_final + replay.ell
    assert ran >= 15


def test_fat_only_players_dual_bound():
    """Players whose configurations are all fat make the dual bound force
    |U| <= |F_U| via the vacuous hypothesis."""
    doc = (
        "players p1 p2 p3\n"
        "resource g 1\nresource h 1\n"
        "resource t1 1/5\nresource t2 1/5\nresource t3 1/5\nresource t4 1/5\nresource t5 1/5\n"
        "covets p1 t1 t2 t3 t4 t5\n"
        "covets p2 g\n"
        "covets p3 h\n"
    )
    inst = parse_instance(doc)
    t = compute_t_star(inst).t_star
    assert t == 1
    alpha = Fraction(1, 4)
    fat = compute_fat(inst, t, alpha)
    assert fat.fat_set == frozenset({"g", "h"})
    m = compute_m(inst, t, alpha)
    U = ("p2", "p3")
    # neither player in U has a thin configuration
    for p in U:
        assert not enumerate_thin_configurations(inst, p, t, fat.fat_set)
    c_dual = 3 * m.m
    assert hypothesis_holds_basic(inst, t, U, frozenset(), c_dual, fat.fat_set)
    sol = build_dual_basic(inst, U, frozenset(), c_dual, fat.fat_set)
    assert verify_dual(inst, t, sol).feasible
    # weak duality: 0 >= objective = c(|U| - |F_U|), so |U| <= |F_U|
    assert len(U) <= len(fat.fat_for(inst, U))
    # and the thin player's part goes KO instantly (isolated vertices)
    j = build_J(build_H(inst, t, alpha))
    sub = restrict(j, ("p1",))
    assert sub.graph.vertices and sub.graph.has_isolated_vertex()
    assert tp.eta(sub.graph) == tp.INF


# -- JSON round trips -------------------------------------------------------------

def test_graph_json_round_trip():
    g, u, v = _tiny_allocation_graph()
    doc = graph_to_json(g, parts={"p1": (u,), "p2": (v,)})
    g2, parts = graph_from_json(doc)
    assert g2 == g and parts == {"p1": (u,), "p2": (v,)}


def test_trace_json_round_trip():
    g, u, v = _tiny_allocation_graph()
    seq = tp.DeSequence(g, (tp.DeStep(tp.EXPLODE, (u, v)),))
    doc = seq.to_json()
    seq2 = tp.sequence_from_json(g, doc)
    assert seq2.steps == seq.steps
    res = tp.execute_sequence(g, seq2)
    assert res.valid and res.ell == 1
