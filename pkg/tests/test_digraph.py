import itertools

import networkx as nx
import pytest

from criticalideals.digraph import (
    CanonicalForm,
    Digraph,
    canonical_form,
    complete_digraph,
    contains_induced,
    delete_vertex,
    directed_cycle,
    directed_path,
    emit_digraph6,
    enumerate_connected,
    find_induced,
    from_adjacency,
    from_arcs,
    from_json,
    induced,
    is_connected,
    is_isomorphic,
    parse_digraph6,
    permute,
    read_digraph,
    to_json,
    to_networkx,
    transitive_tournament,
    trivial_digraph,
)
from criticalideals.exceptions import CapabilityError, Digraph6ParseError, DigraphError


def test_from_arcs_collapses_duplicates():
    d = from_arcs(3, [(0, 1), (0, 1), (1, 2)])
    assert d.arcs() == [(0, 1), (1, 2)]
    assert d.arc_count == 2
    assert d.out_degrees() == (1, 1, 0)
    assert d.in_degrees() == (0, 1, 1)


@pytest.mark.parametrize(
    "n, arcs",
    [
        (0, []),
        (17, []),
        (2, [(0, 0)]),
        (2, [(0, 2)]),
        (3, [(0, 1, 2)]),
    ],
)
def test_from_arcs_rejects_invalid_input(n, arcs):
    with pytest.raises(DigraphError):
        from_arcs(n, arcs)


def test_digraph_rejects_loop_rows():
    with pytest.raises(DigraphError):
        Digraph(2, (0b01, 0))


def test_code_is_row_major_with_first_entry_most_significant():
    d = from_arcs(2, [(0, 1)])
    assert format(d.code, "04b") == "0100"
    assert Digraph.from_code(2, d.code) == d


def test_from_adjacency_matches_arcs():
    d = from_adjacency([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert d == directed_cycle(3)
    with pytest.raises(DigraphError):
        from_adjacency([[0, 2], [0, 0]])


def test_named_constructors():
    assert trivial_digraph(3).arc_count == 0
    assert directed_path(3).arcs() == [(0, 1), (1, 2)]
    assert directed_cycle(2).arcs() == [(0, 1), (1, 0)]
    assert complete_digraph(3).arc_count == 6
    assert transitive_tournament(4).arc_count == 6


@pytest.mark.parametrize(
    "digraph, text",
    [
        (from_arcs(2, [(0, 1)]), "&AO"),
        (from_arcs(2, [(1, 0)]), "&AG"),
        (trivial_digraph(1), "&@?"),
        (directed_cycle(2), "&AW"),
    ],
)
def test_digraph6_known_strings(digraph, text):
    assert emit_digraph6(digraph) == text
    assert parse_digraph6(text) == digraph


def test_digraph6_accepts_file_header():
    assert parse_digraph6(">>digraph6<<&AO") == from_arcs(2, [(0, 1)])


def test_digraph6_round_trip_on_every_class_up_to_5():
    for n in range(1, 6):
        for d in enumerate_connected(n):
            assert parse_digraph6(emit_digraph6(d)) == d


@pytest.mark.parametrize(
    "text, offset",
    [
        ("AO", 0),
        ("&", 1),
        ("&A", 2),
        ("&AOO", 3),
        ("&A ", 2),
        ("&AP", 2),
        ("&@", 2),
        ("&?", 1),
    ],
)
def test_digraph6_errors_carry_offsets(text, offset):
    with pytest.raises(Digraph6ParseError) as excinfo:
        parse_digraph6(text)
    assert excinfo.value.offset == offset
    assert f"byte offset {offset}" in excinfo.value.message


def test_digraph6_rejects_loops():
    # 2 vertices, bit for adj[0][0] set
    with pytest.raises(Digraph6ParseError):
        parse_digraph6("&A" + chr(63 + 0b100000))


def test_digraph6_caps_vertex_count():
    with pytest.raises(CapabilityError):
        parse_digraph6("&" + chr(63 + 17) + "?" * 49)


def test_json_form():
    d = from_arcs(3, [(0, 1), (2, 1)])
    assert to_json(d) == '{"n": 3, "arcs": [[0, 1], [2, 1]]}'
    assert from_json(to_json(d)) == d
    assert read_digraph(' {"n": 2, "arcs": [[1, 0]]}') == from_arcs(2, [(1, 0)])
    assert read_digraph("&AO") == from_arcs(2, [(0, 1)])
    with pytest.raises(DigraphError):
        from_json("[1, 2]")
    with pytest.raises(DigraphError):
        from_json('{"arcs": []}')


def test_connectivity_is_weak():
    assert is_connected(directed_path(4))
    assert is_connected(trivial_digraph(1))
    assert not is_connected(from_arcs(3, [(0, 1)]))


def test_induced_relabels_in_increasing_order():
    d = from_arcs(4, [(0, 3), (3, 2), (1, 2)])
    sub = induced(d, [0, 2, 3])
    assert sub == from_arcs(3, [(0, 2), (2, 1)])
    assert induced(d, 0b1101) == sub
    assert delete_vertex(d, 1) == sub
    with pytest.raises(DigraphError):
        induced(d, [])
    with pytest.raises(DigraphError):
        induced(d, [4])


def test_permute_relabels_vertices():
    assert permute(directed_path(3), [2, 1, 0]) == from_arcs(3, [(2, 1), (1, 0)])
    with pytest.raises(DigraphError):
        permute(directed_path(3), [0, 0, 1])


def test_canonical_form_is_the_minimum_code():
    d = directed_path(3)
    form = canonical_form(d)
    codes = [permute(d, perm).code for perm in itertools.permutations(range(3))]
    assert form == CanonicalForm(3, min(codes))
    assert form.to_digraph().code == min(codes)
    assert len(form.bits) == 9


def test_canonical_form_cap():
    with pytest.raises(CapabilityError):
        canonical_form(trivial_digraph(9))


def test_isomorphism_agrees_with_networkx(rng):
    for _ in range(200):
        n = rng.randint(1, 5)
        first = from_arcs(
            n, [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.4]
        )
        perm = list(range(n))
        rng.shuffle(perm)
        second = from_arcs(
            n, [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.4]
        )
        assert is_isomorphic(first, permute(first, perm))
        assert is_isomorphic(first, second) == nx.is_isomorphic(
            to_networkx(first), to_networkx(second)
        )


def test_find_induced():
    d = from_arcs(4, [(0, 1), (1, 2), (2, 3)])
    assert find_induced(d, directed_path(3)) == (0, 1, 2)
    assert not contains_induced(d, directed_cycle(3))
    assert find_induced(directed_path(2), directed_path(3)) is None


@pytest.mark.parametrize("n, count", [(1, 1), (2, 2), (3, 13), (4, 199), (5, 9364)])
def test_enumerate_connected_class_counts(n, count):
    assert sum(1 for _ in enumerate_connected(n)) == count


def test_enumerated_classes_are_canonical_and_distinct():
    classes = list(enumerate_connected(4))
    forms = [canonical_form(d) for d in classes]
    assert all(form.code == d.code for form, d in zip(forms, classes))
    assert forms == sorted(set(forms))
    assert all(is_connected(d) for d in classes)


def test_enumeration_cap():
    with pytest.raises(CapabilityError):
        list(enumerate_connected(6))


F31 = from_arcs(3, [(0, 2), (2, 1)])
F32 = from_arcs(3, [(0, 2), (1, 2), (2, 0)])
F33 = from_arcs(3, [(0, 2), (2, 0), (2, 1)])
F41 = from_arcs(4, [(0, 2), (0, 3), (1, 3)])


def test_small_examples():
    assert is_connected(F41)
    assert not is_connected(trivial_digraph(2))
    assert induced(F31, [0, 2]) == directed_path(2)
    assert induced(F31, F31.full_set) == F31
    assert induced(directed_cycle(2), [0]) == trivial_digraph(1)
    assert is_isomorphic(from_arcs(2, [(0, 1)]), from_arcs(2, [(1, 0)]))
    assert not is_isomorphic(directed_path(2), directed_cycle(2))
    assert not is_isomorphic(F32, F33)


def test_induced_containment_examples():
    assert contains_induced(F31, directed_path(2))
    assert not contains_induced(directed_cycle(2), directed_path(2))
    assert not contains_induced(transitive_tournament(4), F31)
    assert contains_induced(transitive_tournament(4), transitive_tournament(3))


def test_two_vertex_classes():
    forms = {canonical_form(d) for d in enumerate_connected(2)}
    assert forms == {canonical_form(directed_path(2)), canonical_form(directed_cycle(2))}
    assert list(enumerate_connected(1)) == [trivial_digraph(1)]


def test_three_vertex_classes_match_labelled_brute_force():
    pairs = [(u, v) for u in range(3) for v in range(3) if u != v]
    forms = set()
    for mask in range(1 << len(pairs)):
        d = from_arcs(3, [pair for j, pair in enumerate(pairs) if mask >> j & 1])
        if is_connected(d):
            forms.add(canonical_form(d))
    assert forms == {canonical_form(d) for d in enumerate_connected(3)}


def _contains_by_brute_force(d, h):
    for subset in itertools.combinations(range(d.n), h.n):
        sub = induced(d, subset)
        if any(permute(sub, list(perm)) == h for perm in itertools.permutations(range(h.n))):
            return True
    return False


def test_containment_agrees_with_brute_force(rng):
    for _ in range(60):
        n = rng.randint(3, 5)
        d = from_arcs(
            n, [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.35]
        )
        m = rng.randint(1, 3)
        h = from_arcs(
            m, [(u, v) for u in range(m) for v in range(m) if u != v and rng.random() < 0.5]
        )
        assert contains_induced(d, h) == _contains_by_brute_force(d, h)
