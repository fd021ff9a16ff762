"""LP export: worked variable counts, lint pass, size cap."""

import pytest

import instances
import oracles
from fleetcast.errors import LpSizeError
from fleetcast.lp import export_lp, lint_lp
from fleetcast.scenario import InfoSpec


def variable_names(text):
    lines = text.splitlines()
    start = lines.index("Binaries") + 1
    end = lines.index("Bounds")
    names = []
    for line in lines[start:end]:
        names.extend(line.split())
    return names


def constraint_names(text):
    lines = text.splitlines()
    start = lines.index("Subject To") + 1
    end = lines.index("Binaries")
    return [line.split(":", 1)[0].strip() for line in lines[start:end]]


def test_two_vertices_one_edge():
    graph = instances.augmented(instances.asymmetric_pair())
    text = export_lp(graph)
    assert lint_lp(text) == []
    names = variable_names(text)
    assert [n for n in names if n.startswith("a_")] == ["a_0_0"]
    assert " obj: P_0 + P_1" in text.splitlines()


def test_no_infos_yields_bounds_only():
    graph = instances.augmented(instances.asymmetric_pair())
    text = export_lp(graph, infos=[])
    assert lint_lp(text) == []
    assert constraint_names(text) == []
    assert variable_names(text) == []
    assert " obj: P_0 + P_1" in text.splitlines()


def test_size_cap():
    graph = instances.augmented(instances.chain3())
    with pytest.raises(LpSizeError):
        export_lp(graph, max_variables=3)


@pytest.mark.parametrize("make", [
    instances.chain3, instances.star4, lambda: instances.crossing_pair(2),
    instances.disjoint_pairs, instances.self_delivery,
])
def test_lint_and_counts_on_hand_instances(make):
    graph = instances.augmented(make())
    text = export_lp(graph)
    assert lint_lp(text) == []
    names = variable_names(text)
    assert len(names) == oracles.lp_variable_count(graph, graph.infos)
    assert len(set(names)) == len(names)
    rows = constraint_names(text)
    assert len(rows) == oracles.lp_constraint_count(graph, graph.infos)
    assert len(set(rows)) == len(rows)


def test_lint_and_counts_with_caching_edges():
    scen = instances.static_scenario(
        positions=[(0, 0), (10, 0)], horizon=3, channels=1,
        infos=[InfoSpec(id=0, sources={(0, 0)}, destinations={1}),
               InfoSpec(id=1, sources={(1, 1)}, destinations={0})])
    graph = instances.augmented(scen)
    text = export_lp(graph)
    assert lint_lp(text) == []
    assert len(variable_names(text)) == oracles.lp_variable_count(graph, graph.infos)
    assert len(constraint_names(text)) == oracles.lp_constraint_count(graph, graph.infos)


def test_weights_survive_scientific_notation():
    # micro radio energies are small enough to print with exponents
    scen = instances.static_scenario(
        positions=[(0, 0), (3, 0)], radii=(5.0,), radio=instances.PAPER_RADIO,
        infos=[InfoSpec(id=0, sources={(0, 0)}, destinations={1})])
    graph = instances.augmented(scen)
    text = export_lp(graph)
    assert lint_lp(text) == []


def test_lint_rejects_malformed_documents():
    assert lint_lp("Minimize\n obj: x\nEnd\n")  # missing sections
    bad_order = ("Minimize\n obj: P_0\nBinaries\n x\nSubject To\n"
                 " c: x <= 1\nBounds\n 0 <= P_0\nEnd\n")
    assert any("order" in e for e in lint_lp(bad_order))
    undeclared = ("Minimize\n obj: P_0\nSubject To\n c1: y >= 1\n"
                  "Binaries\nBounds\n 0 <= P_0\nEnd\n")
    assert any("never declared" in e for e in lint_lp(undeclared))
    bad_rhs = ("Minimize\n obj: P_0\nSubject To\n c1: P_0 >= q\n"
               "Binaries\nBounds\n 0 <= P_0\nEnd\n")
    assert any("not numeric" in e for e in lint_lp(bad_rhs))
    dup = ("Minimize\n obj: P_0\nSubject To\n c1: P_0 >= 0\n c1: P_0 >= 0\n"
           "Binaries\nBounds\n 0 <= P_0\nEnd\n")
    assert any("duplicate" in e for e in lint_lp(dup))
