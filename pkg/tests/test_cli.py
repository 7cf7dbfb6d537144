"""Command-line surface tests: parsing, subcommands, exit codes, goldens."""

from __future__ import annotations

import csv
import io
import json
import pathlib

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cographdel import brute_solve
from cographdel.cli import (
    GraphFileError,
    LabeledGraph,
    main,
    parse_graph,
    serialize_graph,
)

from conftest import weighted_graphs

DATA = pathlib.Path(__file__).parent / "data"


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


P4_TEXT = "v a 1\nv b 1\nv c 1\nv d 1\ne a b\ne b c\ne c d\n"
C4_TEXT = "e a b\ne b c\ne c d\ne d a\n"


def test_parse_basic():
    lg = parse_graph("# banner\nv top 3\ne top base\ne base left\n")
    assert lg.labels == ("top", "base", "left")
    assert lg.graph.n == 3
    assert lg.graph.weights == (3, 1, 1)
    assert lg.graph.has_edge(0, 1) and lg.graph.has_edge(1, 2)


def test_parse_isolated_vertex_and_blank_lines():
    lg = parse_graph("\nv lonely 7\n\n# nothing else\n")
    assert lg.graph.n == 1
    assert lg.graph.weights == (7,)
    assert lg.graph.edge_count() == 0


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("v a 1\nv a 2\n", "duplicate declaration"),
        ("e a a\n", "self-loop"),
        ("e a b\ne b a\n", "duplicate edge"),
        ("x 1 2\n", "expected 'v' or 'e'"),
        ("v a\n", "label and a weight"),
        ("e a\n", "exactly two labels"),
        ("v a zero\n", "not an integer"),
        ("v a 0\n", "weight must be in"),
        ("v a 4294967296\n", "weight must be in"),
    ],
)
def test_parse_diagnostics(text, fragment):
    with pytest.raises(GraphFileError) as err:
        parse_graph(text, source="bad.graph")
    assert "bad.graph:" in str(err.value)
    assert fragment in str(err.value)


@settings(max_examples=60, deadline=None)
@given(weighted_graphs(max_n=7, max_weight=3))
def test_round_trip_identity(g):
    lg = LabeledGraph(g, tuple(f"n{i}" for i in range(g.n)))
    once = parse_graph(serialize_graph(lg))
    again = parse_graph(serialize_graph(once))
    assert once.graph == lg.graph
    assert once.labels == lg.labels
    assert again.graph == once.graph
    assert again.labels == once.labels


def test_solve_p4_within_budget(tmp_path, capsys):
    path = write(tmp_path, "p4.graph", P4_TEXT)
    assert main(["solve", path, "--k", "1"]) == 0
    out = capsys.readouterr().out
    assert "cost 1" in out
    assert out.count("delete") == 1


def test_solve_p4_budget_zero_infeasible(tmp_path, capsys):
    path = write(tmp_path, "p4.graph", P4_TEXT)
    assert main(["solve", path, "--k", "0"]) == 1
    assert "infeasible" in capsys.readouterr().out


def test_solve_banner_graph(tmp_path, capsys):
    text = "e a b\ne b c\ne c d\ne d a\ne a e\n"
    banner = parse_graph(text)
    assert brute_solve(banner.graph).cost == 1
    path = write(tmp_path, "banner.graph", text)
    assert main(["solve", path]) == 0
    assert "cost 1" in capsys.readouterr().out


def test_solve_json_golden(capsys):
    assert main(["solve", str(DATA / "p4.graph"), "--json"]) == 0
    got = capsys.readouterr().out
    assert got == (DATA / "p4_solve.json").read_text()
    payload = json.loads(got)
    assert payload["status"] == "solved"
    assert payload["deletions"] == [["a", "b"]]


def test_solve_malformed_file(tmp_path, capsys):
    path = write(tmp_path, "bad.graph", "v a 1\nv a 1\n")
    assert main(["solve", path]) == 2
    assert "duplicate" in capsys.readouterr().err


def test_solve_missing_file(capsys):
    assert main(["solve", "/nonexistent/x.graph"]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_check_both_ways(tmp_path, capsys):
    p4 = write(tmp_path, "p4.graph", P4_TEXT)
    c4 = write(tmp_path, "c4.graph", C4_TEXT)
    assert main(["check", c4]) == 0
    assert "cograph" in capsys.readouterr().out
    assert main(["check", p4]) == 1
    assert capsys.readouterr().out.startswith("P4: a b c d")


def test_decompose_c4(tmp_path, capsys):
    path = write(tmp_path, "c4.graph", C4_TEXT)
    assert main(["decompose", path]) == 0
    out = capsys.readouterr().out
    assert "kind series" in out
    assert "block a c" in out
    assert "block b d" in out
    assert "quotient 2 vertices 1 edges" in out


def test_factor_golden_values(capsys):
    assert main(["factor", "--vector", "1,1,1"]) == 0
    assert capsys.readouterr().out.strip() == "factor 3.000000"
    assert main(["factor", "--vector", "1,2,2,2"]) == 0
    out = capsys.readouterr().out.strip()
    assert out == "factor 2.302776"


def test_factor_family_calibration(capsys):
    assert main(["factor", "--family", "two-plus-exp", "--epsilon", "0.5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "c 8"
    assert float(lines[1].split()[1]) <= 2.5


def test_witness_on_planted_family(tmp_path, capsys):
    from cographdel.witness import generate_family

    g, _ = generate_family("thin-spider", 4)
    lg = LabeledGraph(g, tuple(f"x{i}" for i in range(g.n)))
    path = write(tmp_path, "spider.graph", serialize_graph(lg))
    assert main(["witness", path, "--c", "4"]) == 0
    out = capsys.readouterr().out
    assert "family thin-spider" in out
    assert "v1 x0" in out


def test_witness_rejects_non_prime(tmp_path, capsys):
    path = write(tmp_path, "c4.graph", C4_TEXT)
    assert main(["witness", path]) == 2
    assert "prime" in capsys.readouterr().err


def test_verify_accepts_solve_output(tmp_path, capsys):
    graph = write(tmp_path, "p4.graph", P4_TEXT)
    assert main(["solve", graph, "--json"]) == 0
    solution = write(tmp_path, "sol.json", capsys.readouterr().out)
    assert main(["verify", graph, solution]) == 0
    assert "ok cost 1" in capsys.readouterr().out


def test_verify_rejects_non_edge(tmp_path, capsys):
    graph = write(tmp_path, "p4.graph", P4_TEXT)
    solution = write(
        tmp_path, "sol.json", json.dumps({"cost": 1, "deletions": [["a", "c"]]})
    )
    assert main(["verify", graph, solution]) == 1
    assert "not an edge" in capsys.readouterr().out


def test_verify_rejects_wrong_cost(tmp_path, capsys):
    graph = write(tmp_path, "p4.graph", P4_TEXT)
    solution = write(
        tmp_path, "sol.json", json.dumps({"cost": 2, "deletions": [["a", "b"]]})
    )
    assert main(["verify", graph, solution]) == 1
    assert "stated cost 2" in capsys.readouterr().out


def test_verify_rejects_surviving_p4(tmp_path, capsys):
    text = "e a b\ne b c\ne c d\ne d e\n"
    graph = write(tmp_path, "p5.graph", text)
    solution = write(
        tmp_path, "sol.json", json.dumps({"cost": 1, "deletions": [["a", "b"]]})
    )
    assert main(["verify", graph, solution]) == 1
    assert "survives" in capsys.readouterr().out


def test_verify_rejects_infeasible_report(tmp_path, capsys):
    graph = write(tmp_path, "p4.graph", P4_TEXT)
    assert main(["solve", graph, "--k", "0", "--json"]) == 1
    solution = write(tmp_path, "sol.json", capsys.readouterr().out)
    assert main(["verify", graph, solution]) == 2
    assert "no deletion set" in capsys.readouterr().err


def strip_times(text):
    rows = list(csv.reader(io.StringIO(text)))
    return [row[:5] + row[6:] for row in rows]


def test_bench_paths_zero_branching(capsys):
    assert main(["bench", "paths:n=30"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["instance", "n", "m", "cost", "nodes", "time", "worst_rule"]
    assert rows[1][0] == "path-n30"
    assert rows[1][3] == "9"
    assert rows[1][6] == ""


def test_bench_random_deterministic(capsys):
    argv = ["bench", "random:n=9,p=0.4,count=2", "--seeds", "1,2", "--C", "6", "--budget", "0"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert strip_times(first) == strip_times(second)
    assert len(strip_times(first)) == 5


def test_bench_planted_family_fires_rules(tmp_path, capsys):
    assert main(["bench", "planted:family=subdivided-star,c=4", "--C", "8"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[1][0] == "planted-subdivided-star-c4"
    assert rows[1][3] == "3"
    assert rows[1][6] != ""


def test_bench_directory(tmp_path, capsys):
    write(tmp_path, "a.graph", P4_TEXT)
    write(tmp_path, "b.graph", C4_TEXT)
    assert main(["bench", str(tmp_path)]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert [r[0] for r in rows[1:]] == ["a.graph", "b.graph"]
    assert rows[1][3] == "1"
    assert rows[2][3] == "0"


def test_bench_csv_to_file(tmp_path):
    out = tmp_path / "bench.csv"
    assert main(["bench", "paths:n=12", "--out", str(out)]) == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert rows[1][3] == "3"


def test_bench_chain_code(capsys):
    assert main(["bench", "chains:code=111111111111", "--C", "8", "--c", "3"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[1][0] == "chain-111111111111"
    assert rows[1][3] == "3"


def test_bench_bad_generator(capsys):
    assert main(["bench", "mystery:n=4"]) == 2
    assert "neither a directory" in capsys.readouterr().err


def test_bench_k_max_infeasible(capsys):
    assert main(["bench", "paths:n=30", "--k-max", "2"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[1][3] == "inf"
