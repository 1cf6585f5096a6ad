import json

import pytest

from dendrotensor.cli import main

WORKED_INPUT = json.dumps(
    {
        "levels": [[1, 2, 3, 4], [1, 2, 3], [1]],
        "maps": [{"1": 1, "2": 1, "3": 3, "4": 3}, {"1": 1, "2": 1, "3": "*"}],
    }
)
WORKED_FOREST = "{ℓ2:1[ℓ1:1[ℓ0:1,ℓ0:2],ℓ1:2[]];ℓ1:3[ℓ0:3,ℓ0:4]}"


# -- omega ---------------------------------------------------------------------


def test_omega_worked_example_text(capsys):
    assert main(["omega", WORKED_INPUT]) == 0
    assert capsys.readouterr().out == WORKED_FOREST + "\n"


def test_omega_json_format(capsys):
    assert main(["omega", WORKED_INPUT, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["forest"] == WORKED_FOREST
    assert payload["components"] == 2
    assert payload["edges"] == 8


def test_omega_dot_format(capsys):
    assert main(["omega", WORKED_INPUT, "--format", "dot"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("digraph")
    assert "ℓ1:2" in out


def test_omega_two_colors(capsys):
    assert main(["omega", '{"levels": [[1, 2]], "maps": []}']) == 0
    assert capsys.readouterr().out == "{ℓ0:1;ℓ0:2}\n"


def test_omega_empty(capsys):
    assert main(["omega", '{"levels": [[]], "maps": []}']) == 0
    assert capsys.readouterr().out == "{}\n"


def test_omega_stdin(capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(WORKED_INPUT))
    assert main(["omega", "-"]) == 0
    assert capsys.readouterr().out == WORKED_FOREST + "\n"


def test_omega_from_file(tmp_path, capsys):
    f = tmp_path / "chain.json"
    f.write_text(WORKED_INPUT, encoding="utf-8")
    assert main(["omega", str(f)]) == 0
    assert capsys.readouterr().out == WORKED_FOREST + "\n"


def test_omega_out_writes_file(tmp_path, capsys):
    dest = tmp_path / "result.txt"
    assert main(["omega", WORKED_INPUT, "--out", str(dest)]) == 0
    assert dest.read_text(encoding="utf-8") == WORKED_FOREST + "\n"
    assert capsys.readouterr().out == ""


# -- hom -----------------------------------------------------------------------


def test_hom_edge_probe_counts_edges(capsys):
    assert main(["hom", "e", "r[a[x],b[]]"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == 4
    images = sorted(m["edge_map"]["e"] for m in payload["maps"])
    assert images == ["a", "b", "r", "x"]


def test_hom_text_format(capsys):
    assert main(["hom", "e", "r[a]", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "2" in out.splitlines()[0]


# -- shuffles ------------------------------------------------------------------


def test_shuffles_linear_count(capsys):
    assert main(["shuffles", "a0[a1[a2]]", "b0[b1]"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "count: 3"
    assert len(lines) == 4 and len(set(lines[1:])) == 3


def test_shuffles_json(capsys):
    assert main(["shuffles", "a0[a1]", "b0[b1]", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == 2 and len(payload["shuffles"]) == 2


def test_shuffles_dot_gallery(capsys):
    assert main(["shuffles", "a0[a1]", "b0[b1]", "--format", "dot"]) == 0
    assert "subgraph" in capsys.readouterr().out


def test_shuffles_rejects_shared_names(capsys):
    assert main(["shuffles", "r[a]", "r[b]"]) == 2
    assert "error" in capsys.readouterr().err


# -- tensor-hom ----------------------------------------------------------------


def test_tensor_hom_corolla_pair(capsys):
    assert main(["tensor-hom", "e[f,g]", "p[x,y]", "q"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == 2
    for entry in payload["maps"]:
        assert "witness_shuffle" in entry


# -- free-algebra ----------------------------------------------------------------


def test_free_algebra_terms(capsys):
    code = main(
        [
            "free-algebra",
            "{c[d,e]}",
            "--generators",
            '{"i": "d", "j": "e"}',
            "--inputs",
            '{"i": ["x"], "j": ["y"]}',
            "--output-color",
            "c",
        ]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == len(payload["terms"]) == 1
    assert payload["terms"][0]["indices"] == ["i", "j"]


def test_free_algebra_text(capsys):
    code = main(
        [
            "free-algebra",
            "{c[d,e]}",
            "--generators",
            '{"i": "d", "j": "e"}',
            "--inputs",
            '{"i": ["x"], "j": ["y"]}',
            "--output-color",
            "c",
            "--format",
            "text",
        ]
    )
    assert code == 0
    assert "i" in capsys.readouterr().out


# -- check ------------------------------------------------------------------------


def test_check_single_suite_passes(tmp_path, capsys):
    dest = tmp_path / "report.json"
    code = main(
        [
            "check",
            "functoriality",
            "--seed",
            "5",
            "--instances",
            "5",
            "--out",
            str(dest),
        ]
    )
    assert code == 0
    report = json.loads(dest.read_text(encoding="utf-8"))
    assert report["failures"] == 0
    assert report["config"]["seed"] == 5
    assert [s["suite"] for s in report["suites"]] == ["functoriality"]
    err = capsys.readouterr().err
    assert "functoriality" in err and "total: 0 failures" in err


def test_check_report_is_deterministic(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        dest = tmp_path / name
        assert (
            main(
                [
                    "check",
                    "shuffles",
                    "--seed",
                    "11",
                    "--instances",
                    "8",
                    "--out",
                    str(dest),
                ]
            )
            == 0
        )
        outs.append(dest.read_bytes())
    assert outs[0] == outs[1]


def test_check_exit_one_on_failures(monkeypatch, capsys):
    import dendrotensor.cli as cli_mod

    def fake_run_check(name, cfg):
        return {
            "command": f"check {name}",
            "config": {"seed": cfg.seed},
            "suites": [
                {
                    "suite": "functoriality",
                    "params": {},
                    "records": [
                        {
                            "check": "identity",
                            "instance": 0,
                            "status": "fail",
                            "witness": {},
                        }
                    ],
                    "failures": 1,
                }
            ],
            "failures": 1,
        }

    monkeypatch.setattr(cli_mod, "run_check", fake_run_check)
    assert main(["check", "functoriality"]) == 1
    assert "1 failures" in capsys.readouterr().err


# -- exit codes ---------------------------------------------------------------------


def test_unknown_subcommand_is_usage_error():
    assert main(["frobnicate"]) == 2


def test_no_arguments_is_usage_error():
    assert main([]) == 2


def test_malformed_tree_is_error(capsys):
    assert main(["hom", "e", "r[a"]) == 2
    assert "error" in capsys.readouterr().err


def test_malformed_json_is_error(capsys):
    assert main(["omega", '{"levels": [[1]]']) == 2
    assert "error" in capsys.readouterr().err


def test_bad_suite_name_is_usage_error():
    assert main(["check", "nonsense"]) == 2
