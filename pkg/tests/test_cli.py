import json
import subprocess
import sys
from pathlib import Path

from subalg.cli import (
    Session,
    condition_from_json,
    functional_to_derivation_json,
    main,
)
from subalg.qn import CheckItem, Report
from subalg.spectrum import derivation_space

SESSIONS = Path(__file__).resolve().parent.parent / "sessions"

A1 = str(SESSIONS / "a1.json")
A2 = str(SESSIONS / "a2.json")
A3 = str(SESSIONS / "a3.json")
A4 = str(SESSIONS / "a4.json")
PLANE = str(SESSIONS / "qn-two-points.json")

A1_BUILD_TEXT = """\
level 1: derivation at (0): Functional[1*d1@(0)]
  basis: x1^2, x1^3
level 2: derivation at (0): Functional[1*d1^2@(0)]
  basis: x1^3, x1^4, x1^5
codimension: 2
missing: x1, x1^2
conductor: 3
"""


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- golden text output -----------------------------------------------


def test_build_text_golden(capsys):
    code, out, err = run(capsys, "build", A1)
    assert code == 0
    assert err == ""
    assert out == A1_BUILD_TEXT


def test_member_negative_exits_zero(capsys):
    code, out, _ = run(capsys, "member", A1, "x1")
    assert code == 0
    assert out == "member: false\nremainder: x1\n"


def test_member_positive(capsys):
    code, out, _ = run(capsys, "member", A2, "x1^3 - x1")
    assert code == 0
    assert out == "member: true\nremainder: 0\n"


def test_codim_text(capsys):
    code, out, _ = run(capsys, "codim", A1)
    assert code == 0
    assert out == "codimension: 2\nmissing: x1, x1^2\nconductor: 3\n"


def test_spectrum_text(capsys):
    code, out, _ = run(capsys, "spectrum", A4)
    assert code == 0
    assert out == (
        "points: (1,-3,2), (1,0,-1), (3,2,5)\n"
        "cluster 1: (1,-3,2), (3,2,5)\n"
        "cluster 2: (1,0,-1)\n"
    )


def test_verify_main_text(capsys):
    code, out, _ = run(capsys, "verify-main", A2, "1")
    assert code == 0
    assert out == (
        "check ideal_containment: pass\n"
        "check derivation_vs_cotangent: pass\n"
        "check leibniz_random_pairs: pass\n"
        "all checks passed\n"
    )


def test_qn_subcommand(capsys):
    code, out, _ = run(capsys, "qn", PLANE, "--points", "0,0;0,1", "--N", "2")
    assert code == 0
    assert out.endswith("all checks passed\n")
    assert out.count(": pass") == 8


def test_output_is_deterministic(capsys):
    first = run(capsys, "build", A4)
    second = run(capsys, "build", A4)
    assert first == second


# -- machine output ---------------------------------------------------


def test_build_json(capsys):
    code, out, _ = run(capsys, "build", A1, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["codimension"] == 2
    assert payload["missing"] == ["x1", "x1^2"]
    assert payload["conductor"] == 3
    assert [lvl["codimension"] for lvl in payload["levels"]] == [1, 2]
    assert payload["levels"][0]["basis"] == ["x1^2", "x1^3"]


def test_member_json(capsys):
    code, out, _ = run(capsys, "member", A2, "x1^3 - x1", "--json")
    assert code == 0
    assert json.loads(out) == {"member": True, "remainder": "0"}


def test_spectrum_json(capsys):
    code, out, _ = run(capsys, "spectrum", A4, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["points"] == [
        ["1", "-3", "2"],
        ["1", "0", "-1"],
        ["3", "2", "5"],
    ]
    assert payload["clusters"] == [
        [["1", "-3", "2"], ["3", "2", "5"]],
        [["1", "0", "-1"]],
    ]


def test_verify_main_json(capsys):
    code, out, _ = run(capsys, "verify-main", A1, "0", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["pass"] is True
    assert [c["check"] for c in payload["checks"]] == [
        "ideal_containment",
        "derivation_vs_cotangent",
        "leibniz_random_pairs",
    ]
    assert all(c["pass"] for c in payload["checks"])


def test_derivations_json_round_trips(capsys):
    code, out, _ = run(capsys, "derivations", A4, "3,2,5", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["dimension"] == 6

    session = Session.load(A4)
    flt = session.build()
    point = tuple(map(int, (3, 2, 5)))
    space = derivation_space(flt, point)
    expected = [functional_to_derivation_json(b, space.point) for b in space.basis]
    assert payload["basis"] == expected
    for obj, functional in zip(payload["basis"], space.basis):
        rebuilt = condition_from_json(obj, 3)
        assert rebuilt.functional == functional


# -- error paths ------------------------------------------------------


def test_missing_file_exits_one(capsys):
    code, out, err = run(capsys, "build", str(SESSIONS / "nope.json"))
    assert code == 1
    assert out == ""
    assert err.startswith("error:")


def test_bad_json_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "build", str(bad))
    assert code == 1
    assert "not valid JSON" in err


def test_bad_polynomial_exits_one(capsys):
    code, _, err = run(capsys, "member", A1, "x1 +")
    assert code == 1
    assert err.startswith("error:")


def test_bad_rational_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            {
                "n": 1,
                "conditions": [
                    {"type": "chardiff", "alpha": ["1/0"], "beta": ["0"]}
                ],
            }
        )
    )
    code, _, err = run(capsys, "build", str(bad))
    assert code == 1
    assert "bad rational" in err


def test_unknown_subcommand_exits_one(capsys):
    code, _, _ = run(capsys, "frobnicate", A1)
    assert code == 1


def test_missing_argument_exits_one(capsys):
    code, _, _ = run(capsys, "member", A1)
    assert code == 1


def test_invalid_filtration_exits_two(tmp_path, capsys):
    bad = tmp_path / "second-order-first.json"
    bad.write_text(
        json.dumps(
            {
                "n": 1,
                "conditions": [
                    {
                        "type": "derivation",
                        "point": ["0"],
                        "terms": [{"partials": [1, 1]}],
                    }
                ],
            }
        )
    )
    code, out, err = run(capsys, "build", str(bad))
    assert code == 2
    assert out == ""
    assert err.startswith("invalid filtration at level 1:")


def test_failed_verification_exits_three(monkeypatch, capsys):
    def broken(flt, alpha, containment_cap=None, probe_smallest=False):
        return Report((CheckItem("demo", False, {"reason": "forced"}),))

    monkeypatch.setattr("subalg.cli.verify_main_theorem", broken)
    code, out, _ = run(capsys, "verify-main", A1, "0")
    assert code == 3
    assert "check demo: FAIL" in out
    assert "1 check(s) failed" in out


# -- options and environment ------------------------------------------


def test_order_override(capsys):
    for order in ("lex", "deglex", "degrevlex"):
        code, out, _ = run(capsys, "codim", A3, "--order", order)
        assert code == 0
        assert "codimension: 2" in out


def test_degree_cap_env_accepted(monkeypatch, capsys):
    monkeypatch.setenv("SUBALG_MAX_DEGREE", "40")
    code, out, _ = run(capsys, "verify-main", A1, "0")
    assert code == 0
    assert "all checks passed" in out


def test_degree_cap_env_rejected(monkeypatch, capsys):
    for value in ("bogus", "0", "-3"):
        monkeypatch.setenv("SUBALG_MAX_DEGREE", value)
        code, _, err = run(capsys, "verify-main", A1, "0")
        assert code == 1
        assert "SUBALG_MAX_DEGREE" in err


# -- the installed entry point ----------------------------------------


def test_module_entry_point_matches_golden():
    proc = subprocess.run(
        [sys.executable, "-m", "subalg.cli", "build", A1],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == A1_BUILD_TEXT
