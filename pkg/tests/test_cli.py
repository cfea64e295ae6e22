import json
import subprocess
import sys

import pytest

from dyndeg.cli import main, run_job

CREMONA = "[x1*x2 : x0*x2 : x0*x1]"


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cremona_degrees_job(capsys, tmp_path):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"kind": "degrees", "payload": {"space": 2, "map": CREMONA},
                               "options": {"n_max": 6, "seed": 1}}))
    code, out, _ = call(capsys, "degrees", str(job))
    rep = json.loads(out)
    assert code == 0 and rep["seed"] == 1
    res = rep["result"]
    assert [r["multidegree"][0][0] for r in res["sequence"]] == [1, 2, 1, 2, 1, 2, 1]
    assert res["lambda"]["1"]["best"]["exact"] == "1"
    assert res["stability"]["first_instability"] == 2
    assert res["stability"]["common_factor"] == "x0*x1*x2"


def test_monomial_job_flags(capsys):
    code, out, _ = call(capsys, "monomial", "--matrix", "[[2,1],[1,1]]")
    lam = json.loads(out)["result"]["lambda"]
    assert code == 0
    assert [v["flag"] for v in lam] == ["EXACT", "CERTIFIED_INTERVAL", "EXACT"]
    assert lam[1]["lo"] <= 2.618033988749895 <= lam[1]["hi"]


def test_every_number_in_a_bound_is_flagged(capsys):
    _, out, _ = call(capsys, "degrees", "--space", "1,1", "--map",
                     "[x0^2 : x1^2] ; [x0*y0^2 : x1*y1^2]", "--n-max", "4")
    for p, entry in json.loads(out)["result"]["lambda"].items():
        assert entry["best"]["flag"] in ("EXACT", "CERTIFIED_INTERVAL")
        assert all(b["flag"] in ("EXACT", "CERTIFIED_INTERVAL") for b in entry["upper_bounds"])
        assert entry["ratio_estimate"]["flag"] == "HEURISTIC"


def test_malformed_polynomial_reports_position(capsys):
    code, out, err = call(capsys, "degrees", "--space", "2", "--map", "[x1*x2 : x0*x2 : x0*+x1]")
    assert code == 2 and out == ""
    assert "ParseError" in err and "line 1, column 21" in err


def test_bad_job_file(capsys, tmp_path):
    job = tmp_path / "bad.json"
    job.write_text('{"space": 2,\n "map": }')
    code, _, err = call(capsys, "degrees", str(job))
    assert code == 2 and "line 2" in err


def test_property_failure_exit_code(capsys):
    code, out, _ = call(capsys, "lattice", "--action", '{"1": [[2, 0], [0, 2]]}', "--lambda2", "1")
    assert code == 1
    assert json.loads(out)["result"]["simplicity"]["verdict"] == "FAIL"


def test_resource_truncation_exit_code(capsys):
    code, out, _ = call(capsys, "degrees", "--space", "2", "--map",
                        "[x1*x2 : x1^2 + 2*x0*x2 : x2^2]", "--n-max", "8", "--max-terms", "40")
    assert code == 3 and json.loads(out)["result"]["truncated"]


def test_unknown_suite(capsys):
    code, _, err = call(capsys, "suite", "")
    assert code == 2 and "UnknownSuite" in err


def test_kind_mismatch_is_an_input_error(capsys, tmp_path):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"kind": "monomial", "matrix": [[2]]}))
    assert call(capsys, "degrees", str(job))[0] == 2


def test_reports_are_byte_identical(capsys, tmp_path):
    argv = ["relative", "--space", "1,1", "--map", "[x0^2 : x1^2] ; [x1*y0^2 + x0*y1^2 : x1*y1^2]",
            "--split", "1", "--n-max", "4", "--seed", "9"]
    outs = []
    for i in range(2):
        target = tmp_path / f"r{i}.json"
        assert main(argv + ["--out", str(target)]) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["seed"] == 9


def test_timings_only_on_request(capsys):
    _, plain, _ = call(capsys, "monomial", "--matrix", "[[2]]")
    _, timed, _ = call(capsys, "monomial", "--matrix", "[[2]]", "--timings")
    assert "timings" not in json.loads(plain) and "timings" in json.loads(timed)


def test_table_format(capsys):
    code, out, _ = call(capsys, "degrees", "--space", "2", "--map", CREMONA, "--format", "table")
    assert code == 0 and out.splitlines()[2].startswith("n\tdegree")


def test_product_formula_modes(capsys):
    code, out, _ = call(capsys, "check-product-formula", "--matrix", "[[2,0,0],[0,3,0],[0,0,5]]",
                        "--base-dim", "1")
    assert code == 0 and json.loads(out)["result"]["product_formula"]["verdict"] == "PASS"
    code, out, _ = call(capsys, "check-product-formula", "--space", "1,1", "--map",
                        "[x0^2 : x1^2] ; [x0*y0^2 : x1*y1^2]", "--split", "1")
    assert code == 0


def test_lattice_job(capsys):
    code, out, _ = call(capsys, "lattice", "--lattice", '{"blowup": 3}', "--norms", "[[1,-1,0,0]]",
                        "--action", "cremona", "--lambda2", "1")
    res = json.loads(out)["result"]
    assert code == 0 and res["lattice"]["signature"] == [1, 3, 0]
    assert res["norms"][0]["value"] == "2"          # deg(H - E1) with omega = 3H - E1 - E2 - E3
    assert res["simplicity"]["verdict"] == "HYPOTHESIS_NOT_MET"


def test_run_job_dispatches_on_kind():
    report, text, code = run_job({"kind": "property-suite", "name": "hodge-signature", "seed": 4})
    assert code == 0 and report["command"] == "suite" and report["seed"] == 4
    assert text.endswith("\n")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dyndeg", "monomial", "--matrix", "[[1,1],[1,0]]"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and '"command": "monomial"' in proc.stdout


@pytest.mark.parametrize("cmd", ["degrees", "monomial", "lattice", "relative",
                                 "check-product-formula", "suite"])
def test_subcommands_have_help(cmd):
    with pytest.raises(SystemExit) as exc:
        main([cmd, "--help"])
    assert exc.value.code == 0
