import io as _io
import json

import numpy as np
import pytest

from srediag import gallery as G
from srediag import io
from srediag.cli import run
from srediag.uncertainty import PolyhedralRegion


def cli(*argv):
    buf = _io.StringIO()
    code = run(list(argv), out=buf)
    return code, buf.getvalue()


def cli_json(*argv):
    code, text = cli(*argv, "--json")
    return code, json.loads(text)


# -- documents ----------------------------------------------------------------

def test_round_trip_preserves_numbers():
    for game in G.default_catalog():
        text = io.dumps(game)
        back = io.loads(text).game
        for a, b in zip(game.A, back.A):
            np.testing.assert_array_equal(a, b)
        for a, b in zip(game.b, back.b):
            np.testing.assert_array_equal(a, b)
        assert game.states.keys() == back.states.keys()
        for k in game.states:
            np.testing.assert_array_equal(game.states[k], back.states[k])
        assert io.dumps(back) == text


def test_round_trip_with_regions(platform):
    region = PolyhedralRegion([[1.0, 0, 0, 0], [0, 0, -1.0, 0]], [0.6, -0.1])
    text = io.dumps(platform, {"r": region})
    doc = io.loads(text)
    np.testing.assert_array_equal(doc.regions["r"].coeffs, region.coeffs)
    np.testing.assert_array_equal(doc.regions["r"].rhs, region.rhs)


def test_per_block_states_are_accepted(platform):
    d = io.game_to_dict(platform)
    d["states"] = {"split": [[0.5, 0.5], [0.25, 0.75]]}
    doc = io.game_from_dict(d)
    np.testing.assert_array_equal(doc.game.states["split"], [0.5, 0.5, 0.25, 0.75])


@pytest.mark.parametrize("mutate, fragment", [
    (lambda d: d["populations"][0].update(mass=0), "mass must be positive"),
    (lambda d: d["populations"][0].pop("b"), "populations[0].b"),
    (lambda d: d["populations"][0].update(A=[[1, 2]]), "A has shape"),
    (lambda d: d["populations"][0].update(strategies=["H", 3]), "strategies"),
    (lambda d: d.update(states={"bad": [0.9, 0.9]}), "named state 'bad'"),
    (lambda d: d.update(regions={"r": [{"coeffs": [1], "rhs": 0}]}), "regions.r[0].coeffs"),
])
def test_document_errors_name_the_field(hd, mutate, fragment):
    d = io.game_to_dict(hd)
    mutate(d)
    with pytest.raises(io.DocumentError) as exc:
        io.game_from_dict(d)
    assert fragment in str(exc.value)


def test_json_syntax_error_reports_position():
    with pytest.raises(io.DocumentError, match="line 1, column"):
        io.loads("{ nope")


# -- check ----------------------------------------------------------------------

def test_check_hawk_dove_exposed():
    code, rep = cli_json("check", "--gallery", "hawk_dove", "-p", "V=2", "-p", "C=4", "--state", "mixed")
    assert code == 10
    res = rep["result"]
    assert res["is_nash"] and not res["is_sre"]
    dove = [c for c in res["certificates"] if c["strategy"] == "D"][0]
    assert dove["direction"][0] > 0
    assert dove["witnessed_gap"] > 0


def test_check_platform_xa_passes():
    code, rep = cli_json("check", "--gallery", "platform", "--state", "xA")
    assert code == 0 and rep["result"]["is_sre"]


def test_check_not_nash_and_coordinate_state():
    code, _ = cli("check", "--gallery", "coordination", "-p", "n=2", "--state", "0.7,0.3")
    assert code == 11


def test_check_malformed_mass(tmp_path, hd):
    d = io.game_to_dict(hd)
    d["populations"][0]["mass"] = 0
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d))
    assert cli("check", str(path), "--state", "0.5,0.5")[0] == 2


def test_check_input_errors(tmp_path):
    assert cli("check", "--gallery", "rps", "--state", "nope")[0] == 2
    assert cli("check", "--gallery", "rps", "--state", "0.5,0.5,0.5")[0] == 2
    assert cli("check", "--gallery", "rps")[0] == 2
    assert cli("check", str(tmp_path / "missing.json"), "--state", "x")[0] == 2
    assert cli("check", "--gallery", "nope")[0] == 2
    assert cli("check", "--gallery", "rps", "--state", "barycenter", "--threads", "0")[0] == 2


def test_check_from_file(tmp_path, platform):
    path = tmp_path / "platform.json"
    path.write_text(io.dumps(platform))
    code, rep = cli_json("check", str(path), "--state", "xo")
    assert code == 10
    assert rep["command"]["game"] == "platform"


# -- nash -------------------------------------------------------------------

def test_nash_coordination_classify():
    code, rep = cli_json("nash", "--gallery", "coordination", "-p", "n=3", "--classify")
    assert code == 0
    assert len(rep["result"]["candidates"]) == 7
    assert sorted(map(tuple, rep["result"]["sre"])) == sorted(map(tuple, np.eye(3).tolist()))


def test_nash_rps_classify():
    code, rep = cli_json("nash", "--gallery", "rps", "--classify")
    assert len(rep["result"]["candidates"]) == 1 and rep["result"]["sre"] == []


def test_nash_standards_lambda_two():
    code, rep = cli_json("nash", "--gallery", "standards", "-p", "q=3,2,0", "-p", "lam=2", "--classify")
    assert sorted(map(tuple, rep["result"]["sre"])) == [(0.0, 1.0, 0.0), (1.0, 0.0, 0.0)]


def test_nash_support_cap(tmp_path):
    from srediag.game import PopulationGame, PopulationSpec
    pops = [PopulationSpec(f"p{k}", 1.0, [f"s{j}" for j in range(9)]) for k in range(2)]
    rng = np.random.default_rng(0)
    g = PopulationGame(pops, [rng.normal(size=(9, 18)) for _ in pops], [np.zeros(9)] * 2)
    path = tmp_path / "big.json"
    path.write_text(io.dumps(g))
    assert cli("nash", str(path))[0] == 3


# -- uvalid -----------------------------------------------------------------

def test_uvalid_hawk_dove_box():
    code, rep = cli_json("uvalid", "--gallery", "hawk_dove", "--state", "mixed", "--box", "0.05")
    assert code == 10
    worst = rep["result"]["worst"]
    assert worst["strategy"] == "D" and worst["value"] == pytest.approx(0.05)


def test_uvalid_boundary_shrink():
    code, rep = cli_json("uvalid", "--gallery", "boundary_example", "--state", "e1", "--shrink", "0.5", "8")
    assert code == 0
    assert all(lv["valid"] for lv in rep["result"]["levels"])


def test_uvalid_platform_box():
    code, rep = cli_json("uvalid", "--gallery", "platform", "--state", "xo", "--box", "0.01")
    assert code == 10
    assert rep["result"]["worst"]["strategy"] in ("A", "B")


def test_uvalid_named_region(tmp_path, hd):
    region = PolyhedralRegion([[1.0, 0.0]], [0.5])  # y_H <= 1/2 only lowers the Hawk share
    path = tmp_path / "hd.json"
    path.write_text(io.dumps(hd, {"low": region}))
    code, rep = cli_json("uvalid", str(path), "--state", "mixed", "--region", "low")
    assert code == 10 and rep["result"]["worst"]["strategy"] == "H"
    regions = tmp_path / "regions.json"
    regions.write_text(json.dumps({"regions": {"high": [{"coeffs": [-1.0, 0.0], "rhs": -0.5}]}}))
    code, rep = cli_json("uvalid", "--gallery", "hawk_dove", "--state", "mixed", "--region-file", str(regions))
    assert code == 10 and rep["result"]["worst"]["strategy"] == "D"


def test_uvalid_needs_one_region_mode():
    assert cli("uvalid", "--gallery", "hawk_dove", "--state", "mixed")[0] == 2
    assert cli("uvalid", "--gallery", "hawk_dove", "--state", "mixed", "--box", "0.1",
               "--shrink", "0.5", "3")[0] == 2


# -- oracle -----------------------------------------------------------------------

def test_oracle_examples():
    code, rep = cli_json("oracle", "--gallery", "rps", "--state", "barycenter", "--seed", "7")
    assert code == 0 and all(e["evidence"] == "exposed" for e in rep["result"]["evidence"])
    code, rep = cli_json("oracle", "--gallery", "boundary_example", "--state", "e1", "--seed", "7")
    assert code == 0
    assert rep["result"]["evidence"][1]["evidence"] == "no_positive_found"
    code, rep = cli_json("oracle", "--gallery", "identity_example", "--state", "mix", "--seed", "7")
    assert code == 0
    third = rep["result"]["evidence"][2]
    assert third["lp_kind"] == "strictly_worse" and third["evidence"] == "no_positive_found"


# -- gallery and output ------------------------------------------------------------

def test_gallery_listing_and_dump():
    code, text = cli("gallery")
    assert code == 0 and "platform" in text.split()
    code, text = cli("gallery", "standards", "-p", "q=3,2,0", "-p", "lam=2")
    assert code == 0
    assert io.loads(text).game.b[0].tolist() == [3.0, 2.0, 0.0]


def test_human_output_and_report_file(tmp_path):
    out = tmp_path / "rep.json"
    code, text = cli("check", "--gallery", "rps", "--state", "barycenter", "-o", str(out))
    assert code == 10
    assert "Nash but exposed" in text
    assert json.loads(out.read_text())["result"]["is_sre"] is False


def test_reports_are_byte_identical():
    args = ("oracle", "--gallery", "platform", "--state", "xo", "--seed", "5", "--json")
    assert cli(*args) == cli(*args)
    args = ("check", "--gallery", "standards", "--state", "e2", "--json", "--threads", "3")
    # thread count does not change the report
    assert cli(*args) == cli(*args[:-2])
