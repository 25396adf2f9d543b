import json
import subprocess
import sys

import pytest

from qulab.relation import Entourage, inverse
from qulab.cli import (
    EXIT_INPUT,
    EXIT_OK,
    EXIT_USAGE,
    InputError,
    UsageError,
    cmd_analyze,
    cmd_search,
    cmd_verify,
    main,
    make_report,
    parse_instance,
    parse_machine,
    render_human,
    render_machine,
)

SIER = {"carrier": 2, "topology": {"opens": [[], [1], [0, 1]]}}
EA_MONOID = {"carrier": 2, "topology": {"opens": [[], [1], [0, 1]]}, "monoid": [[0, 1], [1, 1]]}


def run(tmp_path, argv, doc=None, capsys=None):
    if doc is not None:
        f = tmp_path / "inst.json"
        f.write_text(json.dumps(doc))
        argv = [a.replace("@", str(f)) for a in argv]
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_invariants_of_sierpinski():
    body = cmd_analyze(parse_instance(json.dumps(SIER)), "invariants")
    v = body["invariants"]
    assert v["d"] == v["c"] == v["l"] == 1
    assert v["ell_mp(2)"] == v["lstar(1)"]
    assert body["axioms"]["T0"] and not body["axioms"]["T1"]


def test_monoid_report():
    body = cmd_analyze(parse_instance(json.dumps(EA_MONOID)), "monoid")["monoid"]
    assert set(body["minima"]["L"].pairs()) == {(0, 0), (0, 1), (1, 1)}
    assert body["minima"]["quasi_roelcke"] == Entourage.full(2)
    assert body["flags"]["prop61_normally_commuting"] and body["flags"]["prop61_normally_pm_subcommuting"]
    assert not body["failures"]


def test_malformed_opens_names_the_union(tmp_path, capsys):
    doc = {"carrier": 2, "topology": {"opens": [[], [0], [1]]}}
    code, out, err = run(tmp_path, ["analyze", "@", "--what", "invariants"], doc, capsys)
    assert code == EXIT_INPUT and "union" in err and out == ""


@pytest.mark.parametrize("doc,key", [
    ({"topology": {"opens": [[]]}}, "carrier"),
    ({"carrier": 2, "entourages": {"U": [[0, 5]]}}, "entourages.U[0][1]"),
    ({"carrier": 2, "entourages": {"U": []}, "bases": {"B": ["V"]}}, "bases.B[0]"),
    ({"carrier": 2, "monoid": [[0, 1]]}, "monoid"),
    ({"carrier": 2, "colour": 1}, "top level"),
])
def test_input_errors_carry_key_context(doc, key):
    with pytest.raises(InputError, match=key.replace("[", r"\[").replace("]", r"\]")):
        parse_instance(json.dumps(doc))


def test_json_syntax_error_reports_line():
    with pytest.raises(InputError, match="line 2"):
        parse_instance('{"carrier": 2,\n oops}')


def test_selector_errors():
    inst = parse_instance(json.dumps(SIER))
    with pytest.raises(UsageError):
        cmd_analyze(inst, "everything")
    with pytest.raises(UsageError):
        cmd_analyze(inst, "monoid")
    with pytest.raises(UsageError):
        cmd_analyze(parse_instance('{"carrier": 2}'), "invariants")


def test_profile_and_roelcke_selectors():
    doc = {"carrier": 3, "entourages": {"L": [[0, 1]], "R": [[0, 2]]}}
    inst = parse_instance(json.dumps(doc))
    prof = cmd_analyze(inst, "profile(L, R)")["profile"]
    assert not prof["pm_subcommuting"]
    assert prof["witnesses"]["pm_subcommuting"] == ("R^-1 L in L R^-1", (2, 1))
    ro = cmd_analyze(inst, "roelcke(L,R)")["roelcke"]
    # the pair does not +-subcommute, so nothing forces FU to be transitive
    assert ro["theorem33"] is None
    assert inverse(ro["min"]) == ro["min"]


def test_bases_resolve_to_their_intersection():
    doc = {"carrier": 2, "entourages": {"A": [[0, 1]], "B": [[1, 0]]}, "bases": {"AB": ["A", "B"]}}
    out = cmd_analyze(parse_instance(json.dumps(doc)), "classify")["classify"]
    assert out["AB"]["is_uniformity"] and out["AB"]["min"].is_diagonal()


def test_verify_small_runs():
    body, code = cmd_verify(1, "all")
    assert code == EXIT_OK and body["violations"] == 0
    body, code = cmd_verify(3, "all")
    assert code == EXIT_OK and body["violations"] == 0
    body, code = cmd_verify(3, "hodel,prop15,filter_diagram,prop31")
    assert code == EXIT_OK and body["violations"] == 0
    assert set(body["streams"]) == {"topologies", "entourages", "pairs"}
    assert all("skipped" in c for s in body["streams"].values() for c in s["per_law"].values())


def test_verify_range_guard(capsys):
    assert main(["verify", "--points", "99"]) == EXIT_USAGE
    assert main(["verify", "--points", "3", "--laws", "hodle"]) == EXIT_USAGE
    capsys.readouterr()


def test_verify_skips_streams_beyond_their_range():
    body, code = cmd_verify(5, "hodel,prop31")
    assert code == EXIT_OK and "pairs" in body["not_run"] and "topologies" in body["streams"]


def test_search_examples():
    assert cmd_search(3, ["lstar(1)", "ell_mp(2)"])["result"] == "none"
    assert cmd_search(1, ["c", "nw"])["result"] == "none"
    with pytest.raises(UsageError, match="valid names"):
        cmd_search(3, ["c", "dd"])


def test_search_witness_reloads_under_analyze():
    body = cmd_search(3, ["s", "nw"])
    assert body["result"] == "witness"
    inst = parse_instance(json.dumps(body["witness"]["instance"]))
    assert inst.space.encode() == body["witness"]["encoding"]
    values = cmd_analyze(inst, "invariants")["invariants"]
    assert (values["s"], values["nw"]) == (body["witness"]["values"]["s"], body["witness"]["values"]["nw"])


def test_machine_report_round_trips():
    body = cmd_analyze(parse_instance(json.dumps(EA_MONOID)), "monoid")
    rep = make_report("analyze --what monoid", "x", body)
    text = render_machine(rep)
    assert parse_machine(text) == rep
    assert render_machine(parse_machine(text)) == text
    assert len(rep["instance_sha256"]) == 64 and rep["version"]


def test_human_rendering_flattens_nested_keys():
    rep = make_report("analyze", "x", cmd_analyze(parse_instance(json.dumps(SIER)), "invariants"))
    text = render_human(rep)
    assert "invariants.d: 1" in text and "axioms.T1: false" in text


def test_end_to_end_machine_output(tmp_path, capsys):
    code, out, _ = run(tmp_path, ["--format", "machine", "analyze", "@", "--what", "canonical"], SIER, capsys)
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["result"]["canonical"]["pervin"]["min"] == [[0, 1]]
    code2, out2, _ = run(tmp_path, ["analyze", "@", "--what", "canonical", "--format", "machine"], SIER, capsys)
    assert out2 == out


def test_verify_output_is_independent_of_jobs(capsys):
    outs = []
    for jobs in ("1", "4"):
        assert main(["--format", "machine", "verify", "--points", "3", "--laws", "hodel,star", "--jobs", jobs]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_bad_subcommand_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE
    capsys.readouterr()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qulab", "search", "--points", "2", "--pair", "c,d"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "none" in proc.stdout
