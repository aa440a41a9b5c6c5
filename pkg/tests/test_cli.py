import pytest

from helpers import DATA
from sicvectors.cli import main, write_atomic
from sicvectors.vectors import read_csv


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def dff_outputs(tmp_path):
    out, rep = tmp_path / "v.csv", tmp_path / "r.txt"
    assert run("generate", DATA / "dff.st", "--out", out, "--report", rep) == 0
    return out, rep


def test_generate_dff(dff_outputs):
    out, rep = dff_outputs
    seq = read_csv(out.read_text())
    assert seq.cell_name == "DFF"
    report = rep.read_text()
    assert "vertices: 16" in report
    assert "min: 1" in report


def test_generate_to_stdout(capsys):
    assert run("generate", DATA / "dff.st") == 0
    assert capsys.readouterr().out.startswith("# cell DFF\n")


def test_generate_side_outputs(tmp_path):
    paths = {k: tmp_path / f"x.{k}" for k in ("edges", "dot", "walk", "png")}
    rc = run("generate", DATA / "dff.st", "--out", tmp_path / "v.csv",
             "--dump-graph", paths["edges"], "--dot", paths["dot"],
             "--dump-walk", paths["walk"], "--plot", paths["png"])
    assert rc == 0
    assert len(paths["edges"].read_text().splitlines()) == 32
    assert "digraph" in paths["dot"].read_text()
    assert paths["walk"].read_text().splitlines()[-1].startswith("# length ")
    assert paths["png"].read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_generate_broken_exit_1(capsys):
    assert run("generate", DATA / "broken.st") == 1
    err = capsys.readouterr().err
    assert "line 7" in err and "line 6" in err


def test_generate_missing_file_exit_1(tmp_path):
    assert run("generate", tmp_path / "nope.st") == 1


def test_generate_two_components(tmp_path, capsys):
    assert run("generate", DATA / "twocycles.st", "--scc-policy", "strict", "--out", tmp_path / "v.csv") == 2
    err = capsys.readouterr().err
    assert "component 0" in err and "component 1" in err
    assert not (tmp_path / "v.csv").exists()

    rep = tmp_path / "r.txt"
    assert run("generate", DATA / "twocycles.st", "--scc-policy", "largest-component",
               "--out", tmp_path / "v.csv", "--report", rep) == 0
    assert "[dropped edges] 2" in rep.read_text()


def test_check_dff(capsys):
    assert run("check", DATA / "dff.st") == 0
    assert "8 rows given, 8 rows added by expansion, 16 total" in capsys.readouterr().out


def test_check_complete_table(tmp_path, capsys):
    from sicvectors.state_table import expand, parse, serialize
    full = tmp_path / "full.st"
    full.write_text(serialize(expand(parse((DATA / "dff.st").read_text()))))
    assert run("check", full) == 0
    assert "0 rows added" in capsys.readouterr().out


def test_check_over_width(tmp_path, capsys):
    wide = tmp_path / "wide.st"
    wide.write_text("cell WIDE\n" + "".join(f"input edge C{i}\n" for i in range(12)) + "state Q\ntable\n")
    assert run("check", wide) == 1
    assert "ceiling" in capsys.readouterr().err


def test_replay_round_trip(dff_outputs, tmp_path):
    out, _ = dff_outputs
    assert run("replay", DATA / "dff.st", out, "--report", tmp_path / "rr.txt") == 0
    assert "mismatches: 0" in (tmp_path / "rr.txt").read_text()


def test_replay_flipped_bit(dff_outputs, tmp_path):
    out, _ = dff_outputs
    lines = out.read_text().splitlines()
    # flip the expected Q of step 5 (header is line 3)
    fields = lines[7].split(",")
    assert fields[0] == "5"
    fields[-1] = str(1 - int(fields[-1]))
    lines[7] = ",".join(fields)
    bad = tmp_path / "bad.csv"
    bad.write_text("\n".join(lines) + "\n")
    rep = tmp_path / "rr.txt"
    assert run("replay", DATA / "dff.st", bad, "--report", rep) != 0
    text = rep.read_text()
    assert "mismatches: 1" in text and "step 5: Q" in text


def test_replay_other_cell(dff_outputs, tmp_path, capsys):
    # same pins, opposite clock edge: a negative-edge flip-flop
    negedge = tmp_path / "negedge.st"
    negedge.write_text((DATA / "dff.st").read_text().replace(" R ", " X ").replace(" F ", " R ").replace(" X ", " F "))
    out, _ = dff_outputs
    assert run("replay", negedge, out) == 3
    assert "mismatches:" in capsys.readouterr().out


def test_replay_pin_mismatch_exit_1(dff_outputs):
    out, _ = dff_outputs
    assert run("replay", DATA / "srlatch.st", out) == 1


def test_write_atomic_leaves_no_temp(tmp_path):
    target = tmp_path / "f.txt"
    write_atomic(target, "a\n")
    write_atomic(target, "b\n")
    assert target.read_text() == "b\n"
    assert [p.name for p in tmp_path.iterdir()] == ["f.txt"]


def test_deterministic_outputs(tmp_path):
    for tag in "ab":
        assert run("generate", DATA / "dff_rn.st", "--out", tmp_path / f"{tag}.csv",
                   "--report", tmp_path / f"{tag}.txt") == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()
