from __future__ import annotations

import subprocess
import sys

import pytest

from icayley.cli import main, parse_catalog
from icayley.io import load_group


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_writes_table(tmp_path, capsys):
    path = tmp_path / "k.cgt"
    code, out, _ = run(capsys, "build", "famC(K256)", str(path))
    assert code == 0 and "order 768" in out
    assert load_group(path).n == 768


def test_build_u3(capsys):
    code, out, _ = run(capsys, "build", "u(3)")
    assert code == 0 and "order 2048" in out


def test_build_bad_recipe_is_input_error(capsys):
    code, _, err = run(capsys, "build", "cyclic(0)")
    assert code == 2 and "error" in err
    code, _, err = run(capsys, "build", "cyclic(")
    assert code == 2 and "col 8" in err


def test_ceiling_exit_code(capsys):
    code, _, err = run(capsys, "check", "cyclic(300)", "a3-spectral")
    assert code == 3 and "ceiling" in err
    code, _, _ = run(capsys, "build", "su3(2)")
    assert code == 3


def test_analyze(capsys):
    _, out, _ = run(capsys, "analyze", "builtin(H64)")
    assert "special true" in out and "center 4" in out
    _, out, _ = run(capsys, "analyze", "builtin(Q8)")
    assert "nilpotency_class 2" in out and "center 2" in out
    _, out, _ = run(capsys, "analyze", "cyclic(6)")
    assert "abelian true" in out and "exponent 6" in out


def test_analyze_from_file(tmp_path, capsys):
    path = tmp_path / "q.cgt"
    run(capsys, "build", "builtin(Q8)", str(path))
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 0 and "order 8" in out


def test_check_both(capsys):
    code, out, _ = run(capsys, "check", "famA(1,0)", "both")
    assert code == 0 and "agree=true member=true" in out
    code, out, _ = run(capsys, "check", "cyclic(8)", "both")
    assert code == 0 and "agree=true member=false" in out and "X=1,4,7" in out


def test_check_p_failure_has_witness(capsys):
    code, out, _ = run(capsys, "check", "builtin(S4)", "p")
    assert code == 1 and "check property-p fail x=" in out


def test_check_family_and_frobenius(capsys):
    code, out, _ = run(capsys, "check", "famD(U(1),0)", "family", "--tag", "d")
    assert code == 0 and out.splitlines()[-1].startswith("summary ")
    code, out, _ = run(capsys, "check", "builtin(K256)", "frobenius")
    assert code == 0 and "check frobenius pass" in out


def test_fpf_and_aut(tmp_path, capsys):
    path = tmp_path / "phi.aut"
    code, _, _ = run(capsys, "fpf", "builtin(H64)", "--out", str(path))
    assert code == 0 and path.read_text().startswith("aut1 64")
    code, _, _ = run(capsys, "fpf", "builtin(W(2))")
    assert code == 1
    code, out, _ = run(capsys, "aut", "builtin(H16)")
    assert code == 0 and "32" in out


def test_spectrum_single_set(capsys):
    code, out, _ = run(capsys, "spectrum", "cyclic(8)", "--set", "4,1,7")
    assert code == 1 and "integral=false" in out


CATALOG = """\
q8 | builtin(Q8) | order=8 p=true a3=true  # oracle: one involution
d8 | builtin(D8) | p=true  # deliberate mismatch
z6 | cyclic(6) | abelian=true spectral=true  # oracle: circulant
"""


def test_catalog_reports_deliberate_mismatch(tmp_path, capsys):
    path = tmp_path / "cat.txt"
    path.write_text(CATALOG)
    code, out, _ = run(capsys, "catalog", str(path))
    lines = out.splitlines()
    assert code == 1
    assert lines[-1] == "catalog 2/3 pass"
    assert lines[1].startswith("entry d8 fail") and "mismatch=p:true!=false" in lines[1]


def test_catalog_jobs_are_deterministic(tmp_path):
    path = tmp_path / "cat.txt"
    path.write_text(CATALOG * 3)
    outs = []
    for jobs in ("1", "4"):
        proc = subprocess.run([sys.executable, "-m", "icayley.cli", "catalog", str(path), "--jobs", jobs],
                              capture_output=True, text=True, timeout=300)
        outs.append(proc.stdout)
    assert outs[0] == outs[1] and outs[0].endswith("catalog 6/9 pass\n")


def test_bundled_catalog_entries_have_provenance():
    from icayley.cli import default_catalog_text

    entries = parse_catalog(default_catalog_text())
    assert len(entries) >= 30
    assert all(e.provenance for e in entries)


@pytest.mark.slow
def test_bundled_catalog_passes(capsys):
    code, out, _ = run(capsys, "catalog", "--jobs", "4")
    assert code == 0, out
    assert out.splitlines()[-1].endswith("pass")
