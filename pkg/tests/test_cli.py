"""CLI: exit codes, determinism, command round trips."""

import os
import subprocess
import sys
from fractions import Fraction as Fr

import pytest

from conftest import bar, gb
from thicket.barcode import Bar, closed, singleton
from thicket.circle import CircleSheaf
from thicket.cli import run_command
from thicket.docio import barcode_doc, circle_doc, parse, plmap_doc, serialize
from thicket.plmaps import abs_map, offset_map


@pytest.fixture
def docs(tmp_path):
    paths = {}
    paths["F"] = tmp_path / "F.bc"
    paths["F"].write_text(serialize(barcode_doc(gb(bar(closed(0, 2))))))
    paths["G"] = tmp_path / "G.bc"
    paths["G"].write_text(serialize(barcode_doc(gb(bar(singleton(1))))))
    paths["C"] = tmp_path / "C.circ"
    paths["C"].write_text(serialize(circle_doc(
        CircleSheaf(4, [Bar(closed(0, 1), 0)]))))
    paths["pl"] = tmp_path / "abs.pl"
    paths["pl"].write_text(serialize(plmap_doc(abs_map())))
    paths["pl2"] = tmp_path / "abs2.pl"
    paths["pl2"].write_text(serialize(plmap_doc(offset_map(abs_map(), Fr(1, 8)))))
    paths["tmp"] = tmp_path
    return paths


class TestCommands:
    def test_thicken(self, docs, capsys):
        assert run_command(["thicken", "--a", "1", str(docs["F"])]) == 0
        out = capsys.readouterr().out
        assert "bar: 0 [-1, 3]" in out

    def test_distance_csv(self, docs, capsys):
        assert run_command(["distance", str(docs["F"]), str(docs["G"])]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "inputs,lower,upper,exact,verdict,micros"
        cells = out[1].split(",")
        assert cells[1] == "1" and cells[2] == "1" and cells[3] == "true"

    def test_fs_double_inverse_identity(self, docs, capsys):
        out1 = docs["tmp"] / "o1.circ"
        out2 = docs["tmp"] / "o2.circ"
        assert run_command(["fs", str(docs["C"]), "--out", str(out1)]) == 0
        assert run_command(["fs", "--inverse", str(out1), "--out", str(out2)]) == 0
        assert parse(out2.read_text()).payload == parse(docs["C"].read_text()).payload

    def test_stability_report(self, docs, capsys):
        assert run_command(["stability", "--f", str(docs["pl"]),
                            "--g", str(docs["pl2"]), str(docs["F"])]) == 0
        out = capsys.readouterr().out
        assert "verdict: pass" in out and "bound: 1/8" in out

    def test_push(self, docs, capsys):
        assert run_command(["push", "--map", str(docs["pl"]), str(docs["F"])]) == 0
        assert "bar:" in capsys.readouterr().out

    def test_plot(self, docs):
        out = docs["tmp"] / "F.svg"
        assert run_command(["plot", str(docs["F"]), "--out", str(out)]) == 0
        assert out.read_text().startswith("<svg")

    def test_extend_line(self, docs, capsys):
        assert run_command(["extend", "--seed", "line", "--a", "5/2",
                            str(docs["F"])]) == 0
        assert "[-5/2, 9/2]" in capsys.readouterr().out

    def test_extend_synthetic_fault(self, docs, capsys):
        seed = docs["tmp"] / "bad.seed"
        seed.write_text("thicket/1\nkind: seed\nalpha: 1\nrestrict: 0 1/2 0\n")
        assert run_command(["extend", "--seed", str(seed), "--a", "2"]) == 1
        assert "coherence: fail" in capsys.readouterr().out


class TestExitCodes:
    def test_usage_error(self):
        assert run_command(["no-such-command"]) == 2

    def test_validation_error(self, docs, tmp_path, capsys):
        badf = tmp_path / "bad.bc"
        badf.write_text("thicket/1\nkind: barcode\nbar: 0 [2, 1]\n")
        assert run_command(["thicken", "--a", "1", str(badf)]) == 1

    def test_missing_file(self, capsys):
        assert run_command(["dual", "/nonexistent/file.bc"]) == 1

    def test_internal_violation(self, docs, monkeypatch, capsys):
        import thicket.cli as climod

        def boom(args):
            raise AssertionError("deliberate fault injection")

        monkeypatch.setattr(climod, "cmd_dual", boom)
        assert run_command(["dual", str(docs["F"])]) == 70


class TestDeterminism:
    def test_suite_byte_identical(self, tmp_path):
        o1, o2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_command(["suite", "semigroup", "--seed", "7",
                            "--cases", "6", "--out", str(o1)]) == 0
        assert run_command(["suite", "semigroup", "--seed", "7",
                            "--cases", "6", "--out", str(o2)]) == 0
        a, b = o1.read_text(), o2.read_text()
        # timing column varies; everything else must match byte for byte
        strip = lambda text: "\n".join(",".join(l.split(",")[:-1])
                                       for l in text.splitlines())
        assert strip(a) == strip(b)

    def test_worker_env_var(self, tmp_path, monkeypatch):
        o1, o2 = tmp_path / "a.csv", tmp_path / "b.csv"
        run_command(["suite", "rgamma", "--seed", "3", "--cases", "4",
                     "--out", str(o1)])
        monkeypatch.setenv("THICKET_WORKERS", "2")
        run_command(["suite", "rgamma", "--seed", "3", "--cases", "4",
                     "--out", str(o2)])
        strip = lambda text: "\n".join(",".join(l.split(",")[:-1])
                                       for l in text.splitlines())
        assert strip(o1.read_text()) == strip(o2.read_text())


class TestInterleaveCommand:
    def test_found_and_not_found(self, docs, capsys):
        assert run_command(["interleave", "--a", "1", str(docs["F"]),
                            str(docs["G"])]) == 0
        assert "found: true" in capsys.readouterr().out
        assert run_command(["interleave", "--a", "1/2",
                            "--strategy", "exhaustive",
                            str(docs["F"]), str(docs["G"])]) == 0
        assert "found: false" in capsys.readouterr().out
