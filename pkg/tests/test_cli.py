import subprocess
import sys

import numpy as np
import pytest
from conftest import NATURAL
from numpy.testing import assert_array_equal
from PIL import Image

from frtcrypt.cli import UsageError, main, parse_range
from frtcrypt.container import load_container, read_key


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def small_png(tmp_path):
    rng = np.random.default_rng(0)
    path = tmp_path / "small.png"
    Image.fromarray(rng.integers(0, 256, (16, 16, 3), dtype=np.uint8)).save(path)
    return path


def keygen(tmp_path, alg="A42", *extra):
    seeds = {"1": ("5", "6"), "2": ("0.3", "0.7"), "3": ("0.3,0.1", "0.6,0.2")}[alg[2]]
    path = tmp_path / f"{alg}.txt"
    assert run("keygen", "--algorithm", alg, "--seed1", seeds[0], "--seed2", seeds[1],
               "--out", path, *extra) == 0
    return path


# -- ranges ------------------------------------------------------------------

def test_parse_range():
    r = parse_range("0:0.1:1")
    assert len(r) == 11 and r[3] == 0.3 and r[-1] == 1.0
    assert len(parse_range("4.0:0.1:6.0")) == 21
    assert parse_range("0.5") == [0.5]
    assert parse_range("1:-0.5:0") == [1.0, 0.5, 0.0]
    assert parse_range("0:0.3:1") == [0.0, 0.3, 0.6, 0.9]


@pytest.mark.parametrize("text", ["0:0.1", "a:b:c", "0:0:1", "1:0.1:0", "0:0.1:1:2", "nan", ""])
def test_parse_range_errors(text):
    with pytest.raises(UsageError):
        parse_range(text)


# -- keygen ------------------------------------------------------------------

def test_keygen_logistic(tmp_path):
    key = read_key(keygen(tmp_path, "A42", "--orders", "0.5,0.5,0.5,0.5"))
    assert key.algorithm == "A42"
    assert key.mask1.kind == "logistic" and key.mask1.params == {"p": 3.99, "x0": 0.3}


def test_keygen_default_orders(tmp_path):
    assert read_key(keygen(tmp_path, "A33")).orders == (0.5, 0.5, 0.5, 0.5)


def test_keygen_uniform(tmp_path):
    key = read_key(keygen(tmp_path, "A41", "--burn-in", "10"))
    assert key.mask1.params == {"seed": 5} and key.mask1.burn_in == 10


def test_keygen_rejects_out_of_range(tmp_path, capsys):
    code = run("keygen", "--algorithm", "A42", "--seed1", "0.3", "--seed2", "0.7",
               "--p", "4.5", "--out", tmp_path / "k.txt")
    assert code == 1
    assert "0 < p <= 4" in capsys.readouterr().err
    assert not (tmp_path / "k.txt").exists()


@pytest.mark.parametrize("argv", [
    ["--algorithm", "A42", "--seed1", "0.3", "--seed2", "0.3"],
    ["--algorithm", "A41", "--seed1", "0.5", "--seed2", "2"],
    ["--algorithm", "A43", "--seed1", "0.3", "--seed2", "0.6,0.2"],
    ["--algorithm", "A42", "--seed1", "0.3", "--seed2", "0.7", "--orders", "1,2"],
    ["--algorithm", "A99", "--seed1", "1", "--seed2", "2"],
    ["--algorithm", "A42", "--seed1", "0.3"],
])
def test_keygen_usage_errors(tmp_path, argv):
    with_out = argv + ["--out", str(tmp_path / "k.txt")]
    try:
        code = run("keygen", *with_out)
    except SystemExit as exc:
        code = exc.code
    assert code == 1


# -- encrypt / decrypt / mse -------------------------------------------------

def test_encrypt_decrypt_mse(tmp_path, small_png, capsys):
    key = keygen(tmp_path, "A42")
    enc, out, prev = tmp_path / "e.frtc", tmp_path / "d.npy", tmp_path / "p.png"
    assert run("encrypt", "--in", small_png, "--key", key, "--out", enc, "--preview", prev) == 0
    assert load_container(enc).algorithm == "A42" and prev.exists()
    assert run("decrypt", "--in", enc, "--key", key, "--out", out) == 0
    capsys.readouterr()
    assert run("mse", out, small_png) == 0
    header, row = capsys.readouterr().out.splitlines()
    assert header == "mse_r,mse_g,mse_b"
    assert max(float(v) for v in row.split(",")) < 1e-18


def test_decrypt_to_png(tmp_path, small_png):
    key = keygen(tmp_path, "A31")
    enc = tmp_path / "e.frtc"
    run("encrypt", "--in", small_png, "--key", key, "--out", enc, "--threads", "1")
    assert run("decrypt", "--in", enc, "--key", key, "--out", tmp_path / "d.png") == 0
    assert_array_equal(np.asarray(Image.open(tmp_path / "d.png")),
                       np.asarray(Image.open(small_png)))


def test_decrypt_wrong_algorithm(tmp_path, small_png, capsys):
    enc = tmp_path / "e.frtc"
    run("encrypt", "--in", small_png, "--key", keygen(tmp_path, "A31"), "--out", enc)
    assert run("decrypt", "--in", enc, "--key", keygen(tmp_path, "A41"),
               "--out", tmp_path / "d.png") == 2
    assert "A31" in capsys.readouterr().err


def test_mse_between_containers(tmp_path, small_png, capsys):
    enc = tmp_path / "e.frtc"
    run("encrypt", "--in", small_png, "--key", keygen(tmp_path, "A33"), "--out", enc)
    capsys.readouterr()
    assert run("mse", enc, enc) == 0
    assert capsys.readouterr().out.splitlines()[1] == "0,0,0"


def test_mse_dimension_mismatch(tmp_path, small_png):
    other = tmp_path / "o.png"
    Image.new("RGB", (8, 8)).save(other)
    assert run("mse", small_png, other) == 2


def test_encrypt_odd_image_dwt(tmp_path, capsys):
    img = tmp_path / "odd.png"
    Image.new("RGB", (8, 7)).save(img)
    code = run("encrypt", "--in", img, "--key", keygen(tmp_path, "A41"),
               "--out", tmp_path / "e.frtc")
    assert code == 2
    assert "even dimensions" in capsys.readouterr().err


def test_encrypt_missing_key(tmp_path, small_png):
    code = run("encrypt", "--in", small_png, "--key", tmp_path / "none.txt",
               "--out", tmp_path / "e.frtc")
    assert code == 2


def test_encrypt_bad_key_file(tmp_path, small_png):
    key = tmp_path / "k.txt"
    key.write_text("algorithm = A31\n")
    assert run("encrypt", "--in", small_png, "--key", key, "--out", tmp_path / "e.frtc") == 2


def test_encrypt_flat_kaplan_yorke(tmp_path, small_png):
    key = keygen(tmp_path, "A43", "--a", "2")
    assert run("encrypt", "--in", small_png, "--key", key, "--out", tmp_path / "e.frtc") == 3


def test_decrypt_corrupt_container(tmp_path):
    bad = tmp_path / "bad.frtc"
    bad.write_bytes(b"FRTX" + bytes(12))
    assert run("decrypt", "--in", bad, "--key", keygen(tmp_path, "A31"),
               "--out", tmp_path / "d.png") == 2


# -- sweep / bench -----------------------------------------------------------

def test_sweep(tmp_path, small_png):
    key = keygen(tmp_path, "A32")
    out = tmp_path / "s.csv"
    assert run("sweep", "--in", small_png, "--key", key, "--orders", "0:0.1:1", "--out", out) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "order,mse_r,mse_g,mse_b"
    assert len(lines) == 12
    row = lines[6].split(",")
    assert float(row[0]) == 0.5 and float(row[1]) < 1e-18


def test_sweep_long_range(tmp_path, small_png, capsys):
    key = keygen(tmp_path, "A41")
    assert run("sweep", "--in", small_png, "--key", key, "--orders", "4.0:0.1:6.0") == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 22
    assert float(lines[6].split(",")[1]) < 1e-18  # 4.5 is the true order modulo 4


def test_sweep_malformed_range(tmp_path, small_png):
    assert run("sweep", "--in", small_png, "--key", keygen(tmp_path, "A32"),
               "--orders", "0:0.1") == 1


def test_bench(tmp_path, small_png):
    out = tmp_path / "t.csv"
    assert run("bench", "--in", small_png, "--pair", "A32:A42", "--orders", "0.3:0.2:0.5",
               "--repeats", "1", "--out", out) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "order,baseline_s,proposed_s,ratio"
    assert len(lines) == 3
    for line in lines[1:]:
        order, tb, tp, ratio = map(float, line.split(","))
        assert ratio == pytest.approx(tb / tp, rel=1e-12)


def test_bench_with_key_and_cache(tmp_path, small_png, capsys):
    key = keygen(tmp_path, "A33")
    assert run("bench", "--in", small_png, "--pair", "A33:A43", "--key", key,
               "--repeats", "1", "--cache", "cold") == 0
    assert len(capsys.readouterr().out.splitlines()) == 2
    assert run("bench", "--in", small_png, "--pair", "A31:A41", "--key", key,
               "--repeats", "1") == 1


@pytest.mark.parametrize("pair", ["A31:A42", "A41:A31", "A31", "A31:A31"])
def test_bench_bad_pair(small_png, pair):
    assert run("bench", "--in", small_png, "--pair", pair, "--repeats", "1") == 1


# -- mask-dump / selftest / misc ---------------------------------------------

def test_mask_dump(tmp_path):
    key = keygen(tmp_path, "A32")
    s, ph = tmp_path / "s.csv", tmp_path / "ph.csv"
    assert run("mask-dump", "--key", key, "--mask", "2", "--size", "4x6",
               "--source-out", s, "--phase-out", ph) == 0
    grid = np.loadtxt(s, delimiter=",")
    phase = np.loadtxt(ph, delimiter=",")
    assert grid.shape == (4, 6) and phase.shape == (4, 6)
    np.testing.assert_allclose(phase, np.pi / 2 * grid, atol=1e-15)


def test_mask_dump_bad_size(tmp_path):
    key = keygen(tmp_path, "A32")
    assert run("mask-dump", "--key", key, "--size", "ax3", "--source-out", tmp_path / "s") == 1


def test_selftest(capsys):
    assert run("selftest") == 0
    out = capsys.readouterr().out
    groups = {line.split()[0] for line in out.splitlines()[1:-1]}
    assert len(groups) >= 6
    assert "FAIL" not in out


def test_no_command():
    with pytest.raises(SystemExit) as exc:
        run()
    assert exc.value.code == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "frtcrypt", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "frtcrypt" in proc.stdout


@pytest.mark.slow
def test_natural_roundtrip_via_cli(tmp_path, capsys):
    key = keygen(tmp_path, "A41")
    enc, out = tmp_path / "e.frtc", tmp_path / "d.npy"
    assert run("encrypt", "--in", NATURAL, "--key", key, "--out", enc) == 0
    assert run("decrypt", "--in", enc, "--key", key, "--out", out) == 0
    capsys.readouterr()
    run("mse", out, NATURAL)
    assert max(map(float, capsys.readouterr().out.splitlines()[1].split(","))) < 1e-18
