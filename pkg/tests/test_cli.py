"""Command-line behaviour and artifact formats, end to end.

CSV/JSON artifacts are compared against the library objects they
serialize; %.17g text round-trips doubles exactly, so most comparisons
are exact equality.  Thread count must never change output bytes.
"""

import json
import re
import subprocess
import sys

import numpy as np
import pytest

from cloewner import cli
from cloewner.backward import DEFAULT_LADDER, trace_curve
from cloewner.cli import main, run_cli
from cloewner.config import TOOL_NAME, TOOL_VERSION
from cloewner.drivers import driver_fingerprint, holder_norm_estimate, load_driver
from cloewner.errors import DomainError, InconsistencyError, NumericalOverflowError
from cloewner.forward import hull_raster
from cloewner.io import emit_svg, format_float
from cloewner.motion import motion_grid

ZERO_SPEC = {"kind": "constant", "c": {"re": 0.0, "im": 0.0}}
CONST_SPEC = {"kind": "constant", "c": {"re": 0.2, "im": 0.1}}
SQRT_SPEC = {"kind": "sqrt", "coef": {"re": 0.3, "im": 0.0}}
HEAVY_SQRT_SPEC = {"kind": "sqrt", "coef": {"re": 2.0, "im": 0.0}}


def _split_csv(text):
    """Return (meta comment lines, header, parsed float rows)."""
    lines = text.splitlines()
    rows = [tuple(float(f) for f in ln.split(",")) for ln in lines[4:]]
    return lines[:3], lines[3], rows


# ---------------------------------------------------------------------------
# number formatting


def test_float_format_round_trips_exactly():
    specials = [np.pi, 1.0 / 3.0, 1e-300, 6.02e23, -0.0, float("inf"), float("-inf")]
    rng = np.random.default_rng(7)
    for x in specials + [float(v) for v in rng.standard_normal(200)]:
        assert float(format_float(x)) == x


def test_svg_input_validation(tmp_path):
    with pytest.raises(DomainError):
        emit_svg(np.array([1j, 2j]))  # no output path
    with pytest.raises(DomainError):
        emit_svg(np.array([], dtype=complex), path=str(tmp_path / "x.svg"))


# ---------------------------------------------------------------------------
# trace


def test_trace_csv_round_trips_library_values(driver_file, tmp_path, capsys):
    path = driver_file(ZERO_SPEC)
    out = tmp_path / "trace.csv"
    assert run_cli(["trace", "--driver", path, "--n", "6", "--out", str(out)]) == 0
    assert capsys.readouterr().out.startswith(
        "trace: 13 samples, max extrapolation error "
    )

    text = out.read_text(encoding="ascii")
    assert text.endswith("\n")
    meta, header, rows = _split_csv(text)
    assert meta[0] == f"# tool: {TOOL_NAME} {TOOL_VERSION}"
    fingerprint = meta[1].removeprefix("# driver: ")
    assert re.fullmatch(r"[0-9a-f]{64}", fingerprint)
    assert fingerprint == driver_fingerprint(load_driver(path))
    config = json.loads(meta[2].removeprefix("# config: "))
    assert config["subcommand"] == "trace"
    assert config["driver"] == path
    assert config["n"] == 6
    assert config["ladder"] == list(DEFAULT_LADDER)
    assert "threads" not in config

    assert header == "t,re,im,err"
    curve = trace_curve(load_driver(path), 6, DEFAULT_LADDER, 1e-9)
    assert len(rows) == 13 == len(curve.params)
    for row, t, z, err in zip(
        rows, curve.params, curve.points, curve.extrapolation_error
    ):
        assert row == (t, z.real, z.imag, err)


def test_trace_svg_is_deterministic_and_vertical(driver_file, tmp_path):
    path = driver_file(ZERO_SPEC)
    blobs = []
    for name in ("a.svg", "b.svg"):
        svg = tmp_path / name
        assert run_cli(["trace", "--driver", path, "--n", "4", "--svg", str(svg)]) == 0
        blobs.append(svg.read_bytes())
    assert blobs[0] == blobs[1]

    text = blobs[0].decode("ascii")
    lines = text.splitlines()
    assert lines[0] == '<?xml version="1.0" encoding="UTF-8"?>'
    comment = json.loads(lines[1].removeprefix("<!-- ").removesuffix(" -->"))
    assert comment["config"]["subcommand"] == "trace"
    assert comment["driver_fingerprint"] == driver_fingerprint(load_driver(path))
    assert 'version="1.1"' in lines[2] and 'width="640"' in lines[2]
    assert text.count("<polyline") == 1

    # the driverless trace lies on the imaginary axis: every x is +-0
    points = re.search(r'points="([^"]*)"', text).group(1)
    assert {pair.split(",")[0] for pair in points.split()} <= {"0", "-0"}


# ---------------------------------------------------------------------------
# hull rasters


def test_hull_csv_matches_raster_and_ignores_threads(driver_file, tmp_path, capsys):
    path = driver_file(CONST_SPEC)
    window, nx, ny = (-2.0, 2.0, -2.0, 2.0), 12, 10
    blobs = []
    for threads in (1, 7):
        out = tmp_path / f"hull{threads}.csv"
        svg = tmp_path / f"hull{threads}.svg"
        rc = run_cli(
            [
                "hull", "--driver", path, "--t", "0.5",
                "--grid=-2,2,-2,2,12,10",
                "--threads", str(threads),
                "--out", str(out), "--svg", str(svg),
            ]
        )
        assert rc == 0
        blobs.append((out.read_bytes(), svg.read_bytes()))
    assert blobs[0] == blobs[1]

    raster = hull_raster(load_driver(path), 0.5, window, nx, ny, 1e-6)
    dead = int(np.sum(np.isfinite(raster.lifetimes)))
    assert 0 < dead < nx * ny
    assert f"hull: {dead} of 120 pixels die by t=0.5" in capsys.readouterr().out

    text = blobs[0][0].decode("ascii")
    _, header, rows = _split_csv(text)
    assert header == "x,y,lifetime"
    assert len(rows) == nx * ny
    assert ",inf" in text  # survivors keep the literal inf
    xs, ys = raster.x_centers(), raster.y_centers()
    k = 0
    for ix in range(nx):
        for iy in range(ny):
            assert rows[k] == (xs[ix], ys[iy], raster.lifetimes[ix, iy])
            k += 1


def test_right_hull_command_runs(driver_file, tmp_path, capsys):
    path = driver_file(ZERO_SPEC)
    out = tmp_path / "right.csv"
    rc = run_cli(
        [
            "right-hull", "--driver", path, "--t", "0.25",
            "--grid=-1.5,1.5,-1.5,1.5,8,8", "--out", str(out),
        ]
    )
    assert rc == 0
    assert capsys.readouterr().out.startswith("right-hull: ")
    _, header, rows = _split_csv(out.read_text(encoding="ascii"))
    assert header == "x,y,lifetime"
    assert len(rows) == 64


def test_hull_svg_far_window_is_all_survivors(driver_file, tmp_path, capsys):
    # window far above the hull: every pixel survives and gets the flat color
    path = driver_file(ZERO_SPEC)
    svg = tmp_path / "hull.svg"
    rc = run_cli(
        [
            "hull", "--driver", path, "--t", "0.0625",
            "--grid=-1,1,1,2,8,4", "--svg", str(svg),
        ]
    )
    assert rc == 0
    assert "hull: 0 of 32 pixels die" in capsys.readouterr().out
    text = svg.read_text(encoding="ascii")
    assert text.count("<rect") == 32
    assert text.count("#e8eef4") == 32
    assert "<polyline" not in text


# ---------------------------------------------------------------------------
# motion


def test_motion_csv_matches_grid(driver_file, tmp_path, capsys):
    path = driver_file(CONST_SPEC)
    out = tmp_path / "motion.csv"
    svg = tmp_path / "motion.svg"
    rc = run_cli(
        [
            "motion", "--driver", path, "--n", "3",
            "--alpha-count", "4", "--alpha-radius", "0.1",
            "--out", str(out), "--svg", str(svg),
        ]
    )
    assert rc == 0
    assert "motion: 5 disk points x 4 times" in capsys.readouterr().out

    _, header, rows = _split_csv(out.read_text(encoding="ascii"))
    assert header == "alpha_re,alpha_im,t,re,im"
    assert len(rows) == 20
    assert rows[0] == (0.0, 0.0, 0.0, 0.0, 0.0)

    alphas = np.concatenate(
        [[0.0 + 0.0j], 0.1 * np.exp(2j * np.pi * np.arange(4) / 4)]
    )
    ts = (np.arange(4) / 3.0) ** 2
    grid = motion_grid(load_driver(path), alphas, ts, DEFAULT_LADDER, 1e-9)
    k = 0
    for i, a in enumerate(alphas):
        for j, t in enumerate(ts):
            v = grid.values[i, j]
            assert rows[k] == (a.real, a.imag, t, v.real, v.imag)
            k += 1

    assert svg.read_text(encoding="ascii").count("<polyline") == 5


def test_motion_rejects_bad_alpha_grid(driver_file, capsys):
    path = driver_file(ZERO_SPEC)
    rc = run_cli(["motion", "--driver", path, "--alpha-count", "0"])
    assert rc == 2
    assert "usage error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# derivative and norm


def test_derivative_json_output(driver_file, tmp_path, capsys):
    path = driver_file(ZERO_SPEC)
    out = tmp_path / "deriv.json"
    rc = run_cli(["derivative", "--driver", path, "--t", "0.25", "--out", str(out)])
    assert rc == 0
    m = re.fullmatch(r"derivative: (\S+) (\S+)i\n", capsys.readouterr().out)
    assert m is not None
    value = complex(float(m.group(1)), float(m.group(2)))
    assert value == pytest.approx(2.0j, abs=1e-9)

    doc = json.loads(out.read_text(encoding="ascii"))
    assert set(doc) == {"meta", "derivative"}
    assert complex(doc["derivative"]["re"], doc["derivative"]["im"]) == value
    assert doc["meta"]["config"]["subcommand"] == "derivative"
    assert doc["meta"]["config"]["steps"] == 4096
    assert doc["meta"]["driver_fingerprint"] == driver_fingerprint(load_driver(path))


def test_norm_json_output(driver_file, tmp_path, capsys):
    path = driver_file(SQRT_SPEC)
    out = tmp_path / "norm.json"
    rc = run_cli(["norm", "--driver", path, "--n", "64", "--out", str(out)])
    assert rc == 0
    est = holder_norm_estimate(load_driver(path), 64)
    assert capsys.readouterr().out == (
        f"norm: lower bound {format_float(est.norm_lower_bound)} "
        f"on {est.pair_count} pairs\n"
    )
    doc = json.loads(out.read_text(encoding="ascii"))
    assert doc["norm_lower_bound"] == est.norm_lower_bound
    assert doc["pair_count"] == est.pair_count
    assert doc["grid_resolution"] == est.grid_resolution
    assert doc["meta"]["config"]["n"] == 64


# ---------------------------------------------------------------------------
# verify


def test_verify_passing_suite_exit_zero(driver_file, tmp_path, capsys):
    path = driver_file(CONST_SPEC)
    docs, texts = [], []
    for threads in (1, 5):
        out = tmp_path / f"verify{threads}.json"
        rc = run_cli(
            [
                "verify", "--driver", path, "--suite", "budget,semigroup",
                "--threads", str(threads), "--out", str(out),
            ]
        )
        assert rc == 0
        texts.append(capsys.readouterr().out)
        docs.append(json.loads(out.read_text(encoding="ascii")))

    lines = texts[0].splitlines()
    assert lines[0].startswith("budget: PASS metric=")
    assert lines[1].startswith("semigroup: PASS metric=")
    assert lines[2] == "verify: 2/2 checks passed"

    for doc in docs:
        assert doc["all_passed"] is True
        for entry in doc["entries"]:
            assert set(entry) == {"check", "metric", "pass", "tolerance", "runtime"}

    def strip_runtimes(doc):
        return {
            "meta": doc["meta"],
            "all_passed": doc["all_passed"],
            "entries": [
                {k: v for k, v in e.items() if k != "runtime"}
                for e in doc["entries"]
            ],
        }

    assert strip_runtimes(docs[0]) == strip_runtimes(docs[1])


def test_verify_failing_suite_exit_one(driver_file, tmp_path, capsys):
    path = driver_file(HEAVY_SQRT_SPEC)  # norm 2.0, far beyond the budget
    out = tmp_path / "verify.json"
    rc = run_cli(["verify", "--driver", path, "--suite", "budget", "--out", str(out)])
    assert rc == 1
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("budget: FAIL")
    assert lines[-1] == "verify: 0/1 checks passed"
    assert json.loads(out.read_text(encoding="ascii"))["all_passed"] is False


# ---------------------------------------------------------------------------
# exit codes


def test_usage_errors_return_two(driver_file, capsys):
    path = driver_file(ZERO_SPEC)
    assert run_cli([]) == 2  # missing subcommand
    assert run_cli(["trace"]) == 2  # missing --driver
    assert run_cli(["hull", "--driver", path, "--grid", "1,2,3"]) == 2
    capsys.readouterr()


def test_driver_file_errors_return_two(driver_file, tmp_path, capsys):
    assert run_cli(["norm", "--driver", str(tmp_path / "nope.json")]) == 2
    assert "driver error:" in capsys.readouterr().err

    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="ascii")
    assert run_cli(["norm", "--driver", str(bad)]) == 2
    assert "driver error:" in capsys.readouterr().err

    unknown = driver_file({"kind": "zigzag"}, "unknown.json")
    assert run_cli(["norm", "--driver", unknown]) == 2
    assert "driver error:" in capsys.readouterr().err


def test_domain_error_from_command_returns_two(driver_file, capsys):
    path = driver_file(ZERO_SPEC)
    assert run_cli(["derivative", "--driver", path, "--t", "0"]) == 2
    assert "usage error:" in capsys.readouterr().err


def test_unwritable_output_returns_two(driver_file, tmp_path, capsys):
    path = driver_file(ZERO_SPEC)
    out = tmp_path / "no_such_dir" / "norm.json"
    assert run_cli(["norm", "--driver", path, "--out", str(out)]) == 2
    assert "i/o error:" in capsys.readouterr().err


def test_overflow_exit_code_mapping(driver_file, monkeypatch, capsys):
    path = driver_file(ZERO_SPEC)

    def boom(d, a):
        raise NumericalOverflowError("synthetic overflow")

    monkeypatch.setitem(cli._DISPATCH, "norm", boom)
    assert run_cli(["norm", "--driver", path]) == 3
    assert "numerical overflow:" in capsys.readouterr().err


def test_inconsistency_exit_code_mapping(driver_file, monkeypatch, capsys):
    path = driver_file(ZERO_SPEC)

    def boom(d, a):
        raise InconsistencyError("synthetic mismatch")

    monkeypatch.setitem(cli._DISPATCH, "norm", boom)
    assert run_cli(["norm", "--driver", path]) == 1
    assert "consistency check failed:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# entry points


def test_main_alias(driver_file, capsys):
    path = driver_file(ZERO_SPEC)
    assert main(["norm", "--driver", path]) == 0
    capsys.readouterr()


def test_module_entry_point(driver_file):
    path = driver_file(ZERO_SPEC)
    proc = subprocess.run(
        [sys.executable, "-m", "cloewner", "norm", "--driver", path],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("norm: lower bound ")
