#!/usr/bin/env python3
"""
hdrgamut CLI Tests
==================

The hdr-gamut commands driven through typer's test runner.
"""

import numpy as np
import pytest
import yaml
from PIL import Image
from typer.testing import CliRunner

from hdrgamut.cli.codecs import write_pfm, write_rgbe
from hdrgamut.cli.main import app

runner = CliRunner()


@pytest.fixture
def hdr_file(tmp_path, rng):
    rgb = np.exp(rng.uniform(-3.0, 3.0, (12, 16, 3)))
    rgb[:6, :8, 1:] *= 0.05
    path = tmp_path / "scene.hdr"
    write_rgbe(str(path), rgb)
    return path


@pytest.fixture
def fast_config(tmp_path):
    path = tmp_path / "fast.yaml"
    path.write_text(yaml.safe_dump({"boundary-samples": 64, "decomposition": "none"}))
    return path


def test_map_writes_png(tmp_path, hdr_file, fast_config):
    output = tmp_path / "out.png"
    result = runner.invoke(app, ["map", "-i", str(hdr_file), "-o", str(output), "--config", str(fast_config)])
    assert result.exit_code == 0, result.output
    assert "Out-of-gamut pixels per stage" in result.output
    with Image.open(output) as image:
        assert image.size == (16, 12)
        assert image.mode == "RGB"


def test_map_cusp_with_diagnostics(tmp_path, hdr_file, fast_config):
    output = tmp_path / "out.png"
    diag = tmp_path / "diag"
    result = runner.invoke(app, ["map", "-i", str(hdr_file), "-o", str(output), "--config", str(fast_config),
                                 "--tmo", "cusp", "--clip", "lightness", "--diag", str(diag)])
    assert result.exit_code == 0, result.output
    assert (diag / "tone_curves.txt").exists()
    assert (diag / "stages.txt").exists()


def test_map_rejects_bad_clip(tmp_path, hdr_file):
    result = runner.invoke(app, ["map", "-i", str(hdr_file), "-o", str(tmp_path / "out.png"), "--clip", "nearest"])
    assert result.exit_code == 1
    assert "clip" in result.output


def test_map_missing_input(tmp_path):
    result = runner.invoke(app, ["map", "-i", str(tmp_path / "missing.hdr"), "-o", str(tmp_path / "out.png")])
    assert result.exit_code == 1
    assert not (tmp_path / "out.png").exists()


def test_map_corrupt_input(tmp_path, fast_config):
    path = tmp_path / "broken.hdr"
    path.write_bytes(b"#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y 4 +X 4\n\x80")
    result = runner.invoke(app, ["map", "-i", str(path), "-o", str(tmp_path / "out.png"),
                                 "--config", str(fast_config)])
    assert result.exit_code == 1
    assert "corrupt image" in result.output


def test_map_black_input_succeeds(tmp_path, fast_config):
    path = tmp_path / "black.pfm"
    write_pfm(str(path), np.zeros((4, 4, 3)))
    output = tmp_path / "out.png"
    result = runner.invoke(app, ["map", "-i", str(path), "-o", str(output), "--config", str(fast_config)])
    assert result.exit_code == 0, result.output
    with Image.open(output) as image:
        assert np.all(np.asarray(image) == 0)


def test_map_non_finite_input(tmp_path, fast_config):
    rgb = np.ones((4, 4, 3))
    rgb[2, 1, 1] = np.nan
    path = tmp_path / "nan.pfm"
    write_pfm(str(path), rgb)
    result = runner.invoke(app, ["map", "-i", str(path), "-o", str(tmp_path / "out.png"),
                                 "--config", str(fast_config)])
    assert result.exit_code == 1
    assert "corrupt image" in result.output


@pytest.mark.parametrize("args", [
    ["map", "-o", "out.png"],
    ["map", "-i", "scene.hdr", "-o", "out.png", "--key", "bright"],
    ["boundary", "--out", "x.txt", "--samples", "many"],
    ["map", "-i", "scene.hdr", "-o", "out.png", "--no-such-option"],
])
def test_usage_errors_are_input_errors(args):
    result = runner.invoke(app, args)
    assert result.exit_code == 1


def test_boundary_export(tmp_path):
    out = tmp_path / "srgb.txt"
    result = runner.invoke(app, ["boundary", "--out", str(out), "--samples", "64"])
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    assert len(lines) == 361
    assert lines[0].startswith("#")


def test_boundary_rejects_bad_target(tmp_path):
    result = runner.invoke(app, ["boundary", "--target", str(tmp_path / "missing.txt"), "--out",
                                 str(tmp_path / "x.txt")])
    assert result.exit_code == 1


def test_metrics_on_identical_images(tmp_path, rng):
    pixels = rng.integers(0, 256, (8, 8, 3), dtype=np.uint8)
    ref = tmp_path / "ref.png"
    Image.fromarray(pixels).save(ref)
    hue_map = tmp_path / "map.png"
    result = runner.invoke(app, ["metrics", "--ref", str(ref), "--test", str(ref), "--map", str(hue_map)])
    assert result.exit_code == 0, result.output
    assert "0.0000" in result.output
    assert hue_map.exists()


def test_metrics_size_mismatch(tmp_path):
    ref = tmp_path / "ref.png"
    test = tmp_path / "test.pfm"
    Image.fromarray(np.full((4, 4, 3), 128, dtype=np.uint8)).save(ref)
    write_pfm(str(test), np.ones((4, 5, 3)))
    result = runner.invoke(app, ["metrics", "--ref", str(ref), "--test", str(test)])
    assert result.exit_code == 1


def test_curves_command(tmp_path, hdr_file):
    out = tmp_path / "curves.txt"
    result = runner.invoke(app, ["curves", "-i", str(hdr_file), "--out", str(out), "--hue", "10", "--hue", "200",
                                 "--samples", "32"])
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 2 * 32
    assert {line.split()[0] for line in lines[1:]} == {"10", "200"}
