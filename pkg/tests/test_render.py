import cmath

import numpy as np
import pytest

from lemonlimbs.numerics import CubicMap, trace_ray
from lemonlimbs.render import (
    Image,
    Window,
    classify_julia,
    classify_lemon,
    read_ppm,
    render_julia,
    render_param_lemon,
    write_ppm,
)

CENTER_1_3 = 0.500869863534904 - 0.25967795067238336j


def test_ppm_round_trip(tmp_path):
    img = Image.blank(5, 3)
    img.pixels[1, 2] = (1, 2, 3)
    img.pixels[2, 4] = (255, 0, 128)
    path = tmp_path / "x.ppm"
    write_ppm(img, path)
    raw = path.read_bytes()
    assert raw.startswith(b"P6\n5 3\n255\n")
    assert len(raw) == len(b"P6\n5 3\n255\n") + 45
    back = read_ppm(path)
    assert (back.width, back.height) == (5, 3)
    assert np.array_equal(back.pixels, img.pixels)


def test_ppm_rejects_other_formats(tmp_path):
    path = tmp_path / "p3.ppm"
    path.write_bytes(b"P3\n1 1\n255\n0 0 0\n")
    with pytest.raises(ValueError):
        read_ppm(path)


def test_window_geometry():
    w = Window(1 + 1j, 2.0)
    xs = w.columns(4)
    assert np.allclose(xs, [-0.5, 0.5, 1.5, 2.5])
    col, row = w.to_pixel(complex(xs[2], w.row_value(1, 4, 4)), 4, 4)
    assert (col, row) == pytest.approx((2.5, 1.5))
    with pytest.raises(ValueError):
        Window(0j, 0.0)


def test_cube_julia_is_the_unit_disc():
    w = Window(0j, 1.5)
    xs = w.columns(101)
    grid = xs[None, :] + 1j * xs[::-1, None]
    steps = classify_julia(CubicMap(0j), grid)
    r = np.abs(grid)
    away = np.abs(r - 1) > 1e-6
    assert np.array_equal((steps < 0)[away], (r <= 1)[away])


def test_cube_julia_has_threefold_symmetry():
    w = Window(0j, 1.3)
    xs = w.columns(80)
    grid = xs[None, :] + 1j * xs[::-1, None]
    rotated = grid * cmath.exp(2j * cmath.pi / 3)
    P = CubicMap(0j)
    a, b = classify_julia(P, grid) < 0, classify_julia(P, rotated) < 0
    assert np.mean(a != b) < 1e-3


def test_lemon_image_symmetric_under_negation():
    img = render_param_lemon(Window(0j, 1.2), (60, 44), threads=2, max_iter=200)
    assert np.array_equal(img.pixels, img.pixels[::-1, ::-1])


def test_lemon_classes():
    assert classify_lemon(np.array([0.1j]))[0] == 0
    assert classify_lemon(np.array([3 + 0j]))[0] == 2
    assert classify_lemon(np.array([CENTER_1_3]))[0] == 1


def test_render_deterministic_across_threads(tmp_path):
    P = CubicMap(CENTER_1_3)
    rays = [trace_ray(P, t, s_end=1e-4) for t in ("1/4", "5/8")]
    res = (70, 50)
    paths = []
    for threads in (1, 3, 8):
        img = render_julia(P, Window(-0.3 + 0j, 1.4), res, rays, threads=threads, max_iter=150)
        path = tmp_path / f"j{threads}.ppm"
        write_ppm(img, path)
        paths.append(path)
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1] == blobs[2]


def test_ray_overlay_is_drawn():
    P = CubicMap(CENTER_1_3)
    w = Window(-0.3 + 0j, 1.4)
    plain = render_julia(P, w, (60, 60), threads=1, max_iter=100)
    drawn = render_julia(P, w, (60, 60), [trace_ray(P, "1/4", s_end=1e-3)], threads=1, max_iter=100)
    assert np.any(plain.pixels != drawn.pixels)
