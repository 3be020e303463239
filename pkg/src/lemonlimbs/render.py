"""Escape-time pictures of dynamical and parameter planes, written as binary PPM.

Pixels are computed row block by row block, each block by vectorized numpy
code that depends only on its own coordinates, so the output does not
depend on how blocks are scheduled across threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .angles import Angle, is_periodic, mul_map
from .numerics import CubicMap, RayTrace

ESCAPE_RADIUS = 1e6
MAX_ITER = 512
ROWS_PER_TASK = 8

PALETTES = {
    "default": {
        "interior": (20, 20, 40),
        "basin": (70, 90, 160),
        "exterior_lo": (250, 240, 210),
        "exterior_hi": (40, 60, 110),
        "rays": [(220, 30, 30), (30, 160, 60), (230, 150, 20), (150, 40, 180), (0, 170, 190), (120, 120, 120)],
    },
    "gray": {
        "interior": (0, 0, 0),
        "basin": (60, 60, 60),
        "exterior_lo": (255, 255, 255),
        "exterior_hi": (110, 110, 110),
        "rays": [(255, 0, 0), (0, 140, 0), (0, 0, 255), (200, 120, 0), (140, 0, 140), (0, 140, 140)],
    },
}


@dataclass(frozen=True)
class Window:
    center: complex
    half_width: float

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")

    def pixel_size(self, width: int) -> float:
        return 2 * self.half_width / width

    def columns(self, width: int) -> np.ndarray:
        dx = self.pixel_size(width)
        # symmetric about the center, so a centred window maps a -> -a onto itself exactly
        return self.center.real + (np.arange(width) + 0.5 - width / 2) * dx

    def row_value(self, i: int, width: int, height: int) -> float:
        dx = self.pixel_size(width)
        return self.center.imag + (height / 2 - i - 0.5) * dx

    def to_pixel(self, z: complex, width: int, height: int) -> tuple:
        """Continuous (column, row) coordinates of z, pixel centers at half-integers."""
        dx = self.pixel_size(width)
        col = (z.real - self.center.real) / dx + width / 2
        row = height / 2 - (z.imag - self.center.imag) / dx
        return col, row


@dataclass
class Image:
    width: int
    height: int
    pixels: np.ndarray = field(repr=False)  # (height, width, 3) uint8, row-major, top row first

    @classmethod
    def blank(cls, width: int, height: int) -> "Image":
        return cls(width, height, np.zeros((height, width, 3), dtype=np.uint8))

    def to_bytes(self) -> bytes:
        return f"P6\n{self.width} {self.height}\n255\n".encode("ascii") + self.pixels.tobytes()


def write_ppm(img: Image, path) -> None:
    with open(path, "wb") as fh:
        fh.write(img.to_bytes())


def read_ppm(path) -> Image:
    with open(path, "rb") as fh:
        data = fh.read()
    tokens, pos = [], 0
    while len(tokens) < 4:
        while data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        start = pos
        while not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    pos += 1  # exactly one whitespace byte after maxval
    if tokens[0] != b"P6" or int(tokens[3]) != 255:
        raise ValueError("only binary 8-bit PPM (P6) is supported")
    width, height = int(tokens[1]), int(tokens[2])
    payload = np.frombuffer(data[pos : pos + 3 * width * height], dtype=np.uint8)
    if payload.size != 3 * width * height:
        raise ValueError("truncated PPM payload")
    return Image(width, height, payload.reshape(height, width, 3).copy())


def _escape_iterate(z: np.ndarray, a, b, max_iter: int):
    """Iterate z -> z^3 + 3a z^2 + b on arrays; a and b may be arrays of the same shape.

    Returns (escape step or -1, |z| at escape, final z for bounded points).
    """
    z = z.astype(np.complex128).copy()
    a = np.broadcast_to(np.asarray(a, dtype=np.complex128), z.shape).copy()
    b = np.broadcast_to(np.asarray(b, dtype=np.complex128), z.shape).copy()
    steps = np.full(z.shape, -1, dtype=np.int64)
    modulus = np.zeros(z.shape)
    idx = np.arange(z.size)
    zf, af, bf = z.ravel(), a.ravel(), b.ravel()
    cur, ca, cb = zf.copy(), af.copy(), bf.copy()
    for n in range(max_iter):
        cur = cur * cur * (cur + 3 * ca) + cb
        r = np.abs(cur)
        out = r > ESCAPE_RADIUS
        if out.any():
            steps.ravel()[idx[out]] = n + 1
            modulus.ravel()[idx[out]] = r[out]
            keep = ~out
            idx, cur, ca, cb = idx[keep], cur[keep], ca[keep], cb[keep]
            if idx.size == 0:
                break
    zf[idx] = cur
    return steps, modulus, z


def _shade(steps: np.ndarray, modulus: np.ndarray, palette: dict) -> np.ndarray:
    out = np.empty(steps.shape + (3,), dtype=np.float64)
    escaped = steps >= 0
    # smoothed count: n + 1 - log3(log|z_n| / log R)
    nu = np.zeros(steps.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        nu[escaped] = steps[escaped] + 1 - np.log(np.log(modulus[escaped]) / math.log(ESCAPE_RADIUS)) / math.log(3)
    level = np.clip(np.log1p(nu) / math.log1p(40.0), 0, 1)
    lo = np.array(palette["exterior_lo"], dtype=float)
    hi = np.array(palette["exterior_hi"], dtype=float)
    out[...] = lo * (1 - level[..., None]) + hi * level[..., None]
    return out


def _row_blocks(height: int) -> list:
    return [(i, min(i + ROWS_PER_TASK, height)) for i in range(0, height, ROWS_PER_TASK)]


def _render(width: int, height: int, block_fn, threads: int | None) -> Image:
    img = Image.blank(width, height)

    def work(block):
        i0, i1 = block
        img.pixels[i0:i1] = block_fn(i0, i1)

    blocks = _row_blocks(height)
    if threads == 1:
        for blk in blocks:
            work(blk)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, blocks))
    return img


def _grid_block(w: Window, width: int, height: int, i0: int, i1: int) -> np.ndarray:
    xs = w.columns(width)
    ys = np.array([w.row_value(i, width, height) for i in range(i0, i1)])
    return xs[None, :] + 1j * ys[:, None]


def _to_bytes(colors: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(colors), 0, 255).astype(np.uint8)


def classify_julia(P: CubicMap, z, max_iter: int = MAX_ITER) -> np.ndarray:
    """Escape step of each point (-1 for points that stay bounded)."""
    steps, _, _ = _escape_iterate(np.asarray(z, dtype=np.complex128), P.a, P.b, max_iter)
    return steps


def render_julia(
    P: CubicMap,
    w: Window,
    res: tuple,
    overlays=(),
    palette: str = "default",
    threads: int | None = None,
    max_iter: int = MAX_ITER,
) -> Image:
    width, height = res
    pal = PALETTES[palette]

    def block(i0, i1):
        zs = _grid_block(w, width, height, i0, i1)
        steps, modulus, _ = _escape_iterate(zs, P.a, P.b, max_iter)
        colors = _shade(steps, modulus, pal)
        colors[steps < 0] = pal["interior"]
        return _to_bytes(colors)

    img = _render(width, height, block, threads)
    draw_overlays(img, w, overlays, pal)
    return img


def classify_lemon(a, max_iter: int = MAX_ITER) -> np.ndarray:
    """0 for omega_2 attracted to 0, 1 for other bounded orbits, 2 for escape."""
    a = np.asarray(a, dtype=np.complex128)
    steps, _, z = _escape_iterate(-2 * a, a, 0, max_iter)
    out = np.where(steps >= 0, 2, 1)
    out[(steps < 0) & (np.abs(z) < 1e-6)] = 0
    return out


def render_param_lemon(
    w: Window,
    res: tuple,
    overlays=(),
    palette: str = "default",
    threads: int | None = None,
    max_iter: int = MAX_ITER,
) -> Image:
    """Parameter plane of z^3 + 3a z^2, coloured by the fate of the free critical point -2a."""
    width, height = res
    pal = PALETTES[palette]

    def block(i0, i1):
        a = _grid_block(w, width, height, i0, i1)
        steps, modulus, z = _escape_iterate(-2 * a, a, 0, max_iter)
        colors = _shade(steps, modulus, pal)
        bounded = steps < 0
        colors[bounded] = pal["interior"]
        colors[bounded & (np.abs(z) < 1e-6)] = pal["basin"]
        return _to_bytes(colors)

    img = _render(width, height, block, threads)
    draw_overlays(img, w, overlays, pal)
    return img


def _cycle_key(theta: Angle):
    """Smallest angle of the eventual m_3 cycle of theta, shared by all rays of one cycle."""
    x = theta
    while not is_periodic(3, x):
        x = mul_map(3, x)
    pts, y = [x], mul_map(3, x)
    while y != x:
        pts.append(y)
        y = mul_map(3, y)
    return min(pts)


def _segment_pixels(c0: float, r0: float, c1: float, r1: float):
    """Integer pixels on the segment between two continuous pixel positions (Bresenham)."""
    x0, y0, x1, y1 = int(math.floor(c0)), int(math.floor(r0)), int(math.floor(c1)), int(math.floor(r1))
    dx, dy = abs(x1 - x0), -abs(y1 - y0)
    sx, sy = (1 if x0 < x1 else -1), (1 if y0 < y1 else -1)
    err = dx + dy
    while True:
        yield x0, y0
        if x0 == x1 and y0 == y1:
            return
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy


def draw_overlays(img: Image, w: Window, overlays, palette: dict) -> None:
    keys: dict = {}
    limit = 4 * max(img.width, img.height)
    for trace in overlays:
        if not isinstance(trace, RayTrace) or not trace.points:
            continue
        key = _cycle_key(trace.angle)
        color = palette["rays"][keys.setdefault(key, len(keys)) % len(palette["rays"])]
        pts = [z for z, _ in trace.points]
        if trace.landing is not None:
            pts.append(trace.landing)
        coords = [w.to_pixel(z, img.width, img.height) for z in pts]
        for (c0, r0), (c1, r1) in zip(coords, coords[1:]):
            # segments far outside the frame are skipped whole
            if max(abs(c0), abs(c1), abs(r0), abs(r1)) > limit:
                continue
            for x, y in _segment_pixels(c0, r0, c1, r1):
                if 0 <= x < img.width and 0 <= y < img.height:
                    img.pixels[y, x] = color
