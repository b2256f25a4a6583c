"""Built-in domains and the domain-file reader."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .geometry import Domain

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

CATALOG = {
    "unit_interval": "the interval (0, 1)",
    "unit_square": "the square (0, 1)^2",
    "rectangle": "rectangle(a, b): (0, a) x (0, b)",
    "regular_polygon": "regular_polygon(k): k-gon inscribed in the unit circle",
    "sector": "sector(beta, max_chord): {r e^{i theta}: 0<r<1, 0<theta<beta}",
    "l_shape": "unit square minus the quadrant [1/2, 1]^2",
    "koch": "koch(level): Koch snowflake prefractal on a unit-circumradius triangle",
    "disc": "disc(k_vertices): regular k-gon approximating the unit disc (default 256)",
}


def list_builtin_domains() -> dict:
    """Names and one-line descriptions of the built-in domains."""
    return dict(CATALOG)


def unit_interval():
    return Domain.interval(1.0, name="unit_interval")


def unit_square():
    return rectangle(1.0, 1.0, name="unit_square")


def rectangle(a, b, name=""):
    return Domain.polygon([(0, 0), (a, 0), (a, b), (0, b)], name=name or f"rectangle_{a:g}x{b:g}")


def regular_polygon(k, radius=1.0, name=""):
    theta = 2 * np.pi * np.arange(k) / k
    v = radius * np.column_stack([np.cos(theta), np.sin(theta)])
    return Domain.polygon(v, name=name or f"regular_polygon_{k}")


def disc(k_vertices=256, radius=1.0):
    # chord sagitta: Hausdorff distance between the k-gon and the circle
    err = radius * (1 - np.cos(np.pi / k_vertices))
    return Domain.polygon(
        regular_polygon(k_vertices, radius).vertices, name=f"disc_{k_vertices}", approx_error=err
    )


def sector(beta, max_chord=0.01):
    """Unit-radius sector with opening ``beta``; the arc uses chords of length ``<= max_chord``."""
    if not 0 < beta <= 2 * np.pi - 0.01:
        raise ValueError(f"sector angle must lie in (0, 2 pi - 0.01], got {beta}")
    n_arc = max(2, int(np.ceil(beta / (2 * np.arcsin(min(1.0, max_chord / 2))))))
    theta = np.linspace(0.0, beta, n_arc + 1)
    arc = np.column_stack([np.cos(theta), np.sin(theta)])
    v = np.vstack([[0.0, 0.0], arc])
    err = 1 - np.cos(beta / n_arc / 2)
    return Domain.polygon(v, name=f"sector_{beta:g}", approx_error=err)


def l_shape():
    v = [(0, 0), (1, 0), (1, 0.5), (0.5, 0.5), (0.5, 1), (0, 1)]
    return Domain.polygon(v, name="l_shape")


def koch_vertices(level):
    """Vertices of the level-``level`` Koch snowflake, CCW, circumradius 1."""
    z = np.exp(2j * np.pi * np.arange(3) / 3 + 0.5j * np.pi)
    rot = np.exp(1j * np.pi / 3)
    for _ in range(level):
        a, b = z, np.roll(z, -1)
        step = (b - a) / 3
        s1, s2 = a + step, a + 2 * step
        # for a CCW boundary the outward bump is the clockwise turn of the middle third
        tip = s1 + step / rot
        z = np.column_stack([a, s1, tip, s2]).ravel()
    return np.column_stack([z.real, z.imag])


def koch(level=4):
    return Domain.polygon(koch_vertices(level), name=f"koch_{level}")


_BUILDERS = {
    "unit_interval": unit_interval,
    "unit_square": unit_square,
    "rectangle": rectangle,
    "regular_polygon": regular_polygon,
    "sector": sector,
    "l_shape": l_shape,
    "koch": koch,
    "disc": disc,
}


def builtin(name, *args, **kwargs) -> Domain:
    """Instantiate a catalog domain by name."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ValueError(f"unknown built-in domain {name!r}") from None
    return builder(*args, **kwargs)


def domain_from_mapping(spec: dict, name="") -> Domain:
    """Build a domain from a parsed domain table.

    Accepted forms::

        kind = "interval"          kind = "polygon"              builtin = "sector"
        interval = [0, 2.0]        vertices = [[0,0],[1,0],...]  params = {beta = 4.0}
    """
    spec = dict(spec)
    if "builtin" in spec:
        params = spec.pop("params", {})
        unknown = set(spec) - {"builtin"}
        if unknown:
            raise ValueError(f"unknown domain keys {sorted(unknown)}")
        return builtin(spec["builtin"], **params)
    kind = spec.pop("kind", None)
    if kind == "interval":
        lo, hi = spec.pop("interval")
        if lo != 0:
            raise ValueError("intervals must start at 0")
        dom = Domain.interval(hi, name=spec.pop("name", name))
    elif kind == "polygon":
        dom = Domain.polygon(spec.pop("vertices"), name=spec.pop("name", name))
    else:
        raise ValueError(f"domain kind must be 'interval' or 'polygon', got {kind!r}")
    if spec:
        raise ValueError(f"unknown domain keys {sorted(spec)}")
    return dom


def load_domain(path) -> Domain:
    """Read a TOML domain file."""
    with open(path, "rb") as fh:
        spec = tomllib.load(fh)
    return domain_from_mapping(spec, name=Path(path).stem)
