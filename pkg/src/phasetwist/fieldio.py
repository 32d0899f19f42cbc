"""Reading and writing sampled fields.

Binary ``TFA1`` layout (little endian)::

    b"TFA1" | u32 dim | u32 N | u8 mode | u8 tag | f64 h | N**dim * (f64 re, f64 im)

``mode`` is 0 for euclidean and 1 for symplectic grids, ``tag`` 0 for base
and 1 for phase-space fields; values are row-major.  The JSON form carries the
same fields with ``values`` as a list of ``[re, im]`` pairs.
"""
from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .grid import DualityMode, GridSpec, SampledField, SpaceTag

__all__ = ["MalformedFieldFile", "read_field", "write_field", "field_to_json", "field_from_json"]

MAGIC = b"TFA1"
_HEADER = struct.Struct("<4sIIBBd")
_MODES = (DualityMode.EUCLIDEAN, DualityMode.SYMPLECTIC)
_TAGS = (SpaceTag.BASE, SpaceTag.PHASE)


class MalformedFieldFile(ValueError):
    """The bytes or JSON do not describe a valid field."""


def _build(dim, n, mode, tag, h, values) -> SampledField:
    try:
        grid = GridSpec(int(dim), int(n), float(h), mode)
        return SampledField(grid, values, tag)
    except (ValueError, TypeError) as exc:
        raise MalformedFieldFile(str(exc)) from exc


def encode_field(f: SampledField) -> bytes:
    g = f.grid
    head = _HEADER.pack(MAGIC, g.dim, g.n_per_axis, _MODES.index(g.duality_mode), _TAGS.index(f.space_tag), g.spacing)
    body = np.ascontiguousarray(f.values, dtype="<c16").tobytes()
    return head + body


def decode_field(data: bytes) -> SampledField:
    if len(data) < _HEADER.size:
        raise MalformedFieldFile("file shorter than the TFA1 header")
    magic, dim, n, mode, tag, h = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise MalformedFieldFile(f"bad magic {magic!r}")
    if mode > 1 or tag > 1:
        raise MalformedFieldFile(f"unknown mode/tag byte ({mode}, {tag})")
    if dim == 0 or n == 0 or dim > 8:
        raise MalformedFieldFile(f"unsupported shape dim={dim} N={n}")
    count = n**dim
    body = data[_HEADER.size :]
    if len(body) != 16 * count:
        raise MalformedFieldFile(f"expected {16 * count} value bytes, found {len(body)}")
    values = np.frombuffer(body, dtype="<c16").astype(complex)
    if not np.all(np.isfinite(values)):
        raise MalformedFieldFile("non-finite values")
    return _build(dim, n, _MODES[mode], _TAGS[tag], h, values)


def field_to_json(f: SampledField) -> dict:
    g = f.grid
    flat = f.values.ravel()
    return {
        "format": "TFA1",
        "dim": g.dim,
        "n": g.n_per_axis,
        "duality_mode": g.duality_mode.value,
        "space_tag": f.space_tag.value,
        "h": g.spacing,
        "values": [[float(v.real), float(v.imag)] for v in flat],
    }


def field_from_json(obj) -> SampledField:
    if not isinstance(obj, dict):
        raise MalformedFieldFile("JSON field must be an object")
    try:
        dim, n, h = obj["dim"], obj["n"], obj["h"]
        mode = DualityMode(obj.get("duality_mode", "euclidean"))
        tag = SpaceTag(obj.get("space_tag", "base"))
        raw = np.asarray(obj["values"], dtype=float)
    except (KeyError, ValueError, TypeError) as exc:
        raise MalformedFieldFile(f"bad JSON field: {exc}") from exc
    if raw.ndim != 2 or raw.shape[1] != 2:
        raise MalformedFieldFile("values must be a list of [re, im] pairs")
    return _build(dim, n, mode, tag, h, raw[:, 0] + 1j * raw[:, 1])


def read_field(path) -> SampledField:
    """Load a field from a TFA1 binary or JSON file (detected by content)."""
    data = Path(path).read_bytes()
    if data[:4] == MAGIC:
        return decode_field(data)
    if data.lstrip()[:1] == b"{":
        try:
            obj = json.loads(data.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise MalformedFieldFile(f"invalid JSON: {exc}") from exc
        return field_from_json(obj)
    raise MalformedFieldFile("neither TFA1 binary nor JSON")


def write_field(f: SampledField, path, fmt: str | None = None) -> None:
    """Write ``f``; ``fmt`` is ``"tfa"`` or ``"json"`` (default from the suffix)."""
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix.lower() == ".json" else "tfa"
    if fmt == "json":
        path.write_text(json.dumps(field_to_json(f)))
    elif fmt == "tfa":
        path.write_bytes(encode_field(f))
    else:
        raise ValueError(f"unknown field format {fmt!r}")
