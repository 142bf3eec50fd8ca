"""Binary weight-file format.

Layout (all integers little-endian unsigned 32-bit):

    magic        4 bytes, b"RHPN"
    version      u32, currently 1
    family       u32, 0=A / 1=B / 2=C
    blocks       u32
    first_filters u32
    dense_layers u32
    dense_size   u32
    payload      per parametric layer in network order: weights then bias,
                 32-bit little-endian IEEE-754 scalars, row-major

Round-trips are bit-exact for float32 networks.
"""

import struct

import numpy as np

from .arch import FAMILIES, ArchitectureSpec, build_network
from .engine import Conv3x3Tanh, Dense

MAGIC = b"RHPN"
VERSION = 1


def save_weights(path, spec, net):
    """Write a spec and its network parameters to `path`."""
    family_code = FAMILIES.index(spec.family)
    header = MAGIC + struct.pack(
        "<6I",
        VERSION,
        family_code,
        spec.n_conv_blocks,
        spec.first_filters,
        spec.n_dense_hidden,
        spec.dense_size,
    )
    with open(path, "wb") as fh:
        fh.write(header)
        for layer in net.layers:
            if isinstance(layer, (Conv3x3Tanh, Dense)):
                fh.write(np.ascontiguousarray(layer.weights, dtype="<f4").tobytes())
                fh.write(np.ascontiguousarray(layer.bias, dtype="<f4").tobytes())


def load_weights(path):
    """Read a weight file; returns (spec, network).

    Raises ValueError on bad magic, unsupported version, or a payload whose
    size does not match the declared architecture.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != MAGIC:
        raise ValueError(f"{path}: not a weight file (bad magic)")
    try:
        version, family_code, blocks, f1, n_dense, dense_size = struct.unpack(
            "<6I", blob[4:28]
        )
    except struct.error as exc:
        raise ValueError(f"{path}: truncated header") from exc
    if version != VERSION:
        raise ValueError(f"{path}: unsupported format version {version}")
    if family_code >= len(FAMILIES):
        raise ValueError(f"{path}: unknown family code {family_code}")
    spec = ArchitectureSpec(FAMILIES[family_code], blocks, f1, n_dense, dense_size)

    net = build_network(spec, seed=0, dtype=np.float32, init="zeros")
    payload = np.frombuffer(blob, dtype="<f4", offset=28)
    expected = net.n_params()
    if payload.size != expected:
        raise ValueError(
            f"{path}: payload holds {payload.size} scalars, architecture needs {expected}"
        )
    offset = 0
    for p in net.params():
        p[...] = payload[offset : offset + p.size].reshape(p.shape)
        offset += p.size
    return spec, net
