"""Binary model persistence ("RFTM" format).

Layout, little-endian: magic, version u16, then a tag-length-value block
describing the network configuration and class mapping, then one record
per layer holding its weight tensors (rank u8, dims u32 x rank, f32
data). Round-trips are bit-exact.
"""

from __future__ import annotations

import struct

import numpy as np

from ..frames import ModulationScheme
from .network import LayerSpec, Network, NetworkConfig
from .training import TrainedModel

MODEL_MAGIC = b"RFTM"
MODEL_VERSION = 1

_TAG_INPUT_SHAPE = 0x01
_TAG_N_OUT = 0x02
_TAG_CLASSES = 0x03
_TAG_LAYER_COUNT = 0x04
_LAYER_TAGS = {
    "conv2d": 0x10,
    "maxpool2d": 0x11,
    "dense": 0x12,
    "relu": 0x13,
    "softmax": 0x14,
    "dropout": 0x15,
    "flatten": 0x16,
}
_TAG_TO_KIND = {v: k for k, v in _LAYER_TAGS.items()}
_PAD_CODES = {"valid": 0, "same": 1}
_CODE_PADS = {v: k for k, v in _PAD_CODES.items()}


def _tlv(tag: int, payload: bytes) -> bytes:
    return struct.pack("<BI", tag, len(payload)) + payload


def _layer_payload(spec: LayerSpec) -> bytes:
    if spec.kind == "conv2d":
        return struct.pack(
            "<5IB", spec.filters, *spec.kernel, *spec.stride, _PAD_CODES[spec.padding]
        )
    if spec.kind == "maxpool2d":
        return struct.pack("<4I", *spec.pool, *spec.stride)
    if spec.kind == "dense":
        return struct.pack("<I", spec.units)
    if spec.kind == "dropout":
        return struct.pack("<d", spec.rate)
    return b""


def _decode_layer(tag: int, payload: bytes) -> LayerSpec:
    kind = _TAG_TO_KIND.get(tag)
    if kind is None:
        raise ValueError(f"unknown layer tag 0x{tag:02x}")
    if kind == "conv2d":
        filters, kh, kw, sh, sw, pad = struct.unpack("<5IB", payload)
        return LayerSpec(
            "conv2d", filters=filters, kernel=(kh, kw), stride=(sh, sw), padding=_CODE_PADS[pad]
        )
    if kind == "maxpool2d":
        ph, pw, sh, sw = struct.unpack("<4I", payload)
        return LayerSpec("maxpool2d", pool=(ph, pw), stride=(sh, sw))
    if kind == "dense":
        (units,) = struct.unpack("<I", payload)
        return LayerSpec("dense", units=units)
    if kind == "dropout":
        (rate,) = struct.unpack("<d", payload)
        return LayerSpec("dropout", rate=rate)
    return LayerSpec(kind)


def save_model(model: TrainedModel, path) -> None:
    with open(path, "wb") as fh:
        fh.write(MODEL_MAGIC)
        fh.write(struct.pack("<H", MODEL_VERSION))
        fh.write(_tlv(_TAG_INPUT_SHAPE, struct.pack("<3I", *model.config.input_shape)))
        fh.write(_tlv(_TAG_N_OUT, struct.pack("<I", model.config.n_out)))
        fh.write(
            _tlv(
                _TAG_CLASSES,
                struct.pack("<B", len(model.classes))
                + bytes(int(c) for c in model.classes),
            )
        )
        fh.write(_tlv(_TAG_LAYER_COUNT, struct.pack("<H", len(model.config.layers))))
        for spec in model.config.layers:
            fh.write(_tlv(_LAYER_TAGS[spec.kind], _layer_payload(spec)))
        for layer in model.network.layers:
            tensors = layer.params
            fh.write(struct.pack("<B", len(tensors)))
            for t in tensors:
                fh.write(struct.pack("<B", t.ndim))
                fh.write(struct.pack(f"<{t.ndim}I", *t.shape))
                fh.write(np.ascontiguousarray(t, dtype="<f4").tobytes())


def _read_tlv(fh) -> tuple[int, bytes]:
    header = fh.read(5)
    if len(header) != 5:
        raise ValueError("truncated model file")
    tag, length = struct.unpack("<BI", header)
    return tag, fh.read(length)


def load_model(path) -> TrainedModel:
    with open(path, "rb") as fh:
        if fh.read(4) != MODEL_MAGIC:
            raise ValueError("not a model file (bad magic)")
        (version,) = struct.unpack("<H", fh.read(2))
        if version != MODEL_VERSION:
            raise ValueError(f"unsupported model format version {version}")

        tag, payload = _read_tlv(fh)
        if tag != _TAG_INPUT_SHAPE:
            raise ValueError("model file missing input shape")
        input_shape = struct.unpack("<3I", payload)
        tag, payload = _read_tlv(fh)
        if tag != _TAG_N_OUT:
            raise ValueError("model file missing output count")
        (n_out,) = struct.unpack("<I", payload)
        tag, payload = _read_tlv(fh)
        if tag != _TAG_CLASSES:
            raise ValueError("model file missing class table")
        n_classes = payload[0]
        classes = tuple(ModulationScheme(b) for b in payload[1 : 1 + n_classes])
        tag, payload = _read_tlv(fh)
        if tag != _TAG_LAYER_COUNT:
            raise ValueError("model file missing layer count")
        (n_layers,) = struct.unpack("<H", payload)

        specs = []
        for _ in range(n_layers):
            tag, payload = _read_tlv(fh)
            specs.append(_decode_layer(tag, payload))
        config = NetworkConfig(tuple(specs), input_shape=input_shape, n_out=n_out)
        network = Network(config, np.random.default_rng(0))

        for layer in network.layers:
            (count,) = struct.unpack("<B", fh.read(1))
            if count != len(layer.params):
                raise ValueError("layer tensor count mismatch")
            for t in layer.params:
                (rank,) = struct.unpack("<B", fh.read(1))
                dims = struct.unpack(f"<{rank}I", fh.read(4 * rank))
                if dims != t.shape:
                    raise ValueError(f"tensor shape mismatch: {dims} vs {t.shape}")
                data = np.frombuffer(fh.read(4 * int(np.prod(dims))), dtype="<f4")
                t[...] = data.reshape(dims)

    return TrainedModel(config=config, classes=classes, network=network)
