"""Image/text encoders behind one small interface.

ClipEncoder wraps the pretrained dual encoder (ViT-B/32 image tower,
transformer text tower) with its published preprocessing; it is consumed
as a frozen black box, there is no finetuning path. HashEncoder is a
deterministic stand-in for smoke tests and offline runs.
"""

from __future__ import annotations

import hashlib
from typing import Protocol, Sequence

import numpy as np

from .errors import ModelLoadError

DEFAULT_MODEL = "openai/clip-vit-base-patch32"


class ImageTextEncoder(Protocol):
    model_id: str
    dim: int

    def encode_images(self, images: Sequence[np.ndarray]) -> np.ndarray: ...

    def encode_texts(self, texts: Sequence[str]) -> np.ndarray: ...


class ClipEncoder:
    """Pretrained CLIP via transformers; weights stay frozen (eval mode)."""

    def __init__(self, model_id: str = DEFAULT_MODEL, device: str = "cpu"):
        try:
            import torch
            from transformers import CLIPModel, CLIPProcessor
        except ImportError as e:
            raise ModelLoadError(f"torch/transformers unavailable: {e}") from e
        try:
            self._model = CLIPModel.from_pretrained(model_id).to(device).eval()
            self._processor = CLIPProcessor.from_pretrained(model_id)
        except Exception as e:
            raise ModelLoadError(f"cannot load {model_id!r}: {e}") from e
        self._torch = torch
        self._device = device
        self.model_id = model_id
        self.dim = int(self._model.config.projection_dim)

    def encode_images(self, images):
        from PIL import Image

        pil = [Image.fromarray(img) for img in images]
        inputs = self._processor(images=pil, return_tensors="pt").to(self._device)
        with self._torch.no_grad():
            feats = self._model.get_image_features(**inputs)
        return feats.cpu().numpy().astype(np.float32)

    def encode_texts(self, texts):
        inputs = self._processor(
            text=list(texts), return_tensors="pt", padding=True, truncation=True
        ).to(self._device)
        with self._torch.no_grad():
            feats = self._model.get_text_features(**inputs)
        return feats.cpu().numpy().astype(np.float32)


class HashEncoder:
    """Deterministic pseudo-embeddings keyed on content bytes; no model needed."""

    model_id = "hash"

    def __init__(self, dim: int = 512):
        self.dim = dim

    def _vector(self, payload: bytes) -> np.ndarray:
        digest = hashlib.blake2b(payload, digest_size=8).digest()
        rng = np.random.default_rng(int.from_bytes(digest, "little"))
        return rng.normal(size=self.dim).astype(np.float32)

    def encode_images(self, images):
        return np.stack([self._vector(np.ascontiguousarray(img).tobytes()) for img in images])

    def encode_texts(self, texts):
        return np.stack([self._vector(t.encode("utf-8")) for t in texts])


def make_encoder(name: str, model_id: str = DEFAULT_MODEL, device: str = "cpu") -> ImageTextEncoder:
    if name == "clip":
        return ClipEncoder(model_id=model_id, device=device)
    if name == "hash":
        return HashEncoder()
    raise ModelLoadError(f"unknown encoder {name!r}")
