"""Text persistence of fitted composite surrogates."""
import hashlib
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional

import numpy as np

from core.errors import CorruptFile, VersionMismatch
from features.random_features import BasisKind, FeatureWeights, RandomFeatureModel
from kpca.kernel_pca import KernelParams, KpcaModel
from services.pipeline_service import CompositeSurrogate

logger = logging.getLogger(__name__)

MODEL_FORMAT = "kpca-random-feature-surrogate"
MODEL_VERSION = 1
CHECKSUM_ALGORITHM = "sha256"


def _canonical(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def payload_checksum(payload: dict) -> str:
    return hashlib.sha256(_canonical(payload)).hexdigest()


def model_payload(model: CompositeSurrogate) -> dict:
    """JSON-ready description of `model`; floats keep their exact value through repr."""
    kpca = model.kpca
    rfe = model.rfe
    return {
        "k_star": model.k_star,
        "validation_error": float(model.validation_error),
        "kpca": {
            "theta": kpca.params.theta.tolist(),
            "training_points": kpca.training_points.tolist(),
            "alphas": kpca.alphas.tolist(),
            "eigenvalues": kpca.eigenvalues.tolist(),
            "row_means": kpca.row_means.tolist(),
            "grand_mean": float(kpca.grand_mean),
            "centered": bool(kpca.centered),
        },
        "features": {
            "basis": rfe.basis.value,
            "dim": rfe.weights.dim,
            "q": rfe.weights.q,
            "sigma": float(rfe.weights.sigma),
            "seed": rfe.weights.seed,
            "supports": rfe.weights.supports.tolist(),
            "values": rfe.weights.values.tolist(),
            "coefficients": rfe.coefficients.tolist(),
            "intercept": rfe.intercept,
        },
    }


def model_from_payload(payload: dict) -> CompositeSurrogate:
    """Rebuild a composite surrogate from model_payload output."""
    kp = payload["kpca"]
    fp = payload["features"]
    kpca = KpcaModel(
        training_points=np.array(kp["training_points"], dtype=float, ndmin=2),
        params=KernelParams(np.array(kp["theta"], dtype=float)),
        alphas=np.array(kp["alphas"], dtype=float, ndmin=2),
        eigenvalues=np.array(kp["eigenvalues"], dtype=float),
        row_means=np.array(kp["row_means"], dtype=float),
        grand_mean=float(kp["grand_mean"]),
        centered=bool(kp["centered"]),
    )
    weights = FeatureWeights(
        dim=int(fp["dim"]),
        q=int(fp["q"]),
        supports=np.array(fp["supports"], dtype=np.int64, ndmin=2),
        values=np.array(fp["values"], dtype=float, ndmin=2),
        sigma=float(fp["sigma"]),
        seed=fp["seed"],
    )
    rfe = RandomFeatureModel(
        basis=BasisKind.parse(fp["basis"]),
        weights=weights,
        coefficients=np.array(fp["coefficients"], dtype=float),
        intercept=float(fp["intercept"]),
    )
    return CompositeSurrogate(
        kpca=kpca, rfe=rfe, k_star=int(payload["k_star"]),
        validation_error=float(payload["validation_error"]),
    )


def save_model(
    model: CompositeSurrogate,
    path: "str | Path",
    config_hash: Optional[str] = None,
    seed: Optional[int] = None,
) -> Path:
    """
    Write `model` as JSON with a payload checksum and provenance.

    Provenance (config hash, seed, timestamp) sits outside the checksummed payload.
    """
    payload = model_payload(model)
    document = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "checksum": {"algorithm": CHECKSUM_ALGORITHM, "value": payload_checksum(payload)},
        "provenance": {
            "config_hash": config_hash,
            "seed": seed,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        },
        "payload": payload,
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    logger.debug(f"Saved model k={model.k_star} to {path}")
    return path


def read_model_document(path: "str | Path") -> dict[str, Any]:
    """
    Parse and verify a model file without rebuilding the model.

    Raises:
        CorruptFile: unreadable JSON, wrong format, missing fields or checksum mismatch
        VersionMismatch: file written by another format version
    """
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise CorruptFile(f"Model file not found: {path}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise CorruptFile(f"{path} is not a readable model file: {e}") from None

    if not isinstance(document, dict) or document.get("format") != MODEL_FORMAT:
        raise CorruptFile(f"{path} is not a {MODEL_FORMAT} file")
    if document.get("version") != MODEL_VERSION:
        raise VersionMismatch(
            f"{path} has format version {document.get('version')}, expected {MODEL_VERSION}"
        )

    payload = document.get("payload")
    checksum = document.get("checksum") or {}
    if not isinstance(payload, dict) or checksum.get("algorithm") != CHECKSUM_ALGORITHM:
        raise CorruptFile(f"{path} has no verifiable payload")
    if payload_checksum(payload) != checksum.get("value"):
        raise CorruptFile(f"{path} payload checksum mismatch")
    return document


def load_model(path: "str | Path") -> CompositeSurrogate:
    """Load a model written by save_model."""
    document = read_model_document(path)
    try:
        return model_from_payload(document["payload"])
    except (KeyError, TypeError, ValueError) as e:
        raise CorruptFile(f"{path} payload is malformed: {e}") from None
