"""
Artifact files Manager
"""

import hashlib
import json
from pathlib import Path
from typing import Any

import pandas as pd


class ArtifactManager():

    @staticmethod
    def write_frame(
        output_dir: Path,
        name: str,
        frame: pd.DataFrame,
        float_format: str | None = "%.10g",
    ) -> Path:
        """
        Writes a frame as CSV, column order and float format fixed
        so that identical frames produce identical bytes
        """
        path = Path(output_dir) / name
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=float_format, lineterminator="\n")
        return path


    @staticmethod
    def read_frame(path: Path) -> pd.DataFrame:
        """
        Reads a CSV written by `write_frame`
        """
        return pd.read_csv(path, keep_default_na=True)


    @staticmethod
    def write_text(
        output_dir: Path,
        name: str,
        text: str,
    ) -> Path:
        """
        Writes a text (markdown) artifact
        """
        path = Path(output_dir) / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
        return path


    @staticmethod
    def write_json(
        output_dir: Path,
        name: str,
        payload: Any,
    ) -> Path:
        """
        Writes a JSON document with sorted keys
        """
        path = Path(output_dir) / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=str), encoding="utf-8")
        return path


    @staticmethod
    def content_hash(path: Path) -> str:
        """
        sha256 of a file's bytes
        """
        digest = hashlib.sha256()
        with open(path, "rb") as file:
            for chunk in iter(lambda: file.read(1 << 16), b""):
                digest.update(chunk)
        return digest.hexdigest()
