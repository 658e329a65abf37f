"""
Data Management Module
JSON / CSV export and import of computed results, and Gram-matrix files for the lattice commands
"""

import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from config import get_output_dir
from errors import GramFileError

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


class DataManager:
    """Saves results under the output directory and loads Gram matrices."""

    def __init__(self, base_directory: Optional[str] = None):
        self.base_directory = Path(base_directory) if base_directory else get_output_dir()

    def _ensure_directory(self) -> Path:
        self.base_directory.mkdir(parents=True, exist_ok=True)
        return self.base_directory

    def result_path(self, name: str, extension: str) -> Path:
        """Timestamped file name for a result."""
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        return self._ensure_directory() / f"{timestamp}_{name}.{extension}"

    def export_json(self, data: Any, output_path: Path) -> Path:
        with open(output_path, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, default=str, ensure_ascii=False)
        logger.info(f"Saved JSON result to {output_path}")
        return Path(output_path)

    def export_csv(self, rows: List[Dict], output_path: Path) -> Path:
        df = pd.json_normalize(rows)
        df.to_csv(output_path, index=False)
        logger.info(f"Saved {len(df)} CSV rows to {output_path}")
        return Path(output_path)

    def export_text(self, text: str, output_path: Path) -> Path:
        with open(output_path, 'w', encoding='utf-8') as f:
            f.write(text)
        logger.info(f"Saved text result to {output_path}")
        return Path(output_path)

    def save_result(self, name: str, payload: Any, format: str = "json") -> Path:
        """Write payload in the given format (json, csv, markdown or text) to the output directory."""
        if format == "json":
            return self.export_json(payload, self.result_path(name, "json"))
        if format == "csv":
            return self.export_csv(payload, self.result_path(name, "csv"))
        if format == "markdown":
            return self.export_text(str(payload), self.result_path(name, "md"))
        return self.export_text(str(payload), self.result_path(name, "txt"))

    def load_json(self, path: str) -> Any:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)

    def load_csv(self, path: str) -> pd.DataFrame:
        return pd.read_csv(path, dtype=str)

    def list_results(self) -> List[Path]:
        if not self.base_directory.exists():
            return []
        return sorted(p for p in self.base_directory.iterdir() if p.is_file())

    def load_gram_matrix(self, path: str) -> List[List[int]]:
        """Read a JSON array of integer rows."""
        try:
            data = self.load_json(path)
        except FileNotFoundError as e:
            raise GramFileError(f"Gram file not found: {path}") from e
        except (OSError, json.JSONDecodeError) as e:
            raise GramFileError(f"Cannot read Gram file {path}: {e}") from e
        if not isinstance(data, list) or not all(isinstance(row, list) for row in data):
            raise GramFileError(f"Gram file {path} must hold a JSON array of rows")
        rows = []
        for row in data:
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in row):
                raise GramFileError(f"Gram file {path} has a non-integer entry in row {row}")
            rows.append(list(row))
        if any(len(row) != len(rows) for row in rows):
            raise GramFileError(f"Gram matrix in {path} is not square")
        logger.info(f"Loaded {len(rows)}x{len(rows)} Gram matrix from {path}")
        return rows
