import json
from pathlib import Path
from typing import Any

import jsonschema


class SchemaLoader:
    """Loads and caches the JSON schemas shipped with the package."""

    _cache: dict[str, dict[str, Any]] = {}

    @classmethod
    def load_schema(cls, name: str) -> dict[str, Any]:
        """Load the schema ``schemas/<name>.schema.json``.

        Args:
            name: Schema name (report, spec, solution)

        Returns:
            Parsed schema document
        """
        if name not in cls._cache:
            schema_file = Path(__file__).parent.parent / "schemas" / f"{name}.schema.json"
            cls._cache[name] = cls._load_from_file(schema_file)

        return cls._cache[name]

    @classmethod
    def _load_from_file(cls, file_path: Path | str) -> dict[str, Any]:
        """Load a schema from file."""
        file_path = Path(file_path)
        if not file_path.exists():
            raise FileNotFoundError(f"Schema file not found: {file_path}")

        with open(file_path, encoding="utf-8") as f:
            content = json.load(f)

        if not content:
            raise ValueError(f"Schema file is empty: {file_path}")

        return content

    @classmethod
    def validate(cls, document: Any, name: str) -> None:
        """Raise ``jsonschema.ValidationError`` when the document does not match."""
        jsonschema.validate(instance=document, schema=cls.load_schema(name))
