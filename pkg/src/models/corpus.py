"""Line-delimited corpus of IRS code records."""

import json
import logging
from pathlib import Path
from typing import Iterable, List, Optional

from pydantic import ValidationError

from src.config import settings
from src.schemas import CodeRecord

logger = logging.getLogger(__name__)


class CorpusParseError(ValueError):
    """A corpus line could not be parsed; `line` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CorpusSerializer:
    """Converts CodeRecords to and from one-line JSON objects."""

    FIELD_ORDER = ("N", "a", "type", "m", "n", "g", "gamma")

    def to_line(self, record: CodeRecord) -> str:
        """
        Serialize a record as a compact JSON object with a fixed key order.

        Args:
            record: validated CodeRecord

        Returns:
            one line, no trailing newline
        """
        data = record.model_dump(by_alias=True, mode="json")
        return json.dumps({key: data[key] for key in self.FIELD_ORDER})

    def from_line(self, line: str, line_number: int = 1) -> CodeRecord:
        """
        Parse one corpus line.

        Raises:
            CorpusParseError: malformed JSON or a record that fails validation
        """
        try:
            data = json.loads(line)
        except json.JSONDecodeError as e:
            raise CorpusParseError(line_number, f"invalid JSON ({e.msg})") from e
        if not isinstance(data, dict):
            raise CorpusParseError(line_number, "expected a JSON object")
        try:
            return CodeRecord.model_validate(data)
        except ValidationError as e:
            problems = "; ".join(
                f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors()
            )
            raise CorpusParseError(line_number, problems) from e


class CorpusRepo:
    """File-backed store of code records."""

    def __init__(self, path: Optional[str] = None):
        self.path = Path(path or settings.corpus_path)
        self.serializer = CorpusSerializer()

    def load(self) -> List[CodeRecord]:
        """
        Read every record; blank lines and lines starting with '#' are skipped.

        :raises CorpusParseError: on the first malformed line
        """
        records = []
        with open(self.path, encoding="utf-8") as handle:
            for number, line in enumerate(handle, start=1):
                stripped = line.strip()
                if not stripped or stripped.startswith("#"):
                    continue
                records.append(self.serializer.from_line(stripped, number))
        logger.info(f"Loaded {len(records)} record(s) from {self.path}")
        return records

    def filter(
        self,
        m: Optional[int] = None,
        n: Optional[int] = None,
        g: Optional[int] = None,
        max_N: Optional[int] = None,
    ) -> List[CodeRecord]:
        """
        Records matching every given criterion, in file order.

        :param m: number of rows
        :param n: number of columns
        :param g: guaranteed girth
        :param max_N: largest lifting degree kept
        """
        return [
            r
            for r in self.load()
            if (m is None or r.m == m)
            and (n is None or r.n == n)
            and (g is None or r.g == g)
            and (max_N is None or r.N <= max_N)
        ]

    def append(self, records: Iterable[CodeRecord]) -> int:
        """Append records at the end of the file; returns how many were written."""
        lines = [self.serializer.to_line(r) for r in records]
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as handle:
            for line in lines:
                handle.write(line + "\n")
        logger.info(f"✓ Appended {len(lines)} record(s) to {self.path}")
        return len(lines)
