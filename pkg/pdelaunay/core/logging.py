"""Structured logging for pdelaunay."""
import json
import logging
from datetime import datetime, timezone
from typing import Any, Dict, Optional


class StructuredLogger:
    """Structured JSON logger for certificate runs."""

    def __init__(self, name: str = "pdelaunay"):
        self.logger = logging.getLogger(name)

    def log_run(
        self,
        command: str,
        family: Optional[str] = None,
        d: Optional[int] = None,
        s: Optional[int] = None,
        k: Optional[int] = None,
        outcome: str = "success",  # "success", "refuted" or "error"
        status: Optional[str] = None,
        runtime_ms: int = 0,
        error_code: Optional[str] = None,
        witness: Optional[Any] = None,
        level: str = "INFO",
        **extra: Any,
    ):
        """Log a command or certificate summary as structured JSON.

        Args:
            command: CLI subcommand or certificate kind ("certify", "delaunay", ...)
            family: Polytope family ("P", "G") if applicable
            d: Dimension
            s: Section parameter
            k: Lattice parameter
            outcome: "success", "refuted" or "error"
            status: Certificate status ("certified", "failed", "perfect", ...)
            runtime_ms: Wall-clock time in milliseconds
            error_code: Normalized error code if outcome is "error"
            witness: Failure witness (point or representative), serialized with str()
            level: Log level (INFO, WARNING, ERROR)
        """
        log_entry: Dict[str, Any] = {
            "ts": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
            "level": level,
            "command": command,
            "outcome": outcome,
            "runtime_ms": runtime_ms,
        }

        for key, value in (("family", family), ("d", d), ("s", s), ("k", k), ("status", status)):
            if value is not None:
                log_entry[key] = value

        if outcome != "success":
            if error_code:
                log_entry["error_code"] = error_code
            if witness is not None:
                log_entry["witness"] = str(witness)

        log_entry.update(extra)

        log_message = json.dumps(log_entry, ensure_ascii=False, default=str)

        if level == "ERROR":
            self.logger.error(log_message)
        elif level == "WARNING":
            self.logger.warning(log_message)
        else:
            self.logger.info(log_message)


# Global structured logger instance
structured_logger = StructuredLogger()
