"""Density Cache Module.

SQLite storage for inverted density grids, keyed by a hash of the model
fingerprint, the time and the lattice. Entries are only removed by an explicit
clear.
"""

import io
import logging
import os
import sqlite3
import threading
from datetime import datetime, timezone
from typing import Optional

import numpy as np

# Configure module logging
logger = logging.getLogger(__name__)


class DensityCache:
    """SQLite-backed store of density grids shared by worker threads."""

    def __init__(self, db_path: str = "data/density_cache.db"):
        """Open (or create) the cache database.

        Args:
            db_path: Path to SQLite database file.
        """
        self.db_path = db_path
        folder = os.path.dirname(db_path)
        if folder:
            os.makedirs(folder, exist_ok=True)
        self.conn = sqlite3.connect(self.db_path, check_same_thread=False)
        self.lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self._create_table()

    def _create_table(self) -> None:
        """Create the densities table."""
        self.conn.execute('''
            CREATE TABLE IF NOT EXISTS densities (
                key TEXT PRIMARY KEY,
                payload BLOB NOT NULL,
                created TEXT NOT NULL
            )
        ''')
        self.conn.execute('CREATE INDEX IF NOT EXISTS idx_created ON densities(created)')
        self.conn.commit()

    def load(self, key: str) -> Optional[np.ndarray]:
        """Return the stored grid values for `key`, or None."""
        with self.lock:
            row = self.conn.execute("SELECT payload FROM densities WHERE key = ?", (key,)).fetchone()
            if row is None:
                self.misses += 1
                return None
            self.hits += 1
        logger.debug(f"[CACHE] Hit {key[:12]}")
        return np.load(io.BytesIO(row[0]), allow_pickle=False)

    def store(self, key: str, values: np.ndarray) -> None:
        """Insert or replace the grid stored under `key`."""
        buffer = io.BytesIO()
        np.save(buffer, np.ascontiguousarray(values), allow_pickle=False)
        created = datetime.now(timezone.utc).isoformat()
        with self.lock:
            self.conn.execute(
                "INSERT OR REPLACE INTO densities (key, payload, created) VALUES (?, ?, ?)",
                (key, sqlite3.Binary(buffer.getvalue()), created),
            )
            self.conn.commit()

    def clear(self) -> int:
        """Remove every entry; returns the number deleted."""
        with self.lock:
            cursor = self.conn.execute("DELETE FROM densities")
            self.conn.commit()
        logger.info(f"[CACHE] Cleared {cursor.rowcount} densities")
        return cursor.rowcount

    def __len__(self) -> int:
        with self.lock:
            return self.conn.execute("SELECT COUNT(*) FROM densities").fetchone()[0]

    def close(self) -> None:
        """Close database connection."""
        self.conn.close()
