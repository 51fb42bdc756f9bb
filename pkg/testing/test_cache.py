"""Density Cache Tests."""

import os
import tempfile
import unittest
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from levyheat.cache import DensityCache


class TestDensityCache(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.cache = DensityCache(os.path.join(self.tmp.name, "nested", "cache.db"))
        self.addCleanup(self.cache.close)

    def test_store_load_clear(self):
        values = np.linspace(0.0, 1.0, 7)
        self.cache.store("a", values)
        np.testing.assert_array_equal(self.cache.load("a"), values)
        self.assertIsNone(self.cache.load("b"))
        self.assertEqual(len(self.cache), 1)
        self.assertEqual(self.cache.clear(), 1)
        self.assertEqual(len(self.cache), 0)

    def test_counters_under_concurrent_loads(self):
        self.cache.store("present", np.ones(4))

        def work(i):
            self.cache.load("present" if i % 2 == 0 else "absent")

        with ThreadPoolExecutor(max_workers=8) as pool:
            list(pool.map(work, range(4000)))
        self.assertEqual(self.cache.hits, 2000)
        self.assertEqual(self.cache.misses, 2000)


if __name__ == "__main__":
    unittest.main()
