"""Scenario Acceptance Tests.

Runs every bundled scenario end to end and expects PASS. The sweeps take
minutes, so the suite only runs with LEVYHEAT_SLOW=1.
"""

import os
import tempfile
import unittest

from levyheat.runner import EXIT_PASS, run_scenario

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "scenarios")


@unittest.skipUnless(os.getenv("LEVYHEAT_SLOW") == "1", "set LEVYHEAT_SLOW=1 to run the scenario sweeps")
class TestScenarios(unittest.TestCase):
    def test_bundled_scenarios_pass(self):
        names = sorted(f for f in os.listdir(SCENARIO_DIR) if f.endswith(".yaml"))
        with tempfile.TemporaryDirectory() as tmp:
            for name in names:
                with self.subTest(scenario=name):
                    outcome = run_scenario(os.path.join(SCENARIO_DIR, name), output_dir=tmp)
                    self.assertEqual(outcome.status, EXIT_PASS, outcome.message)


if __name__ == "__main__":
    unittest.main()
