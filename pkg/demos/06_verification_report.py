"""
Running the verification suite from Python
==========================================

The command-line ``verify`` is a thin wrapper around ``run_suite``.
"""

from gl2aba.config import from_dict
from gl2aba.suite import report_json, run_suite, summary_table

cfg = from_dict({"model": {"L": 3}, "suite": "appendix", "magnons": [1, 2]})
reports = run_suite(cfg)
print(summary_table(reports))

# reports are deterministic; the JSON is identical on every run
assert report_json(reports) == report_json(run_suite(cfg))
print(report_json(reports[:1]))
