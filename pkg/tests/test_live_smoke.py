"""Optional, non-gating live smoke test.

Runs only when explicitly opted in with real credentials and network access:

    TRIPLECHECK_LIVE_SMOKE=1 LLM_API_KEY=... WEB_SEARCH_ENDPOINT=... pytest tests/test_live_smoke.py

It drives the wikidata+web validator over a bundled 20-record slice of
concrete-entity statements and expects accuracy of at least 0.6. The result
is directional only: it depends on the hosted model snapshot and on live
Wikidata and web state, none of which this repo controls.
"""

import json
import os

import pytest

from conftest import FIXTURE_DIR
from triplecheck.cli import main

pytestmark = pytest.mark.skipif(
    os.environ.get("TRIPLECHECK_LIVE_SMOKE") != "1"
    or not os.environ.get("LLM_API_KEY")
    or not os.environ.get("WEB_SEARCH_ENDPOINT"),
    reason="live smoke is opt-in: set TRIPLECHECK_LIVE_SMOKE=1, LLM_API_KEY and WEB_SEARCH_ENDPOINT",
)


def test_live_wikidata_web_accuracy(tmp_path):
    out = str(tmp_path / "live.jsonl")
    code = main(
        [
            "evaluate",
            "--dataset", os.path.join(FIXTURE_DIR, "live_smoke_slice.tsv"),
            "--validator", "wikidata-web",
            "--model", os.environ.get("LLM_MODEL", "gpt-3.5-turbo-0125"),
            "--sample-n", "20",
            "--seed", "42",
            "--cache-dir", str(tmp_path / "cache"),
            "--out", out,
        ]
    )
    assert code == 0
    report = json.loads(open(os.path.splitext(out)[0] + ".report.json").read())
    assert report["metrics"]["accuracy"] >= 0.6
