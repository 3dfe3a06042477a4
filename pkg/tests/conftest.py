import json
import os

import pytest
from hypothesis import HealthCheck, settings

from triplecheck.transport import FixtureTransport

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")

WIKIDATA_HOST = "https://wikidata.fixture"
WIKIPEDIA_HOST = "https://wikipedia.fixture"
SEARCH_ENDPOINT = "https://search.fixture/api"

WIKIDATA_API = f"{WIKIDATA_HOST}/w/api.php"
WIKIPEDIA_API = f"{WIKIPEDIA_HOST}/w/api.php"

Q42_LABEL_IDS = "|".join(
    sorted(
        {
            "P31", "P106", "P19", "P569", "P800", "P856", "P345", "P2163", "P4839",
            "Q5", "Q36180", "Q18844224", "Q350", "Q25169",
        }
    )
)


def fixture_text(name: str) -> str:
    with open(os.path.join(FIXTURE_DIR, name), encoding="utf-8") as fh:
        return fh.read()


def fixture_json(name: str):
    return json.loads(fixture_text(name))


def search_params(label: str) -> dict[str, str]:
    return {
        "action": "wbsearchentities",
        "format": "json",
        "language": "en",
        "search": label,
    }


def entity_params(qid: str) -> dict[str, str]:
    return {
        "action": "wbgetentities",
        "format": "json",
        "ids": qid,
        "languages": "en",
        "props": "labels|descriptions|claims|sitelinks",
    }


def labels_params(ids: str) -> dict[str, str]:
    return {
        "action": "wbgetentities",
        "format": "json",
        "ids": ids,
        "languages": "en",
        "props": "labels",
    }


def register_q42(transport: FixtureTransport) -> None:
    transport.register_get(WIKIDATA_API, search_params("Douglas Adams"), fixture_text("q42_search.json"))
    transport.register_get(WIKIDATA_API, entity_params("Q42"), fixture_text("q42_entity.json"))
    transport.register_get(WIKIDATA_API, labels_params(Q42_LABEL_IDS), fixture_text("q42_labels.json"))


def empty_search_response(label: str) -> str:
    return json.dumps({"searchinfo": {"search": label}, "search": [], "success": 1})


@pytest.fixture
def q42_transport() -> FixtureTransport:
    transport = FixtureTransport()
    register_q42(transport)
    return transport
