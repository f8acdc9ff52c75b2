import json

import pytest

from symembed.catalog import Catalog, entry, get, list_names, load_document, load_file
from symembed.errors import InputDocumentError, UnknownSpaceError, ValidationError
from symembed.exact_linalg import rows_of

ALL_SPACES = [
    "AI.ad.1", "AI.ad.2", "AI.ad.3", "AI.sl.2", "AI.sl.2+T", "AI.sl.3", "AI.sl.3+T", "AI.sl.4",
    "AII.sl.4", "AIII.sl.2", "AIII.sl.3", "AIII.sl.3.b2", "compact.sl.3", "group.A1", "group.A2",
]


def _sl2_document(**satake):
    doc = {
        "name": "test",
        "flavor": "simply_connected",
        "root_datum": {"rank": 1, "cartan": [[2]], "simple_roots": [[2]], "simple_coroots": [[1]]},
        "satake": {"I_bullet": [], "tau": [1], "tau_X": [[1]]},
    }
    doc["satake"].update(satake)
    return doc


def test_builtin_names():
    assert list_names() == ALL_SPACES


def test_unknown_space():
    with pytest.raises(UnknownSpaceError):
        get("nope")
    with pytest.raises(KeyError):
        entry("nope")


def test_entries_are_built_once():
    assert get("AI.sl.3") is get("AI.sl.3")
    ird = get("AI.sl.2")
    assert rows_of(ird.datum.cartan) == [(2,)]
    assert ird.datum.simple_roots == ((2,),)


def test_group_case_swaps_the_factors():
    ird = get("group.A1")
    assert ird.satake.tau == (2, 1)
    assert ird.i_circ_prime == (1,)


def test_doubled_entries():
    assert entry("AI.sl.2+T").doubled_from == "AI.sl.2"
    assert get("AI.sl.2+T").rank_x == 2
    assert get("AI.sl.3+T").rank_x == 4


def test_load_document():
    ird = load_document(_sl2_document())
    assert ird.rank_x == 1
    assert ird.i_circ == (1,)


@pytest.mark.parametrize("doc", [
    [],
    {"root_datum": {"rank": 1}},
    {**_sl2_document(), "flavor": "universal"},
    {**_sl2_document(), "root_datum": {"rank": 1, "cartan": [[3]], "simple_roots": [[2]],
                                       "simple_coroots": [[1]]}},
    {**_sl2_document(), "root_datum": {"rank": 1, "simple_roots": [["x"]], "simple_coroots": [[1]]}},
    {**_sl2_document(), "root_datum": {"rank": 2, "simple_roots": [[2]], "simple_coroots": [[1]]}},
    _sl2_document(tau_X=[[1, 0]]),
])
def test_malformed_documents(doc):
    with pytest.raises(InputDocumentError):
        load_document(doc)


def test_documents_failing_the_axioms():
    with pytest.raises(ValidationError):
        load_document(_sl2_document(tau_X=[[-1]]))


def test_load_file_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InputDocumentError):
        load_file(bad)
    with pytest.raises(InputDocumentError):
        load_file(tmp_path / "missing.json")


def test_catalog_over_a_directory(tmp_path):
    (tmp_path / "one.json").write_text(json.dumps(_sl2_document()))
    (tmp_path / "two.json").write_text(json.dumps({"name": "test+T", "doubled_from": "test"}))
    catalog = Catalog(tmp_path)
    assert catalog.names() == ["test", "test+T"]
    assert catalog.get("test+T").rank_x == 2
    with pytest.raises(UnknownSpaceError):
        catalog.get("AI.sl.2")


def test_catalog_rejects_duplicate_names(tmp_path):
    for stem in ("a", "b"):
        (tmp_path / f"{stem}.json").write_text(json.dumps(_sl2_document()))
    with pytest.raises(InputDocumentError):
        Catalog(tmp_path).names()


def test_missing_catalog_directory_is_empty(tmp_path):
    assert Catalog(tmp_path / "nowhere").names() == []
