import json

import pytest

from linfty import tables

IDS = tables.table_ids()


def test_every_display_has_a_table():
    assert len(IDS) == 16
    assert {"sec3-coboundaries", "sec5-coboundaries", "sec7-dims", "sec8-h1", "sec9.1", "sec9.2"} <= set(IDS)


@pytest.mark.parametrize("table_id", IDS)
def test_table_reproduces(table_id):
    res = tables.reproduce(table_id)
    assert res.ok, "\n".join(res.lines())
    assert all(c.status in (tables.MATCH, tables.TYPO) for c in res.cells)


def test_typo_cells_carry_notes():
    res = tables.reproduce("sec8-h1")
    typos = [c for c in res.cells if c.status == tables.TYPO]
    assert typos and all(c.note for c in typos)


def test_aliases_and_unknown_ids():
    assert tables.resolve("sec5-coboundaries") == ["sec5-coboundaries"]
    assert set(tables.resolve("all")) == set(IDS)
    assert len(tables.resolve("sec5")) > 1
    with pytest.raises(tables.UnknownTable):
        tables.resolve("sec42")


def test_mismatch_is_reported(tmp_path):
    table = tables.load_table("sec7-dims")
    table["cells"][0]["h"] = "9|9"
    (tmp_path / "sec7-dims.json").write_text(json.dumps(table))
    res = tables.reproduce("sec7-dims", tmp_path)
    assert not res.ok
    assert res.cells[0].status == tables.MISMATCH


def test_grid_expansion():
    grid = [{"name": "m", "values": [0, 1]}, {"name": "n", "range": [0, "m+1"]}]
    assert list(tables.expand_grid(grid)) == [{"m": 0, "n": 0}, {"m": 0, "n": 1},
                                              {"m": 1, "n": 0}, {"m": 1, "n": 1}, {"m": 1, "n": 2}]


def test_result_json_shape():
    data = tables.reproduce("sec3-dims").to_json()
    assert data["id"] == "sec3-dims" and data["cells"]
    assert {"cell", "status", "provenance"} <= set(data["cells"][0])
