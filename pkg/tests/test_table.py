import warnings

import pytest

from selberg_arith.errors import CacheCorruptError
from selberg_arith.forms import class_number
from selberg_arith.pell import fundamental_solution
from selberg_arith.table import DiscriminantTable, build_table, discriminants_below


def test_build_contents(tmp_path):
    tab = build_table(100, tmp_path / "t.csv")
    assert {5, 8, 12} <= set(tab.records)
    for D, rec in tab.records.items():
        f = fundamental_solution(D)
        assert (rec.h, rec.t1, rec.u1) == (class_number(D), f.t, f.u)
        assert f.t * f.t - 2 < 100 + 1    # eps(D)^2 < 100
    assert discriminants_below(5) == []


def test_empty_cutoff(tmp_path):
    tab = build_table(0, tmp_path / "t.csv")
    assert len(tab) == 0


def test_deterministic(tmp_path):
    a = build_table(10**4, tmp_path / "a.csv")
    b = build_table(10**4, tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    c = build_table(10**4, tmp_path / "a.csv")
    assert a.checksum() == b.checksum() == c.checksum()


def test_roundtrip_and_extension(tmp_path):
    p = tmp_path / "t.csv"
    build_table(1000, p)
    tab = DiscriminantTable.load(p)
    tab.add([10**6 + 1])
    tab.save()
    again = DiscriminantTable.load(p)
    assert again.records == tab.records and again.cutoff == 1000


def test_corruption_rebuilds(tmp_path):
    p = tmp_path / "t.csv"
    good = build_table(1000, p).render()
    p.write_text(good.replace("\n5,1,", "\n5,2,"), encoding="utf-8")
    with pytest.raises(CacheCorruptError):
        DiscriminantTable.load(p, rebuild=False)
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        tab = DiscriminantTable.load(p)
    assert tab.was_corrupt and any("corrupt" in str(x.message) for x in w)
    assert p.read_text(encoding="utf-8") == good
