import json

import pytest

from mhslab import compsum
from mhslab.cache import FILENAME, ResidueCache
from mhslab.errors import CorruptCache
from mhslab.theorems import SuiteConfig, run_suite


def test_store_then_load(tmp_path):
    c = ResidueCache(tmp_path)
    assert c.load("S", 6, 1, 11, 2, 2) is None
    c.store("S", 6, 1, 11, 2, 2, 77)
    assert c.load("S", 6, 1, 11, 2, 2) == 77
    assert ResidueCache(tmp_path).load("S", 6, 1, 11, 2, 2) == 77


def test_store_is_append_only(tmp_path):
    c = ResidueCache(tmp_path)
    c.store("S", 3, 1, 5, 1, 1, 3)
    c.store("R", 4, 2, 11, 1, 1, 0)
    c.store("R", 4, 2, 11, 1, 1, 0)
    lines = (tmp_path / FILENAME).read_text().splitlines()
    assert len(lines) == 2
    assert set(json.loads(lines[0])) == {"kind", "n", "m", "p", "r", "k", "value", "sum"}


def test_tampered_record_is_a_miss(tmp_path):
    c = ResidueCache(tmp_path)
    c.store("S", 6, 1, 11, 2, 2, 77)
    path = tmp_path / FILENAME
    path.write_text(path.read_text().replace('"value":77', '"value":78'))
    with pytest.warns(CorruptCache):
        again = ResidueCache(tmp_path)
    assert again.load("S", 6, 1, 11, 2, 2) is None
    assert again.corrupt == 1


def test_garbage_line(tmp_path):
    (tmp_path / FILENAME).write_text("not json\n")
    with pytest.warns(CorruptCache):
        assert len(ResidueCache(tmp_path)) == 0


def test_cached_run_is_identical(tmp_path):
    cfg = dict(theorems=("sixvar", "s6sym", "thm2ii"), primes=(11, 13, 17), r_values=(2,))
    fresh = run_suite(SuiteConfig(**cfg)).to_json()
    compsum._comp_sum.cache_clear()
    first = run_suite(SuiteConfig(**cfg, cache_dir=str(tmp_path))).to_json()
    assert (tmp_path / FILENAME).stat().st_size > 0
    compsum._comp_sum.cache_clear()
    second = run_suite(SuiteConfig(**cfg, cache_dir=str(tmp_path), jobs=2)).to_json()
    assert fresh == first == second
    assert compsum._residue_cache is None
