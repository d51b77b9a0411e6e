import pytest

from labskit.core import brute_force_optimum
from labskit.optima import (
    UnknownOptimumError,
    known_optimum_energy,
    load_known_optima,
    resolve_target,
)


class TestTable:
    def test_covers_full_range(self):
        table = load_known_optima()
        assert set(table) == set(range(2, 67))

    def test_provenance_tags(self):
        table = load_known_optima()
        for n, entry in table.items():
            assert entry["source"] in ("brute_forced", "external")
            if entry["source"] == "brute_forced":
                assert n <= 20

    @pytest.mark.parametrize("n", range(2, 21))
    def test_brute_forced_entries_rederived(self, n):
        assert known_optimum_energy(n) == brute_force_optimum(n).optimal_energy

    def test_unknown_length(self):
        with pytest.raises(UnknownOptimumError):
            known_optimum_energy(67)


class TestResolveTarget:
    def test_explicit_target_wins(self):
        assert resolve_target(10, target=99) == 99

    def test_table_lookup(self):
        assert resolve_target(10) == 13
        assert resolve_target(30) == 59

    def test_auto_brute_force(self):
        # force the brute-force path by bypassing the table
        import labskit.optima as optima

        table = dict(load_known_optima())
        removed = table.pop(5)
        optima._cache = table
        try:
            assert resolve_target(5, auto=True) == 2
            with pytest.raises(UnknownOptimumError):
                resolve_target(5, auto=False)
        finally:
            table[5] = removed
            optima._cache = None

    def test_no_source_available(self):
        with pytest.raises(UnknownOptimumError):
            resolve_target(80, auto=True)
