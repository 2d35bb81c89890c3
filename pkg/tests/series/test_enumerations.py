"""
Тесты градуированных нумераций мультииндексов.
"""

import itertools

import pytest

from src.core.exceptions import DimensionError, EnumerationError
from src.series.enumerations import (
    CUSTOM,
    GRADED,
    RECTANGULAR,
    SPHERICAL,
    Enumeration,
    grading,
    make_enumeration,
)


def _brute_force(scheme: str, d: int, bound: int):
    """Сортировка куба [0, bound]^d по (градуировка, лексикографический)."""
    cube = itertools.product(range(bound + 1), repeat=d)
    limit = bound * bound if scheme == SPHERICAL else bound
    kept = [a for a in cube if grading(scheme, a) <= limit]
    return sorted(kept, key=lambda a: (grading(scheme, a), a))


@pytest.mark.unit
class TestMultiOfIndex:
    """Прямое отображение j ↦ N_j."""

    def test_graded_first_elements(self):
        e = make_enumeration(GRADED, 2)
        assert e.multi_of_index(0) == (0, 0)
        assert e.multi_of_index(1) == (0, 1)
        assert e.multi_of_index(2) == (1, 0)

    def test_spherical(self):
        e = make_enumeration(SPHERICAL, 2)
        assert [e.grading(e.multi_of_index(j)) for j in range(4)] == [0, 1, 1, 2]
        assert e.multi_of_index(3) == (1, 1)

    def test_negative_index(self):
        with pytest.raises(EnumerationError):
            make_enumeration(GRADED, 1).multi_of_index(-1)

    @pytest.mark.parametrize("scheme", [RECTANGULAR, SPHERICAL, GRADED])
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_matches_brute_force_sort(self, scheme, d):
        expected = _brute_force(scheme, d, 4)
        e = make_enumeration(scheme, d)
        assert e.multis_upto(len(expected)) == expected


@pytest.mark.unit
class TestIndexOfMulti:
    """Обратное отображение и биективность."""

    def test_graded_origin(self):
        assert make_enumeration(GRADED, 2).index_of_multi((0, 0)) == 0

    def test_rectangular(self):
        assert make_enumeration(RECTANGULAR, 2).index_of_multi((1, 1)) == 3

    @pytest.mark.parametrize("scheme", [RECTANGULAR, SPHERICAL, GRADED])
    def test_bijection_on_prefix(self, scheme):
        e = make_enumeration(scheme, 2)
        multis = e.multis_upto(300)
        assert len(set(multis)) == 300
        for j, a in enumerate(multis):
            assert e.index_of_multi(a) == j

    def test_large_multi_grows_table(self):
        e = make_enumeration(GRADED, 1)
        assert e.index_of_multi((40,)) == 40
        assert e.multi_of_index(100) == (100,)

    def test_wrong_length(self):
        with pytest.raises(DimensionError):
            make_enumeration(GRADED, 2).index_of_multi((1,))

    def test_negative_exponent(self):
        with pytest.raises(EnumerationError):
            make_enumeration(GRADED, 2).index_of_multi((1, -1))


@pytest.mark.unit
class TestBlocks:
    """Блоки одинаковой градуировки."""

    def test_graded_ranges(self):
        e = make_enumeration(GRADED, 2)
        assert e.block_range(0) == (0, 0)
        assert e.block_range(1) == (1, 2)

    def test_rectangular_range(self):
        assert make_enumeration(RECTANGULAR, 2).block_range(1) == (1, 3)

    def test_empty_spherical_block(self):
        e = make_enumeration(SPHERICAL, 1)
        assert e.block_range(2) is None
        assert e.block_range(4) == (2, 2)

    def test_prefix_support_closes_blocks(self):
        e = make_enumeration(GRADED, 2)
        support = e.prefix_support(2)
        assert len(support) == 6
        assert all(sum(a) <= 2 for a in support)
        assert e.prefix_end(-1) == -1

    @pytest.mark.parametrize(
        "scheme, expected", [(RECTANGULAR, 6), (GRADED, 6), (SPHERICAL, 3)]
    )
    def test_min_power_exceeding_block(self, scheme, expected):
        e = make_enumeration(scheme, 2)
        assert e.min_power_exceeding_block(1, 5) == expected

    @pytest.mark.parametrize("scheme", [RECTANGULAR, SPHERICAL, GRADED])
    def test_min_power_is_tight(self, scheme):
        e = make_enumeration(scheme, 2)
        m = e.min_power_exceeding_block(2, 7)
        assert e.grading((0, m)) > 7
        assert e.grading((0, m - 1)) <= 7

    def test_min_power_axis_range(self):
        with pytest.raises(DimensionError):
            make_enumeration(GRADED, 2).min_power_exceeding_block(3, 1)


@pytest.mark.unit
class TestCustomEnumeration:
    """Явный префикс с продолжением базовой схемой."""

    def setup_method(self):
        self.enumeration = make_enumeration(CUSTOM, 2, [(1, 0), (0, 0), (0, 1)], GRADED)

    def test_prefix_then_fallback(self):
        e = self.enumeration
        assert e.multis_upto(4) == [(1, 0), (0, 0), (0, 1), (0, 2)]
        assert e.index_of_multi((0, 0)) == 1
        assert e.index_of_multi((0, 2)) == 3

    def test_prefix_forms_one_block(self):
        e = self.enumeration
        assert e.grading((0, 0)) == 1
        assert e.block_range(1) == (0, 2)
        assert e.block_range(0) is None

    def test_name_and_descriptor(self):
        e = self.enumeration
        assert e.name == "custom/graded"
        assert Enumeration.from_descriptor(e.describe()) == e

    def test_prefix_must_cover_whole_blocks(self):
        with pytest.raises(EnumerationError):
            make_enumeration(CUSTOM, 2, [(0, 0), (0, 1)], GRADED)

    def test_duplicates_rejected(self):
        with pytest.raises(EnumerationError):
            make_enumeration(CUSTOM, 1, [(0,), (0,)], GRADED)

    def test_empty_prefix_rejected(self):
        with pytest.raises(EnumerationError):
            make_enumeration(CUSTOM, 1, [], GRADED)

    def test_prefix_only_for_custom(self):
        with pytest.raises(EnumerationError):
            Enumeration(1, GRADED, prefix=((0,),))


@pytest.mark.unit
class TestMakeEnumeration:
    """Создание нумерации по имени."""

    def test_unknown_scheme(self):
        with pytest.raises(EnumerationError):
            make_enumeration("sperical", 2)

    def test_name_is_normalized(self):
        assert make_enumeration(" Graded ", 1).scheme == GRADED

    def test_invalid_dimension(self):
        with pytest.raises(DimensionError):
            make_enumeration(GRADED, 0)


@pytest.mark.slow
class TestLongPrefix:
    """Свойства нумераций на первых 10^5 индексах."""

    COUNT = 100_000

    @pytest.mark.parametrize("scheme", [RECTANGULAR, SPHERICAL, GRADED])
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_prefix_properties(self, scheme, d):
        e = make_enumeration(scheme, d)
        multis = e.multis_upto(self.COUNT)
        assert len(set(multis)) == self.COUNT
        assert all(e.index_of_multi(a) == j for j, a in enumerate(multis))

        grades = [e.grading(a) for a in multis]
        assert all(g <= h for g, h in zip(grades, grades[1:]))

        # блоки: непрерывные диапазоны; последний блок префикса может быть неполным
        bounds = {}
        for j, g in enumerate(grades):
            start, _ = bounds.get(g, (j, j))
            bounds[g] = (start, j)
        del bounds[grades[-1]]
        assert all(e.block_range(g) == span for g, span in bounds.items())

        powers = {}
        for a, g in zip(multis, grades):
            for axis in range(1, d + 1):
                if (axis, g) not in powers:
                    powers[axis, g] = e.min_power_exceeding_block(axis, g)
                assert a[axis - 1] < powers[axis, g]
