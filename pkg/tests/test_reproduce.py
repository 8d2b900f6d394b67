import pytest

from pframe.reproduce import GROUPS, census_85, complex_energies, design_parameters, real_energies, reproduce


@pytest.mark.parametrize("runner", [real_energies, complex_energies, census_85, design_parameters])
def test_quick_groups_pass(runner):
    cells = runner()
    assert cells
    failed = [c for c in cells if c.passed is False]
    assert not failed, [c.to_json() for c in failed]


def test_skips_are_explained():
    for c in complex_energies() + design_parameters():
        if c.passed is None:
            assert c.note.startswith("skipped")


def test_unknown_group():
    with pytest.raises(ValueError):
        reproduce(["no-such-group"])


def test_group_names():
    assert set(GROUPS) == {"real-energies", "complex-energies", "census-85", "lp-comparison", "lp-bounds",
                           "design-parameters"}
