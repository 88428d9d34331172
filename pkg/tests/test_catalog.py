from unittest.mock import patch

import pytest

from app.core.catalog import catalog_names, group_from_name, identify, order_of, quaternion
from app.core.groups import center
from app.errors import UnknownGroup


def test_orders_from_names():
    assert order_of("C2") == 2
    assert order_of("S3xC2") == 12
    assert order_of("Q8") == 8
    assert order_of("D4") == 8
    assert order_of("C2xC2xC2") == 8


def test_group_from_name_builds_products():
    G = group_from_name("C2xC2")
    assert G.order == 4
    assert G.is_abelian
    assert G.name == "C2xC2"
    assert not group_from_name("S3xC2").is_abelian


def test_unknown_names_are_rejected():
    with pytest.raises(UnknownGroup):
        group_from_name("X7")
    with pytest.raises(UnknownGroup):
        order_of("C2x")


def test_catalog_order_limit():
    """Names above catalog_max_order are refused."""
    with patch("app.core.catalog.settings") as mock_settings:
        mock_settings.catalog_max_order = 4
        with pytest.raises(UnknownGroup):
            group_from_name("C9xC2")


def test_quaternion_has_one_involution():
    Q8 = quaternion()
    assert sum(1 for x in Q8.elements() if Q8.orders[x] == 2) == 1
    assert center(Q8).order == 2


def test_identify_small_groups():
    assert identify(group_from_name("C2xC2")) == "V4"
    assert identify(group_from_name("C4xC2")) == "C2xC4"
    assert identify(quaternion()) == "Q8"
    assert identify(group_from_name("D4")) == "D4"


def test_catalog_names_are_parseable():
    for name in catalog_names():
        assert order_of(name) >= 1
    assert "C1" in catalog_names()
