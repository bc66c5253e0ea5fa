import pytest

from filtersort.model import AttributeDecl, Catalog


@pytest.fixture
def books():
    """Price/rating catalog; x7 is the unique cheapest item rated 3 or more."""
    rows = {
        "x1": ("12", "4"),
        "x2": ("9", "2"),
        "x3": ("15", "5"),
        "x4": ("8", "1"),
        "x5": ("11", "3"),
        "x6": ("10", "4"),
        "x7": ("7.5", "3"),
        "x8": ("7.5", "2"),
    }
    return Catalog.build(
        [AttributeDecl("price"), AttributeDecl("rating")],
        {k: {"price": p, "rating": r} for k, (p, r) in rows.items()},
    )


@pytest.fixture
def houses():
    rows = {
        "h1": ("1800", "3", "2"),
        "h2": ("2500", "4", "0.5"),
        "h3": ("1500", "2", "0.8"),
        "h4": ("1900", "2", "3"),
    }
    return Catalog.build(
        [AttributeDecl("price"), AttributeDecl("bedrooms"), AttributeDecl("distance")],
        {k: {"price": p, "bedrooms": b, "distance": d} for k, (p, b, d) in rows.items()},
    )


@pytest.fixture
def disks():
    rows = {
        "d1": ("60", "4", "500000000", "Seagate"),
        "d2": ("45", "5", "250000000", "Toshiba"),
        "d3": ("80", "5", "2000000000", "Samsung"),
        "d4": ("55", "5", "1000000000", "Seagate"),
        "d5": ("50", "4", "4000000000", "Toshiba"),
        "d6": ("55", "5", "1000000000", "Samsung"),
    }
    return Catalog.build(
        [
            AttributeDecl("price"),
            AttributeDecl("rating"),
            AttributeDecl("capacity"),
            AttributeDecl("brand", "ordinal", ("Samsung", "Seagate", "Toshiba")),
        ],
        {k: {"price": p, "rating": r, "capacity": c, "brand": b} for k, (p, r, c, b) in rows.items()},
    )
