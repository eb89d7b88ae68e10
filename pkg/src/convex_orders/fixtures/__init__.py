"""Worked A2^(1) examples shipped as JSON payloads."""
import json
from importlib import resources

NAMES = ("sec3-one-row", "sec3-two-row", "sec7-rows", "sec7-order")


def load_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(NAMES)}")
    return resources.files(__name__).joinpath(name + ".json").read_text()


def load(name: str):
    """(cartan, RowParam or OrderSpec) for a named fixture."""
    from ..cartan import build_cartan
    from ..chains import RowParam
    from ..orders import OrderSpec

    data = json.loads(load_text(name))
    c = build_cartan(data["type"], int(data["rank"]))
    cls = OrderSpec if data["kind"] == "order" else RowParam
    return c, cls.from_json(c, data)
