"""Bundled instances."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .complex import VeeringComplex, cyclic_cover, parse_complex, validate


class UnknownDataset(KeyError):
    pass


def _fig8() -> VeeringComplex:
    text = resources.files(__package__).joinpath("data/fig8.json").read_text(encoding="utf-8")
    return parse_complex(text)


def _fig8_cover2() -> VeeringComplex:
    base = _fig8()
    cover = cyclic_cover(base, 2, base.fiber_cocycle or {})
    report = validate(cover)
    if not report.ok:
        raise AssertionError(f"generated cover fails validation: {[f.check for f in report.failures]}")
    return cover


_BUILDERS = {"fig8": _fig8, "fig8-cover2": _fig8_cover2}


def bundled_datasets() -> list[str]:
    return list(_BUILDERS)


@lru_cache(maxsize=None)
def load_dataset(name: str) -> VeeringComplex:
    if name.startswith("data/"):
        name = name[len("data/"):]
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise UnknownDataset(name) from None
