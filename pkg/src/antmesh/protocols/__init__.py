"""Protocol registry keyed by scenario name."""

from __future__ import annotations


def make_protocol(name: str, sim):
    if name == "antnet":
        from .antnet import AntNet
        return AntNet(sim)
    if name == "anthocnet":
        from .anthocnet import AntHocNet
        return AntHocNet(sim)
    if name == "ara":
        from .ara import Ara
        return Ara(sim)
    if name == "paconet":
        from .paconet import Paconet
        return Paconet(sim)
    if name == "aodv":
        from .aodv import Aodv
        return Aodv(sim)
    if name == "antaodv":
        from .aodv import AntAodv
        return AntAodv(sim)
    raise ValueError(f"unknown protocol {name!r}")
