import asyncio
import logging
import time
from typing import Dict, List, Optional, Sequence, Union

import networkx as nx

from app.config import settings
from app.core.catalog import group_from_name, identify
from app.core.extensions import Extension
from app.core.factor_systems import schreier_enumerate_async
from app.core.groups import FiniteGroup
from app.core.outer import kappa_maps, same_outer_action
from app.core.sections import split_locus_check
from app.core.torsor import build_class_set, verify_simply_transitive_async
from app.errors import ViolationFound
from app.schemas import ClassificationReport, OuterClassReport

logger = logging.getLogger(__name__)

GroupLike = Union[str, FiniteGroup]


def resolve_group(g: GroupLike) -> FiniteGroup:
    return group_from_name(g) if isinstance(g, str) else g


def group_label(G: FiniteGroup) -> str:
    return G.name or identify(G) or f"order {G.order}"


def extension_label(index: int, E: Extension) -> str:
    return f"E{index} [{identify(E.total) or '?'}]"


def outer_partition(extensions: Sequence[Extension]) -> List[List[int]]:
    """Components of the same-outer-action graph; every component must be a clique."""
    graph = nx.Graph()
    graph.add_nodes_from(range(len(extensions)))
    for i in range(len(extensions)):
        for j in range(i + 1, len(extensions)):
            if same_outer_action(extensions[i], extensions[j]) is not None:
                graph.add_edge(i, j)

    parts = sorted(sorted(c) for c in nx.connected_components(graph))
    for part in parts:
        n = len(part)
        if graph.subgraph(part).number_of_edges() != n * (n - 1) // 2:
            raise ViolationFound("same outer action is not transitive", counterexample={"component": part})
        kappas = {kappa_maps(extensions[i]) for i in part}
        if len(kappas) != 1:
            raise ViolationFound("an outer class mixes classical outer actions", counterexample={"component": part})
    if len({kappa_maps(extensions[p[0]]) for p in parts}) != len(parts):
        raise ViolationFound("two outer classes share a classical outer action")
    return parts


async def classify(g: GroupLike, h: GroupLike, bound: Optional[int] = None, timing: Optional[bool] = None) -> ClassificationReport:
    """Enumerate, partition by outer action, and verify the torsor and split-locus statements."""
    G, H = resolve_group(g), resolve_group(h)
    bound = settings.default_bound if bound is None else bound
    timings: Dict[str, float] = {}

    start = time.perf_counter()
    extensions = await schreier_enumerate_async(G, H, bound)
    timings["enumerate"] = time.perf_counter() - start

    start = time.perf_counter()
    parts = await asyncio.to_thread(outer_partition, extensions)
    timings["partition"] = time.perf_counter() - start

    start = time.perf_counter()
    classes: List[OuterClassReport] = []
    for part in parts:
        base = extensions[part[0]]
        S = await asyncio.to_thread(build_class_set, base, [extensions[i] for i in part])
        torsor = await verify_simply_transitive_async(S)
        split = await asyncio.to_thread(split_locus_check, S)
        labels = [extension_label(extensions.index(E), E) for E in S.members]
        classes.append(
            OuterClassReport(
                kappa=[list(m) for m in kappa_maps(base)],
                members=labels,
                zgroup_order=torsor.zgroup_order,
                torsor_verified=torsor.free and torsor.transitive and torsor.well_defined,
                split_members=[labels[i] for i in split.split_members],
                delta_image=[labels[i] for i in split.delta_image],
                witness_counts=S.witness_counts,
            )
        )
    timings["verify"] = time.perf_counter() - start

    report_timing = settings.report_timing if timing is None else timing
    logger.info("classified %d extensions of %s by %s into %d outer classes", len(extensions), G, H, len(classes))
    return ClassificationReport(
        pair=(group_label(G), group_label(H)),
        bound=bound,
        extension_count=len(extensions),
        outer_classes=classes,
        timing={k: round(v, 4) for k, v in timings.items()} if report_timing else None,
    )
