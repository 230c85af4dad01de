from dataclasses import dataclass

from graph_core.utils.graph import VertexSet


@dataclass(frozen=True)
class DensestSubgraph(object):

    vertices: VertexSet
    density: float

    # Set when every weight is zero and any single vertex is optimal
    all_zero: bool = False

    @property
    def size(self) -> int:
        return len(self.vertices)
