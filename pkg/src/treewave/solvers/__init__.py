from .ode import CauchyPair, schrodinger_transfer, edge_matrix
from .sideways import sideways_wave, march_edge, Front
from .timedomain import td_wave_solve, TraceBundle, TreeGrid

__all__ = ["CauchyPair", "schrodinger_transfer", "edge_matrix", "sideways_wave",
           "march_edge", "Front", "td_wave_solve", "TraceBundle", "TreeGrid"]
