"""Sign/amplitude correlation networks of currency exchange rates.

Pipeline: :mod:`ingestion` (rates, rebasing) -> :mod:`signals` (log-returns,
clipping, sign/amplitude split) -> :mod:`netcore` (correlation, distance,
MST) -> :mod:`metrics` / :mod:`rolling` -> :mod:`export`.
"""
from .errors import *  # noqa: F401,F403
from .ingestion import (AlignReport, CrossRatePanel, MissingMode, MissingPolicy, RatePanel, Schema,
                        align_calendar, load_schema, parse_rate_panel, read_rate_panel, rebase,
                        serialize_panel)
from .metrics import (PathLengthMode, TopologyReport, characteristic_path_length, node_degrees,
                      topology_report, tree_distances, weighted_clustering)
from .netcore import (CorrelationMatrix, DistanceMatrix, Edge, SpanningTree, WeightMatrix, build_mst,
                      correlation_matrix, distance_matrix, network, weight_matrix)
from .rolling import MetricSeries, TrendFit, WindowSpec, linear_trend, rolling_metrics
from .signals import (ClipPolicy, ReturnPanel, SignalBundle, SignalKind, clip_outliers, decompose,
                      log_returns, prepare_signals, select_signal)

__version__ = "0.1.0"
