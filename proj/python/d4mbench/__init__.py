# Copyright 2026 The d4mbench Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python access to the d4mbench core."""

from ._d4mbench import (
    AssocArray,
    BenchmarkConfig,
    D4mError,
    StoreConfig,
    TableId,
    TabletStore,
    __version__,
    apply_row_offset,
    compute_global_splits,
    degree_slope,
    fit_power_law_slope,
    generate,
    run_benchmark,
    run_cli,
)

__all__ = [
    "AssocArray",
    "BenchmarkConfig",
    "D4mError",
    "StoreConfig",
    "TableId",
    "TabletStore",
    "__version__",
    "apply_row_offset",
    "compute_global_splits",
    "degree_slope",
    "fit_power_law_slope",
    "generate",
    "run_benchmark",
    "run_cli",
]
