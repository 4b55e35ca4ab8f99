"""All-pairs vitality maximisation (VIMAX): evaluation, search and export."""

__version__ = "0.1.0"

from vimax.errors import (  # noqa: E402
    DataIntegrityError,
    ParseError,
    SizeLimitError,
    UnsupportedStructureError,
    ValidationError,
    VimaxError,
)
from vimax.flow import (  # noqa: E402
    FlowResult,
    GomoryHuTree,
    flow_capacity,
    gomory_hu,
    instance_vitality,
    max_flow,
    pair_vitality,
    vitality,
    vitality_effect,
)
from vimax.generators import betweenness, gen_gnm, gen_grid, load_drug_network  # noqa: E402
from vimax.graph import Graph, Instance, parse_instance, remove_vertices, write_instance  # noqa: E402
from vimax.mip import build_mip, import_solution, write_lp  # noqa: E402
from vimax.preprocess import SimplifiedInstance, candidates, q_set, simplify  # noqa: E402
from vimax.reduction import (  # noqa: E402
    CnfFormula,
    ReductionInstance,
    assignment_subset,
    check_reduction,
    reduce_3sat,
)
from vimax.solvers import (  # noqa: E402
    SAParams,
    Solution,
    anneal,
    initial_temperature,
    local_search,
    solve_exact,
    solve_single,
)
