"""Three-way causal attribute partial order structures (3WCAPOS)."""

from .cart import CartNode, CartTree, build_cart, gini, predict_cart
from .causal import (
    CausalScore,
    NodeScope,
    causal_factor,
    conditional_prob,
    interventional_prob,
    normalized_causality,
    rank_attributes,
)
from .context import (
    BinarizationMap,
    FormalDecisionContext,
    RawColumn,
    RawDataset,
    Rule,
    Schema,
    binarize_continuous,
    binarize_discrete,
    build_context,
    parse_dataset,
)
from .errors import CaposError, DegenerateDataError, InputError
from .evaluate import EvalReport, loocv, loocv_compare, metrics
from .export import export_dot, export_json, load_json
from .kernels import BACKEND
from .structure import (
    BuildParams,
    Prediction,
    Region,
    Structure,
    StructureNode,
    build_structure,
    classify_region,
    predict,
    select_split,
    split,
)

__version__ = "0.1.0"
