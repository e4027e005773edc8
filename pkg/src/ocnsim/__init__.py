"""Strong and weak simulation preorder for one-counter nets.

The package decides point queries of the simulation preorder between
configurations of one-counter nets.  Strong simulation is settled through
slope games, belt classification and a validated ultimately-periodic
representation of the relation; weak simulation is compiled to a strong
problem against an omega-net and solved by a finite approximant iteration.
An independent bounded-game oracle cross-checks every engine.
"""

__version__ = "0.1.0"

from .nets import (                                           # noqa: F401
    OMEGA,
    OCN,
    OMEGA_NET,
    GUARDED_OMEGA_NET,
    Config,
    NetDescription,
    NetError,
    Path,
    ProductGraph,
    ProductPath,
    ReservedSymbolError,
    Transition,
    enabled_steps,
    is_complete,
    is_non_blocking,
    lasso_split,
    make_net,
    normalize_pair,
    path_effect,
    path_guard,
    product_graph,
    weak_steps,
)
from .geometry import (                                       # noqa: F401
    Direction,
    behind,
    c_above,
    c_below,
    direction,
    steeper,
    subsumes,
)
from .slopegame import (                                      # noqa: F401
    SlopeGameResult,
    SlopeGameSolver,
    evaluate_lasso,
    solve_slope_game,
)
from .belts import (                                          # noqa: F401
    BeltSpec,
    StrongEngine,
    compute_C,
    compute_belt,
    compute_suff,
    decide_strong,
    extract_periodic,
)
from .certificates import (                                   # noqa: F401
    GridCertificate,
    PlaneColoring,
    RepresentationSet,
    check_yes_certificate,
)
from .oracle import (                                         # noqa: F401
    OPTIMISTIC_MODE,
    PESSIMISTIC_MODE,
    BoundaryMode,
    GridVerdict,
    belt_resolved,
    bounded_game_verdict,
    sandwich_decide,
    spoiler_wins_within,
    weak_spoiler_wins_within,
)
from .reduction import (                                      # noqa: F401
    ExpansionParams,
    SilentPathSummary,
    build_guarded_omega,
    normalize_effects,
    reduce_weak,
    silent_direct_paths,
)
from .approximants import (                                   # noqa: F401
    ApproxNets,
    ApproximantCapError,
    TestChainSpec,
    build_Sk,
    build_test_chain,
    decide_weak,
    iterate_approximants,
)
from .fileformat import ParseError, parse_net, serialize_net  # noqa: F401
from .verdicts import Budget, Verdict                         # noqa: F401
