"""Self-optimizing synthesis of tabular boolean PLC programs.

An evolutionary loop evolves table-encoded boolean control programs against a
discrete-time digital twin of a three-sensor liquid tank station, scores them
on transport, energy, and code-structure objectives, and decodes the best
candidates to IEC-style structured text and instruction lists.
"""

from .genome import (
    BoolOp,
    DecodeError,
    GenomeBounds,
    GenomeRow,
    Individual,
    InputSignal,
    Literal,
    Mode,
    Operator,
    OutputSignal,
    RungExpression,
    Violation,
    decode,
    effective_row_count,
    encode_rungs,
    individual_from_json,
    random_individual,
    reference_controller,
    rows_to_json,
    validate,
)
from .plant import (
    EpisodeError,
    EpisodeSummary,
    InputSegment,
    PlantParams,
    PlantState,
    ScanTrace,
    Scenario,
    default_scenario,
    initial_state,
    read_sensors,
    run_episode,
    scenario_from_toml,
    step,
    write_trace_csv,
)
from .evaluate import (
    ConstraintSet,
    FitnessParams,
    NumericalError,
    ObjectiveVector,
    default_fitness_params,
    dominates,
    feasible,
    fitness,
    objectives,
    pareto_front,
)
from .evolution import (
    ConfigError,
    Direction,
    EmptyPopulation,
    EvaluatedIndividual,
    EvolutionConfig,
    EvolutionResult,
    GenerationStats,
    PAMode,
    Population,
    evolve,
    mutate,
    recombine,
    select,
)
from .codegen import (
    BehaviorSummary,
    StructuredTextProgram,
    canonical_order,
    derive_behavior_summary,
    emit_instruction_list,
    emit_structured_text,
    parse_structured_text,
    resolve_priority,
    simplify,
)
from .experiment import (
    IoError,
    PlantEvaluator,
    RunConfig,
    RunReport,
    SpaceTooLarge,
    compare,
    count_genome_space,
    enumerate_oracle,
    iter_genome_space,
    load_run_config,
    run,
)

__version__ = "0.1.0"
