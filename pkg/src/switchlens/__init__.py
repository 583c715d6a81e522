"""switchlens: task-interruption analytics and decision support.

Replays developer task-event logs through an interruption state machine,
mines disruptiveness and resumption-cue patterns from them, and serves
narrative guidance for the stages before, during, and after an
interruption.
"""

from .cue_mining import (
    DEFAULT_CUE_ORDER,
    CueGraph,
    CueSequenceRule,
    CueSession,
    CueType,
    CueVisit,
    build_graph,
    mine_sequences,
    recommend_order,
)
from .narrative import (
    Lexicon,
    NarrativeRule,
    UnknownVocabularyItem,
    default_lexicon,
    render_cue_sequence,
    render_disruptiveness,
)
from .pattern_mining import (
    AssociationRule,
    CharacteristicItem,
    Discretization,
    DisruptivenessItem,
    EmptyInput,
    Level,
    Measure,
    MiningParams,
    MiningRecord,
    RawInterruptionRecord,
    derive_rules,
    discretize,
    filter_by_type,
    mine,
    mine_frequent,
    mine_records,
    support,
)
from .task_model import (
    DisruptivenessMeasures,
    EventKind,
    Granularity,
    IllegalTransition,
    IncompleteTrace,
    Initiator,
    NonMonotonicTimestamp,
    Phase,
    ProgressStatus,
    TaskDescriptor,
    TaskEvent,
    TaskModelError,
    TaskState,
    TaskTrace,
    TaskType,
    TerminalState,
    apply_event,
    derive_measures,
    detect_trap,
    replay,
)

__version__ = "0.1.0"
