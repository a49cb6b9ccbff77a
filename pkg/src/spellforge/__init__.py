"""spellforge: prompt-to-spell compilation and deterministic duels."""

from .binding import EffectConfig, EffectInstance, TriggerBinding, TriggerKind, bind
from .config import EngineConfig, default_config, load_config, save_config
from .core import (
    Behavior,
    EffectsMatrix,
    RangeSequence,
    RawPrediction,
    ResolvedStatuses,
    SpellSpec,
    SpellType,
    SpellTypeRegistry,
    Stat,
    StatusVector,
    spec_from_json,
    spec_to_json,
    validate_raw_prediction,
    validate_spec,
)
from .dataset import (
    DistributionReport,
    Example,
    TemplateGrammar,
    default_grammar,
    generate,
    read_jsonl,
    split,
    stats,
    write_jsonl,
)
from .forge import ForgedSpell, ForgeValidationError, forge
from .paramize import CostConfig, compute_cost, resolve_color, resolve_status
from .sim import Arena, ArenaConfig, DuelResult, SimEvent, run_duel, trace_to_jsonl
from .textmodel import (
    BackendError,
    BuiltinBackend,
    LinearSpellModel,
    PredictionValidationError,
    evaluate,
    extract_features,
    load_model,
    predict,
    save_model,
    spawn_external_backend,
    train,
)

__version__ = "0.1.0"
