"""Configuration and result records for training and the two search phases."""

from dataclasses import dataclass, field

from ..arch import ArchitectureSpec, CostReport
from ..augment import AugmentConfig, IDENTITY


@dataclass
class TrainConfig:
    batch_size: int = 128
    max_epochs: int = 500
    patience: int = 10
    initial_lr: float = 0.001
    lr_factor: float = 0.1
    min_delta: float = 0.0001
    seed: int = 0
    augment: AugmentConfig = field(default_factory=lambda: IDENTITY)

    def __post_init__(self):
        if min(self.batch_size, self.max_epochs, self.patience) < 1:
            raise ValueError("batch_size, max_epochs and patience must be >= 1")
        if self.initial_lr <= 0 or self.min_delta < 0:
            raise ValueError("initial_lr must be positive, min_delta non-negative")
        if not 0.0 < self.lr_factor < 1.0:
            raise ValueError("lr_factor must be in (0, 1)")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass
class EpochRecord:
    """State after one epoch; learning_rate is the value in force once the
    end-of-epoch plateau check has run (i.e. what the next epoch would use)."""

    epoch: int  # 1-based
    train_loss: float
    val_error: float  # mean error, degrees
    learning_rate: float


@dataclass
class TrainHistory:
    records: list = field(default_factory=list)
    stop_reason: str = ""  # "max_epochs" | "patience" | "diverged"

    @property
    def best_val_error(self):
        return min(r.val_error for r in self.records)

    @property
    def n_epochs(self):
        return len(self.records)


@dataclass(frozen=True)
class EvalReport:
    """Per-angle mean absolute errors in degrees and their mean."""

    mae_tilt: float
    mae_pan: float

    @property
    def mean_error(self):
        return (self.mae_tilt + self.mae_pan) / 2.0


@dataclass
class SearchResult:
    """One completed grid cell."""

    spec: ArchitectureSpec
    augment: AugmentConfig
    eval: EvalReport
    cost: CostReport
    epochs: int
    stop_reason: str
    seed: int
