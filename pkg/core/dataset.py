"""Dataset containers and the deterministic train/validation/test split."""
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from core.errors import DimensionMismatch, InsufficientData, LengthMismatch, NonFiniteInput


@dataclass(frozen=True, eq=False)
class Dataset:
    """Experimental design points paired with model responses."""
    points: np.ndarray  # (n, d)
    responses: np.ndarray  # (n,)
    column_names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        points = np.array(self.points, dtype=float, ndmin=2)
        responses = np.array(self.responses, dtype=float).reshape(-1)

        if points.shape[0] != responses.shape[0]:
            raise LengthMismatch(
                f"{points.shape[0]} points but {responses.shape[0]} responses"
            )
        if points.shape[0] < 1 or points.shape[1] < 1:
            raise InsufficientData("Dataset needs at least one point of dimension >= 1")
        if not (np.all(np.isfinite(points)) and np.all(np.isfinite(responses))):
            raise NonFiniteInput("Dataset contains NaN or Inf entries")
        if self.column_names is not None and len(self.column_names) != points.shape[1]:
            raise DimensionMismatch(
                f"{len(self.column_names)} column names for dimension {points.shape[1]}"
            )

        points.setflags(write=False)
        responses.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "responses", responses)
        if self.column_names is not None:
            object.__setattr__(self, "column_names", tuple(self.column_names))

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def subset(self, indices: Sequence[int]) -> "Dataset":
        """Return the rows at `indices` (in the given order)."""
        idx = np.asarray(indices, dtype=int)
        return Dataset(self.points[idx], self.responses[idx], self.column_names)


@dataclass(frozen=True, eq=False)
class SplitDataset:
    """Disjoint train/validation/test parts of one parent dataset."""
    train: Dataset
    validation: Dataset
    test: Optional[Dataset] = None
    # Parent row indices of each part; empty when the split was built contiguously
    indices: dict = field(default_factory=dict, compare=False)

    @property
    def dim(self) -> int:
        return self.train.dim


def split_dataset(
    data: Dataset, n_train: int, n_val: int, n_test: int, seed: int
) -> SplitDataset:
    """
    Shuffle `data` under `seed` and assign contiguous blocks to train/val/test.

    Points left over after the three blocks are dropped.

    Raises:
        InsufficientData: if any count is < 1 or the counts exceed the dataset size
    """
    counts = (n_train, n_val, n_test)
    if min(counts) < 1:
        raise InsufficientData(f"Every split count must be >= 1, got {counts}")
    total = sum(counts)
    if total > data.n_points:
        raise InsufficientData(
            f"Requested {total} points ({n_train}+{n_val}+{n_test}) from a dataset of {data.n_points}"
        )

    rng = np.random.default_rng(seed)
    order = rng.permutation(data.n_points)

    train_idx = order[:n_train]
    val_idx = order[n_train:n_train + n_val]
    test_idx = order[n_train + n_val:total]

    return SplitDataset(
        train=data.subset(train_idx),
        validation=data.subset(val_idx),
        test=data.subset(test_idx),
        indices={"train": train_idx, "validation": val_idx, "test": test_idx},
    )
