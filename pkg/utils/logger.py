"""Structured logging for surrogate fitting runs."""
import logging
from datetime import datetime
from pathlib import Path
from typing import Optional


class SurrogateLogger:
    """Structured logger for pipeline operations."""

    def __init__(self, log_dir: Optional[str] = "logs", level: int = logging.INFO):
        """
        Initialize logger with console and (optionally) file handlers.

        Args:
            log_dir: Directory for log files; None logs to the console only
            level: Logging level for both handlers
        """
        self.logger = logging.getLogger("surrogate")
        self.logger.setLevel(level)

        # Remove existing handlers to avoid duplicates
        self.logger.handlers.clear()

        console_handler = logging.StreamHandler()
        console_handler.setLevel(level)
        console_handler.setFormatter(logging.Formatter(
            "%(asctime)s [%(levelname)s] %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S"
        ))
        self.logger.addHandler(console_handler)

        self.log_dir = Path(log_dir) if log_dir else None
        if self.log_dir is not None:
            self.log_dir.mkdir(parents=True, exist_ok=True)
            log_file = self.log_dir / f"surrogate_{datetime.now().strftime('%Y%m%d')}.log"
            file_handler = logging.FileHandler(log_file, encoding="utf-8")
            file_handler.setLevel(level)
            file_handler.setFormatter(logging.Formatter(
                "%(asctime)s [%(levelname)s] %(name)s: %(message)s",
                datefmt="%Y-%m-%d %H:%M:%S"
            ))
            self.logger.addHandler(file_handler)

    def close(self):
        """Flush and detach all handlers."""
        for handler in list(self.logger.handlers):
            handler.close()
            self.logger.removeHandler(handler)

    def log_dimension_start(self, k: int, n_particles: int, n_iterations: int, n_features: int):
        """Log start of a latent-dimension fit."""
        self.logger.info(
            f"DIM_START K={k} | Particles={n_particles} | Iterations={n_iterations} | Features={n_features}"
        )

    def log_iteration(self, k: int, iteration: int, gbest_loss: float, phase: str, n_failed: int = 0):
        """Log swarm progress after one iteration."""
        failed_str = f" | Failed={n_failed}" if n_failed else ""
        self.logger.info(
            f"ITERATION K={k} | Iter={iteration} | Phase={phase} | GBest={gbest_loss:.6g}{failed_str}"
        )

    def log_phase_switch(self, k: int, iteration: int):
        """Log the one-way ridge -> LASSO switch."""
        self.logger.info(f"PHASE_SWITCH K={k} | Iter={iteration} | From=ridge | To=lasso")

    def log_particle_failure(self, k: int, iteration: int, particle: int, error: str):
        """Log a particle whose loss evaluation failed."""
        self.logger.warning(
            f"PARTICLE_FAILED K={k} | Iter={iteration} | Particle={particle} | Error={error}"
        )

    def log_dimension_complete(
        self,
        k: int,
        val_error: float,
        switch_iteration: Optional[int],
        iterations: int,
        nnz: int,
    ):
        """Log completion of a latent-dimension fit."""
        switch_str = "none" if switch_iteration is None else str(switch_iteration)
        self.logger.info(
            f"DIM_COMPLETE K={k} | ValError={val_error:.6g} | Switch={switch_str} | "
            f"Iterations={iterations} | NNZ={nnz}"
        )

    def log_dimension_failed(self, k: int, error: str):
        """Log a latent dimension that produced no surrogate."""
        self.logger.error(f"DIM_FAILED K={k} | Error={error}")

    def log_selection(self, k: int, val_error: float, n_features: int, q: int):
        """Log the selected composite surrogate."""
        self.logger.info(
            f"SELECTED K={k} | ValError={val_error:.6g} | Features={n_features} | Q={q}"
        )

    def log_evaluation(self, split: str, error: float, n_points: int):
        """Log the relative error of a fitted surrogate on one data split."""
        self.logger.info(f"EVALUATION Split={split} | Error={error:.6g} | Points={n_points}")

    def log_error(self, message: str, exc_info: bool = False):
        """Log general error."""
        self.logger.error(message, exc_info=exc_info)

    def log_warning(self, message: str):
        """Log warning."""
        self.logger.warning(message)

    def log_info(self, message: str):
        """Log info message."""
        self.logger.info(message)

    def log_debug(self, message: str):
        """Log debug message."""
        self.logger.debug(message)
