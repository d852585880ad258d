"""Main CLI entrypoint for self-supervised surrogate fitting."""
import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from bench.sobol_g import SobolSpec, g_function_moments, make_sobol_dataset, paper_u
from config import CSV, SOBOL, ExperimentConfig
from core.dataset import SplitDataset, split_dataset
from core.errors import DataError
from services.pipeline_service import PipelineService, evaluate, predict
from storage.csv_store import load_csv, load_points, save_csv, save_predictions
from storage.model_store import load_model, save_model
from storage.report_store import load_reports, save_plot_csv, save_reports
from utils.logger import SurrogateLogger

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class CliParser(argparse.ArgumentParser):
    """ArgumentParser reporting usage errors with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(value: str) -> list[float]:
    try:
        return [float(part) for part in value.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {value!r}") from None


def build_parser() -> CliParser:
    parser = CliParser(
        prog="surrogate",
        description="KPCA + sparse random feature surrogates tuned by particle swarm",
    )
    parser.add_argument("--log-dir", type=str, help="Directory for log files (console only when omitted)")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    gen = commands.add_parser("gen-sobol", help="Write Sobol G-function train/val/test CSVs")
    gen.add_argument("--dim", type=int, required=True, help="Input dimension")
    u_group = gen.add_mutually_exclusive_group(required=True)
    u_group.add_argument("--paper-u", action="store_true", help="Use u = (1, 2, 5, 20, 50, 100, 500, 500, ...)")
    u_group.add_argument("--u", type=_float_list, help="Comma-separated G-function coefficients")
    gen.add_argument("--train", type=int, required=True, help="Training points")
    gen.add_argument("--val", type=int, required=True, help="Validation points")
    gen.add_argument("--test", type=int, required=True, help="Test points")
    gen.add_argument("--skip", type=int, default=1, help="Leading Sobol points to discard (default: 1)")
    gen.add_argument("--out-dir", type=str, default=".", help="Output directory (default: .)")

    fit = commands.add_parser("fit", help="Fit a surrogate from an experiment config file")
    fit.add_argument("--config", type=str, required=True, help="Experiment config file (KEY=value)")
    fit.add_argument("--seed", type=int, help="Override SEED from the config file")
    fit.add_argument("--model", type=str, help="Override MODEL_PATH")
    fit.add_argument("--report", type=str, help="Override REPORT_PATH")

    pred = commands.add_parser("predict", help="Predict responses for the points of a CSV")
    pred.add_argument("--model", type=str, required=True, help="Model file")
    pred.add_argument("--input", type=str, required=True, help="CSV of input points")
    pred.add_argument("--output", type=str, required=True, help="CSV to write predictions to")

    ev = commands.add_parser("evaluate", help="Relative error of a model on a CSV dataset")
    ev.add_argument("--model", type=str, required=True, help="Model file")
    ev.add_argument("--data", type=str, required=True, help="CSV dataset with a y column")

    rep = commands.add_parser("report", help="Plot-ready CSV of validation error against k")
    rep.add_argument("--reports", type=str, required=True, help="Report file written by fit")
    rep.add_argument("--output", type=str, required=True, help="CSV to write")

    return parser


def load_experiment_data(experiment: ExperimentConfig) -> SplitDataset:
    """Build train/validation/test data from the configured source."""
    source = experiment.data
    if source.kind == SOBOL:
        return make_sobol_dataset(source.sobol)
    if source.kind == CSV:
        return SplitDataset(
            train=load_csv(source.train_csv),
            validation=load_csv(source.val_csv),
            test=load_csv(source.test_csv) if source.test_csv else None,
        )
    n_train, n_val, n_test = source.split
    return split_dataset(load_csv(source.data_csv), n_train, n_val, n_test, experiment.seed)


def cmd_gen_sobol(args, logger: SurrogateLogger) -> int:
    u = paper_u(args.dim) if args.paper_u else args.u
    spec = SobolSpec(dim=args.dim, u=u, n_train=args.train, n_val=args.val, n_test=args.test, skip=args.skip)
    data = make_sobol_dataset(spec)

    out_dir = Path(args.out_dir)
    for name, part in (("train", data.train), ("val", data.validation), ("test", data.test)):
        path = save_csv(part, out_dir / f"{name}.csv")
        logger.log_info(f"Wrote {part.n_points} points to {path}")

    moments = g_function_moments(spec.u)
    logger.log_info(f"G-function Mean={moments.mean} | Variance={moments.variance:.6g}")
    return EXIT_OK


def cmd_fit(args, logger: SurrogateLogger, experiment: ExperimentConfig) -> int:
    model_path = Path(args.model) if args.model else experiment.output.model_path
    report_path = Path(args.report) if args.report else experiment.output.report_path

    logger.log_info("=" * 60)
    logger.log_info("Surrogate Fit Starting")
    logger.log_info(f"Seed: {experiment.seed} | Dims: {list(experiment.pipeline.dims)} | Source: {experiment.data.kind}")
    logger.log_info("=" * 60)

    data = load_experiment_data(experiment)
    result = PipelineService(experiment.pipeline, logger).run(data)

    save_model(result.surrogate, model_path, config_hash=experiment.config_hash(), seed=experiment.seed)
    save_reports(
        result.reports,
        report_path,
        selected_k=result.surrogate.k_star,
        evaluations=result.evaluations,
        grid=result.grid,
    )

    logger.log_info("=" * 60)
    logger.log_info("Fit Summary")
    logger.log_info("=" * 60)
    logger.log_info(f"Selected k: {result.surrogate.k_star}")
    for split, report in result.evaluations.items():
        logger.log_info(f"{split} error: {report.error:.6g} ({report.n_points} points)")
    failed = [r.k for r in result.reports if r.failed]
    if failed:
        logger.log_warning(f"Dimensions without a surrogate: {failed}")
    logger.log_info(f"Model: {model_path}")
    logger.log_info(f"Reports: {report_path}")
    return EXIT_OK


def cmd_predict(args, logger: SurrogateLogger) -> int:
    model = load_model(args.model)
    points, names = load_points(args.input)
    values = predict(model, points)
    path = save_predictions(points, values, args.output, names)
    logger.log_info(f"Wrote {len(values)} predictions to {path}")
    return EXIT_OK


def cmd_evaluate(args, logger: SurrogateLogger) -> int:
    model = load_model(args.model)
    report = evaluate(model, load_csv(args.data))
    print(f"EVAL Error={report.error:.17g} | NPoints={report.n_points} | SampleMean={report.sample_mean:.17g}")
    logger.log_evaluation(Path(args.data).name, report.error, report.n_points)
    return EXIT_OK


def cmd_report(args, logger: SurrogateLogger) -> int:
    reports = load_reports(args.reports)
    path = save_plot_csv(reports, args.output)
    logger.log_info(f"Wrote {len(reports)} rows to {path}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (None, 0) else EXIT_USAGE

    # Load configuration (treat only this as "configuration error")
    experiment = None
    if args.command == "fit":
        try:
            experiment = ExperimentConfig.from_file(args.config)
            if args.seed is not None:
                experiment = experiment.with_seed(args.seed)
        except ValueError as e:
            print(f"Configuration error: {e}", file=sys.stderr)
            return EXIT_USAGE

    log_dir = args.log_dir
    if log_dir is None and experiment is not None:
        log_dir = experiment.output.log_dir
    logger = SurrogateLogger(log_dir=log_dir)

    try:
        if args.command == "gen-sobol":
            return cmd_gen_sobol(args, logger)
        if args.command == "fit":
            return cmd_fit(args, logger, experiment)
        if args.command == "predict":
            return cmd_predict(args, logger)
        if args.command == "evaluate":
            return cmd_evaluate(args, logger)
        return cmd_report(args, logger)
    except DataError as e:
        logger.log_error(f"{type(e).__name__}: {e}")
        print(f"Data error ({type(e).__name__}): {e}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as e:
        print(f"Usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.log_error(f"Unexpected {type(e).__name__}: {e}", exc_info=True)
        print(f"Fatal error ({type(e).__name__}): {e}", file=sys.stderr)
        return EXIT_DATA
    finally:
        logger.close()


if __name__ == "__main__":
    sys.exit(main())
