from bellprocess.logging_utils import configure_logging
from bellprocess.verify import run_suite
from cli.utils import build_system, load_experiment, make_context
import sys

configure_logging("WARNING")


def run_for_seeds(config_path, first_seed, last_seed):
    """Run one experiment for every seed in [first_seed, last_seed] and tally failures per check."""
    config = load_experiment(config_path)
    system, packet = build_system(config.model, config.model_params, t0=config.ensemble.t0)
    failures = {check.value: 0 for check in config.checks}
    for seed in range(first_seed, last_seed + 1):
        seeded = config.model_copy(update={"sampler": config.sampler.model_copy(update={"seed": seed})})
        ctx = make_context(seeded, system, packet)
        report = run_suite(ctx, list(failures), config.model.value, str(config_path))
        for check in report.failed():
            failures[check.name] += 1
        print(f"seed {seed}: {'pass' if report.passed else 'FAIL ' + ', '.join(c.name for c in report.failed())}")
    runs = last_seed - first_seed + 1
    for name, count in failures.items():
        print(f"{name:>20}: {count}/{runs} failed")


if __name__ == "__main__":
    if len(sys.argv) != 4:
        print("Usage: python eval_seeds.py <CONFIG> <FIRST_SEED> <LAST_SEED>")
        print("Example: python eval_seeds.py config/rabi.json 0 9")
        sys.exit(1)
    run_for_seeds(sys.argv[1], int(sys.argv[2]), int(sys.argv[3]))
