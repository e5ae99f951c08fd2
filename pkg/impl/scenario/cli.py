"""Command-line interface: `python . <command> [--config FILE] [--preset NAME] [--seed N] [--out DIR]`.

Exit codes: 0 success, 1 usage/config/IO error, 2 a tap did not converge, 3 an invariant was violated.
"""

from typing import List, Optional
import sys
import configargparse
import utils
import mailer
from impl.filtering import InvariantError
from . import runner
from .config import load_config, with_overrides, get_preset_names


DEFAULT_PRESETS = {'sweep': 'paper-fig1', 'demo-paper': 'paper-exp1'}
DEMO_OUTPUT_DIR = 'results/paper-demo'


class CliArgumentParser(configargparse.ArgumentParser):
    """Argument parser reporting usage errors with exit code 1 (2 is reserved for non-convergence)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(runner.EXIT_CONFIG, f'{self.prog}: error: {message}\n')


def get_parser() -> CliArgumentParser:
    parser = CliArgumentParser(description='Simulate a mixed-signal FIR filter with memristive tap weights.')
    commands = parser.add_subparsers(dest='command', required=True, metavar='command')
    for name, help_text in [
        ('sweep', 'Write quasi-DC voltage and current sweeps of a device (I-V loop family).'),
        ('tune', 'Program the tap devices and write the write-verify traces.'),
        ('run', 'Run a complete scenario: tuning, filtering, metrics and responses.'),
        ('freqresp', 'Program the taps and write the analytic and measured frequency responses.'),
        ('demo-paper', 'Run the averaging and the three-tap configuration and compare them.'),
    ]:
        command = commands.add_parser(name, help=help_text, description=help_text)
        command.add_argument('-c', '--config', type=str, help='Path to a scenario file (YAML)')
        command.add_argument('-p', '--preset', type=str, choices=get_preset_names(), help='Built-in scenario preset')
        command.add_argument('-s', '--seed', type=int, help='Master seed of all random streams')
        command.add_argument('-o', '--out', type=str, help='Output directory')
        command.add_argument('--cpus', type=int, default=1, env_var='MEMFIR_CPUS', help='Number of processes used for tuning')
    return parser


def run_command(args) -> runner.ScenarioResult:
    if args.command == 'demo-paper':
        cfg_exp1 = with_overrides(load_config(args.config, args.preset or 'paper-exp1'), seed=args.seed)
        cfg_exp2 = with_overrides(load_config(args.config, 'paper-exp2'), seed=args.seed)
        return runner.run_demo(cfg_exp1, cfg_exp2, args.out or DEMO_OUTPUT_DIR, args.cpus)
    cfg = with_overrides(load_config(args.config, args.preset or DEFAULT_PRESETS.get(args.command)), args.seed, args.out)
    if args.command == 'sweep':
        return runner.run_sweeps(cfg)
    if args.command == 'tune':
        return runner.run_tuning(cfg, args.cpus)
    if args.command == 'freqresp':
        return runner.run_frequency_response(cfg, args.cpus)
    return runner.run_scenario(cfg, args.cpus)


def main(argv: Optional[List[str]] = None, notify: bool = False) -> int:
    args = get_parser().parse_args(argv)
    try:
        result = run_command(args)
    except InvariantError as e:
        utils.get_logger().error(f'Invariant violated: {e}')
        return runner.EXIT_INVARIANT
    except (ValueError, OSError) as e:  # configuration, parameter and IO errors
        utils.get_logger().error(f'{type(e).__name__}: {e}')
        return runner.EXIT_CONFIG
    for key, val in result.metrics.items():
        utils.get_logger().info(f'{key}={val}')
    if notify:
        mailer.send_success(f'Finished `{args.command}` with status {result.status}.', result.metrics)
    return result.status
