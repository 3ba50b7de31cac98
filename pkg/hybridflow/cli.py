import argparse
import os
import sys

from hybridflow import utils
from hybridflow.config import RunConfig, case_from_config, parse_config
from hybridflow.errors import DivergenceError, HybridFlowError, NonConvergenceError, ParseError
from hybridflow.metrics import extract_metrics, fixture_set, tolerance_bands
from hybridflow.metrics.suite import evaluate, format_report, run_case, run_suite
from hybridflow.outputs import write_outputs

EXIT_OK, EXIT_USAGE, EXIT_DIVERGED, EXIT_BAND = 0, 1, 2, 3


def build_parser():
    parser = argparse.ArgumentParser(prog='hybridflow', description='Hybrid LBM / FVM / Monte Carlo cavity solvers')
    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help='solve one configured case and write its outputs')
    run.add_argument('config', help='section.key = value configuration file')
    run.add_argument('--output', default=None, help='output directory, overrides output.directory')

    suite = sub.add_parser('suite', help='run a fixture set and compare with its reference values')
    suite.add_argument('fixtures', help='paper_tables, lid, convection, mcm, conduction or smoke')
    suite.add_argument('--config', default=None, help='solver settings shared by every case')
    suite.add_argument('--output', default=None, help='directory for suite_report.txt')

    validate = sub.add_parser('validate', help='check a configuration file without running it')
    validate.add_argument('config')
    return parser


def load_config(path) -> RunConfig:
    with open(path, encoding='utf-8') as f:
        return parse_config(f.read())


def cmd_run(args):
    cfg = load_config(args.config)
    utils.setup_wandb(cfg)
    case = case_from_config(cfg)
    directory = args.output or cfg.output.directory
    try:
        mf = run_case(case, cfg)
    except (DivergenceError, NonConvergenceError) as err:
        print(f"{case.label()} diverged: {err}", file=sys.stderr)
        field = getattr(err, 'field', None)
        if field is not None:
            write_outputs(field, {}, cfg, case, diverged=True, directory=directory)
        return EXIT_DIVERGED
    metrics = extract_metrics(case, mf)
    records = fixture_set('paper_tables', tolerance_bands(cfg.tolerance)).records
    outcomes = evaluate(records, case.key, case.method, metrics)
    write_outputs(mf, metrics, cfg, case, outcomes, directory=directory)
    for name, value in metrics.items():
        print(f"{name} = {value:.6g}")
    return EXIT_OK


def cmd_suite(args):
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.config:
        utils.setup_wandb(cfg)
    fixtures = fixture_set(args.fixtures, tolerance_bands(cfg.tolerance))
    report = run_suite(fixtures.cases, fixtures.records, cfg)
    text = format_report(report)
    print(text, end='')
    if args.output:
        utils.create_folders(args.output)
        with open(os.path.join(args.output, 'suite_report.txt'), 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
    return report.exit_status


def cmd_validate(args):
    cfg = load_config(args.config)
    print(f"{args.config}: valid {case_from_config(cfg).label()}")
    return EXIT_OK


COMMANDS = {'run': cmd_run, 'suite': cmd_suite, 'validate': cmd_validate}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_OK if err.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except ParseError as err:
        for lineno, message in err.diagnostics:
            print(f"{getattr(args, 'config', '')}:{lineno}: {message}", file=sys.stderr)
        return EXIT_USAGE
    except (HybridFlowError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


def entry():
    sys.exit(main())


if __name__ == '__main__':
    entry()
